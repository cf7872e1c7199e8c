#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace rydholo {

using cxd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

constexpr int LEVEL_0 = 0;
constexpr int LEVEL_1 = 1;
constexpr int LEVEL_R = 2;

/// An ordered list of subsystem dimensions. Subsystem 0 is the leftmost
/// factor in ket notation, so |xy> has index x*dim(1)+y.
class Register {
 public:
  Register() = default;
  explicit Register(std::vector<int> dims);

  int subsystems() const { return static_cast<int>(dims_.size()); }
  int dim(int i) const { return dims_.at(i); }
  int total_dim() const { return total_; }
  const std::vector<int>& dims() const { return dims_; }

  int pack(const std::vector<int>& levels) const;
  std::vector<int> unpack(int index) const;

  // Basis index from a ket string, one character per subsystem.
  // '0','1','r' for three-level atoms; '0'/'g' and '1'/'r' for two-level ones.
  int basis_index(std::string_view label) const;

  bool operator==(const Register& o) const { return dims_ == o.dims_; }
  bool operator!=(const Register& o) const { return dims_ != o.dims_; }

 private:
  std::vector<int> dims_;
  int total_ = 1;
};

class QuantumState {
 public:
  QuantumState(Register reg, Vec amplitudes);
  static QuantumState basis(const Register& reg, std::string_view label);

  const Register& reg() const { return reg_; }
  const Vec& amplitudes() const { return amp_; }
  cxd amplitude(std::string_view label) const;
  double norm() const { return amp_.norm(); }
  QuantumState normalized() const;

 private:
  Register reg_;
  Vec amp_;
};

class DensityMatrix {
 public:
  DensityMatrix(Register reg, Mat matrix);
  static DensityMatrix from_pure(const QuantumState& psi);

  const Register& reg() const { return reg_; }
  const Mat& matrix() const { return mat_; }
  double trace() const { return mat_.trace().real(); }

 private:
  Register reg_;
  Mat mat_;
};

class OperatorMatrix {
 public:
  OperatorMatrix(Register reg, Mat matrix);
  static OperatorMatrix identity(const Register& reg);
  // Asserts Hermiticity within 1e-12 relative; used by Hamiltonian builders.
  static OperatorMatrix hermitian(Register reg, Mat matrix);

  const Register& reg() const { return reg_; }
  const Mat& matrix() const { return mat_; }

 private:
  Register reg_;
  Mat mat_;
};

QuantumState tensor(const QuantumState& a, const QuantumState& b);
OperatorMatrix tensor(const OperatorMatrix& a, const OperatorMatrix& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// Trace out every subsystem not listed in `keep`; kept subsystems stay in
// their original relative order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Lift an operator acting on the subsystems listed in `where` (in that order)
// to the full register.
OperatorMatrix embed(const OperatorMatrix& op, const Register& full,
                     const std::vector<int>& where);

struct MeasureOutcome {
  int outcome = 0;
  double probability = 0.0;
  QuantumState post_state;
};

// Projective measurement of one subsystem in the given orthonormal basis.
MeasureOutcome measure_projective(const QuantumState& psi, int subsystem,
                                  const std::vector<Vec>& basis,
                                  std::mt19937_64& rng);
MeasureOutcome measure_projective_forced(const QuantumState& psi, int subsystem,
                                         const std::vector<Vec>& basis,
                                         int forced_outcome);

// Branch probabilities for each basis element, without collapsing.
std::vector<double> measurement_probabilities(const QuantumState& psi, int subsystem,
                                              const std::vector<Vec>& basis);

std::vector<Vec> computational_basis(int dim);

}  // namespace rydholo
