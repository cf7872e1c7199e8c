#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rydholo/qcore.hpp"

namespace rydholo {

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double first_step = 0.0;  // 0 = auto
};

class StiffnessError : public std::runtime_error {
 public:
  StiffnessError(double t_fail, const std::string& what)
      : std::runtime_error(what), t(t_fail) {}
  double t;
};

// Writes H(t) into `out` (preallocated to the register dimension).
using HamiltonianFn = std::function<void(double, Mat&)>;

struct CollapseSet {
  std::vector<Mat> ops;

  // L_j^k = sqrt(gamma/2) |k>_j <r| for k in {0,1} over every dim-3 subsystem.
  static CollapseSet rydberg_decay(const Register& reg, double gamma);
};

class Trajectory {
 public:
  Trajectory(Register reg, bool open_system) : reg_(std::move(reg)), open_(open_system) {}

  const Register& reg() const { return reg_; }
  bool open_system() const { return open_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Vec>& pure_states() const { return pure_; }
  const std::vector<Mat>& density_states() const { return dens_; }
  const QuantumState final_state() const;
  const Mat& final_density() const { return dens_.back(); }

  void append(double t, Vec psi) { times_.push_back(t); pure_.push_back(std::move(psi)); }
  void append(double t, Mat rho) { times_.push_back(t); dens_.push_back(std::move(rho)); }

  void record_observable(const std::string& name, std::vector<double> series);
  const std::vector<std::pair<std::string, std::vector<double>>>& observables() const {
    return obs_;
  }

 private:
  Register reg_;
  bool open_;
  std::vector<double> times_;
  std::vector<Vec> pure_;
  std::vector<Mat> dens_;
  std::vector<std::pair<std::string, std::vector<double>>> obs_;
};

Trajectory evolve_schrodinger(const HamiltonianFn& h, const QuantumState& psi0,
                              double t0, double t1, int sample_count,
                              const IntegratorOptions& opts = {});

Trajectory evolve_lindblad(const HamiltonianFn& h, const CollapseSet& collapse,
                           const DensityMatrix& rho0, double t0, double t1,
                           int sample_count, const IntegratorOptions& opts = {});

// Propagator over [t0, t1] by integrating the full basis (closed system).
Mat propagator(const HamiltonianFn& h, int dim, double t0, double t1,
               const IntegratorOptions& opts = {});

// Diagonal populations for the given ket labels, appended to the trajectory's
// observable list and returned.
std::vector<std::pair<std::string, std::vector<double>>> populations(
    const Trajectory& traj, const std::vector<std::string>& labels);

// Low-level adaptive Dormand-Prince 5(4) step loop on a complex vector ODE.
// rhs(t, y, dydt); integrates y in place from t0 to t1.
void integrate_ode(const std::function<void(double, const Vec&, Vec&)>& rhs, Vec& y,
                   double t0, double t1, const IntegratorOptions& opts);

}  // namespace rydholo
