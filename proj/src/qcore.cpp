#include "rydholo/qcore.hpp"

#include <algorithm>
#include <stdexcept>

namespace rydholo {

namespace {

int level_from_char(char c, int dim) {
  switch (c) {
    case '0': return 0;
    case '1': return 1;
    case 'r': return dim == 2 ? 1 : 2;
    case 'g': return 0;
    default: throw std::invalid_argument(std::string("bad level character '") + c + "'");
  }
}

}  // namespace

Register::Register(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("register needs at least one subsystem");
  for (int d : dims_) {
    if (d < 2) throw std::invalid_argument("subsystem dimension must be >= 2");
    total_ *= d;
  }
}

int Register::pack(const std::vector<int>& levels) const {
  if (static_cast<int>(levels.size()) != subsystems())
    throw std::invalid_argument("level count does not match register");
  int idx = 0;
  for (int i = 0; i < subsystems(); ++i) {
    if (levels[i] < 0 || levels[i] >= dims_[i])
      throw std::invalid_argument("level out of range");
    idx = idx * dims_[i] + levels[i];
  }
  return idx;
}

std::vector<int> Register::unpack(int index) const {
  if (index < 0 || index >= total_) throw std::invalid_argument("index out of range");
  std::vector<int> levels(subsystems());
  for (int i = subsystems() - 1; i >= 0; --i) {
    levels[i] = index % dims_[i];
    index /= dims_[i];
  }
  return levels;
}

int Register::basis_index(std::string_view label) const {
  if (static_cast<int>(label.size()) != subsystems())
    throw std::invalid_argument("ket label '" + std::string(label) +
                                "' does not match register size");
  std::vector<int> levels(subsystems());
  for (int i = 0; i < subsystems(); ++i) levels[i] = level_from_char(label[i], dims_[i]);
  return pack(levels);
}

QuantumState::QuantumState(Register reg, Vec amplitudes)
    : reg_(std::move(reg)), amp_(std::move(amplitudes)) {
  if (amp_.size() != reg_.total_dim())
    throw std::invalid_argument("amplitude vector does not match register dimension");
  if (std::abs(amp_.norm() - 1.0) > 1e-12) {
    double n = amp_.norm();
    if (n < 1e-14) throw std::invalid_argument("cannot normalize zero state");
    amp_ /= n;
  }
}

QuantumState QuantumState::basis(const Register& reg, std::string_view label) {
  Vec v = Vec::Zero(reg.total_dim());
  v(reg.basis_index(label)) = 1.0;
  return QuantumState(reg, std::move(v));
}

cxd QuantumState::amplitude(std::string_view label) const {
  return amp_(reg_.basis_index(label));
}

QuantumState QuantumState::normalized() const {
  return QuantumState(reg_, amp_ / amp_.norm());
}

DensityMatrix::DensityMatrix(Register reg, Mat matrix)
    : reg_(std::move(reg)), mat_(std::move(matrix)) {
  int n = reg_.total_dim();
  if (mat_.rows() != n || mat_.cols() != n)
    throw std::invalid_argument("density matrix does not match register dimension");
  if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(mat_.trace().real() - 1.0) > 1e-8 || std::abs(mat_.trace().imag()) > 1e-10)
    throw std::invalid_argument("density matrix trace is not 1");
}

DensityMatrix DensityMatrix::from_pure(const QuantumState& psi) {
  return DensityMatrix(psi.reg(), psi.amplitudes() * psi.amplitudes().adjoint());
}

OperatorMatrix::OperatorMatrix(Register reg, Mat matrix)
    : reg_(std::move(reg)), mat_(std::move(matrix)) {
  int n = reg_.total_dim();
  if (mat_.rows() != n || mat_.cols() != n)
    throw std::invalid_argument("operator does not match register dimension");
}

OperatorMatrix OperatorMatrix::identity(const Register& reg) {
  return OperatorMatrix(reg, Mat::Identity(reg.total_dim(), reg.total_dim()));
}

OperatorMatrix OperatorMatrix::hermitian(Register reg, Mat matrix) {
  double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("matrix is not Hermitian");
  return OperatorMatrix(std::move(reg), std::move(matrix));
}

namespace {

Register concat(const Register& a, const Register& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return Register(std::move(dims));
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

QuantumState tensor(const QuantumState& a, const QuantumState& b) {
  Vec out(a.amplitudes().size() * b.amplitudes().size());
  for (int i = 0; i < a.amplitudes().size(); ++i)
    out.segment(i * b.amplitudes().size(), b.amplitudes().size()) =
        a.amplitudes()(i) * b.amplitudes();
  return QuantumState(concat(a.reg(), b.reg()), std::move(out));
}

OperatorMatrix tensor(const OperatorMatrix& a, const OperatorMatrix& b) {
  return OperatorMatrix(concat(a.reg(), b.reg()), kron(a.matrix(), b.matrix()));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(concat(a.reg(), b.reg()), kron(a.matrix(), b.matrix()));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const Register& reg = rho.reg();
  if (keep.empty()) throw std::invalid_argument("keep set must be nonempty");
  std::vector<bool> kept(reg.subsystems(), false);
  for (int k : keep) {
    if (k < 0 || k >= reg.subsystems()) throw std::invalid_argument("keep index out of range");
    if (kept[k]) throw std::invalid_argument("duplicate keep index");
    kept[k] = true;
  }
  std::vector<int> keep_sorted, traced;
  std::vector<int> kdims, tdims;
  for (int i = 0; i < reg.subsystems(); ++i) {
    if (kept[i]) { keep_sorted.push_back(i); kdims.push_back(reg.dim(i)); }
    else { traced.push_back(i); tdims.push_back(reg.dim(i)); }
  }
  int kd = 1, td = 1;
  for (int d : kdims) kd *= d;
  for (int d : tdims) td *= d;

  Mat out = Mat::Zero(kd, kd);
  std::vector<int> levels(reg.subsystems(), 0), levels2(reg.subsystems(), 0);
  for (int ki = 0; ki < kd; ++ki) {
    for (int kj = 0; kj < kd; ++kj) {
      // decompose ki/kj over kept subsystems
      int tmp = ki;
      for (int s = static_cast<int>(keep_sorted.size()) - 1; s >= 0; --s) {
        levels[keep_sorted[s]] = tmp % kdims[s];
        tmp /= kdims[s];
      }
      tmp = kj;
      for (int s = static_cast<int>(keep_sorted.size()) - 1; s >= 0; --s) {
        levels2[keep_sorted[s]] = tmp % kdims[s];
        tmp /= kdims[s];
      }
      cxd acc = 0.0;
      for (int t = 0; t < td; ++t) {
        int tt = t;
        for (int s = static_cast<int>(traced.size()) - 1; s >= 0; --s) {
          levels[traced[s]] = tt % tdims[s];
          levels2[traced[s]] = levels[traced[s]];
          tt /= tdims[s];
        }
        acc += rho.matrix()(reg.pack(levels), reg.pack(levels2));
      }
      out(ki, kj) = acc;
    }
  }
  return DensityMatrix(Register(kdims), std::move(out));
}

OperatorMatrix embed(const OperatorMatrix& op, const Register& full,
                     const std::vector<int>& where) {
  if (static_cast<int>(where.size()) != op.reg().subsystems())
    throw std::invalid_argument("embed: position count does not match operator register");
  std::vector<bool> used(full.subsystems(), false);
  for (size_t s = 0; s < where.size(); ++s) {
    int w = where[s];
    if (w < 0 || w >= full.subsystems()) throw std::invalid_argument("embed: position out of range");
    if (used[w]) throw std::invalid_argument("embed: duplicate position");
    if (full.dim(w) != op.reg().dim(static_cast<int>(s)))
      throw std::invalid_argument("embed: dimension mismatch");
    used[w] = true;
  }
  int n = full.total_dim();
  int m = op.reg().total_dim();
  Mat out = Mat::Zero(n, n);
  // iterate over full-basis columns; for each, loop over operator rows
  std::vector<int> levels(full.subsystems());
  std::vector<int> oplev(where.size());
  for (int col = 0; col < n; ++col) {
    std::vector<int> base = full.unpack(col);
    for (size_t s = 0; s < where.size(); ++s) oplev[s] = base[where[s]];
    int opcol = op.reg().pack(oplev);
    for (int oprow = 0; oprow < m; ++oprow) {
      cxd v = op.matrix()(oprow, opcol);
      if (v == cxd(0.0)) continue;
      std::vector<int> rl = op.reg().unpack(oprow);
      levels = base;
      for (size_t s = 0; s < where.size(); ++s) levels[where[s]] = rl[s];
      out(full.pack(levels), col) += v;
    }
  }
  return OperatorMatrix(full, std::move(out));
}

namespace {

void check_basis(const std::vector<Vec>& basis, int dim) {
  if (static_cast<int>(basis.size()) != dim)
    throw std::invalid_argument("measurement basis must be complete");
  for (int i = 0; i < dim; ++i) {
    if (basis[i].size() != dim) throw std::invalid_argument("basis vector dimension mismatch");
    for (int j = 0; j <= i; ++j) {
      cxd ip = basis[j].adjoint() * basis[i];
      double want = (i == j) ? 1.0 : 0.0;
      if (std::abs(ip - want) > 1e-10)
        throw std::invalid_argument("measurement basis is not orthonormal");
    }
  }
}

// Project subsystem onto basis[k]; returns unnormalized branch.
Vec project_branch(const QuantumState& psi, int subsystem, const Vec& bvec) {
  const Register& reg = psi.reg();
  int d = reg.dim(subsystem);
  int stride = 1;
  for (int i = subsystem + 1; i < reg.subsystems(); ++i) stride *= reg.dim(i);
  int n = reg.total_dim();
  Vec out = Vec::Zero(n);
  // overlap <b|psi> on the subsystem, then re-embed |b> so the register shape
  // is preserved (collapsed, not removed)
  for (int outer = 0; outer < n / (d * stride); ++outer) {
    for (int inner = 0; inner < stride; ++inner) {
      cxd amp = 0.0;
      for (int l = 0; l < d; ++l)
        amp += std::conj(bvec(l)) * psi.amplitudes()(outer * d * stride + l * stride + inner);
      for (int l = 0; l < d; ++l)
        out(outer * d * stride + l * stride + inner) = amp * bvec(l);
    }
  }
  return out;
}

}  // namespace

std::vector<double> measurement_probabilities(const QuantumState& psi, int subsystem,
                                              const std::vector<Vec>& basis) {
  if (subsystem < 0 || subsystem >= psi.reg().subsystems())
    throw std::invalid_argument("subsystem index out of range");
  check_basis(basis, psi.reg().dim(subsystem));
  std::vector<double> probs(basis.size());
  for (size_t k = 0; k < basis.size(); ++k)
    probs[k] = project_branch(psi, subsystem, basis[k]).squaredNorm();
  return probs;
}

MeasureOutcome measure_projective_forced(const QuantumState& psi, int subsystem,
                                         const std::vector<Vec>& basis,
                                         int forced_outcome) {
  if (subsystem < 0 || subsystem >= psi.reg().subsystems())
    throw std::invalid_argument("subsystem index out of range");
  check_basis(basis, psi.reg().dim(subsystem));
  if (forced_outcome < 0 || forced_outcome >= static_cast<int>(basis.size()))
    throw std::invalid_argument("forced outcome out of range");
  Vec branch = project_branch(psi, subsystem, basis[forced_outcome]);
  double p = branch.squaredNorm();
  if (p < 1e-12)
    throw std::runtime_error("forced measurement outcome has (near-)zero probability");
  return MeasureOutcome{forced_outcome, p, QuantumState(psi.reg(), branch / std::sqrt(p))};
}

MeasureOutcome measure_projective(const QuantumState& psi, int subsystem,
                                  const std::vector<Vec>& basis, std::mt19937_64& rng) {
  std::vector<double> probs = measurement_probabilities(psi, subsystem, basis);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double r = unif(rng);
  double acc = 0.0;
  int pick = static_cast<int>(probs.size()) - 1;
  for (size_t k = 0; k < probs.size(); ++k) {
    acc += probs[k];
    if (r < acc) { pick = static_cast<int>(k); break; }
  }
  Vec branch = project_branch(psi, subsystem, basis[pick]);
  double p = probs[pick];
  return MeasureOutcome{pick, p, QuantumState(psi.reg(), branch / std::sqrt(p))};
}

std::vector<Vec> computational_basis(int dim) {
  std::vector<Vec> basis(dim);
  for (int i = 0; i < dim; ++i) {
    basis[i] = Vec::Zero(dim);
    basis[i](i) = 1.0;
  }
  return basis;
}

}  // namespace rydholo
