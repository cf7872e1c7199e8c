#include "rydholo/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace rydholo {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 4th-order embedded weights
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

}  // namespace

void integrate_ode(const std::function<void(double, const Vec&, Vec&)>& rhs, Vec& y,
                   double t0, double t1, const IntegratorOptions& opts) {
  const long n = y.size();
  if (t1 == t0) return;
  if (t1 < t0) throw std::invalid_argument("integrate_ode: t1 < t0");

  Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y5(n);

  double t = t0;
  double span = t1 - t0;
  double h = opts.first_step > 0 ? opts.first_step : span / 1000.0;
  h = std::min(h, span);
  const double hmin = span * 1e-14;

  rhs(t, y, k1);
  bool k1_fresh = true;
  int consecutive_rejects = 0;

  while (t < t1) {
    if (t + h > t1) h = t1 - t;
    if (!k1_fresh) { rhs(t, y, k1); k1_fresh = true; }

    ytmp = y + h * (a21 * k1);
    rhs(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, ytmp, k6);
    y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h, y5, k7);

    // error = y5 - y4
    double err = 0.0;
    for (long i = 0; i < n; ++i) {
      cxd d4 = y(i) + h * (e1 * k1(i) + e3 * k3(i) + e4 * k4(i) + e5 * k5(i) +
                           e6 * k6(i) + e7 * k7(i));
      double sc = opts.atol + opts.rtol * std::max(std::abs(y(i)), std::abs(y5(i)));
      double e = std::abs(y5(i) - d4) / sc;
      err = std::max(err, e);
    }

    if (err <= 1.0) {
      t += h;
      y.swap(y5);
      k1.swap(k7);  // FSAL
      k1_fresh = true;
      consecutive_rejects = 0;
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      h *= std::min(5.0, std::max(0.2, fac));
    } else {
      ++consecutive_rejects;
      if (consecutive_rejects > 60 || h < hmin)
        throw StiffnessError(t, "integrator step size underflow at t=" + std::to_string(t));
      double fac = 0.9 * std::pow(err, -0.2);
      h *= std::max(0.1, fac);
      k1_fresh = true;  // k1 still valid at t
    }
  }
}

CollapseSet CollapseSet::rydberg_decay(const Register& reg, double gamma) {
  if (gamma < 0) throw std::invalid_argument("decay rate must be >= 0");
  CollapseSet set;
  if (gamma == 0.0) return set;
  Register atom({3});
  for (int j = 0; j < reg.subsystems(); ++j) {
    if (reg.dim(j) != 3) continue;
    for (int k = 0; k <= 1; ++k) {
      Mat L = Mat::Zero(3, 3);
      L(k, LEVEL_R) = std::sqrt(gamma / 2.0);
      set.ops.push_back(embed(OperatorMatrix(atom, L), reg, {j}).matrix());
    }
  }
  return set;
}

const QuantumState Trajectory::final_state() const {
  return QuantumState(reg_, pure_.back());
}

void Trajectory::record_observable(const std::string& name, std::vector<double> series) {
  obs_.emplace_back(name, std::move(series));
}

Trajectory evolve_schrodinger(const HamiltonianFn& h, const QuantumState& psi0,
                              double t0, double t1, int sample_count,
                              const IntegratorOptions& opts) {
  if (sample_count < 2) throw std::invalid_argument("need at least 2 samples");
  const int n = psi0.reg().total_dim();
  Mat H(n, n);
  auto rhs = [&](double t, const Vec& y, Vec& dydt) {
    h(t, H);
    dydt.noalias() = cxd(0, -1) * (H * y);
  };

  Trajectory traj(psi0.reg(), false);
  Vec y = psi0.amplitudes();
  traj.append(t0, y);
  for (int s = 1; s < sample_count; ++s) {
    double ta = t0 + (t1 - t0) * (s - 1) / (sample_count - 1);
    double tb = t0 + (t1 - t0) * s / (sample_count - 1);
    integrate_ode(rhs, y, ta, tb, opts);
    if (std::abs(y.norm() - 1.0) > 1e-8)
      throw std::runtime_error("norm drift exceeded 1e-8 during closed evolution");
    traj.append(tb, y);
  }
  return traj;
}

Trajectory evolve_lindblad(const HamiltonianFn& h, const CollapseSet& collapse,
                           const DensityMatrix& rho0, double t0, double t1,
                           int sample_count, const IntegratorOptions& opts) {
  if (sample_count < 2) throw std::invalid_argument("need at least 2 samples");
  const int n = rho0.reg().total_dim();
  Mat H(n, n);
  Mat LdL_sum = Mat::Zero(n, n);
  for (const Mat& L : collapse.ops) LdL_sum += L.adjoint() * L;

  Mat rho(n, n), drho(n, n), tmp(n, n);
  auto rhs = [&](double t, const Vec& y, Vec& dydt) {
    rho = Eigen::Map<const Mat>(y.data(), n, n);
    h(t, H);
    drho.noalias() = cxd(0, -1) * (H * rho);
    drho.noalias() -= cxd(0, -1) * (rho * H);
    for (const Mat& L : collapse.ops) {
      tmp.noalias() = L * rho;
      drho.noalias() += tmp * L.adjoint();
    }
    tmp.noalias() = LdL_sum * rho;
    drho -= 0.5 * tmp;
    tmp.noalias() = rho * LdL_sum;
    drho -= 0.5 * tmp;
    dydt = Eigen::Map<const Vec>(drho.data(), n * n);
  };

  Trajectory traj(rho0.reg(), true);
  Vec y = Eigen::Map<const Vec>(rho0.matrix().data(), n * n);
  traj.append(t0, rho0.matrix());
  for (int s = 1; s < sample_count; ++s) {
    double ta = t0 + (t1 - t0) * (s - 1) / (sample_count - 1);
    double tb = t0 + (t1 - t0) * s / (sample_count - 1);
    integrate_ode(rhs, y, ta, tb, opts);
    Mat r = Eigen::Map<const Mat>(y.data(), n, n);
    if (std::abs(r.trace().real() - 1.0) > 1e-8)
      throw std::runtime_error("trace drift exceeded 1e-8 during open evolution");
    // positivity is monitored rather than enforced
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (r + r.adjoint()),
                                          Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-6)
      throw std::runtime_error("density matrix positivity violated beyond 1e-6 at t=" +
                               std::to_string(tb));
    traj.append(tb, std::move(r));
  }
  return traj;
}

Mat propagator(const HamiltonianFn& h, int dim, double t0, double t1,
               const IntegratorOptions& opts) {
  Mat H(dim, dim), U(dim, dim), dU(dim, dim);
  auto rhs = [&](double t, const Vec& y, Vec& dydt) {
    U = Eigen::Map<const Mat>(y.data(), dim, dim);
    h(t, H);
    dU.noalias() = cxd(0, -1) * (H * U);
    dydt = Eigen::Map<const Vec>(dU.data(), dim * dim);
  };
  Mat id = Mat::Identity(dim, dim);
  Vec y = Eigen::Map<const Vec>(id.data(), dim * dim);
  integrate_ode(rhs, y, t0, t1, opts);
  return Eigen::Map<const Mat>(y.data(), dim, dim);
}

std::vector<std::pair<std::string, std::vector<double>>> populations(
    const Trajectory& traj, const std::vector<std::string>& labels) {
  std::vector<std::pair<std::string, std::vector<double>>> out;
  for (const std::string& label : labels) {
    int idx = traj.reg().basis_index(label);
    std::vector<double> series;
    series.reserve(traj.times().size());
    if (traj.open_system()) {
      for (const Mat& rho : traj.density_states()) series.push_back(rho(idx, idx).real());
    } else {
      for (const Vec& psi : traj.pure_states()) series.push_back(std::norm(psi(idx)));
    }
    out.emplace_back(label, std::move(series));
  }
  return out;
}

}  // namespace rydholo
