#include "rydholo/metrics.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

#include "rydholo/parallel.hpp"

namespace rydholo {

double state_fidelity(const DensityMatrix& rho, const QuantumState& psi_ideal) {
  if (rho.reg() != psi_ideal.reg())
    throw std::invalid_argument("state_fidelity: register mismatch");
  cxd f = psi_ideal.amplitudes().adjoint() * rho.matrix() * psi_ideal.amplitudes();
  return f.real();
}

GateModel::GateModel(SystemConfig config, GateParams params, int schedule_samples)
    : config_(std::move(config)),
      params_(params),
      schedule_(PulseSchedule::make(params, schedule_samples)) {
  config_.validate();
}

DriveFn GateModel::drive_fn() const {
  SystemConfig cfg = config_;
  PulseSchedule sched = schedule_;
  double e1 = eps1, e2 = eps2;
  bool phys = scale_physical_drives;
  return [cfg, sched, e1, e2, phys](double t) -> DriveSample {
    EffectiveDrives s = sched.drive_slots(t);
    cxd o21 = -cfg.delta1 * s.on_10 / cfg.omega11_peak;
    cxd o22 = -cfg.delta1 * s.on_11 / cfg.omega11_peak;
    if (phys) {
      o21 *= (1.0 + e1);
      o22 *= (1.0 + e2);
    } else {
      // errors defined on the effective drives; the physical map is linear
      o22 *= (1.0 + e1);
      o21 *= (1.0 + e2);
    }
    return {cfg.omega11_peak, o21, o22};
  };
}

HamiltonianFn GateModel::full_hamiltonian() const {
  SystemConfig cfg = config_;
  DriveFn drv = drive_fn();
  Frame fr = frame;
  return [cfg, drv, fr](double t, Mat& out) {
    out = build_full_hamiltonian(cfg, drv, t, fr).matrix();
  };
}

HamiltonianFn GateModel::effective_hamiltonian() const {
  SystemConfig cfg = config_;
  PulseSchedule sched = schedule_;
  double e1 = eps1, e2 = eps2;
  EffDriveFn slots = [sched, e1, e2](double t) {
    EffectiveDrives s = sched.drive_slots(t);
    return EffectiveDrives{s.on_11 * (1.0 + e1), s.on_10 * (1.0 + e2)};
  };
  return [cfg, slots](double t, Mat& out) {
    out = build_effective_hamiltonian(cfg, slots, t).matrix();
  };
}

HamiltonianFn GateModel::ideal_effective_hamiltonian() const {
  SystemConfig cfg = config_;
  cfg.stark_terms = false;
  cfg.V = solve_antiblockade_V(cfg);  // zero detuning by construction
  PulseSchedule sched = schedule_;
  EffDriveFn slots = [sched](double t) { return sched.drive_slots(t); };
  return [cfg, slots](double t, Mat& out) {
    out = build_effective_hamiltonian(cfg, slots, t).matrix();
  };
}

CollapseSet GateModel::collapse() const {
  return CollapseSet::rydberg_decay(two_atom_register(), config_.gamma_decay);
}

Mat GateModel::endpoint_dressing(double t) const {
  if (!dressed_endpoints) return Mat::Identity(9, 9);
  Mat K = micromotion_kick(config_, drive_fn(), t).matrix();
  return (cxd(0, 1) * K).exp();
}

DensityMatrix GateModel::run_open(const QuantumState& psi0) const {
  Mat W0 = endpoint_dressing(0.0);
  Vec in = W0 * psi0.amplitudes();
  DensityMatrix rho0(psi0.reg(), in * in.adjoint());
  Trajectory traj =
      evolve_lindblad(full_hamiltonian(), collapse(), rho0, 0.0, params_.T, 2, integ);
  Mat WT = endpoint_dressing(params_.T);
  Mat out = WT.adjoint() * traj.final_density() * WT;
  return DensityMatrix(psi0.reg(), std::move(out));
}

Trajectory GateModel::run_open_trajectory(const QuantumState& psi0, int samples) const {
  Mat W0 = endpoint_dressing(0.0);
  Vec in = W0 * psi0.amplitudes();
  DensityMatrix rho0(psi0.reg(), in * in.adjoint());
  return evolve_lindblad(full_hamiltonian(), collapse(), rho0, 0.0, params_.T, samples,
                         integ);
}

QuantumState embed_qubit_pair(const Vec& amp4) {
  Register reg = two_atom_register();
  Vec amp = Vec::Zero(9);
  amp(reg.basis_index("00")) = amp4(0);
  amp(reg.basis_index("01")) = amp4(1);
  amp(reg.basis_index("10")) = amp4(2);
  amp(reg.basis_index("11")) = amp4(3);
  return QuantumState(reg, std::move(amp));
}

namespace {

Vec product_state_4(double a, double b) {
  Vec v(4);
  v << std::cos(a) * std::cos(b), std::cos(a) * std::sin(b), std::sin(a) * std::cos(b),
      std::sin(a) * std::sin(b);
  return v;
}

}  // namespace

double average_gate_fidelity(const GateModel& model, int grid_n) {
  if (grid_n < 8) throw std::invalid_argument("quadrature grid must be at least 8");
  Mat target = target_unitary(model.params()).matrix();
  std::vector<double> vals(grid_n * grid_n, 0.0);
  parallel_for(grid_n * grid_n, [&](int k) {
    int ia = k / grid_n, ib = k % grid_n;
    double a = 2.0 * M_PI * ia / grid_n;
    double b = 2.0 * M_PI * ib / grid_n;
    Vec v4 = product_state_4(a, b);
    QuantumState psi0 = embed_qubit_pair(v4);
    QuantumState ideal = embed_qubit_pair(target * v4);
    vals[k] = state_fidelity(model.run_open(psi0), ideal);
  });
  double sum = 0.0;
  for (double v : vals) sum += v;
  return sum / vals.size();
}

std::vector<std::pair<double, double>> average_fidelity_vs_time(const GateModel& model,
                                                                int grid_n, int samples) {
  std::vector<std::vector<double>> partial(grid_n * grid_n);
  std::vector<double> times;
  std::mutex times_mu;
  parallel_for(grid_n * grid_n, [&](int k) {
    int ia = k / grid_n, ib = k % grid_n;
    double a = 2.0 * M_PI * ia / grid_n;
    double b = 2.0 * M_PI * ib / grid_n;
    Vec v4 = product_state_4(a, b);
    QuantumState psi0 = embed_qubit_pair(v4);
    Trajectory open = model.run_open_trajectory(psi0, samples);
    Trajectory ideal = evolve_schrodinger(model.ideal_effective_hamiltonian(), psi0, 0.0,
                                          model.params().T, samples, model.integ);
    std::vector<double> f(samples);
    for (int s = 0; s < samples; ++s) {
      const Vec& id = ideal.pure_states()[s];
      cxd v = id.adjoint() * open.density_states()[s] * id;
      f[s] = v.real();
    }
    partial[k] = std::move(f);
    std::lock_guard<std::mutex> lock(times_mu);
    if (times.empty()) times = open.times();
  });
  std::vector<std::pair<double, double>> out(samples);
  for (int s = 0; s < samples; ++s) {
    double acc = 0.0;
    for (const auto& f : partial) acc += f[s];
    out[s] = {times[s], acc / partial.size()};
  }
  return out;
}

SweepResult sweep_laser_errors(const GateModel& base, const std::vector<double>& eps1,
                               const std::vector<double>& eps2, int grid_n) {
  for (double e : eps1)
    if (std::abs(e) > 0.5) throw std::invalid_argument("laser error grid outside [-0.5, 0.5]");
  for (double e : eps2)
    if (std::abs(e) > 0.5) throw std::invalid_argument("laser error grid outside [-0.5, 0.5]");
  SweepResult out;
  out.axis_names = {"eps1", "eps2"};
  out.axes = {eps1, eps2};
  out.values.assign(eps1.size() * eps2.size(), 0.0);
  int n2 = static_cast<int>(eps2.size());
  parallel_for(static_cast<int>(out.values.size()), [&](int k) {
    GateModel m = base;
    m.eps1 = eps1[k / n2];
    m.eps2 = eps2[k % n2];
    out.values[k] = average_gate_fidelity(m, grid_n);
  });
  return out;
}

SweepResult sweep_decay(const GateModel& base, const std::vector<double>& gammas,
                        int grid_n) {
  for (double g : gammas)
    if (g < 0) throw std::invalid_argument("decay rates must be >= 0");
  SweepResult out;
  out.axis_names = {"gamma_1_per_s"};
  out.axes = {gammas};
  out.values.assign(gammas.size(), 0.0);
  parallel_for(static_cast<int>(gammas.size()), [&](int k) {
    SystemConfig cfg = base.config();
    cfg.gamma_decay = gammas[k];
    GateModel m(cfg, base.params());
    m.frame = base.frame;
    m.dressed_endpoints = base.dressed_endpoints;
    m.integ = base.integ;
    out.values[k] = average_gate_fidelity(m, grid_n);
  });
  return out;
}

std::pair<int, int> sweep_peak(const SweepResult& s) {
  if (s.axes.size() != 2) throw std::invalid_argument("sweep_peak needs a 2-axis sweep");
  int n2 = static_cast<int>(s.axes[1].size());
  int best = 0;
  for (size_t k = 1; k < s.values.size(); ++k)
    if (s.values[k] > s.values[best]) best = static_cast<int>(k);
  return {best / n2, best % n2};
}

}  // namespace rydholo
