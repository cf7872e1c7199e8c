#include "rydholo/pulses.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace rydholo {

namespace {

constexpr double PI = std::numbers::pi;

double beta_of(double t, double T) {
  double s = std::sin(PI * t / T);
  return PI * s * s;
}

double betadot_of(double t, double T) { return PI * PI * std::sin(2.0 * PI * t / T) / T; }

}  // namespace

GatePreset gate_preset(const std::string& name) {
  if (name == "CNOT") return {{PI, PI / 2, 0.0, 0.0}, std::nullopt};
  if (name == "CZ") return {{PI, 0.0, 0.0, 0.0}, std::nullopt};
  if (name == "CH")
    return {{PI / 2, PI / 4, 0.0, 0.0},
            "the published CH parameters do not reproduce the controlled-Hadamard "
            "matrix; use CH_DERIVED for circuits"};
  if (name == "CH_DERIVED") return {{PI, PI / 4, 0.0, 0.0}, std::nullopt};
  throw std::invalid_argument("unknown gate preset '" + name + "'");
}

PathAngles path_angles(double t, double T, double gamma) {
  if (!(T > 0)) throw std::invalid_argument("T must be positive");
  if (t < 0 || t > T) throw std::invalid_argument("t outside [0, T]");
  double b = beta_of(t, T);
  double sb = std::sin(b);
  double a = (4.0 / 3.0) * sb * sb * sb;
  if (t >= T / 2) a -= gamma;
  return {b, a};
}

cxd effective_drive(double t, const GateParams& p) {
  if (t < 0 || t > p.T) throw std::invalid_argument("t outside [0, T]");
  double b = beta_of(t, p.T);
  double bd = betadot_of(t, p.T);
  double sb = std::sin(b);
  PathAngles pa = path_angles(t, p.T, p.gamma);
  // alpha_dot * tan(beta) = 4 sin^3(beta) * beta_dot, pole-free
  cxd core(-bd, 4.0 * sb * sb * sb * bd);
  return std::exp(cxd(0, -pa.alpha)) * core / 2.0;
}

PulseSchedule PulseSchedule::make(const GateParams& params, int samples) {
  if (!(params.T > 0)) throw std::invalid_argument("gate duration must be positive");
  if (samples < 16) throw std::invalid_argument("schedule needs at least 16 samples");
  if (samples % 2 != 0) ++samples;  // keep T/2 on the grid
  PulseSchedule s;
  s.params_ = params;
  s.times_.resize(samples + 1);
  s.omega0_.resize(samples + 1);
  const bool identity_gate = params.gamma == 0.0;
  for (int k = 0; k <= samples; ++k) {
    double t = params.T * k / samples;
    s.times_[k] = t;
    // a zero-phase gate is the identity; realized with the drive off
    s.omega0_[k] = identity_gate ? cxd(0.0) : effective_drive(t, params);
    s.max_abs_ = std::max(s.max_abs_, std::abs(s.omega0_[k]));
  }
  return s;
}

cxd PulseSchedule::omega0(double t) const {
  if (t <= times_.front()) return omega0_.front();
  if (t >= times_.back()) return omega0_.back();
  double pos = t / params_.T * (times_.size() - 1);
  size_t k = std::min(static_cast<size_t>(pos), times_.size() - 2);
  double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
  return (1.0 - w) * omega0_[k] + w * omega0_[k + 1];
}

EffectiveDrives PulseSchedule::drive_slots(double t) const {
  cxd o0c = std::conj(omega0(t));
  return {-o0c * std::cos(params_.theta / 2),
          o0c * std::sin(params_.theta / 2) * std::exp(cxd(0, -params_.phi))};
}

double feasibility_stretch(const PulseSchedule& schedule, const SystemConfig& config) {
  const GateParams& p = schedule.params();
  double need21 = config.delta1 * schedule.max_abs_omega0() *
                  std::abs(std::sin(p.theta / 2)) / config.omega11_peak;
  double need22 = config.delta1 * schedule.max_abs_omega0() *
                  std::abs(std::cos(p.theta / 2)) / config.omega11_peak;
  return std::max(need21 / config.omega21_peak, need22 / config.omega22_peak);
}

PhysicalDrives physical_pulses(double t, const PulseSchedule& schedule,
                               const SystemConfig& config) {
  double stretch = feasibility_stretch(schedule, config);
  if (stretch > 1.0 + 1e-12)
    throw ScheduleInfeasible(
        "schedule exceeds drive peaks; stretch T by a factor of " + std::to_string(stretch),
        stretch);
  EffectiveDrives s = schedule.drive_slots(t);
  return {config.omega11_peak, -config.delta1 * s.on_10 / config.omega11_peak,
          -config.delta1 * s.on_11 / config.omega11_peak};
}

double min_feasible_T(const GateParams& params, const SystemConfig& config, int samples) {
  GateParams p = params;
  if (!(p.T > 0)) p.T = 1e-6;
  double stretch = feasibility_stretch(PulseSchedule::make(p, samples), config);
  // bracket the feasibility boundary, then bisect on the stretch factor
  double lo = p.T, hi = p.T;
  if (stretch > 1.0) {
    while (stretch > 1.0) {
      hi *= 2.0;
      p.T = hi;
      stretch = feasibility_stretch(PulseSchedule::make(p, samples), config);
    }
    lo = hi / 2.0;
  } else {
    while (stretch <= 1.0 && lo > 1e-12) {
      lo /= 2.0;
      p.T = lo;
      stretch = feasibility_stretch(PulseSchedule::make(p, samples), config);
    }
  }
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    p.T = mid;
    if (feasibility_stretch(PulseSchedule::make(p, samples), config) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

OperatorMatrix target_unitary(const GateParams& p) {
  // u = e^{i gamma/2} e^{-i (gamma/2) n.sigma},
  // n = (sin th cos ph, -sin th sin ph, cos th)
  double g2 = p.gamma / 2;
  double nx = std::sin(p.theta) * std::cos(p.phi);
  double ny = -std::sin(p.theta) * std::sin(p.phi);
  double nz = std::cos(p.theta);
  Mat u(2, 2);
  cxd c = std::cos(g2), s(0, -std::sin(g2));
  u(0, 0) = c + s * nz;
  u(0, 1) = s * (nx - cxd(0, 1) * ny);
  u(1, 0) = s * (nx + cxd(0, 1) * ny);
  u(1, 1) = c - s * nz;
  u *= std::exp(cxd(0, g2));
  Mat U = Mat::Identity(4, 4);
  U.block(2, 2, 2, 2) = u;
  return OperatorMatrix(Register({2, 2}), std::move(U));
}

double dynamic_phase_of_path(double T, int samples,
                             const std::function<double(double)>& alphadot_tanbeta) {
  // integrand <psi|H|psi> = (alpha_dot tan(beta)) sin(beta) / 2 on the
  // parametrized path; composite trapezoid
  double acc = 0.0;
  double prev = 0.0;
  for (int k = 0; k <= samples; ++k) {
    double t = T * k / samples;
    double b = beta_of(t, T);
    double f = 0.5 * alphadot_tanbeta(t) * std::sin(b);
    if (k > 0) acc += 0.5 * (prev + f) * (T / samples);
    prev = f;
  }
  return acc;
}

double dynamic_phase(const PulseSchedule& schedule) {
  double T = schedule.params().T;
  return dynamic_phase_of_path(
      T, static_cast<int>(schedule.times().size()) - 1, [T](double t) {
        double b = beta_of(t, T);
        double sb = std::sin(b);
        return 4.0 * sb * sb * sb * betadot_of(t, T);
      });
}

void export_schedule_csv(const PulseSchedule& schedule, const SystemConfig& config,
                         const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::fprintf(f, "t_s,omega0_re_rad_s,omega0_im_rad_s,omega21_re,omega21_im,"
                  "omega22_re,omega22_im\n");
  for (size_t k = 0; k < schedule.times().size(); ++k) {
    double t = schedule.times()[k];
    cxd o0 = schedule.omega0_samples()[k];
    EffectiveDrives s = schedule.drive_slots(t);
    cxd o21 = -config.delta1 * s.on_10 / config.omega11_peak;
    cxd o22 = -config.delta1 * s.on_11 / config.omega11_peak;
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t, o0.real(),
                 o0.imag(), o21.real(), o21.imag(), o22.real(), o22.imag());
  }
  std::fclose(f);
}

}  // namespace rydholo
