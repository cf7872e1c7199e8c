#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rydholo/model.hpp"
#include "rydholo/qcore.hpp"

namespace rydholo {

struct GateParams {
  double gamma = 0;
  double theta = 0;
  double phi = 0;
  double T = 0;  // seconds
};

struct GatePreset {
  GateParams params;
  std::optional<std::string> warning;
};

/// CNOT, CZ, CH (as published, with a warning), CH_DERIVED (the parameters
/// whose target block is the Hadamard matrix).
GatePreset gate_preset(const std::string& name);

struct PathAngles {
  double beta = 0;
  double alpha = 0;
};

/// beta(t) = pi sin^2(pi t/T); alpha(t) = -gamma step(t - T/2) + (4/3) sin^3 beta.
PathAngles path_angles(double t, double T, double gamma);

/// Complex drive amplitude of the bright/rr two-level path,
/// Omega0 = e^{-i alpha} (-beta' + 4 i sin^3(beta) beta') / 2.
/// The tan(beta) pole of the raw quadrature form is removed analytically.
cxd effective_drive(double t, const GateParams& params);

class ScheduleInfeasible : public std::runtime_error {
 public:
  ScheduleInfeasible(const std::string& what, double stretch_factor)
      : std::runtime_error(what), stretch(stretch_factor) {}
  double stretch;  // multiply T by this to become feasible
};

class PulseSchedule {
 public:
  static PulseSchedule make(const GateParams& params, int samples = 4000);

  const GateParams& params() const { return params_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<cxd>& omega0_samples() const { return omega0_; }

  cxd omega0(double t) const;  // linear interpolation
  double max_abs_omega0() const { return max_abs_; }

  /// Effective drive coefficients on |rr><11| and |rr><10|.
  EffectiveDrives drive_slots(double t) const;

 private:
  GateParams params_;
  std::vector<double> times_;
  std::vector<cxd> omega0_;
  double max_abs_ = 0;
};

struct PhysicalDrives {
  cxd omega11;
  cxd omega21;
  cxd omega22;
};

/// Physical Rabi drives realizing the schedule: omega11 constant,
/// omega21 = -delta1 * Omega2 / omega11, omega22 = -delta1 * Omega1 / omega11.
/// Throws ScheduleInfeasible (with the required T stretch) if a peak is exceeded.
PhysicalDrives physical_pulses(double t, const PulseSchedule& schedule,
                               const SystemConfig& config);

/// Largest ratio of required to available drive amplitude (<= 1 means feasible).
double feasibility_stretch(const PulseSchedule& schedule, const SystemConfig& config);

/// Minimum gate duration satisfying the drive peaks, found by bisection on a
/// stretch factor.
double min_feasible_T(const GateParams& params, const SystemConfig& config,
                      int samples = 4000);

/// Ideal two-qubit gate (4x4 on the computational basis 00,01,10,11).
OperatorMatrix target_unitary(const GateParams& params);

/// Accumulated <psi|H|psi> along the parametrized path; zero for the shipped
/// path construction.
double dynamic_phase(const PulseSchedule& schedule);

/// Same quadrature evaluated on a caller-supplied path alpha(t) given through
/// the regularized product alpha_dot*tan(beta); test hook for detecting
/// non-geometric paths.
double dynamic_phase_of_path(double T, int samples,
                             const std::function<double(double)>& alphadot_tanbeta);

void export_schedule_csv(const PulseSchedule& schedule, const SystemConfig& config,
                         const std::string& path);

}  // namespace rydholo
