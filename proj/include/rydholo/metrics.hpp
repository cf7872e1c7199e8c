#pragma once

#include <string>
#include <vector>

#include "rydholo/dynamics.hpp"
#include "rydholo/model.hpp"
#include "rydholo/pulses.hpp"

namespace rydholo {

double state_fidelity(const DensityMatrix& rho, const QuantumState& psi_ideal);

/// One benchmark gate realization: configuration, target parameters and the
/// drive schedule, with optional laser amplitude errors.
class GateModel {
 public:
  GateModel(SystemConfig config, GateParams params, int schedule_samples = 4000);

  const SystemConfig& config() const { return config_; }
  const GateParams& params() const { return params_; }
  const PulseSchedule& schedule() const { return schedule_; }

  Frame frame = Frame::rotating;
  // model adiabatic switching of the always-on drive: evolve dressed states
  // and undress before readout (only meaningful with stark_terms off)
  bool dressed_endpoints = false;
  double eps1 = 0.0;  // scales the |rr><11| effective drive
  double eps2 = 0.0;  // scales the |rr><10| effective drive
  bool scale_physical_drives = false;  // apply eps to omega21/omega22 instead
  IntegratorOptions integ{};

  DriveFn drive_fn() const;
  HamiltonianFn full_hamiltonian() const;
  HamiltonianFn effective_hamiltonian() const;  // uses config.stark_terms
  HamiltonianFn ideal_effective_hamiltonian() const;  // pure drive, zero detuning
  CollapseSet collapse() const;
  Mat endpoint_dressing(double t) const;  // exp(+iK(t)); identity when disabled

  /// Open-system run from a computational pure state; returns rho(T).
  DensityMatrix run_open(const QuantumState& psi0) const;
  /// Trajectory version with uniform checkpoints.
  Trajectory run_open_trajectory(const QuantumState& psi0, int samples) const;

 private:
  SystemConfig config_;
  GateParams params_;
  PulseSchedule schedule_;
};

/// Embed a two-qubit amplitude vector (00,01,10,11) into the two-atom register.
QuantumState embed_qubit_pair(const Vec& amp4);

/// Average fidelity over product initial states
/// (cos a|0>+sin a|1>)(cos b|0>+sin b|1>) on an n x n periodic grid: the
/// open-system output is compared against the ideal gate output per point.
double average_gate_fidelity(const GateModel& model, int grid_n);

/// Time-resolved average fidelity at the trajectory checkpoints; the ideal
/// reference follows the closed ideal-path evolution per initial state.
std::vector<std::pair<double, double>> average_fidelity_vs_time(const GateModel& model,
                                                                int grid_n, int samples);

struct SweepResult {
  std::vector<std::string> axis_names;
  std::vector<std::vector<double>> axes;
  std::vector<double> values;  // row-major over axes
  std::string config_note;
};

SweepResult sweep_laser_errors(const GateModel& base, const std::vector<double>& eps1,
                               const std::vector<double>& eps2, int grid_n);

SweepResult sweep_decay(const GateModel& base, const std::vector<double>& gammas,
                        int grid_n);

/// argmax position of an n1 x n2 row-major table.
std::pair<int, int> sweep_peak(const SweepResult& s);

}  // namespace rydholo
