#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rydholo/qcore.hpp"

namespace rydholo {

/// Physical parameters of the two-atom gate model. Angular frequencies in
/// rad/s, decay rate in 1/s.
struct SystemConfig {
  double omega11_peak = 0;
  double omega21_peak = 0;
  double omega22_peak = 0;
  double delta1 = 0;
  double delta2 = 0;
  double V = 0;
  double gamma_decay = 0;
  // true: bare model, drive-induced level shifts act in full.
  // false: the shifts are cancelled by auxiliary dressing fields (modelled as
  // exact counter-terms, not as extra pulses).
  bool stark_terms = true;

  void validate() const;
};

enum class Frame { interaction, rotating };

struct DriveSample {
  cxd omega11;
  cxd omega21;
  cxd omega22;
};
using DriveFn = std::function<DriveSample(double)>;

Register two_atom_register();  // {3, 3}

/// Full two-atom Hamiltonian (9x9) at time t with the given drive values.
/// The rotating frame carries the (V + delta1 - delta2)|rr><rr| diagonal; the
/// interaction frame is its exact image under U = exp[-i(d2-d1)t |rr><rr|].
OperatorMatrix build_full_hamiltonian(const SystemConfig& config, const DriveFn& drives,
                                      double t, Frame frame);

/// Effective-drive coefficients: on_11 multiplies |rr><11|, on_10 multiplies
/// |rr><10|.
struct EffectiveDrives {
  cxd on_11;
  cxd on_10;
};
using EffDriveFn = std::function<EffectiveDrives(double)>;

/// Effective 9x9 Hamiltonian: drive terms plus the |rr> detuning. With
/// stark_terms the drive-induced diagonal shifts and ground couplings are
/// included at the instantaneous drive amplitudes; without, the |rr> entry is
/// the constant peak-value detuning of the anti-blockade condition.
OperatorMatrix build_effective_hamiltonian(const SystemConfig& config,
                                           const EffDriveFn& eff_drives, double t);

/// Anti-blockade detuning delta at the given drive magnitudes.
double antiblockade_delta(const SystemConfig& config, double o21_abs, double o22_abs);

/// V that zeroes the anti-blockade detuning at the configured peak Rabi values.
double solve_antiblockade_V(const SystemConfig& config);

/// Non-empty when the drive peaks are too large for the dispersive regime.
std::optional<std::string> effective_validity_warning(const SystemConfig& config);

/// First-order micromotion generator K(t) of the oscillating coupling groups.
/// exp(+iK) maps bare states into the dressed frame in which the effective
/// model lives; used to model adiabatic switching of the always-on drive.
OperatorMatrix micromotion_kick(const SystemConfig& config, const DriveFn& drives,
                                double t);

/// Three-atom relay chain of two-level {g, r} atoms.
struct ChainConfig {
  int n_atoms = 6;
  std::pair<int, int> bell_pair{0, 1};  // 0-based atom indices
  std::vector<std::array<int, 3>> window_sequence;
  double omega_base = 0;           // rad/s
  std::vector<double> couplings;   // J_1..J_4 for the 5-state ladder
  double v1 = 0, v2 = 0;           // nearest / next-nearest interactions

  void validate() const;
};

/// Couplings giving unit-fidelity transfer across the 5-state ladder at
/// t = pi/omega: (omega/2) * sqrt(i(5-i)).
std::vector<double> perfect_transfer_couplings(double omega);

/// Single-window ladder Hamiltonian embedded in the full 2^n register.
/// Ladder: |rgg> - |rrg> - |grg> - |grr> - |ggr> on the window atoms.
OperatorMatrix build_chain_hamiltonian(const ChainConfig& chain,
                                       const std::array<int, 3>& window);

/// Lab Hamiltonian of the three-atom chain (dim 8) before the anti-blockade
/// reduction; used by the validity check against the ladder model.
OperatorMatrix build_chain_lab_hamiltonian(const ChainConfig& chain, double delta,
                                           double t);

/// Single-atom |0> <-> |r> recovery drive (3x3).
OperatorMatrix build_recovery_hamiltonian(double omega_1r);

}  // namespace rydholo
