#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rydholo/metrics.hpp"

namespace rydholo {

struct TransferHop {
  std::array<int, 3> window;
  double duration = 0;
};

struct TransferPlan {
  ChainConfig chain;
  std::vector<TransferHop> hops;

  void validate() const;
  /// Two-hop relay plan moving the Bell partner from atom 1 to atom n-1
  /// (0-based), with the shipped couplings and hop time pi/omega.
  static TransferPlan bell_relay(int n_atoms, double omega);
};

/// Hop duration with the shipped coupling normalization; the transfer-fidelity
/// scan oracle in the test suite pins this to the argmax.
double transfer_time(double omega);

Trajectory run_transfer(const QuantumState& initial, const TransferPlan& plan,
                        int samples_per_hop = 33);

/// Joint readout outcomes on atoms (1,2) after disentangling, in the encoding
/// atom1 in {0,1} x atom2 in {1,r}.
enum class BellOutcome { m1r, m11, m0r, m01 };

std::string to_string(BellOutcome o);

struct MeasurementRecord {
  BellOutcome outcome{};
  double probability = 0;
  std::string recovery_tag;  // I, Z, X, XZ
};

/// Table of conditional fixes on atom 3 (3x3; identity on |r>).
OperatorMatrix recovery_operation(BellOutcome outcome);

enum class TeleportMode { ideal, physical };

struct TeleportSetup {
  cxd control0 = 1, control1 = 0;  // information on atom 1
  cxd target0 = 1, target1 = 0;    // information on atom 4
  GateParams cu;                   // the controlled operation to teleport
  TeleportMode mode = TeleportMode::ideal;
  std::optional<BellOutcome> forced;
  uint64_t seed = 0;
  // physical mode: 81x81 pair channels of the simulated gates
  const Mat* disentangle_channel = nullptr;  // the simulated controlled flip
  const Mat* cu_channel = nullptr;           // the simulated cu gate
};

struct TeleportResult {
  MeasurementRecord record;
  // ideal mode: pure two-qubit output (control info on atom 3, target on atom 4)
  std::optional<QuantumState> pure_out;
  // physical mode: reduced density matrix of atoms (3,4), dims {3,3}
  std::optional<DensityMatrix> open_out;
  std::vector<std::string> steps;
};

TeleportResult teleport_cu(const TeleportSetup& setup);

/// Pre-gate state of the four-atom register: information atoms around the
/// {1,r}-encoded Bell pair on atoms (2,3).
QuantumState teleport_initial_state(cxd c0, cxd c1, cxd t0, cxd t1);

/// Two-atom Lindblad gate channel of the benchmark gate, as a superoperator on
/// column-stacked 9x9 density matrices.
Mat lindblad_gate_channel(const GateModel& model);

/// Apply a pair channel to a density matrix over a register of dim-3 atoms;
/// (control_atom, target_atom) follow the channel's own subsystem order.
Mat apply_pair_channel(const Mat& rho, const Mat& channel, const Register& reg,
                       int control_atom, int target_atom);

}  // namespace rydholo
