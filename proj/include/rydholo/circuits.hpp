#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rydholo/qcore.hpp"

namespace rydholo {
namespace circuits {

enum class G1 { H, X, Z };
enum class G2 { CNOT, CZ, CH };

struct Op {
  enum class Kind { gate1, gate2, measure, cond1, cond2 };
  Kind kind{};
  G1 g1{};
  G2 g2{};
  int q = 0, q2 = 0;       // q2 = target for two-qubit gates (q = control)
  char basis = 'Z';        // measurements
  int bit = 0;             // classical bit written by measure
  int cond_bit = 0, cond_value = 0;
};

struct Circuit {
  int qubit_count = 0;
  std::vector<Op> ops;

  void validate() const;
  Circuit reversed_adjoint() const;  // all supported gates are involutions
};

std::string to_text(const Circuit& c);
Circuit circuit_from_text(const std::string& text);

struct ApplyResult {
  QuantumState state;
  std::vector<int> bits;                 // classical register
  std::vector<double> outcome_probs;     // per executed measurement
};

/// forced_bits: value per classical bit id, -1 leaves the bit to sampling.
ApplyResult apply_circuit(const Circuit& c, const QuantumState& input, uint64_t seed,
                          const std::vector<int>& forced_bits = {});

enum class NamedStateKind { GHZ4, CLUSTER4, W4 };
QuantumState named_state(NamedStateKind kind);

enum class ConversionKind {
  ghz_to_cluster,
  cluster_to_ghz,
  ghz_to_w,
  w_to_ghz,
  w_to_cluster,          // ancilla + X measurement + feed-forward
  w_to_cluster_unitary,  // composed unitary route
};

/// The shipped conversion circuits (placements derived once by search_circuit
/// and frozen; re-derivable with the CLI convert --search command).
Circuit conversion_circuit(ConversionKind kind);

/// |<a|b>| for pure states: equivalence up to global phase.
double overlap_up_to_phase(const QuantumState& a, const QuantumState& b);

/// One slot of an ordered gate template.
struct GateName {
  bool two = false;
  G1 g1{};
  G2 g2{};
  static GateName one(G1 g) { return {false, g, {}}; }
  static GateName pair(G2 g) { return {true, {}, g}; }
};

/// Exhaustive placement search for an ordered gate template mapping source to
/// target up to global phase; returns the lexicographically first hit.
std::optional<Circuit> search_circuit(int qubit_count, const std::vector<GateName>& budget,
                                      const QuantumState& source,
                                      const QuantumState& target);

/// Search with an ancilla appended to the data register (starting in |0>),
/// X-measured after the template; both branches must reach the target after a
/// feed-forward of at most two single-qubit gates per qubit, optionally
/// preceded by one two-qubit gate.
std::optional<Circuit> search_measured_circuit(int data_qubits,
                                               const std::vector<GateName>& pre_budget,
                                               const QuantumState& source,
                                               const QuantumState& target,
                                               bool allow_twoq_feedforward = false);

}  // namespace circuits
}  // namespace rydholo
