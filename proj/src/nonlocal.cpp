#include "rydholo/nonlocal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "rydholo/parallel.hpp"

namespace rydholo {

namespace {

constexpr double PI = std::numbers::pi;

Register four_atoms() { return Register({3, 3, 3, 3}); }

Mat pauli_x01() {
  Mat m = Mat::Zero(3, 3);
  m(0, 1) = m(1, 0) = 1.0;
  m(LEVEL_R, LEVEL_R) = 1.0;
  return m;
}

Mat pauli_z01() {
  Mat m = Mat::Zero(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  m(LEVEL_R, LEVEL_R) = 1.0;
  return m;
}

// Disentangling gate on (atom1, atom2): atom2 = |1> flips atom1 on {0,1},
// atom2 in {|0>, |r>} leaves it alone.
Mat disentangle_unitary() {
  Mat ctrl_idle = Mat::Zero(3, 3);
  ctrl_idle(0, 0) = ctrl_idle(LEVEL_R, LEVEL_R) = 1.0;
  Mat ctrl_act = Mat::Zero(3, 3);
  ctrl_act(1, 1) = 1.0;
  Register pair({3, 3});
  OperatorMatrix a = tensor(OperatorMatrix(Register({3}), Mat::Identity(3, 3)),
                            OperatorMatrix(Register({3}), ctrl_idle));
  OperatorMatrix b = tensor(OperatorMatrix(Register({3}), pauli_x01()),
                            OperatorMatrix(Register({3}), ctrl_act));
  return a.matrix() + b.matrix();
}

// pi/2 rotation on {1, r}: (|1>-|r>)/sqrt2 -> |1>, (|1>+|r>)/sqrt2 -> |r>.
Mat half_pulse_unitary() {
  Mat m = Mat::Zero(3, 3);
  m(0, 0) = 1.0;
  double s = 1.0 / std::sqrt(2.0);
  m(1, 1) = s;
  m(1, LEVEL_R) = -s;
  m(LEVEL_R, 1) = s;
  m(LEVEL_R, LEVEL_R) = s;
  return m;
}

// Ideal |0> <-> |r> transfer on atom 3. Equals the pi-area recovery pulse up
// to the pulse phase on the swapped pair, which is absorbed into the recovery
// convention.
Mat recovery_swap_unitary() {
  Mat m = Mat::Zero(3, 3);
  m(0, LEVEL_R) = 1.0;
  m(LEVEL_R, 0) = 1.0;
  m(1, 1) = 1.0;
  return m;
}

Mat cu_unitary(const Mat& u) {
  // control {0 idle, 1 active, r idle} x target acting on {0,1}
  Mat ctrl0 = Mat::Zero(3, 3);
  ctrl0(0, 0) = ctrl0(LEVEL_R, LEVEL_R) = 1.0;
  Mat ctrl1 = Mat::Zero(3, 3);
  ctrl1(1, 1) = 1.0;
  Mat u3 = Mat::Identity(3, 3);
  u3.block(0, 0, 2, 2) = u;
  Register pair({3, 3});
  Mat a = tensor(OperatorMatrix(Register({3}), ctrl0),
                 OperatorMatrix(Register({3}), Mat::Identity(3, 3)))
              .matrix();
  Mat b = tensor(OperatorMatrix(Register({3}), ctrl1), OperatorMatrix(Register({3}), u3))
              .matrix();
  return a + b;
}

// level permutation swapping 0 <-> r (relabels the control encoding)
Mat control_relabel() {
  Mat m = Mat::Zero(3, 3);
  m(0, LEVEL_R) = m(LEVEL_R, 0) = 1.0;
  m(1, 1) = 1.0;
  return m;
}

struct OutcomeLevels {
  int atom1;
  int atom2;
};

OutcomeLevels levels_of(BellOutcome o) {
  switch (o) {
    case BellOutcome::m1r: return {1, LEVEL_R};
    case BellOutcome::m11: return {1, 1};
    case BellOutcome::m0r: return {0, LEVEL_R};
    case BellOutcome::m01: return {0, 1};
  }
  throw std::invalid_argument("bad outcome");
}

}  // namespace

std::string to_string(BellOutcome o) {
  switch (o) {
    case BellOutcome::m1r: return "1r";
    case BellOutcome::m11: return "11";
    case BellOutcome::m0r: return "0r";
    case BellOutcome::m01: return "01";
  }
  return "?";
}

OperatorMatrix recovery_operation(BellOutcome outcome) {
  Register atom({3});
  switch (outcome) {
    case BellOutcome::m1r: return OperatorMatrix(atom, Mat::Identity(3, 3));
    case BellOutcome::m11: return OperatorMatrix(atom, pauli_z01());
    case BellOutcome::m0r: return OperatorMatrix(atom, pauli_x01());
    case BellOutcome::m01: return OperatorMatrix(atom, pauli_x01() * pauli_z01());
  }
  throw std::invalid_argument("bad outcome");
}

void TransferPlan::validate() const {
  chain.validate();
  if (hops.empty()) throw std::invalid_argument("transfer plan needs at least one hop");
  for (const auto& h : hops) {
    if (!(h.duration > 0)) throw std::invalid_argument("hop duration must be positive");
    if (h.window[1] != h.window[0] + 1 || h.window[2] != h.window[0] + 2 ||
        h.window[0] < 0 || h.window[2] >= chain.n_atoms)
      throw std::invalid_argument("hop window outside chain");
  }
  for (size_t i = 1; i < hops.size(); ++i)
    if (hops[i].window[0] != hops[i - 1].window[0] + 2)
      throw std::invalid_argument("hops must advance the moving partner by two sites");
}

double transfer_time(double omega) {
  if (!(omega > 0)) throw std::invalid_argument("omega must be positive");
  return PI / omega;
}

TransferPlan TransferPlan::bell_relay(int n_atoms, double omega) {
  TransferPlan plan;
  plan.chain.n_atoms = n_atoms;
  plan.chain.bell_pair = {0, 1};
  plan.chain.omega_base = omega;
  plan.chain.couplings = perfect_transfer_couplings(omega);
  plan.chain.v1 = 0;
  plan.chain.v2 = 0;
  double hop = transfer_time(omega);
  for (int w = 1; w + 2 < n_atoms; w += 2) {
    plan.chain.window_sequence.push_back({w, w + 1, w + 2});
    plan.hops.push_back({{w, w + 1, w + 2}, hop});
  }
  plan.validate();
  return plan;
}

Trajectory run_transfer(const QuantumState& initial, const TransferPlan& plan,
                        int samples_per_hop) {
  plan.validate();
  Register reg(std::vector<int>(plan.chain.n_atoms, 2));
  if (initial.reg() != reg)
    throw std::invalid_argument("initial state does not match chain register");

  Trajectory traj(reg, false);
  traj.append(0.0, initial.amplitudes());
  QuantumState psi = initial;
  double t_base = 0.0;
  for (const auto& hop : plan.hops) {
    Mat H = build_chain_hamiltonian(plan.chain, hop.window).matrix();
    HamiltonianFn hfn = [&H](double, Mat& out) { out = H; };
    Trajectory leg = evolve_schrodinger(hfn, psi, 0.0, hop.duration, samples_per_hop);
    for (size_t s = 1; s < leg.times().size(); ++s)
      traj.append(t_base + leg.times()[s], leg.pure_states()[s]);
    psi = leg.final_state();
    t_base += hop.duration;
  }
  return traj;
}

QuantumState teleport_initial_state(cxd c0, cxd c1, cxd t0, cxd t1) {
  Register atom({3});
  Vec ctrl = Vec::Zero(3), tgt = Vec::Zero(3);
  ctrl(0) = c0; ctrl(1) = c1;
  tgt(0) = t0; tgt(1) = t1;
  Vec bell = Vec::Zero(9);
  Register pair({3, 3});
  bell(pair.basis_index("r1")) = 1.0 / std::sqrt(2.0);
  bell(pair.basis_index("1r")) = 1.0 / std::sqrt(2.0);
  QuantumState s = tensor(QuantumState(atom, ctrl), QuantumState(pair, bell));
  return tensor(s, QuantumState(atom, tgt));
}

Mat lindblad_gate_channel(const GateModel& model) {
  const int n = 9;
  HamiltonianFn h = model.full_hamiltonian();
  CollapseSet collapse = model.collapse();
  Mat W0 = model.endpoint_dressing(0.0);
  Mat WT = model.endpoint_dressing(model.params().T).adjoint();

  Mat LdL_sum = Mat::Zero(n, n);
  for (const Mat& L : collapse.ops) LdL_sum += L.adjoint() * L;

  Mat S(n * n, n * n);
  std::vector<Mat> cols(n * n);
  parallel_for(n * n, [&](int k) {
    Mat H(n, n), rho(n, n), drho(n, n), tmp(n, n);
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
    Mat E = Mat::Zero(n, n);
    E(k % n, k / n) = 1.0;  // column-major unit: vec index k
    E = W0 * E * W0.adjoint();
    Vec y = Eigen::Map<const Vec>(E.data(), n * n);
    integrate_ode(rhs, y, 0.0, model.params().T, model.integ);
    Mat out = Eigen::Map<const Mat>(y.data(), n, n);
    cols[k] = WT * out * WT.adjoint();
  });
  for (int k = 0; k < n * n; ++k)
    S.col(k) = Eigen::Map<const Vec>(cols[k].data(), n * n);
  return S;
}

Mat apply_pair_channel(const Mat& rho, const Mat& channel, const Register& reg,
                       int control_atom, int target_atom) {
  const int n = reg.total_dim();
  if (rho.rows() != n || channel.rows() != 81)
    throw std::invalid_argument("apply_pair_channel: dimension mismatch");
  Mat out = Mat::Zero(n, n);
  const int m = reg.subsystems();
  std::vector<int> rl(m), cl(m);
  // enumerate spectator configurations
  std::vector<int> spect;
  for (int i = 0; i < m; ++i)
    if (i != control_atom && i != target_atom) spect.push_back(i);
  int sd = 1;
  for (int s : spect) sd *= reg.dim(s);

  Vec vin(81), vout(81);
  for (int sr = 0; sr < sd; ++sr) {
    for (int sc = 0; sc < sd; ++sc) {
      int tmp = sr;
      for (int i = static_cast<int>(spect.size()) - 1; i >= 0; --i) {
        rl[spect[i]] = tmp % reg.dim(spect[i]);
        tmp /= reg.dim(spect[i]);
      }
      tmp = sc;
      for (int i = static_cast<int>(spect.size()) - 1; i >= 0; --i) {
        cl[spect[i]] = tmp % reg.dim(spect[i]);
        tmp /= reg.dim(spect[i]);
      }
      for (int pr = 0; pr < 9; ++pr)
        for (int pc = 0; pc < 9; ++pc) {
          rl[control_atom] = pr / 3; rl[target_atom] = pr % 3;
          cl[control_atom] = pc / 3; cl[target_atom] = pc % 3;
          vin(pr + 9 * pc) = rho(reg.pack(rl), reg.pack(cl));
        }
      vout.noalias() = channel * vin;
      for (int pr = 0; pr < 9; ++pr)
        for (int pc = 0; pc < 9; ++pc) {
          rl[control_atom] = pr / 3; rl[target_atom] = pr % 3;
          cl[control_atom] = pc / 3; cl[target_atom] = pc % 3;
          out(reg.pack(rl), reg.pack(cl)) = vout(pr + 9 * pc);
        }
    }
  }
  return out;
}

namespace {

TeleportResult teleport_ideal(const TeleportSetup& setup);
TeleportResult teleport_physical(const TeleportSetup& setup);

TeleportResult teleport_ideal(const TeleportSetup& setup) {
  Register reg = four_atoms();
  QuantumState psi = teleport_initial_state(setup.control0, setup.control1,
                                            setup.target0, setup.target1);
  TeleportResult res;
  res.steps.push_back("prepare: control x bell(2,3) x target");

  Register pair({3, 3});
  Mat dis = disentangle_unitary();
  psi = QuantumState(reg, embed(OperatorMatrix(pair, dis), reg, {0, 1}).matrix() *
                              psi.amplitudes());
  res.steps.push_back("disentangle: controlled flip, control atom 2, target atom 1");

  Register atom({3});
  psi = QuantumState(reg, embed(OperatorMatrix(atom, half_pulse_unitary()), reg, {1})
                              .matrix() *
                              psi.amplitudes());
  res.steps.push_back("half pulse on atom 2 ({1,r} rotation)");

  // joint readout of atoms 1 and 2
  std::vector<Vec> basis3 = computational_basis(3);
  std::mt19937_64 rng(setup.seed);
  MeasureOutcome m1 =
      setup.forced
          ? measure_projective_forced(psi, 0, basis3, levels_of(*setup.forced).atom1)
          : measure_projective(psi, 0, basis3, rng);
  MeasureOutcome m2 =
      setup.forced
          ? measure_projective_forced(m1.post_state, 1, basis3,
                                      levels_of(*setup.forced).atom2)
          : measure_projective(m1.post_state, 1, basis3, rng);
  if (!((m1.outcome == 0 || m1.outcome == 1) && (m2.outcome == 1 || m2.outcome == LEVEL_R)))
    throw std::runtime_error("joint measurement landed outside the Bell-outcome set");
  BellOutcome outcome;
  if (m1.outcome == 1)
    outcome = (m2.outcome == LEVEL_R) ? BellOutcome::m1r : BellOutcome::m11;
  else
    outcome = (m2.outcome == LEVEL_R) ? BellOutcome::m0r : BellOutcome::m01;
  psi = m2.post_state;
  res.record.outcome = outcome;
  res.record.probability = m1.probability * m2.probability;
  res.steps.push_back("joint measurement on atoms (1,2): " + to_string(outcome));

  psi = QuantumState(reg, embed(OperatorMatrix(atom, recovery_swap_unitary()), reg, {2})
                              .matrix() *
                              psi.amplitudes());
  res.steps.push_back("recovery pulse on atom 3 (r -> 0)");

  OperatorMatrix rec = recovery_operation(outcome);
  res.record.recovery_tag =
      (outcome == BellOutcome::m1r) ? "I"
      : (outcome == BellOutcome::m11) ? "Z"
      : (outcome == BellOutcome::m0r) ? "X" : "XZ";
  psi = QuantumState(reg, embed(rec, reg, {2}).matrix() * psi.amplitudes());
  res.steps.push_back("recovery operation " + res.record.recovery_tag + " on atom 3");

  Mat u = target_unitary(setup.cu).matrix().block(2, 2, 2, 2);
  psi = QuantumState(reg, embed(OperatorMatrix(pair, cu_unitary(u)), reg, {2, 3}).matrix() *
                              psi.amplitudes());
  res.steps.push_back("local controlled gate: control atom 3, target atom 4");

  // extract the (atom3, atom4) qubit pair at the measured levels of atoms 1,2
  Vec out4 = Vec::Zero(4);
  std::vector<int> lv(4);
  lv[0] = m1.outcome;
  lv[1] = m2.outcome;
  double leak = 0.0;
  for (int a3 = 0; a3 < 3; ++a3)
    for (int a4 = 0; a4 < 3; ++a4) {
      lv[2] = a3; lv[3] = a4;
      cxd amp = psi.amplitudes()(reg.pack(lv));
      if (a3 <= 1 && a4 <= 1)
        out4(2 * a3 + a4) = amp;
      else
        leak += std::norm(amp);
    }
  if (leak > 1e-20) res.steps.push_back("warning: leakage outside qubit levels");
  res.pure_out = QuantumState(Register({2, 2}), out4 / out4.norm());
  return res;
}

TeleportResult teleport_physical(const TeleportSetup& setup) {
  if (!setup.disentangle_channel || !setup.cu_channel)
    throw std::invalid_argument("physical mode needs the simulated gate channels");
  Register reg = four_atoms();
  QuantumState psi0 = teleport_initial_state(setup.control0, setup.control1,
                                             setup.target0, setup.target1);
  Mat rho = psi0.amplitudes() * psi0.amplitudes().adjoint();
  TeleportResult res;
  res.steps.push_back("prepare: control x bell(2,3) x target");

  Register atom({3});
  // disentangler = simulated gate channel with control relabeled {0 <-> r},
  // control on atom 2 (index 1), target on atom 1 (index 0)
  Mat relab = embed(OperatorMatrix(atom, control_relabel()), reg, {1}).matrix();
  rho = relab * rho * relab.adjoint();
  rho = apply_pair_channel(rho, *setup.disentangle_channel, reg, 1, 0);
  rho = relab * rho * relab.adjoint();
  res.steps.push_back("disentangle (simulated gate, relabeled control)");

  Mat hp = embed(OperatorMatrix(atom, half_pulse_unitary()), reg, {1}).matrix();
  rho = hp * rho * hp.adjoint();
  res.steps.push_back("half pulse on atom 2");

  // projective readout of atoms (1,2); outcomes outside the Bell set = leakage
  std::array<double, 4> probs{};
  std::array<Mat, 4> projs;
  const std::array<BellOutcome, 4> outcomes = {BellOutcome::m1r, BellOutcome::m11,
                                               BellOutcome::m0r, BellOutcome::m01};
  for (int k = 0; k < 4; ++k) {
    OutcomeLevels lv = levels_of(outcomes[k]);
    Mat p1 = Mat::Zero(3, 3);
    p1(lv.atom1, lv.atom1) = 1.0;
    Mat p2 = Mat::Zero(3, 3);
    p2(lv.atom2, lv.atom2) = 1.0;
    projs[k] = embed(OperatorMatrix(atom, p1), reg, {0}).matrix() *
               embed(OperatorMatrix(atom, p2), reg, {1}).matrix();
    probs[k] = (projs[k] * rho).trace().real();
  }
  int pick;
  if (setup.forced) {
    pick = static_cast<int>(std::find(outcomes.begin(), outcomes.end(), *setup.forced) -
                            outcomes.begin());
    if (probs[pick] < 1e-12)
      throw std::runtime_error("forced measurement outcome has (near-)zero probability");
  } else {
    std::mt19937_64 rng(setup.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    // sample conditioned on landing in the Bell-outcome set; leakage excluded
    double r = unif(rng) * (probs[0] + probs[1] + probs[2] + probs[3]);
    double acc = 0.0;
    pick = 3;
    for (int k = 0; k < 4; ++k) {
      acc += probs[k];
      if (r < acc) { pick = k; break; }
    }
  }
  rho = projs[pick] * rho * projs[pick];
  rho /= rho.trace().real();
  res.record.outcome = outcomes[pick];
  res.record.probability = probs[pick];
  res.steps.push_back("joint measurement on atoms (1,2): " + to_string(outcomes[pick]));

  Mat swp = embed(OperatorMatrix(atom, recovery_swap_unitary()), reg, {2}).matrix();
  rho = swp * rho * swp.adjoint();
  res.steps.push_back("recovery pulse on atom 3 (r -> 0)");

  OperatorMatrix rec = recovery_operation(outcomes[pick]);
  res.record.recovery_tag =
      (outcomes[pick] == BellOutcome::m1r) ? "I"
      : (outcomes[pick] == BellOutcome::m11) ? "Z"
      : (outcomes[pick] == BellOutcome::m0r) ? "X" : "XZ";
  Mat rc = embed(rec, reg, {2}).matrix();
  rho = rc * rho * rc.adjoint();
  res.steps.push_back("recovery operation " + res.record.recovery_tag + " on atom 3");

  rho = apply_pair_channel(rho, *setup.cu_channel, reg, 2, 3);
  res.steps.push_back("local controlled gate (simulated), control atom 3, target atom 4");

  DensityMatrix full(reg, 0.5 * (rho + rho.adjoint()));
  res.open_out = partial_trace(full, {2, 3});
  return res;
}

}  // namespace

TeleportResult teleport_cu(const TeleportSetup& setup) {
  double cn = std::sqrt(std::norm(setup.control0) + std::norm(setup.control1));
  double tn = std::sqrt(std::norm(setup.target0) + std::norm(setup.target1));
  if (std::abs(cn - 1.0) > 1e-10 || std::abs(tn - 1.0) > 1e-10)
    throw std::invalid_argument("teleport inputs must be normalized");
  return setup.mode == TeleportMode::ideal ? teleport_ideal(setup)
                                           : teleport_physical(setup);
}

}  // namespace rydholo
