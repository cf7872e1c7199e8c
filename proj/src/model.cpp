#include "rydholo/model.hpp"

#include <cmath>
#include <stdexcept>

namespace rydholo {

namespace {

int idx(int a, int b) { return 3 * a + b; }
constexpr int RR = 8;  // idx(2,2)

void add_pair(Mat& H, int row, int col, cxd val) {
  H(row, col) += val;
  H(col, row) += std::conj(val);
}

// Drive-induced second-order terms (diagonals and ground/single-r couplings)
// at the given instantaneous drive values. The |rr> entry holds only the
// drive-dependent part, -S_drive - S11; the static V + d1 - d2 stays with the
// frame term.
Mat second_order_shifts(const SystemConfig& c, const DriveSample& d) {
  Mat S = Mat::Zero(9, 9);
  const double a11 = std::norm(d.omega11);
  const double a21 = std::norm(d.omega21);
  const double a22 = std::norm(d.omega22);
  const double d3 = c.delta2 - 2.0 * c.delta1;
  S(idx(0, 0), idx(0, 0)) = a21 / c.delta2;
  S(idx(0, 1), idx(0, 1)) = a22 / c.delta2;
  S(idx(1, 0), idx(1, 0)) = a21 / c.delta2 - a11 / c.delta1;
  S(idx(1, 1), idx(1, 1)) = a22 / c.delta2 - a11 / c.delta1;
  S(idx(2, 0), idx(2, 0)) = (a11 + a21) / c.delta1;
  S(idx(2, 1), idx(2, 1)) = (a11 + a22) / c.delta1;
  S(idx(0, 2), idx(0, 2)) = -(a21 + a22) / c.delta2;
  S(idx(1, 2), idx(1, 2)) = -(a21 + a22) / c.delta2 + a11 / d3;
  S(RR, RR) = -(a21 + a22) / c.delta1 - a11 / d3;
  cxd g = std::conj(d.omega21) * d.omega22 / c.delta2;
  S(idx(0, 0), idx(0, 1)) = g;
  S(idx(0, 1), idx(0, 0)) = std::conj(g);
  S(idx(1, 0), idx(1, 1)) = g;
  S(idx(1, 1), idx(1, 0)) = std::conj(g);
  cxd gr = d.omega21 * std::conj(d.omega22) / c.delta1;
  S(idx(2, 0), idx(2, 1)) = gr;
  S(idx(2, 1), idx(2, 0)) = std::conj(gr);
  return S;
}

Mat rotating_frame_terms(const SystemConfig& c, const DriveSample& d, double t) {
  Mat H = Mat::Zero(9, 9);
  const cxd e1 = std::exp(cxd(0, -c.delta1 * t));
  const cxd e2 = std::exp(cxd(0, -c.delta2 * t));
  const cxd e3 = std::exp(cxd(0, (c.delta2 - 2.0 * c.delta1) * t));
  add_pair(H, idx(1, 0), idx(2, 0), d.omega11 * e1);
  add_pair(H, idx(1, 1), idx(2, 1), d.omega11 * e1);
  add_pair(H, idx(1, 2), RR, d.omega11 * e3);
  add_pair(H, idx(0, 2), idx(0, 0), d.omega21 * e2);
  add_pair(H, idx(1, 2), idx(1, 0), d.omega21 * e2);
  add_pair(H, RR, idx(2, 0), d.omega21 * e1);
  add_pair(H, idx(0, 2), idx(0, 1), d.omega22 * e2);
  add_pair(H, idx(1, 2), idx(1, 1), d.omega22 * e2);
  add_pair(H, RR, idx(2, 1), d.omega22 * e1);
  return H;
}

}  // namespace

void SystemConfig::validate() const {
  if (!(delta1 > 0) || !(delta2 > 0))
    throw std::invalid_argument("detunings must be positive");
  if (!(delta2 > 2.0 * delta1))
    throw std::invalid_argument("delta2 must exceed 2*delta1");
  if (!(omega11_peak > 0) || !(omega21_peak > 0) || !(omega22_peak > 0))
    throw std::invalid_argument("Rabi peaks must be positive");
  if (gamma_decay < 0) throw std::invalid_argument("decay rate must be >= 0");
}

Register two_atom_register() { return Register({3, 3}); }

double antiblockade_delta(const SystemConfig& c, double o21_abs, double o22_abs) {
  return c.V + c.delta1 - c.delta2 -
         (o21_abs * o21_abs + o22_abs * o22_abs) / c.delta1 -
         c.omega11_peak * c.omega11_peak / (c.delta2 - 2.0 * c.delta1);
}

double solve_antiblockade_V(const SystemConfig& c) {
  if (std::abs(c.delta2 - 2.0 * c.delta1) < 1e-12 * c.delta2)
    throw std::invalid_argument("anti-blockade condition is singular at delta2 = 2*delta1");
  return c.delta2 - c.delta1 +
         (c.omega21_peak * c.omega21_peak + c.omega22_peak * c.omega22_peak) / c.delta1 +
         c.omega11_peak * c.omega11_peak / (c.delta2 - 2.0 * c.delta1);
}

std::optional<std::string> effective_validity_warning(const SystemConfig& c) {
  double ratio = std::max({c.omega11_peak / c.delta1, c.omega21_peak / c.delta2,
                           c.omega22_peak / c.delta2, c.omega21_peak / c.delta1,
                           c.omega22_peak / c.delta1});
  if (ratio > 0.3)
    return "drive/detuning ratio " + std::to_string(ratio) +
           " exceeds 0.3; effective model may be inaccurate";
  return std::nullopt;
}

OperatorMatrix build_full_hamiltonian(const SystemConfig& config, const DriveFn& drives,
                                      double t, Frame frame) {
  if (t < 0) throw std::invalid_argument("t must be >= 0");
  DriveSample d = drives(t);
  Mat H;
  if (frame == Frame::rotating) {
    H = rotating_frame_terms(config, d, t);
    H(RR, RR) += config.V + config.delta1 - config.delta2;
  } else {
    // exact image of the rotating-frame model under
    // U = exp[-i(delta2-delta1) t |rr><rr|]: rows/cols touching |rr> pick up
    // the opposite frame phase and the diagonal becomes V|rr><rr|.
    H = rotating_frame_terms(config, d, t);
    cxd w = std::exp(cxd(0, -(config.delta2 - config.delta1) * t));
    for (int k = 0; k < 9; ++k) {
      if (k == RR) continue;
      H(RR, k) *= w;
      H(k, RR) *= std::conj(w);
    }
    H(RR, RR) += config.V + config.delta1 - config.delta2;
    H(RR, RR) += config.delta2 - config.delta1;
  }
  if (!config.stark_terms) {
    // counter-terms for the drive-induced shifts; the |rr> entry is pinned so
    // the net detuning equals the peak-value anti-blockade delta.
    DriveSample pk{config.omega11_peak, config.omega21_peak, config.omega22_peak};
    H -= second_order_shifts(config, d);
    Mat Spk = second_order_shifts(config, pk);
    H(RR, RR) += Spk(RR, RR);
  }
  return OperatorMatrix::hermitian(two_atom_register(), std::move(H));
}

OperatorMatrix build_effective_hamiltonian(const SystemConfig& config,
                                           const EffDriveFn& eff_drives, double t) {
  if (t < 0) throw std::invalid_argument("t must be >= 0");
  EffectiveDrives s = eff_drives(t);
  Mat H = Mat::Zero(9, 9);
  add_pair(H, RR, idx(1, 1), s.on_11);
  add_pair(H, RR, idx(1, 0), s.on_10);
  if (config.stark_terms) {
    // implied physical drive magnitudes from the inverse drive map
    double o21 = config.delta1 * std::abs(s.on_10) / config.omega11_peak;
    double o22 = config.delta1 * std::abs(s.on_11) / config.omega11_peak;
    H += second_order_shifts(config, DriveSample{config.omega11_peak, o21, o22});
    H(RR, RR) += config.V + config.delta1 - config.delta2;
  } else {
    H(RR, RR) += antiblockade_delta(config, config.omega21_peak, config.omega22_peak);
  }
  return OperatorMatrix::hermitian(two_atom_register(), std::move(H));
}

OperatorMatrix micromotion_kick(const SystemConfig& c, const DriveFn& drives, double t) {
  DriveSample d = drives(t);
  const double d3 = c.delta2 - 2.0 * c.delta1;
  Mat K = Mat::Zero(9, 9);
  auto group = [&K](const Mat& h, double w, double t_) {
    // (h e^{-iwt} - h^dag e^{+iwt}) / (i w)
    cxd e = std::exp(cxd(0, -w * t_));
    K += (h * e - h.adjoint() * std::conj(e)) / cxd(0, w);
  };
  Mat h1 = Mat::Zero(9, 9);
  h1(idx(1, 0), idx(2, 0)) = d.omega11;
  h1(idx(1, 1), idx(2, 1)) = d.omega11;
  h1(RR, idx(2, 0)) = d.omega21;
  h1(RR, idx(2, 1)) = d.omega22;
  group(h1, c.delta1, t);
  Mat h2 = Mat::Zero(9, 9);
  h2(idx(0, 2), idx(0, 0)) = d.omega21;
  h2(idx(1, 2), idx(1, 0)) = d.omega21;
  h2(idx(0, 2), idx(0, 1)) = d.omega22;
  h2(idx(1, 2), idx(1, 1)) = d.omega22;
  group(h2, c.delta2, t);
  Mat h3 = Mat::Zero(9, 9);
  h3(RR, idx(1, 2)) = d.omega11;
  group(h3, d3, t);
  return OperatorMatrix::hermitian(two_atom_register(), std::move(K));
}

void ChainConfig::validate() const {
  if (n_atoms < 3) throw std::invalid_argument("chain needs at least 3 atoms");
  if (couplings.size() != 4) throw std::invalid_argument("expected 4 ladder couplings");
  for (double j : couplings)
    if (!(j > 0)) throw std::invalid_argument("ladder couplings must be positive");
  for (const auto& w : window_sequence) {
    if (w[1] != w[0] + 1 || w[2] != w[0] + 2)
      throw std::invalid_argument("window must be three consecutive atoms");
    if (w[0] < 0 || w[2] >= n_atoms)
      throw std::invalid_argument("window outside chain");
  }
  for (size_t i = 1; i < window_sequence.size(); ++i) {
    if (window_sequence[i][0] != window_sequence[i - 1][0] + 2)
      throw std::invalid_argument("consecutive windows must advance by two sites");
  }
}

std::vector<double> perfect_transfer_couplings(double omega) {
  if (!(omega > 0)) throw std::invalid_argument("omega must be positive");
  std::vector<double> J(4);
  for (int i = 1; i <= 4; ++i) J[i - 1] = 0.5 * omega * std::sqrt(double(i * (5 - i)));
  return J;
}

OperatorMatrix build_chain_hamiltonian(const ChainConfig& chain,
                                       const std::array<int, 3>& window) {
  chain.validate();
  if (window[1] != window[0] + 1 || window[2] != window[0] + 2 || window[0] < 0 ||
      window[2] >= chain.n_atoms)
    throw std::invalid_argument("window outside chain");
  Register full(std::vector<int>(chain.n_atoms, 2));
  // ladder states on the window atoms, g=0, r=1
  const std::array<std::array<int, 3>, 5> ladder = {{
      {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 1, 1}, {0, 0, 1}}};
  Register win({2, 2, 2});
  Mat Hwin = Mat::Zero(8, 8);
  for (int k = 0; k < 4; ++k) {
    int a = win.pack({ladder[k][0], ladder[k][1], ladder[k][2]});
    int b = win.pack({ladder[k + 1][0], ladder[k + 1][1], ladder[k + 1][2]});
    Hwin(a, b) += chain.couplings[k];
    Hwin(b, a) += chain.couplings[k];
  }
  return embed(OperatorMatrix::hermitian(win, std::move(Hwin)), full,
               {window[0], window[1], window[2]});
}

OperatorMatrix build_chain_lab_hamiltonian(const ChainConfig& chain, double delta,
                                           double t) {
  // three-atom two-level model with static interactions and detuned drives;
  // laser Rabi values per atom follow the ladder couplings (J2, J1, J3).
  Register reg({2, 2, 2});
  Mat H = Mat::Zero(8, 8);
  const double om[3] = {chain.couplings[1], chain.couplings[0], chain.couplings[2]};
  cxd e = std::exp(cxd(0, delta * t));
  for (int atom = 0; atom < 3; ++atom) {
    // |g><r| e^{+i delta t} + h.c. on each atom
    for (int rest = 0; rest < 4; ++rest) {
      int other1 = rest & 1, other2 = (rest >> 1) & 1;
      std::vector<int> lg(3), lr(3);
      int o = 0;
      for (int s = 0; s < 3; ++s) {
        if (s == atom) { lg[s] = 0; lr[s] = 1; }
        else { lg[s] = (o == 0 ? other1 : other2); lr[s] = lg[s]; ++o; }
      }
      int gi = reg.pack(lg), ri = reg.pack(lr);
      H(gi, ri) += om[atom] * e;
      H(ri, gi) += om[atom] * std::conj(e);
    }
  }
  auto n_r = [&](int state, int atom) { return (reg.unpack(state)[atom] == 1) ? 1 : 0; };
  for (int s = 0; s < 8; ++s) {
    int r1 = n_r(s, 0), r2 = n_r(s, 1), r3 = n_r(s, 2);
    H(s, s) += chain.v1 * (r1 * r2 + r2 * r3) + chain.v2 * (r1 * r3);
  }
  return OperatorMatrix::hermitian(reg, std::move(H));
}

OperatorMatrix build_recovery_hamiltonian(double omega_1r) {
  if (!(omega_1r > 0)) throw std::invalid_argument("omega_1r must be positive");
  Mat H = Mat::Zero(3, 3);
  H(LEVEL_R, LEVEL_0) = omega_1r;
  H(LEVEL_0, LEVEL_R) = omega_1r;
  return OperatorMatrix::hermitian(Register({3}), std::move(H));
}

}  // namespace rydholo
