// Copyright 2026 The fluxqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance run at the reference parameter set. One PASS/FAIL line per
// criterion; the exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fluxqed/commands.hpp"
#include "fluxqed/config.hpp"
#include "fluxqed/gate.hpp"
#include "fluxqed/linear_model.hpp"
#include "fluxqed/protocol.hpp"
#include "fluxqed/spectrum.hpp"

using namespace fluxqed;

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kMHz = 1e3;  // GHz -> MHz

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  /// Record one check; the criterion passes only if all of them do.
  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [x]");
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double wrap(double x) { return std::remainder(x, 2.0 * kPi); }

RunConfig reference() {
  return load_config(std::string(FLUXQED_SOURCE_DIR) + "/configs/paper.cfg");
}

// 1 -------------------------------------------------------------------------
void parameters(Verdict& v) {
  const RunConfig c = reference();
  const Json m = model_report(c);
  const double Z = m["base"]["Z_ohm"];
  const double e1 = m["couplings"]["eta1"], e2 = m["couplings"]["eta2"],
               e3 = m["couplings"]["eta3"];
  v.require(c.circuit.omega_L == 3.0 * c.circuit.omega_J, "omega_L = 3 omega_J");
  v.require(std::abs(Z / 449.0 - 1.0) <= 0.01, fmt("Z %.1f ohm", Z));
  v.require(std::abs(e1 / 0.400 - 1.0) <= 0.02, fmt("eta1 %.1f MHz", e1 * kMHz));
  v.require(std::abs(e2 / 0.016 - 1.0) <= 0.02, fmt("eta2 %.2f MHz", e2 * kMHz));
  v.require(std::abs(e3 / 0.089 - 1.0) <= 0.02, fmt("eta3 %.2f MHz", e3 * kMHz));
}

// 2 -------------------------------------------------------------------------
void crossing(Verdict& v) {
  const RunConfig c = reference();
  const FluxBias on = c.path.on.value_or(c.flux);
  const Crossing x = find_crossing(c.circuit, c.basis, on.phi_x_prime,
                                   on.phi_x - 0.3, on.phi_x + 0.3);
  const auto t0 = std::chrono::steady_clock::now();
  const SweepRow row = sweep_point(c.circuit, c.basis, {x.phi_x, x.phi_x_prime});
  const double point_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const ConvergenceReport conv =
      convergence_check(c.circuit, {x.phi_x, x.phi_x_prime}, c.basis);
  const double gap = x.gap * kMHz;
  v.require(gap >= 7.0 && gap <= 13.0,
            fmt("splitting %.2f MHz at phi_x %.4f (10 MHz +-30%%)", gap, x.phi_x));
  v.require(conv.max_drift() < 1e-6,
            fmt("doubling drift %.2g kHz", conv.max_drift() * 1e6));
  v.require(row.converged && point_s < 60.0, fmt("%.2f s per flux point", point_s));
}

// 3 -------------------------------------------------------------------------
/// Largest-|g2| two-photon crossing over the reference phi_x' range.
Crossing strongest_crossing(const CircuitParams& p, const BasisSpec& basis,
                            double& g2_analytic) {
  double best = 0.0, bx = 0.0, bxp = 0.0;
  for (double xp = 0.4; xp <= 2.0 + 1e-9; xp += 0.1) {
    double prev = std::nan("");
    for (double x = -kPi; x <= kPi; x += 0.02) {
      const LinearModel m = analyze(p, {x, xp});
      if (prev * m.freqs.delta < 0.0 && std::abs(m.g2) > best) {
        best = std::abs(m.g2);
        bx = x;
        bxp = xp;
      }
      prev = m.freqs.delta;
    }
  }
  const Crossing x = find_crossing(p, basis, bxp, bx - 0.3, bx + 0.3);
  g2_analytic = analyze(p, {x.phi_x, x.phi_x_prime}).g2;
  return x;
}

void analytics(Verdict& v) {
  const RunConfig c = reference();
  const FluxBias on = c.path.on.value_or(c.flux);
  SweepGrid cut = c.sweep.grid;
  cut.phi_x_prime_min = cut.phi_x_prime_max = on.phi_x_prime;
  cut.n_phi_x_prime = 1;
  const auto rows = flux_sweep(c.circuit, c.basis, cut.points(), 1);
  double d2w = 0.0, dq = 0.0, at2w = 0.0, atq = 0.0;
  int used = 0;
  for (const auto& r : rows) {
    if (!r.analytic_ok || !r.converged) continue;
    const double a = std::abs(2.0 * r.omega - r.E_20) / r.E_20;
    const double b = std::abs(r.omega_q - r.E_01) / r.E_01;
    if (a > d2w) d2w = a, at2w = r.phi_x;
    if (b > dq) dq = b, atq = r.phi_x;
    ++used;
  }
  v.require(used > 0 && d2w <= 0.02,
            fmt("2 omega vs E_20 max %.2f%% at phi_x %.2f", 100 * d2w, at2w));
  v.require(used > 0 && dq <= 0.02,
            fmt("omega_q vs E_01 max %.2f%% at phi_x %.2f", 100 * dq, atq));

  // g2 in the E_L >> E_J regime: E_L = 10 E_J, junctions weakened so the
  // qubit still reaches twice the resonator frequency.
  CircuitParams p = c.circuit;
  p.omega_J = 2.0;
  p.omega_L = 20.0;
  double g2a = 0.0;
  const Crossing x = strongest_crossing(p, c.basis, g2a);
  const double ratio = std::abs(g2a) / x.g2_numeric;
  v.require(std::abs(ratio - 1.0) <= 0.2,
            fmt("E_L = 10 E_J: g2 analytic/half-gap %.3f at phi_x' %.1f", ratio,
                x.phi_x_prime));

  const Crossing r = find_crossing(c.circuit, c.basis, on.phi_x_prime,
                                   on.phi_x - 0.3, on.phi_x + 0.3);
  const double g2r = analyze(c.circuit, {r.phi_x, r.phi_x_prime}).g2;
  v.detail << "; reference point ratio " << fmt("%.3f", std::abs(g2r) / r.g2_numeric)
           << " (info)";
}

// 4 -------------------------------------------------------------------------
void loss_optimum(Verdict& v) {
  std::mt19937_64 gen(0x5eed0004ull);
  auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen); };
  double worst = 0.0;
  int used = 0;
  for (int k = 0; k < 1000; ++k) {
    const double w = U(1.5, 5.0);
    const double g2 = U(1e-3, 0.02);
    LossParams lp;
    lp.kappa = U(1e-7, 1e-5);
    // Draw the optimum itself so every draw meets the precondition.
    const double target = U(1e-3, w / 50.0);
    lp.gamma = lp.kappa * (target / g2) * (target / g2);
    lp.delta_i = -0.9 * w;
    const double star = g2 * std::sqrt(lp.gamma / lp.kappa);
    if (!(star < w / 50.0)) continue;
    lp.delta_m = -star;
    const HoldPoint hp{w, U(0.0, 2.0 * g2), g2};
    worst = std::max(worst, std::abs(std::abs(optimal_hold_detuning(lp, hp)) / star - 1.0));
    ++used;
  }
  v.require(used >= 990 && worst <= 0.05,
            fmt("|delta_m*| vs g2 sqrt(gamma/kappa): worst %.2f%% over %.0f draws", 100 * worst,
                used));

  const RunConfig c = reference();
  const auto rows = loss_curves(c.protocol.loss, hold_point(c), c.protocol.scan_lo,
                                c.protocol.scan_hi, c.protocol.scan_points, 1);
  bool above = true;
  for (const auto& r : rows) above = above && r.L_s > r.L_s_no_kappa;
  const auto far = std::max_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::abs(a.delta_m) < std::abs(b.delta_m);
  });
  const double kappa_share = (far->L_s - far->L_s_no_kappa) / far->L_s;
  v.require(above, "L_s above the kappa = 0 curve");
  v.require(kappa_share > 0.5,
            fmt("kappa share of L_s at %.0f MHz: %.2f", far->delta_m * kMHz, kappa_share));
}

// 5 -------------------------------------------------------------------------
void loss_scan(Verdict& v) {
  const RunConfig c = reference();
  const LossParams& lp = c.protocol.loss;
  v.require(lp.kappa == 1e-6 && std::abs(lp.gamma / lp.kappa - 100.0) < 1e-9 && lp.epsilon_sq == 0.01,
            "kappa 1 kHz, gamma 100 kappa, eps^2 0.01");
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = loss_curves(lp, hold_point(c), -0.536, -0.041, c.protocol.scan_points, 1);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool monotone = true;
  int minima = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const bool farther = std::abs(rows[k].delta_m) > std::abs(rows[k - 1].delta_m);
    if (farther ? rows[k].L_d > rows[k - 1].L_d : rows[k].L_d < rows[k - 1].L_d)
      monotone = false;
    if (k + 1 < rows.size() && rows[k].L_s < rows[k - 1].L_s && rows[k].L_s < rows[k + 1].L_s)
      ++minima;
  }
  v.require(rows.size() == 100, fmt("%.0f rows", rows.size()));
  v.require(monotone, "L_d monotone in |delta_m|");
  v.require(minima == 1, fmt("L_s interior minima: %.0f", minima));
  v.require(secs < 10.0, fmt("%.3f s", secs));
}

// 6 -------------------------------------------------------------------------
void protocol_phase(Verdict& v) {
  const RunConfig c = reference();
  const ProtocolProducts pp = protocol_products(c, 1);
  const auto& r = pp.report;
  const auto& o = pp.oracle;
  const double err = wrap(o.phase - r.target_phase);
  v.require(std::abs(err) <= 1e-3,
            fmt("oracle phase - %.0f pi = %.2e rad", r.target_phase / kPi, err));
  v.require(o.leak <= r.loss.epsilon_sq, fmt("leak %.3g (eps^2 %.3g)", o.leak, r.loss.epsilon_sq));
  const double dev = o.loss / r.L_total - 1.0;
  v.require(std::abs(dev) <= 0.2,
            fmt("oracle loss %.4g vs budget %.4g (%+.1f%%)", o.loss, r.L_total, 100 * dev));
}

// 7 -------------------------------------------------------------------------
void gate(Verdict& v) {
  const GateReport g = analyze_gate(gate_matrix());
  v.require(g.cz_distance < 1e-10, fmt("CZ normal-form distance %.1e", g.cz_distance));

  const auto hom = apply_beamsplitter(FockRegister::basis_state(2, {1, 1}), 0, 1);
  const double null = std::abs(hom.amplitude({1, 1}));
  v.require(null < 1e-15, fmt("HOM <1,1|BS|1,1> = %.1e", null));

  FockRegister in(2, 2);
  in.amplitudes.setZero();
  const double s3 = 1.0 / std::sqrt(3.0);
  for (const Occupation& o : {Occupation{0, 0}, Occupation{1, 0}, Occupation{2, 0}})
    in.amplitudes(in.space.index(o)) = s3;
  const auto out = apply_nonlinear_phase(in, 0);
  Eigen::VectorXcd want = in.amplitudes;
  want(in.space.index({2, 0})) = -s3;
  const double dev = (out.amplitudes - want).cwiseAbs().maxCoeff();
  v.require(dev < 1e-15, fmt("pi shifter deviation %.1e", dev));
}

// 8 -------------------------------------------------------------------------
void quadrature(Verdict& v) {
  const RunConfig c = reference();
  const HoldPoint hp = hold_point(c);
  LossParams lp = c.protocol.loss;
  double worst_t = 0.0, worst_l = 0.0;
  for (int k = 0; k < 200; ++k) {
    lp.delta_m = -0.536 + (0.536 - 0.041) * k / 199.0;
    const double eps = lp.epsilon();
    const double t = sweep_time(hp.g2, eps, lp.delta_i, lp.delta_m);
    const double tc = sweep_time_closed_form(hp.g2, eps, lp.delta_i, lp.delta_m);
    worst_t = std::max(worst_t, std::abs(t / tc - 1.0));
    // Constant decay makes the loss integrand the adiabaticity integrand.
    LossParams k_only = lp;
    k_only.gamma = 0.0;
    const double ld = dynamic_loss(k_only, hp);
    const double lc = 2.0 * lp.kappa * 2.0 * kPi * 1e9 * tc;
    worst_l = std::max(worst_l, std::abs(ld / lc - 1.0));
  }
  v.require(worst_t <= 1e-8, fmt("tau_h worst rel %.1e", worst_t));
  v.require(worst_l <= 1e-8, fmt("L_d worst rel %.1e", worst_l));
}

// 9 -------------------------------------------------------------------------
void slopes(Verdict& v) {
  const RunConfig c = reference();
  const auto s = path_slopes(c.circuit, c.basis, *c.path.off, *c.path.on, c.path.samples,
                             {"10", "20", "01"}, 1);
  const double s10 = s[0].mean_abs * kMHz, s20 = s[1].mean_abs * kMHz,
               s01 = s[2].mean_abs * kMHz;
  v.require(s10 >= 25.0 && s10 <= 75.0, fmt("single photon %.1f MHz/rad", s10));
  v.require(s20 >= 50.0 && s20 <= 150.0, fmt("two photon %.1f MHz/rad", s20));
  v.require(s01 <= 1000.0, fmt("qubit %.0f MHz/rad", s01));
  double hf = 0.0;
  for (const auto& p : s) hf = std::max(hf, p.max_hf_mismatch);
  v.require(hf <= 1e-6, fmt("FD vs Hellmann-Feynman %.1e", hf));
}

// 10 ------------------------------------------------------------------------
void properties(Verdict& v) {
  std::mt19937_64 gen(0x5eed000aull);
  auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen); };
  BasisSpec basis;
  basis.n_fock = 6;
  basis.n_phi = 64;
  basis.n_qubit_levels = 4;
  double canon = 0.0, herm = 0.0, norm = 0.0, period = 0.0, decouple = 0.0;
  int modes = 0;
  const int draws = 1000;
  for (int k = 0; k < draws; ++k) {
    CircuitParams p;
    p.omega_C = U(0.5, 2.0);
    p.omega_J = U(1.0, 8.0);
    p.omega_L = p.omega_J * U(2.5, 6.0);
    p.omega_r_target = U(1.0, 4.0);
    p.Z = U(50.0, 500.0);
    p.chi = U(0.01, 0.3);
    const FluxBias b{U(-2 * kPi, 2 * kPi), U(-2 * kPi, 2 * kPi)};

    const auto lp = linearization_point(p, b);
    const auto df = dressed_frequencies(p, lp);
    const auto cc = coupling_coefficients(p, lp, df);
    canon = std::max({canon, std::abs(lp.r * lp.r + lp.t * lp.t - 1.0),
                      std::abs(lp.s * lp.s + lp.u * lp.u - 1.0)});
    if (df.omega_q > df.omega) {
      const NormalModes nm = normal_modes(df.omega, df.omega_q, cc.g1);
      canon = std::max(canon, nm.canonical_residual());
      const DressedStates ds = dressed_states(nm);
      double n10 = 0.0, n20 = 0.0;
      for (int i = 0; i < 5; ++i) {
        n10 += ds.one_zero[i] * ds.one_zero[i];
        n20 += ds.two_zero[i] * ds.two_zero[i];
      }
      norm = std::max({norm, std::abs(n10 - 1.0), std::abs(n20 - 1.0)});
      ++modes;
    }

    const auto lq = linearization_point(p, {b.phi_x + 2 * kPi, b.phi_x_prime + 2 * kPi});
    const auto dq = dressed_frequencies(p, lq);
    const auto cq = coupling_coefficients(p, lq, dq);
    for (double d : {df.omega - dq.omega, df.omega_q - dq.omega_q, cc.g1 - cq.g1,
                     cc.eta2_prime - cq.eta2_prime})
      period = std::max(period, std::abs(d));

    const Hamiltonian h = build_hamiltonian(p, b, basis);
    herm = std::max(herm, hermiticity_residual(h.matrix));
    const Spectrum s = diagonalize(h);
    const Eigen::MatrixXd gram = s.eigenvectors.transpose() * s.eigenvectors;
    norm = std::max(norm, (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols()))
                              .cwiseAbs()
                              .maxCoeff());

    p.chi = 0.0;
    const auto l0 = linearization_point(p, b);
    const auto c0 = coupling_coefficients(p, l0, dressed_frequencies(p, l0));
    decouple = std::max({decouple, std::abs(c0.g1), std::abs(c0.eta2_prime),
                         std::abs(c0.eta3)});
    const Hamiltonian h0 = build_hamiltonian(p, b, basis);
    const Spectrum s0 = diagonalize(h0);
    std::vector<double> ladder;
    const double w = derive_base_quantities(p).omega_bare;
    for (int n = 0; n < basis.n_fock; ++n)
      for (int q = 0; q < basis.n_qubit_levels; ++q) ladder.push_back(n * w + h0.qubit.energies(q));
    std::sort(ladder.begin(), ladder.end());
    for (int i = 0; i < 6; ++i) decouple = std::max(decouple, std::abs(s0.energy(i) - ladder[i]));
  }
  v.require(canon < 1e-12, fmt("canonical/trig constraints %.1e", canon));
  v.require(herm < 1e-12, fmt("Hermiticity %.1e", herm));
  v.require(norm < 1e-12, fmt("eigenvector normalization %.1e", norm));
  v.require(period < 1e-8, fmt("2 pi flux periodicity %.1e", period));
  v.require(decouple < 1e-10, fmt("chi -> 0 decoupling %.1e", decouple));
  v.require(modes > draws / 2, fmt("%.0f draws, %.0f with omega_q > omega", draws, modes));
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Verdict&)> run;
    double budget_s = 0.0;  ///< 0: no wall-clock requirement
  };
  const std::vector<Criterion> all = {
      {1, "parameter reproduction", parameters, 1.0},
      {2, "avoided crossing", crossing},
      {3, "analytics vs numerics", analytics},
      {4, "static-loss optimum", loss_optimum},
      {5, "loss-scan data products", loss_scan},
      {6, "protocol phase", protocol_phase},
      {7, "gate verification", gate, 1.0},
      {8, "quadrature correctness", quadrature},
      {9, "level slopes", slopes},
      {10, "property suites", properties},
  };
  int failed = 0;
  for (const auto& c : all) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("threw: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0) v.require(secs < c.budget_s, fmt("budget %.0f s", c.budget_s));
    std::printf("%s  %2d %-24s %7.2f s  %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                v.detail.str().c_str());
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
