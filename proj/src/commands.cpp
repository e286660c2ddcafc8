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

#include "fluxqed/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <thread>

#include "fluxqed/error.hpp"
#include "fluxqed/linear_model.hpp"

#ifndef FLUXQED_VERSION
#define FLUXQED_VERSION "0.0.0"
#endif

namespace fluxqed {

namespace {

constexpr double kPi = std::numbers::pi;

unsigned resolve_workers(const RunConfig& c, unsigned requested) {
  if (requested > 0) return requested;
  if (c.workers > 0) return c.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

Json flux_json(const FluxBias& b) {
  return Json{{"phi_x", b.phi_x}, {"phi_x_prime", b.phi_x_prime}};
}

double wrap_phase(double x) { return std::remainder(x, 2.0 * kPi); }

/// Sign-aware "more idle" comparison: further from zero on delta_i's side.
bool further(double a, double b, double sign) { return sign * a > sign * b; }

}  // namespace

std::string version() { return FLUXQED_VERSION; }

int classify_exception(std::exception_ptr e, std::string& kind,
                       std::string& message) {
  try {
    std::rethrow_exception(e);
  } catch (const ConfigError& x) {
    kind = "config";
    message = x.what();
    return kExitConfig;
  } catch (const ParameterError& x) {
    kind = "parameter";
    message = x.what();
    return kExitConfig;
  } catch (const InfeasibleDesign& x) {
    kind = "infeasible";
    message = x.what();
    return kExitInfeasible;
  } catch (const ConvergenceError& x) {
    kind = "convergence";
    message = x.what();
    return kExitNumerical;
  } catch (const Error& x) {
    kind = "numerical";
    message = x.what();
    return kExitNumerical;
  } catch (const std::exception& x) {
    kind = "internal";
    message = x.what();
    return kExitNumerical;
  }
}

Json provenance(const RunConfig& c) {
  return Json{{"tool", "fluxqed"}, {"version", version()},
              {"config_hash", c.hash()}};
}

Json model_report(const RunConfig& c) {
  const LinearModel m = analyze(c.circuit, c.flux);
  Json j;
  j["provenance"] = provenance(c);
  j["config"] = c.sections();
  j["bias"] = flux_json(m.bias);
  j["units"] = "frequencies in GHz (E/h), angles in rad, L in H, C in F";
  j["base"] = {{"mu", m.base.mu},
               {"Z_ohm", c.circuit.Z},
               {"L_r", m.base.L_r},
               {"C_r", m.base.C_r},
               {"E_Lr", m.base.E_Lr},
               {"omega_bare", m.base.omega_bare}};
  j["linearization"] = {{"phi_cl", m.lp.phi_cl}, {"f", m.lp.f},
                        {"beta_cl", m.lp.beta_cl}, {"r", m.lp.r},
                        {"s", m.lp.s}, {"t", m.lp.t}, {"u", m.lp.u},
                        {"residual", m.lp.residual},
                        {"iterations", m.lp.iterations},
                        {"used_newton", m.lp.used_newton}};
  j["frequencies"] = {{"omega", m.freqs.omega}, {"omega_q", m.freqs.omega_q},
                      {"Delta", m.freqs.Delta}, {"delta", m.freqs.delta}};
  j["couplings"] = {{"eta1", m.couplings.eta1}, {"eta2", m.couplings.eta2},
                    {"eta3", m.couplings.eta3}, {"g1", m.couplings.g1},
                    {"eta2_prime", m.couplings.eta2_prime}, {"g2", m.g2}};
  j["modes"] = {{"theta", m.modes.theta}, {"Omega1", m.modes.Omega1},
                {"Omega2", m.modes.Omega2}, {"r1", m.modes.r1},
                {"r2", m.modes.r2}};
  j["effective"] = {{"E_a", m.effective.E_a},
                    {"E_b", m.effective.E_b},
                    {"E_c", m.effective.E_c},
                    {"lambda2_eff", m.effective.lambda2_eff},
                    {"delta_prime", m.effective.delta_prime},
                    {"elimination_shift", m.effective.elimination_shift},
                    {"perturbative", m.effective.perturbative}};
  j["nonlinearity"] = {{"N_l", m.nl.perturbative},
                       {"N_l_exact", m.nl.exact},
                       {"perturbative_valid", m.nl.perturbative_valid}};
  j["warnings"] = m.warnings;
  return j;
}

// ---------------------------------------------------------------------------

SweepProducts sweep_products(const RunConfig& c, unsigned workers_req) {
  const unsigned workers = resolve_workers(c, workers_req);
  SweepProducts out;
  out.points = c.sweep.grid.points();
  out.rows = flux_sweep(c.circuit, c.basis, out.points, workers);
  Json& s = out.summary;
  s["provenance"] = provenance(c);
  s["points"] = out.rows.size();
  s["converged"] = std::count_if(out.rows.begin(), out.rows.end(),
                                 [](const SweepRow& r) { return r.converged; });

  // On: largest analytic |g2| near two-photon resonance.
  int on = -1;
  for (int i = 0; i < static_cast<int>(out.rows.size()); ++i) {
    const auto& r = out.rows[i];
    if (!r.analytic_ok || !(std::abs(r.delta) <= c.sweep.on_delta_window))
      continue;
    if (on < 0 || std::abs(r.g2_analytic) > std::abs(out.rows[on].g2_analytic))
      on = i;
  }
  // Off: on the same phi_x' row, furthest detuned on delta_i's side.
  const double side = c.protocol.loss.delta_i < 0 ? -1.0 : 1.0;
  int off = -1;
  if (on >= 0) {
    for (int i = 0; i < static_cast<int>(out.rows.size()); ++i) {
      const auto& r = out.rows[i];
      if (!r.analytic_ok || r.phi_x_prime != out.rows[on].phi_x_prime) continue;
      if (off < 0 || further(r.delta, out.rows[off].delta, side)) off = i;
    }
  }
  auto point_json = [&](int i) {
    const auto& r = out.rows[i];
    return Json{{"phi_x", r.phi_x}, {"phi_x_prime", r.phi_x_prime},
                {"delta", r.delta}, {"g1", r.g1}, {"g2_analytic", r.g2_analytic},
                {"g2_numeric", r.g2_numeric}};
  };
  s["detected_on"] = on >= 0 ? point_json(on) : Json(nullptr);
  s["detected_off"] = off >= 0 ? point_json(off) : Json(nullptr);
  if (on >= 0 && off >= 0)
    s["detected_on_off_ratio"] =
        std::abs(out.rows[off].delta / out.rows[on].delta);

  FluxBias on_b = c.path.on.value_or(
      on >= 0 ? FluxBias{out.rows[on].phi_x, out.rows[on].phi_x_prime} : c.flux);
  std::optional<FluxBias> off_b = c.path.off;
  if (!off_b && off >= 0) off_b = FluxBias{out.rows[off].phi_x, out.rows[off].phi_x_prime};
  s["on"] = flux_json(on_b);
  s["on_source"] = c.path.on ? "config" : (on >= 0 ? "sweep" : "flux");
  if (off_b) s["off"] = flux_json(*off_b);

  // Avoided crossing near the on point.
  const Crossing x = find_crossing(c.circuit, c.basis, on_b.phi_x_prime,
                                   on_b.phi_x - 0.3, on_b.phi_x + 0.3);
  const LinearModel mx = analyze(c.circuit, {x.phi_x, x.phi_x_prime});
  const ConvergenceReport conv =
      convergence_check(c.circuit, {x.phi_x, x.phi_x_prime}, c.basis);
  s["crossing"] = {{"phi_x", x.phi_x},
                   {"phi_x_prime", x.phi_x_prime},
                   {"splitting", x.gap},
                   {"g2_half_gap", x.g2_numeric},
                   {"g2_analytic", mx.g2},
                   {"g2_ratio", mx.g2 / x.g2_numeric},
                   {"delta_analytic", x.delta_analytic},
                   {"delta_prime_analytic", mx.effective.delta_prime},
                   {"drift_fock", conv.drift_fock},
                   {"drift_phi", conv.drift_phi},
                   {"drift_qubit", conv.drift_qubit},
                   {"converged", conv.max_drift() < c.basis.conv_tol}};

  // Analytic 2 omega and omega_q against the labelled levels along a phi_x
  // cut at the on row.
  SweepGrid cut = c.sweep.grid;
  cut.phi_x_prime_min = cut.phi_x_prime_max = on_b.phi_x_prime;
  cut.n_phi_x_prime = 1;
  const auto cut_rows = flux_sweep(c.circuit, c.basis, cut.points(), workers);
  double dev_2w = 0.0, dev_q = 0.0, dev_2o1 = 0.0, dev_o2 = 0.0;
  int used = 0;
  for (const auto& r : cut_rows) {
    if (!r.analytic_ok || !r.converged) continue;
    dev_2w = std::max(dev_2w, std::abs(2.0 * r.omega - r.E_20) / r.E_20);
    dev_q = std::max(dev_q, std::abs(r.omega_q - r.E_01) / r.E_01);
    if (r.omega_q > r.omega) {
      // Same comparison after the linear (normal-mode) dressing.
      const NormalModes nm = normal_modes(r.omega, r.omega_q, r.g1);
      dev_2o1 = std::max(dev_2o1, std::abs(2.0 * nm.Omega1 - r.E_20) / r.E_20);
      dev_o2 = std::max(dev_o2, std::abs(nm.Omega2 - r.E_01) / r.E_01);
    }
    ++used;
  }
  s["frequency_cut"] = {{"phi_x_prime", on_b.phi_x_prime},
                {"rows", used},
                {"max_rel_dev_2omega", dev_2w},
                {"max_rel_dev_omega_q", dev_q},
                {"max_rel_dev_2Omega1", dev_2o1},
                {"max_rel_dev_Omega2", dev_o2}};

  if (off_b) {
    const auto slopes = path_slopes(c.circuit, c.basis, *off_b, on_b,
                                    c.path.samples, {"10", "20", "01"}, workers);
    Json sl = Json::object();
    for (const auto& p : slopes)
      sl[p.label] = {{"mean_abs_GHz_per_rad", p.mean_abs},
                     {"max_abs_GHz_per_rad", p.max_abs},
                     {"max_hellmann_feynman_mismatch", p.max_hf_mismatch},
                     {"samples_used", p.used},
                     {"samples_mixed", p.skipped}};
    s["slopes"] = sl;
  }
  return out;
}

// ---------------------------------------------------------------------------

HoldPoint hold_point(const RunConfig& c) {
  const FluxBias b = c.path.on.value_or(c.flux);
  const LinearModel m = analyze(c.circuit, b);
  return {m.freqs.omega, m.couplings.g1, m.g2};
}

ProtocolProducts protocol_products(const RunConfig& c, unsigned workers_req) {
  const unsigned workers = resolve_workers(c, workers_req);
  ProtocolProducts out;
  const HoldPoint hp = hold_point(c);
  DesignOptions opt;
  opt.auto_delta_m = c.protocol.auto_delta_m;
  opt.on_off_min = c.protocol.on_off_min;
  opt.samples = c.protocol.schedule_samples;
  out.report = design_protocol(c.protocol.loss, hp, opt);
  out.oracle = evolve_oracle(out.report);
  out.curves = loss_curves(c.protocol.loss, hp, c.protocol.scan_lo,
                           c.protocol.scan_hi, c.protocol.scan_points, workers);

  const auto& r = out.report;
  Json& s = out.summary;
  s["provenance"] = provenance(c);
  s["units"] = "times in s, detunings and rates in GHz, phases in rad";
  s["hold"] = {{"omega", hp.omega}, {"g1", hp.g1}, {"g2", hp.g2}};
  s["loss_params"] = {{"kappa", r.loss.kappa}, {"gamma", r.loss.gamma},
                      {"epsilon_sq", r.loss.epsilon_sq},
                      {"delta_i", r.loss.delta_i}, {"delta_m", r.loss.delta_m},
                      {"n_phase", r.loss.n_phase}};
  s["report"] = {{"tau_h", r.tau_h},
                 {"tau_s", r.tau_s},
                 {"tau_g", r.tau_g},
                 {"L_d", r.L_d},
                 {"L_s", r.L_s},
                 {"L_total", r.L_total},
                 {"phase", r.phase},
                 {"target_phase", r.target_phase},
                 {"sweep_phase", r.sweep_phase},
                 {"on_off_ratio", r.on_off_ratio},
                 {"exact_dressing", r.exact_dressing},
                 {"delta_m_auto", c.protocol.auto_delta_m},
                 {"binding_constraint", r.binding_constraint}};
  const auto& o = out.oracle;
  s["oracle"] = {{"phase", o.phase},
                 {"phase_error", wrap_phase(o.phase - r.phase)},
                 {"loss", o.loss},
                 {"loss_rel_dev", o.loss / r.L_total - 1.0},
                 {"leak", o.leak},
                 {"loss_kappa_only", o.loss_kappa_only},
                 {"steps", o.steps}};

  // Loss-scan shape checks.
  bool ld_monotone = true;
  for (std::size_t k = 1; k < out.curves.size(); ++k) {
    const double a = std::abs(out.curves[k - 1].delta_m);
    const double b = std::abs(out.curves[k].delta_m);
    const double la = out.curves[k - 1].L_d, lb = out.curves[k].L_d;
    if ((b > a && lb > la * (1 + 1e-12)) || (b < a && lb < la * (1 - 1e-12)))
      ld_monotone = false;
  }
  int minima = 0;
  for (std::size_t k = 1; k + 1 < out.curves.size(); ++k)
    if (out.curves[k].L_s < out.curves[k - 1].L_s &&
        out.curves[k].L_s < out.curves[k + 1].L_s)
      ++minima;
  LossParams lp = c.protocol.loss;
  lp.delta_m = c.protocol.scan_hi;
  const double dm_star = optimal_hold_detuning(lp, hp);
  s["loss_scan"] = {{"points", out.curves.size()},
               {"L_d_monotone", ld_monotone},
               {"L_s_interior_minima", minima},
               {"delta_m_star", dm_star},
               {"delta_m_star_closed_form",
                hp.g2 * std::sqrt(lp.gamma / std::max(lp.kappa, 1e-300))}};
  return out;
}

// ---------------------------------------------------------------------------

GateProducts gate_products(const RunConfig& c, unsigned workers) {
  GateProducts out;
  out.ideal = analyze_gate(gate_matrix());
  GateOptions off;
  off.shifter_on = false;
  const GateReport idle = analyze_gate(gate_matrix(off));
  Json& s = out.summary;
  s["provenance"] = provenance(c);
  s["layout"] =
      "qubit 1 on modes (0,1), qubit 2 on modes (2,3), |0>_L=|01>, "
      "|1>_L=|10>; beamsplitter on modes 1,2, pi shifter on each, inverse "
      "beamsplitter";
  auto rep = [](const GateReport& g) {
    return Json{{"cz_equivalent", g.cz_equivalent}, {"cz_distance", g.cz_distance},
                {"leakage", g.leakage},             {"off_diagonal", g.off_diagonal},
                {"alpha", g.alpha},                 {"a", g.a},
                {"b", g.b},                         {"c", g.c}};
  };
  s["ideal"] = rep(out.ideal);
  s["shifter_off"] = rep(idle);
  s["fidelity_ideal"] = gate_fidelity(0.0, 1.0);
  s["fidelity_shifter_off"] = gate_fidelity(kPi, 1.0);
  if (c.gate_use_protocol) {
    const ProtocolProducts p = protocol_products(c, workers);
    const double amp = std::sqrt(std::max(0.0, 1.0 - p.report.L_total));
    const double err = wrap_phase(p.oracle.phase - p.report.phase);
    s["protocol"] = {{"L_total", p.report.L_total},
                     {"amplitude", amp},
                     {"phase_error", err},
                     {"fidelity", gate_fidelity(err, amp)},
                     {"fidelity_loss_only", gate_fidelity(0.0, amp)}};
  }
  return out;
}

// ---------------------------------------------------------------------------

void write_csv(std::ostream& os, const RunConfig& c,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  os << "# fluxqed " << version() << " config " << c.hash() << '\n';
  for (std::size_t k = 0; k < columns.size(); ++k)
    os << (k ? "," : "") << columns[k];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k)
      os << (k ? "," : "") << format_double(row[k]);
    os << '\n';
  }
}

namespace {

void write_json(const std::filesystem::path& p, const Json& j) {
  std::ofstream f(p);
  if (!f) throw NumericalError("cannot write " + p.string());
  f << j.dump(2) << '\n';
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p);
  if (!f) throw NumericalError("cannot write " + p.string());
  return f;
}

void emit_sweep(const RunConfig& c, const std::filesystem::path& dir,
                unsigned workers) {
  const SweepProducts sp = sweep_products(c, workers);
  std::vector<std::vector<double>> rows;
  for (const auto& r : sp.rows)
    rows.push_back({r.phi_x, r.phi_x_prime, r.omega, r.omega_q, r.delta, r.g1,
                    r.g2_analytic, r.g2_numeric, r.E_00, r.E_10, r.E_01,
                    r.E_20, r.E_11, r.converged ? 1.0 : 0.0});
  auto f = open_out(dir / "sweep.csv");
  write_csv(f, c,
            {"phi_x", "phi_x_prime", "omega_GHz", "omega_q_GHz", "delta_GHz",
             "g1_GHz", "g2_analytic_GHz", "g2_numeric_GHz", "E_00", "E_10",
             "E_01", "E_20", "E_11", "converged"},
            rows);
  write_json(dir / "sweep.json", sp.summary);
}

void emit_protocol(const RunConfig& c, const std::filesystem::path& dir,
                   unsigned workers) {
  const ProtocolProducts pp = protocol_products(c, workers);
  write_json(dir / "protocol.json", pp.summary);
  std::vector<std::vector<double>> sched;
  for (const auto& s : pp.report.schedule)
    sched.push_back({s.t, s.delta, s.g2, s.Nl});
  auto f = open_out(dir / "schedule.csv");
  write_csv(f, c, {"t_s", "delta_GHz", "g2_GHz", "Nl_GHz"}, sched);
  std::vector<std::vector<double>> curves;
  for (const auto& r : pp.curves)
    curves.push_back({r.delta_m, r.tau_h, r.tau_s, r.L_d, r.L_s, r.L_s_no_kappa});
  auto g = open_out(dir / "loss_curves.csv");
  write_csv(g, c,
            {"delta_m_GHz", "tau_h_s", "tau_s_s", "L_d", "L_s", "L_s_no_kappa"},
            curves);
}

void emit_gate(const RunConfig& c, const std::filesystem::path& dir,
               unsigned workers) {
  const GateProducts gp = gate_products(c, workers);
  write_json(dir / "gate.json", gp.summary);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      rows.push_back({double(i), double(j), gp.ideal.logical(i, j).real(),
                      gp.ideal.logical(i, j).imag()});
  auto f = open_out(dir / "gate_logical.csv");
  write_csv(f, c, {"row", "col", "re", "im"}, rows);
}

}  // namespace

int run_command(const std::string& name, const std::string& config_path,
                const CommandOptions& opt, std::ostream& log) {
  namespace fs = std::filesystem;
  const fs::path dir(opt.out_dir);
  std::optional<RunConfig> cfg;
  try {
    cfg = load_config(config_path);
    fs::create_directories(dir);
    const unsigned workers = resolve_workers(*cfg, opt.workers);
    if (opt.verbose) {
      log << "fluxqed " << version() << " " << name << ": config "
          << cfg->hash() << ", " << workers << " worker(s)\n";
      for (const auto& w : cfg->circuit.warnings()) log << "warning: " << w << '\n';
    }
    if (name == "model") {
      write_json(dir / "model.json", model_report(*cfg));
    } else if (name == "sweep") {
      emit_sweep(*cfg, dir, workers);
    } else if (name == "protocol") {
      emit_protocol(*cfg, dir, workers);
    } else if (name == "gate") {
      emit_gate(*cfg, dir, workers);
    } else {
      throw ConfigError("unknown subcommand '" + name + "'");
    }
    if (opt.verbose) log << "wrote " << name << " products to " << dir << '\n';
    return kExitOk;
  } catch (...) {
    std::string kind, message;
    const int code = classify_exception(std::current_exception(), kind, message);
    log << "fluxqed " << name << ": " << kind << " error: " << message << '\n';
    Json body;
    body["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
    if (cfg) body["provenance"] = provenance(*cfg);
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream f(dir / "error.json");
    if (f) f << body.dump(2) << '\n';
    return code;
  }
}

}  // namespace fluxqed
