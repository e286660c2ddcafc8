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

#include "fluxqed/protocol.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/numeric/odeint.hpp>

#include "fluxqed/error.hpp"
#include "fluxqed/linear_model.hpp"
#include "fluxqed/parallel.hpp"
#include "fluxqed/units.hpp"

namespace fluxqed {

namespace {

constexpr double kPi = std::numbers::pi;
// GHz (ordinary) to rad/s, and to rad/ns for the ODE clock.
constexpr double kW = units::kTwoPi * units::kGHz;
constexpr double kWns = units::kTwoPi;

using cplx = std::complex<double>;
using State = std::array<cplx, 4>;

double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

/// Adaptive Gauss-Kronrod over [a, b] after delta = 2 g sinh(s), which maps
/// the Lorentzian-like peak of width ~g onto a smooth integrand.
template <class F>
double integrate(F f, double a, double b, double g, const char* what) {
  if (a == b) return 0.0;
  const double lo = std::asinh(std::min(a, b) / (2.0 * g));
  const double hi = std::asinh(std::max(a, b) / (2.0 * g));
  auto h = [&](double s) {
    return f(2.0 * g * std::sinh(s)) * 2.0 * g * std::cosh(s);
  };
  double err = 0.0, l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      h, lo, hi, 15, 1e-12, &err, &l1);
  if (!std::isfinite(v) || err > 1e-10 * std::max(l1, 1e-300)) {
    std::ostringstream os;
    os << what << ": quadrature did not converge (error estimate " << err
       << ")";
    throw NumericalError(os.str());
  }
  return v;
}

void check_interval(const LossParams& lp, const HoldPoint& hp) {
  lp.validate();
  if (!(hp.g2 > 0.0)) throw ParameterError("g2 must be > 0");
  const double lo = std::min(lp.delta_i, lp.delta_m);
  const double hi = std::max(lp.delta_i, lp.delta_m);
  if (lo <= -hp.omega && -hp.omega <= hi)
    throw ParameterError("sweep interval crosses delta = -omega");
}

double elimination_shift(double delta, const HoldPoint& hp) {
  const double Delta = hp.omega + delta;
  if (!(Delta > 0.0))
    throw ParameterError("qubit-resonator detuning omega + delta must be > 0");
  const NormalModes nm = normal_modes(hp.omega, hp.omega + Delta, hp.g1);
  const double lam1 = hp.g2 * std::tan(nm.theta);  // r1 eta2'
  return lam1 * lam1 / nm.Omega1;
}

/// Dressed two-photon-like and qubit-like states of the {b, c} block.
struct Dressed {
  std::array<double, 2> b_like, c_like;
};

Dressed dressed_pair(double eb, double ec, double g) {
  // [[eb, g], [g, ec]]: b-like eigenvector continuous in g -> 0.
  const double d = 0.5 * (ec - eb);
  // Principal branch keeps the b-like vector continuous in g / d -> 0.
  const double th = d != 0.0 ? 0.5 * std::atan(g / d) : 0.25 * kPi * sgn(g);
  Dressed out;
  out.b_like = {std::cos(th), -std::sin(th)};
  out.c_like = {std::sin(th), std::cos(th)};
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

double LossParams::epsilon() const { return std::sqrt(epsilon_sq); }

std::vector<std::string> LossParams::violations() const {
  std::vector<std::string> out;
  if (!std::isfinite(kappa) || kappa < 0.0) out.push_back("kappa must be >= 0");
  if (!std::isfinite(gamma) || gamma < 0.0) out.push_back("gamma must be >= 0");
  if (!(epsilon_sq > 0.0 && epsilon_sq <= 0.1))
    out.push_back("epsilon_sq must lie in (0, 0.1]");
  if (!std::isfinite(delta_i) || !std::isfinite(delta_m) || delta_m == 0.0)
    out.push_back("delta_i and delta_m must be finite and delta_m != 0");
  else if (!(std::abs(delta_i) > std::abs(delta_m)))
    out.push_back("|delta_i| must exceed |delta_m|");
  else if (sgn(delta_i) != sgn(delta_m))
    out.push_back("delta_i and delta_m must share a sign");
  if (n_phase < 0) out.push_back("n_phase must be >= 0");
  return out;
}

void LossParams::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::ostringstream os;
  os << "invalid loss parameters:";
  for (const auto& s : v) os << ' ' << s << ';';
  throw ParameterError(os.str());
}

double decay_rate(double delta, double omega, double g1, double g2,
                  const LossParams& lp) {
  if (delta == 0.0) throw ParameterError("decay_rate: delta = 0");
  const double Delta = delta + omega;
  if (Delta == 0.0) throw ParameterError("decay_rate: delta + omega = 0");
  return lp.kappa + lp.gamma * g1 * g1 / (Delta * Delta) +
         lp.gamma * g2 * g2 / (delta * delta);
}

double adiabatic_antiderivative(double delta, double g2) {
  return delta / (4.0 * g2 * std::sqrt(delta * delta + 4.0 * g2 * g2));
}

double adiabatic_integral(double g2, double delta_i, double delta_m) {
  if (!(g2 > 0.0)) throw ParameterError("g2 must be > 0");
  auto f = [g2](double d) {
    const double r = d * d + 4.0 * g2 * g2;
    return g2 / (r * std::sqrt(r));
  };
  return integrate(f, delta_m, delta_i, g2, "sweep_time");
}

double sweep_time(double g2, double epsilon, double delta_i, double delta_m) {
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be > 0");
  return adiabatic_integral(g2, delta_i, delta_m) / (epsilon * kW);
}

double sweep_time_closed_form(double g2, double epsilon, double delta_i,
                              double delta_m) {
  return std::abs(adiabatic_antiderivative(delta_i, g2) -
                  adiabatic_antiderivative(delta_m, g2)) /
         (epsilon * kW);
}

double dynamic_loss(const LossParams& lp, const HoldPoint& hp) {
  check_interval(lp, hp);
  const double g = hp.g2;
  auto f = [&](double d) {
    const double r = d * d + 4.0 * g * g;
    return decay_rate(d, hp.omega, hp.g1, g, lp) * g / (r * std::sqrt(r));
  };
  return 2.0 / lp.epsilon() * integrate(f, lp.delta_m, lp.delta_i, g, "dynamic_loss");
}

StaticLoss static_loss(const LossParams& lp, const HoldPoint& hp) {
  if (lp.delta_m == 0.0) throw ParameterError("static_loss: delta_m = 0");
  if (!(hp.g2 > 0.0)) throw ParameterError("static_loss: g2 = 0 means an infinite hold");
  StaticLoss s;
  const double x = std::abs(lp.delta_m) / (hp.g2 * hp.g2);
  s.tau_s = kPi * x / kW;
  s.L_s = kPi * x * decay_rate(lp.delta_m, hp.omega, hp.g1, hp.g2, lp);
  return s;
}

double phase_rate(double delta, const HoldPoint& hp) {
  if (delta == 0.0) throw ParameterError("phase_rate: delta = 0");
  return 3.0 * elimination_shift(delta, hp) + dressed_shift(delta, hp.g2);
}

double sweep_phase(const LossParams& lp, const HoldPoint& hp) {
  check_interval(lp, hp);
  const double g = hp.g2;
  auto f = [&](double d) {
    const double r = d * d + 4.0 * g * g;
    return phase_rate(d, hp) * g / (r * std::sqrt(r));
  };
  return integrate(f, lp.delta_m, lp.delta_i, g, "sweep_phase") / lp.epsilon();
}

// ---------------------------------------------------------------------------

double ProtocolReport::delta_at(double t) const {
  if (t <= 0.0) return loss.delta_i;
  if (t >= tau_g) return loss.delta_i;
  if (t > tau_h && t < tau_h + tau_s) return loss.delta_m;
  const double ts = t <= tau_h ? t : tau_g - t;
  const double g = hold.g2;
  const double dir = sgn(loss.delta_m - loss.delta_i);
  double y = 4.0 * g *
             (adiabatic_antiderivative(loss.delta_i, g) +
              dir * loss.epsilon() * kW * ts);
  y = std::clamp(y, -1.0 + 1e-16, 1.0 - 1e-16);
  const double d = 2.0 * g * y / std::sqrt(1.0 - y * y);
  // Never overshoot the hold detuning through rounding.
  return dir > 0 ? std::min(d, loss.delta_m) : std::max(d, loss.delta_m);
}

namespace {

ProtocolReport evaluate_design(LossParams lp, const HoldPoint& hp,
                               int samples) {
  check_interval(lp, hp);
  ProtocolReport r;
  r.hold = hp;
  r.tau_h = sweep_time(hp.g2, lp.epsilon(), lp.delta_i, lp.delta_m);
  r.sweep_phase = sweep_phase(lp, hp);
  const double rate = phase_rate(lp.delta_m, hp);
  if (rate == 0.0) throw InfeasibleDesign("phase rate vanishes at delta_m");

  // Same-sign contributions: the rate keeps the sign of -delta on each side.
  const double swept = 2.0 * std::abs(r.sweep_phase);
  while ((2.0 * lp.n_phase + 1.0) * kPi < swept) ++lp.n_phase;
  r.target_phase = (2.0 * lp.n_phase + 1.0) * kPi;
  r.tau_s = (r.target_phase - swept) / (kW * std::abs(rate));
  r.tau_g = 2.0 * r.tau_h + r.tau_s;
  r.phase = sgn(rate) * (swept + kW * std::abs(rate) * r.tau_s);
  r.loss = lp;

  r.L_d = dynamic_loss(lp, hp);
  r.L_s = kW * r.tau_s * decay_rate(lp.delta_m, hp.omega, hp.g1, hp.g2, lp);
  r.L_total = r.L_d + r.L_s;
  r.on_off_ratio = std::abs(lp.delta_i / lp.delta_m);
  r.exact_dressing = true;

  const int n = std::max(samples, 2);
  r.schedule.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double t = r.tau_g * k / (n - 1.0);
    const double d = r.delta_at(t);
    r.schedule.push_back({t, d, hp.g2, phase_rate(d, hp)});
  }
  return r;
}

}  // namespace

ProtocolReport design_protocol(const LossParams& lp_in, const HoldPoint& hp,
                               const DesignOptions& opt) {
  if (!(hp.g2 > 0.0)) throw InfeasibleDesign("g2 = 0: no nonlinearity to hold");
  if (!opt.auto_delta_m) return evaluate_design(lp_in, hp, opt.samples);

  if (!(opt.on_off_min >= 1.0)) throw ParameterError("on_off_min must be >= 1");
  const double lo = 2.0 * hp.g2;
  const double hi = std::abs(lp_in.delta_i) / opt.on_off_min;
  if (!(hi > lo)) {
    std::ostringstream os;
    os << "no hold detuning satisfies both constraints: on-off ratio >= "
       << opt.on_off_min << " needs |delta_m| <= " << hi
       << " GHz, while |delta_m| >= 2 g2 = " << lo << " GHz";
    throw InfeasibleDesign(os.str());
  }
  const double s = sgn(lp_in.delta_i);
  auto total = [&](double x) {
    LossParams lp = lp_in;
    lp.delta_m = s * x;
    return evaluate_design(lp, hp, 2).L_total;
  };
  const auto best = boost::math::tools::brent_find_minima(total, lo, hi, 40);
  LossParams lp = lp_in;
  lp.delta_m = s * best.first;
  ProtocolReport r = evaluate_design(lp, hp, opt.samples);
  const double tol = 1e-6 * hi;
  if (hi - best.first < tol || total(hi) <= best.second)
    r.binding_constraint = "on_off_min";
  else if (best.first - lo < tol)
    r.binding_constraint = "two_photon_gap";
  else
    r.binding_constraint = "none";
  if (r.binding_constraint == "on_off_min") {
    lp.delta_m = s * hi;
    r = evaluate_design(lp, hp, opt.samples);
    r.binding_constraint = "on_off_min";
  }
  return r;
}

std::vector<ScheduleSample> integrate_schedule(const ProtocolReport& r,
                                               int samples) {
  namespace ode = boost::numeric::odeint;
  const double g = r.hold.g2;
  const double dir = sgn(r.loss.delta_m - r.loss.delta_i);
  const double eps = r.loss.epsilon();
  // d(delta)/dt in GHz per ns, saturating the bound.
  auto rhs = [&](const double& d, double& dd, double) {
    const double q = d * d + 4.0 * g * g;
    dd = dir * eps * kWns * q * std::sqrt(q) / g;
  };
  std::vector<ScheduleSample> out;
  const int n = std::max(samples, 2);
  const double th_ns = r.tau_h * 1e9;
  std::vector<double> times(n);
  for (int k = 0; k < n; ++k) times[k] = th_ns * k / (n - 1.0);
  double d = r.loss.delta_i;
  auto stepper = ode::make_dense_output(1e-12, 1e-12,
                                        ode::runge_kutta_dopri5<double>());
  ode::integrate_times(stepper, rhs, d, times.begin(), times.end(),
                       th_ns / (100.0 * n),
                       [&](const double& x, double t) {
                         out.push_back({t * 1e-9, x, g, phase_rate(x, r.hold)});
                       });
  return out;
}

// ---------------------------------------------------------------------------

namespace {

/// Non-Hermitian four-level dynamics in the frame rotating at Omega1 per
/// photon. Energies in GHz, time in ns.
OracleResult run_oracle(const LossParams& lp, const HoldPoint& hp,
                        const std::function<double(double)>& delta_ns,
                        const std::vector<double>& breaks_ns,
                        const OracleOptions& opt) {
  namespace ode = boost::numeric::odeint;
  const double g = hp.g2;
  const double kappa = opt.decay ? lp.kappa : 0.0;
  const double gamma = opt.decay ? lp.gamma : 0.0;

  struct Levels {
    double ea, eb, ec, ga, gb, gc;
  };
  auto levels = [&](double t) {
    const double d = delta_ns(t);
    const double sh = elimination_shift(d, hp);
    const double Delta = hp.omega + d;
    const double th = normal_modes(hp.omega, hp.omega + Delta, hp.g1).theta;
    const double st = std::sin(th);
    Levels L;
    L.ea = -sh;
    L.eb = sh;
    L.ec = d;
    // Population rates; the two-photon state decays at kappa, one photon at
    // kappa / 2, plus the qubit admixture of each state.
    L.ga = 0.5 * kappa + gamma * st * st;
    L.gb = kappa + gamma * hp.g1 * hp.g1 / (Delta * Delta);
    L.gc = gamma;
    return L;
  };
  auto rhs = [&](const State& x, State& dx, double t) {
    const Levels L = levels(t);
    const cplx mi(0.0, -kWns);
    dx[0] = 0.0;
    dx[1] = mi * cplx(L.ea, -0.5 * L.ga) * x[1];
    dx[2] = mi * (cplx(L.eb, -0.5 * L.gb) * x[2] + g * x[3]);
    dx[3] = mi * (cplx(L.ec, -0.5 * L.gc) * x[3] + g * x[2]);
  };

  const double t0 = breaks_ns.front();
  const Levels L0 = levels(t0);
  const Dressed D0 = dressed_pair(L0.eb, L0.ec, g);
  const double n3 = 1.0 / std::sqrt(3.0);
  State psi{cplx(n3), cplx(n3), cplx(n3 * D0.b_like[0]),
            cplx(n3 * D0.b_like[1])};

  auto relative_phase = [&](const State& x, double t) {
    const Levels L = levels(t);
    const Dressed D = dressed_pair(L.eb, L.ec, g);
    const cplx b = D.b_like[0] * x[2] + D.b_like[1] * x[3];
    return -(std::arg(b) - 2.0 * std::arg(x[1]));
  };
  double unwrapped = relative_phase(psi, t0);
  double last = unwrapped;
  long steps = 0;
  auto observe = [&](const State& x, double t) {
    const double ph = relative_phase(x, t);
    double dphi = ph - last;
    dphi -= units::kTwoPi * std::round(dphi / units::kTwoPi);
    unwrapped += dphi;
    last = ph;
    ++steps;
  };

  auto stepper = ode::make_controlled(opt.abs_tol, opt.rel_tol,
                                      ode::runge_kutta_dopri5<State>());
  for (std::size_t k = 0; k + 1 < breaks_ns.size(); ++k) {
    const double a = breaks_ns[k], b = breaks_ns[k + 1];
    if (!(b > a)) continue;
    try {
      ode::integrate_adaptive(stepper, rhs, psi, a, b,
                              std::min(1e-3, 1e-3 * (b - a)), observe);
    } catch (const std::exception& e) {
      throw NumericalError(std::string("evolution oracle: ") + e.what());
    }
    for (const auto& c : psi)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw NumericalError("evolution oracle: state became non-finite");
  }

  const double t1 = breaks_ns.back();
  const Levels L1 = levels(t1);
  const Dressed D1 = dressed_pair(L1.eb, L1.ec, g);
  const cplx cc = D1.c_like[0] * psi[2] + D1.c_like[1] * psi[3];
  OracleResult out;
  out.phase = unwrapped;
  out.loss = 1.0 - 3.0 * (std::norm(psi[2]) + std::norm(psi[3]));
  out.leak = 3.0 * std::norm(cc);
  out.loss_kappa_only = 1.0 - std::exp(-kappa * kWns * (t1 - t0));
  out.steps = steps;
  return out;
}

}  // namespace

OracleResult evolve_oracle(const ProtocolReport& r, const OracleOptions& opt) {
  const double th = r.tau_h * 1e9, ts = r.tau_s * 1e9;
  auto delta = [&r](double t_ns) { return r.delta_at(t_ns * 1e-9); };
  return run_oracle(r.loss, r.hold, delta, {0.0, th, th + ts, 2.0 * th + ts},
                    opt);
}

OracleResult evolve_hold(const LossParams& lp, const HoldPoint& hp,
                         double delta, double tau, const OracleOptions& opt) {
  if (!(tau >= 0.0)) throw ParameterError("evolve_hold: tau must be >= 0");
  auto d = [delta](double) { return delta; };
  return run_oracle(lp, hp, d, {0.0, tau * 1e9}, opt);
}

// ---------------------------------------------------------------------------

std::vector<LossCurveRow> loss_curves(const LossParams& lp, const HoldPoint& hp,
                                      double delta_m_lo, double delta_m_hi,
                                      int n, unsigned workers) {
  if (n < 2) throw ParameterError("loss_curves: need at least two points");
  std::vector<LossCurveRow> rows(n);
  parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t k) {
    LossParams l = lp;
    l.delta_m = delta_m_lo + (delta_m_hi - delta_m_lo) * k / (n - 1.0);
    LossCurveRow& row = rows[k];
    row.delta_m = l.delta_m;
    row.tau_h = sweep_time(hp.g2, l.epsilon(), l.delta_i, l.delta_m);
    row.L_d = dynamic_loss(l, hp);
    const StaticLoss s = static_loss(l, hp);
    row.tau_s = s.tau_s;
    row.L_s = s.L_s;
    LossParams nk = l;
    nk.kappa = 0.0;
    row.L_s_no_kappa = static_loss(nk, hp).L_s;
  });
  return rows;
}

double optimal_hold_detuning(const LossParams& lp, const HoldPoint& hp) {
  if (!(hp.g2 > 0.0)) throw ParameterError("g2 must be > 0");
  const double s = sgn(lp.delta_m);
  auto Ls = [&](double logx) {
    LossParams l = lp;
    l.delta_m = s * std::exp(logx);
    return static_loss(l, hp).L_s;
  };
  const double lo = std::log(1e-9 * hp.omega), hi = std::log(0.5 * hp.omega);
  const auto best = boost::math::tools::brent_find_minima(Ls, lo, hi, 50);
  return s * std::exp(best.first);
}

}  // namespace fluxqed
