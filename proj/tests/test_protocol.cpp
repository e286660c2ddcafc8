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

#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "doctest.h"
#include "fluxqed/error.hpp"
#include "fluxqed/protocol.hpp"
#include "support.hpp"

using namespace fluxqed;
using fluxqed::testing::kPi;
using fluxqed::testing::rel;
using fluxqed::testing::uniform;

namespace {

constexpr double kAngular = 2.0 * kPi * 1e9;  // GHz -> rad/s

/// Antiderivative of g / (d^2 + 4 g^2)^(3/2), differentiated by hand.
double reference_F(double d, double g) { return d / (4.0 * g * std::sqrt(d * d + 4.0 * g * g)); }

double tanh_sinh(const std::function<double(double)>& f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(f, std::min(a, b), std::max(a, b), 1e-14);
}

LossParams scan_loss() {
  LossParams lp;
  lp.kappa = 1e-6;
  lp.gamma = 1e-4;
  lp.epsilon_sq = 0.01;
  lp.delta_i = -1.76;
  lp.delta_m = -0.041;
  return lp;
}

const HoldPoint kHold{2.22663, -0.12545, 0.007419};

}  // namespace

TEST_SUITE("protocol") {

TEST_CASE("loss parameter invariants") {
  LossParams lp = scan_loss();
  CHECK(lp.violations().empty());
  lp.epsilon_sq = 0.2;
  lp.delta_m = 0.04;
  CHECK(lp.violations().size() == 2);
  CHECK_THROWS_AS(lp.validate(), ParameterError);
  lp = scan_loss();
  lp.delta_m = -2.0;
  CHECK(lp.violations().size() == 1);
}

TEST_CASE("decay rate") {
  LossParams lp = scan_loss();
  const double d = -0.05, w = 2.2, g1 = 0.1, g2 = 0.007;
  CHECK(decay_rate(d, w, g1, g2, lp) ==
        doctest::Approx(lp.kappa + lp.gamma * g1 * g1 / ((d + w) * (d + w)) +
                        lp.gamma * g2 * g2 / (d * d)).epsilon(1e-15));
  lp.gamma = 0.0;
  CHECK(decay_rate(d, w, g1, g2, lp) == lp.kappa);
  lp.gamma = 1e-4;
  CHECK(decay_rate(-1e6, w, g1, g2, lp) == doctest::Approx(lp.kappa).epsilon(1e-12));
  CHECK_THROWS_AS(decay_rate(0.0, w, g1, g2, lp), ParameterError);
  CHECK_THROWS_AS(decay_rate(-w, w, g1, g2, lp), ParameterError);
}

TEST_CASE("sweep time") {
  const double g = 0.005, eps = 0.1;
  CHECK(sweep_time(g, eps, -0.2, -0.2) == 0.0);
  CHECK(sweep_time(g, eps / 2, -0.536, -0.041) ==
        doctest::Approx(2.0 * sweep_time(g, eps, -0.536, -0.041)).epsilon(1e-13));

  const double closed = (reference_F(-0.041, g) - reference_F(-0.536, g)) / (eps * kAngular);
  const double ts = tanh_sinh([g](double d) { return g / std::pow(d * d + 4 * g * g, 1.5); },
                              -0.536, -0.041) / (eps * kAngular);
  const double tau = sweep_time(g, eps, -0.536, -0.041);
  CHECK(rel(tau, closed) < 1e-8);
  CHECK(rel(tau, ts) < 1e-8);
  CHECK(rel(sweep_time_closed_form(g, eps, -0.536, -0.041), closed) < 1e-13);
}

TEST_CASE("sweep time quadrature over the loss-curve range, random draws") {
  auto gen = fluxqed::testing::rng(30);
  for (int k = 0; k < fluxqed::testing::kDraws; ++k) {
    const double g = uniform(gen, 1e-3, 0.02);
    const double dm = -uniform(gen, 0.041, 0.536);
    const double di = dm - uniform(gen, 1e-3, 2.0);
    const double eps = std::sqrt(uniform(gen, 1e-4, 0.1));
    CHECK(rel(sweep_time(g, eps, di, dm), sweep_time_closed_form(g, eps, di, dm)) < 1e-8);
  }
}

TEST_CASE("dynamic loss") {
  LossParams lp = scan_loss();
  lp.gamma = 0.0;
  const double tau = sweep_time(kHold.g2, lp.epsilon(), lp.delta_i, lp.delta_m);
  CHECK(dynamic_loss(lp, kHold) == doctest::Approx(2.0 * lp.kappa * kAngular * tau).epsilon(1e-12));
  lp.kappa = 0.0;
  CHECK(dynamic_loss(lp, kHold) == 0.0);

  lp = scan_loss();
  const double g = kHold.g2;
  auto integrand = [&](double d) {
    const double G = lp.kappa + lp.gamma * kHold.g1 * kHold.g1 / ((d + kHold.omega) * (d + kHold.omega)) +
                     lp.gamma * g * g / (d * d);
    return G * g / std::pow(d * d + 4 * g * g, 1.5);
  };
  const double ref = 2.0 / lp.epsilon() * tanh_sinh(integrand, lp.delta_i, lp.delta_m);
  CHECK(rel(dynamic_loss(lp, kHold), ref) < 1e-8);

  lp.delta_i = -3.0;  // crosses delta = -omega
  CHECK_THROWS_AS(dynamic_loss(lp, kHold), ParameterError);
}

TEST_CASE("static loss") {
  LossParams lp = scan_loss();
  const HoldPoint hp = kHold;
  const double x = std::abs(lp.delta_m);
  const StaticLoss s = static_loss(lp, hp);
  CHECK(s.tau_s == doctest::Approx(kPi * x / (hp.g2 * hp.g2) / kAngular).epsilon(1e-14));
  const double ref = kPi * (lp.kappa * x / (hp.g2 * hp.g2) +
                            lp.gamma * x / ((lp.delta_m + hp.omega) * (lp.delta_m + hp.omega)) *
                                (hp.g1 / hp.g2) * (hp.g1 / hp.g2) +
                            lp.gamma / x);
  CHECK(s.L_s == doctest::Approx(ref).epsilon(1e-13));

  lp.gamma = 0.0;
  const double a = static_loss(lp, hp).L_s;
  lp.delta_m *= 2.0;
  CHECK(static_loss(lp, hp).L_s == doctest::Approx(2.0 * a).epsilon(1e-14));
  CHECK(a == doctest::Approx(kPi * lp.kappa * x / (hp.g2 * hp.g2)));

  CHECK_THROWS_AS(static_loss(lp, {2.2, 0.1, 0.0}), ParameterError);
}

TEST_CASE("static loss bound with g1 = g2") {
  auto gen = fluxqed::testing::rng(31);
  for (int k = 0; k < fluxqed::testing::kDraws; ++k) {
    const double w = uniform(gen, 1.0, 5.0);
    const double g = uniform(gen, 1e-3, 0.05);
    LossParams lp = scan_loss();
    lp.kappa = uniform(gen, 1e-7, 1e-5);
    lp.gamma = uniform(gen, 1e-6, 1e-3);
    lp.delta_m = -uniform(gen, 1e-3, 0.49) * w;
    lp.delta_i = 1.01 * lp.delta_m;
    const double d = std::abs(lp.delta_m);
    const double bound = kPi * (lp.kappa * d / (g * g) + 2.0 * lp.gamma / d);
    CHECK(static_loss(lp, {w, g, g}).L_s <= bound);
  }
}

TEST_CASE("static loss optimum approaches g2 sqrt(gamma / kappa)") {
  auto gen = fluxqed::testing::rng(32);
  int used = 0;
  for (int k = 0; k < fluxqed::testing::kDraws; ++k) {
    const double w = uniform(gen, 1.5, 5.0);
    const double g2 = uniform(gen, 1e-3, 0.02);
    LossParams lp = scan_loss();
    lp.kappa = uniform(gen, 1e-7, 1e-5);
    const double target = uniform(gen, 1e-3, w / 50.0);
    lp.gamma = lp.kappa * (target / g2) * (target / g2);
    const double star = g2 * std::sqrt(lp.gamma / lp.kappa);
    if (!(star < w / 50.0)) continue;
    lp.delta_m = -star;
    const HoldPoint hp{w, uniform(gen, 0.0, 2.0 * g2), g2};
    CHECK(std::abs(std::abs(optimal_hold_detuning(lp, hp)) / star - 1.0) < 0.05);
    ++used;
  }
  CHECK(used > 990);
}

TEST_CASE("loss curves: L_d monotone, L_s single interior minimum") {
  auto gen = fluxqed::testing::rng(33);
  for (int k = 0; k < 200; ++k) {
    LossParams lp = scan_loss();
    lp.kappa = uniform(gen, 1e-7, 1e-5);
    lp.gamma = lp.kappa * uniform(gen, 10.0, 1000.0);
    const HoldPoint hp{uniform(gen, 1.5, 3.0), -uniform(gen, 0.0, 0.2), uniform(gen, 2e-3, 0.01)};
    lp.delta_i = -0.9 * hp.omega;
    const auto rows = loss_curves(lp, hp, -0.45 * hp.omega, -2.5 * hp.g2, 120);
    int minima = 0;
    bool monotone = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      // |delta_m| shrinks along the rows, so L_d must not decrease.
      if (rows[i].L_d < rows[i - 1].L_d) monotone = false;
      if (i + 1 < rows.size() && rows[i].L_s < rows[i - 1].L_s && rows[i].L_s < rows[i + 1].L_s)
        ++minima;
      CHECK(rows[i].L_s > rows[i].L_s_no_kappa);
    }
    CHECK(monotone);
    CHECK(minima <= 1);
  }
}

TEST_CASE("lossless design reaches pi exactly") {
  LossParams lp = scan_loss();
  lp.kappa = lp.gamma = 0.0;
  const ProtocolReport r = design_protocol(lp, kHold);
  CHECK(r.L_total == 0.0);
  CHECK(std::abs(r.phase) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(r.tau_g == doctest::Approx(2.0 * r.tau_h + r.tau_s).epsilon(1e-15));
}

TEST_CASE("designed report invariants") {
  const LossParams lp = scan_loss();
  const ProtocolReport r = design_protocol(lp, kHold);
  CHECK(r.tau_g == doctest::Approx(2.0 * r.tau_h + r.tau_s).epsilon(1e-15));
  CHECK(r.L_total >= lp.kappa * kAngular * r.tau_g);
  CHECK(std::abs(r.phase) == doctest::Approx(r.target_phase).epsilon(1e-14));
  CHECK(r.on_off_ratio == doctest::Approx(std::abs(lp.delta_i / lp.delta_m)));
  CHECK(r.schedule.front().delta == lp.delta_i);
  CHECK(r.schedule.back().delta == lp.delta_i);
  CHECK(r.delta_at(r.tau_h + 0.5 * r.tau_s) == lp.delta_m);

  DesignOptions opt;
  opt.auto_delta_m = true;
  const ProtocolReport a = design_protocol(lp, kHold, opt);
  CHECK(a.on_off_ratio >= 100.0 * (1.0 - 1e-9));
  CHECK(std::abs(a.loss.delta_m) >= 2.0 * kHold.g2);

  LossParams tight = lp;
  tight.delta_i = -0.5;
  CHECK_THROWS_AS(design_protocol(tight, kHold, opt), InfeasibleDesign);
}

TEST_CASE("schedule saturates the adiabaticity bound") {
  const ProtocolReport r = design_protocol(scan_loss(), kHold);
  const double g = kHold.g2, eps = r.loss.epsilon();
  // Along the bound, F(delta(t)) grows linearly at rate eps in angular units.
  const auto ode = integrate_schedule(r, 201);
  REQUIRE(ode.size() == 201);
  const double span = std::abs(reference_F(r.loss.delta_m, g) - reference_F(r.loss.delta_i, g));
  for (const auto& s : ode) {
    const double predicted = reference_F(r.loss.delta_i, g) + eps * kAngular * s.t;
    CHECK(std::abs(reference_F(s.delta, g) - predicted) < 1e-8 * span);
    CHECK(std::abs(s.delta - r.delta_at(s.t)) < 1e-7 * std::abs(s.delta));
  }
  // Pointwise: g^2 ddelta^2 / (delta^2 + 4 g^2)^3 = eps^2 from a centred
  // difference of the closed-form schedule (angular units).
  for (int k = 1; k < 50; ++k) {
    const double t = r.tau_h * k / 50.0, h = 1e-5 * r.tau_h;
    const double rate = (r.delta_at(t + h) - r.delta_at(t - h)) / (2.0 * h) / kAngular;
    const double d = r.delta_at(t);
    const double lhs = g * g * rate * rate / std::pow(d * d + 4 * g * g, 3);
    CHECK(std::abs(lhs / (eps * eps) - 1.0) < 1e-6);
  }
}

TEST_CASE("evolution oracle: static hold") {
  const HoldPoint hp = kHold;
  LossParams lp = scan_loss();
  OracleOptions quiet;
  quiet.decay = false;
  const double d = -20.0 * hp.g2, tau = 100e-9;
  const OracleResult a = evolve_hold(lp, hp, d, tau, quiet);
  const double designed = kAngular * phase_rate(d, hp) * tau;
  CHECK(std::abs(a.phase - designed) < 1e-6);
  // Perturbative -g2^2 / delta plus the elimination shifts, to O((g2/delta)^2).
  const double pert = kAngular * (phase_rate(d, hp) - (0.5 * d - std::copysign(std::hypot(0.5 * d, hp.g2), d)) -
                                  hp.g2 * hp.g2 / d) * tau;
  CHECK(rel(a.phase, pert) < 4.0 * (hp.g2 / d) * (hp.g2 / d));
  CHECK(std::abs(a.loss) < 1e-9);

  const OracleResult b = evolve_hold(lp, hp, d, 2.0 * tau, quiet);
  CHECK(b.phase == doctest::Approx(2.0 * a.phase).epsilon(1e-7));

  lp.gamma = 0.0;
  const HoldPoint weak{hp.omega, hp.g1, 1e-9};
  const OracleResult c = evolve_hold(lp, weak, d, 1e-6);
  CHECK(c.loss == doctest::Approx(1.0 - std::exp(-lp.kappa * kAngular * 1e-6)).epsilon(1e-8));
  CHECK(c.loss == doctest::Approx(c.loss_kappa_only).epsilon(1e-8));
}

}  // TEST_SUITE
