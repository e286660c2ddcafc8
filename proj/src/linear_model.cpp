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

#include "fluxqed/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fluxqed/error.hpp"

namespace fluxqed {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
}

double NormalModes::canonical_residual() const {
  const double n1 = std::abs(mu1 * mu1 + nu1 * nu1 - 1.0);
  const double n2 = std::abs(mu2 * mu2 + nu2 * nu2 - 1.0);
  const double cross = std::abs(mu1 * mu2 + nu1 * nu2);
  return std::max({n1, n2, cross});
}

NormalModes normal_modes(double omega, double omega_q, double g1) {
  const double Delta = omega_q - omega;
  if (!(Delta > 0.0))
    throw ParameterError("normal modes require Delta = omega_q - omega > 0");
  if (!std::isfinite(g1)) throw ParameterError("g1 must be finite");
  NormalModes nm;
  nm.theta = 0.5 * std::atan(-2.0 * g1 / Delta);
  const double root = std::hypot(1.0, 2.0 * g1 / Delta);
  nm.Omega1 = omega + 0.5 * Delta * (1.0 - root);
  nm.Omega2 = omega + 0.5 * Delta * (1.0 + root);
  const double c = std::cos(nm.theta);
  const double s = std::sin(nm.theta);
  nm.mu1 = c;
  nm.nu1 = -s;
  nm.mu2 = s;
  nm.nu2 = c;
  nm.r1 = kSqrt2 * c * c * s;
  nm.r2 = -kSqrt2 * c * c * c;
  return nm;
}

DressedStates dressed_states(const NormalModes& nm) {
  const double c = std::cos(nm.theta);
  const double s = std::sin(nm.theta);
  DressedStates ds;
  ds.one_zero = {c, s, 0.0, 0.0, 0.0};
  ds.zero_one = {-s, c, 0.0, 0.0, 0.0};
  ds.two_zero = {0.0, 0.0, c * c, kSqrt2 * c * s, s * s};
  return ds;
}

EffectiveHamiltonian effective_hamiltonian(const NormalModes& nm,
                                           double eta2_prime) {
  if (nm.Omega1 == 0.0)
    throw NumericalError("adiabatic elimination is singular at Omega1 = 0");
  EffectiveHamiltonian eh;
  const double lambda1 = nm.r1 * eta2_prime;
  eh.elimination_shift = lambda1 * lambda1 / nm.Omega1;
  eh.E_a = nm.Omega1 - eh.elimination_shift;
  eh.E_b = 2.0 * nm.Omega1 + eh.elimination_shift;
  eh.E_c = nm.Omega2;
  eh.lambda2_eff = nm.r2 * eta2_prime;
  eh.delta_prime = nm.Omega2 - 2.0 * nm.Omega1;
  eh.perturbative = std::abs(nm.Omega1) > 10.0 * std::abs(lambda1);
  return eh;
}

double dressed_shift(double delta, double g) {
  if (delta == 0.0) return -std::abs(g);  // lower branch of the degenerate pair
  const double half = 0.5 * delta;
  return half - std::copysign(std::hypot(half, g), delta);
}

Nonlinearity nonlinearity(const EffectiveHamiltonian& eh) {
  if (eh.delta_prime == 0.0)
    throw NumericalError("nonlinearity is singular at delta' = 0");
  const double g2 = std::abs(eh.lambda2_eff);
  Nonlinearity nl;
  nl.perturbative = -g2 * g2 / eh.delta_prime;
  nl.exact = dressed_shift(eh.delta_prime, g2);
  nl.perturbative_valid = std::abs(eh.delta_prime) > 2.0 * g2;
  return nl;
}

KerrComparison kerr_comparison(double g1, double g2, double gamma, double delta,
                               double Delta) {
  if (delta == 0.0 || Delta == 0.0)
    throw ParameterError("Kerr comparison needs nonzero detunings");
  const double d2 = delta * delta;
  KerrComparison k;
  k.kerr_nl = std::pow(g1, 4) / (d2 * delta);
  k.kerr_loss = gamma * g1 * g1 / d2;
  k.this_nl = g2 * g2 / delta;
  k.this_loss = gamma * (g1 * g1 / (Delta * Delta) + g2 * g2 / d2);
  return k;
}

LinearModel analyze(const CircuitParams& p, const FluxBias& b) {
  LinearModel m;
  m.bias = b;
  m.warnings = p.warnings();
  m.base = derive_base_quantities(p);
  m.lp = linearization_point(p, b);
  m.freqs = dressed_frequencies(p, m.lp);
  m.couplings = coupling_coefficients(p, m.lp, m.freqs);
  m.modes = normal_modes(m.freqs.omega, m.freqs.omega_q, m.couplings.g1);
  m.g2 = g2_analytic(m.couplings.eta2_prime, m.modes.theta);
  m.effective = effective_hamiltonian(m.modes, m.couplings.eta2_prime);
  if (!m.effective.perturbative)
    m.warnings.push_back("|Omega1| is not >> |r1 eta2'|: elimination of |a> is marginal");
  if (m.effective.delta_prime != 0.0) {
    m.nl = nonlinearity(m.effective);
    if (!m.nl.perturbative_valid)
      m.warnings.push_back("|delta'| <= 2 g2: use the exactly dressed nonlinearity");
  } else {
    m.nl.exact = dressed_shift(0.0, m.g2);
    m.nl.perturbative = m.nl.exact;
    m.nl.perturbative_valid = false;
  }
  return m;
}

}  // namespace fluxqed
