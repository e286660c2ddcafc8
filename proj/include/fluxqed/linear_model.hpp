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

#pragma once

#include <array>
#include <string>
#include <vector>

#include "fluxqed/circuit_model.hpp"

namespace fluxqed {

/// Normal modes of the rotating-wave linear Hamiltonian
/// omega a^dag a + omega_q b^dag b + g1 (a b^dag + a^dag b).
///
/// a = mu1 c + nu1 d, b = mu2 c + nu2 d with (mu1, nu1, mu2, nu2) =
/// (cos, -sin, sin, cos) of theta, where tan(2 theta) = -2 g1 / Delta and
/// theta lies in (-pi/4, pi/4] so that theta -> 0 as g1 -> 0.
struct NormalModes {
  double theta = 0.0;
  double Omega1 = 0.0;  ///< photon-like mode
  double Omega2 = 0.0;  ///< qubit-like mode
  double mu1 = 1.0, nu1 = 0.0, mu2 = 0.0, nu2 = 1.0;
  double r1 = 0.0;  ///<  sqrt(2) cos^2(theta) sin(theta)
  double r2 = 0.0;  ///< -sqrt(2) cos^3(theta)

  /// Largest violation of the canonical commutation constraints.
  double canonical_residual() const;
};

NormalModes normal_modes(double omega, double omega_q, double g1);

/// Amplitudes of the dressed states on the bare basis |n_r n_q>.
struct DressedStates {
  static constexpr std::array<const char*, 5> kBasis = {"10", "01", "20", "11",
                                                        "02"};
  std::array<double, 5> one_zero{};  ///< |1bar 0bar>, energy Omega1
  std::array<double, 5> zero_one{};  ///< |0bar 1bar>, energy Omega2
  std::array<double, 5> two_zero{};  ///< |2bar 0bar>, energy 2 Omega1
};

DressedStates dressed_states(const NormalModes& nm);

/// Four-level Hamiltonian on {|0>, |a>, |b>, |c>} after |a> has been
/// adiabatically eliminated from the |a>-|b> coupling.
struct EffectiveHamiltonian {
  double E_a = 0.0;
  double E_b = 0.0;
  double E_c = 0.0;
  double lambda2_eff = 0.0;  ///< r2 eta2', couples |b> and |c>
  double delta_prime = 0.0;  ///< Omega2 - 2 Omega1
  /// r1^2 eta2'^2 / Omega1, the level shift from eliminating |a>.
  double elimination_shift = 0.0;
  bool perturbative = true;  ///< |Omega1| >> |r1 eta2'|
};

EffectiveHamiltonian effective_hamiltonian(const NormalModes& nm,
                                           double eta2_prime);

struct Nonlinearity {
  double perturbative = 0.0;  ///< -g2^2 / delta'
  /// Shift of the two-photon-like level from exact 2x2 dressing,
  /// delta'/2 - sign(delta') sqrt(delta'^2/4 + g2^2).
  double exact = 0.0;
  /// False when |delta'| <= 2 |g2|; callers should use `exact` then.
  bool perturbative_valid = true;
};

Nonlinearity nonlinearity(const EffectiveHamiltonian& eh);

/// Exact 2x2 dressed shift of a level coupled with strength g to a level
/// detuned by delta.
double dressed_shift(double delta, double g);

/// Scaling laws of a Kerr scheme versus the chi^(2) scheme. These are
/// scalings, not absolute rates.
struct KerrComparison {
  double kerr_nl = 0.0;    ///< g1^4 / delta^3
  double kerr_loss = 0.0;  ///< gamma g1^2 / delta^2
  double this_nl = 0.0;    ///< g2^2 / delta
  double this_loss = 0.0;  ///< gamma (g1^2 / Delta^2 + g2^2 / delta^2)
};

KerrComparison kerr_comparison(double g1, double g2, double gamma, double delta,
                               double Delta);

/// Every analytic quantity at one flux bias.
struct LinearModel {
  FluxBias bias;  ///< as supplied (not wrapped)
  BaseQuantities base;
  LinearizationPoint lp;
  DressedFrequencies freqs;
  Couplings couplings;
  NormalModes modes;
  double g2 = 0.0;
  EffectiveHamiltonian effective;
  Nonlinearity nl;
  std::vector<std::string> warnings;
};

LinearModel analyze(const CircuitParams& p, const FluxBias& b);

}  // namespace fluxqed
