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

#include <optional>
#include <string>
#include <vector>

namespace fluxqed {

/// Loss and schedule parameters. Rates and detunings are ordinary
/// frequencies in GHz (rate/2pi for kappa and gamma).
struct LossParams {
  double kappa = 1e-6;
  double gamma = 1e-4;
  double epsilon_sq = 0.01;
  double delta_i = -5.36;  ///< idle detuning
  double delta_m = -0.0536;  ///< hold detuning
  int n_phase = 0;  ///< target phase (2n + 1) pi

  double epsilon() const;
  std::vector<std::string> violations() const;
  void validate() const;
};

/// Couplings frozen at the hold point; delta is the control variable and the
/// qubit frequency follows as 2 omega + delta.
struct HoldPoint {
  double omega = 2.2245;
  double g1 = 0.0;
  double g2 = 0.0;
};

/// Population decay rate of the two-photon-like state, GHz.
double decay_rate(double delta, double omega, double g1, double g2,
                  const LossParams& lp);

/// Antiderivative of g2 / (delta^2 + 4 g2^2)^(3/2).
double adiabatic_antiderivative(double delta, double g2);

/// Integral of g2 / (delta^2 + 4 g2^2)^(3/2) from delta_m to delta_i by
/// adaptive Gauss-Kronrod quadrature, 1/GHz.
double adiabatic_integral(double g2, double delta_i, double delta_m);

/// Half-sweep time in seconds, bound saturated at equality.
double sweep_time(double g2, double epsilon, double delta_i, double delta_m);
double sweep_time_closed_form(double g2, double epsilon, double delta_i,
                              double delta_m);

/// (2/eps) * integral of Gamma(delta) g2 / (delta^2 + 4 g2^2)^(3/2).
double dynamic_loss(const LossParams& lp, const HoldPoint& hp);

struct StaticLoss {
  double tau_s = 0.0;  ///< pi |delta_m| / g2^2, seconds
  double L_s = 0.0;
};

StaticLoss static_loss(const LossParams& lp, const HoldPoint& hp);

/// Nonlinear phase rate E_b - 2 E_a of the four-level model at detuning
/// delta, GHz. Exact 2x2 dressing plus the three elimination shifts.
double phase_rate(double delta, const HoldPoint& hp);

/// Phase accrued during one bound-saturating sweep between delta_i and
/// delta_m, radians (signed like the rate).
double sweep_phase(const LossParams& lp, const HoldPoint& hp);

struct ScheduleSample {
  double t = 0.0;      ///< s
  double delta = 0.0;  ///< GHz
  double g2 = 0.0;     ///< GHz
  double Nl = 0.0;     ///< phase rate, GHz
};

struct ProtocolReport {
  LossParams loss;
  HoldPoint hold;
  double tau_h = 0.0, tau_s = 0.0, tau_g = 0.0;  ///< s
  double L_d = 0.0, L_s = 0.0, L_total = 0.0;
  double phase = 0.0;         ///< signed, radians
  double sweep_phase = 0.0;   ///< one sweep, radians
  double target_phase = 0.0;  ///< (2n + 1) pi with the final n
  double on_off_ratio = 0.0;
  bool exact_dressing = true;
  std::string binding_constraint;  ///< when delta_m was chosen automatically
  std::vector<ScheduleSample> schedule;

  /// Detuning at time t (seconds) from the closed-form bound-saturating
  /// solution.
  double delta_at(double t) const;
};

struct DesignOptions {
  bool auto_delta_m = false;
  double on_off_min = 100.0;
  int samples = 401;  ///< schedule rows
};

/// Build the schedule, hold time and loss budget. With auto_delta_m the hold
/// detuning minimizes L_total subject to |delta_i / delta_m| >= on_off_min
/// and |delta_m| >= 2 g2.
ProtocolReport design_protocol(const LossParams& lp, const HoldPoint& hp,
                               const DesignOptions& opt = {});

/// Sweep schedule sampled by integrating d(delta)/dt with an adaptive
/// Runge-Kutta stepper (as opposed to the closed form in delta_at).
std::vector<ScheduleSample> integrate_schedule(const ProtocolReport& r,
                                               int samples);

struct OracleOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  bool decay = true;
};

struct OracleResult {
  double phase = 0.0;  ///< -(arg b - 2 arg a), unwrapped, radians
  double loss = 0.0;   ///< norm loss of the two-photon branch
  double leak = 0.0;   ///< final population of the qubit-like dressed state
  double loss_kappa_only = 0.0;  ///< 1 - exp(-kappa tau_g) for reference
  long steps = 0;
};

/// Integrate the non-Hermitian Schrodinger equation on {|0>, |a>, |b>, |c>}
/// along the designed schedule, starting from (|0> + |a> + |b~>)/sqrt(3)
/// with |b~> the dressed two-photon-like state.
OracleResult evolve_oracle(const ProtocolReport& r,
                           const OracleOptions& opt = {});

/// Static hold at fixed delta for duration tau (s), same model.
OracleResult evolve_hold(const LossParams& lp, const HoldPoint& hp,
                         double delta, double tau,
                         const OracleOptions& opt = {});

/// Loss curves over a grid of hold detunings with couplings frozen.
struct LossCurveRow {
  double delta_m = 0.0;
  double tau_h = 0.0, tau_s = 0.0;
  double L_d = 0.0, L_s = 0.0;
  double L_s_no_kappa = 0.0;
};

std::vector<LossCurveRow> loss_curves(const LossParams& lp, const HoldPoint& hp,
                                      double delta_m_lo, double delta_m_hi,
                                      int n, unsigned workers = 1);

/// Minimize L_s over |delta_m| on (0, omega/2) (same sign as delta_m).
double optimal_hold_detuning(const LossParams& lp, const HoldPoint& hp);

}  // namespace fluxqed
