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

#include <string>
#include <vector>

namespace fluxqed {

/// Hardware parameters of the resonator / dc-SQUID circuit.
///
/// Every energy is stored as an ordinary frequency E/h in GHz; the resonator
/// frequency is the bare LC frequency 1/(2 pi sqrt(L_r C_r)).
struct CircuitParams {
  double omega_C = 1.0;         ///< charging frequency E_C/h
  double omega_J = 5.0;         ///< single-junction Josephson frequency E_J/h
  double omega_L = 15.0;        ///< outer-loop inductive frequency E_L/h
  double omega_r_target = 2.225;  ///< bare resonator frequency
  double Z = 449.0;             ///< characteristic impedance, ohm
  double chi = 0.17;            ///< fraction of resonator flux threading the SQUID
  double kappa = 1e-6;          ///< cavity decay rate
  double gamma = 1e-4;          ///< qubit decay rate

  /// Hard violations; empty when the parameters are admissible.
  std::vector<std::string> violations() const;
  /// Soft diagnostics (e.g. leaving the flux-qubit regime E_J <= 10 E_C).
  std::vector<std::string> warnings() const;
  /// Throws ParameterError listing every violation.
  void validate() const;
};

/// The two reduced control fluxes, in radians.
struct FluxBias {
  double phi_x = 0.0;
  double phi_x_prime = 0.0;

  /// Both fluxes wrapped onto [-2 pi, 2 pi).
  FluxBias canonical() const;
};

/// Wrap a reduced flux onto [-2 pi, 2 pi).
double wrap_flux(double phi);

struct BaseQuantities {
  double mu = 0.0;          ///< sqrt(2 pi G0 Z)
  double L_r = 0.0;         ///< resonator inductance, H
  double C_r = 0.0;         ///< resonator capacitance, F
  double E_Lr = 0.0;        ///< (Phi0/2pi)^2 / L_r as E/h, GHz
  double omega_bare = 0.0;  ///< 1/(2 pi sqrt(L_r C_r)), GHz
};

BaseQuantities derive_base_quantities(const CircuitParams& p);

/// Classical operating point of resonator flux and qubit phase.
struct LinearizationPoint {
  double phi_cl = 0.0;
  double f = 0.0;
  double beta_cl = 0.0;  ///< -phi_x + f
  double r = 0.0;        ///< sin(beta_cl)
  double s = 0.0;        ///< sin(beta_cl + phi_x' + chi phi_cl)
  double t = 1.0;        ///< cos(beta_cl)
  double u = 1.0;        ///< cos(beta_cl + phi_x' + chi phi_cl)
  double residual = 0.0;  ///< |f - (E_J/E_L)[sin(phi_x - f) + sin(psi - f)]|
  int iterations = 0;
  bool used_newton = false;
};

/// Self-consistency residual of the qubit offset f, in radians.
double offset_residual(const CircuitParams& p, const FluxBias& b, double phi_cl,
                       double f);

LinearizationPoint linearization_point(const CircuitParams& p,
                                       const FluxBias& b);

struct DressedFrequencies {
  double omega = 0.0;    ///< dressed resonator frequency
  double omega_q = 0.0;  ///< linearized qubit frequency
  double Delta = 0.0;    ///< omega_q - omega
  double delta = 0.0;    ///< omega_q - 2 omega
};

DressedFrequencies dressed_frequencies(const CircuitParams& p,
                                       const LinearizationPoint& lp);

struct Couplings {
  double eta1 = 0.0;
  double eta2 = 0.0;
  double eta3 = 0.0;
  double g1 = 0.0;
  /// Coefficient of the chi^(2) coupling in normal-mode operators,
  /// eta2 * s * sqrt(omega_C / (2 omega_q)).
  double eta2_prime = 0.0;
};

Couplings coupling_coefficients(const CircuitParams& p,
                                const LinearizationPoint& lp,
                                const DressedFrequencies& df);

/// |g2| = sqrt(2) |eta2'| cos^3(theta).
double g2_analytic(double eta2_prime, double theta);

}  // namespace fluxqed
