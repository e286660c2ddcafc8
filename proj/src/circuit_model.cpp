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

#include "fluxqed/circuit_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fluxqed/error.hpp"
#include "fluxqed/units.hpp"

namespace fluxqed {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDamping = 0.5;
constexpr int kFixedPointSteps = 50;
constexpr int kMaxIterations = 200;
constexpr double kTolerance = 1e-13;

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

std::vector<std::string> CircuitParams::violations() const {
  std::vector<std::string> out;
  auto positive = [&](double v, const char* name) {
    if (!finite_positive(v)) out.push_back(std::string(name) + " must be > 0");
  };
  positive(omega_C, "omega_C");
  positive(omega_J, "omega_J");
  positive(omega_L, "omega_L");
  positive(omega_r_target, "omega_r");
  positive(Z, "Z");
  if (!std::isfinite(chi) || chi < 0.0 || chi >= 1.0)
    out.push_back("chi must lie in [0, 1)");
  if (!std::isfinite(kappa) || kappa < 0.0) out.push_back("kappa must be >= 0");
  if (!std::isfinite(gamma) || gamma < 0.0) out.push_back("gamma must be >= 0");
  return out;
}

std::vector<std::string> CircuitParams::warnings() const {
  std::vector<std::string> out;
  if (omega_J > 10.0 * omega_C)
    out.push_back("E_J > 10 E_C: qubit is outside the flux regime");
  if (finite_positive(Z)) {
    const double mu = std::sqrt(units::kTwoPi * units::kConductanceQuantum * Z);
    if (mu >= 1.0) out.push_back("mu >= 1: flux expansion is not controlled");
  }
  return out;
}

void CircuitParams::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::ostringstream os;
  os << "invalid circuit parameters:";
  for (const auto& s : v) os << ' ' << s << ';';
  throw ParameterError(os.str());
}

double wrap_flux(double phi) {
  if (!std::isfinite(phi)) throw ParameterError("flux bias must be finite");
  const double period = 4.0 * kPi;
  double w = phi - period * std::floor((phi + 2.0 * kPi) / period);
  if (w >= 2.0 * kPi) w -= period;  // rounding at the upper edge
  return w;
}

FluxBias FluxBias::canonical() const {
  return {wrap_flux(phi_x), wrap_flux(phi_x_prime)};
}

BaseQuantities derive_base_quantities(const CircuitParams& p) {
  if (!finite_positive(p.Z)) throw ParameterError("Z must be > 0");
  if (!finite_positive(p.omega_r_target))
    throw ParameterError("omega_r must be > 0");
  BaseQuantities q;
  q.mu = std::sqrt(units::kTwoPi * units::kConductanceQuantum * p.Z);
  const double w = units::angular(p.omega_r_target);
  q.L_r = p.Z / w;
  q.C_r = 1.0 / (w * p.Z);
  const double phi0_red = units::kFluxQuantum / units::kTwoPi;
  q.E_Lr = phi0_red * phi0_red / q.L_r / units::kPlanck / units::kGHz;
  q.omega_bare = 1.0 / (units::kTwoPi * std::sqrt(q.L_r * q.C_r)) / units::kGHz;
  return q;
}

double offset_residual(const CircuitParams& p, const FluxBias& b, double phi_cl,
                       double f) {
  const double psi = b.phi_x - b.phi_x_prime - p.chi * phi_cl;
  const double rhs =
      p.omega_J / p.omega_L * (std::sin(b.phi_x - f) + std::sin(psi - f));
  return std::abs(f - rhs);
}

LinearizationPoint linearization_point(const CircuitParams& p,
                                       const FluxBias& raw) {
  p.validate();
  const FluxBias b = raw.canonical();
  const BaseQuantities base = derive_base_quantities(p);

  LinearizationPoint lp;
  const double dphi = b.phi_x - b.phi_x_prime;
  lp.phi_cl = p.omega_J * p.chi * std::sin(dphi) /
              (base.E_Lr + p.omega_J * p.chi * p.chi * std::cos(dphi));

  // Stationarity of the qubit phase: E_L f = E_J [sin(phi_x - f) + sin(psi - f)].
  const double psi = dphi - p.chi * lp.phi_cl;
  const double ratio = p.omega_J / p.omega_L;
  auto map = [&](double f) {
    return ratio * (std::sin(b.phi_x - f) + std::sin(psi - f));
  };
  double f = 0.0;
  int it = 0;
  for (; it < kFixedPointSteps; ++it) {
    const double next = (1.0 - kDamping) * f + kDamping * map(f);
    const bool done = std::abs(next - f) < kTolerance;
    f = next;
    if (done) break;
  }
  if (std::abs(f - map(f)) > kTolerance) {
    lp.used_newton = true;
    for (; it < kMaxIterations; ++it) {
      const double g = f - map(f);
      const double dg =
          1.0 + ratio * (std::cos(b.phi_x - f) + std::cos(psi - f));
      if (dg <= 0.0) break;  // non-convex potential, Newton is unreliable
      f -= g / dg;
      if (std::abs(g) < kTolerance) break;
    }
  }
  lp.iterations = it;
  lp.residual = std::abs(f - map(f));
  if (!(lp.residual < 1e-12))
    throw ConvergenceError("qubit offset f did not converge", lp.residual);

  lp.f = f;
  lp.beta_cl = -b.phi_x + f;
  const double gamma = lp.beta_cl + b.phi_x_prime + p.chi * lp.phi_cl;
  lp.r = std::sin(lp.beta_cl);
  lp.t = std::cos(lp.beta_cl);
  lp.s = std::sin(gamma);
  lp.u = std::cos(gamma);
  return lp;
}

DressedFrequencies dressed_frequencies(const CircuitParams& p,
                                       const LinearizationPoint& lp) {
  const BaseQuantities base = derive_base_quantities(p);
  const double stiffness = 1.0 + p.chi * p.chi * p.omega_J * lp.u / base.E_Lr;
  if (stiffness <= 0.0)
    throw ParameterError("effective resonator inductance is not positive");
  const double curvature = p.omega_L + p.omega_J * (lp.t + lp.u);
  if (curvature <= 0.0)
    throw ParameterError("unstable qubit potential: E_L + E_J (t + u) <= 0");
  DressedFrequencies df;
  df.omega = base.omega_bare * std::sqrt(stiffness);
  df.omega_q = std::sqrt(p.omega_C * curvature);
  df.Delta = df.omega_q - df.omega;
  df.delta = df.omega_q - 2.0 * df.omega;
  return df;
}

Couplings coupling_coefficients(const CircuitParams& p,
                                const LinearizationPoint& lp,
                                const DressedFrequencies& df) {
  const BaseQuantities base = derive_base_quantities(p);
  Couplings c;
  c.eta1 = p.chi * p.omega_J * base.mu;
  c.eta2 = c.eta1 * c.eta1 / (2.0 * p.omega_J);
  c.eta3 = c.eta1 * base.omega_bare / (2.0 * p.omega_J);
  const double zpf = std::sqrt(p.omega_C / (2.0 * df.omega_q));
  c.g1 = c.eta1 * lp.u * zpf - c.eta3 / (2.0 * zpf);
  c.eta2_prime = c.eta2 * lp.s * zpf;
  return c;
}

double g2_analytic(double eta2_prime, double theta) {
  const double c = std::cos(theta);
  return std::abs(std::numbers::sqrt2 * eta2_prime * c * c * c);
}

}  // namespace fluxqed
