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

// Shared helpers for the unit tests: seeded parameter draws and a few
// brute-force reference computations that do not go through the library.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "fluxqed/circuit_model.hpp"

namespace fluxqed::testing {

inline constexpr int kDraws = 1000;
inline constexpr double kPi = std::numbers::pi;

/// Deterministic generator; every suite owns its own stream.
inline std::mt19937_64 rng(std::uint64_t stream) {
  return std::mt19937_64(0x5eed0000ull + stream);
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

/// Circuit in the inductive regime E_L >= 2.5 E_J, where the qubit offset map
/// is a contraction and the linearization is well posed.
inline CircuitParams draw_circuit(std::mt19937_64& g) {
  CircuitParams p;
  p.omega_C = uniform(g, 0.5, 2.0);
  p.omega_J = uniform(g, 1.0, 8.0);
  p.omega_L = p.omega_J * uniform(g, 2.5, 6.0);
  p.omega_r_target = uniform(g, 1.0, 4.0);
  p.Z = uniform(g, 50.0, 500.0);
  p.chi = uniform(g, 0.01, 0.3);
  p.kappa = uniform(g, 0.0, 1e-5);
  p.gamma = uniform(g, 0.0, 1e-3);
  return p;
}

inline FluxBias draw_flux(std::mt19937_64& g) {
  return {uniform(g, -2.0 * kPi, 2.0 * kPi), uniform(g, -2.0 * kPi, 2.0 * kPi)};
}

/// Eigenvalues of a real symmetric matrix, ascending.
inline Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& H) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H, Eigen::EigenvaluesOnly)
      .eigenvalues();
}

/// Relative difference with an absolute floor.
inline double rel(double a, double b, double floor = 1e-300) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace fluxqed::testing
