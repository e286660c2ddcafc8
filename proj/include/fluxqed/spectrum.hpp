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

#include <Eigen/Dense>

#include "fluxqed/circuit_model.hpp"

namespace fluxqed {

/// Truncation of the Fock (x) qubit product space.
struct BasisSpec {
  int n_fock = 16;         ///< resonator levels |0> .. |n_fock - 1>
  int n_phi = 128;         ///< interior points of the qubit phase grid
  double phi_span = 0.0;   ///< grid half-width in rad; 0 selects 12 widths
  int n_qubit_levels = 8;  ///< qubit eigenstates kept in the product basis
  double conv_tol = 1e-6;  ///< eigenvalue drift allowed under doubling, GHz

  std::vector<std::string> violations() const;
  /// Grid half-width actually used for a qubit of frequency omega_q.
  double span_for(double omega_C, double omega_q) const;
  BasisSpec doubled_fock() const;
  BasisSpec doubled_phi() const;
  BasisSpec doubled_qubit() const;
};

/// Low-lying eigenstates of the bare qubit Hamiltonian on a hard-wall phase
/// grid, with the operators entering the resonator coupling.
struct QubitBasis {
  Eigen::VectorXd grid;      ///< phase points, rad
  Eigen::VectorXd energies;  ///< GHz, ground state at 0
  Eigen::MatrixXd states;    ///< grid x levels, orthonormal columns
  Eigen::MatrixXd sin_op;    ///< <m| sin(phi + phi_x') |n>
  Eigen::MatrixXd cos_op;    ///< <m| cos(phi + phi_x') |n>
  Eigen::MatrixXd phase_op;  ///< <m| phi |n>
  /// Real antisymmetric K with <m|N|n> = -i K_mn.
  Eigen::MatrixXd charge_op;
  double center = 0.0;
  double span = 0.0;
  double boundary_amplitude = 0.0;  ///< largest kept amplitude at the walls
};

/// Solve the bare qubit. `center` overrides the grid centre (default: the
/// classical minimum from the linearization, or -phi_x if that fails).
QubitBasis solve_qubit(const CircuitParams& p, const FluxBias& b,
                       const BasisSpec& basis,
                       std::optional<double> center = std::nullopt);

struct Hamiltonian {
  Eigen::MatrixXd matrix;  ///< real symmetric, GHz, index n * n_q + q
  int n_fock = 0;
  int n_qubit = 0;
  QubitBasis qubit;
};

Hamiltonian build_hamiltonian(const CircuitParams& p, const FluxBias& b,
                              const BasisSpec& basis,
                              std::optional<double> center = std::nullopt);

/// Hermitian eigendecomposition with bare-state labels.
struct Spectrum {
  Eigen::VectorXd eigenvalues;   ///< ascending, GHz
  Eigen::MatrixXd eigenvectors;  ///< columns
  /// Dominant bare label "nq" (resonator, qubit) or "mixed".
  std::vector<std::string> labels;
  std::vector<double> label_weight;  ///< population of the dominant bare state
  int n_fock = 0;
  int n_qubit = 0;

  double energy(int k) const { return eigenvalues(k) - eigenvalues(0); }
  /// Population of |n, q> in eigenstate k.
  double population(int k, int n, int q) const;
  /// Eigenstate with the largest population on |n, q>.
  int dominant(int n, int q) const;
};

double hermiticity_residual(const Eigen::MatrixXd& H);

/// Bare eigendecomposition (no labels).
Spectrum diagonalize(const Eigen::MatrixXd& H);
Spectrum diagonalize(const Hamiltonian& H);

/// Coupling between bare product states `bare_a` and `bare_b` (flat indices
/// n * n_q + q) inside the two-dimensional eigenspace {k1, k2}.
double effective_coupling(const Spectrum& s, int k1, int k2, int bare_a,
                          int bare_b);

/// The two eigenstates sharing the |20> / |01> character.
struct TwoPhotonPair {
  int lower = 0;
  int upper = 0;
  double gap = 0.0;         ///< GHz
  double coupling = 0.0;    ///< off-diagonal of the effective 2x2 Hamiltonian
  double weight_20 = 0.0;   ///< normalized |20> share of the lower state
};

TwoPhotonPair two_photon_pair(const Spectrum& s);

/// Minimum two-photon / qubit gap along phi_x at fixed phi_x'.
struct Crossing {
  double phi_x = 0.0;
  double phi_x_prime = 0.0;
  double gap = 0.0;         ///< GHz
  double g2_numeric = 0.0;  ///< gap / 2
  double delta_analytic = 0.0;  ///< analytic two-photon detuning there
};

Crossing find_crossing(const CircuitParams& p, const BasisSpec& basis,
                       double phi_x_prime, double phi_x_lo, double phi_x_hi);

/// Largest drift of the lowest `levels` transition energies when each cutoff
/// is doubled in turn.
struct ConvergenceReport {
  double drift_fock = 0.0;
  double drift_phi = 0.0;
  double drift_qubit = 0.0;
  double max_drift() const;
};

ConvergenceReport convergence_check(const CircuitParams& p, const FluxBias& b,
                                    const BasisSpec& basis, int levels = 8);

struct SweepRow {
  double phi_x = 0.0;
  double phi_x_prime = 0.0;
  double omega = 0.0;
  double omega_q = 0.0;
  double delta = 0.0;
  double g1 = 0.0;
  double g2_analytic = 0.0;
  double g2_numeric = 0.0;
  double E_00 = 0.0, E_10 = 0.0, E_01 = 0.0, E_20 = 0.0, E_11 = 0.0;
  bool converged = false;
  bool analytic_ok = true;
  std::string note;
};

struct SweepGrid {
  double phi_x_min = 0.0, phi_x_max = 0.0;
  int n_phi_x = 1;
  double phi_x_prime_min = 0.0, phi_x_prime_max = 0.0;
  int n_phi_x_prime = 1;

  std::vector<FluxBias> points() const;  ///< phi_x' outer, phi_x inner
};

SweepRow sweep_point(const CircuitParams& p, const BasisSpec& basis,
                     const FluxBias& b);

/// Rows in grid order; points are distributed over `workers` threads.
std::vector<SweepRow> flux_sweep(const CircuitParams& p, const BasisSpec& basis,
                                 const std::vector<FluxBias>& points,
                                 unsigned workers = 1);

/// Transition-energy slope dE/dphi_x, GHz per radian.
struct LevelSlope {
  std::string label;
  double finite_difference = 0.0;  ///< Richardson-extrapolated centred FD
  double hellmann_feynman = 0.0;   ///< <dH/dphi_x> difference to the ground state
};

LevelSlope level_slope(const CircuitParams& p, const BasisSpec& basis,
                       const FluxBias& b, const std::string& label);

/// Slopes sampled on the straight flux path from `off` to `on`. Samples
/// where the level is mixed within the stencil are skipped and counted.
struct PathSlope {
  std::string label;
  double mean_abs = 0.0;  ///< GHz per radian
  double max_abs = 0.0;
  double max_hf_mismatch = 0.0;  ///< relative FD vs Hellmann-Feynman
  int used = 0;
  int skipped = 0;
};

std::vector<PathSlope> path_slopes(const CircuitParams& p,
                                   const BasisSpec& basis, const FluxBias& off,
                                   const FluxBias& on, int samples,
                                   const std::vector<std::string>& labels,
                                   unsigned workers = 1);

}  // namespace fluxqed
