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
#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fluxqed {

using Occupation = std::vector<int>;

/// Multimode Fock space truncated at a total photon number, with basis
/// states enumerated lexicographically in their occupation tuples.
class FockSpace {
 public:
  FockSpace(int n_modes, int cutoff);

  int n_modes() const { return n_modes_; }
  int cutoff() const { return cutoff_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const Occupation& state(int k) const { return basis_.at(k); }
  /// Index of an occupation tuple; throws if it is outside the space.
  int index(const Occupation& occ) const;

  /// a_i^dag a_j (number conserving, so exact on the truncated space).
  Eigen::MatrixXd hop(int i, int j) const;

 private:
  int n_modes_, cutoff_;
  std::vector<Occupation> basis_;
  std::map<Occupation, int> lookup_;
};

struct FockRegister {
  FockSpace space;
  Eigen::VectorXcd amplitudes;

  FockRegister(int n_modes, int cutoff = 2);
  static FockRegister basis_state(int n_modes, const Occupation& occ,
                                  int cutoff = 2);
  double norm() const { return amplitudes.norm(); }
  std::complex<double> amplitude(const Occupation& occ) const;
};

/// exp[i (pi/4)(a_i^dag a_j + a_j^dag a_i)], or its inverse.
Eigen::MatrixXcd beamsplitter(const FockSpace& s, int i, int j,
                              bool inverse = false);

/// Multiplies every basis state with n_i = 2 by amp * exp(i phase).
Eigen::MatrixXcd nonlinear_phase(const FockSpace& s, int i,
                                 double phase = 3.141592653589793,
                                 double amp = 1.0);

FockRegister apply_beamsplitter(const FockRegister& reg, int i, int j,
                                bool inverse = false);
FockRegister apply_nonlinear_phase(const FockRegister& reg, int i,
                                   double phase = 3.141592653589793);

double unitarity_residual(const Eigen::MatrixXcd& U);
/// Largest matrix element connecting different total photon numbers.
double number_violation(const FockSpace& s, const Eigen::MatrixXcd& U);

/// Layout: qubit 1 on modes (0, 1), qubit 2 on modes (2, 3), |0>_L = |01>,
/// |1>_L = |10>. Modes 1 and 2 interact: beamsplitter, a shifter on each,
/// inverse beamsplitter.
struct GateOptions {
  bool shifter_on = true;
  double phase_error = 0.0;  ///< added to each shifter's pi, radians
  double amplitude = 1.0;    ///< two-photon amplitude kept by each shifter
};

/// Dual-rail logical basis states in the order 00, 01, 10, 11.
std::array<Occupation, 4> logical_basis();

Eigen::MatrixXcd gate_matrix(const GateOptions& opt = {});

/// Apply the composed circuit; the register must hold exactly one photon in
/// each dual-rail pair.
FockRegister two_photon_phase_gate(const FockRegister& reg,
                                   const GateOptions& opt = {});

/// Local-phase normal form of a diagonal two-qubit gate
/// e^{i alpha} diag(1, e^{i a}, e^{i b}, e^{i (a + b + c)}).
struct GateReport {
  Eigen::Matrix4cd logical;      ///< restricted to the dual-rail subspace
  double leakage = 0.0;          ///< largest out-of-subspace probability
  double alpha = 0.0, a = 0.0, b = 0.0;
  double c = 0.0;                ///< entangling phase, wrapped to (-pi, pi]
  double off_diagonal = 0.0;     ///< largest |off-diagonal| logical element
  double cz_distance = 0.0;      ///< distance to CZ after local phases
  bool cz_equivalent = false;    ///< cz_distance < 1e-10
  /// Logical action with the local phases removed.
  Eigen::Matrix4cd normal_form;
};

GateReport analyze_gate(const Eigen::MatrixXcd& U);

/// |tr(CZ^dag M)|^2 / 16 with M the logical action of the lossy circuit in
/// the local frame of the ideal circuit.
double gate_fidelity(double phase_error, double amplitude);

}  // namespace fluxqed
