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

#include "fluxqed/gate.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "fluxqed/error.hpp"

namespace fluxqed {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

void enumerate(int modes, int left, Occupation& cur,
               std::vector<Occupation>& out) {
  if (static_cast<int>(cur.size()) == modes) {
    out.push_back(cur);
    return;
  }
  for (int n = 0; n <= left; ++n) {
    cur.push_back(n);
    enumerate(modes, left - n, cur, out);
    cur.pop_back();
  }
}

double wrap(double x) {
  x = std::remainder(x, 2.0 * kPi);
  return x <= -kPi ? x + 2.0 * kPi : x;
}

void check_mode(const FockSpace& s, int i) {
  if (i < 0 || i >= s.n_modes())
    throw ParameterError("mode index " + std::to_string(i) + " out of range");
}

}  // namespace

FockSpace::FockSpace(int n_modes, int cutoff)
    : n_modes_(n_modes), cutoff_(cutoff) {
  if (n_modes < 1 || cutoff < 0)
    throw ParameterError("FockSpace needs >= 1 mode and cutoff >= 0");
  Occupation cur;
  enumerate(n_modes, cutoff, cur, basis_);
  for (int k = 0; k < dim(); ++k) lookup_[basis_[k]] = k;
}

int FockSpace::index(const Occupation& occ) const {
  const auto it = lookup_.find(occ);
  if (it == lookup_.end())
    throw ParameterError("occupation tuple outside the truncated space");
  return it->second;
}

Eigen::MatrixXd FockSpace::hop(int i, int j) const {
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim(), dim());
  for (int k = 0; k < dim(); ++k) {
    Occupation o = basis_[k];
    if (o[j] == 0) continue;
    double amp = std::sqrt(double(o[j]));
    o[j] -= 1;
    amp *= std::sqrt(o[i] + 1.0);
    o[i] += 1;
    H(index(o), k) += amp;
  }
  return H;
}

FockRegister::FockRegister(int n_modes, int cutoff)
    : space(n_modes, cutoff), amplitudes(Eigen::VectorXcd::Zero(space.dim())) {
  amplitudes(0) = 1.0;  // vacuum is first in lexicographic order
}

FockRegister FockRegister::basis_state(int n_modes, const Occupation& occ,
                                       int cutoff) {
  FockRegister r(n_modes, cutoff);
  if (static_cast<int>(occ.size()) != n_modes)
    throw ParameterError("occupation tuple has the wrong length");
  r.amplitudes.setZero();
  r.amplitudes(r.space.index(occ)) = 1.0;
  return r;
}

std::complex<double> FockRegister::amplitude(const Occupation& occ) const {
  return amplitudes(space.index(occ));
}

Eigen::MatrixXcd beamsplitter(const FockSpace& s, int i, int j, bool inverse) {
  check_mode(s, i);
  check_mode(s, j);
  if (i == j) throw ParameterError("beamsplitter needs two distinct modes");
  const Eigen::MatrixXd G = s.hop(i, j) + s.hop(j, i);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  const double sign = inverse ? -1.0 : 1.0;
  Eigen::VectorXcd ph(s.dim());
  for (int k = 0; k < s.dim(); ++k)
    ph(k) = std::exp(cplx(0.0, sign * 0.25 * kPi * es.eigenvalues()(k)));
  const Eigen::MatrixXcd V = es.eigenvectors().cast<cplx>();
  return V * ph.asDiagonal() * V.adjoint();
}

Eigen::MatrixXcd nonlinear_phase(const FockSpace& s, int i, double phase,
                                 double amp) {
  check_mode(s, i);
  Eigen::VectorXcd d = Eigen::VectorXcd::Ones(s.dim());
  for (int k = 0; k < s.dim(); ++k)
    if (s.state(k)[i] == 2) d(k) = amp * std::exp(cplx(0.0, phase));
  return d.asDiagonal();
}

FockRegister apply_beamsplitter(const FockRegister& reg, int i, int j,
                                bool inverse) {
  FockRegister out = reg;
  out.amplitudes = beamsplitter(reg.space, i, j, inverse) * reg.amplitudes;
  return out;
}

FockRegister apply_nonlinear_phase(const FockRegister& reg, int i,
                                   double phase) {
  FockRegister out = reg;
  out.amplitudes = nonlinear_phase(reg.space, i, phase) * reg.amplitudes;
  return out;
}

double unitarity_residual(const Eigen::MatrixXcd& U) {
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(U.rows(), U.cols());
  return (U.adjoint() * U - I).cwiseAbs().maxCoeff();
}

double number_violation(const FockSpace& s, const Eigen::MatrixXcd& U) {
  double worst = 0.0;
  for (int r = 0; r < s.dim(); ++r) {
    const auto& a = s.state(r);
    const int na = std::accumulate(a.begin(), a.end(), 0);
    for (int c = 0; c < s.dim(); ++c) {
      const auto& b = s.state(c);
      if (na != std::accumulate(b.begin(), b.end(), 0))
        worst = std::max(worst, std::abs(U(r, c)));
    }
  }
  return worst;
}

std::array<Occupation, 4> logical_basis() {
  // q1 on (m0, m1), q2 on (m2, m3); |0>_L = |01>, |1>_L = |10>.
  return {Occupation{0, 1, 0, 1}, Occupation{0, 1, 1, 0},
          Occupation{1, 0, 0, 1}, Occupation{1, 0, 1, 0}};
}

Eigen::MatrixXcd gate_matrix(const GateOptions& opt) {
  const FockSpace s(4, 2);
  const Eigen::MatrixXcd bs = beamsplitter(s, 1, 2);
  const Eigen::MatrixXcd bs_inv = beamsplitter(s, 1, 2, true);
  Eigen::MatrixXcd shift = Eigen::MatrixXcd::Identity(s.dim(), s.dim());
  if (opt.shifter_on) {
    const double ph = kPi + opt.phase_error;
    shift = nonlinear_phase(s, 1, ph, opt.amplitude) *
            nonlinear_phase(s, 2, ph, opt.amplitude);
  }
  return bs_inv * shift * bs;
}

FockRegister two_photon_phase_gate(const FockRegister& reg,
                                   const GateOptions& opt) {
  if (reg.space.n_modes() != 4 || reg.space.cutoff() != 2)
    throw ParameterError("the gate acts on a 4-mode register with cutoff 2");
  // Only the four dual-rail states may be populated.
  Eigen::VectorXcd logical = Eigen::VectorXcd::Zero(reg.space.dim());
  for (const auto& occ : logical_basis()) {
    const int k = reg.space.index(occ);
    logical(k) = reg.amplitudes(k);
  }
  if ((reg.amplitudes - logical).norm() > 1e-12)
    throw ParameterError("register is not in the dual-rail subspace");
  FockRegister out = reg;
  out.amplitudes = gate_matrix(opt) * reg.amplitudes;
  return out;
}

GateReport analyze_gate(const Eigen::MatrixXcd& U) {
  const FockSpace s(4, 2);
  if (U.rows() != s.dim() || U.cols() != s.dim())
    throw ParameterError("analyze_gate expects a 4-mode, cutoff-2 operator");
  GateReport r;
  const auto L = logical_basis();
  for (int c = 0; c < 4; ++c) {
    const int col = s.index(L[c]);
    double inside = 0.0;
    for (int row = 0; row < 4; ++row) {
      r.logical(row, c) = U(s.index(L[row]), col);
      inside += std::norm(r.logical(row, c));
    }
    r.leakage = std::max(r.leakage, U.col(col).squaredNorm() - inside);
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) r.off_diagonal = std::max(r.off_diagonal, std::abs(r.logical(i, j)));

  const auto ph = [&](int k) { return std::arg(r.logical(k, k)); };
  r.alpha = ph(0);
  r.a = wrap(ph(1) - ph(0));
  r.b = wrap(ph(2) - ph(0));
  r.c = wrap(ph(3) - ph(2) - ph(1) + ph(0));

  Eigen::Vector4cd frame;
  frame << std::exp(cplx(0, -r.alpha)), std::exp(cplx(0, -r.alpha - r.a)),
      std::exp(cplx(0, -r.alpha - r.b)), std::exp(cplx(0, -r.alpha - r.a - r.b));
  r.normal_form = frame.asDiagonal() * r.logical;
  const Eigen::Matrix4cd cz = Eigen::Vector4cd(1, 1, 1, -1).asDiagonal();
  r.cz_distance = (r.normal_form - cz).cwiseAbs().maxCoeff();
  r.cz_equivalent = r.cz_distance < 1e-10 && r.leakage < 1e-12;
  return r;
}

double gate_fidelity(double phase_error, double amplitude) {
  if (!(amplitude >= 0.0 && amplitude <= 1.0))
    throw ParameterError("amplitude must lie in [0, 1]");
  // Local frame of the ideal circuit.
  const GateReport ideal = analyze_gate(gate_matrix());
  GateOptions opt;
  opt.phase_error = phase_error;
  opt.amplitude = amplitude;
  const GateReport real = analyze_gate(gate_matrix(opt));
  Eigen::Vector4cd frame;
  frame << std::exp(cplx(0, -ideal.alpha)),
      std::exp(cplx(0, -ideal.alpha - ideal.a)),
      std::exp(cplx(0, -ideal.alpha - ideal.b)),
      std::exp(cplx(0, -ideal.alpha - ideal.a - ideal.b));
  const Eigen::Matrix4cd M = frame.asDiagonal() * real.logical;
  const Eigen::Matrix4cd cz = Eigen::Vector4cd(1, 1, 1, -1).asDiagonal();
  return std::norm((cz.adjoint() * M).trace()) / 16.0;
}

}  // namespace fluxqed
