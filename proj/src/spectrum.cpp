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

#include "fluxqed/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/math/tools/minima.hpp>

#include "fluxqed/error.hpp"
#include "fluxqed/linear_model.hpp"
#include "fluxqed/parallel.hpp"

namespace fluxqed {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Colbert-Miller sine DVR on the open interval (A, B) with hard walls; the
// kinetic prefactor is omega_C / 2 for (omega_C / 2) N^2 with N = -i d/dphi.
Eigen::MatrixXd kinetic(int n, double length, double omega_C) {
  const int N = n + 1;
  const double pre = 0.5 * omega_C * kPi * kPi / (2.0 * length * length);
  Eigen::MatrixXd T(n, n);
  for (int a = 0; a < n; ++a) {
    const int i = a + 1;
    for (int b = 0; b < n; ++b) {
      const int j = b + 1;
      if (i == j) {
        const double sn = std::sin(kPi * i / N);
        T(a, b) = (2.0 * N * N + 1.0) / 3.0 - 1.0 / (sn * sn);
      } else {
        const double s1 = std::sin(kPi * (i - j) / (2.0 * N));
        const double s2 = std::sin(kPi * (i + j) / (2.0 * N));
        const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
        T(a, b) = sign * (1.0 / (s1 * s1) - 1.0 / (s2 * s2));
      }
    }
  }
  return pre * T;
}

double harmonic_width(const CircuitParams& p, const FluxBias& b) {
  try {
    const auto lp = linearization_point(p, b);
    return std::sqrt(p.omega_C / dressed_frequencies(p, lp).omega_q);
  } catch (const Error&) {
    return std::sqrt(p.omega_C / std::sqrt(p.omega_C * p.omega_L));
  }
}

double default_center(const CircuitParams& p, const FluxBias& b) {
  try {
    return linearization_point(p, b).beta_cl;
  } catch (const Error&) {
    return -b.canonical().phi_x;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<std::string> BasisSpec::violations() const {
  std::vector<std::string> out;
  if (n_fock < 4) out.push_back("n_fock must be >= 4");
  if (n_phi < 64) out.push_back("n_phi must be >= 64");
  if (!std::isfinite(phi_span) || phi_span < 0.0)
    out.push_back("phi_span must be >= 0 (0 selects the default)");
  if (n_qubit_levels < 2) out.push_back("n_qubit_levels must be >= 2");
  if (n_qubit_levels > n_phi) out.push_back("n_qubit_levels must be <= n_phi");
  if (!(conv_tol > 0.0)) out.push_back("conv_tol must be > 0");
  return out;
}

double BasisSpec::span_for(double omega_C, double omega_q) const {
  const double width = std::sqrt(omega_C / omega_q);
  return phi_span > 0.0 ? phi_span : 12.0 * width;
}

BasisSpec BasisSpec::doubled_fock() const {
  BasisSpec b = *this;
  b.n_fock *= 2;
  return b;
}

BasisSpec BasisSpec::doubled_phi() const {
  BasisSpec b = *this;
  b.n_phi *= 2;
  return b;
}

BasisSpec BasisSpec::doubled_qubit() const {
  BasisSpec b = *this;
  b.n_qubit_levels *= 2;
  return b;
}

QubitBasis solve_qubit(const CircuitParams& p, const FluxBias& raw,
                       const BasisSpec& basis, std::optional<double> center) {
  const auto bad = basis.violations();
  if (!bad.empty()) throw ConfigError("invalid basis: " + bad.front());
  const FluxBias b = raw.canonical();

  QubitBasis q;
  const double width = harmonic_width(p, b);
  q.span = basis.span_for(p.omega_C, p.omega_C / (width * width));
  if (q.span < 6.0 * width)
    throw ConfigError("phi_span covers fewer than 6 oscillator widths");
  q.center = center.value_or(default_center(p, b));

  const int n = basis.n_phi;
  const double A = q.center - q.span, B = q.center + q.span;
  q.grid.resize(n);
  for (int i = 0; i < n; ++i) q.grid(i) = A + (B - A) * (i + 1) / (n + 1.0);

  Eigen::MatrixXd H = kinetic(n, B - A, p.omega_C);
  const double cj = 2.0 * p.omega_J * std::cos(0.5 * b.phi_x_prime);
  for (int i = 0; i < n; ++i) {
    const double x = q.grid(i);
    H(i, i) += -cj * std::cos(x + 0.5 * b.phi_x_prime) +
               0.5 * p.omega_L * (x + b.phi_x) * (x + b.phi_x);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success)
    throw NumericalError("qubit eigensolver failed");

  const int k = basis.n_qubit_levels;
  q.states = es.eigenvectors().leftCols(k);
  q.energies = es.eigenvalues().head(k).array() - es.eigenvalues()(0);
  q.boundary_amplitude =
      std::max(q.states.row(0).cwiseAbs().maxCoeff(),
               q.states.row(n - 1).cwiseAbs().maxCoeff());

  const Eigen::ArrayXd arg = q.grid.array() + b.phi_x_prime;
  const Eigen::MatrixXd& V = q.states;
  q.sin_op = V.transpose() * (arg.sin().matrix().asDiagonal() * V);
  q.cos_op = V.transpose() * (arg.cos().matrix().asDiagonal() * V);
  q.phase_op = V.transpose() * (q.grid.asDiagonal() * V);
  // [H_q, phi] = -i omega_C N, so <m|N|n> = -i (E_n - E_m) <m|phi|n> / omega_C.
  q.charge_op.resize(k, k);
  for (int m = 0; m < k; ++m)
    for (int nn = 0; nn < k; ++nn)
      q.charge_op(m, nn) =
          (q.energies(nn) - q.energies(m)) * q.phase_op(m, nn) / p.omega_C;
  return q;
}

Hamiltonian build_hamiltonian(const CircuitParams& p, const FluxBias& b,
                              const BasisSpec& basis,
                              std::optional<double> center) {
  p.validate();
  Hamiltonian h;
  h.qubit = solve_qubit(p, b, basis, center);
  h.n_fock = basis.n_fock;
  h.n_qubit = basis.n_qubit_levels;
  const int nf = h.n_fock, nq = h.n_qubit;

  const BaseQuantities base = derive_base_quantities(p);
  const double eta1 = p.chi * p.omega_J * base.mu;
  const double eta2 = eta1 * eta1 / (2.0 * p.omega_J);
  const double eta3 = eta1 * base.omega_bare / (2.0 * p.omega_J);

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nf, nf);
  for (int n = 1; n < nf; ++n) a(n - 1, n) = std::sqrt(double(n));
  const Eigen::MatrixXd x = a + a.transpose();
  // x^2 built from the untruncated ladder so the top Fock level is exact.
  Eigen::MatrixXd x2 = Eigen::MatrixXd::Zero(nf, nf);
  for (int n = 0; n < nf; ++n) {
    x2(n, n) = 2.0 * n + 1.0;
    if (n + 2 < nf) x2(n, n + 2) = x2(n + 2, n) = std::sqrt((n + 1.0) * (n + 2.0));
  }
  // i (a - a^dag) (x) N = (a - a^dag) (x) K with N = -i K.
  const Eigen::MatrixXd y = a - a.transpose();

  const auto& Q = h.qubit;
  Eigen::MatrixXd& H = h.matrix;
  H = Eigen::MatrixXd::Zero(nf * nq, nf * nq);
  for (int n = 0; n < nf; ++n) {
    for (int m = 0; m < nf; ++m) {
      Eigen::MatrixXd blk = eta1 * x(n, m) * Q.sin_op +
                            eta2 * x2(n, m) * Q.cos_op +
                            eta3 * y(n, m) * Q.charge_op;
      if (n == m) {
        blk.diagonal().array() += base.omega_bare * n;
        blk.diagonal() += Q.energies;
      }
      H.block(n * nq, m * nq, nq, nq) = blk;
    }
  }
  return h;
}

// ---------------------------------------------------------------------------

double Spectrum::population(int k, int n, int q) const {
  const double c = eigenvectors(n * n_qubit + q, k);
  return c * c;
}

int Spectrum::dominant(int n, int q) const {
  int best = 0;
  double w = -1.0;
  const int levels = static_cast<int>(eigenvalues.size());
  for (int k = 0; k < levels; ++k) {
    const double pk = population(k, n, q);
    if (pk > w) {
      w = pk;
      best = k;
    }
  }
  return best;
}

double hermiticity_residual(const Eigen::MatrixXd& H) {
  const double scale = H.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (H - H.transpose()).cwiseAbs().maxCoeff() / scale;
}

Spectrum diagonalize(const Eigen::MatrixXd& H) {
  if (H.rows() != H.cols() || H.rows() == 0)
    throw NumericalError("diagonalize: matrix must be square and non-empty");
  if (!H.allFinite()) throw NumericalError("diagonalize: non-finite entries");
  const double herm = hermiticity_residual(H);
  if (herm >= 1e-12) {
    std::ostringstream os;
    os << "diagonalize: matrix is not Hermitian (relative residual " << herm
       << ")";
    throw NumericalError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eigensolver failed for a " << H.rows() << "x" << H.cols()
       << " matrix with max |H| = " << H.cwiseAbs().maxCoeff();
    throw NumericalError(os.str());
  }
  Spectrum s;
  s.eigenvalues = es.eigenvalues();
  s.eigenvectors = es.eigenvectors();
  return s;
}

Spectrum diagonalize(const Hamiltonian& H) {
  Spectrum s = diagonalize(H.matrix);
  s.n_fock = H.n_fock;
  s.n_qubit = H.n_qubit;
  const int dim = static_cast<int>(s.eigenvalues.size());
  s.labels.resize(dim);
  s.label_weight.resize(dim);
  for (int k = 0; k < dim; ++k) {
    Eigen::Index idx = 0;
    const double w = s.eigenvectors.col(k).cwiseAbs2().maxCoeff(&idx);
    s.label_weight[k] = w;
    const int n = static_cast<int>(idx) / s.n_qubit;
    const int q = static_cast<int>(idx) % s.n_qubit;
    s.labels[k] = w > 0.5 ? std::to_string(n) + std::to_string(q) : "mixed";
  }
  return s;
}

double effective_coupling(const Spectrum& s, int k1, int k2, int bare_a,
                          int bare_b) {
  // des Cloizeaux: project the bare states onto span{k1, k2}, orthonormalize
  // symmetrically and read the coupling off the 2x2 effective Hamiltonian.
  Eigen::Matrix2d X;
  X << s.eigenvectors(bare_a, k1), s.eigenvectors(bare_b, k1),
      s.eigenvectors(bare_a, k2), s.eigenvectors(bare_b, k2);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> ov(X.transpose() * X);
  if (!(ov.eigenvalues().minCoeff() > 1e-12))
    throw NumericalError("effective_coupling: bare states leave the pair span");
  const Eigen::Matrix2d U = X * ov.operatorInverseSqrt();
  const Eigen::Vector2d E(s.eigenvalues(k1), s.eigenvalues(k2));
  const Eigen::Matrix2d Heff = U.transpose() * E.asDiagonal() * U;
  return std::abs(Heff(0, 1));
}

TwoPhotonPair two_photon_pair(const Spectrum& s) {
  if (s.n_fock < 3 || s.n_qubit < 2)
    throw NumericalError("two_photon_pair: basis lacks |20> or |01>");
  const int dim = static_cast<int>(s.eigenvalues.size());
  int k1 = -1, k2 = -1;
  double w1 = -1.0, w2 = -1.0;
  for (int k = 0; k < dim; ++k) {
    const double w = s.population(k, 2, 0) + s.population(k, 0, 1);
    if (w > w1) {
      k2 = k1, w2 = w1;
      k1 = k, w1 = w;
    } else if (w > w2) {
      k2 = k, w2 = w;
    }
  }
  TwoPhotonPair pr;
  pr.lower = std::min(k1, k2);
  pr.upper = std::max(k1, k2);
  pr.gap = s.eigenvalues(pr.upper) - s.eigenvalues(pr.lower);
  const double lo = s.population(pr.lower, 2, 0);
  const double hi = s.population(pr.upper, 2, 0);
  pr.weight_20 = lo + hi > 0.0 ? lo / (lo + hi) : 0.0;

  pr.coupling = effective_coupling(s, pr.lower, pr.upper, 2 * s.n_qubit, 1);
  return pr;
}

Crossing find_crossing(const CircuitParams& p, const BasisSpec& basis,
                       double phi_x_prime, double phi_x_lo, double phi_x_hi) {
  if (!(phi_x_lo < phi_x_hi))
    throw ParameterError("find_crossing: empty phi_x bracket");
  auto gap = [&](double px) {
    const Hamiltonian h = build_hamiltonian(p, {px, phi_x_prime}, basis);
    return two_photon_pair(diagonalize(h)).gap;
  };
  const auto r = boost::math::tools::brent_find_minima(gap, phi_x_lo, phi_x_hi,
                                                        40);
  Crossing c;
  c.phi_x = r.first;
  c.phi_x_prime = phi_x_prime;
  c.gap = r.second;
  c.g2_numeric = 0.5 * r.second;
  try {
    const auto lp = linearization_point(p, {c.phi_x, phi_x_prime});
    c.delta_analytic = dressed_frequencies(p, lp).delta;
  } catch (const Error&) {
    c.delta_analytic = kNaN;
  }
  return c;
}

double ConvergenceReport::max_drift() const {
  return std::max({drift_fock, drift_phi, drift_qubit});
}

ConvergenceReport convergence_check(const CircuitParams& p, const FluxBias& b,
                                    const BasisSpec& basis, int levels) {
  auto transitions = [&](const BasisSpec& bs) {
    const Spectrum s = diagonalize(build_hamiltonian(p, b, bs));
    const int n = std::min<int>(levels, static_cast<int>(s.eigenvalues.size()));
    Eigen::VectorXd e(n);
    for (int k = 0; k < n; ++k) e(k) = s.energy(k);
    return e;
  };
  const Eigen::VectorXd ref = transitions(basis);
  auto drift = [&](const BasisSpec& bs) {
    return (transitions(bs) - ref).cwiseAbs().maxCoeff();
  };
  ConvergenceReport r;
  r.drift_fock = drift(basis.doubled_fock());
  r.drift_phi = drift(basis.doubled_phi());
  r.drift_qubit = drift(basis.doubled_qubit());
  return r;
}

// ---------------------------------------------------------------------------

std::vector<FluxBias> SweepGrid::points() const {
  auto axis = [](double lo, double hi, int n) {
    std::vector<double> v(std::max(n, 1));
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
      v[i] = n > 1 ? lo + (hi - lo) * i / (n - 1.0) : lo;
    return v;
  };
  std::vector<FluxBias> out;
  for (double pp : axis(phi_x_prime_min, phi_x_prime_max, n_phi_x_prime))
    for (double px : axis(phi_x_min, phi_x_max, n_phi_x))
      out.push_back({px, pp});
  return out;
}

SweepRow sweep_point(const CircuitParams& p, const BasisSpec& basis,
                     const FluxBias& b) {
  SweepRow row;
  row.phi_x = b.phi_x;
  row.phi_x_prime = b.phi_x_prime;
  try {
    const LinearModel m = analyze(p, b);
    row.omega = m.freqs.omega;
    row.omega_q = m.freqs.omega_q;
    row.delta = m.freqs.delta;
    row.g1 = m.couplings.g1;
    row.g2_analytic = m.g2;
  } catch (const Error& e) {
    // The rotating-wave model needs Delta > 0; keep what is defined.
    row.analytic_ok = false;
    row.note = e.what();
    row.omega = row.omega_q = row.delta = row.g1 = row.g2_analytic = kNaN;
    try {
      const auto lp = linearization_point(p, b);
      const auto df = dressed_frequencies(p, lp);
      row.omega = df.omega;
      row.omega_q = df.omega_q;
      row.delta = df.delta;
      row.g1 = coupling_coefficients(p, lp, df).g1;
    } catch (const Error&) {
    }
  }

  const Hamiltonian h = build_hamiltonian(p, b, basis);
  const Spectrum s = diagonalize(h);
  const TwoPhotonPair pr = two_photon_pair(s);
  row.g2_numeric = pr.coupling;
  row.E_00 = 0.0;
  row.E_10 = s.energy(s.dominant(1, 0));
  row.E_11 = s.energy(s.dominant(1, 1));
  const bool lower_is_20 = pr.weight_20 >= 0.5;
  row.E_20 = s.energy(lower_is_20 ? pr.lower : pr.upper);
  row.E_01 = s.energy(lower_is_20 ? pr.upper : pr.lower);

  // Cheap truncation diagnostics: walls, top Fock level, top qubit level.
  double tail_fock = 0.0, tail_qubit = 0.0;
  const int nlow = std::min<int>(8, static_cast<int>(s.eigenvalues.size()));
  for (int k = 0; k < nlow; ++k) {
    for (int q = 0; q < s.n_qubit; ++q)
      tail_fock = std::max(tail_fock, s.population(k, s.n_fock - 1, q));
    for (int n = 0; n < s.n_fock; ++n)
      tail_qubit = std::max(tail_qubit, s.population(k, n, s.n_qubit - 1));
  }
  row.converged = h.qubit.boundary_amplitude < 1e-8 && tail_fock < 1e-10 &&
                  tail_qubit < 1e-8;
  return row;
}

std::vector<SweepRow> flux_sweep(const CircuitParams& p, const BasisSpec& basis,
                                 const std::vector<FluxBias>& points,
                                 unsigned workers) {
  if (points.empty()) throw ParameterError("flux_sweep: empty grid");
  std::vector<SweepRow> rows(points.size());
  parallel_for(points.size(), workers, [&](std::size_t i) {
    try {
      rows[i] = sweep_point(p, basis, points[i]);
    } catch (const Error& e) {
      rows[i].phi_x = points[i].phi_x;
      rows[i].phi_x_prime = points[i].phi_x_prime;
      rows[i].converged = false;
      rows[i].note = e.what();
    }
  });
  return rows;
}

// ---------------------------------------------------------------------------

LevelSlope level_slope(const CircuitParams& p, const BasisSpec& basis,
                       const FluxBias& b, const std::string& label) {
  if (label.size() != 2 || !std::isdigit(label[0]) || !std::isdigit(label[1]))
    throw ParameterError("level label must look like \"10\"");
  const int n = label[0] - '0', q = label[1] - '0';
  if (n >= basis.n_fock || q >= basis.n_qubit_levels)
    throw ParameterError("level label outside the basis");

  const Hamiltonian h0 = build_hamiltonian(p, b, basis);
  const double center = h0.qubit.center;

  auto pick = [&](const Spectrum& s) {
    const int k = s.dominant(n, q);
    if (s.population(k, n, q) <= 0.5)
      throw NumericalError("level " + label +
                           " is mixed within the slope stencil");
    return k;
  };
  auto level = [&](double px) {
    const Spectrum s =
        diagonalize(build_hamiltonian(p, {px, b.phi_x_prime}, basis, center));
    return s.energy(pick(s));
  };

  constexpr double h = 1e-4;
  auto centered = [&](double step) {
    return (level(b.phi_x + step) - level(b.phi_x - step)) / (2.0 * step);
  };
  LevelSlope out;
  out.label = label;
  out.finite_difference = (4.0 * centered(0.5 * h) - centered(h)) / 3.0;

  // dH/dphi_x = E_L (phi + phi_x) acting on the qubit factor only.
  const Spectrum s0 = diagonalize(h0);
  const int k = pick(s0);
  const int nq = h0.n_qubit;
  Eigen::MatrixXd dq = p.omega_L * h0.qubit.phase_op;
  dq.diagonal().array() += p.omega_L * b.canonical().phi_x;
  auto expect = [&](int col) {
    double acc = 0.0;
    const auto v = s0.eigenvectors.col(col);
    for (int m = 0; m < h0.n_fock; ++m) {
      const auto seg = v.segment(m * nq, nq);
      acc += seg.dot(dq * seg);
    }
    return acc;
  };
  out.hellmann_feynman = expect(k) - expect(0);
  return out;
}

std::vector<PathSlope> path_slopes(const CircuitParams& p,
                                   const BasisSpec& basis, const FluxBias& off,
                                   const FluxBias& on, int samples,
                                   const std::vector<std::string>& labels,
                                   unsigned workers) {
  if (samples < 2) throw ParameterError("path_slopes: need >= 2 samples");
  const std::size_t nl = labels.size();
  // One slot per (sample, label); mixed points stay empty.
  std::vector<std::optional<LevelSlope>> grid(samples * nl);
  parallel_for(grid.size(), workers, [&](std::size_t idx) {
    const int k = static_cast<int>(idx / nl);
    const double s = k / (samples - 1.0);
    const FluxBias b{off.phi_x + s * (on.phi_x - off.phi_x),
                     off.phi_x_prime + s * (on.phi_x_prime - off.phi_x_prime)};
    try {
      grid[idx] = level_slope(p, basis, b, labels[idx % nl]);
    } catch (const NumericalError&) {
    }
  });
  std::vector<PathSlope> out(nl);
  for (std::size_t j = 0; j < nl; ++j) {
    PathSlope& ps = out[j];
    ps.label = labels[j];
    for (int k = 0; k < samples; ++k) {
      const auto& v = grid[k * nl + j];
      if (!v) {
        ++ps.skipped;
        continue;
      }
      const double fd = std::abs(v->finite_difference);
      ps.mean_abs += fd;
      ps.max_abs = std::max(ps.max_abs, fd);
      const double scale = std::max(std::abs(v->hellmann_feynman), 1e-300);
      ps.max_hf_mismatch = std::max(
          ps.max_hf_mismatch,
          std::abs(v->finite_difference - v->hellmann_feynman) / scale);
      ++ps.used;
    }
    if (ps.used > 0) ps.mean_abs /= ps.used;
  }
  return out;
}

}  // namespace fluxqed
