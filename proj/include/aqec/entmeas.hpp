// Copyright 2026 The aqec Authors
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

// Bipartite entanglement and correlation measures.
//
// Entanglement of formation and the classical correlations C^{B->A} are both
// optimizations of the same shape: an average of marginal entropies over an
// ensemble that is parametrized by an isometry.
//
//  * EoF: every m-member pure-state ensemble of sigma = sum_k l_k |e_k><e_k| is
//    |psi~_i> = sum_k U_ik sqrt(l_k) |e_k> for an m x r isometry U, and
//    E(U) = sum_i p_i S(Tr_B phi_i).
//  * C^{B->A}: rank-one POVMs on B with n outcomes are P_i = |w_i><w_i| with
//    w_i = V^dagger |i> for an n x d_B isometry V, and the objective is the
//    average conditional entropy sum_i p_i S(sigma^A_i).
//
// Both are minimized on the Stiefel manifold with random restarts. The EoF
// value is therefore an upper bound on the true EoF and the C value a lower
// bound on the true C.

#pragma once

#include <optional>

#include "aqec/channel.hpp"
#include "aqec/icpovm.hpp"
#include "aqec/qalg.hpp"
#include "aqec/stiefel.hpp"

namespace aqec {

struct EnsembleDecomposition {
  std::vector<double> weights;
  std::vector<PureState> states;

  std::size_t size() const { return weights.size(); }

  /// sum_i p_i |phi_i><phi_i|; throws when the weights are not a distribution.
  Matrix mixture() const {
    if (weights.empty() || weights.size() != states.size()) throw InvalidState("ensemble: size mismatch");
    double total = 0.0;
    Matrix out = Matrix::Zero(states.front().dim(), states.front().dim());
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] < 0.0) throw InvalidState("ensemble: negative weight");
      total += weights[i];
      out += weights[i] * projector(states[i].vector());
    }
    if (std::abs(total - 1.0) > 1e-10) throw InvalidState("ensemble: weights do not sum to 1");
    return out;
  }
};

/// E(phi) = S(Tr_B phi).
inline double pure_entanglement(const PureState& phi, const Cut& cut) {
  cut.check(phi.layout());
  return von_neumann_entropy(reduced_state(phi, cut.left));
}

inline double ensemble_average_entanglement(const EnsembleDecomposition& ens, const Cut& cut) {
  const Matrix mix = ens.mixture();
  if (eigvalsh(mix).minCoeff() < -tol::kNegativity) throw InvalidState("ensemble: mixture is not a state");
  double e = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    if (ens.weights[i] > 0.0) e += ens.weights[i] * pure_entanglement(ens.states[i], cut);
  }
  return e;
}

// ---------------------------------------------------------------------------
// Two-qubit closed form

/// Wootters concurrence max(0, l1 - l2 - l3 - l4), l_i the decreasing square roots of the
/// eigenvalues of rho (sy (x) sy) rho* (sy (x) sy).
inline double concurrence(const DensityMatrix& sigma) {
  if (sigma.dim() != 4) throw DimensionError("concurrence: two-qubit state required");
  // lambda_i are the singular values of tau = Psi^T (Y x Y) Psi with Psi = [sqrt(mu_k) v_k];
  // this avoids square roots of near-zero eigenvalues of rho * rho~.
  const Spectrum sp = eigh(sigma.matrix());
  Matrix psi = sp.vectors;
  for (Eigen::Index k = 0; k < psi.cols(); ++k) psi.col(k) *= std::sqrt(std::max(sp.values(k), 0.0));
  const Matrix yy = kron(paulis::y(), paulis::y());
  const Matrix tau = psi.transpose() * yy * psi;
  RealVector sv = Eigen::JacobiSVD<Matrix>(tau).singularValues();
  std::sort(sv.data(), sv.data() + sv.size(), std::greater<>());
  return std::max(0.0, sv(0) - sv(1) - sv(2) - sv(3));
}

inline double wootters_eof(const DensityMatrix& sigma) {
  if (sigma.dim() != 4 || (sigma.layout().factors() == 2 && sigma.layout()[0] != 2)) {
    throw DimensionError("wootters_eof: two-qubit state required");
  }
  const double c = std::min(concurrence(sigma), 1.0);
  return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
}

inline bool is_two_qubit(const DensityMatrix& sigma) {
  return sigma.layout().factors() == 2 && sigma.layout()[0] == 2 && sigma.layout()[1] == 2;
}

// ---------------------------------------------------------------------------
// Entanglement of formation

struct EofOptions {
  /// Ensemble size m; 0 selects rank^2 capped at 16 (never below the rank).
  int ensemble_size = 0;
  int restarts = 8;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  int max_iterations = 4000;
};

struct EofResult {
  double value = 0.0;
  EnsembleDecomposition ensemble;
  bool converged = false;
  int ensemble_size = 0;
  /// Spread (max - min) of the restart optima; a crude indicator of the optimizer gap.
  double restart_spread = 0.0;
};

namespace detail {

/// Smallest eigenvalue used inside log2 when forming entropy gradients.
inline constexpr double kLogFloor = 1e-16;

/// log2 of a normalized PSD matrix with the spectrum floored at kLogFloor.
inline Matrix log2_state(const Matrix& rho) {
  return hermitian_function(rho, [](double x) { return std::log2(std::max(x, kLogFloor)); });
}

struct EofProblem {
  int da = 0;
  int db = 0;
  Matrix w;  // D x r, columns sqrt(l_k) e_k

  ValueAndGradient operator()(const Matrix& u) const {
    const Eigen::Index m = u.rows();
    const Matrix psi = w * u.transpose();  // D x m, column i is psi~_i
    Matrix grad_psi(psi.rows(), m);
    double value = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> mi(
          psi.col(i).data(), da, db);
      const Matrix rho = mi * mi.adjoint();
      const double p = rho.trace().real();
      if (p < 1e-14) {
        grad_psi.col(i).setZero();
        continue;
      }
      const Matrix rn = rho / p;
      value += p * entropy_bits(rn);
      const Matrix l = log2_state(rn);
      Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> g = -2.0 * l * mi;
      grad_psi.col(i) = Eigen::Map<const Vector>(g.data(), g.size());
    }
    // Gamma_ik = w_k^dagger G_i
    return {value, (w.adjoint() * grad_psi).transpose()};
  }
};

inline EnsembleDecomposition ensemble_from_isometry(const EofProblem& prob, const Matrix& u) {
  const Matrix psi = prob.w * u.transpose();
  EnsembleDecomposition ens;
  for (Eigen::Index i = 0; i < psi.cols(); ++i) {
    const double p = psi.col(i).squaredNorm();
    if (p < 1e-14) continue;
    ens.weights.push_back(p);
    ens.states.emplace_back(psi.col(i) / std::sqrt(p), TensorLayout({prob.da, prob.db}));
  }
  double total = 0.0;
  for (double p : ens.weights) total += p;
  for (double& p : ens.weights) p /= total;
  return ens;
}

inline Matrix padded_isometry(const Matrix& u, Eigen::Index rows) {
  Matrix out = Matrix::Zero(rows, u.cols());
  out.topRows(u.rows()) = u;
  return out;
}

}  // namespace detail

/// Numerical entanglement of formation (an upper bound) with its realizing ensemble.
inline EofResult eof(const DensityMatrix& sigma, const Cut& cut, const EofOptions& opts = {}) {
  const DensityMatrix bi = as_bipartite(sigma, cut);
  detail::EofProblem prob;
  prob.da = bi.layout()[0];
  prob.db = bi.layout()[1];
  const Spectrum s = eigh(bi.matrix());
  std::vector<Eigen::Index> support;
  for (Eigen::Index k = s.values.size(); k-- > 0;) {
    if (s.values(k) > tol::kEigenCutoff) support.push_back(k);
  }
  const auto r = static_cast<Eigen::Index>(support.size());
  prob.w.resize(bi.dim(), r);
  for (Eigen::Index k = 0; k < r; ++k) {
    prob.w.col(k) = std::sqrt(s.values(support[static_cast<std::size_t>(k)])) *
                    canonical_phase(s.vectors.col(support[static_cast<std::size_t>(k)]));
  }
  const Eigen::Index m = opts.ensemble_size > 0 ? std::max<Eigen::Index>(opts.ensemble_size, r)
                                                : std::max<Eigen::Index>(r, std::min<Eigen::Index>(r * r, 16));

  StiefelOptions sopt;
  sopt.tol = opts.tol;
  sopt.max_iterations = opts.max_iterations;
  const StiefelObjective f = [&prob](const Matrix& u) { return prob(u); };

  // Stage one: the rank-sized problem from the spectral ensemble.
  StiefelResult best = minimize_on_stiefel(f, Matrix::Identity(r, r), sopt);
  double worst = best.value;
  if (m > r) {
    best = minimize_on_stiefel(f, detail::padded_isometry(best.point, m), sopt);
    worst = std::max(worst, best.value);
  }
  for (int k = 1; k < opts.restarts; ++k) {
    Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(k)));
    const StiefelResult res = minimize_on_stiefel(f, haar_isometry(static_cast<int>(m), static_cast<int>(r), rng), sopt);
    worst = std::max(worst, res.value);
    if (res.value < best.value) best = res;
  }

  EofResult out;
  out.ensemble = detail::ensemble_from_isometry(prob, best.point);
  out.value = std::max(0.0, best.value);
  out.converged = best.converged;
  out.ensemble_size = static_cast<int>(m);
  out.restart_spread = worst - best.value;
  return out;
}

// ---------------------------------------------------------------------------
// Classical correlations

struct CcOptions {
  /// Number of POVM outcomes; 0 selects d_B^2.
  int outcomes = 0;
  int restarts = 8;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  int max_iterations = 4000;
};

struct MeasurementStrategy {
  Povm povm;
  double achieved_value = 0.0;
};

struct CcResult {
  double value = 0.0;
  MeasurementStrategy strategy;
  bool converged = false;
};

/// S(sigma^A) - sum_i p_i S(sigma^A_i) for a POVM on the B factor of a bipartite state.
inline double measured_entropy_reduction(const DensityMatrix& bipartite, const Povm& povm_b) {
  const int da = bipartite.layout()[0];
  const int db = bipartite.layout()[1];
  if (povm_b.dim() != db) throw DimensionError("measured_entropy_reduction: POVM dimension mismatch");
  const double sa = entropy_bits(partial_trace(bipartite.matrix(), bipartite.layout(), std::array<std::size_t, 1>{0}));
  double cond = 0.0;
  for (const Matrix& p : povm_b.elements()) {
    const Matrix tau = partial_trace(bipartite.matrix() * kron(identity(da), p), bipartite.layout(),
                                     std::array<std::size_t, 1>{0});
    const Matrix tau_h = hermitian_part(tau);
    const double pi = tau_h.trace().real();
    if (pi < 1e-14) continue;
    cond += pi * entropy_bits(tau_h / pi);
  }
  return sa - cond;
}

namespace detail {

struct CcProblem {
  int da = 0;
  int db = 0;
  Matrix sigma;

  Matrix embed(const Vector& w) const {
    Matrix a = Matrix::Zero(static_cast<Eigen::Index>(da) * db, da);
    for (int x = 0; x < da; ++x) a.block(static_cast<Eigen::Index>(x) * db, x, db, 1) = w;
    return a;
  }

  ValueAndGradient operator()(const Matrix& v) const {
    const Eigen::Index n = v.rows();
    Matrix grad(n, db);
    double value = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vector w = v.row(i).adjoint();
      const Matrix a = embed(w);
      const Matrix sa = sigma * a;
      const Matrix tau = hermitian_part(a.adjoint() * sa);
      const double p = tau.trace().real();
      if (p < 1e-14) {
        grad.row(i).setZero();
        continue;
      }
      const Matrix tn = tau / p;
      value += p * entropy_bits(tn);
      const Matrix y = sa * log2_state(tn);  // D x d_A
      Vector g = Vector::Zero(db);
      for (int x = 0; x < da; ++x) g += y.block(static_cast<Eigen::Index>(x) * db, x, db, 1);
      // dJ = -2 Re sum_b conj(g_b) dw_b and w = conj(row of V).
      grad.row(i) = (-2.0 * g).conjugate().transpose();
    }
    return {value, grad};
  }
};

inline Povm povm_from_rows(const Matrix& v) {
  std::vector<Matrix> els;
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    const Vector w = v.row(i).adjoint();
    if (w.squaredNorm() < 1e-14) continue;
    els.push_back(projector(w));
  }
  // Absorb the residual of the dropped outcomes (below 1e-14) into the largest element.
  Matrix sum = Matrix::Zero(v.cols(), v.cols());
  for (const Matrix& p : els) sum += p;
  const Matrix fix = Matrix::Identity(v.cols(), v.cols()) - sum;
  if (max_abs(fix) > 0) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < els.size(); ++i) {
      if (els[i].trace().real() > els[k].trace().real()) k = i;
    }
    els[k] += hermitian_part(fix);
  }
  return Povm(std::move(els));
}

}  // namespace detail

/// Numerical C^{B->A} (a lower bound): the POVM acts on the cut's right side B.
inline CcResult classical_correlations(const DensityMatrix& sigma, const Cut& cut, const CcOptions& opts = {}) {
  const DensityMatrix bi = as_bipartite(sigma, cut);
  detail::CcProblem prob;
  prob.da = bi.layout()[0];
  prob.db = bi.layout()[1];
  prob.sigma = bi.matrix();
  const int n = opts.outcomes > 0 ? std::max(opts.outcomes, prob.db) : prob.db * prob.db;

  StiefelOptions sopt;
  sopt.tol = opts.tol;
  sopt.max_iterations = opts.max_iterations;
  const StiefelObjective f = [&prob](const Matrix& v) { return prob(v); };

  StiefelResult best = minimize_on_stiefel(f, Matrix::Identity(n, prob.db), sopt);
  for (int k = 1; k < opts.restarts; ++k) {
    Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(k)));
    const StiefelResult res = minimize_on_stiefel(f, haar_isometry(n, prob.db, rng), sopt);
    if (res.value < best.value) best = res;
  }
  Povm povm = detail::povm_from_rows(best.point);
  const double achieved = measured_entropy_reduction(bi, povm);
  return CcResult{std::max(achieved, 0.0), MeasurementStrategy{std::move(povm), achieved}, best.converged};
}

// ---------------------------------------------------------------------------
// Monogamy, negativity, distillable interval

struct KoashiWinterReport {
  double residual = 0.0;  // C^{E'->R} + E_f(rho^{RQ'}) - S(rho^Q)
  double classical = 0.0;
  double eof = 0.0;
  bool eof_exact = false;
  double input_entropy = 0.0;
};

struct MeasureOptions {
  EofOptions eof;
  CcOptions cc;
};

/// E_f(rho^{RQ'}), exact (Wootters) for two-qubit outputs and numerical otherwise.
inline std::pair<double, bool> output_eof(const TripartiteOutput& tri, const EofOptions& opts = {}) {
  if (is_two_qubit(tri.rho_RQ)) return {wootters_eof(tri.rho_RQ), true};
  return {eof(tri.rho_RQ, Cut::first(), opts).value, false};
}

inline KoashiWinterReport koashi_winter_residual(const TripartiteOutput& tri, const MeasureOptions& opts = {}) {
  KoashiWinterReport r;
  r.input_entropy = tri.input_entropy;
  r.classical = classical_correlations(tri.rho_RE, Cut::first(), opts.cc).value;
  std::tie(r.eof, r.eof_exact) = output_eof(tri, opts.eof);
  r.residual = r.classical + r.eof - r.input_entropy;
  return r;
}

inline KoashiWinterReport koashi_winter_residual(const DensityMatrix& rho, const KrausChannel& ch,
                                                 const MeasureOptions& opts = {}) {
  return koashi_winter_residual(global_state(rho, ch), opts);
}

/// log2 |sigma^{T_B}|_1.
inline double log_negativity(const DensityMatrix& sigma, const Cut& cut) {
  return std::max(0.0, std::log2(trace_norm(partial_transpose(sigma, cut))));
}

struct EntanglementInterval {
  double lower = 0.0;  // hashing bound max(0, S(B) - S(AB))
  double upper = 0.0;  // numerical EoF
};

inline double hashing_bound(const DensityMatrix& sigma, const Cut& cut) {
  cut.check(sigma.layout());
  const double sb = entropy_bits(partial_trace(sigma.matrix(), sigma.layout(), cut.right(sigma.layout())));
  return std::max(0.0, sb - von_neumann_entropy(sigma));
}

/// Bracket [hashing bound, EoF] for the distillable entanglement; never a point value.
inline EntanglementInterval distillable_interval(const DensityMatrix& sigma, const Cut& cut,
                                                 const EofOptions& opts = {}) {
  EntanglementInterval iv;
  iv.lower = hashing_bound(sigma, cut);
  iv.upper = eof(sigma, cut, opts).value;
  if (iv.lower > iv.upper + 1e-6) throw Error("distillable_interval: hashing bound exceeds EoF estimate");
  iv.upper = std::max(iv.upper, iv.lower);
  return iv;
}

}  // namespace aqec
