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

// Constructive recovery channels: the Petz map and a Kraus-family optimizer
// for the entanglement fidelity of R o E. `verify_instance` assembles the full
// loss/bound report for one (state, channel) pair.

#pragma once

#include <optional>
#include <string>

#include "aqec/bounds.hpp"
#include "aqec/channel.hpp"
#include "aqec/entmeas.hpp"
#include "aqec/icpovm.hpp"
#include "aqec/stiefel.hpp"

namespace aqec {

enum class RecoveryMethod { Petz, Optimized };

inline const char* to_string(RecoveryMethod m) { return m == RecoveryMethod::Petz ? "petz" : "optimized"; }

struct RecoveryChannel {
  KrausChannel kraus;
  RecoveryMethod method = RecoveryMethod::Petz;
  double achieved_F = 0.0;
  /// Petz only: E(rho) was singular and the map was completed off its support.
  bool restricted_support = false;
  /// Optimized only: the best restart met the convergence criterion.
  bool converged = true;
};

/// R(X) = rho^{1/2} E^dag(E(rho)^{-1/2} X E(rho)^{-1/2}) rho^{1/2} + Tr[(1 - Pi) X] rho,
/// with Pi the support projector of E(rho). The second term only appears when
/// E(rho) is singular and makes the map trace preserving.
inline RecoveryChannel petz_recovery(const DensityMatrix& rho, const KrausChannel& ch) {
  if (rho.dim() != ch.in_dim()) throw DimensionError("petz_recovery: state and channel dimensions differ");
  const int d = ch.in_dim();
  const int dp = ch.out_dim();
  const Matrix out = hermitian_part(ch.apply(rho.matrix()));
  const Matrix inv_sqrt = psd_inverse_sqrt(out);
  const Matrix support = hermitian_function(out, [](double x) { return x > tol::kPseudoInverse ? 1.0 : 0.0; });
  const Matrix complement = Matrix::Identity(dp, dp) - support;
  const bool restricted = max_abs(complement) > 1e-12;
  const Matrix sr = psd_sqrt(rho.matrix());

  auto petz = [&](const Matrix& x) {
    Matrix y = sr * ch.apply_adjoint(inv_sqrt * x * inv_sqrt) * sr;
    if (restricted) y += (complement * x).trace() * rho.matrix();
    return y;
  };
  Matrix choi = Matrix::Zero(static_cast<Eigen::Index>(dp) * d, static_cast<Eigen::Index>(dp) * d);
  for (int i = 0; i < dp; ++i) {
    for (int j = 0; j < dp; ++j) {
      Matrix eij = Matrix::Zero(dp, dp);
      eij(i, j) = 1.0;
      choi.block(static_cast<Eigen::Index>(i) * d, static_cast<Eigen::Index>(j) * d, d, d) = petz(eij);
    }
  }
  KrausChannel r = kraus_from_choi(hermitian_part(choi), dp, d);
  const double f = entanglement_fidelity(rho, r, ch);
  return RecoveryChannel{std::move(r), RecoveryMethod::Petz, f, restricted, true};
}

struct RecoveryOptions {
  int restarts = 4;
  std::uint64_t seed = 0;
  /// Number of recovery Kraus operators; 0 selects d * d'.
  int kraus_rank = 0;
  double tol = 1e-12;
  int max_iterations = 3000;
};

namespace detail {

/// -F(rho, R o E) as a function of the stacked isometry W = [R_1; ...; R_k].
struct RecoveryProblem {
  int d = 0;
  std::vector<Matrix> erho;  // E_m rho

  ValueAndGradient operator()(const Matrix& w) const {
    const Eigen::Index k = w.rows() / d;
    Matrix grad = Matrix::Zero(w.rows(), w.cols());
    double f = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto rj = w.middleRows(j * d, d);
      for (const Matrix& em : erho) {
        const Complex c = (rj * em).trace();
        f += std::norm(c);
        // dF/dR_j = 2 sum_m c_jm (E_m rho)^dagger
        grad.middleRows(j * d, d) -= 2.0 * c * em.adjoint();
      }
    }
    return {-f, grad};
  }
};

inline Matrix stack_kraus(const KrausChannel& r, int rows_total) {
  const int d = r.out_dim();
  Matrix w = Matrix::Zero(rows_total, r.in_dim());
  for (std::size_t j = 0; j < r.size(); ++j) w.middleRows(static_cast<Eigen::Index>(j) * d, d) = r[j];
  return w;
}

inline KrausChannel unstack_kraus(const Matrix& w, int d) {
  std::vector<Matrix> ops;
  for (Eigen::Index j = 0; j < w.rows() / d; ++j) {
    Matrix rj = w.middleRows(j * d, d);
    if (rj.norm() >= tol::kKrausPrune) ops.push_back(std::move(rj));
  }
  const int dp = static_cast<int>(w.cols());
  if (ops.size() <= static_cast<std::size_t>(d * dp)) return KrausChannel(std::move(ops));
  return kraus_from_choi(detail::choi_of(ops), dp, d);
}

}  // namespace detail

/// Maximizes F(rho, R o E) over CPTP R with a fixed number of Kraus operators.
/// The Petz map seeds the first start, so the result never falls below it.
inline RecoveryChannel optimize_recovery(const DensityMatrix& rho, const KrausChannel& ch,
                                         const RecoveryOptions& opts = {}) {
  const RecoveryChannel petz = petz_recovery(rho, ch);
  const int d = ch.in_dim();
  const int dp = ch.out_dim();
  const int k = std::max(opts.kraus_rank > 0 ? opts.kraus_rank : d * dp, static_cast<int>(petz.kraus.size()));
  const int rows = k * d;
  if (rows < dp) throw DimensionError("optimize_recovery: Kraus rank too small for an isometry");

  detail::RecoveryProblem prob;
  prob.d = d;
  for (const Matrix& e : ch.ops()) prob.erho.push_back(e * rho.matrix());
  const StiefelObjective f = [&prob](const Matrix& w) { return prob(w); };
  StiefelOptions sopt;
  sopt.tol = opts.tol;
  sopt.max_iterations = opts.max_iterations;

  StiefelResult best = minimize_on_stiefel(f, detail::stack_kraus(petz.kraus, rows), sopt);
  for (int r = 1; r < opts.restarts; ++r) {
    Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(r)));
    const StiefelResult res = minimize_on_stiefel(f, haar_isometry(rows, dp, rng), sopt);
    if (res.value < best.value) best = res;
  }
  KrausChannel kraus = detail::unstack_kraus(best.point, d);
  const double fid = entanglement_fidelity(rho, kraus, ch);
  if (fid < petz.achieved_F) {
    RecoveryChannel out = petz;
    out.method = RecoveryMethod::Optimized;
    return out;
  }
  return RecoveryChannel{std::move(kraus), RecoveryMethod::Optimized, fid, false, best.converged};
}

// ---------------------------------------------------------------------------

struct VerifyOptions {
  MeasureOptions measures;
  RecoveryOptions recovery;
  /// Also optimize C^{E'->R} (context only; the bounds do not depend on it).
  bool optimize_classical = true;
  bool run_chain = true;
  /// Keep an optimal-ensemble certificate even when E_f has a closed form.
  bool certificates = false;
};

struct InstanceReport {
  int in_dim = 0;
  int out_dim = 0;
  int env_dim = 0;
  double coherent_info = 0.0;
  double mutual_info_RQ = 0.0;
  double mutual_info_RE = 0.0;
  double eof = 0.0;
  bool eof_exact = false;
  std::optional<double> classical;  // optimized C^{E'->R}
  std::optional<EnsembleDecomposition> eof_ensemble;
  std::optional<MeasurementStrategy> classical_strategy;
  double fid2 = 0.0;                 // fid^2(rho^{RE'}, rho^R (x) rho^{E'})
  LossReport loss;
  BoundReport bounds;
  std::optional<ChainReport> chain;
  std::optional<RecoveryChannel> petz;
  std::optional<RecoveryChannel> optimized;

  /// True when every hard invariant of the instance holds.
  bool consistent(double tol = 1e-9) const;
  std::vector<std::string> violations(double tol = 1e-9) const;
};

inline std::vector<std::string> InstanceReport::violations(double tol) const {
  std::vector<std::string> out;
  if (petz && optimized && optimized->achieved_F < petz->achieved_F - tol) {
    out.push_back("recovery: F_opt < F_petz");
  }
  if (optimized && optimized->achieved_F < bounds.max_direct() - std::max(1e-6, tol)) {
    out.push_back("bounds: F_opt below a direct bound");
  }
  for (const ConverseCheck& c : bounds.converse) {
    if (!c.coherent_ok) out.push_back("bounds: S - I_c > g(1 - F) for " + c.recovery);
    if (eof_exact && !c.eof_ok) out.push_back("bounds: S - E_f > g(1 - F) for " + c.recovery);
  }
  if (eof_exact && coherent_info > eof + tol) out.push_back("entmeas: I_c > E_f");
  if (std::abs(mutual_info_RQ + mutual_info_RE - 2.0 * loss.input_entropy) > tol) {
    out.push_back("channel: I(R:Q') + I(R:E') != 2 S(rho)");
  }
  if (chain) {
    for (const ChainStep& s : chain->steps) {
      if (s.certified && s.slack() < -tol) out.push_back("bounds: chain step " + s.name + " violated");
    }
  }
  const double t = bounds.factorization_t;
  if (0.5 * t * t > 2.0 * loss.input_entropy - mutual_info_RQ + tol) {
    out.push_back("bounds: Pinsker form of the factorization bound violated");
  }
  if (eof_exact) {
    const double c = 2.0 * in_dim * out_dim - 1.0;
    if (t * t > 2.0 * c * c * loss.eps_f + tol) out.push_back("bounds: factorization bound with E_f violated");
  }
  return out;
}

inline bool InstanceReport::consistent(double tol) const { return violations(tol).empty(); }

/// Runs Petz and optimized recovery, all loss measures, every bound and the chain for one instance.
inline InstanceReport verify_instance(const DensityMatrix& rho, const KrausChannel& ch, const VerifyOptions& opts = {}) {
  InstanceReport rep;
  const TripartiteOutput tri = global_state(rho, ch);
  rep.in_dim = ch.in_dim();
  rep.out_dim = ch.out_dim();
  rep.env_dim = tri.env_dim();
  const double s = tri.input_entropy;
  rep.coherent_info = coherent_information(tri);
  rep.mutual_info_RQ = mutual_information(tri.rho_RQ, Cut::first());
  rep.mutual_info_RE = mutual_information(tri.rho_RE, Cut::first());
  if (is_two_qubit(tri.rho_RQ)) {
    rep.eof = wootters_eof(tri.rho_RQ);
    rep.eof_exact = true;
    if (opts.certificates) rep.eof_ensemble = eof(tri.rho_RQ, Cut::first(), opts.measures.eof).ensemble;
  } else {
    EofResult e = eof(tri.rho_RQ, Cut::first(), opts.measures.eof);
    rep.eof = e.value;
    rep.eof_ensemble = std::move(e.ensemble);
  }
  if (opts.optimize_classical) {
    CcResult c = classical_correlations(tri.rho_RE, Cut::first(), opts.measures.cc);
    rep.classical = c.value;
    rep.classical_strategy = std::move(c.strategy);
  }
  const Matrix product = kron(tri.rho_R.matrix(), tri.rho_E.matrix());
  rep.fid2 = std::pow(fidelity(tri.rho_RE.matrix(), product), 2);

  rep.loss.input_entropy = s;
  rep.loss.eps_c = detail::clamp_loss(s - rep.coherent_info);
  rep.loss.eps_f = detail::clamp_loss(s - rep.eof);
  const double half_mi = 0.5 * rep.mutual_info_RQ;
  const double hashing = std::max(0.0, rep.coherent_info);
  rep.loss.eps_custom["half_mutual_information"] = detail::clamp_loss(s - half_mi);
  rep.loss.eps_custom["hashing"] = detail::clamp_loss(s - hashing);

  BoundReport& b = rep.bounds;
  b.sw_direct = sw_direct_bound(rep.loss.eps_c);
  const int d = std::max(rep.in_dim, 2);
  const int dp = std::max(rep.out_dim, 2);
  b.thm1 = theorem1_bound(rep.loss.eps_f, d, dp);
  b.thm2 = theorem2_bound(rep.loss.eps_custom["half_mutual_information"]);
  b.cor1 = corollary1_bound(rep.loss.eps_custom["hashing"], d, dp);
  b.assertions = {"thm2: E = I(R:Q')/2 satisfies E <= I(A:B)/2 with equality",
                  "cor1: E = max(0, I_c) satisfies E <= E_f (hashing inequality and I_c <= E_f)"};
  b.factorization_t = factorization_distance(tri);
  const GapReport gap = gap_bound(tri.rho_RQ, rep.eof);
  b.gap_lhs = gap.lhs;
  b.gap_rhs = gap.rhs;

  rep.petz = petz_recovery(rho, ch);
  rep.optimized = optimize_recovery(rho, ch, opts.recovery);
  b.converse.push_back(check_converse("petz", rep.petz->achieved_F, rep.loss, rep.in_dim));
  b.converse.push_back(check_converse("optimized", rep.optimized->achieved_F, rep.loss, rep.in_dim));

  if (opts.run_chain) {
    try {
      const Povm frame = embedded_frame(rep.env_dim);
      const DualFrame dual = canonical_dual(frame);
      rep.chain = chain_verify(tri, frame, dual, rep.eof);
      rep.chain->eof_exact = rep.eof_exact;
      if (!rep.eof_exact) rep.chain->steps.back().certified = false;
      b.chain_slacks = rep.chain->steps;
    } catch (const InvalidPovm&) {
      // No embedded IC frame for this environment dimension; the chain is skipped.
    }
  }
  return rep;
}

}  // namespace aqec
