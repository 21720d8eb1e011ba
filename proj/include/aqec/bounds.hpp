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

// Fidelity lower bounds (direct direction) and information-loss upper bounds
// (converse direction) for approximate error correction, plus a line-by-line
// evaluator of the trace-norm chain that links the reference-environment
// state to the loss of entanglement of formation.
//
// All losses are in bits. Fidelity bounds are reported unclamped: a negative
// value means the bound is vacuous at that loss.

#pragma once

#include <map>
#include <optional>
#include <string>

#include "aqec/channel.hpp"
#include "aqec/entmeas.hpp"
#include "aqec/icpovm.hpp"
#include "aqec/qalg.hpp"

namespace aqec {

namespace tol {
/// Losses in [-kLossNoise, 0) are treated as numerical zero before square roots.
inline constexpr double kLossNoise = 1e-9;
/// |eps| below this is entropy round-off and is snapped to zero.
inline constexpr double kLossFloor = 1e-12;
inline constexpr double kSlack = 1e-9;
}  // namespace tol

namespace detail {

inline double clamp_loss(double eps) {
  if (std::isnan(eps)) throw Error("bounds: loss is NaN");
  if (std::abs(eps) < tol::kLossFloor) return 0.0;
  if (eps < 0.0 && eps >= -tol::kLossNoise) return 0.0;
  return eps;
}

inline double checked_sqrt(double eps) {
  const double e = clamp_loss(eps);
  if (e < 0.0) throw Error("bounds: negative loss beyond numerical noise");
  return std::sqrt(e);
}

}  // namespace detail

/// g(x) = 4x log2(d/x) for 0 < x <= 1/2, g(0) = 0; nullopt marks the vacuous domain x > 1/2.
inline std::optional<double> g(double x, int d) {
  if (d < 1) throw DimensionError("g: dimension must be positive");
  if (x < 0.0 && x >= -1e-12) x = 0.0;
  if (!(x >= 0.0)) throw Error("g: argument must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x > 0.5) return std::nullopt;
  return 4.0 * x * std::log2(static_cast<double>(d) / x);
}

/// 1 - sqrt(2 eps_c) with eps_c = S(rho^Q) - I_c.
inline double sw_direct_bound(double eps_c) { return 1.0 - std::sqrt(2.0) * detail::checked_sqrt(eps_c); }

inline double sw_direct_bound(const DensityMatrix& rho, const KrausChannel& ch) {
  const TripartiteOutput tri = global_state(rho, ch);
  return sw_direct_bound(tri.input_entropy - coherent_information(tri));
}

/// 1 - sqrt(2 (2 d d' - 1)^2 eps_f).
inline double theorem1_bound(double eps_f, int d, int d_out) {
  if (d < 2 || d_out < 2) throw DimensionError("theorem1_bound: dimensions must be >= 2");
  const double c = 2.0 * d * d_out - 1.0;
  return 1.0 - std::sqrt(2.0) * c * detail::checked_sqrt(eps_f);
}

/// 1 - 2 sqrt(eps) for a measure with E <= I(A:B)/2.
inline double theorem2_bound(double eps) { return 1.0 - 2.0 * detail::checked_sqrt(eps); }

/// Same form as theorem1_bound, for a measure with E <= E_f.
inline double corollary1_bound(double eps_dot, int d, int d_out) { return theorem1_bound(eps_dot, d, d_out); }

/// g(1 - F, d): the largest loss compatible with a recovery achieving fidelity F.
inline std::optional<double> converse_bound(double fidelity_achieved, int d) {
  if (!(fidelity_achieved >= -1e-12 && fidelity_achieved <= 1.0 + 1e-12)) {
    throw Error("converse_bound: fidelity outside [0, 1]");
  }
  return g(std::max(0.0, 1.0 - fidelity_achieved), d);
}

// ---------------------------------------------------------------------------
// Gap between EoF and one-way coherent information

struct GapReport {
  double lhs = 0.0;                // S(sigma^A) - I_c^{A->B}
  std::optional<double> rhs;       // g(argument), nullopt when argument > 1/2
  double argument = 0.0;           // sqrt(2 (2 d_A d_B - 1)^2 eps_f)
  double eps_f = 0.0;
  bool swapped = false;            // parties exchanged so that S(A) <= S(B)
  bool holds() const { return !rhs || lhs <= *rhs + tol::kSlack; }
};

/// Evaluates both sides of the gap bound for a bipartite state and its EoF value.
inline GapReport gap_bound(const DensityMatrix& sigma, double eof_value) {
  if (sigma.layout().factors() != 2) throw DimensionError("gap_bound: bipartite state required");
  double sa = entropy_bits(partial_trace(sigma.matrix(), sigma.layout(), std::array<std::size_t, 1>{0}));
  double sb = entropy_bits(partial_trace(sigma.matrix(), sigma.layout(), std::array<std::size_t, 1>{1}));
  GapReport r;
  DensityMatrix s = sigma;
  if (sa > sb) {
    s = swap_parties(sigma);
    std::swap(sa, sb);
    r.swapped = true;
  }
  const int da = s.layout()[0];
  const int db = s.layout()[1];
  const double sab = von_neumann_entropy(s);
  r.lhs = sa - (sb - sab);
  r.eps_f = detail::clamp_loss(sa - eof_value);
  const double c = 2.0 * da * db - 1.0;
  r.argument = std::sqrt(2.0) * c * detail::checked_sqrt(r.eps_f);
  r.rhs = g(r.argument, da);
  return r;
}

/// Uses the Wootters EoF for two-qubit states and the numerical EoF otherwise.
inline GapReport gap_bound(const DensityMatrix& sigma, const EofOptions& opts = {}) {
  const double e = is_two_qubit(sigma) ? wootters_eof(sigma) : eof(sigma, Cut::first(), opts).value;
  return gap_bound(sigma, e);
}

// ---------------------------------------------------------------------------
// Factorization distance and the trace-norm chain

/// |rho^{RE'} - rho^R (x) rho^{E'}|_1.
inline double factorization_distance(const TripartiteOutput& tri) {
  return trace_norm(tri.rho_RE.matrix() - kron(tri.rho_R.matrix(), tri.rho_E.matrix()));
}

/// One step of the chain: lhs <= rhs (or lhs == rhs for equalities).
struct ChainStep {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool equality = false;
  /// False when the step compares against a quantity that is only estimated
  /// (numerical EoF above two-qubit size), so its sign is not guaranteed.
  bool certified = true;
  std::string note;
  double slack() const { return rhs - lhs; }
};

struct ChainReport {
  /// Quantities q0..q6 of the chain, in order.
  std::vector<double> lines;
  std::vector<ChainStep> steps;
  double k_constant = 0.0;
  double classical_achieved = 0.0;  // C achieved by the supplied POVM on E'
  double eof = 0.0;
  bool eof_exact = false;
  double input_entropy = 0.0;

  /// Minimum slack over certified steps.
  double min_slack() const {
    double m = std::numeric_limits<double>::infinity();
    for (const ChainStep& s : steps) {
      if (s.certified) m = std::min(m, s.slack());
    }
    return m;
  }
  /// Largest |lhs - rhs| over steps that are identities.
  double max_equality_error() const {
    double m = 0.0;
    for (const ChainStep& s : steps) {
      if (s.equality) m = std::max(m, std::abs(s.slack()));
    }
    return m;
  }
};

/// Evaluates
///   q0 = |rho^{RE'} - rho^R (x) rho^{E'}|_1^2
///   q1 = |sum_i p_i (rho_i^R - rho^R) (x) D_i|_1^2         (= q0 by reconstruction on E')
///   q2 = sum_i p_i |(rho_i^R - rho^R) (x) D_i|_1^2          (convexity of x^2)
///   q3 = K sum_i p_i |rho_i^R - rho^R|_1^2                  (K = max |D_i|_1^2)
///   q4 = 2K sum_i p_i D(rho_i^R || rho^R)                   (Pinsker, constant 2 in bits)
///   q5 = 2K C_achieved                                      (= q4 for the supplied POVM)
///   q6 = 2K (S(rho^Q) - E_f(rho^{RQ'}))                     (= 2K C^{E'->R}, >= q5)
/// with p_i = Tr[rho^{E'} P_i], rho_i^R = Tr_{E'}[rho^{RE'} (1 (x) P_i)] / p_i.
inline ChainReport chain_verify(const TripartiteOutput& tri, const Povm& povm, const DualFrame& dual,
                                std::optional<double> eof_value = std::nullopt,
                                const EofOptions& eof_opts = {}) {
  const int dr = tri.ref_dim();
  const int de = tri.env_dim();
  if (povm.dim() != de) throw DimensionError("chain_verify: POVM does not act on the environment");
  if (dual.duals.size() != povm.size()) throw DimensionError("chain_verify: dual frame length mismatch");
  if (!is_informationally_complete(povm).complete) throw InvalidPovm("chain_verify: POVM is not informationally complete");

  const Matrix& rre = tri.rho_RE.matrix();
  const Matrix& rr = tri.rho_R.matrix();
  const TensorLayout layout({dr, de});
  const double k = k_constant(dual);

  ChainReport rep;
  rep.k_constant = k;
  rep.input_entropy = tri.input_entropy;
  if (eof_value) {
    rep.eof = *eof_value;
    rep.eof_exact = is_two_qubit(tri.rho_RQ);
  } else {
    std::tie(rep.eof, rep.eof_exact) = output_eof(tri, eof_opts);
  }

  Matrix recombined = Matrix::Zero(rre.rows(), rre.cols());
  double convex_sum = 0.0, tn_sum = 0.0, rel_sum = 0.0;
  for (std::size_t i = 0; i < povm.size(); ++i) {
    const Matrix tau = hermitian_part(partial_trace(rre * kron(identity(dr), povm[i]), layout, std::array<std::size_t, 1>{0}));
    const double p = tau.trace().real();
    if (p <= 1e-15) continue;
    const Matrix diff = tau / p - rr;
    recombined += p * kron(diff, dual.duals[i]);
    const double tn = trace_norm(diff);
    convex_sum += p * std::pow(tn * trace_norm(dual.duals[i]), 2);
    tn_sum += p * tn * tn;
    rel_sum += p * relative_entropy(tau / p, rr);
  }
  const double q0 = std::pow(trace_norm(rre - kron(rr, tri.rho_E.matrix())), 2);
  const double q1 = std::pow(trace_norm(recombined), 2);
  const double q2 = convex_sum;
  const double q3 = k * tn_sum;
  const double q4 = 2.0 * k * rel_sum;
  rep.classical_achieved = measured_entropy_reduction(tri.rho_RE, povm);
  const double q5 = 2.0 * k * rep.classical_achieved;
  const double q6 = 2.0 * k * (tri.input_entropy - rep.eof);
  rep.lines = {q0, q1, q2, q3, q4, q5, q6};

  rep.steps = {
      {"reconstruction", q0, q1, true, true, "dual-frame identity on E'"},
      {"convexity", q1, q2, false, true, "triangle inequality and convexity of x^2"},
      {"dual_norm", q2, q3, false, true, "|A (x) D_i|_1 = |A|_1 |D_i|_1 <= |A|_1 sqrt(K)"},
      {"pinsker", q3, q4, false, true, "|rho - sigma|_1^2 <= 2 D(rho||sigma), D in bits"},
      {"measurement", q4, q5, true, true,
       "sum_i p_i D(rho_i||rho) equals the entropy reduction of the supplied POVM"},
      {"monogamy", q5, q6, false, rep.eof_exact,
       rep.eof_exact ? "achieved C <= C^{E'->R} = S - E_f, E_f exact (two qubits)"
                     : "E_f estimated numerically (upper bound); sign not guaranteed"},
  };
  return rep;
}

// ---------------------------------------------------------------------------
// Loss and bound reports

struct LossReport {
  double input_entropy = 0.0;
  double eps_c = 0.0;  // S - I_c
  double eps_f = 0.0;  // S - E_f
  std::map<std::string, double> eps_custom;
};

struct ConverseCheck {
  std::string recovery;
  double fidelity = 0.0;
  std::optional<double> rhs;  // g(1 - F)
  bool coherent_ok = true;    // eps_c <= g(1 - F)
  bool eof_ok = true;         // eps_f <= g(1 - F)
};

struct BoundReport {
  double sw_direct = 0.0;
  double thm1 = 0.0;
  double thm2 = 0.0;
  double cor1 = 0.0;
  std::vector<ConverseCheck> converse;
  std::optional<double> gap_rhs;
  double gap_lhs = 0.0;
  std::vector<ChainStep> chain_slacks;
  double factorization_t = 0.0;
  /// Measure conditions the caller vouched for when supplying E_bullet values.
  std::vector<std::string> assertions;

  double max_direct() const { return std::max({sw_direct, thm1, thm2, cor1}); }
};

inline ConverseCheck check_converse(const std::string& name, double fidelity_achieved, const LossReport& loss, int d) {
  ConverseCheck c;
  c.recovery = name;
  c.fidelity = fidelity_achieved;
  c.rhs = converse_bound(fidelity_achieved, d);
  if (c.rhs) {
    c.coherent_ok = loss.eps_c <= *c.rhs + tol::kSlack;
    c.eof_ok = loss.eps_f <= *c.rhs + tol::kSlack;
  }
  return c;
}

}  // namespace aqec
