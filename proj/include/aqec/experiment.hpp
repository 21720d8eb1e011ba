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

// Batch experiments behind the command-line tool: parameter sweeps, seeded
// verification suites, frame reports and single-instance inspection.
//
// Every instance derives its seeds from (global seed, instance index), so a
// report depends only on the configuration, never on the worker count.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aqec/channel_io.hpp"
#include "aqec/parallel.hpp"
#include "aqec/recovery.hpp"
#include "aqec/report.hpp"

namespace aqec {

/// Invalid user configuration (exit code 2 in the CLI).
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class InputKind { MaximallyMixed, Pure, Random };

inline InputKind parse_input_kind(const std::string& s) {
  if (s == "maximally_mixed") return InputKind::MaximallyMixed;
  if (s == "pure") return InputKind::Pure;
  if (s == "random") return InputKind::Random;
  throw ConfigError("--input: expected maximally_mixed, pure or random, got '" + s + "'");
}

inline const char* to_string(InputKind k) {
  switch (k) {
    case InputKind::MaximallyMixed: return "maximally_mixed";
    case InputKind::Pure: return "pure";
    case InputKind::Random: return "random";
  }
  return "?";
}

struct ParamAxis {
  std::string name;
  std::vector<double> values;
};

namespace detail {

inline double parse_number(const std::string& s, const std::string& spec) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) {
    throw ConfigError("--param " + spec + ": '" + s + "' is not a number");
  }
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace detail

/// "name=lo:hi:step" (inclusive range) or "name=v1,v2,...".
inline ParamAxis parse_param(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--param " + spec + ": expected name=values");
  ParamAxis axis{spec.substr(0, eq), {}};
  const std::string rhs = spec.substr(eq + 1);
  if (rhs.find(':') != std::string::npos) {
    const auto parts = detail::split(rhs, ':');
    if (parts.size() != 3) throw ConfigError("--param " + spec + ": range must be lo:hi:step");
    const double lo = detail::parse_number(parts[0], spec);
    const double hi = detail::parse_number(parts[1], spec);
    const double step = detail::parse_number(parts[2], spec);
    if (!(step > 0.0) || hi < lo) throw ConfigError("--param " + spec + ": need step > 0 and hi >= lo");
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (n > 100000) throw ConfigError("--param " + spec + ": grid too large");
    for (long k = 0; k < n; ++k) axis.values.push_back(lo + static_cast<double>(k) * step);
  } else {
    for (const std::string& v : detail::split(rhs, ',')) axis.values.push_back(detail::parse_number(v, spec));
  }
  if (axis.values.empty()) throw ConfigError("--param " + spec + ": empty grid");
  return axis;
}

struct SweepConfig {
  /// Family name (depolarizing, amplitude_damping, phase_damping, random_rank_k,
  /// identity) or a path to a channel JSON file.
  std::string channel = "depolarizing";
  std::vector<ParamAxis> grid;
  int dim = 2;
  int out_dim = 0;
  int rank = 2;
  InputKind input = InputKind::MaximallyMixed;
  std::uint64_t seed = 0;
  VerifyOptions verify;
  double tol = 1e-9;
  int max_total_dim = 36;

  void validate() const;
};

struct GridPoint {
  std::size_t index = 0;
  std::vector<std::pair<std::string, double>> values;
};

inline bool is_known_axis(const std::string& n) {
  return n == "p" || n == "gamma" || n == "lambda" || n == "rank" || n == "dim";
}

/// Cartesian product of the axes, first axis slowest. An empty grid is one point.
inline std::vector<GridPoint> expand_grid(const std::vector<ParamAxis>& axes) {
  std::vector<GridPoint> pts{GridPoint{}};
  for (const ParamAxis& a : axes) {
    std::vector<GridPoint> next;
    for (const GridPoint& p : pts) {
      for (double v : a.values) {
        GridPoint q = p;
        q.values.emplace_back(a.name, v);
        next.push_back(std::move(q));
      }
    }
    pts = std::move(next);
  }
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i].index = i;
  return pts;
}

inline bool channel_is_file(const std::string& c) { return !parse_channel_family(c).has_value(); }

struct PointSetup {
  KrausChannel channel;
  DensityMatrix input;
};

/// Builds the channel and the input state of one grid point.
inline PointSetup setup_point(const SweepConfig& cfg, const GridPoint& pt, const std::optional<KrausChannel>& file) {
  ChannelParams params;
  params.dim = cfg.dim;
  params.out_dim = cfg.out_dim;
  params.rank = cfg.rank;
  params.seed = derive_seed(cfg.seed, 2 * pt.index);
  for (const auto& [name, v] : pt.values) {
    if (name == "p" || name == "gamma" || name == "lambda") params.p = v;
    if (name == "rank") params.rank = static_cast<int>(std::lround(v));
    if (name == "dim") params.dim = static_cast<int>(std::lround(v));
  }
  std::optional<KrausChannel> ch;
  if (file) {
    ch = *file;
  } else {
    try {
      ch = channel_family(*parse_channel_family(cfg.channel), params);
    } catch (const InvalidChannel& e) {
      throw ConfigError(std::string("grid point ") + std::to_string(pt.index) + ": " + e.what());
    }
  }
  const int d = ch->in_dim();
  switch (cfg.input) {
    case InputKind::MaximallyMixed:
      return {std::move(*ch), DensityMatrix::maximally_mixed(d)};
    case InputKind::Pure:
      return {std::move(*ch), DensityMatrix(projector(basis_vector(d, 0)))};
    case InputKind::Random:
      return {std::move(*ch), ginibre_state(d, derive_seed(cfg.seed, 2 * pt.index + 1))};
  }
  throw ConfigError("unknown input kind");
}

inline void check_dims(int d, int dp, int de, int cap) {
  // Largest bipartite state the entanglement measures run on.
  const int total = std::max(d * dp, d * de);
  if (total > cap) {
    throw ConfigError("dimension cap exceeded: max(d*d', d*d_E) = " + std::to_string(total) + " > " +
                      std::to_string(cap));
  }
}

inline void SweepConfig::validate() const {
  if (dim < 1 || dim > 64) throw ConfigError("--dim must be in [1, 64]");
  if (out_dim < 0 || out_dim > 64) throw ConfigError("out_dim must be in [0, 64]");
  if (rank < 1) throw ConfigError("rank must be positive");
  if (!(tol > 0.0)) throw ConfigError("--tol must be positive");
  if (verify.measures.eof.restarts < 1 || verify.measures.cc.restarts < 1 || verify.recovery.restarts < 1) {
    throw ConfigError("restart counts must be positive");
  }
  if (verify.measures.eof.ensemble_size < 0) throw ConfigError("--eof-ensemble-size must be nonnegative");
  for (const ParamAxis& a : grid) {
    if (!is_known_axis(a.name)) throw ConfigError("--param: unknown parameter '" + a.name + "'");
    if (a.values.empty()) throw ConfigError("--param " + a.name + ": empty grid");
  }
  if (channel_is_file(channel) && !grid.empty()) {
    throw ConfigError("--param has no effect on a channel loaded from file");
  }
}

// ---------------------------------------------------------------------------
// Instance rows

namespace detail {

inline nlohmann::ordered_json matrix_json(const Matrix& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::ordered_json kraus_json(const KrausChannel& ch) {
  nlohmann::ordered_json ops = nlohmann::ordered_json::array();
  for (const Matrix& k : ch.ops()) ops.push_back(matrix_json(k));
  return {{"in_dim", ch.in_dim()}, {"out_dim", ch.out_dim()}, {"kraus", std::move(ops)}};
}

inline nlohmann::ordered_json certificate_json(const InstanceReport& rep) {
  nlohmann::ordered_json c;
  if (rep.eof_ensemble) {
    nlohmann::ordered_json states = nlohmann::ordered_json::array();
    for (const PureState& s : rep.eof_ensemble->states) {
      nlohmann::ordered_json v = nlohmann::ordered_json::array();
      for (Eigen::Index i = 0; i < s.vector().size(); ++i) v.push_back({s.vector()(i).real(), s.vector()(i).imag()});
      states.push_back(std::move(v));
    }
    c["eof_ensemble"] = {{"weights", rep.eof_ensemble->weights},
                         {"states", std::move(states)},
                         {"average_entanglement", ensemble_average_entanglement(*rep.eof_ensemble, Cut::first())}};
  }
  if (rep.classical_strategy) {
    nlohmann::ordered_json els = nlohmann::ordered_json::array();
    for (const Matrix& p : rep.classical_strategy->povm.elements()) els.push_back(matrix_json(p));
    c["measurement"] = {{"elements", std::move(els)}, {"achieved_value", rep.classical_strategy->achieved_value}};
  }
  if (rep.petz) c["recovery_petz"] = kraus_json(rep.petz->kraus);
  if (rep.optimized) c["recovery_optimized"] = kraus_json(rep.optimized->kraus);
  return c;
}

inline std::optional<double> converse_rhs(const InstanceReport& rep, const char* which) {
  for (const ConverseCheck& c : rep.bounds.converse) {
    if (c.recovery == which) return c.rhs;
  }
  return std::nullopt;
}

}  // namespace detail

/// Fills the standard instance columns (the BoundReport CSV layout).
inline void add_instance_columns(Row& row, const InstanceReport& rep) {
  row.add("d", rep.in_dim).add("d_out", rep.out_dim).add("d_env", rep.env_dim);
  row.add("S", rep.loss.input_entropy).add("I_c", rep.coherent_info);
  row.add("I_RQ", rep.mutual_info_RQ).add("I_RE", rep.mutual_info_RE);
  row.add("E_f", rep.eof).add("E_f_exact", rep.eof_exact).add("C", rep.classical);
  row.add("fid2_RE_product", rep.fid2);
  row.add("F_petz", rep.petz ? std::optional(rep.petz->achieved_F) : std::nullopt);
  row.add("F_opt", rep.optimized ? std::optional(rep.optimized->achieved_F) : std::nullopt);
  row.add("F_opt_converged", rep.optimized && rep.optimized->converged);
  row.add("petz_restricted_support", rep.petz && rep.petz->restricted_support);
  row.add("eps_c", rep.loss.eps_c).add("eps_f", rep.loss.eps_f);
  for (const auto& [k, v] : rep.loss.eps_custom) row.add("eps_" + k, v);
  const BoundReport& b = rep.bounds;
  row.add("sw_direct", b.sw_direct).add("thm1", b.thm1).add("thm2", b.thm2).add("cor1", b.cor1);
  row.add("g_petz", detail::converse_rhs(rep, "petz"));
  row.add("g_opt", detail::converse_rhs(rep, "optimized"));
  row.add("gap_lhs", b.gap_lhs).add("gap_rhs", b.gap_rhs);
  row.add("factorization_t", b.factorization_t);
  row.add("chain_min_slack", rep.chain ? std::optional(rep.chain->min_slack()) : std::nullopt);
  row.add("chain_equality_error", rep.chain ? std::optional(rep.chain->max_equality_error()) : std::nullopt);
  row.add("chain_K", rep.chain ? std::optional(rep.chain->k_constant) : std::nullopt);
}

inline VerifyOptions seeded(VerifyOptions opts, std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t s = derive_seed(seed, 1000003ULL + index);
  opts.measures.eof.seed = derive_seed(s, 1);
  opts.measures.cc.seed = derive_seed(s, 2);
  opts.recovery.seed = derive_seed(s, 3);
  return opts;
}

/// One row per grid point with the loss and bound columns.
inline Report run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::optional<KrausChannel> file;
  if (channel_is_file(cfg.channel)) {
    if (!std::ifstream(cfg.channel)) {
      throw ConfigError("--channel: '" + cfg.channel +
                        "' is neither a channel family (depolarizing, amplitude_damping, phase_damping, "
                        "random_rank_k, identity) nor a readable JSON file");
    }
    try {
      file = load_channel(cfg.channel);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  const std::vector<GridPoint> grid = expand_grid(cfg.grid);
  // Setup errors are configuration errors; surface them before the heavy work.
  std::vector<PointSetup> setups;
  setups.reserve(grid.size());
  for (const GridPoint& pt : grid) {
    PointSetup s = setup_point(cfg, pt, file);
    check_dims(s.channel.in_dim(), s.channel.out_dim(), static_cast<int>(s.channel.size()), cfg.max_total_dim);
    setups.push_back(std::move(s));
  }
  Report report{"sweep", {}};
  report.rows = parallel_map(grid.size(), [&](std::size_t i) {
    const GridPoint& pt = grid[i];
    const PointSetup& s = setups[i];
    const InstanceReport rep = verify_instance(s.input, s.channel, seeded(cfg.verify, cfg.seed, i));
    Row row;
    row.add("index", static_cast<int>(i));
    row.add("channel", file ? std::string("file") : cfg.channel);
    for (const auto& [name, v] : pt.values) row.add(name, v);
    row.add("input", to_string(cfg.input));
    add_instance_columns(row, rep);
    row.violations = rep.violations(cfg.tol);
    if (cfg.verify.certificates) row.certificate = detail::certificate_json(rep);
    return row;
  });
  return report;
}

// ---------------------------------------------------------------------------
// Verification suites

struct SuiteConfig {
  std::string suite;
  int seeds = 200;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  MeasureOptions measures;
  RecoveryOptions recovery;
  bool certificates = false;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identities", "pinsker", "monogamy", "chain", "bounds", "gap"};
  return names;
}

namespace detail {

/// Random qubit channel with Kraus rank cycling through 1..4.
inline KrausChannel suite_qubit_channel(std::uint64_t seed, std::size_t i) {
  return random_channel(2, 2, 1 + static_cast<int>(i % 4), derive_seed(seed, 2 * i));
}

inline Row identities_row(const SuiteConfig& cfg, std::size_t i) {
  static constexpr int dims[4][2] = {{2, 2}, {2, 3}, {3, 2}, {3, 3}};
  const int d = dims[i % 4][0];
  const int dp = dims[i % 4][1];
  const int kmin = (d + dp - 1) / dp;  // an isometry needs k * d' >= d
  const int k = kmin + static_cast<int>((i / 4) % static_cast<std::size_t>(d * dp - kmin + 1));
  const DensityMatrix rho = ginibre_state(d, derive_seed(cfg.seed, 2 * i));
  const KrausChannel ch = random_channel(d, dp, k, derive_seed(cfg.seed, 2 * i + 1));
  const TripartiteOutput tri = global_state(rho, ch);
  const double irq = mutual_information(tri.rho_RQ, Cut::first());
  const double ire = mutual_information(tri.rho_RE, Cut::first());
  const double eq2 = std::abs(irq + ire - 2.0 * tri.input_entropy);
  const double ic_env = std::abs(coherent_information(tri) - coherent_information_via_environment(tri));
  std::optional<double> f_res;
  if (d == dp) f_res = std::abs(entanglement_fidelity(rho, ch) - entanglement_fidelity(purify(rho), ch));
  Row row;
  row.add("index", static_cast<int>(i)).add("d", d).add("d_out", dp).add("kraus_rank", k);
  row.add("S", tri.input_entropy).add("I_RQ", irq).add("I_RE", ire);
  row.add("eq2_residual", eq2).add("ic_env_residual", ic_env).add("fidelity_residual", f_res);
  if (eq2 > cfg.tol) row.violations.push_back("channel: I(R:Q') + I(R:E') != 2 S(rho)");
  if (ic_env > cfg.tol) row.violations.push_back("channel: I_c != S(Q') - S(E')");
  if (f_res && *f_res > cfg.tol) row.violations.push_back("channel: entanglement fidelity depends on the purification");
  return row;
}

inline Row pinsker_row(const SuiteConfig& cfg, std::size_t i) {
  const int d = 2 + static_cast<int>(i % 3);
  Rng rng(derive_seed(cfg.seed, i));
  const DensityMatrix rho = random_rank_k_state(d, 1 + static_cast<int>((i / 3) % static_cast<std::size_t>(d)), rng);
  const DensityMatrix sigma = ginibre_state(d, rng);
  const double t = trace_norm(rho.matrix() - sigma.matrix());
  const double rel = relative_entropy(rho, sigma);
  const double f = fidelity(rho, sigma);
  const double pinsker_slack = 2.0 * std::log(2.0) * rel - t * t;
  const double fvdg_lower = (0.5 * t) - (1.0 - f);
  const double fvdg_upper = std::sqrt(std::max(0.0, 1.0 - f * f)) - 0.5 * t;
  Row row;
  row.add("index", static_cast<int>(i)).add("d", d);
  row.add("trace_norm", t).add("relative_entropy", rel).add("fidelity", f);
  row.add("pinsker_slack", pinsker_slack).add("fvdg_lower_slack", fvdg_lower).add("fvdg_upper_slack", fvdg_upper);
  if (pinsker_slack < -cfg.tol) row.violations.push_back("qalg: Pinsker inequality violated");
  if (fvdg_lower < -cfg.tol || fvdg_upper < -cfg.tol) row.violations.push_back("qalg: Fuchs-van de Graaf violated");
  return row;
}

inline Row monogamy_row(const SuiteConfig& cfg, std::size_t i) {
  const KrausChannel ch = suite_qubit_channel(cfg.seed, i);
  const TripartiteOutput tri = global_state(DensityMatrix::maximally_mixed(2), ch);
  CcOptions cc = cfg.measures.cc;
  cc.seed = derive_seed(cfg.seed, 2 * i + 1);
  const CcResult c = classical_correlations(tri.rho_RE, Cut::first(), cc);
  const double w = wootters_eof(tri.rho_RQ);
  const double gap = tri.input_entropy - w - c.value;
  Row row;
  row.add("index", static_cast<int>(i)).add("kraus_rank", static_cast<int>(ch.size()));
  row.add("C", c.value).add("E_f", w).add("S", tri.input_entropy);
  row.add("residual_gap", gap).add("converged", c.converged);
  if (gap < -cfg.tol) row.violations.push_back("entmeas: C^{E'->R} > S - E_f (monogamy)");
  if (cfg.certificates) {
    nlohmann::ordered_json els = nlohmann::ordered_json::array();
    for (const Matrix& p : c.strategy.povm.elements()) els.push_back(matrix_json(p));
    row.certificate = nlohmann::ordered_json{{"measurement", {{"elements", std::move(els)}}}};
  }
  return row;
}

inline Row chain_row(const SuiteConfig& cfg, std::size_t i) {
  const KrausChannel ch = suite_qubit_channel(cfg.seed, i);
  const TripartiteOutput tri = global_state(DensityMatrix::maximally_mixed(2), ch);
  const Povm frame = embedded_frame(tri.env_dim());
  const DualFrame dual = canonical_dual(frame);
  const double w = wootters_eof(tri.rho_RQ);
  const ChainReport chain = chain_verify(tri, frame, dual, w);
  const double t = factorization_distance(tri);
  const double eps_f = clamp_loss(tri.input_entropy - w);
  const double eq11_rhs = 2.0 * 49.0 * eps_f;  // (2 d d' - 1)^2 = 49 for qubits
  Row row;
  row.add("index", static_cast<int>(i)).add("d_env", tri.env_dim()).add("K", chain.k_constant);
  for (std::size_t k = 0; k < chain.lines.size(); ++k) row.add("q" + std::to_string(k), chain.lines[k]);
  for (const ChainStep& s : chain.steps) row.add("slack_" + s.name, s.slack());
  row.add("min_slack", chain.min_slack()).add("equality_error", chain.max_equality_error());
  row.add("eq11_lhs", t * t).add("eq11_rhs", eq11_rhs);
  for (const ChainStep& s : chain.steps) {
    if (s.certified && s.slack() < -cfg.tol) row.violations.push_back("bounds: chain step " + s.name + " violated");
  }
  if (t * t > eq11_rhs + cfg.tol) row.violations.push_back("bounds: factorization bound with E_f violated");
  return row;
}

inline Row bounds_row(const SuiteConfig& cfg, std::size_t i) {
  const KrausChannel ch = suite_qubit_channel(cfg.seed, i);
  VerifyOptions opts;
  opts.measures = cfg.measures;
  opts.recovery = cfg.recovery;
  opts.certificates = cfg.certificates;
  const InstanceReport rep =
      verify_instance(DensityMatrix::maximally_mixed(2), ch, seeded(opts, cfg.seed, i));
  Row row;
  row.add("index", static_cast<int>(i)).add("kraus_rank", static_cast<int>(ch.size()));
  add_instance_columns(row, rep);
  row.violations = rep.violations(cfg.tol);
  if (cfg.certificates) row.certificate = certificate_json(rep);
  return row;
}

inline Row gap_row(const SuiteConfig& cfg, std::size_t i) {
  const int rank = 1 + static_cast<int>(i % 4);
  const DensityMatrix sigma =
      random_rank_k_state(4, rank, derive_seed(cfg.seed, i)).relabel(TensorLayout({2, 2}));
  const GapReport g = gap_bound(sigma, wootters_eof(sigma));
  Row row;
  row.add("index", static_cast<int>(i)).add("rank", rank);
  row.add("lhs", g.lhs).add("rhs", g.rhs).add("argument", g.argument).add("eps_f", g.eps_f);
  row.add("swapped", g.swapped).add("vacuous", !g.rhs.has_value());
  if (!g.holds()) row.violations.push_back("bounds: gap bound lhs > rhs");
  return row;
}

}  // namespace detail

inline Report run_suite(const SuiteConfig& cfg) {
  if (cfg.seeds < 1) throw ConfigError("--seeds must be positive");
  if (!(cfg.tol > 0.0)) throw ConfigError("--tol must be positive");
  Row (*fn)(const SuiteConfig&, std::size_t) = nullptr;
  if (cfg.suite == "identities") fn = detail::identities_row;
  if (cfg.suite == "pinsker") fn = detail::pinsker_row;
  if (cfg.suite == "monogamy") fn = detail::monogamy_row;
  if (cfg.suite == "chain") fn = detail::chain_row;
  if (cfg.suite == "bounds") fn = detail::bounds_row;
  if (cfg.suite == "gap") fn = detail::gap_row;
  if (!fn) throw ConfigError("--suite: unknown suite '" + cfg.suite + "'");
  Report rep{cfg.suite, {}};
  rep.rows = parallel_map(static_cast<std::size_t>(cfg.seeds), [&](std::size_t i) { return fn(cfg, i); });
  return rep;
}

/// Minimum of a numeric column over the report.
inline double column_min(const Report& rep, const std::string& col) {
  double m = std::numeric_limits<double>::infinity();
  for (const Row& r : rep.rows) {
    const double v = r.number(col);
    if (!std::isnan(v)) m = std::min(m, v);
  }
  return m;
}

inline double column_max(const Report& rep, const std::string& col) {
  double m = -std::numeric_limits<double>::infinity();
  for (const Row& r : rep.rows) {
    const double v = r.number(col);
    if (!std::isnan(v)) m = std::max(m, v);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Frames

struct FrameSpec {
  std::string name;
  int dim = 2;
};

inline Povm make_frame(const FrameSpec& spec) {
  const std::string& n = spec.name;
  if (n == "sic") {
    if (spec.dim == 2) return qubit_sic();
    if (spec.dim == 3) return qutrit_sic();
    throw ConfigError("--frame sic: available for --dim 2 or 3");
  }
  if (n == "mub") {
    if (spec.dim != 2) throw ConfigError("--frame mub: available for --dim 2");
    return qubit_mub_povm();
  }
  if (n == "clifford") {
    if (spec.dim != 2) throw ConfigError("--frame clifford: available for --dim 2");
    return covariant_design_povm(qubit_clifford_group(), PureState(basis_vector(2, 0), TensorLayout({2})));
  }
  if (n == "embedded") {
    try {
      return embedded_frame(spec.dim);
    } catch (const InvalidPovm& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("--frame: expected sic, mub, clifford or embedded, got '" + n + "'");
}

/// Reconstruction residual over random states and the matrix-unit basis.
inline double reconstruction_residual(const Povm& povm, const DualFrame& dual, std::uint64_t seed, int samples = 20) {
  const int d = povm.dim();
  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Matrix e = Matrix::Zero(d, d);
      e(i, j) = 1.0;
      worst = std::max(worst, max_abs(reconstruct(e, povm, dual) - e));
    }
  }
  for (int s = 0; s < samples; ++s) {
    const Matrix rho = ginibre_state(d, derive_seed(seed, static_cast<std::uint64_t>(s))).matrix();
    worst = std::max(worst, max_abs(reconstruct(rho, povm, dual) - rho));
  }
  return worst;
}

inline Report frames_report(const FrameSpec& spec, std::uint64_t seed, double tol) {
  const Povm povm = make_frame(spec);
  const IcReport ic = is_informationally_complete(povm);
  Row row;
  row.add("frame", spec.name).add("dim", povm.dim()).add("elements", static_cast<int>(povm.size()));
  row.add("distinct_elements", static_cast<int>(distinct_elements(povm)));
  row.add("ic", ic.complete).add("rank", static_cast<int>(ic.rank));
  if (!ic.complete) {
    row.violations.push_back("icpovm: frame is not informationally complete");
    row.add("K", std::optional<double>()).add("max_dual_norm", std::optional<double>());
    row.add("reconstruction_residual", std::optional<double>());
    return Report{"frames", {std::move(row)}};
  }
  const DualFrame dual = canonical_dual(povm);
  double max_norm = 0.0;
  for (const Matrix& m : dual.duals) max_norm = std::max(max_norm, trace_norm(m));
  const double res = reconstruction_residual(povm, dual, seed);
  row.add("K", dual.k_constant).add("max_dual_norm", max_norm).add("reconstruction_residual", res);
  if (res > tol) row.violations.push_back("icpovm: reconstruction residual above tolerance");
  return Report{"frames", {std::move(row)}};
}

// ---------------------------------------------------------------------------
// Inspect

/// Full report of one instance as JSON, certificates and chain lines included.
inline nlohmann::ordered_json inspect_instance(const SweepConfig& cfg) {
  SweepConfig c = cfg;
  c.verify.certificates = true;
  const Report rep = run_sweep(c);
  if (rep.rows.size() != 1) throw ConfigError("inspect: the configuration must describe exactly one instance");
  std::optional<KrausChannel> file;
  if (channel_is_file(c.channel)) file = load_channel(c.channel);
  const GridPoint pt = expand_grid(c.grid).front();
  const PointSetup s = setup_point(c, pt, file);
  const InstanceReport inst = verify_instance(s.input, s.channel, seeded(c.verify, c.seed, 0));

  nlohmann::ordered_json doc;
  const Row& row = rep.rows.front();
  nlohmann::ordered_json summary;
  for (const auto& [name, v] : row.cells) summary[name] = detail::json_cell(v);
  doc["summary"] = std::move(summary);
  doc["channel"] = detail::kraus_json(s.channel);
  doc["input"] = detail::matrix_json(s.input.matrix());
  if (inst.chain) {
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const ChainStep& st : inst.chain->steps) {
      steps.push_back({{"name", st.name},
                       {"lhs", st.lhs},
                       {"rhs", st.rhs},
                       {"slack", st.slack()},
                       {"equality", st.equality},
                       {"certified", st.certified},
                       {"note", st.note}});
    }
    doc["chain"] = {{"lines", inst.chain->lines}, {"K", inst.chain->k_constant}, {"steps", std::move(steps)}};
  }
  doc["assertions"] = inst.bounds.assertions;
  doc["certificate"] = detail::certificate_json(inst);
  doc["violations"] = row.violations;
  doc["passed"] = row.passed();
  round_json(doc);
  return doc;
}

}  // namespace aqec
