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

// Acceptance gate. Each criterion prints one PASS/FAIL line followed by its
// measured quantities; the process exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "aqec/aqec.hpp"

namespace {

using aqec::DensityMatrix;
using aqec::Report;

constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    pass = pass && ok;
  }
};

std::string fmt(double x) { return aqec::format_double(x); }

// Reports kept for the determinism criterion, with the callable that rebuilds them.
struct Recorded {
  std::string name;
  std::string bytes;
  std::function<Report()> rebuild;
  bool certificates = false;
};
std::vector<Recorded> g_recorded;

std::string bytes_of(const Report& r, bool certificates) {
  std::ostringstream out;
  aqec::emit_report(r, aqec::ReportFormat::Json, out, certificates);
  return out.str();
}

Report record(const std::string& name, std::function<Report()> build, bool certificates = false) {
  Report r = build();
  g_recorded.push_back({name, bytes_of(r, certificates), std::move(build), certificates});
  return r;
}

aqec::SuiteConfig suite(const std::string& name, int seeds) {
  aqec::SuiteConfig cfg;
  cfg.suite = name;
  cfg.seeds = seeds;
  cfg.seed = kSeed;
  return cfg;
}

double shannon_bits(std::initializer_list<double> p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

// g(x) = 4 x log2(d / x), written out independently of the library.
double g_independent(double x, int d) { return x <= 0.0 ? 0.0 : 4.0 * x * std::log2(d / x); }

// S - I_c <= g(1 - F) and S - E_f <= g(1 - F) for both recoveries of every row with 1 - F <= 1/2.
void check_converse_rows(const Report& r, Outcome& o, int& checked, double& worst) {
  for (const aqec::Row& row : r.rows) {
    const double s = row.number("S");
    const int d = static_cast<int>(row.number("d"));
    for (const char* col : {"F_petz", "F_opt"}) {
      const double x = 1.0 - row.number(col);
      if (!(x <= 0.5)) continue;
      const double rhs = g_independent(std::max(x, 0.0), d);
      worst = std::max(worst, s - row.number("I_c") - rhs);
      worst = std::max(worst, s - row.number("E_f") - rhs);
      ++checked;
    }
    if (row.number("E_f_exact") != 1.0) o.check(false, "row " + fmt(row.number("index")) + ": E_f not from Wootters");
  }
}

Outcome criterion1() {
  Outcome o;
  // The suite cycles (d, d') through {2,3}^2, so 800 seeds give 200 per pair.
  const Report r = record("identities", [] { return aqec::run_suite(suite("identities", 800)); });
  int per_pair[4] = {0, 0, 0, 0};
  for (const aqec::Row& row : r.rows) {
    per_pair[(static_cast<int>(row.number("d")) - 2) * 2 + static_cast<int>(row.number("d_out")) - 2]++;
  }
  const double worst = aqec::column_max(r, "eq2_residual");
  o.check(std::all_of(per_pair, per_pair + 4, [](int n) { return n == 200; }), "200 instances per (d, d')");
  o.check(worst <= 1e-9, "max |I(R:Q') + I(R:E') - 2 S| = " + fmt(worst) + " <= 1e-9");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const struct {
    const char* name;
    int dim;
  } frames[] = {{"sic", 2}, {"mub", 2}, {"clifford", 2}, {"sic", 3}};
  std::vector<Report> reps;
  for (const auto& f : frames) {
    const std::string name = std::string("frames ") + f.name + " d=" + std::to_string(f.dim);
    reps.push_back(record(name, [f] { return aqec::frames_report({f.name, f.dim}, kSeed, 1e-9); }));
  }
  for (std::size_t i = 0; i < 3; ++i) {
    const double res = reps[i].rows[0].number("reconstruction_residual");
    o.check(res <= 1e-9, std::string(frames[i].name) + " d=2 reconstruction residual " + fmt(res) + " <= 1e-9");
  }
  const double clifford = reps[2].rows[0].number("max_dual_norm");
  o.check(std::abs(clifford - 3.0) <= 1e-9, "Clifford orbit dual trace norm " + fmt(clifford) + " = 3");
  const double sic3 = reps[3].rows[0].number("max_dual_norm");
  const double k3 = reps[3].rows[0].number("K");
  o.check(std::abs(sic3 - 13.0 / 3.0) <= 1e-9, "d=3 SIC dual trace norm " + fmt(sic3) + " = 13/3");
  o.check(std::abs(k3 - 169.0 / 9.0) <= 1e-9 && k3 < 25.0, "d=3 SIC K " + fmt(k3) + " = (13/3)^2 < 25");
  return o;
}

Outcome criterion3() {
  Outcome o;
  const aqec::EofOptions opts;  // default restart budget
  const std::vector<double> diffs = aqec::parallel_map(100, [&](std::size_t i) {
    const DensityMatrix rho = aqec::random_rank_k_state(4, 1 + static_cast<int>(i % 4), aqec::derive_seed(kSeed, i))
                                  .relabel(aqec::TensorLayout({2, 2}));
    aqec::EofOptions e = opts;
    e.seed = aqec::derive_seed(kSeed, 1000 + i);
    return std::abs(aqec::eof(rho, aqec::Cut::first(), e).value - aqec::wootters_eof(rho));
  });
  const double worst = *std::max_element(diffs.begin(), diffs.end());
  o.check(worst <= 1e-3, "max |EoF_num - EoF_Wootters| over 100 states = " + fmt(worst) + " <= 1e-3");
  return o;
}

Outcome criterion4() {
  Outcome o;
  const Report r = record("monogamy", [] { return aqec::run_suite(suite("monogamy", 50)); });
  const double lo = aqec::column_min(r, "residual_gap");
  const double hi = aqec::column_max(r, "residual_gap");
  o.check(lo >= -1e-9, "min (1 - E_f - C) = " + fmt(lo) + " >= -1e-9");
  o.check(hi <= 5e-3, "max residual gap = " + fmt(hi) + " <= 5e-3");
  return o;
}

Report g_chain_recoveries;

Outcome criterion5() {
  Outcome o;
  const Report r = record("chain", [] { return aqec::run_suite(suite("chain", 200)); });
  const double slack = aqec::column_min(r, "min_slack");
  double eq11 = -std::numeric_limits<double>::infinity();
  for (const aqec::Row& row : r.rows) eq11 = std::max(eq11, row.number("eq11_lhs") - row.number("eq11_rhs"));
  o.check(slack >= -1e-9, "min chain slack over 200 channels = " + fmt(slack) + " >= -1e-9");
  o.check(eq11 <= 1e-9, "max (t^2 - 2 (2dd'-1)^2 eps_f) = " + fmt(eq11) + " <= 1e-9");
  o.check(r.passed(), "no row violations");
  // Recovery channels for the same 200 channels, consumed by the converse criterion.
  g_chain_recoveries = record("bounds", [] { return aqec::run_suite(suite("bounds", 200)); });
  return o;
}

Report g_sweep;

Outcome criterion6() {
  Outcome o;
  g_sweep = record(
      "sweep",
      [] {
        aqec::SweepConfig cfg;
        cfg.channel = "depolarizing";
        cfg.grid = {aqec::parse_param("p=0:0.2:0.01")};
        cfg.seed = kSeed;
        cfg.verify.certificates = true;
        return aqec::run_sweep(cfg);
      },
      true);
  const Report& r = g_sweep;
  o.check(r.rows.size() == 21, "21 grid points");
  double worst_direct = -std::numeric_limits<double>::infinity();
  double worst_f = 0.0, worst_ic = 0.0;
  for (const aqec::Row& row : r.rows) {
    const double f = row.number("F_opt");
    for (const char* b : {"sw_direct", "thm1", "thm2", "cor1"}) worst_direct = std::max(worst_direct, row.number(b) - f);
    const double p = row.number("p");
    const aqec::KrausChannel ch = aqec::depolarizing(2, p);
    const double fe = aqec::entanglement_fidelity(DensityMatrix::maximally_mixed(2), ch);
    worst_f = std::max(worst_f, std::abs(fe - (1.0 - 0.75 * p)));
    const double ic = 1.0 - shannon_bits({1.0 - 0.75 * p, p / 4, p / 4, p / 4});
    worst_ic = std::max(worst_ic, std::abs(row.number("I_c") - ic));
  }
  o.check(worst_direct <= 1e-6, "max (bound - F_opt) over sw_direct, thm1, thm2, cor1 = " + fmt(worst_direct) +
                                    " <= 1e-6");
  const aqec::Row& zero = r.rows.front();
  double loss0 = 0.0, bound0 = 0.0;
  for (const char* l : {"eps_c", "eps_f", "eps_half_mutual_information", "eps_hashing"}) {
    loss0 = std::max(loss0, std::abs(zero.number(l)));
  }
  for (const char* b : {"sw_direct", "thm1", "thm2", "cor1"}) bound0 = std::max(bound0, std::abs(zero.number(b) - 1.0));
  o.check(zero.number("p") == 0.0 && loss0 == 0.0, "p=0: all losses 0 (max |eps| = " + fmt(loss0) + ")");
  o.check(bound0 <= 1e-12, "p=0: all bounds 1 (max |bound - 1| = " + fmt(bound0) + ")");
  o.check(worst_f <= 1e-9, "max |F(rho, E) - (1 - 3p/4)| = " + fmt(worst_f) + " <= 1e-9");
  o.check(worst_ic <= 1e-9, "max |I_c - (1 - H(1-3p/4, p/4, p/4, p/4))| = " + fmt(worst_ic) + " <= 1e-9");
  return o;
}

Outcome criterion7() {
  Outcome o;
  int checked = 0;
  double worst = -std::numeric_limits<double>::infinity();
  check_converse_rows(g_chain_recoveries, o, checked, worst);
  check_converse_rows(g_sweep, o, checked, worst);
  o.check(checked > 0, std::to_string(checked) + " recovery channels with 1 - F <= 1/2");
  o.check(worst <= 1e-9, "max (loss - g(1 - F)) for I_c and E_f = " + fmt(worst) + " <= 1e-9");
  return o;
}

Outcome criterion8() {
  Outcome o;
  const Report r = record("gap", [] { return aqec::run_suite(suite("gap", 200)); });
  double worst = -std::numeric_limits<double>::infinity();
  double pure = 0.0;
  int pure_rows = 0;
  for (const aqec::Row& row : r.rows) {
    const aqec::Cell* rhs = row.find("rhs");
    if (std::holds_alternative<double>(*rhs)) worst = std::max(worst, row.number("lhs") - row.number("rhs"));
    if (row.number("rank") == 1.0) {
      ++pure_rows;
      pure = std::max({pure, std::abs(row.number("lhs")), std::abs(row.number("rhs"))});
    }
  }
  o.check(r.rows.size() == 200 && r.passed(), "200 states, lhs <= rhs on every row");
  o.check(worst <= 1e-9, "max (lhs - rhs) over non-vacuous rows = " + fmt(worst));
  o.check(pure_rows > 0 && pure <= 1e-9, std::to_string(pure_rows) + " pure states: max |lhs|, |rhs| = " + fmt(pure));
  return o;
}

Outcome criterion9() {
  Outcome o;
  // Every report above was produced with four workers; rebuild with one.
  setenv("AQEC_THREADS", "1", 1);
  for (const Recorded& rec : g_recorded) {
    const std::string again = bytes_of(rec.rebuild(), rec.certificates);
    o.check(again == rec.bytes, rec.name + ": byte-identical with 1 and 4 threads (" +
                                    std::to_string(rec.bytes.size()) + " bytes)");
  }
  setenv("AQEC_THREADS", "4", 1);
  return o;
}

}  // namespace

int main() {
  setenv("AQEC_THREADS", "4", 1);
  const struct {
    int id;
    const char* name;
    double budget_s;
    Outcome (*run)();
  } criteria[] = {
      {1, "identity suite", 60, criterion1},
      {2, "frame suite", 10, criterion2},
      {3, "EoF oracle agreement", 300, criterion3},
      {4, "monogamy", 600, criterion4},
      {5, "chain suite", 600, criterion5},
      {6, "bound consistency", 300, criterion6},
      {7, "converse", 300, criterion7},
      {8, "gap suite", 300, criterion8},
      {9, "determinism", std::numeric_limits<double>::infinity(), criterion9},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = c.run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (std::isfinite(c.budget_s)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "runtime %.1f s < %.0f s", secs, c.budget_s);
      o.check(secs < c.budget_s, buf);
    }
    std::printf("%s  criterion %d: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs);
    for (const std::string& d : o.details) std::printf("        %s\n", d.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
