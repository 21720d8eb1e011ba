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

// aqec: batch runner for entanglement-loss bounds on quantum channels.
//
// Exit codes: 0 all invariants hold, 1 an invariant failed, 2 invalid configuration.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aqec/aqec.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;

struct Flags {
  std::string config;
  std::string channel = "depolarizing";
  std::vector<std::string> params;
  int dim = 2;
  int out_dim = 0;
  int rank = 2;
  std::string input = "maximally_mixed";
  std::uint64_t seed = 0;
  int eof_restarts = 8;
  int eof_ensemble_size = 0;
  int cc_restarts = 8;
  int recovery_restarts = 4;
  double tol = 1e-9;
  std::string out;
  std::string format;
  bool certificates = false;
  std::string suite;
  int seeds = 200;
  std::string frame = "sic";
};

/// Applies a JSON config; flags given on the command line take precedence.
void apply_config(Flags& f, const CLI::App& app) {
  if (f.config.empty()) return;
  const auto doc = aqec::io::parse_text(aqec::io::read_file(f.config), f.config);
  if (!doc.is_object()) throw aqec::ConfigError(f.config + ": expected a JSON object");
  auto given = [&](const std::string& flag) {
    for (const CLI::App* sub : app.get_subcommands()) {
      if (const CLI::Option* o = sub->get_option_no_throw(flag); o && o->count() > 0) return true;
    }
    return false;
  };
  for (const auto& [key, v] : doc.items()) {
    const std::string flag = "--" + [&] {
      std::string k = key;
      for (char& c : k) {
        if (c == '_') c = '-';
      }
      return k;
    }();
    if (given(flag)) continue;
    try {
      if (key == "channel") f.channel = v.get<std::string>();
      else if (key == "param") f.params = v.is_array() ? v.get<std::vector<std::string>>()
                                                       : std::vector<std::string>{v.get<std::string>()};
      else if (key == "dim") f.dim = v.get<int>();
      else if (key == "out_dim") f.out_dim = v.get<int>();
      else if (key == "rank") f.rank = v.get<int>();
      else if (key == "input") f.input = v.get<std::string>();
      else if (key == "seed") f.seed = v.get<std::uint64_t>();
      else if (key == "eof_restarts") f.eof_restarts = v.get<int>();
      else if (key == "eof_ensemble_size") f.eof_ensemble_size = v.get<int>();
      else if (key == "cc_restarts") f.cc_restarts = v.get<int>();
      else if (key == "recovery_restarts") f.recovery_restarts = v.get<int>();
      else if (key == "tol") f.tol = v.get<double>();
      else if (key == "out") f.out = v.get<std::string>();
      else if (key == "format") f.format = v.get<std::string>();
      else if (key == "certificates") f.certificates = v.get<bool>();
      else if (key == "suite") f.suite = v.get<std::string>();
      else if (key == "seeds") f.seeds = v.get<int>();
      else if (key == "frame") f.frame = v.get<std::string>();
      else throw aqec::ConfigError(f.config + ": $." + key + ": unknown field");
    } catch (const nlohmann::json::exception&) {
      throw aqec::ConfigError(f.config + ": $." + key + ": wrong type");
    }
  }
}

aqec::ReportFormat output_format(const Flags& f) {
  std::string fmt = f.format;
  if (fmt.empty()) fmt = f.out.size() >= 5 && f.out.substr(f.out.size() - 5) == ".json" ? "json" : "csv";
  const auto parsed = aqec::parse_report_format(fmt);
  if (!parsed) throw aqec::ConfigError("--format: expected csv or json, got '" + fmt + "'");
  return *parsed;
}

aqec::SweepConfig sweep_config(const Flags& f) {
  aqec::SweepConfig c;
  c.channel = f.channel;
  for (const std::string& p : f.params) c.grid.push_back(aqec::parse_param(p));
  c.dim = f.dim;
  c.out_dim = f.out_dim;
  c.rank = f.rank;
  c.input = aqec::parse_input_kind(f.input);
  c.seed = f.seed;
  c.tol = f.tol;
  c.verify.measures.eof.restarts = f.eof_restarts;
  c.verify.measures.eof.ensemble_size = f.eof_ensemble_size;
  c.verify.measures.cc.restarts = f.cc_restarts;
  c.verify.recovery.restarts = f.recovery_restarts;
  c.verify.certificates = f.certificates;
  c.validate();
  return c;
}

int finish(const aqec::Report& rep, const Flags& f) {
  const aqec::ReportFormat fmt = output_format(f);
  if (f.out.empty()) {
    aqec::emit_report(rep, fmt, std::cout, f.certificates);
  } else {
    aqec::write_report(rep, fmt, f.out, f.certificates);
  }
  std::size_t failed = 0;
  for (const aqec::Row& r : rep.rows) failed += r.passed() ? 0 : 1;
  std::cerr << rep.kind << ": " << rep.rows.size() << " rows, " << failed << " failing\n";
  if (const auto v = rep.first_violation()) {
    std::cerr << "invariant violated at row " << v->first << ": " << v->second << '\n';
    return kExitViolation;
  }
  return kExitOk;
}

void add_instance_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--channel", f.channel, "Channel family or path to a channel JSON file");
  sub->add_option("--param", f.params, "Parameter grid, e.g. p=0:0.2:0.01 or p=0,0.05 (repeatable)");
  sub->add_option("--dim", f.dim, "Input dimension");
  sub->add_option("--out-dim", f.out_dim, "Output dimension for random channels (default: --dim)");
  sub->add_option("--rank", f.rank, "Kraus rank for random_rank_k");
  sub->add_option("--input", f.input, "Input state: maximally_mixed, pure or random");
  sub->add_option("--recovery-restarts", f.recovery_restarts, "Recovery optimizer restarts");
}

void add_common_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON file with default values for any flag");
  sub->add_option("--seed", f.seed, "Global seed");
  sub->add_option("--eof-restarts", f.eof_restarts, "EoF optimizer restarts");
  sub->add_option("--eof-ensemble-size", f.eof_ensemble_size, "EoF ensemble size (0 = automatic)");
  sub->add_option("--cc-restarts", f.cc_restarts, "Classical-correlation optimizer restarts");
  sub->add_option("--tol", f.tol, "Invariant tolerance");
  sub->add_option("--out", f.out, "Output file (default: stdout)");
  sub->add_option("--format", f.format, "csv or json (default from --out extension)");
  sub->add_flag("--certificates", f.certificates, "Include optimal ensembles, POVMs and recoveries in JSON");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement-loss bounds for approximate quantum error correction"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* run = app.add_subcommand("run", "Parameter sweep over a channel family");
  add_common_flags(run, f);
  add_instance_flags(run, f);

  CLI::App* verify = app.add_subcommand("verify", "Seeded invariant suite");
  add_common_flags(verify, f);
  verify->add_option("--suite", f.suite, "identities, pinsker, monogamy, chain, bounds or gap")->required();
  verify->add_option("--seeds", f.seeds, "Number of seeded instances");
  verify->add_option("--recovery-restarts", f.recovery_restarts, "Recovery optimizer restarts");

  CLI::App* frames = app.add_subcommand("frames", "Informationally complete frame report");
  add_common_flags(frames, f);
  frames->add_option("--dim", f.dim, "Hilbert-space dimension");
  frames->add_option("--frame", f.frame, "sic, mub, clifford or embedded");

  CLI::App* inspect = app.add_subcommand("inspect", "Deep report of a single instance (JSON)");
  add_common_flags(inspect, f);
  add_instance_flags(inspect, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    apply_config(f, app);
    if (run->parsed()) return finish(aqec::run_sweep(sweep_config(f)), f);
    if (verify->parsed()) {
      aqec::SuiteConfig s;
      s.suite = f.suite;
      s.seeds = f.seeds;
      s.seed = f.seed;
      s.tol = f.tol;
      s.measures.eof.restarts = f.eof_restarts;
      s.measures.eof.ensemble_size = f.eof_ensemble_size;
      s.measures.cc.restarts = f.cc_restarts;
      s.recovery.restarts = f.recovery_restarts;
      s.certificates = f.certificates;
      const aqec::Report rep = aqec::run_suite(s);
      const int code = finish(rep, f);
      if (f.suite == "chain") std::cerr << "min slack = " << aqec::format_double(aqec::column_min(rep, "min_slack")) << '\n';
      if (f.suite == "monogamy") {
        std::cerr << "max residual gap = " << aqec::format_double(aqec::column_max(rep, "residual_gap")) << '\n';
      }
      return code;
    }
    if (frames->parsed()) {
      const aqec::Report rep = aqec::frames_report({f.frame, f.dim}, f.seed, f.tol);
      const aqec::Row& row = rep.rows.front();
      std::cout << "frame = " << f.frame << ", d = " << f.dim << ", elements = " << row.number("elements")
                << ", informationally complete = " << (row.number("ic") != 0 ? "yes" : "no") << '\n';
      if (row.number("ic") != 0) {
        std::cout << "K = " << aqec::format_double(row.number("K")) << '\n'
                  << "max dual trace norm = " << aqec::format_double(row.number("max_dual_norm")) << '\n'
                  << "reconstruction residual = " << aqec::format_double(row.number("reconstruction_residual"))
                  << '\n';
      }
      if (!f.out.empty()) aqec::write_report(rep, output_format(f), f.out);
      if (const auto v = rep.first_violation()) {
        std::cerr << "invariant violated: " << v->second << '\n';
        return kExitViolation;
      }
      return kExitOk;
    }
    if (inspect->parsed()) {
      const nlohmann::ordered_json doc = aqec::inspect_instance(sweep_config(f));
      if (f.out.empty()) {
        std::cout << doc.dump(2) << '\n';
      } else {
        std::ofstream out(f.out, std::ios::binary);
        if (!out) throw aqec::ConfigError(f.out + ": cannot open for writing");
        out << doc.dump(2) << '\n';
      }
      if (!doc.at("passed").get<bool>()) {
        std::cerr << "invariant violated: " << doc.at("violations").front().get<std::string>() << '\n';
        return kExitViolation;
      }
      return kExitOk;
    }
  } catch (const aqec::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const aqec::SchemaError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const aqec::InvalidChannel& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const aqec::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
