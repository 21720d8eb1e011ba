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

// Tabular reports: ordered rows of named cells, written as CSV or JSON.
// Floats are printed with 12 significant digits in both formats.

#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "aqec/qalg.hpp"

namespace aqec {

enum class ReportFormat { Csv, Json };

inline std::optional<ReportFormat> parse_report_format(const std::string& s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  return std::nullopt;
}

/// Empty (monostate) cells are written as an empty CSV field and JSON null.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);  // no "-0"
  return buf;
}

struct Row {
  std::vector<std::pair<std::string, Cell>> cells;
  std::vector<std::string> violations;
  std::optional<nlohmann::ordered_json> certificate;

  Row& add(std::string name, Cell value) {
    cells.emplace_back(std::move(name), std::move(value));
    return *this;
  }
  Row& add(std::string name, std::optional<double> value) {
    return value ? add(std::move(name), Cell(*value)) : add(std::move(name), Cell());
  }
  Row& add(std::string name, double value) { return add(std::move(name), Cell(value)); }
  Row& add(std::string name, std::string value) { return add(std::move(name), Cell(std::move(value))); }
  Row& add(std::string name, bool value) { return add(std::move(name), Cell(std::int64_t{value ? 1 : 0})); }
  Row& add(std::string name, int value) { return add(std::move(name), Cell(std::int64_t{value})); }
  Row& add(std::string name, const char* value) { return add(std::move(name), Cell(std::string(value))); }

  const Cell* find(const std::string& name) const {
    for (const auto& [k, v] : cells) {
      if (k == name) return &v;
    }
    return nullptr;
  }
  double number(const std::string& name) const {
    const Cell* c = find(name);
    if (!c) throw Error("report: no column " + name);
    if (const auto* d = std::get_if<double>(c)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(c)) return static_cast<double>(*i);
    return std::numeric_limits<double>::quiet_NaN();
  }
  bool passed() const { return violations.empty(); }
};

struct Report {
  std::string kind;
  std::vector<Row> rows;

  bool passed() const {
    for (const Row& r : rows) {
      if (!r.passed()) return false;
    }
    return true;
  }
  /// (row index, first violation) of the first failing row.
  std::optional<std::pair<std::size_t, std::string>> first_violation() const {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].passed()) return std::pair{i, rows[i].violations.front()};
    }
    return std::nullopt;
  }
};

namespace detail {

inline std::string csv_field(const Cell& c) {
  struct V {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double x) const { return format_double(x); }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string out = "\"";
      for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
      }
      return out + "\"";
    }
  };
  return std::visit(V{}, c);
}

inline nlohmann::ordered_json json_cell(const Cell& c) {
  struct V {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(double x) const {
      // Round-trip through the 12-digit text so JSON and CSV agree.
      if (!std::isfinite(x)) return format_double(x);
      return std::strtod(format_double(x).c_str(), nullptr);
    }
    nlohmann::ordered_json operator()(std::int64_t x) const { return x; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
  };
  return std::visit(V{}, c);
}

inline std::string joined_violations(const Row& r) {
  std::string out;
  for (const std::string& v : r.violations) out += (out.empty() ? "" : "; ") + v;
  return out;
}

}  // namespace detail

/// Rounds every double in a JSON tree to 12 significant digits.
inline void round_json(nlohmann::ordered_json& j) {
  if (j.is_number_float()) {
    j = std::strtod(format_double(j.get<double>()).c_str(), nullptr);
  } else if (j.is_structured()) {
    for (auto& child : j) round_json(child);
  }
}

/// Writes the report. All rows must share the column order of the first row.
inline void emit_report(const Report& rep, ReportFormat fmt, std::ostream& out, bool certificates = false) {
  if (rep.rows.empty()) throw Error("emit_report: no rows");
  const auto& head = rep.rows.front().cells;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& cells = rep.rows[i].cells;
    bool same = cells.size() == head.size();
    for (std::size_t k = 0; same && k < cells.size(); ++k) same = cells[k].first == head[k].first;
    if (!same) throw Error("emit_report: row " + std::to_string(i) + " has a different column layout");
  }
  if (fmt == ReportFormat::Csv) {
    for (const auto& [name, _] : head) out << name << ',';
    out << "pass,violations\n";
    for (const Row& r : rep.rows) {
      for (const auto& [_, v] : r.cells) out << detail::csv_field(v) << ',';
      out << (r.passed() ? 1 : 0) << ',' << detail::csv_field(detail::joined_violations(r)) << '\n';
    }
    return;
  }
  nlohmann::ordered_json doc;
  doc["report"] = rep.kind;
  nlohmann::ordered_json cols = nlohmann::ordered_json::array();
  for (const auto& [name, _] : head) cols.push_back(name);
  cols.push_back("pass");
  cols.push_back("violations");
  doc["columns"] = std::move(cols);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const Row& r : rep.rows) {
    nlohmann::ordered_json row;
    for (const auto& [name, v] : r.cells) row[name] = detail::json_cell(v);
    row["pass"] = r.passed() ? 1 : 0;
    row["violations"] = r.violations;
    if (certificates && r.certificate) {
      nlohmann::ordered_json cert = *r.certificate;
      round_json(cert);
      row["certificate"] = std::move(cert);
    }
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  doc["passed"] = rep.passed();
  out << doc.dump(2) << '\n';
}

inline void write_report(const Report& rep, ReportFormat fmt, const std::string& path, bool certificates = false) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path + ": cannot open for writing");
  emit_report(rep, fmt, out, certificates);
}

}  // namespace aqec
