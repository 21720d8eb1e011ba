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

// JSON (de)serialization of Kraus channels and matrices.
//
// Channel schema:
//   { "in_dim": 2, "out_dim": 2,
//     "kraus": [ [[a00, a01], [a10, a11]], ... ] }
// where each entry is a real number or a [re, im] pair.

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "aqec/channel.hpp"

namespace aqec {

/// Malformed document; `what()` carries a field path or line/column.
class SchemaError : public Error {
 public:
  using Error::Error;
};

namespace io {

using json = nlohmann::json;

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

inline json to_json(const KrausChannel& ch) {
  json ops = json::array();
  for (const Matrix& k : ch.ops()) ops.push_back(to_json(k));
  return json{{"in_dim", ch.in_dim()}, {"out_dim", ch.out_dim()}, {"kraus", std::move(ops)}};
}

inline Complex complex_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw SchemaError(path + ": expected a number or a [re, im] pair");
}

inline Matrix matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SchemaError(path + ": expected a nonempty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].empty()) throw SchemaError(rp + ": expected a nonempty array of entries");
    if (i == 0) cols = j[i].size();
    if (j[i].size() != cols) {
      throw SchemaError(rp + ": row has " + std::to_string(j[i].size()) + " entries, expected " + std::to_string(cols) +
                        " (matrix is not rectangular)");
    }
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < cols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          complex_from_json(j[i][k], path + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
  }
  return m;
}

inline int positive_int(const json& doc, const char* key) {
  if (!doc.contains(key)) throw SchemaError(std::string("$.") + key + ": missing required field");
  const json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 4096) {
    throw SchemaError(std::string("$.") + key + ": expected a positive integer");
  }
  return v.get<int>();
}

/// Parses a channel document. Schema problems raise SchemaError, CPTP problems InvalidChannel.
inline KrausChannel channel_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("$: expected an object");
  const int in = positive_int(doc, "in_dim");
  const int out = positive_int(doc, "out_dim");
  if (!doc.contains("kraus")) throw SchemaError("$.kraus: missing required field");
  const json& ks = doc.at("kraus");
  if (!ks.is_array() || ks.empty()) throw SchemaError("$.kraus: expected a nonempty array of matrices");
  for (const auto& [key, _] : doc.items()) {
    if (key != "in_dim" && key != "out_dim" && key != "kraus" && key != "name" && key != "comment") {
      throw SchemaError("$." + key + ": unknown field");
    }
  }
  std::vector<Matrix> ops;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const std::string path = "$.kraus[" + std::to_string(i) + "]";
    Matrix m = matrix_from_json(ks[i], path);
    if (m.rows() != out || m.cols() != in) {
      throw SchemaError(path + ": shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                        " does not match out_dim x in_dim = " + std::to_string(out) + "x" + std::to_string(in));
    }
    ops.push_back(std::move(m));
  }
  const CptpReport rep = validate_cptp(ops);
  if (!rep.valid) {
    std::ostringstream msg;
    msg << "channel is not trace preserving: max |sum_m E_m^dag E_m - I| = " << rep.deviation;
    throw InvalidChannel(msg.str());
  }
  if (ops.size() > static_cast<std::size_t>(in) * static_cast<std::size_t>(out)) {
    return kraus_from_choi(detail::choi_of(ops), in, out);
  }
  return KrausChannel(std::move(ops));
}

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw SchemaError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace io

inline KrausChannel load_channel(const std::string& path) {
  const io::json doc = io::parse_text(io::read_file(path), path);
  try {
    return io::channel_from_json(doc);
  } catch (const SchemaError& e) {
    throw SchemaError(path + ": " + e.what());
  } catch (const InvalidChannel& e) {
    throw InvalidChannel(path + ": " + e.what());
  }
}

inline void save_channel(const KrausChannel& ch, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path + ": cannot open for writing");
  out << io::to_json(ch).dump(2) << '\n';
}

}  // namespace aqec
