#pragma once

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stochcube/core.hpp"
#include "stochcube/decomp.hpp"
#include "stochcube/markov.hpp"

// Interchange formats.
//
// Primary format: a JSON tensor document
//
//   {
//     "kind":   "ns" | "cs12" | "3stoch" | "raw",
//     "layout": "frontal-major",
//     "n":      <positive integer>,
//     "order":  2 | 3,
//     "values": [ ... n^order numbers ... ],
//     "eps":    <optional tolerance override for validation on load>
//   }
//
// Order-3 values are listed frontal-slice-major — k outermost, then i,
// then j, all 0-based — i.e. the frontal slices concatenated, each in
// row-major order. Order-2 values are row-major. Kinds "ns" (column
// stochastic matrix, order 2), "cs12" and "3stoch" (order 3) trigger the
// corresponding validator on load; "raw" skips validation.
//
// Secondary format: the matricized CSV — n rows by n^2 columns, columns
// k*n .. k*n+n-1 forming frontal slice k. No header, comma separators.
//
// All numbers are written as the shortest decimal that parses back to the
// identical double, so save/load round trips are value-exact.
//
// Block models and stacked states use the same conventions with kinds
// "bmc" and "state"; simplex vectors use kind "simplex" (see README).

namespace stochcube {
namespace io {

using nlohmann::json;

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("malformed document " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError("document root must be an object: " + path);
  return j;
}

inline void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << text;
  if (!out) throw ParseError("failed writing file: " + path);
}

// Deterministic rendering: two-space indent, keys in sorted order (the
// json object type keeps them sorted), one trailing newline.
inline std::string render(const json& j) { return j.dump(2) + "\n"; }

inline void save_document(const std::string& path, const json& j) {
  save_text(path, render(j));
}

namespace detail {

inline std::string get_kind(const json& j, const std::string& path) {
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw ParseError("document missing string field \"kind\": " + path);
  }
  return j["kind"].get<std::string>();
}

inline int get_int(const json& j, const char* field, const std::string& path) {
  if (!j.contains(field) || !j[field].is_number_integer()) {
    throw ParseError(std::string("document missing integer field \"") + field +
                     "\": " + path);
  }
  return j[field].get<int>();
}

inline std::vector<double> get_values(const json& j, const std::string& path) {
  if (!j.contains("values") || !j["values"].is_array()) {
    throw ParseError("document missing array field \"values\": " + path);
  }
  std::vector<double> out;
  out.reserve(j["values"].size());
  for (const auto& v : j["values"]) {
    if (!v.is_number()) {
      throw ParseError("non-numeric entry in \"values\": " + path);
    }
    out.push_back(v.get<double>());
  }
  return out;
}

inline void check_layout(const json& j, const std::string& path) {
  if (j.contains("layout")) {
    const auto& l = j["layout"];
    if (!l.is_string() || l.get<std::string>() != "frontal-major") {
      throw ParseError("unsupported layout (expected \"frontal-major\"): " +
                       path);
    }
  }
}

inline void check_kind(const std::string& got, const std::string& expected,
                       const std::string& path) {
  if (got != expected) {
    throw ValidationError("document kind \"" + got +
                          "\" does not match expected \"" + expected +
                          "\": " + path);
  }
}

inline Tolerance effective_tol(const json& j,
                               std::optional<double> eps_override) {
  if (eps_override) return Tolerance(*eps_override);
  if (j.contains("eps")) {
    if (!j["eps"].is_number()) {
      throw ParseError("field \"eps\" must be a number");
    }
    return Tolerance(j["eps"].get<double>());
  }
  return Tolerance{};
}

inline Matrix matrix_from_doc(const json& j, const std::string& path) {
  check_layout(j, path);
  const int n = get_int(j, "n", path);
  const int order = get_int(j, "order", path);
  if (order != 2) {
    throw ShapeError("expected order-2 document, got order " +
                     std::to_string(order) + ": " + path);
  }
  if (n < 1) throw ShapeError("n must be positive: " + path);
  auto values = get_values(j, path);
  if (values.size() != static_cast<std::size_t>(n) * n) {
    throw ShapeError("values length " + std::to_string(values.size()) +
                     " does not match n^2=" + std::to_string(n * n) + ": " +
                     path);
  }
  return Matrix(n, n, std::move(values));
}

inline Cubic cubic_from_doc(const json& j, const std::string& path) {
  check_layout(j, path);
  const int n = get_int(j, "n", path);
  const int order = get_int(j, "order", path);
  if (order != 3) {
    throw ShapeError("expected order-3 document, got order " +
                     std::to_string(order) + ": " + path);
  }
  if (n < 1) throw ShapeError("n must be positive: " + path);
  auto values = get_values(j, path);
  if (values.size() != static_cast<std::size_t>(n) * n * n) {
    throw ShapeError("values length " + std::to_string(values.size()) +
                     " does not match n^3=" + std::to_string(n * n * n) +
                     ": " + path);
  }
  return Cubic(n, std::move(values));
}

}  // namespace detail

// ---- tensor documents -----------------------------------------------------

inline json matrix_doc(const Matrix& m, const std::string& kind) {
  if (m.rows() != m.cols()) {
    throw ShapeError("matrix documents must be square");
  }
  json j;
  j["kind"] = kind;
  j["layout"] = "frontal-major";
  j["n"] = m.rows();
  j["order"] = 2;
  j["values"] = m.values();
  return j;
}

inline json doc(const StochasticMatrix& m) { return matrix_doc(m.matrix(), "ns"); }
inline json doc_raw(const Matrix& m) { return matrix_doc(m, "raw"); }

inline json cubic_doc(const Cubic& g, const std::string& kind) {
  json j;
  j["kind"] = kind;
  j["layout"] = "frontal-major";
  j["n"] = g.n();
  j["order"] = 3;
  j["values"] = g.values();
  return j;
}

inline json doc(const CubicStochastic12& p) { return cubic_doc(p.grid(), "cs12"); }
inline json doc(const Cubic3Stochastic& p) { return cubic_doc(p.grid(), "3stoch"); }
inline json doc_raw(const Cubic& g) { return cubic_doc(g, "raw"); }

inline StochasticMatrix load_stochastic_matrix(
    const std::string& path, std::optional<double> eps = {}) {
  json j = load_json(path);
  detail::check_kind(detail::get_kind(j, path), "ns", path);
  return StochasticMatrix(detail::matrix_from_doc(j, path),
                          detail::effective_tol(j, eps));
}

inline CubicStochastic12 load_cubic12(const std::string& path,
                                      std::optional<double> eps = {}) {
  json j = load_json(path);
  detail::check_kind(detail::get_kind(j, path), "cs12", path);
  return CubicStochastic12(detail::cubic_from_doc(j, path),
                           detail::effective_tol(j, eps));
}

inline Cubic3Stochastic load_cubic3(const std::string& path,
                                    std::optional<double> eps = {}) {
  json j = load_json(path);
  detail::check_kind(detail::get_kind(j, path), "3stoch", path);
  return Cubic3Stochastic(detail::cubic_from_doc(j, path),
                          detail::effective_tol(j, eps));
}

// Raw documents skip validation; either order is accepted by its loader.
inline Matrix load_raw_matrix(const std::string& path) {
  json j = load_json(path);
  detail::check_kind(detail::get_kind(j, path), "raw", path);
  return detail::matrix_from_doc(j, path);
}

inline Cubic load_raw_cubic(const std::string& path) {
  json j = load_json(path);
  detail::check_kind(detail::get_kind(j, path), "raw", path);
  return detail::cubic_from_doc(j, path);
}

// ---- matricized CSV ---------------------------------------------------------

inline void save_matricized_csv(const std::string& path, const Cubic& g) {
  const Matrix m = matricize_frontal(g);
  std::ostringstream out;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << stochcube::detail::dtoa(m.at(i, j));
    }
    out << '\n';
  }
  save_text(path, out.str());
}

inline Cubic load_matricized_csv(const std::string& path, int n) {
  if (n < 1) throw ShapeError("load_matricized_csv: n must be positive");
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    std::vector<double> row;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      std::string cell = line.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      double v = 0.0;
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      auto res = std::from_chars(first, last, v);
      if (res.ec != std::errc{} || res.ptr != last) {
        throw ParseError("unparseable CSV cell \"" + cell + "\" in " + path);
      }
      row.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  if (static_cast<int>(rows.size()) != n) {
    throw ShapeError("CSV has " + std::to_string(rows.size()) +
                     " rows, expected n=" + std::to_string(n) + ": " + path);
  }
  Matrix m(n, n * n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n * n) {
      throw ShapeError("CSV row " + std::to_string(i) + " has " +
                       std::to_string(rows[i].size()) +
                       " columns, expected n^2=" + std::to_string(n * n) +
                       ": " + path);
    }
    for (int j = 0; j < n * n; ++j) m.at(i, j) = rows[i][j];
  }
  return dematricize_frontal(m);
}

// ---- block models and states ------------------------------------------------

inline json doc(const BlockModel& m) {
  json j;
  j["kind"] = "bmc";
  j["s"] = m.s();
  j["n"] = m.n();
  j["lambda"] = json::array();
  for (int r = 0; r < m.s(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.s(); ++c) row.push_back(m.lambda(r, c));
    j["lambda"].push_back(row);
  }
  j["blocks"] = json::array();
  for (int r = 0; r < m.s(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.s(); ++c) row.push_back(m.block(r, c).matrix().values());
    j["blocks"].push_back(row);
  }
  return j;
}

inline BlockModel load_model(const std::string& path,
                             std::optional<double> eps = {}) {
  json j = load_json(path);
  detail::check_kind(detail::get_kind(j, path), "bmc", path);
  const Tolerance tol = detail::effective_tol(j, eps);
  const int s = detail::get_int(j, "s", path);
  const int n = detail::get_int(j, "n", path);
  if (s < 1 || n < 1) throw ShapeError("model s and n must be positive: " + path);
  if (!j.contains("lambda") || !j["lambda"].is_array() ||
      static_cast<int>(j["lambda"].size()) != s) {
    throw ParseError("model missing s x s \"lambda\" array: " + path);
  }
  if (!j.contains("blocks") || !j["blocks"].is_array() ||
      static_cast<int>(j["blocks"].size()) != s) {
    throw ParseError("model missing s x s \"blocks\" array: " + path);
  }
  std::vector<double> lambda;
  lambda.reserve(static_cast<std::size_t>(s) * s);
  for (const auto& row : j["lambda"]) {
    if (!row.is_array() || static_cast<int>(row.size()) != s) {
      throw ParseError("model lambda rows must have length s: " + path);
    }
    for (const auto& v : row) {
      if (!v.is_number()) throw ParseError("non-numeric lambda entry: " + path);
      lambda.push_back(v.get<double>());
    }
  }
  std::vector<StochasticMatrix> blocks;
  blocks.reserve(static_cast<std::size_t>(s) * s);
  for (const auto& row : j["blocks"]) {
    if (!row.is_array() || static_cast<int>(row.size()) != s) {
      throw ParseError("model block rows must have length s: " + path);
    }
    for (const auto& cell : row) {
      if (!cell.is_array() ||
          cell.size() != static_cast<std::size_t>(n) * n) {
        throw ShapeError("model block must hold n^2 values: " + path);
      }
      std::vector<double> vals;
      vals.reserve(cell.size());
      for (const auto& v : cell) {
        if (!v.is_number()) throw ParseError("non-numeric block entry: " + path);
        vals.push_back(v.get<double>());
      }
      blocks.emplace_back(Matrix(n, n, std::move(vals)), tol);
    }
  }
  return BlockModel(s, std::move(blocks), std::move(lambda), tol);
}

inline json doc(const StackedState& x) {
  json j;
  j["kind"] = "state";
  j["s"] = x.s();
  j["n"] = x.n();
  j["parts"] = json::array();
  for (const auto& part : x.parts) j["parts"].push_back(part.values());
  return j;
}

inline StackedState load_state(const std::string& path,
                               std::optional<double> eps = {}) {
  json j = load_json(path);
  detail::check_kind(detail::get_kind(j, path), "state", path);
  const Tolerance tol = detail::effective_tol(j, eps);
  const int s = detail::get_int(j, "s", path);
  const int n = detail::get_int(j, "n", path);
  if (s < 1 || n < 1) throw ShapeError("state s and n must be positive: " + path);
  if (!j.contains("parts") || !j["parts"].is_array() ||
      static_cast<int>(j["parts"].size()) != s) {
    throw ParseError("state missing \"parts\" array of length s: " + path);
  }
  StackedState out;
  out.parts.reserve(s);
  for (const auto& part : j["parts"]) {
    if (!part.is_array() || static_cast<int>(part.size()) != n) {
      throw ShapeError("state parts must hold n values: " + path);
    }
    std::vector<double> vals;
    vals.reserve(n);
    for (const auto& v : part) {
      if (!v.is_number()) throw ParseError("non-numeric state entry: " + path);
      vals.push_back(v.get<double>());
    }
    out.parts.emplace_back(std::move(vals), tol);
  }
  return out;
}

inline json doc(const SimplexVector& x) {
  json j;
  j["kind"] = "simplex";
  j["n"] = x.n();
  j["values"] = x.values();
  return j;
}

inline SimplexVector load_simplex(const std::string& path,
                                  std::optional<double> eps = {}) {
  json j = load_json(path);
  detail::check_kind(detail::get_kind(j, path), "simplex", path);
  const Tolerance tol = detail::effective_tol(j, eps);
  const int n = detail::get_int(j, "n", path);
  auto values = detail::get_values(j, path);
  if (static_cast<int>(values.size()) != n) {
    throw ShapeError("simplex values length does not match n: " + path);
  }
  return SimplexVector(std::move(values), tol);
}

}  // namespace io
}  // namespace stochcube
