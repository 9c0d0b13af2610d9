#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cjsr/blocks.hpp"
#include "cjsr/error.hpp"
#include "cjsr/spectral.hpp"

namespace cjsr {

/// Parsed JSON problem file:
///
///   {
///     "alphabet_size": 3,
///     "block_length": 10,
///     "lower": ["0.13", "0.23", "0.34"],
///     "upper": ["0.33", "0.43", "0.54"],
///     "target": ["0.23", "0.33", "0.44"],      (optional)
///     "matrices": [[[1, 1], [0, 1]], ...],      (optional, r row-major d x d)
///     "omega": [[0, 1], [1, 0]]                 (optional, r x r 0/1)
///   }
///
/// Frequencies are decimal strings so that they parse to exact rationals.
struct ProblemFile {
  FrequencyConstraint constraint;
  std::optional<MatrixSet> matrices;
  std::optional<std::vector<std::vector<int>>> omega;
};

namespace detail {

using nlohmann::json;

inline Error field_error(const std::string& field, const std::string& why) {
  return Error(ErrorCode::ParseError, "field '" + field + "': " + why);
}

inline const json& require(const json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end()) throw field_error(field, "missing");
  return *it;
}

inline int read_positive_int(const json& doc, const char* field) {
  const json& v = require(doc, field);
  if (!v.is_number_integer() || v.get<long long>() < 1) throw field_error(field, "must be a positive integer");
  return v.get<int>();
}

inline std::vector<Rational> read_rationals(const json& v, const std::string& field, int r) {
  if (!v.is_array() || static_cast<int>(v.size()) != r)
    throw field_error(field, "must be an array of " + std::to_string(r) + " decimal strings");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string where = field + "[" + std::to_string(i) + "]";
    if (!v[i].is_string()) throw field_error(where, "must be a decimal string such as \"0.25\"");
    try {
      out.push_back(Rational::parse(v[i].get<std::string>()));
    } catch (const Error& e) {
      throw field_error(where, e.what());
    }
  }
  return out;
}

inline MatrixSet read_matrices(const json& v, int r) {
  if (!v.is_array() || static_cast<int>(v.size()) != r)
    throw field_error("matrices", "must be an array of " + std::to_string(r) + " matrices");
  std::vector<Matrix> out;
  long d = -1;
  for (std::size_t m = 0; m < v.size(); ++m) {
    const std::string where = "matrices[" + std::to_string(m) + "]";
    const json& rows = v[m];
    if (!rows.is_array() || rows.empty()) throw field_error(where, "must be a non-empty array of rows");
    if (d < 0) d = static_cast<long>(rows.size());
    if (static_cast<long>(rows.size()) != d) throw field_error(where, "dimension differs from matrices[0]");
    Matrix mat(d, d);
    for (long i = 0; i < d; ++i) {
      const json& row = rows[i];
      if (!row.is_array() || static_cast<long>(row.size()) != d)
        throw field_error(where + "[" + std::to_string(i) + "]", "must have " + std::to_string(d) + " entries");
      for (long j = 0; j < d; ++j) {
        if (!row[j].is_number())
          throw field_error(where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]", "must be a number");
        mat(i, j) = row[j].get<double>();
      }
    }
    out.push_back(std::move(mat));
  }
  return MatrixSet(std::move(out));
}

inline std::vector<std::vector<int>> read_omega(const json& v, int r) {
  if (!v.is_array() || static_cast<int>(v.size()) != r)
    throw field_error("omega", "must be an r x r array of 0/1");
  std::vector<std::vector<int>> out;
  for (const auto& row : v) {
    if (!row.is_array() || static_cast<int>(row.size()) != r)
      throw field_error("omega", "must be an r x r array of 0/1");
    std::vector<int> vals;
    for (const auto& x : row) {
      if (!x.is_number_integer() || (x.get<int>() != 0 && x.get<int>() != 1))
        throw field_error("omega", "entries must be 0 or 1");
      vals.push_back(x.get<int>());
    }
    out.push_back(std::move(vals));
  }
  return out;
}

inline int line_of(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace detail

inline ProblemFile parse_problem(const std::string& text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(detail::line_of(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "problem file must be a JSON object");

  const int r = detail::read_positive_int(doc, "alphabet_size");
  const int ell = detail::read_positive_int(doc, "block_length");
  auto lower = detail::read_rationals(detail::require(doc, "lower"), "lower", r);
  auto upper = detail::read_rationals(detail::require(doc, "upper"), "upper", r);
  std::optional<std::vector<Rational>> target;
  if (auto it = doc.find("target"); it != doc.end() && !it->is_null())
    target = detail::read_rationals(*it, "target", r);

  std::optional<FrequencyConstraint> c;
  try {
    c.emplace(r, ell, std::move(lower), std::move(upper), std::move(target));
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }

  ProblemFile pf{std::move(*c), std::nullopt, std::nullopt};
  if (auto it = doc.find("matrices"); it != doc.end() && !it->is_null()) {
    try {
      pf.matrices = detail::read_matrices(*it, r);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError) throw;
      throw detail::field_error("matrices", e.what());
    }
  }
  if (auto it = doc.find("omega"); it != doc.end() && !it->is_null()) pf.omega = detail::read_omega(*it, r);
  return pf;
}

inline ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

}  // namespace cjsr
