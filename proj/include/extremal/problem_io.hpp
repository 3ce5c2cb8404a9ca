#pragma once

#include <nlohmann/json.hpp>

#include <complex>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>

#include "extremal/error.hpp"
#include "extremal/format.hpp"
#include "extremal/operator.hpp"
#include "extremal/problem.hpp"

namespace extremal {

using RealProblem = Problem<double>;
using ComplexProblem = Problem<std::complex<double>>;
using AnyProblem = std::variant<RealProblem, ComplexProblem>;

namespace detail {

using json = nlohmann::json;

inline double parse_real(const json& node, const std::string& where) {
  if (!node.is_number()) {
    throw Error(ErrorCode::parse_error, where + " is not a number");
  }
  return node.get<double>();
}

template <FieldScalar Scalar>
Scalar parse_scalar(const json& node, const std::string& where) {
  if constexpr (is_complex_v<Scalar>) {
    if (node.is_number()) return {node.get<double>(), 0.0};
    if (!node.is_array() || node.size() != 2) {
      throw Error(ErrorCode::parse_error,
                  where + " must be a number or a [re,im] pair");
    }
    return {parse_real(node[0], where + "[0]"), parse_real(node[1], where + "[1]")};
  } else {
    return parse_real(node, where);
  }
}

inline const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    throw Error(ErrorCode::parse_error, std::string("missing field '") + key + "'");
  }
  return *it;
}

template <FieldScalar Scalar>
Problem<Scalar> parse_problem(const json& doc) {
  const json& rows = require(doc, "matrix");
  if (!rows.is_array() || rows.empty()) {
    throw Error(ErrorCode::parse_error, "matrix must be a non-empty array of rows");
  }
  const json& first = rows.front();
  if (!first.is_array() || first.empty()) {
    throw Error(ErrorCode::parse_error, "matrix[0] must be a non-empty array");
  }
  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto n = static_cast<Eigen::Index>(first.size());
  Matrix<Scalar> a(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    const std::string where = "matrix[" + std::to_string(i) + "]";
    if (!row.is_array()) throw Error(ErrorCode::parse_error, where + " is not an array");
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw Error(ErrorCode::dimension_mismatch,
                  where + " has " + std::to_string(row.size()) +
                      " entries, expected " + std::to_string(n));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = parse_scalar<Scalar>(row[static_cast<std::size_t>(j)],
                                     where + "[" + std::to_string(j) + "]");
    }
  }

  const json& x0_node = require(doc, "x0");
  if (!x0_node.is_array()) throw Error(ErrorCode::parse_error, "x0 is not an array");
  Vector<Scalar> x0(static_cast<Eigen::Index>(x0_node.size()));
  for (std::size_t i = 0; i < x0_node.size(); ++i) {
    x0(static_cast<Eigen::Index>(i)) =
        parse_scalar<Scalar>(x0_node[i], "x0[" + std::to_string(i) + "]");
  }

  const double epsilon = parse_real(require(doc, "epsilon"), "epsilon");
  return Problem<Scalar>(Operator<Scalar>(std::move(a)), std::move(x0), epsilon);
}

template <FieldScalar Scalar>
void write_vector_body(std::ostream& out, const Vector<Scalar>& v) {
  out << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out << ',';
    out << format_number(v(i));
  }
  out << ']';
}

}  // namespace detail

/// Parses and validates a problem document.
///
/// The document is a JSON object with `matrix` (array of rows), `x0`,
/// `epsilon` and an optional `field` ("real" or "complex"). Complex entries
/// are written as [re, im] pairs. Every Problem invariant is checked.
inline AnyProblem load_problem(std::string_view text) {
  detail::json doc;
  try {
    doc = detail::json::parse(text);
  } catch (const detail::json::parse_error& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::parse_error, "problem document must be an object");
  }
  std::string field = "real";
  if (auto it = doc.find("field"); it != doc.end()) {
    if (!it->is_string()) throw Error(ErrorCode::parse_error, "field must be a string");
    field = it->get<std::string>();
  }
  if (field == "real") return detail::parse_problem<double>(doc);
  if (field == "complex") return detail::parse_problem<std::complex<double>>(doc);
  throw Error(ErrorCode::parse_error,
              "field must be \"real\" or \"complex\", got \"" + field + "\"");
}

inline AnyProblem load_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::parse_error, "cannot open problem file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_problem(buffer.str());
}

/// Writes a problem document without validating it. Used for fixtures and
/// for documents that are meant to be rejected.
template <FieldScalar Scalar>
std::string write_problem_document(const Matrix<Scalar>& matrix,
                                   const Vector<Scalar>& x0, double epsilon) {
  std::ostringstream out;
  out << "{\"field\":\"" << (is_complex_v<Scalar> ? "complex" : "real")
      << "\",\"matrix\":[";
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    if (i) out << ',';
    detail::write_vector_body<Scalar>(out, matrix.row(i).transpose());
  }
  out << "],\"x0\":";
  detail::write_vector_body<Scalar>(out, x0);
  out << ",\"epsilon\":" << format_number(epsilon) << "}\n";
  return out.str();
}

template <FieldScalar Scalar>
std::string write_problem(const Problem<Scalar>& problem) {
  return write_problem_document<Scalar>(problem.op().matrix(), problem.x0(),
                                        problem.epsilon());
}

}  // namespace extremal
