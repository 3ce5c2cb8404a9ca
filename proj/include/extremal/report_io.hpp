#pragma once

#include <string>

#include "extremal/format.hpp"
#include "extremal/operator.hpp"
#include "extremal/oracle.hpp"
#include "extremal/solver.hpp"

namespace extremal {

// Structured-text (JSON) records for solver output. Numbers go through
// format_number so that identical inputs give byte-identical documents.

template <FieldScalar Scalar>
std::string vector_json(const Vector<Scalar>& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_number(v(i));
  }
  return out + "]";
}

inline std::string kkt_json(const KktReport& k) {
  return std::string("{\"multiplier\":") + format_number(k.multiplier) +
         ",\"collinearity_residual\":" + format_number(k.collinearity_residual) +
         ",\"multiplier_sign_ok\":" + (k.multiplier_sign_ok ? "true" : "false") +
         ",\"boundary_gap\":" + format_number(k.boundary_gap) +
         ",\"cap_slack\":" + format_number(k.cap_slack) +
         ",\"obtuse_pairing\":" + format_number(k.obtuse_pairing) +
         ",\"imag_leak\":" + format_number(k.imag_leak) + "}";
}

template <FieldScalar Scalar>
std::string result_json(const ExtremalResult<Scalar>& r) {
  return std::string("{\"field\":\"") + (is_complex_v<Scalar> ? "complex" : "real") +
         "\",\"y\":" + vector_json(r.y) + ",\"r\":" + format_number(r.r) +
         ",\"residual_norm\":" + format_number(r.residual_norm) +
         ",\"iterations\":" + std::to_string(r.iterations) + ",\"kkt\":" + kkt_json(r.kkt) +
         "}\n";
}

inline std::string comparison_json(const ComparisonReport& c, double oracle_y_norm,
                                   long long samples_used) {
  std::string out = "{\"method\":\"" + c.method + "\",\"oracle_y_norm\":" +
                    format_number(oracle_y_norm) +
                    ",\"samples_used\":" + std::to_string(samples_used) +
                    ",\"norm_gap\":" + format_number(c.norm_gap) +
                    ",\"signed_gap\":" + format_number(c.signed_gap) + ",\"point_gap\":" +
                    (c.point_gap ? format_number(*c.point_gap) : std::string("null")) +
                    ",\"one_sided\":" + (c.one_sided ? "true" : "false") +
                    ",\"tol\":" + format_number(c.tol) +
                    ",\"pass\":" + (c.pass ? "true" : "false") + "}";
  return out;
}

}  // namespace extremal
