#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace extremal {

enum class ErrorCode {
  dimension_mismatch,
  invalid_argument,
  non_finite,
  parse_error,
  epsilon_out_of_range,
  infeasible,
  singular_operator,
  max_iterations_exceeded,
  bracket_not_found,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::non_finite: return "non_finite";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::epsilon_out_of_range: return "epsilon_out_of_range";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::singular_operator: return "singular_operator";
    case ErrorCode::max_iterations_exceeded: return "max_iterations_exceeded";
    case ErrorCode::bracket_not_found: return "bracket_not_found";
  }
  return "unknown";
}

/// Every failure in the library is reported through this exception. The
/// message is prefixed with the code name so diagnostics stay greppable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for failures caused by the input rather than by the numerics.
  bool is_validation() const noexcept {
    return code_ != ErrorCode::max_iterations_exceeded &&
           code_ != ErrorCode::bracket_not_found;
  }

 private:
  ErrorCode code_;
};

}  // namespace extremal
