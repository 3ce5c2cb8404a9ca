#pragma once

#include <fmt/format.h>

#include <complex>
#include <string>

namespace extremal {

/// Locale-independent scientific notation with 17 significant digits, the
/// single number format used by every document the library writes.
inline std::string format_number(double value) {
  return fmt::format("{:.16e}", value);
}

inline std::string format_number(std::complex<double> value) {
  return "[" + format_number(value.real()) + "," + format_number(value.imag()) +
         "]";
}

}  // namespace extremal
