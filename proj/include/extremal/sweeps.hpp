#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "extremal/error.hpp"
#include "extremal/format.hpp"
#include "extremal/operator.hpp"
#include "extremal/problem.hpp"
#include "extremal/solver.hpp"

namespace extremal {

template <FieldScalar Scalar>
struct CurveSample {
  double param = 0.0;
  double y_norm = 0.0;
  double r = 0.0;
  double residual = 0.0;
  std::optional<Vector<Scalar>> y;
};

/// Samples of a one-parameter family of extremal problems, in increasing
/// parameter order.
template <FieldScalar Scalar>
struct Curve {
  std::string parameter_name;
  std::vector<CurveSample<Scalar>> samples;
};

struct ProbeRow {
  double step = 0.0;
  double measurement = 0.0;
};

/// Evidence table for a regularity probe. `rows` are ordered by decreasing
/// step; `verdict_data` holds the derived ratios described by each probe.
struct ProbeReport {
  std::string probe_kind;
  std::vector<ProbeRow> rows;
  /// Secondary measurement column (continuity probe: |Δ‖y‖|).
  std::vector<ProbeRow> norm_rows;
  std::vector<double> verdict_data;
};

namespace detail {

inline std::string grid_point(const char* name, double value) {
  return std::string(name) + "=" + format_number(value);
}

inline void require_increasing(std::span<const double> grid, const char* name) {
  if (grid.empty()) {
    throw Error(ErrorCode::invalid_argument, std::string(name) + " grid is empty");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) {
      throw Error(ErrorCode::non_finite, std::string(name) + " grid has a non-finite point");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw Error(ErrorCode::invalid_argument,
                  std::string(name) + " grid is not strictly increasing at " +
                      grid_point(name, grid[i]));
    }
  }
}

inline void require_decreasing_positive(std::span<const double> steps,
                                        const char* name) {
  if (steps.empty()) {
    throw Error(ErrorCode::invalid_argument, std::string(name) + " sequence is empty");
  }
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(steps[i] > 0.0) || !std::isfinite(steps[i])) {
      throw Error(ErrorCode::invalid_argument,
                  std::string(name) + " must be positive, got " +
                      grid_point(name, steps[i]));
    }
    if (i > 0 && !(steps[i] < steps[i - 1])) {
      throw Error(ErrorCode::invalid_argument,
                  std::string(name) + " sequence is not strictly decreasing at " +
                      grid_point(name, steps[i]));
    }
  }
}

template <FieldScalar Scalar>
CurveSample<Scalar> sample_from(double param, ExtremalResult<Scalar>&& result) {
  CurveSample<Scalar> s;
  s.param = param;
  s.y_norm = result.y.norm();
  s.r = result.r;
  s.residual = result.residual_norm;
  s.y = std::move(result.y);
  return s;
}

}  // namespace detail

/// ε ↦ y_{x0,ε} over an increasing grid inside (0, ‖x0‖).
template <FieldScalar Scalar>
Curve<Scalar> sweep_epsilon(const Operator<Scalar>& op, const VectorArg<Scalar>& x0,
                            std::span<const double> eps_grid,
                            const SolverConfig& config = {}) {
  detail::require_increasing(eps_grid, "epsilon");
  const double x0_norm = x0.norm();
  for (double eps : eps_grid) {
    if (!(eps > 0.0 && eps < x0_norm)) {
      throw Error(ErrorCode::epsilon_out_of_range,
                  detail::grid_point("epsilon", eps) + " outside (0, ||x0||=" +
                      format_number(x0_norm) + ")");
    }
  }
  Curve<Scalar> curve{"epsilon", {}};
  curve.samples.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    curve.samples.push_back(
        detail::sample_from(eps, solve_extremal(Problem<Scalar>(op, x0, eps), config)));
  }
  return curve;
}

/// t ↦ y_{t·x0,ε} for t > ε/‖x0‖.
template <FieldScalar Scalar>
Curve<Scalar> sweep_ray(const Operator<Scalar>& op, const VectorArg<Scalar>& x0,
                        double epsilon, std::span<const double> t_grid,
                        const SolverConfig& config = {}) {
  detail::require_increasing(t_grid, "t");
  const double t_min = epsilon / x0.norm();
  for (double t : t_grid) {
    if (!(t > t_min)) {
      throw Error(ErrorCode::epsilon_out_of_range,
                  detail::grid_point("t", t) + " must exceed epsilon/||x0||=" +
                      format_number(t_min));
    }
  }
  Curve<Scalar> curve{"t", {}};
  curve.samples.reserve(t_grid.size());
  for (double t : t_grid) {
    Vector<Scalar> center = Scalar(t) * x0;
    curve.samples.push_back(detail::sample_from(
        t, solve_extremal(Problem<Scalar>(op, std::move(center), epsilon), config)));
  }
  return curve;
}

/// t ↦ y_{x0+t·u,ε}. No monotonicity is implied along arbitrary directions.
template <FieldScalar Scalar>
Curve<Scalar> sweep_direction(const Operator<Scalar>& op, const VectorArg<Scalar>& x0,
                              const VectorArg<Scalar>& u, double epsilon,
                              std::span<const double> t_grid,
                              const SolverConfig& config = {}) {
  if (u.size() != x0.size()) {
    throw Error(ErrorCode::dimension_mismatch, "direction and x0 differ in dimension");
  }
  detail::require_increasing(t_grid, "t");
  for (double t : t_grid) {
    if (!((x0 + Scalar(t) * u).norm() > epsilon)) {
      throw Error(ErrorCode::epsilon_out_of_range,
                  "center x0+t*u lies inside B(0,epsilon] at " +
                      detail::grid_point("t", t));
    }
  }
  Curve<Scalar> curve{"t", {}};
  curve.samples.reserve(t_grid.size());
  for (double t : t_grid) {
    Vector<Scalar> center = x0 + Scalar(t) * u;
    curve.samples.push_back(detail::sample_from(
        t, solve_extremal(Problem<Scalar>(op, std::move(center), epsilon), config)));
  }
  return curve;
}

/// Measures ‖y_{x0+δu,ε} − y_{x0,ε}‖ (rows) and |‖y_{x0+δu,ε}‖ − ‖y_{x0,ε}‖|
/// (norm_rows) along decreasing δ. The direction is normalized first.
/// verdict_data[i] = rows[i].measurement / rows[0].measurement.
template <FieldScalar Scalar>
ProbeReport continuity_probe(const Operator<Scalar>& op, const VectorArg<Scalar>& x0,
                             const VectorArg<Scalar>& u, double epsilon,
                             std::span<const double> deltas,
                             const SolverConfig& config = {}) {
  if (u.size() != x0.size()) {
    throw Error(ErrorCode::dimension_mismatch, "direction and x0 differ in dimension");
  }
  const double u_norm = u.norm();
  if (!(u_norm > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "direction u is the zero vector");
  }
  detail::require_decreasing_positive(deltas, "delta");
  const Vector<Scalar> unit = u / Scalar(u_norm);
  if (!(x0.norm() > epsilon)) {
    throw Error(ErrorCode::epsilon_out_of_range, "x0 lies inside B(0,epsilon]");
  }
  for (double d : deltas) {
    if (!((x0 + Scalar(d) * unit).norm() > epsilon)) {
      throw Error(ErrorCode::epsilon_out_of_range,
                  "perturbed center lies inside B(0,epsilon] at " +
                      detail::grid_point("delta", d));
    }
  }

  const auto base = solve_extremal(Problem<Scalar>(op, x0, epsilon), config);
  const double base_norm = base.y.norm();
  ProbeReport report;
  report.probe_kind = "continuity";
  for (double d : deltas) {
    const auto moved =
        solve_extremal(Problem<Scalar>(op, x0 + Scalar(d) * unit, epsilon), config);
    report.rows.push_back({d, (moved.y - base.y).norm()});
    report.norm_rows.push_back({d, std::abs(moved.y.norm() - base_norm)});
  }
  for (const auto& row : report.rows) {
    report.verdict_data.push_back(row.measurement / report.rows.front().measurement);
  }
  return report;
}

/// Central differences D_h = (‖y_{ε+h}‖ − ‖y_{ε−h}‖) / 2h over decreasing h.
/// verdict_data holds one Richardson ratio (D_a − D_b)/(D_b − D_c) per
/// consecutive row triple; it tends to 4 under step halving for a smooth map.
template <FieldScalar Scalar>
ProbeReport smoothness_probe(const Operator<Scalar>& op, const VectorArg<Scalar>& x0,
                             double epsilon, std::span<const double> h_sequence,
                             const SolverConfig& config = {}) {
  detail::require_decreasing_positive(h_sequence, "h");
  const double x0_norm = x0.norm();
  const double h_max = h_sequence.front();
  if (!(epsilon - h_max > 0.0 && epsilon + h_max < x0_norm)) {
    throw Error(ErrorCode::epsilon_out_of_range,
                "epsilon +/- " + detail::grid_point("h", h_max) +
                    " leaves (0, ||x0||=" + format_number(x0_norm) + ")");
  }
  auto norm_at = [&](double eps) {
    return solve_extremal(Problem<Scalar>(op, x0, eps), config).y.norm();
  };
  ProbeReport report;
  report.probe_kind = "smoothness";
  for (double h : h_sequence) {
    report.rows.push_back({h, (norm_at(epsilon + h) - norm_at(epsilon - h)) / (2.0 * h)});
  }
  for (std::size_t i = 0; i + 2 < report.rows.size(); ++i) {
    const double a = report.rows[i].measurement;
    const double b = report.rows[i + 1].measurement;
    const double c = report.rows[i + 2].measurement;
    report.verdict_data.push_back((a - b) / (b - c));
  }
  return report;
}

template <FieldScalar Scalar>
std::string to_csv(const Curve<Scalar>& curve) {
  std::string out = "param,y_norm,r,residual\n";
  for (const auto& s : curve.samples) {
    out += format_number(s.param) + ',' + format_number(s.y_norm) + ',' +
           format_number(s.r) + ',' + format_number(s.residual) + '\n';
  }
  return out;
}

inline std::string to_csv(const ProbeReport& report) {
  std::string out = "step,measurement\n";
  for (const auto& row : report.rows) {
    out += format_number(row.step) + ',' + format_number(row.measurement) + '\n';
  }
  return out;
}

}  // namespace extremal
