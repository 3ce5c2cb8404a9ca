#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "extremal/error.hpp"
#include "extremal/operator.hpp"
#include "extremal/problem.hpp"

namespace extremal {

struct SolverConfig {
  /// Convergence target: |‖Ty − x0‖ − ε| ≤ tol_residual_rel · max(ε, 1).
  double tol_residual_rel = 1e-10;
  int max_iterations = 200;
  /// Geometric factor used when scanning for a bracket in λ.
  double bracket_growth = 4.0;
  std::optional<double> lambda_init;

  void validate() const {
    if (!(tol_residual_rel > 0.0)) {
      throw Error(ErrorCode::invalid_argument, "tol_residual_rel must be positive");
    }
    if (max_iterations <= 0) {
      throw Error(ErrorCode::invalid_argument, "max_iterations must be positive");
    }
    if (!(bracket_growth > 1.0)) {
      throw Error(ErrorCode::invalid_argument, "bracket_growth must exceed 1");
    }
    if (lambda_init && !(*lambda_init > 0.0 && std::isfinite(*lambda_init))) {
      throw Error(ErrorCode::invalid_argument, "lambda_init must be positive");
    }
  }
};

/// Structural diagnostics of a candidate extremal vector y. Carries numbers
/// only; thresholds are the caller's business.
struct KktReport {
  /// r̂ = [T*(Ty − x0) | y] / ‖y‖².
  double multiplier = 0.0;
  /// ‖T*(Ty − x0) − r̂ y‖ / max(‖T*(Ty − x0)‖, tiny).
  double collinearity_residual = 0.0;
  bool multiplier_sign_ok = false;
  /// |‖Ty − x0‖ − ε|.
  double boundary_gap = 0.0;
  /// (‖x0‖² − ε²) − ‖Ty‖², nonnegative on the cap.
  double cap_slack = 0.0;
  /// [Ty − x0 | Ty], negative at the extremal vector.
  double obtuse_pairing = 0.0;
  /// |Im <y | T*(Ty − x0)>| / ‖y‖², zero for real data.
  double imag_leak = 0.0;
};

template <FieldScalar Scalar>
struct ExtremalResult {
  Vector<Scalar> y;
  /// Multiplier of T*(Ty − x0) = r y; always negative, r = −λ.
  double r = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  KktReport kkt;

  double lambda() const { return -r; }
};

template <FieldScalar Scalar>
KktReport kkt_verify(const Operator<Scalar>& op, const VectorArg<Scalar>& x0,
                     double epsilon, const VectorArg<Scalar>& y) {
  if (y.size() != op.cols()) {
    throw Error(ErrorCode::dimension_mismatch,
                "y has dimension " + std::to_string(y.size()) + ", expected " +
                    std::to_string(op.cols()));
  }
  const double y_sq = y.squaredNorm();
  if (!(y_sq > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "y is the zero vector");
  }
  const Vector<Scalar> ty = op.apply(y);
  const Vector<Scalar> defect = ty - x0;
  const Vector<Scalar> gradient = op.apply_adjoint(defect);

  KktReport report;
  const auto raw = y.dot(gradient);
  report.multiplier = std::real(raw) / y_sq;
  report.imag_leak = std::abs(std::imag(raw)) / y_sq;
  report.multiplier_sign_ok = report.multiplier < 0.0;

  const double grad_norm = gradient.norm();
  const double tiny = std::numeric_limits<double>::min();
  report.collinearity_residual =
      (gradient - report.multiplier * y).norm() / std::max(grad_norm, tiny);
  report.boundary_gap = std::abs(defect.norm() - epsilon);
  report.cap_slack = (x0.squaredNorm() - epsilon * epsilon) - ty.squaredNorm();
  report.obtuse_pairing = real_pairing(defect, ty);
  return report;
}

template <FieldScalar Scalar>
struct SecularPoint {
  Vector<Scalar> y;
  double phi = 0.0;
};

/// y(λ) = (T*T + λI)⁻¹ T*x0 and φ(λ) = ‖T y(λ) − x0‖.
template <FieldScalar Scalar>
SecularPoint<Scalar> residual_at(const Operator<Scalar>& op,
                                 const VectorArg<Scalar>& x0, double lambda) {
  const RegularizedSystem<Scalar> system(op, lambda);
  SecularPoint<Scalar> point;
  point.y = system.solve(op.apply_adjoint(x0));
  point.phi = (op.apply(point.y) - x0).norm();
  return point;
}

/// dφ²/dλ = 2λ [(T*T + λI)⁻¹ y | y], positive for every λ > 0.
template <FieldScalar Scalar>
double secular_derivative(const RegularizedSystem<Scalar>& system,
                          const VectorArg<Scalar>& y) {
  return 2.0 * system.lambda() * real_pairing(system.solve(y), y);
}

namespace detail {

template <FieldScalar Scalar>
struct SecularEval {
  Vector<Scalar> y;
  double phi = 0.0;
  double dh = 0.0;  // d(φ²)/dλ
};

template <FieldScalar Scalar>
SecularEval<Scalar> evaluate_secular(const Operator<Scalar>& op,
                                     const VectorArg<Scalar>& atx0,
                                     const VectorArg<Scalar>& x0, double lambda) {
  const RegularizedSystem<Scalar> system(op, lambda);
  SecularEval<Scalar> e;
  e.y = system.solve(atx0);
  e.phi = (op.apply(e.y) - x0).norm();
  e.dh = secular_derivative(system, e.y);
  return e;
}

}  // namespace detail

/// Computes the minimal-norm y with ‖Ty − x0‖ ≤ ε.
///
/// The minimizer sits on the boundary ‖Ty − x0‖ = ε and satisfies
/// T*(Ty − x0) = r y with r < 0, so y = (T*T + λI)⁻¹ T*x0 with λ = −r the
/// unique root of φ(λ) = ε. φ is strictly increasing from dist(x0, range T)
/// at 0⁺ to ‖x0‖ at +∞. The root is found by Newton on h(λ) = φ(λ)² − ε²
/// inside a maintained bracket, falling back to bisection whenever a step
/// leaves it. Once within tolerance, up to two further Newton steps are kept
/// while they reduce |φ − ε|.
template <FieldScalar Scalar>
ExtremalResult<Scalar> solve_extremal(const Problem<Scalar>& problem,
                                      const SolverConfig& config = {}) {
  config.validate();
  const Operator<Scalar>& op = problem.op();
  const VectorArg<Scalar>& x0 = problem.x0();
  const double eps = problem.epsilon();
  const double x0_norm = problem.x0_norm();
  if (!(problem.range_distance() < eps)) {
    throw Error(ErrorCode::infeasible, "dist(x0, range T) is not below epsilon");
  }

  const double tol = config.tol_residual_rel * std::max(eps, 1.0);
  const Vector<Scalar> atx0 = op.apply_adjoint(x0);
  if (!(atx0.norm() > 0.0)) {
    throw Error(ErrorCode::infeasible, "T*x0 vanishes");
  }

  double lambda = config.lambda_init.value_or(eps * op.norm() * op.norm() /
                                              (x0_norm - eps));
  int iterations = 0;
  auto eval = [&](double lam) {
    ++iterations;
    if (iterations > config.max_iterations) {
      throw Error(ErrorCode::max_iterations_exceeded,
                  "no convergence within " + std::to_string(config.max_iterations) +
                      " evaluations");
    }
    return detail::evaluate_secular(op, atx0, x0, lam);
  };

  // Bracket [lo, hi] with φ(lo) < ε < φ(hi). lo = 0 stands for 0⁺.
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  auto current = eval(lambda);
  const auto within = [&](const detail::SecularEval<Scalar>& e) {
    return std::abs(e.phi - eps) <= tol;
  };
  if (!within(current)) {
    auto probe = current;
    double lam = lambda;
    if (probe.phi > eps) {
      while (probe.phi > eps) {
        hi = lam;
        lam /= config.bracket_growth;
        if (!(lam > std::numeric_limits<double>::min())) {
          throw Error(ErrorCode::max_iterations_exceeded,
                      "lambda underflow while bracketing the root");
        }
        probe = eval(lam);
        if (within(probe)) break;
      }
      if (probe.phi <= eps) lo = lam;
    } else {
      while (probe.phi < eps) {
        lo = lam;
        lam *= config.bracket_growth;
        if (!std::isfinite(lam)) {
          throw Error(ErrorCode::max_iterations_exceeded,
                      "lambda overflow while bracketing the root");
        }
        probe = eval(lam);
        if (within(probe)) break;
      }
      if (probe.phi >= eps) hi = lam;
    }
    lambda = lam;
    current = std::move(probe);
  }

  while (!within(current)) {
    const double h = current.phi * current.phi - eps * eps;
    if (h < 0.0) {
      lo = std::max(lo, lambda);
    } else {
      hi = std::min(hi, lambda);
    }
    double next = lambda - h / current.dh;
    if (!(next > lo && next < hi) || !std::isfinite(next)) {
      next = (lo > 0.0 && hi / lo > 16.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    }
    if (next == lambda || !(hi > lo)) {
      throw Error(ErrorCode::max_iterations_exceeded,
                  "bracket collapsed before reaching the tolerance");
    }
    lambda = next;
    current = eval(lambda);
  }

  for (int polish = 0; polish < 2 && current.phi != eps; ++polish) {
    const double h = current.phi * current.phi - eps * eps;
    const double next = lambda - h / current.dh;
    if (!(next > 0.0) || !std::isfinite(next) || next == lambda) break;
    auto candidate = detail::evaluate_secular(op, atx0, x0, next);
    if (!(std::abs(candidate.phi - eps) < std::abs(current.phi - eps))) break;
    lambda = next;
    current = std::move(candidate);
  }

  ExtremalResult<Scalar> result;
  result.y = std::move(current.y);
  result.r = -lambda;
  result.residual_norm = current.phi;
  result.iterations = iterations;
  result.kkt = kkt_verify(op, x0, eps, result.y);
  return result;
}

}  // namespace extremal
