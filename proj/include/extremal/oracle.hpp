#pragma once

// Brute-force certificates for solve_extremal on small instances. None of
// these share the solver's root-finding path or its Cholesky kernel.

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "extremal/error.hpp"
#include "extremal/operator.hpp"
#include "extremal/solver.hpp"

namespace extremal {

template <FieldScalar Scalar>
struct OracleResult {
  Vector<Scalar> y;
  double y_norm = 0.0;
  std::string method;
  std::int64_t samples_used = 0;
  /// Sampling oracles only bound the minimum from above; they do not locate
  /// the minimizer.
  bool upper_bound_only = false;
};

struct ComparisonReport {
  std::string method;
  double norm_gap = 0.0;    // |‖y_a‖ − ‖y_b‖|
  double signed_gap = 0.0;  // ‖y_a‖ − ‖y_b‖
  std::optional<double> point_gap;
  bool one_sided = false;
  double tol = 0.0;
  bool pass = false;
};

namespace detail {

/// φ(λ) and y(λ) from the stacked least-squares system [T; √λ I] y ≈ [x0; 0].
template <FieldScalar Scalar>
std::pair<Vector<Scalar>, double> stacked_residual(const Operator<Scalar>& op,
                                                   const VectorArg<Scalar>& x0,
                                                   double lambda) {
  const Eigen::Index m = op.rows();
  const Eigen::Index n = op.cols();
  Matrix<Scalar> stacked(m + n, n);
  stacked.topRows(m) = op.matrix();
  stacked.bottomRows(n) = Matrix<Scalar>::Identity(n, n) * Scalar(std::sqrt(lambda));
  Vector<Scalar> rhs = Vector<Scalar>::Zero(m + n);
  rhs.head(m) = x0;
  Vector<Scalar> y = stacked.householderQr().solve(rhs);
  const double phi = (op.matrix() * y - x0).norm();
  return {std::move(y), phi};
}

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Scans φ on a log grid of `decades` decades centred on
/// λ0 = ε‖T‖²/(‖x0‖ − ε), brackets ε between neighbours and bisects.
template <FieldScalar Scalar>
OracleResult<Scalar> lambda_grid_oracle(const Operator<Scalar>& op,
                                        const VectorArg<Scalar>& x0, double epsilon,
                                        int decades = 12) {
  if (decades < 1) {
    throw Error(ErrorCode::invalid_argument, "decades must be at least 1");
  }
  const double x0_norm = x0.norm();
  if (!(epsilon > 0.0 && epsilon < x0_norm)) {
    throw Error(ErrorCode::epsilon_out_of_range, "epsilon outside (0, ||x0||)");
  }
  constexpr int kPointsPerDecade = 4;
  const double center = epsilon * op.norm() * op.norm() / (x0_norm - epsilon);
  const int count = decades * kPointsPerDecade + 1;
  const double first_exp = std::log10(center) - 0.5 * decades;

  std::int64_t evaluations = 0;
  auto phi_at = [&](double lam) {
    ++evaluations;
    return detail::stacked_residual(op, x0, lam);
  };

  double lo = 0.0;
  double hi = 0.0;
  bool bracketed = false;
  double prev_lam = 0.0;
  double prev_phi = 0.0;
  for (int k = 0; k < count; ++k) {
    const double lam = std::pow(10.0, first_exp + static_cast<double>(k) / kPointsPerDecade);
    const double phi = phi_at(lam).second;
    if (phi >= epsilon) {
      if (k > 0 && prev_phi < epsilon) {
        lo = prev_lam;
        hi = lam;
        bracketed = true;
      }
      break;
    }
    prev_lam = lam;
    prev_phi = phi;
  }
  if (!bracketed) {
    throw Error(ErrorCode::bracket_not_found,
                "phi(lambda) does not cross epsilon within " +
                    std::to_string(decades) + " decades");
  }

  const double tol = 1e-12 * std::max(epsilon, 1.0);
  auto best = phi_at(hi);
  double best_lambda = hi;
  for (int it = 0; it < 400; ++it) {
    if (std::abs(best.second - epsilon) <= tol) {
      OracleResult<Scalar> out;
      out.y_norm = best.first.norm();
      out.y = std::move(best.first);
      out.method = "lambda_grid";
      out.samples_used = evaluations;
      return out;
    }
    const double mid = hi / lo > 2.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    auto point = phi_at(mid);
    if (point.second < epsilon) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (std::abs(point.second - epsilon) < std::abs(best.second - epsilon)) {
      best = std::move(point);
      best_lambda = mid;
    }
  }
  throw Error(ErrorCode::max_iterations_exceeded,
              "bisection stalled at lambda=" + std::to_string(best_lambda) +
                  " with |phi-epsilon|=" + std::to_string(std::abs(best.second - epsilon)));
}

/// Real invertible 2x2 only: Ty runs over the circle x0 + ε(cos θ, sin θ), so
/// ‖y(θ)‖ = ‖T⁻¹(x0 + ε w(θ))‖ is minimized over an angle grid and the best
/// cell is refined by golden-section search.
template <FieldScalar Scalar>
OracleResult<Scalar> angle_grid_oracle_2d(const Operator<Scalar>& op,
                                          const VectorArg<Scalar>& x0, double epsilon,
                                          int n_angles = 3600) {
  if constexpr (is_complex_v<Scalar>) {
    throw Error(ErrorCode::invalid_argument, "angle oracle requires a real operator");
  } else {
    if (op.rows() != 2 || op.cols() != 2 || x0.size() != 2) {
      throw Error(ErrorCode::dimension_mismatch, "angle oracle requires a 2x2 operator");
    }
    if (n_angles < 360) {
      throw Error(ErrorCode::invalid_argument, "n_angles must be at least 360");
    }
    const Eigen::Matrix2d t = op.matrix();
    const double det = t.determinant();
    if (!(std::abs(det) > 4.0 * std::numeric_limits<double>::epsilon() * t.squaredNorm())) {
      throw Error(ErrorCode::singular_operator, "operator is singular");
    }
    const Eigen::Matrix2d t_inv = t.inverse();
    const Eigen::Vector2d center = x0;
    std::int64_t evaluations = 0;
    auto y_at = [&](double theta) -> Eigen::Vector2d {
      ++evaluations;
      return t_inv * (center + epsilon * Eigen::Vector2d(std::cos(theta), std::sin(theta)));
    };
    auto f = [&](double theta) { return y_at(theta).squaredNorm(); };

    const double step = 2.0 * std::numbers::pi / n_angles;
    int best_k = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_angles; ++k) {
      const double value = f(step * k);
      if (value < best_value) {
        best_value = value;
        best_k = k;
      }
    }

    constexpr double kInvPhi = 0.6180339887498949;
    double a = step * (best_k - 1);
    double b = step * (best_k + 1);
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 200 && (b - a) > 1e-15; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kInvPhi * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kInvPhi * (b - a);
        fd = f(d);
      }
    }
    double theta = 0.5 * (a + b);
    if (best_value < f(theta)) theta = step * best_k;

    OracleResult<Scalar> out;
    out.y = y_at(theta);
    out.y_norm = out.y.norm();
    out.method = "angle_grid_2d";
    out.samples_used = evaluations;
    return out;
  }
}

/// Monte-Carlo over the boundary sphere: y = T⁻¹(x0 + ε w) for uniformly
/// distributed unit w (normalized Gaussian draws). The smallest sampled norm
/// bounds the true minimum from above.
///
/// Samples are generated in fixed blocks, each from its own sub-seed, and the
/// minimum is taken with ties broken by sample index, so the result depends
/// only on (seed, n_samples) and not on `workers`.
template <FieldScalar Scalar>
OracleResult<Scalar> boundary_sample_oracle(const Operator<Scalar>& op,
                                            const VectorArg<Scalar>& x0, double epsilon,
                                            std::int64_t n_samples, std::uint64_t seed,
                                            int workers = 1) {
  if (!op.is_invertible()) {
    throw Error(ErrorCode::singular_operator, "sampling oracle requires an invertible operator");
  }
  if (op.rows() > 4) {
    throw Error(ErrorCode::dimension_mismatch, "sampling oracle supports dimension <= 4");
  }
  if (x0.size() != op.rows()) {
    throw Error(ErrorCode::dimension_mismatch, "x0 does not match the operator");
  }
  if (n_samples < 100000) {
    throw Error(ErrorCode::invalid_argument, "n_samples must be at least 1e5");
  }
  if (workers < 1) workers = 1;

  const Eigen::Index n = op.rows();
  const Matrix<Scalar> t_inv = op.matrix().partialPivLu().inverse();
  const Vector<Scalar> base = t_inv * x0;
  const Matrix<Scalar> scaled_inv = Scalar(epsilon) * t_inv;

  constexpr std::int64_t kBlock = 4096;
  const std::int64_t n_blocks = (n_samples + kBlock - 1) / kBlock;

  struct Best {
    double norm_sq = std::numeric_limits<double>::infinity();
    std::int64_t index = -1;
    Vector<Scalar> y;
  };
  auto better = [](const Best& a, const Best& b) {
    return a.norm_sq < b.norm_sq || (a.norm_sq == b.norm_sq && a.index < b.index);
  };

  auto run_block = [&](std::int64_t block, Best& best) {
    std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(
                                                      static_cast<std::uint64_t>(block))));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector<Scalar> w(n);
    const std::int64_t begin = block * kBlock;
    const std::int64_t end = std::min(n_samples, begin + kBlock);
    for (std::int64_t i = begin; i < end; ++i) {
      double w_norm = 0.0;
      do {
        for (Eigen::Index j = 0; j < n; ++j) {
          if constexpr (is_complex_v<Scalar>) {
            const double re = gauss(rng);
            w(j) = Scalar(re, gauss(rng));
          } else {
            w(j) = gauss(rng);
          }
        }
        w_norm = w.norm();
      } while (!(w_norm > 0.0));
      Vector<Scalar> y = base + scaled_inv * (w / Scalar(w_norm));
      Best candidate{y.squaredNorm(), i, {}};
      if (better(candidate, best)) {
        candidate.y = std::move(y);
        best = std::move(candidate);
      }
    }
  };

  std::vector<Best> per_worker(static_cast<std::size_t>(workers));
  auto work = [&](int worker) {
    for (std::int64_t block = worker; block < n_blocks; block += workers) {
      run_block(block, per_worker[static_cast<std::size_t>(worker)]);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int wk = 0; wk < workers; ++wk) threads.emplace_back(work, wk);
  }

  Best overall;
  for (auto& b : per_worker) {
    if (better(b, overall)) overall = std::move(b);
  }
  OracleResult<Scalar> out;
  out.y = std::move(overall.y);
  out.y_norm = out.y.norm();
  out.method = "boundary_sample";
  out.samples_used = n_samples;
  out.upper_bound_only = true;
  return out;
}

/// Solver vs. oracle. Point-estimate oracles must match in norm and position
/// within tol; upper-bound oracles only require ‖y_solver‖ ≤ ‖y_oracle‖ + tol.
template <FieldScalar Scalar>
ComparisonReport compare(const ExtremalResult<Scalar>& a, const OracleResult<Scalar>& b,
                         double tol) {
  ComparisonReport report;
  report.method = b.method;
  report.tol = tol;
  const double a_norm = a.y.norm();
  report.signed_gap = a_norm - b.y_norm;
  report.norm_gap = std::abs(report.signed_gap);
  report.one_sided = b.upper_bound_only;
  if (b.upper_bound_only) {
    report.pass = report.signed_gap <= tol;
  } else {
    if (a.y.size() == b.y.size()) report.point_gap = (a.y - b.y).norm();
    report.pass = report.norm_gap <= tol && report.point_gap && *report.point_gap <= tol;
  }
  return report;
}

}  // namespace extremal
