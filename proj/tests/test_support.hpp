#pragma once

#include <Eigen/QR>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "extremal/extremal.hpp"

namespace extremal::testing {

using Rng = std::mt19937_64;

template <FieldScalar Scalar>
Scalar gaussian_scalar(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  if constexpr (is_complex_v<Scalar>) {
    const double re = g(rng);
    return {re, g(rng)};
  } else {
    return g(rng);
  }
}

template <FieldScalar Scalar>
Vector<Scalar> random_vector(Rng& rng, Eigen::Index n) {
  Vector<Scalar> v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = gaussian_scalar<Scalar>(rng);
  return v;
}

template <FieldScalar Scalar>
Matrix<Scalar> random_unitary(Rng& rng, Eigen::Index n) {
  Matrix<Scalar> g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = gaussian_scalar<Scalar>(rng);
  Eigen::HouseholderQR<Matrix<Scalar>> qr(g);
  return qr.householderQ() * Matrix<Scalar>::Identity(n, n);
}

/// U diag(s) V* with singular values log-uniform in [1/cond, 1] and the
/// extremes pinned, so the condition number is exactly `cond`.
template <FieldScalar Scalar>
Matrix<Scalar> random_matrix(Rng& rng, Eigen::Index n, double cond = 100.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i) s(i) = std::pow(cond, -u(rng));
  s(0) = 1.0;
  if (n > 1) s(n - 1) = 1.0 / cond;
  const Matrix<Scalar> left = random_unitary<Scalar>(rng, n);
  const Matrix<Scalar> right = random_unitary<Scalar>(rng, n);
  return left * s.cast<Scalar>().asDiagonal() * right.adjoint();
}

template <FieldScalar Scalar>
struct Instance {
  Matrix<Scalar> matrix;
  Vector<Scalar> x0;
  double epsilon = 0.0;

  Operator<Scalar> op() const { return Operator<Scalar>(matrix); }
  Problem<Scalar> problem() const { return Problem<Scalar>(op(), x0, epsilon); }
};

/// Random square full-rank instance with ε drawn from [lo, hi]·‖x0‖.
template <FieldScalar Scalar>
Instance<Scalar> random_instance(std::uint64_t seed, Eigen::Index n, double cond = 100.0,
                                 double lo = 0.05, double hi = 0.95) {
  Rng rng(seed);
  Instance<Scalar> inst;
  inst.matrix = random_matrix<Scalar>(rng, n, cond);
  inst.x0 = random_vector<Scalar>(rng, n);
  std::uniform_real_distribution<double> frac(lo, hi);
  inst.epsilon = frac(rng) * inst.x0.norm();
  return inst;
}

inline RealMatrix diag12() {
  RealMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, 2.0;
  return m;
}

inline RealVector vec2(double a, double b) {
  RealVector v(2);
  v << a, b;
  return v;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

template <typename A, typename B>
double rel_vec_diff(const A& a, const B& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

// Reference values for T = diag(1, 2), x0 = (1, 1), ε = 0.5, from the
// closed-form secular equation Σ (λ x_i / (d_i² + λ))² = ε² solved at 40
// digits, and confirmed by a direct minimization over the boundary circle.
inline constexpr double kDiagLambda = 0.87502017376078994212;
inline constexpr double kDiagY0 = 0.53332759508089288691;
inline constexpr double kDiagY1 = 0.41025471253734693848;
inline constexpr double kDiagYNorm = 0.67286495883934245334;

}  // namespace extremal::testing
