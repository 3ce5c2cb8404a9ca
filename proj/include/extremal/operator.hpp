#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>

#include "extremal/error.hpp"

namespace extremal {

/// Scalars the library is instantiated for: real or complex double.
template <typename T>
concept FieldScalar =
    std::same_as<T, double> || std::same_as<T, std::complex<double>>;

template <FieldScalar Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <FieldScalar Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Vector parameter whose scalar is deduced from a sibling Operator argument,
/// so Eigen expressions can be passed directly.
template <FieldScalar Scalar>
using VectorArg = std::type_identity_t<Vector<Scalar>>;

using RealVector = Vector<double>;
using RealMatrix = Matrix<double>;
using ComplexVector = Vector<std::complex<double>>;
using ComplexMatrix = Matrix<std::complex<double>>;

template <FieldScalar Scalar>
constexpr bool is_complex_v = std::same_as<Scalar, std::complex<double>>;

/// Real pairing [u|v] = Re<u|v>. Coincides with the dot product on real data.
template <typename DerivedU, typename DerivedV>
double real_pairing(const Eigen::MatrixBase<DerivedU>& u,
                    const Eigen::MatrixBase<DerivedV>& v) {
  return std::real(u.dot(v));
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// A dense m x n linear map together with the quantities every solve needs:
/// its Gram matrix T*T, its singular values and a least-squares factorization
/// used to measure the distance from a vector to the range.
///
/// Instances are immutable once built and may be shared across threads.
template <FieldScalar Scalar>
class Operator {
 public:
  using MatrixType = Matrix<Scalar>;
  using VectorType = Vector<Scalar>;

  explicit Operator(MatrixType matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() == 0 || matrix_.cols() == 0) {
      throw Error(ErrorCode::dimension_mismatch, "operator matrix is empty");
    }
    if (!all_finite(matrix_)) {
      throw Error(ErrorCode::non_finite, "operator matrix has non-finite entries");
    }
    gram_ = matrix_.adjoint() * matrix_;
    svd_.compute(matrix_, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd_.singularValues();
    norm_ = sv(0);
    sigma_min_ = sv(sv.size() - 1);
    rank_tol_ = static_cast<double>(std::max(matrix_.rows(), matrix_.cols())) *
                std::numeric_limits<double>::epsilon() * norm_;
    svd_.setThreshold(static_cast<double>(std::max(matrix_.rows(), matrix_.cols())) *
                      std::numeric_limits<double>::epsilon());
  }

  static Operator identity(Eigen::Index n) {
    return Operator(MatrixType::Identity(n, n));
  }

  Eigen::Index rows() const { return matrix_.rows(); }
  Eigen::Index cols() const { return matrix_.cols(); }
  const MatrixType& matrix() const { return matrix_; }
  const MatrixType& gram() const { return gram_; }

  /// Spectral norm ||T||.
  double norm() const { return norm_; }

  /// Smallest of the min(m, n) singular values of T.
  double sigma_min() const { return sigma_min_; }

  /// Finite-dimensional stand-in for dense range: full row rank.
  bool has_dense_range() const {
    return rows() <= cols() && sigma_min_ > rank_tol_;
  }

  bool is_invertible() const { return rows() == cols() && has_dense_range(); }

  /// min_z ||T z - x0||, from the thin SVD least-squares solution.
  double distance_to_range(const VectorType& x0) const {
    check_dim(x0, rows(), "x0");
    const VectorType z = svd_.solve(x0);
    return (matrix_ * z - x0).norm();
  }

  VectorType apply(const VectorType& v) const {
    check_dim(v, cols(), "v");
    return matrix_ * v;
  }

  VectorType apply_adjoint(const VectorType& v) const {
    check_dim(v, rows(), "v");
    return matrix_.adjoint() * v;
  }

 private:
  static void check_dim(const VectorType& v, Eigen::Index expected,
                        const char* name) {
    if (v.size() != expected) {
      throw Error(ErrorCode::dimension_mismatch,
                  std::string(name) + " has dimension " +
                      std::to_string(v.size()) + ", expected " +
                      std::to_string(expected));
    }
  }

  MatrixType matrix_;
  MatrixType gram_;
  Eigen::JacobiSVD<MatrixType> svd_;
  double norm_ = 0.0;
  double sigma_min_ = 0.0;
  double rank_tol_ = 0.0;
};

template <FieldScalar Scalar>
Vector<Scalar> apply(const Operator<Scalar>& op, const VectorArg<Scalar>& v) {
  return op.apply(v);
}

template <FieldScalar Scalar>
Vector<Scalar> apply_adjoint(const Operator<Scalar>& op,
                             const VectorArg<Scalar>& v) {
  return op.apply_adjoint(v);
}

/// Cholesky factorization of T*T + lambda I for one fixed lambda > 0.
///
/// The matrix is Hermitian positive definite for every lambda > 0, so the
/// factorization always exists. Solves apply one step of iterative refinement.
template <FieldScalar Scalar>
class RegularizedSystem {
 public:
  using VectorType = Vector<Scalar>;

  RegularizedSystem(const Operator<Scalar>& op, double lambda)
      : op_(&op), lambda_(lambda) {
    if (!std::isfinite(lambda)) {
      throw Error(ErrorCode::non_finite, "lambda is not finite");
    }
    if (lambda <= 0.0) {
      throw Error(ErrorCode::invalid_argument,
                  "lambda must be positive, got " + std::to_string(lambda));
    }
    Matrix<Scalar> shifted = op.gram();
    shifted.diagonal().array() += Scalar(lambda);
    llt_.compute(shifted);
    if (llt_.info() != Eigen::Success) {
      throw Error(ErrorCode::singular_operator,
                  "T*T + lambda I is not numerically positive definite");
    }
  }

  double lambda() const { return lambda_; }

  /// (T*T + lambda I) v, formed without the explicit shifted matrix.
  VectorType multiply(const VectorType& v) const {
    return op_->gram() * v + lambda_ * v;
  }

  VectorType solve(const VectorType& rhs) const {
    if (rhs.size() != op_->cols()) {
      throw Error(ErrorCode::dimension_mismatch,
                  "rhs has dimension " + std::to_string(rhs.size()) +
                      ", expected " + std::to_string(op_->cols()));
    }
    if (!all_finite(rhs)) {
      throw Error(ErrorCode::non_finite, "rhs has non-finite entries");
    }
    VectorType y = llt_.solve(rhs);
    const VectorType defect = rhs - multiply(y);
    y += llt_.solve(defect);
    return y;
  }

 private:
  const Operator<Scalar>* op_;
  double lambda_;
  Eigen::LLT<Matrix<Scalar>> llt_;
};

/// Solves (T*T + lambda I) y = rhs.
template <FieldScalar Scalar>
Vector<Scalar> regularized_solve(const Operator<Scalar>& op,
                                 const VectorArg<Scalar>& rhs, double lambda) {
  return RegularizedSystem<Scalar>(op, lambda).solve(rhs);
}

}  // namespace extremal
