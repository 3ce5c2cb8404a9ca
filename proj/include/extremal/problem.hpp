#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "extremal/error.hpp"
#include "extremal/operator.hpp"

namespace extremal {

/// The triple (T, x0, epsilon) defining one extremal vector.
///
/// Construction validates every invariant: ||x0|| > 0, 0 < epsilon < ||x0||
/// and dist(x0, range T) < epsilon. A Problem that exists is solvable.
template <FieldScalar Scalar>
class Problem {
 public:
  using VectorType = Vector<Scalar>;

  Problem(Operator<Scalar> op, VectorType x0, double epsilon)
      : op_(std::move(op)), x0_(std::move(x0)), epsilon_(epsilon) {
    if (x0_.size() != op_.rows()) {
      throw Error(ErrorCode::dimension_mismatch,
                  "x0 has dimension " + std::to_string(x0_.size()) +
                      ", operator has " + std::to_string(op_.rows()) + " rows");
    }
    if (!all_finite(x0_)) {
      throw Error(ErrorCode::non_finite, "x0 has non-finite entries");
    }
    if (!std::isfinite(epsilon_)) {
      throw Error(ErrorCode::non_finite, "epsilon is not finite");
    }
    x0_norm_ = x0_.norm();
    if (!(x0_norm_ > 0.0)) {
      throw Error(ErrorCode::epsilon_out_of_range, "x0 is the zero vector");
    }
    if (!(epsilon_ > 0.0) || !(epsilon_ < x0_norm_)) {
      throw Error(ErrorCode::epsilon_out_of_range,
                  "epsilon=" + std::to_string(epsilon_) +
                      " must lie in (0, ||x0||=" + std::to_string(x0_norm_) +
                      ")");
    }
    range_distance_ = op_.distance_to_range(x0_);
    if (!(range_distance_ < epsilon_)) {
      throw Error(ErrorCode::infeasible,
                  "dist(x0, range T)=" + std::to_string(range_distance_) +
                      " is not below epsilon=" + std::to_string(epsilon_));
    }
  }

  const Operator<Scalar>& op() const { return op_; }
  const VectorType& x0() const { return x0_; }
  double epsilon() const { return epsilon_; }
  double x0_norm() const { return x0_norm_; }
  double range_distance() const { return range_distance_; }

 private:
  Operator<Scalar> op_;
  VectorType x0_;
  double epsilon_;
  double x0_norm_ = 0.0;
  double range_distance_ = 0.0;
};

}  // namespace extremal
