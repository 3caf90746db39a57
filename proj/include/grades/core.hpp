#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <utility>

#include "grades/errors.hpp"

namespace grades {

using Index = Eigen::Index;

/// Dense signal of ambient dimension n (a candidate x or the ground truth x*).
template <typename Scalar>
using Signal = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Dense m x n measurement operator, stored row-major.
template <typename Scalar>
using MeasurementMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Number of nonzero entries.
template <typename Derived>
Index support_size(const Eigen::DenseBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  return (x.derived().array() != Scalar(0)).count();
}

/// A measurement matrix together with its observations y, and optionally the
/// s-sparse signal that produced them. Immutable once constructed.
template <typename Scalar>
class ProblemInstance {
 public:
  ProblemInstance(MeasurementMatrix<Scalar> phi, Signal<Scalar> y,
                  std::optional<Signal<Scalar>> truth = std::nullopt,
                  std::optional<Index> sparsity = std::nullopt)
      : phi_(std::move(phi)),
        y_(std::move(y)),
        truth_(std::move(truth)),
        sparsity_(sparsity) {
    detail::require(phi_.rows() >= 1 && phi_.cols() >= 1,
                    "measurement matrix must be at least 1x1");
    detail::require(phi_.allFinite(), "measurement matrix has non-finite entries");
    detail::require(y_.size() == phi_.rows(),
                    "observation length " + std::to_string(y_.size()) +
                        " does not match matrix rows " + std::to_string(phi_.rows()));
    detail::require(y_.allFinite(), "observations have non-finite entries");
    if (truth_) {
      detail::require(truth_->size() == phi_.cols(),
                      "truth length " + std::to_string(truth_->size()) +
                          " does not match matrix cols " + std::to_string(phi_.cols()));
      detail::require(truth_->allFinite(), "truth has non-finite entries");
    }
    if (sparsity_) {
      detail::require(*sparsity_ >= 1, "sparsity must be positive");
      if (truth_) {
        detail::require(support_size(*truth_) <= *sparsity_,
                        "truth has more nonzeros than the declared sparsity");
      }
    }
  }

  const MeasurementMatrix<Scalar>& phi() const { return phi_; }
  const Signal<Scalar>& y() const { return y_; }
  const std::optional<Signal<Scalar>>& truth() const { return truth_; }
  std::optional<Index> sparsity() const { return sparsity_; }

  Index rows() const { return phi_.rows(); }
  Index cols() const { return phi_.cols(); }

 private:
  MeasurementMatrix<Scalar> phi_;
  Signal<Scalar> y_;
  std::optional<Signal<Scalar>> truth_;
  std::optional<Index> sparsity_;
};

namespace detail {

template <typename Scalar, typename Derived>
void require_signal(const ProblemInstance<Scalar>& instance,
                    const Eigen::MatrixBase<Derived>& x) {
  require(x.size() == instance.cols(),
          "signal length " + std::to_string(x.size()) + " does not match matrix cols " +
              std::to_string(instance.cols()));
  require(x.allFinite(), "signal has non-finite entries");
}

}  // namespace detail

/// y - Phi x
template <typename Scalar, typename Derived>
Signal<Scalar> residual(const ProblemInstance<Scalar>& instance,
                        const Eigen::MatrixBase<Derived>& x) {
  detail::require_signal(instance, x);
  return instance.y() - instance.phi() * x;
}

/// Least-squares loss f(x) = ||y - Phi x||^2.
template <typename Scalar, typename Derived>
Scalar objective_value(const ProblemInstance<Scalar>& instance,
                       const Eigen::MatrixBase<Derived>& x) {
  return residual(instance, x).squaredNorm();
}

/// Gradient of the least-squares loss, -2 Phi^T (y - Phi x).
template <typename Scalar, typename Derived>
Signal<Scalar> gradient(const ProblemInstance<Scalar>& instance,
                        const Eigen::MatrixBase<Derived>& x) {
  return Scalar(-2) * (instance.phi().transpose() * residual(instance, x));
}

}  // namespace grades
