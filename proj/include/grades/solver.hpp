#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "grades/core.hpp"
#include "grades/hard_threshold.hpp"
#include "grades/rip_bounds.hpp"

namespace grades {

template <typename Scalar>
struct SolverConfig {
  Index sparsity = 1;
  /// Step parameter; the update moves by gamma^-1 Phi^T (y - Phi x).
  Scalar gamma = 1;
  /// Stop once f(x) <= eps.
  Scalar eps = 1e-10;
  /// Unset: 10x the iteration bound when `bounds` certify convergence,
  /// otherwise 1000.
  std::optional<std::uint64_t> max_iters;
  /// Bounds at level 2 * sparsity; enable guarantee checking.
  std::optional<RipBounds<Scalar>> bounds;

  /// gamma = beta_2s, as the convergence guarantee requires.
  static SolverConfig with_bounds(Index sparsity, const RipBounds<Scalar>& bounds, Scalar eps) {
    SolverConfig config;
    config.sparsity = sparsity;
    config.gamma = bounds.beta();
    config.eps = eps;
    config.bounds = bounds;
    return config;
  }

  void validate() const {
    detail::require(sparsity >= 1, "solver sparsity must be positive");
    detail::require(std::isfinite(gamma) && gamma > Scalar(0), "gamma must be positive");
    detail::require(std::isfinite(eps) && eps > Scalar(0), "eps must be positive");
    detail::require(!max_iters || *max_iters >= 1, "max_iters must be at least 1");
    if (bounds) {
      detail::require(bounds->sparsity() == 2 * sparsity,
                      "solver bounds must be at level 2s = " + std::to_string(2 * sparsity) +
                          ", got " + std::to_string(bounds->sparsity()));
    }
  }
};

enum class SolveStatus { Converged, IterationCapReached, ConditionViolated };

inline const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::IterationCapReached:
      return "iteration_cap_reached";
    case SolveStatus::ConditionViolated:
      return "condition_violated";
  }
  return "unknown";
}

template <typename Scalar>
struct SolveResult {
  Signal<Scalar> x;
  /// f(x_t) for t = 0..iterations.
  std::vector<Scalar> trace;
  SolveStatus status = SolveStatus::IterationCapReached;
  std::uint64_t iterations = 0;
  /// f(x) <= eps was reached (also tracked when status is ConditionViolated).
  bool reached_target = false;
  /// Certified iteration bound; set only for exact bounds satisfying beta < 2 alpha.
  std::optional<std::uint64_t> predicted_bound;

  Scalar final_objective() const { return trace.back(); }
};

/// Called with (t, x_t) for every iterate, including x_0.
template <typename Scalar>
using IterateObserver = std::function<void(std::uint64_t, const Signal<Scalar>&)>;

/// One GraDes update: H_s(x + gamma^-1 Phi^T (y - Phi x)), which is
/// H_s(x - 0.5 gamma^-1 grad f(x)).
template <typename Scalar, typename Derived>
Signal<Scalar> step(const ProblemInstance<Scalar>& instance, const Eigen::MatrixBase<Derived>& x,
                    Scalar gamma, Index s) {
  detail::require(std::isfinite(gamma) && gamma > Scalar(0), "gamma must be positive");
  detail::require(s >= 1 && s <= instance.cols(), "step sparsity out of range");
  const Signal<Scalar> r = residual(instance, x);
  return hard_threshold(x + (instance.phi().transpose() * r) / gamma, s);
}

/// Runs GraDes from x_0 = 0 until f(x_t) <= eps or the iteration cap.
///
/// If `config.bounds` is present but beta >= 2 alpha, the run still proceeds
/// and the status is ConditionViolated. With sampled bounds (or none) there is
/// no guarantee and no predicted bound.
template <typename Scalar>
SolveResult<Scalar> grades_solve(const ProblemInstance<Scalar>& instance,
                                 const SolverConfig<Scalar>& config,
                                 const std::type_identity_t<IterateObserver<Scalar>>& observer = {}) {
  config.validate();
  detail::require(config.sparsity <= instance.cols(), "solver sparsity exceeds signal length");

  SolveResult<Scalar> result;
  const Scalar y_norm_sq = instance.y().squaredNorm();

  bool condition_ok = true;
  std::optional<std::uint64_t> bound;
  if (config.bounds) {
    condition_ok = check_convergence_condition(*config.bounds);
    if (condition_ok && y_norm_sq > Scalar(0)) {
      bound = iteration_bound(y_norm_sq, config.eps, *config.bounds);
      if (config.bounds->is_exact()) result.predicted_bound = bound;
    }
  }

  std::uint64_t max_iters = 1000;
  if (config.max_iters) {
    max_iters = *config.max_iters;
  } else if (bound) {
    max_iters = std::max<std::uint64_t>(1, *bound > UINT64_MAX / 10 ? UINT64_MAX : 10 * *bound);
  }

  const auto& phi = instance.phi();
  Signal<Scalar> x = Signal<Scalar>::Zero(instance.cols());
  Signal<Scalar> r = instance.y();
  Scalar f = y_norm_sq;
  result.trace.push_back(f);
  if (observer) observer(0, x);

  std::uint64_t t = 0;
  while (f > config.eps && t < max_iters) {
    x = hard_threshold(x + (phi.transpose() * r) / config.gamma, config.sparsity);
    r = instance.y() - phi * x;
    f = r.squaredNorm();
    ++t;
    result.trace.push_back(f);
    if (observer) observer(t, x);
  }

  result.x = std::move(x);
  result.iterations = t;
  result.reached_target = f <= config.eps;
  if (!condition_ok) {
    result.status = SolveStatus::ConditionViolated;
  } else {
    result.status =
        result.reached_target ? SolveStatus::Converged : SolveStatus::IterationCapReached;
  }
  return result;
}

}  // namespace grades
