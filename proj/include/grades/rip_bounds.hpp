#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "grades/combinations.hpp"
#include "grades/core.hpp"
#include "grades/random.hpp"

namespace grades {

/// Bounds obtained by enumerating every support of the given size.
struct ExactProvenance {
  bool operator==(const ExactProvenance&) const = default;
};

/// Bounds estimated from `trials` random supports drawn from `seed`.
struct SampledProvenance {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  bool operator==(const SampledProvenance&) const = default;
};

using Provenance = std::variant<ExactProvenance, SampledProvenance>;

/// Constants (alpha_s, beta_s) with alpha ||x||^2 <= ||Phi x||^2 <= beta ||x||^2
/// for s-sparse x.
///
/// Exact bounds are certified. Sampled bounds are an *inner* estimate: the
/// true alpha_s may be smaller and the true beta_s larger than reported, so
/// they certify nothing. The optional witness supports record where each
/// extreme was attained.
template <typename Scalar>
class RipBounds {
 public:
  RipBounds(Scalar alpha, Scalar beta, Index sparsity, Provenance provenance = ExactProvenance{},
            std::vector<Index> alpha_support = {}, std::vector<Index> beta_support = {})
      : alpha_(alpha),
        beta_(beta),
        sparsity_(sparsity),
        provenance_(provenance),
        alpha_support_(std::move(alpha_support)),
        beta_support_(std::move(beta_support)) {
    detail::require(std::isfinite(alpha) && std::isfinite(beta),
                    "RIP bounds must be finite");
    detail::require(alpha > Scalar(0), "lower isometry bound alpha must be positive");
    detail::require(alpha <= beta, "RIP bounds require alpha <= beta");
    detail::require(sparsity >= 1, "RIP bounds sparsity level must be positive");
    if (const auto* sampled = std::get_if<SampledProvenance>(&provenance_)) {
      detail::require(sampled->trials >= 1, "sampled bounds need at least one trial");
    }
  }

  Scalar alpha() const { return alpha_; }
  Scalar beta() const { return beta_; }
  Index sparsity() const { return sparsity_; }
  const Provenance& provenance() const { return provenance_; }
  bool is_exact() const { return std::holds_alternative<ExactProvenance>(provenance_); }
  const std::vector<Index>& alpha_support() const { return alpha_support_; }
  const std::vector<Index>& beta_support() const { return beta_support_; }

  bool operator==(const RipBounds&) const = default;

 private:
  Scalar alpha_;
  Scalar beta_;
  Index sparsity_;
  Provenance provenance_;
  std::vector<Index> alpha_support_;
  std::vector<Index> beta_support_;
};

struct ExactOptions {
  /// Refuse to enumerate more supports than this.
  std::uint64_t max_supports = 1'000'000;
  /// Worker threads; the result does not depend on this.
  unsigned workers = 1;
};

namespace detail {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
DenseMatrix<Scalar> gram_submatrix(const MeasurementMatrix<Scalar>& phi,
                                   const std::vector<Index>& cols) {
  const DenseMatrix<Scalar> sub = phi(Eigen::all, cols);
  return sub.transpose() * sub;
}

template <typename Scalar>
std::pair<Scalar, Scalar> extreme_eigenvalues(const DenseMatrix<Scalar>& gram) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> solver(gram, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();  // ascending
  return {ev(0), ev(ev.size() - 1)};
}

// Running min / max over supports. Comparisons are strict, so among equal
// values the first support visited wins; merging partial results in
// visiting order therefore matches a sequential scan.
template <typename Scalar>
struct Extremes {
  Scalar lo = std::numeric_limits<Scalar>::infinity();
  Scalar hi = -std::numeric_limits<Scalar>::infinity();
  std::vector<Index> lo_support;
  std::vector<Index> hi_support;

  void visit(const MeasurementMatrix<Scalar>& phi, const std::vector<Index>& cols) {
    const auto [min_ev, max_ev] = extreme_eigenvalues(gram_submatrix(phi, cols));
    if (min_ev < lo) {
      lo = min_ev;
      lo_support = cols;
    }
    if (max_ev > hi) {
      hi = max_ev;
      hi_support = cols;
    }
  }

  void merge(const Extremes& later) {
    if (later.lo < lo) {
      lo = later.lo;
      lo_support = later.lo_support;
    }
    if (later.hi > hi) {
      hi = later.hi;
      hi_support = later.hi_support;
    }
  }
};

// Splits [0, total) into `workers` contiguous chunks, runs `body(begin, end,
// out)` on each, and merges the partial extremes in chunk order.
template <typename Scalar, typename Body>
Extremes<Scalar> partitioned(std::uint64_t total, unsigned workers, Body body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(
                                                         std::min<std::uint64_t>(total, 1024))));
  std::vector<Extremes<Scalar>> parts(workers);
  if (workers == 1) {
    body(std::uint64_t{0}, total, parts[0]);
    return parts[0];
  }
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = total * w / workers;
      const std::uint64_t end = total * (w + 1) / workers;
      pool.emplace_back([&body, &parts, w, begin, end] { body(begin, end, parts[w]); });
    }
  }
  Extremes<Scalar> all = std::move(parts[0]);
  for (unsigned w = 1; w < workers; ++w) all.merge(parts[w]);
  return all;
}

// Smallest Gram eigenvalue indistinguishable from zero at working precision:
// the chosen columns are linearly dependent.
template <typename Scalar>
void require_positive_lower(const Extremes<Scalar>& e, Index s, const char* what) {
  const Scalar floor = e.hi * Scalar(s) * std::numeric_limits<Scalar>::epsilon();
  require(e.lo > floor, std::string(what) + ": some " + std::to_string(s) +
                            " columns are linearly dependent; no positive lower isometry bound");
}

inline void require_level(Index cols, Index s) {
  require(s >= 1 && s <= cols, "sparsity level " + std::to_string(s) +
                                   " out of range for " + std::to_string(cols) + " columns");
}

}  // namespace detail

/// Tightest (alpha_s, beta_s) for `phi`: the smallest and largest eigenvalue
/// of Phi_S^T Phi_S over all size-s column subsets S, visited in
/// lexicographic order.
///
/// Throws BudgetExceeded when C(n, s) exceeds `options.max_supports`, and
/// ContractViolation when some s columns are linearly dependent (no positive
/// lower bound exists).
template <typename Scalar>
RipBounds<Scalar> exact_rip_bounds(const MeasurementMatrix<Scalar>& phi, Index s,
                                   const ExactOptions& options = {}) {
  detail::require_level(phi.cols(), s);
  const std::uint64_t total =
      binomial(static_cast<std::uint64_t>(phi.cols()), static_cast<std::uint64_t>(s));
  if (total > options.max_supports) {
    throw BudgetExceeded("exact RIP bounds at level " + std::to_string(s) + " need C(" +
                         std::to_string(phi.cols()) + ", " + std::to_string(s) + ") = " +
                         std::to_string(total) + " supports, over the budget of " +
                         std::to_string(options.max_supports) +
                         "; use sampled bounds instead");
  }

  const auto extremes = detail::partitioned<Scalar>(
      total, options.workers,
      [&](std::uint64_t begin, std::uint64_t end, detail::Extremes<Scalar>& out) {
        if (begin == end) return;
        auto comb = unrank_combination(phi.cols(), s, begin);
        for (std::uint64_t rank = begin; rank < end; ++rank) {
          out.visit(phi, comb);
          next_combination(comb, phi.cols());
        }
      });

  detail::require_positive_lower(extremes, s, "exact RIP bounds");
  return RipBounds<Scalar>(extremes.lo, extremes.hi, s, ExactProvenance{},
                           extremes.lo_support, extremes.hi_support);
}

/// Inner estimate of (alpha_s, beta_s) from `trials` uniformly random size-s
/// supports, drawn with replacement. Trial t draws its support from stream t
/// of `seed`, so the result is a pure function of the arguments.
///
/// The returned alpha is >= the true alpha_s and beta is <= the true beta_s.
template <typename Scalar>
RipBounds<Scalar> sampled_rip_bounds(const MeasurementMatrix<Scalar>& phi, Index s,
                                     std::uint64_t trials, std::uint64_t seed,
                                     unsigned workers = 1) {
  detail::require_level(phi.cols(), s);
  detail::require(trials >= 1, "sampled RIP bounds need at least one trial");

  const auto extremes = detail::partitioned<Scalar>(
      trials, workers,
      [&](std::uint64_t begin, std::uint64_t end, detail::Extremes<Scalar>& out) {
        for (std::uint64_t t = begin; t < end; ++t) {
          Rng rng(seed, t);
          auto cols = random_subset(phi.cols(), s, rng);
          std::sort(cols.begin(), cols.end());
          out.visit(phi, cols);
        }
      });

  detail::require_positive_lower(extremes, s, "sampled RIP bounds");
  return RipBounds<Scalar>(extremes.lo, extremes.hi, s, SampledProvenance{trials, seed},
                           extremes.lo_support, extremes.hi_support);
}

/// Unit eigenvector of Phi_S^T Phi_S for its smallest (or largest)
/// eigenvalue, embedded into R^n at S. ||Phi v||^2 equals that eigenvalue.
template <typename Scalar>
Signal<Scalar> extremal_probe(const MeasurementMatrix<Scalar>& phi,
                              const std::vector<Index>& cols, bool smallest) {
  detail::require(!cols.empty(), "extremal_probe needs a nonempty support");
  Eigen::SelfAdjointEigenSolver<detail::DenseMatrix<Scalar>> solver(
      detail::gram_submatrix(phi, cols));
  const Index which = smallest ? 0 : static_cast<Index>(cols.size()) - 1;
  Signal<Scalar> probe = Signal<Scalar>::Zero(phi.cols());
  probe(cols) = solver.eigenvectors().col(which);
  return probe;
}

/// Classical isometry constant implied by the bounds: max(1 - alpha, beta - 1).
template <typename Scalar>
Scalar delta_from_bounds(const RipBounds<Scalar>& bounds) {
  return std::max(Scalar(1) - bounds.alpha(), bounds.beta() - Scalar(1));
}

/// beta < 2 alpha, strictly.
template <typename Scalar>
bool check_convergence_condition(const RipBounds<Scalar>& bounds) {
  return bounds.beta() < Scalar(2) * bounds.alpha();
}

/// Per-iteration objective shrink factor (beta - alpha) / alpha.
template <typename Scalar>
Scalar contraction_factor(const RipBounds<Scalar>& bounds) {
  return (bounds.beta() - bounds.alpha()) / bounds.alpha();
}

/// Iterations after which the objective is guaranteed to be <= eps, starting
/// from x = 0:
///
///   ceil( ln(||y||^2 / eps) / ln(alpha / (beta - alpha)) )
///
/// Returns 0 when eps >= ||y||^2. When beta == alpha the contraction factor is
/// zero and a single step reaches f = 0, so 1 is returned. Saturates at
/// UINT64_MAX. Throws ConditionError unless beta < 2 alpha.
template <typename Scalar>
std::uint64_t iteration_bound(Scalar y_norm_sq, Scalar eps, const RipBounds<Scalar>& bounds) {
  detail::require(std::isfinite(y_norm_sq) && y_norm_sq > Scalar(0),
                  "iteration_bound: ||y||^2 must be positive");
  detail::require(std::isfinite(eps) && eps > Scalar(0),
                  "iteration_bound: eps must be positive");
  if (!check_convergence_condition(bounds)) {
    throw ConditionError("convergence condition beta < 2 alpha fails (alpha = " +
                         std::to_string(bounds.alpha()) +
                         ", beta = " + std::to_string(bounds.beta()) + ")");
  }
  if (eps >= y_norm_sq) return 0;
  if (bounds.beta() == bounds.alpha()) return 1;

  const Scalar ratio = std::log(y_norm_sq / eps) /
                       std::log(bounds.alpha() / (bounds.beta() - bounds.alpha()));
  const Scalar iters = std::ceil(ratio);
  if (!(iters < Scalar(std::numeric_limits<std::uint64_t>::max()))) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(iters);
}

}  // namespace grades
