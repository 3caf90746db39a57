#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "grades/core.hpp"

namespace grades {

/// Indices of the nonzero entries, ascending.
template <typename Derived>
std::vector<Index> support(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  std::vector<Index> idx;
  for (Index i = 0; i < x.size(); ++i) {
    if (x(i) != Scalar(0)) idx.push_back(i);
  }
  return idx;
}

/// H_s: keeps the s entries of largest magnitude and zeroes the rest.
///
/// Magnitudes are compared exactly. When several entries tie for the last
/// kept slot, the ones with the lower index are kept, so the result is
/// deterministic, idempotent, and the kept set for s is a subset of the kept
/// set for s + 1. s = 0 yields the zero vector.
template <typename Derived>
Signal<typename Derived::Scalar> hard_threshold(const Eigen::MatrixBase<Derived>& x,
                                                Index s) {
  using Scalar = typename Derived::Scalar;
  detail::require(s >= 0 && s <= x.size(),
                  "sparsity " + std::to_string(s) + " out of range for length " +
                      std::to_string(x.size()));
  detail::require(x.allFinite(), "signal has non-finite entries");

  const Index n = x.size();
  Signal<Scalar> out = Signal<Scalar>::Zero(n);
  if (s == 0) return out;
  if (s == n) {
    out = x;
    return out;
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const auto before = [&x](Index a, Index b) {
    const Scalar ma = std::abs(x(a));
    const Scalar mb = std::abs(x(b));
    return ma > mb || (ma == mb && a < b);
  };
  std::nth_element(order.begin(), order.begin() + (s - 1), order.end(), before);
  for (Index k = 0; k < s; ++k) {
    const Index i = order[static_cast<std::size_t>(k)];
    out(i) = x(i);
  }
  return out;
}

}  // namespace grades
