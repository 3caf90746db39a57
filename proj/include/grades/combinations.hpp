#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "grades/core.hpp"

namespace grades {

/// n choose k, saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i is exact at every step; divide out the gcd
    // first so the intermediate product fits whenever the answer does.
    std::uint64_t num = n - k + i;
    std::uint64_t den = i;
    const std::uint64_t g = std::gcd(result, den);
    result /= g;
    den /= g;
    num /= den;  // den now divides num
    if (num != 0 && result > kMax / num) return kMax;
    result *= num;
  }
  return result;
}

/// Advances `comb` (strictly increasing indices in [0, n)) to the next
/// combination in lexicographic order. Returns false after the last one.
inline bool next_combination(std::span<Index> comb, Index n) {
  const auto k = static_cast<Index>(comb.size());
  Index i = k - 1;
  while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++comb[static_cast<std::size_t>(i)];
  for (Index j = i + 1; j < k; ++j) {
    comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
  }
  return true;
}

/// The combination at position `rank` in lexicographic order of the
/// k-subsets of [0, n). Lets enumeration start mid-sequence.
inline std::vector<Index> unrank_combination(Index n, Index k, std::uint64_t rank) {
  detail::require(k >= 0 && k <= n, "unrank_combination: k out of range");
  detail::require(rank < binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k)),
                  "unrank_combination: rank out of range");
  std::vector<Index> comb;
  comb.reserve(static_cast<std::size_t>(k));
  Index next = 0;
  for (Index slot = 0; slot < k; ++slot) {
    for (;; ++next) {
      // number of combinations whose element at `slot` is `next`
      const std::uint64_t block = binomial(static_cast<std::uint64_t>(n - next - 1),
                                           static_cast<std::uint64_t>(k - slot - 1));
      if (rank < block) break;
      rank -= block;
    }
    comb.push_back(next++);
  }
  return comb;
}

}  // namespace grades
