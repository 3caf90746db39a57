#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "grades/core.hpp"

namespace grades {

/// Seedable, platform-reproducible random source.
///
/// The engine is MT19937-64 seeded through std::seed_seq; both algorithms are
/// fully specified by the standard. The std distributions are not, so
/// uniform, bounded-integer and Gaussian variates are derived here from raw
/// 64-bit draws with a fixed number of draws per variate.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { reseed({seed}); }

  /// Independent stream `stream` of `seed`: used to give every trial of a
  /// sampled estimate its own generator, so results do not depend on how
  /// trials are scheduled.
  Rng(std::uint64_t seed, std::uint64_t stream) { reseed({seed, stream}); }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_positive() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  /// Integer in [0, bound) by multiply-high; one draw, bias below bound / 2^64.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  /// Standard normal by Box-Muller. Each pair of uniforms yields two
  /// variates; the second is held for the following call.
  double normal() {
    if (spare_) {
      return *std::exchange(spare_, std::nullopt);
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform_positive()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
  }

 private:
  void reseed(std::initializer_list<std::uint64_t> words) {
    std::vector<std::uint32_t> halves;
    for (auto w : words) {
      halves.push_back(static_cast<std::uint32_t>(w));
      halves.push_back(static_cast<std::uint32_t>(w >> 32));
    }
    std::seed_seq seq(halves.begin(), halves.end());
    engine_.seed(seq);
  }

  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// A 64-bit seed for an independent sub-generator, e.g. the signal of an
/// instance whose matrix uses `seed` itself.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return Rng(seed, stream).next();
}

/// First `k` positions of a Fisher-Yates shuffle of [0, n): a uniformly
/// random k-subset in draw order, consuming exactly k draws.
inline std::vector<Index> random_subset(Index n, Index k, Rng& rng) {
  detail::require(k >= 0 && k <= n, "random_subset: k out of range");
  std::vector<Index> pool(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (Index i = 0; i < k; ++i) {
    const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return pool;
}

}  // namespace grades
