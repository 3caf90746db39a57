#include "doctest.h"

#include <algorithm>
#include <random>

#include "grades/hard_threshold.hpp"
#include "oracles.hpp"

using namespace grades;

namespace {

Signal<double> vec(std::initializer_list<double> values) {
  Signal<double> v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

// Entries drawn from a few small integers so magnitude ties are common.
Signal<double> tie_heavy(long n, std::mt19937_64& gen) {
  std::uniform_int_distribution<int> pick(-3, 3);
  Signal<double> x(n);
  for (long i = 0; i < n; ++i) x(i) = pick(gen);
  return x;
}

}  // namespace

TEST_CASE("hard_threshold keeps the largest magnitudes") {
  CHECK(hard_threshold(vec({3, -1, 2}), 2) == vec({3, 0, 2}));
  CHECK(hard_threshold(vec({-5, 1, 4, -2}), 1) == vec({-5, 0, 0, 0}));
}

TEST_CASE("hard_threshold breaks ties toward the lower index") {
  CHECK(hard_threshold(vec({1, -1, 1}), 2) == vec({1, -1, 0}));
  CHECK(hard_threshold(vec({2, 1, -1, 1}), 2) == vec({2, 1, 0, 0}));
  // the oracle reports the same error for every tie choice
  CHECK((vec({1, -1, 1}) - hard_threshold(vec({1, -1, 1}), 2)).squaredNorm() ==
        oracle::best_sparse_error({1, -1, 1}, 2));
}

TEST_CASE("hard_threshold edge cases") {
  const auto x = vec({0, 4, 0, -3});
  CHECK(hard_threshold(x, 2) == x);
  CHECK(hard_threshold(x, 3) == x);
  CHECK(hard_threshold(x, 0) == Signal<double>::Zero(4));
  CHECK(hard_threshold(x, 4) == x);
  CHECK(hard_threshold(Signal<double>::Zero(5), 2) == Signal<double>::Zero(5));
  CHECK_THROWS_AS(hard_threshold(x, 5), ContractViolation);
  CHECK_THROWS_AS(hard_threshold(x, -1), ContractViolation);
}

TEST_CASE("support lists nonzero indices") {
  CHECK(support(vec({0, 0, 0})).empty());
  CHECK(support(vec({5, 0, -2})) == std::vector<Index>{0, 2});
}

TEST_CASE("hard_threshold is the best s-sparse approximation") {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 100; ++trial) {
    const long n = 1 + static_cast<long>(gen() % 10);
    const auto x = trial % 2 ? oracle::random_signal(n, gen) : tie_heavy(n, gen);
    for (long s = 0; s <= n; ++s) {
      const auto h = hard_threshold(x, s);
      CHECK(static_cast<long>(support(h).size()) <= s);
      const double err = (x - h).squaredNorm();
      const double best = oracle::best_sparse_error(oracle::to_vec(x), static_cast<int>(s));
      CHECK(err == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("hard_threshold is idempotent, nested in s, and keeps signed values") {
  std::mt19937_64 gen(22);
  for (int trial = 0; trial < 200; ++trial) {
    const long n = 1 + static_cast<long>(gen() % 16);
    const auto x = trial % 2 ? oracle::random_signal(n, gen) : tie_heavy(n, gen);
    for (long s = 0; s <= n; ++s) {
      const auto h = hard_threshold(x, s);
      CHECK(hard_threshold(h, s) == h);
      for (long i = 0; i < n; ++i) CHECK((h(i) == 0 || h(i) == x(i)));
      if (s < n) {
        const auto inner = support(h);
        const auto outer = support(hard_threshold(x, s + 1));
        CHECK(std::includes(outer.begin(), outer.end(), inner.begin(), inner.end()));
      }
    }
  }
}
