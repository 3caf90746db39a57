#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "grades/core.hpp"
#include "grades/random.hpp"

namespace grades {

enum class AmplitudeDist { PlusMinusOne, StandardNormal };

/// m x n matrix with i.i.d. N(0, 1/m) entries, filled in row-major order, so
/// columns have unit squared norm in expectation.
template <typename Scalar = double>
MeasurementMatrix<Scalar> gen_gaussian_matrix(Index m, Index n, std::uint64_t seed) {
  detail::require(m >= 1 && n >= 1, "matrix dimensions must be positive");
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  MeasurementMatrix<Scalar> phi(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) phi(i, j) = static_cast<Scalar>(scale * rng.normal());
  }
  return phi;
}

/// Signal with exactly s nonzeros on a uniformly random support.
template <typename Scalar = double>
Signal<Scalar> gen_sparse_signal(Index n, Index s, std::uint64_t seed, AmplitudeDist dist) {
  detail::require(n >= 1, "signal length must be positive");
  detail::require(s >= 1 && s <= n,
                  "sparsity " + std::to_string(s) + " out of range for length " +
                      std::to_string(n));
  Rng rng(seed);
  const auto positions = random_subset(n, s, rng);
  Signal<Scalar> x = Signal<Scalar>::Zero(n);
  for (const Index i : positions) {
    double value = 0.0;
    if (dist == AmplitudeDist::PlusMinusOne) {
      value = (rng.next() >> 63) ? -1.0 : 1.0;
    } else {
      while (value == 0.0) value = rng.normal();
    }
    x(i) = static_cast<Scalar>(value);
  }
  return x;
}

/// Noise-free instance y = Phi * truth.
template <typename Scalar>
ProblemInstance<Scalar> make_instance(MeasurementMatrix<Scalar> phi, Signal<Scalar> truth,
                                      Index sparsity) {
  detail::require(truth.size() == phi.cols(),
                  "truth length " + std::to_string(truth.size()) +
                      " does not match matrix cols " + std::to_string(phi.cols()));
  Signal<Scalar> y = phi * truth;
  return ProblemInstance<Scalar>(std::move(phi), std::move(y), std::move(truth), sparsity);
}

}  // namespace grades
