#pragma once

#include <stdexcept>
#include <string>

namespace grades {

/// Raised when a caller breaks an operation's precondition (bad dimensions,
/// non-finite data, sparsity out of range).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exhaustive support enumeration would exceed the configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The convergence condition beta < 2 alpha does not hold, so the
/// iteration bound is undefined.
class ConditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ContractViolation(what);
}

}  // namespace detail
}  // namespace grades
