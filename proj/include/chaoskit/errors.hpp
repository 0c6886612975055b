#pragma once

#include <stdexcept>
#include <string>

namespace chaoskit {

// Each error class maps onto one CLI exit code (see tools/chaoskit.cpp).

/// Malformed input: wrong lengths, mismatched shapes, unparsable files.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A tensor would exceed the configured entry budget.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, int offending_order)
      : std::runtime_error(what), order_(offending_order) {}
  int offending_order() const noexcept { return order_; }

 private:
  int order_;
};

/// A mathematical precondition (symmetry, normalization, class membership) fails.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace chaoskit
