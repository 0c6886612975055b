#pragma once

#include <cmath>
#include <string>

#include "chaoskit/scalar.hpp"

namespace chaoskit::detail {

// value * scale_sq^(k/2). For odd k the half-integer power is only taken
// when the value is zero (then the result is zero) or in float mode.
template <ChaosScalar T>
T apply_scale(const T& value, const T& scale_sq, int k) {
  if (k % 2 == 0) return value * ipow(scale_sq, k / 2);
  if (ScalarTraits<T>::is_zero(value)) return value;
  if constexpr (is_exact_v<T>) {
    Rational root;
    if (!rational_sqrt(scale_sq, root))
      throw PreconditionError("odd moment of a kernel scaled by sqrt(" + ScalarTraits<T>::to_string(scale_sq) +
                              ") is irrational; use float mode");
    return value * ipow(root, k);
  } else {
    return value * std::pow(std::sqrt(scale_sq), k);
  }
}

}  // namespace chaoskit::detail
