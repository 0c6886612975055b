#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "chaoskit/errors.hpp"

namespace chaoskit {

using Rational = mpq_class;
using BigInt = mpz_class;

enum class NumericMode { exact, floating };

/// Arithmetic glue shared by the two scalar types. A computation picks one
/// type for its whole duration; there is no implicit mixing.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr NumericMode mode = NumericMode::exact;
  static constexpr const char* name = "exact";

  static Rational from_int(long v) { return Rational(v); }
  static Rational ratio(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  static Rational from_rational(const Rational& q) { return q; }
  static double to_double(const Rational& v) { return v.get_d(); }
  static bool is_finite(const Rational&) { return true; }
  static bool is_zero(const Rational& v) { return sgn(v) == 0; }
  static std::string to_string(const Rational& v) {
    if (v.get_den() == 1) return v.get_num().get_str();
    return v.get_str();
  }
  static Rational parse(std::string_view text);
};

template <>
struct ScalarTraits<double> {
  static constexpr NumericMode mode = NumericMode::floating;
  static constexpr const char* name = "float";

  static double from_int(long v) { return static_cast<double>(v); }
  static double ratio(long num, long den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double from_rational(const Rational& q) { return q.get_d(); }
  static double to_double(double v) { return v; }
  static bool is_finite(double v) { return std::isfinite(v); }
  static bool is_zero(double v) { return v == 0.0; }
  static std::string to_string(double v);
  static double parse(std::string_view text);
};

template <class T>
concept ChaosScalar = requires { ScalarTraits<T>::mode; };

template <ChaosScalar T>
inline constexpr bool is_exact_v = ScalarTraits<T>::mode == NumericMode::exact;

/// Integer power with a non-negative exponent.
template <ChaosScalar T>
T ipow(const T& base, int exponent) {
  T out = ScalarTraits<T>::from_int(1);
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

/// Exact square root of a non-negative rational, if one exists.
bool rational_sqrt(const Rational& value, Rational& root);

BigInt factorial(unsigned n);
BigInt binomial(long n, long k);

}  // namespace chaoskit
