#pragma once

#include "chaoskit/scalar.hpp"

namespace chaoskit::detail {

// acc += x * y without gmpxx expression temporaries.
struct MulAdd {
  Rational tmp;
  void operator()(Rational& acc, const Rational& x, const Rational& y) {
    mpq_mul(tmp.get_mpq_t(), x.get_mpq_t(), y.get_mpq_t());
    mpq_add(acc.get_mpq_t(), acc.get_mpq_t(), tmp.get_mpq_t());
  }
  void operator()(double& acc, double x, double y) { acc += x * y; }
};

}  // namespace chaoskit::detail
