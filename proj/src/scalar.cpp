#include "chaoskit/scalar.hpp"

#include <charconv>
#include <cstdio>
#include <string>

namespace chaoskit {

Rational ScalarTraits<Rational>::parse(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InputError("empty rational literal");
  Rational q;
  if (q.set_str(s, 10) != 0) throw InputError("invalid rational literal '" + s + "'");
  if (q.get_den() == 0) throw InputError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::string ScalarTraits<double>::to_string(double v) {
  // Shortest representation that round-trips.
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double ScalarTraits<double>::parse(std::string_view text) {
  double v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size())
    throw InputError("invalid float literal '" + std::string(text) + "'");
  return v;
}

bool rational_sqrt(const Rational& value, Rational& root) {
  if (sgn(value) < 0) return false;
  if (!mpz_perfect_square_p(value.get_num_mpz_t()) || !mpz_perfect_square_p(value.get_den_mpz_t()))
    return false;
  BigInt num = sqrt(value.get_num());
  BigInt den = sqrt(value.get_den());
  root = Rational(num, den);
  root.canonicalize();
  return true;
}

BigInt factorial(unsigned n) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

BigInt binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

}  // namespace chaoskit
