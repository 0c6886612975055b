// Independent moment oracle: explicit Gaussian polynomial expansion.
// Uses no contractions, chaos expansions or combinatorics.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "chaoskit/moments.hpp"
#include "chaoskit/multi_index.hpp"
#include "scaled_moment.hpp"

namespace chaoskit {

namespace {

constexpr int kBitsPerVar = 5;  // exponents up to 31

// Monomial in xi_0..xi_{m-1}, exponents packed 5 bits per variable. Packed
// addition multiplies monomials as long as no exponent exceeds 31.
using Monomial = std::uint64_t;

template <ChaosScalar T>
using Poly = std::unordered_map<Monomial, T>;

int exponent(Monomial mono, int var) { return static_cast<int>((mono >> (kBitsPerVar * var)) & 31U); }

Monomial unit(int var, int power) { return static_cast<Monomial>(power) << (kBitsPerVar * var); }

// Probabilists' Hermite polynomial He_n as integer coefficients by degree.
std::vector<long> hermite(int n) {
  std::vector<long> prev{1}, cur{0, 1};
  if (n == 0) return prev;
  for (int d = 1; d < n; ++d) {
    std::vector<long> next(static_cast<std::size_t>(d) + 2, 0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= static_cast<long>(d) * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

template <ChaosScalar T>
Poly<T> multiply(const Poly<T>& a, const Poly<T>& b) {
  Poly<T> out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      auto [it, inserted] = out.try_emplace(ma + mb, ScalarTraits<T>::from_int(0));
      it->second += ca * cb;
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    if (ScalarTraits<T>::is_zero(it->second))
      it = out.erase(it);
    else
      ++it;
  }
  return out;
}

}  // namespace

template <ChaosScalar T>
T wick_oracle_moment(const GridKernel<T>& f, int k, const WickCaps& caps) {
  if (k < 1) throw InputError("moment order k must be >= 1");
  if (!is_symmetric(f)) throw PreconditionError("the Wick oracle expects a symmetric kernel");
  const int m = f.resolution();
  const int p = f.order();
  if (m > caps.max_variables || m > 64 / kBitsPerVar)
    throw BudgetError("Wick oracle: " + std::to_string(m) + " Gaussian variables exceed the cap of " +
                          std::to_string(std::min(caps.max_variables, 64 / kBitsPerVar)),
                      p);
  if (k * p > caps.max_degree || k * p > 31)
    throw BudgetError("Wick oracle: degree " + std::to_string(k * p) + " exceeds the cap of " +
                          std::to_string(std::min(caps.max_degree, 31)),
                      k * p);

  // Sum coefficients over each orbit: every ordered tuple with the same
  // multiset of cells yields the same Hermite product.
  std::map<std::vector<int>, T> orbit_sums;
  std::vector<int> digits(static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (ScalarTraits<T>::is_zero(f[i])) continue;
    decode_index(i, m, digits);
    std::sort(digits.begin(), digits.end());
    auto [it, inserted] = orbit_sums.try_emplace(digits, ScalarTraits<T>::from_int(0));
    it->second += f[i];
  }

  // G = m^{p/2} F as a polynomial in the xi.
  Poly<T> g;
  for (const auto& [cells, weight] : orbit_sums) {
    Poly<T> term{{0, weight}};
    for (std::size_t a = 0; a < cells.size();) {
      std::size_t b = a;
      while (b < cells.size() && cells[b] == cells[a]) ++b;
      const auto he = hermite(static_cast<int>(b - a));
      Poly<T> factor;
      for (std::size_t d = 0; d < he.size(); ++d)
        if (he[d] != 0) factor.emplace(unit(cells[a], static_cast<int>(d)), ScalarTraits<T>::from_int(he[d]));
      term = multiply(term, factor);
      a = b;
    }
    for (const auto& [mono, c] : term) {
      auto [it, inserted] = g.try_emplace(mono, ScalarTraits<T>::from_int(0));
      it->second += c;
    }
  }

  Poly<T> power{{0, ScalarTraits<T>::from_int(1)}};
  for (int j = 0; j < k; ++j) power = multiply(power, g);

  T expected = ScalarTraits<T>::from_int(0);
  for (const auto& [mono, c] : power) {
    T gauss = ScalarTraits<T>::from_int(1);
    bool odd = false;
    for (int v = 0; v < m && !odd; ++v) {
      const int e = exponent(mono, v);
      if (e % 2 == 1) odd = true;
      for (int i = e - 1; i > 1; i -= 2) gauss *= ScalarTraits<T>::from_int(i);
    }
    if (!odd) expected += c * gauss;
  }

  // F^k = m^{-pk/2} G^k. For odd pk the law of G^k is symmetric (He_n has
  // the parity of n), so the expectation vanishes identically.
  if ((p * k) % 2 == 1) return ScalarTraits<T>::from_int(0);
  return expected / ipow(ScalarTraits<T>::from_int(m), p * k / 2);
}

template <ChaosScalar T>
T wick_oracle_moment(const ScaledKernel<T>& f, int k, const WickCaps& caps) {
  return detail::apply_scale(wick_oracle_moment(f.base, k, caps), f.scale_sq, k);
}

template Rational wick_oracle_moment(const GridKernel<Rational>&, int, const WickCaps&);
template double wick_oracle_moment(const GridKernel<double>&, int, const WickCaps&);
template Rational wick_oracle_moment(const ScaledKernel<Rational>&, int, const WickCaps&);
template double wick_oracle_moment(const ScaledKernel<double>&, int, const WickCaps&);

}  // namespace chaoskit
