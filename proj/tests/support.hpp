#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "chaoskit/grid_kernel.hpp"

namespace testing_support {

using chaoskit::GridKernel;
using chaoskit::Rational;

inline Rational Q(const std::string& text) { return chaoskit::ScalarTraits<Rational>::parse(text); }

inline GridKernel<Rational> kernel(int p, int m, const std::vector<std::string>& coeffs) {
  std::vector<Rational> v;
  for (const auto& c : coeffs) v.push_back(Q(c));
  return {p, m, std::move(v)};
}

inline GridKernel<Rational> pair_kernel() { return kernel(2, 2, {"0", "1", "1", "0"}); }

// Plain nested-digit helpers, written independently of the library's indexing.
inline std::vector<int> digits_of(std::size_t index, int m, int order) {
  std::vector<int> d(static_cast<std::size_t>(order));
  for (int a = order - 1; a >= 0; --a) {
    d[static_cast<std::size_t>(a)] = static_cast<int>(index % static_cast<std::size_t>(m));
    index /= static_cast<std::size_t>(m);
  }
  return d;
}

inline std::size_t index_of(const std::vector<int>& d, int m) {
  std::size_t i = 0;
  for (int x : d) i = i * static_cast<std::size_t>(m) + static_cast<std::size_t>(x);
  return i;
}

inline std::size_t power(int m, int e) {
  std::size_t s = 1;
  for (int i = 0; i < e; ++i) s *= static_cast<std::size_t>(m);
  return s;
}

// Literal p!-fold permutation average.
template <class T>
GridKernel<T> brute_symmetrize(const GridKernel<T>& f) {
  const int p = f.order(), m = f.resolution();
  std::vector<int> perm(static_cast<std::size_t>(p));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<T> out(f.size(), T(0));
  long count = 0;
  do {
    ++count;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto d = digits_of(i, m, p);
      std::vector<int> e(d.size());
      for (std::size_t a = 0; a < d.size(); ++a) e[a] = d[static_cast<std::size_t>(perm[a])];
      out[i] += f[index_of(e, m)];
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (auto& v : out) v /= T(count);
  return {p, m, std::move(out)};
}

// out[T1,T2] = m^-r sum_S f[T1,S] g[T2,S]  (classical) or f[T1,S] g[rev S,T2] (free).
template <class T>
GridKernel<T> brute_contract(const GridKernel<T>& f, const GridKernel<T>& g, int r, bool free) {
  const int p = f.order(), q = g.order(), m = f.resolution();
  const int order = p + q - 2 * r;
  std::vector<T> out(power(m, order), T(0));
  for (std::size_t o = 0; o < out.size(); ++o) {
    const auto d = digits_of(o, m, order);
    for (std::size_t s = 0; s < power(m, r); ++s) {
      const auto sd = digits_of(s, m, r);
      std::vector<int> fi(d.begin(), d.begin() + (p - r));
      fi.insert(fi.end(), sd.begin(), sd.end());
      std::vector<int> gi;
      if (free) {
        gi.assign(sd.rbegin(), sd.rend());
        gi.insert(gi.end(), d.begin() + (p - r), d.end());
      } else {
        gi.assign(d.begin() + (p - r), d.end());
        gi.insert(gi.end(), sd.begin(), sd.end());
      }
      out[o] += f[index_of(fi, m)] * g[index_of(gi, m)];
    }
    out[o] /= T(static_cast<long>(power(m, r)));
  }
  return {order, m, std::move(out)};
}

template <class T>
T brute_norm_sq(const GridKernel<T>& f) {
  T s(0);
  for (const auto& c : f.coeffs()) s += c * c;
  return s / T(static_cast<long>(power(f.resolution(), f.order())));
}

// E[xi^n] for a standard normal, by the recursion E xi^n = (n-1) E xi^{n-2}.
inline long gaussian_power_moment(int n) {
  if (n % 2) return 0;
  long v = 1;
  for (int j = n - 1; j > 0; j -= 2) v *= j;
  return v;
}

// Semicircle moments by the Catalan recursion C_{n+1} = sum C_i C_{n-i}.
inline long semicircle_power_moment(int n) {
  if (n % 2) return 0;
  std::vector<long> c{1};
  for (int i = 1; i <= n / 2; ++i) {
    long s = 0;
    for (int j = 0; j < i; ++j) s += c[static_cast<std::size_t>(j)] * c[static_cast<std::size_t>(i - 1 - j)];
    c.push_back(s);
  }
  return c.back();
}

inline long choose(int n, int k) {
  long v = 1;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

inline double rel_err(double value, double target) { return std::abs(value - target) / std::max(std::abs(target), 1.0); }

}  // namespace testing_support
