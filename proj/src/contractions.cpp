#include "chaoskit/contractions.hpp"

#include <cstdint>
#include <string>
#include <vector>

#include "accumulate.hpp"
#include "chaoskit/multi_index.hpp"

namespace chaoskit {

namespace {

constexpr std::int64_t kParallelRows = 16;

template <ChaosScalar T>
void check_contraction_args(const GridKernel<T>& f, const GridKernel<T>& g, int r, const char* op) {
  if (f.resolution() != g.resolution()) {
    throw InputError(std::string(op) + ": resolution mismatch (" + std::to_string(f.resolution()) + " vs " +
                     std::to_string(g.resolution()) + "); refine first");
  }
  if (r < 0 || r > f.order() || r > g.order()) {
    throw InputError(std::string(op) + ": contraction index r=" + std::to_string(r) + " outside [0, min(" +
                     std::to_string(f.order()) + ", " + std::to_string(g.order()) + ")]");
  }
  check_budget(f.resolution(), f.order() + g.order() - 2 * r);
}

template <ChaosScalar T>
T inverse_measure_power(int m, int r) {
  return ScalarTraits<T>::from_int(1) / ipow(ScalarTraits<T>::from_int(m), r);
}

}  // namespace

template <ChaosScalar T>
GridKernel<T> contract_classical(const GridKernel<T>& f, const GridKernel<T>& g, int r) {
  check_contraction_args(f, g, r, "contract_classical");
  const int m = f.resolution();
  // f as an (m^(p-r) x m^r) matrix, g as (m^(q-r) x m^r): out = F G^T / m^r.
  const auto rows = static_cast<std::int64_t>(grid_size(m, f.order() - r));
  const auto cols = grid_size(m, g.order() - r);
  const auto inner = grid_size(m, r);
  std::vector<T> out(static_cast<std::size_t>(rows) * cols, ScalarTraits<T>::from_int(0));
  const T scale = inverse_measure_power<T>(m, r);

#pragma omp parallel if (rows >= kParallelRows)
  {
    detail::MulAdd mul_add;
#pragma omp for schedule(static)
    for (std::int64_t a = 0; a < rows; ++a) {
      T* row = out.data() + static_cast<std::size_t>(a) * cols;
      for (std::size_t s = 0; s < inner; ++s) {
        const T& fa = f[static_cast<std::size_t>(a) * inner + s];
        if (ScalarTraits<T>::is_zero(fa)) continue;
        for (std::size_t b = 0; b < cols; ++b) mul_add(row[b], fa, g[b * inner + s]);
      }
      for (std::size_t b = 0; b < cols; ++b) row[b] *= scale;
    }
  }
  return GridKernel<T>(f.order() + g.order() - 2 * r, m, std::move(out));
}

template <ChaosScalar T>
GridKernel<T> contract_classical_sym(const GridKernel<T>& f, const GridKernel<T>& g, int r) {
  return symmetrize(contract_classical(f, g, r));
}

template <ChaosScalar T>
GridKernel<T> contract_free(const GridKernel<T>& f, const GridKernel<T>& g, int r) {
  check_contraction_args(f, g, r, "contract_free");
  const int m = f.resolution();
  // f as (m^(p-r) x m^r), g as (m^r x m^(q-r)) with its row index read reversed.
  const auto rows = static_cast<std::int64_t>(grid_size(m, f.order() - r));
  const auto cols = grid_size(m, g.order() - r);
  const auto inner = grid_size(m, r);
  const auto rev = reversal_table(m, r);
  std::vector<T> out(static_cast<std::size_t>(rows) * cols, ScalarTraits<T>::from_int(0));
  const T scale = inverse_measure_power<T>(m, r);

#pragma omp parallel if (rows >= kParallelRows)
  {
    detail::MulAdd mul_add;
#pragma omp for schedule(static)
    for (std::int64_t a = 0; a < rows; ++a) {
      T* row = out.data() + static_cast<std::size_t>(a) * cols;
      for (std::size_t s = 0; s < inner; ++s) {
        const T& fa = f[static_cast<std::size_t>(a) * inner + s];
        if (ScalarTraits<T>::is_zero(fa)) continue;
        const std::size_t g_row = rev[s] * cols;
        for (std::size_t b = 0; b < cols; ++b) mul_add(row[b], fa, g[g_row + b]);
      }
      for (std::size_t b = 0; b < cols; ++b) row[b] *= scale;
    }
  }
  return GridKernel<T>(f.order() + g.order() - 2 * r, m, std::move(out));
}

namespace reference {

template <ChaosScalar T>
GridKernel<T> contract_classical(const GridKernel<T>& f, const GridKernel<T>& g, int r) {
  check_contraction_args(f, g, r, "contract_classical");
  const int m = f.resolution();
  const int p = f.order();
  const int q = g.order();
  const int out_order = p + q - 2 * r;
  const std::size_t n_out = grid_size(m, out_order);
  const std::size_t n_sum = grid_size(m, r);
  std::vector<int> t(static_cast<std::size_t>(out_order));
  std::vector<int> s(static_cast<std::size_t>(r));
  std::vector<int> fi(static_cast<std::size_t>(p));
  std::vector<int> gi(static_cast<std::size_t>(q));
  std::vector<T> out(n_out);
  for (std::size_t o = 0; o < n_out; ++o) {
    decode_index(o, m, t);
    T acc = ScalarTraits<T>::from_int(0);
    for (std::size_t si = 0; si < n_sum; ++si) {
      decode_index(si, m, s);
      for (int j = 0; j < p - r; ++j) fi[static_cast<std::size_t>(j)] = t[static_cast<std::size_t>(j)];
      for (int j = 0; j < r; ++j) fi[static_cast<std::size_t>(p - r + j)] = s[static_cast<std::size_t>(j)];
      for (int j = 0; j < q - r; ++j) gi[static_cast<std::size_t>(j)] = t[static_cast<std::size_t>(p - r + j)];
      for (int j = 0; j < r; ++j) gi[static_cast<std::size_t>(q - r + j)] = s[static_cast<std::size_t>(j)];
      acc += f.at(fi) * g.at(gi);
    }
    out[o] = acc / ipow(ScalarTraits<T>::from_int(m), r);
  }
  return GridKernel<T>(out_order, m, std::move(out));
}

template <ChaosScalar T>
GridKernel<T> contract_free(const GridKernel<T>& f, const GridKernel<T>& g, int r) {
  check_contraction_args(f, g, r, "contract_free");
  const int m = f.resolution();
  const int p = f.order();
  const int q = g.order();
  const int out_order = p + q - 2 * r;
  const std::size_t n_out = grid_size(m, out_order);
  const std::size_t n_sum = grid_size(m, r);
  std::vector<int> t(static_cast<std::size_t>(out_order));
  std::vector<int> s(static_cast<std::size_t>(r));
  std::vector<int> fi(static_cast<std::size_t>(p));
  std::vector<int> gi(static_cast<std::size_t>(q));
  std::vector<T> out(n_out);
  for (std::size_t o = 0; o < n_out; ++o) {
    decode_index(o, m, t);
    T acc = ScalarTraits<T>::from_int(0);
    for (std::size_t si = 0; si < n_sum; ++si) {
      decode_index(si, m, s);
      for (int j = 0; j < p - r; ++j) fi[static_cast<std::size_t>(j)] = t[static_cast<std::size_t>(j)];
      for (int j = 0; j < r; ++j) fi[static_cast<std::size_t>(p - r + j)] = s[static_cast<std::size_t>(j)];
      for (int j = 0; j < r; ++j) gi[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(r - 1 - j)];
      for (int j = 0; j < q - r; ++j) gi[static_cast<std::size_t>(r + j)] = t[static_cast<std::size_t>(p - r + j)];
      acc += f.at(fi) * g.at(gi);
    }
    out[o] = acc / ipow(ScalarTraits<T>::from_int(m), r);
  }
  return GridKernel<T>(out_order, m, std::move(out));
}

}  // namespace reference

#define CHAOSKIT_INSTANTIATE(T)                                                                   \
  template GridKernel<T> contract_classical(const GridKernel<T>&, const GridKernel<T>&, int);     \
  template GridKernel<T> contract_classical_sym(const GridKernel<T>&, const GridKernel<T>&, int); \
  template GridKernel<T> contract_free(const GridKernel<T>&, const GridKernel<T>&, int);          \
  template GridKernel<T> reference::contract_classical(const GridKernel<T>&, const GridKernel<T>&, int); \
  template GridKernel<T> reference::contract_free(const GridKernel<T>&, const GridKernel<T>&, int);

CHAOSKIT_INSTANTIATE(Rational)
CHAOSKIT_INSTANTIATE(double)

#undef CHAOSKIT_INSTANTIATE

}  // namespace chaoskit
