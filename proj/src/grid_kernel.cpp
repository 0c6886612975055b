#include "chaoskit/grid_kernel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <string>

#include "chaoskit/multi_index.hpp"

namespace chaoskit {

namespace {

std::atomic<std::size_t> g_entry_budget{10'000'000};

// Below this many entries the OpenMP fork costs more than the loop.
constexpr std::int64_t kParallelThreshold = 4096;

bool has_repeated_digit(std::span<const int> digits) {
  for (std::size_t a = 0; a < digits.size(); ++a)
    for (std::size_t b = a + 1; b < digits.size(); ++b)
      if (digits[a] == digits[b]) return true;
  return false;
}

}  // namespace

const char* to_string(Model model) { return model == Model::classical ? "classical" : "free"; }

Model parse_model(std::string_view text) {
  if (text == "classical") return Model::classical;
  if (text == "free") return Model::free;
  throw InputError("unknown model '" + std::string(text) + "' (expected classical|free)");
}

const char* to_string(Family family) {
  return family == Family::pair_clt ? "pair_clt" : "constant_hermite";
}

Family parse_family(std::string_view text) {
  if (text == "pair_clt") return Family::pair_clt;
  if (text == "constant_hermite") return Family::constant_hermite;
  throw InputError("unknown family '" + std::string(text) + "' (expected pair_clt|constant_hermite)");
}

std::size_t entry_budget() { return g_entry_budget.load(std::memory_order_relaxed); }

void set_entry_budget(std::size_t entries) { g_entry_budget.store(entries, std::memory_order_relaxed); }

void check_budget(int resolution, int order) {
  const std::size_t n = grid_size(resolution, order);
  if (n > entry_budget()) {
    throw BudgetError("tensor of order " + std::to_string(order) + " at resolution " +
                          std::to_string(resolution) + " exceeds the entry budget of " +
                          std::to_string(entry_budget()),
                      order);
  }
}

template <ChaosScalar T>
GridKernel<T>::GridKernel(int order, int resolution, std::vector<T> coeffs)
    : order_(order), resolution_(resolution), coeffs_(std::move(coeffs)) {
  if (order < 0) throw InputError("kernel order must be >= 0");
  if (resolution < 1) throw InputError("kernel resolution must be >= 1");
  check_budget(resolution, order);
  const std::size_t expected = grid_size(resolution, order);
  if (coeffs_.size() != expected) {
    throw InputError("kernel of order " + std::to_string(order) + " at resolution " + std::to_string(resolution) +
                     " needs " + std::to_string(expected) + " coefficients, got " + std::to_string(coeffs_.size()));
  }
  for (const T& c : coeffs_)
    if (!ScalarTraits<T>::is_finite(c)) throw InputError("kernel coefficient is not finite");
}

template <ChaosScalar T>
GridKernel<T> GridKernel<T>::constant(T value) {
  return GridKernel(0, 1, std::vector<T>{std::move(value)});
}

template <ChaosScalar T>
GridKernel<T> GridKernel<T>::ones(int order, int resolution) {
  check_budget(resolution, order);
  return GridKernel(order, resolution, std::vector<T>(grid_size(resolution, order), ScalarTraits<T>::from_int(1)));
}

template <ChaosScalar T>
GridKernel<T> GridKernel<T>::zeros(int order, int resolution) {
  check_budget(resolution, order);
  return GridKernel(order, resolution, std::vector<T>(grid_size(resolution, order), ScalarTraits<T>::from_int(0)));
}

template <ChaosScalar T>
const T& GridKernel<T>::at(std::span<const int> cell) const {
  if (static_cast<int>(cell.size()) != order_) throw InputError("cell index has the wrong arity");
  for (int d : cell)
    if (d < 0 || d >= resolution_) throw InputError("cell index out of range");
  return coeffs_[encode_index(cell, resolution_)];
}

template <ChaosScalar T>
const T& GridKernel<T>::scalar() const {
  if (order_ != 0) throw InputError("scalar() on a kernel of order " + std::to_string(order_));
  return coeffs_.front();
}

template <ChaosScalar T>
GridKernel<T> GridKernel<T>::scaled(const T& factor) const {
  std::vector<T> out(coeffs_);
  for (T& c : out) c *= factor;
  return GridKernel(order_, resolution_, std::move(out));
}

template <ChaosScalar T>
GridKernel<T> ScaledKernel<T>::materialize() const {
  if constexpr (is_exact_v<T>) {
    Rational root;
    if (!rational_sqrt(scale_sq, root))
      throw PreconditionError("scale factor sqrt(" + ScalarTraits<T>::to_string(scale_sq) +
                              ") is irrational; keep the kernel in scaled form");
    return base.scaled(root);
  } else {
    return base.scaled(std::sqrt(scale_sq));
  }
}

namespace {

template <ChaosScalar T>
void require_same_shape(const GridKernel<T>& f, const GridKernel<T>& g, const char* op) {
  if (f.order() != g.order() || f.resolution() != g.resolution()) {
    throw InputError(std::string(op) + ": shape mismatch (order " + std::to_string(f.order()) + " vs " +
                     std::to_string(g.order()) + ", resolution " + std::to_string(f.resolution()) + " vs " +
                     std::to_string(g.resolution()) + ")");
  }
}

template <ChaosScalar T>
T cell_measure(int resolution, int order) {
  return ScalarTraits<T>::ratio(1, 1) / ipow(ScalarTraits<T>::from_int(resolution), order);
}

}  // namespace

template <ChaosScalar T>
T l2_inner(const GridKernel<T>& f, const GridKernel<T>& g) {
  require_same_shape(f, g, "l2_inner");
  T sum = ScalarTraits<T>::from_int(0);
  for (std::size_t i = 0; i < f.size(); ++i) sum += f[i] * g[i];
  return sum * cell_measure<T>(f.resolution(), f.order());
}

template <ChaosScalar T>
T l2_norm_sq(const GridKernel<T>& f) {
  return l2_inner(f, f);
}

template <ChaosScalar T>
GridKernel<T> symmetrize(const GridKernel<T>& f) {
  const int p = f.order();
  const int m = f.resolution();
  if (p <= 1) return f;
  const auto n = static_cast<std::int64_t>(f.size());
  std::vector<T> out(f.size());

  // Each sorted tuple is the canonical representative of one orbit; the
  // orbit is walked with next_permutation, so orbits are disjoint work items.
#pragma omp parallel if (n >= kParallelThreshold)
  {
    std::vector<int> digits(static_cast<std::size_t>(p));
    std::vector<std::size_t> members;
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t canon = 0; canon < n; ++canon) {
      decode_index(static_cast<std::size_t>(canon), m, digits);
      if (!std::is_sorted(digits.begin(), digits.end())) continue;
      members.clear();
      T sum = ScalarTraits<T>::from_int(0);
      do {
        const std::size_t idx = encode_index(digits, m);
        members.push_back(idx);
        sum += f[idx];
      } while (std::next_permutation(digits.begin(), digits.end()));
      sum /= ScalarTraits<T>::from_int(static_cast<long>(members.size()));
      for (std::size_t idx : members) out[idx] = sum;
    }
  }
  return GridKernel<T>(p, m, std::move(out));
}

template <ChaosScalar T>
GridKernel<T> adjoint(const GridKernel<T>& f) {
  if (f.order() <= 1) return f;
  const auto rev = reversal_table(f.resolution(), f.order());
  std::vector<T> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[rev[i]];
  return GridKernel<T>(f.order(), f.resolution(), std::move(out));
}

template <ChaosScalar T>
bool is_symmetric(const GridKernel<T>& f) {
  const int p = f.order();
  if (p <= 1) return true;
  std::vector<int> digits(static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < f.size(); ++i) {
    decode_index(i, f.resolution(), digits);
    // Adjacent transpositions generate the symmetric group.
    for (int j = 0; j + 1 < p; ++j) {
      std::swap(digits[static_cast<std::size_t>(j)], digits[static_cast<std::size_t>(j) + 1]);
      const bool equal = f[encode_index(digits, f.resolution())] == f[i];
      std::swap(digits[static_cast<std::size_t>(j)], digits[static_cast<std::size_t>(j) + 1]);
      if (!equal) return false;
    }
  }
  return true;
}

template <ChaosScalar T>
bool is_mirror_symmetric(const GridKernel<T>& f) {
  if (f.order() <= 1) return true;
  const auto rev = reversal_table(f.resolution(), f.order());
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!(f[i] == f[rev[i]])) return false;
  return true;
}

template <ChaosScalar T>
bool is_off_diagonal(const GridKernel<T>& f) {
  std::vector<int> digits(static_cast<std::size_t>(f.order()));
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (ScalarTraits<T>::is_zero(f[i])) continue;
    decode_index(i, f.resolution(), digits);
    if (has_repeated_digit(digits)) return false;
  }
  return true;
}

template <ChaosScalar T>
GridKernel<T> off_diagonal_part(const GridKernel<T>& f) {
  std::vector<T> out(f.coeffs().begin(), f.coeffs().end());
  std::vector<int> digits(static_cast<std::size_t>(f.order()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    decode_index(i, f.resolution(), digits);
    if (has_repeated_digit(digits)) out[i] = ScalarTraits<T>::from_int(0);
  }
  return GridKernel<T>(f.order(), f.resolution(), std::move(out));
}

template <ChaosScalar T>
GridKernel<T> refine(const GridKernel<T>& f, int factor) {
  if (factor < 1) throw InputError("refine factor must be >= 1");
  if (factor == 1) return f;
  const int p = f.order();
  const int fine = f.resolution() * factor;
  check_budget(fine, p);
  const std::size_t n = grid_size(fine, p);
  std::vector<T> out(n);
  std::vector<int> digits(static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < n; ++i) {
    decode_index(i, fine, digits);
    for (int& d : digits) d /= factor;
    out[i] = f[encode_index(digits, f.resolution())];
  }
  return GridKernel<T>(p, fine, std::move(out));
}

template <ChaosScalar T>
GridKernel<T> add(const GridKernel<T>& f, const GridKernel<T>& g) {
  require_same_shape(f, g, "add");
  std::vector<T> out(f.coeffs().begin(), f.coeffs().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += g[i];
  return GridKernel<T>(f.order(), f.resolution(), std::move(out));
}

template <ChaosScalar T>
T chaos_variance(const GridKernel<T>& f, Model model) {
  if (model == Model::classical) {
    const T fact = ScalarTraits<T>::from_rational(Rational(factorial(static_cast<unsigned>(f.order()))));
    return fact * l2_norm_sq(symmetrize(f));
  }
  return l2_inner(f, adjoint(f));
}

template <ChaosScalar T>
ScaledKernel<T> normalize_variance(const GridKernel<T>& f, Model model) {
  bool all_zero = true;
  for (const T& c : f.coeffs()) all_zero = all_zero && ScalarTraits<T>::is_zero(c);
  if (all_zero) throw PreconditionError("cannot normalize the zero kernel");
  GridKernel<T> base = model == Model::classical ? symmetrize(f) : f;
  const T variance = chaos_variance(base, model);
  if (!(variance > 0)) {
    throw PreconditionError("variance <f, f*> = " + ScalarTraits<T>::to_string(variance) +
                            " is not positive; the free element cannot be normalized");
  }
  return {std::move(base), ScalarTraits<T>::from_int(1) / variance};
}

template <ChaosScalar T>
ScaledKernel<T> family_kernel(Family family, int parameter, Model model) {
  if (parameter < 1) throw InputError("family parameter must be positive");
  if (family == Family::constant_hermite) return unscaled(GridKernel<T>::ones(parameter, 1));

  const int n = parameter;
  const int m = 2 * n;
  check_budget(m, 2);
  std::vector<T> coeffs(grid_size(m, 2), ScalarTraits<T>::from_int(0));
  for (int i = 0; i < n; ++i) {
    const auto a = static_cast<std::size_t>(2 * i);
    const auto b = a + 1;
    coeffs[a * static_cast<std::size_t>(m) + b] = ScalarTraits<T>::from_int(1);
    coeffs[b * static_cast<std::size_t>(m) + a] = ScalarTraits<T>::from_int(1);
  }
  return normalize_variance(GridKernel<T>(2, m, std::move(coeffs)), model);
}

namespace reference {

template <ChaosScalar T>
GridKernel<T> symmetrize(const GridKernel<T>& f) {
  const int p = f.order();
  const int m = f.resolution();
  if (p <= 1) return f;
  std::vector<std::size_t> canon(f.size());
  std::vector<T> sums(f.size(), ScalarTraits<T>::from_int(0));
  std::vector<long> counts(f.size(), 0);
  std::vector<int> digits(static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < f.size(); ++i) {
    decode_index(i, m, digits);
    std::sort(digits.begin(), digits.end());
    canon[i] = encode_index(digits, m);
    sums[canon[i]] += f[i];
    ++counts[canon[i]];
  }
  std::vector<T> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = sums[canon[i]] / ScalarTraits<T>::from_int(counts[canon[i]]);
  return GridKernel<T>(p, m, std::move(out));
}

}  // namespace reference

#define CHAOSKIT_INSTANTIATE(T)                                                  \
  template class GridKernel<T>;                                                  \
  template struct ScaledKernel<T>;                                               \
  template T l2_inner(const GridKernel<T>&, const GridKernel<T>&);               \
  template T l2_norm_sq(const GridKernel<T>&);                                   \
  template GridKernel<T> symmetrize(const GridKernel<T>&);                       \
  template GridKernel<T> adjoint(const GridKernel<T>&);                          \
  template bool is_symmetric(const GridKernel<T>&);                              \
  template bool is_mirror_symmetric(const GridKernel<T>&);                       \
  template bool is_off_diagonal(const GridKernel<T>&);                           \
  template GridKernel<T> off_diagonal_part(const GridKernel<T>&);                \
  template GridKernel<T> refine(const GridKernel<T>&, int);                      \
  template GridKernel<T> add(const GridKernel<T>&, const GridKernel<T>&);        \
  template T chaos_variance(const GridKernel<T>&, Model);                        \
  template ScaledKernel<T> normalize_variance(const GridKernel<T>&, Model);      \
  template ScaledKernel<T> family_kernel<T>(Family, int, Model);                 \
  template GridKernel<T> reference::symmetrize(const GridKernel<T>&);

CHAOSKIT_INSTANTIATE(Rational)
CHAOSKIT_INSTANTIATE(double)

#undef CHAOSKIT_INSTANTIATE

}  // namespace chaoskit
