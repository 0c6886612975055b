#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "chaoskit/scalar.hpp"

namespace chaoskit {

enum class Model { classical, free };

const char* to_string(Model model);
Model parse_model(std::string_view text);

/// Upper bound on the number of entries any single tensor may hold.
/// Defaults to 10^7; process-wide and safe to change between computations.
std::size_t entry_budget();
void set_entry_budget(std::size_t entries);

/// Throws BudgetError when an order-`order` tensor at `resolution` would
/// exceed entry_budget().
void check_budget(int resolution, int order);

/// Step function on [0,1]^p, constant on the cells of a uniform m-grid.
///
/// Coefficient I (row-major over {0..m-1}^p, first index most significant)
/// is the value on the cell prod_j [i_j/m, (i_j+1)/m). Order 0 is a constant.
/// Immutable once constructed.
template <ChaosScalar T>
class GridKernel {
 public:
  using value_type = T;

  GridKernel(int order, int resolution, std::vector<T> coeffs);

  static GridKernel constant(T value);
  static GridKernel ones(int order, int resolution);
  static GridKernel zeros(int order, int resolution);

  int order() const noexcept { return order_; }
  int resolution() const noexcept { return resolution_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  std::span<const T> coeffs() const noexcept { return coeffs_; }
  const T& operator[](std::size_t linear) const { return coeffs_[linear]; }

  /// Coefficient at 0-based cell indices.
  const T& at(std::span<const int> cell) const;

  /// Value of an order-0 kernel.
  const T& scalar() const;

  GridKernel scaled(const T& factor) const;

  friend bool operator==(const GridKernel&, const GridKernel&) = default;

 private:
  int order_;
  int resolution_;
  std::vector<T> coeffs_;
};

/// sqrt(scale_sq) * base. Lets exact mode carry irrational normalizations:
/// every moment and identity used here is homogeneous in the kernel, so the
/// factor can be applied to the result instead of the coefficients.
template <ChaosScalar T>
struct ScaledKernel {
  GridKernel<T> base;
  T scale_sq;

  /// Plain kernel. Exact mode requires scale_sq to be a rational square.
  GridKernel<T> materialize() const;
};

template <ChaosScalar T>
ScaledKernel<T> unscaled(GridKernel<T> f) {
  return {std::move(f), ScalarTraits<T>::from_int(1)};
}

template <ChaosScalar T>
T l2_inner(const GridKernel<T>& f, const GridKernel<T>& g);

template <ChaosScalar T>
T l2_norm_sq(const GridKernel<T>& f);

/// Average over all argument permutations.
template <ChaosScalar T>
GridKernel<T> symmetrize(const GridKernel<T>& f);

/// Mirror adjoint f*(t_1..t_p) = f(t_p..t_1).
template <ChaosScalar T>
GridKernel<T> adjoint(const GridKernel<T>& f);

template <ChaosScalar T>
bool is_symmetric(const GridKernel<T>& f);

template <ChaosScalar T>
bool is_mirror_symmetric(const GridKernel<T>& f);

/// True when every cell with a repeated index carries a zero coefficient.
template <ChaosScalar T>
bool is_off_diagonal(const GridKernel<T>& f);

/// Copy of f with every diagonal-touching cell zeroed.
template <ChaosScalar T>
GridKernel<T> off_diagonal_part(const GridKernel<T>& f);

/// Same function at resolution factor * m.
template <ChaosScalar T>
GridKernel<T> refine(const GridKernel<T>& f, int factor);

template <ChaosScalar T>
GridKernel<T> add(const GridKernel<T>& f, const GridKernel<T>& g);

/// Classical: c * symmetrize(f) with p! ||c f~||^2 = 1.
/// Free: c * f with <c f, (c f)*> = 1.
template <ChaosScalar T>
ScaledKernel<T> normalize_variance(const GridKernel<T>& f, Model model);

/// Variance of the single-chaos element I_p(f) under `model`, unnormalized.
template <ChaosScalar T>
T chaos_variance(const GridKernel<T>& f, Model model);

enum class Family { pair_clt, constant_hermite };

Family parse_family(std::string_view text);
const char* to_string(Family family);

/// Test families.
///   pair_clt(n): p = 2, m = 2n, equal mass on cells (2i-1,2i) and (2i,2i-1),
///     normalized for `model`;
///   constant_hermite(p): the constant 1 on [0,1]^p at m = 1 (not rescaled).
template <ChaosScalar T>
ScaledKernel<T> family_kernel(Family family, int parameter, Model model);

namespace reference {

/// Serial symmetrization by orbit accumulation over sorted index tuples.
template <ChaosScalar T>
GridKernel<T> symmetrize(const GridKernel<T>& f);

}  // namespace reference

}  // namespace chaoskit
