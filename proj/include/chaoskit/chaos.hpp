#pragma once

#include <map>

#include "chaoskit/grid_kernel.hpp"

namespace chaoskit {

/// Finite sum of multiple integrals sum_q I_q(g_q) under one model.
///
/// Classical components of order >= 1 are stored symmetrized (I_q(g) and
/// I_q(g~) coincide); free components are stored verbatim since the free
/// calculus is order-sensitive.
template <ChaosScalar T>
class ChaosExpansion {
 public:
  using Components = std::map<int, GridKernel<T>>;

  ChaosExpansion(Model model, int resolution, Components components = {});

  static ChaosExpansion from_kernel(const GridKernel<T>& f, Model model);

  Model model() const noexcept { return model_; }
  int resolution() const noexcept { return resolution_; }
  const Components& components() const noexcept { return components_; }

  /// Component of order q, or nullptr if absent (zero).
  const GridKernel<T>* component(int order) const;
  int max_order() const;

 private:
  Model model_;
  int resolution_;
  Components components_;
};

template <ChaosScalar T>
ChaosExpansion<T> operator+(const ChaosExpansion<T>& a, const ChaosExpansion<T>& b);

template <ChaosScalar T>
bool operator==(const ChaosExpansion<T>& a, const ChaosExpansion<T>& b);

/// Product through the classical product formula (coefficients
/// r! C(p,r) C(q,r), symmetrized contractions) or the free one (coefficient 1,
/// free contractions), extended bilinearly.
template <ChaosScalar T>
ChaosExpansion<T> multiply(const ChaosExpansion<T>& a, const ChaosExpansion<T>& b);

/// The order-0 component; every higher chaos has mean zero.
template <ChaosScalar T>
T expectation(const ChaosExpansion<T>& f);

/// E[I_p(f)^k] by folding multiply() left to right and taking expectation.
/// Free model requires a mirror-symmetric f.
template <ChaosScalar T>
T moment_via_expansion(const GridKernel<T>& f, int k, Model model);

template <ChaosScalar T>
T moment_via_expansion(const ScaledKernel<T>& f, int k, Model model);

}  // namespace chaoskit
