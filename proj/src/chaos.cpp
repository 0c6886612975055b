#include "chaoskit/chaos.hpp"

#include <algorithm>
#include <string>

#include "chaoskit/contractions.hpp"
#include "scaled_moment.hpp"

namespace chaoskit {

template <ChaosScalar T>
ChaosExpansion<T>::ChaosExpansion(Model model, int resolution, Components components)
    : model_(model), resolution_(resolution) {
  for (auto& [order, kernel] : components) {
    if (kernel.order() != order)
      throw InputError("chaos component keyed " + std::to_string(order) + " has order " + std::to_string(kernel.order()));
    if (order > 0 && kernel.resolution() != resolution)
      throw InputError("chaos components must share one resolution");
    // Order 0 is a plain constant; keep it at resolution 1.
    if (order == 0) {
      components_.emplace(0, GridKernel<T>::constant(kernel.scalar()));
    } else if (model == Model::classical) {
      components_.emplace(order, symmetrize(kernel));
    } else {
      components_.emplace(order, std::move(kernel));
    }
  }
}

template <ChaosScalar T>
ChaosExpansion<T> ChaosExpansion<T>::from_kernel(const GridKernel<T>& f, Model model) {
  Components c;
  c.emplace(f.order(), f);
  return ChaosExpansion(model, f.order() == 0 ? 1 : f.resolution(), std::move(c));
}

template <ChaosScalar T>
const GridKernel<T>* ChaosExpansion<T>::component(int order) const {
  auto it = components_.find(order);
  return it == components_.end() ? nullptr : &it->second;
}

template <ChaosScalar T>
int ChaosExpansion<T>::max_order() const {
  return components_.empty() ? 0 : components_.rbegin()->first;
}

namespace {

template <ChaosScalar T>
int common_resolution(const ChaosExpansion<T>& a, const ChaosExpansion<T>& b) {
  if (a.model() != b.model()) throw InputError("cannot combine classical and free chaos expansions");
  // A pure constant (only order 0) adapts to the other operand's grid.
  const bool a_const = a.max_order() == 0;
  const bool b_const = b.max_order() == 0;
  if (a_const) return b.resolution();
  if (b_const) return a.resolution();
  if (a.resolution() != b.resolution()) throw InputError("chaos expansions live on different resolutions");
  return a.resolution();
}

// Lift an order-0 kernel onto resolution m so it can meet grid kernels.
template <ChaosScalar T>
GridKernel<T> on_grid(const GridKernel<T>& k, int m) {
  if (k.order() == 0 && k.resolution() != m) return GridKernel<T>(0, m, {k.scalar()});
  return k;
}

template <ChaosScalar T>
void accumulate(std::map<int, std::vector<T>>& acc, const GridKernel<T>& term, const T& coeff) {
  auto [it, inserted] = acc.try_emplace(term.order(), term.size(), ScalarTraits<T>::from_int(0));
  auto& dst = it->second;
  for (std::size_t i = 0; i < term.size(); ++i) dst[i] += coeff * term[i];
}

}  // namespace

template <ChaosScalar T>
ChaosExpansion<T> operator+(const ChaosExpansion<T>& a, const ChaosExpansion<T>& b) {
  const int m = common_resolution(a, b);
  std::map<int, std::vector<T>> acc;
  const T one = ScalarTraits<T>::from_int(1);
  for (const auto& [q, k] : a.components()) accumulate(acc, on_grid(k, m), one);
  for (const auto& [q, k] : b.components()) accumulate(acc, on_grid(k, m), one);
  typename ChaosExpansion<T>::Components out;
  for (auto& [q, coeffs] : acc) out.emplace(q, GridKernel<T>(q, m, std::move(coeffs)));
  return ChaosExpansion<T>(a.model(), m, std::move(out));
}

template <ChaosScalar T>
bool operator==(const ChaosExpansion<T>& a, const ChaosExpansion<T>& b) {
  if (a.model() != b.model()) return false;
  if (a.components().size() != b.components().size()) return false;
  for (const auto& [q, k] : a.components()) {
    const auto* other = b.component(q);
    if (!other) return false;
    if (q == 0 ? !(k.scalar() == other->scalar()) : !(k == *other)) return false;
  }
  return true;
}

template <ChaosScalar T>
ChaosExpansion<T> multiply(const ChaosExpansion<T>& a, const ChaosExpansion<T>& b) {
  const int m = common_resolution(a, b);
  const Model model = a.model();
  // Fixed (p, q, r) iteration order keeps float accumulation reproducible.
  std::map<int, std::vector<T>> acc;
  for (const auto& [p, fa] : a.components()) {
    const GridKernel<T> f = on_grid(fa, m);
    for (const auto& [q, gb] : b.components()) {
      const GridKernel<T> g = on_grid(gb, m);
      for (int r = 0; r <= std::min(p, q); ++r) {
        if (model == Model::classical) {
          const BigInt c = factorial(static_cast<unsigned>(r)) * binomial(p, r) * binomial(q, r);
          accumulate(acc, contract_classical_sym(f, g, r), ScalarTraits<T>::from_rational(Rational(c)));
        } else {
          accumulate(acc, contract_free(f, g, r), ScalarTraits<T>::from_int(1));
        }
      }
    }
  }
  typename ChaosExpansion<T>::Components out;
  for (auto& [q, coeffs] : acc) out.emplace(q, GridKernel<T>(q, m, std::move(coeffs)));
  return ChaosExpansion<T>(model, m, std::move(out));
}

template <ChaosScalar T>
T expectation(const ChaosExpansion<T>& f) {
  const auto* c = f.component(0);
  return c ? c->scalar() : ScalarTraits<T>::from_int(0);
}

template <ChaosScalar T>
T moment_via_expansion(const GridKernel<T>& f, int k, Model model) {
  if (k < 1) throw InputError("moment order k must be >= 1");
  if (model == Model::free && !is_mirror_symmetric(f))
    throw PreconditionError("free moments require a mirror-symmetric kernel");
  const auto base = ChaosExpansion<T>::from_kernel(f, model);
  auto power = base;
  for (int j = 2; j <= k; ++j) {
    try {
      power = multiply(power, base);
    } catch (const BudgetError& e) {
      throw BudgetError("moment_via_expansion: computing F^" + std::to_string(j) + " needs an order-" +
                            std::to_string(e.offending_order()) + " kernel: " + e.what(),
                        e.offending_order());
    }
  }
  return expectation(power);
}

template <ChaosScalar T>
T moment_via_expansion(const ScaledKernel<T>& f, int k, Model model) {
  return detail::apply_scale(moment_via_expansion(f.base, k, model), f.scale_sq, k);
}

#define CHAOSKIT_INSTANTIATE(T)                                                             \
  template class ChaosExpansion<T>;                                                         \
  template ChaosExpansion<T> operator+(const ChaosExpansion<T>&, const ChaosExpansion<T>&); \
  template bool operator==(const ChaosExpansion<T>&, const ChaosExpansion<T>&);             \
  template ChaosExpansion<T> multiply(const ChaosExpansion<T>&, const ChaosExpansion<T>&);  \
  template T expectation(const ChaosExpansion<T>&);                                         \
  template T moment_via_expansion(const GridKernel<T>&, int, Model);                        \
  template T moment_via_expansion(const ScaledKernel<T>&, int, Model);

CHAOSKIT_INSTANTIATE(Rational)
CHAOSKIT_INSTANTIATE(double)

#undef CHAOSKIT_INSTANTIATE

}  // namespace chaoskit
