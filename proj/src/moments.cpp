#include "chaoskit/moments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "chaoskit/contractions.hpp"
#include "chaoskit/diagram.hpp"
#include "chaoskit/multi_index.hpp"
#include "scaled_moment.hpp"

namespace chaoskit {

const char* to_string(MomentPath path) {
  switch (path) {
    case MomentPath::formula: return "formula";
    case MomentPath::expansion: return "expansion";
    case MomentPath::oracle: return "oracle";
    case MomentPath::simulation: return "simulation";
  }
  return "?";
}

MomentPath parse_moment_path(std::string_view text) {
  if (text == "formula") return MomentPath::formula;
  if (text == "expansion") return MomentPath::expansion;
  if (text == "oracle") return MomentPath::oracle;
  if (text == "simulation") return MomentPath::simulation;
  throw InputError("unknown moment path '" + std::string(text) + "'");
}

template <ChaosScalar T>
MomentReport<T> MomentReport<T>::computed(int k, T value, MomentPath path, std::optional<T> target) {
  if (path == MomentPath::simulation) throw InputError("simulation reports need a standard error");
  return MomentReport(k, std::move(value), path, std::nullopt, std::move(target));
}

template <ChaosScalar T>
MomentReport<T> MomentReport<T>::simulated(int k, T value, double std_error, std::optional<T> target) {
  return MomentReport(k, std::move(value), MomentPath::simulation, std_error, std::move(target));
}

int dense_chain_peak_order(int p, int k) {
  int peak = p;
  for (const auto& t : enumerate(p, k, TupleClass::B))
    for (int j = 1; j < k; ++j) peak = std::max(peak, t.order_before(j) + p - 2 * t.r()[static_cast<std::size_t>(j - 1)]);
  return peak;
}

namespace {

template <ChaosScalar T>
GridKernel<T> chain_base(const GridKernel<T>& f, Model model) {
  if (model == Model::free) {
    if (!is_mirror_symmetric(f)) throw PreconditionError("free moments require a mirror-symmetric kernel");
    return f;
  }
  return is_symmetric(f) ? f : symmetrize(f);
}

template <ChaosScalar T>
GridKernel<T> chain_step(const GridKernel<T>& left, const GridKernel<T>& f, int r, Model model) {
  return model == Model::classical ? contract_classical_sym(left, f, r) : contract_free(left, f, r);
}

// Walks the lexicographically sorted tuples as a prefix tree: the stack holds
// the running kernel after each step and is only recomputed below the first
// position where consecutive tuples differ.
template <ChaosScalar T>
void dense_values(const GridKernel<T>& f, const std::vector<ContractionTuple>& tuples, Model model,
                  std::vector<T>& values) {
  // Top-level branches (distinct r_1) are independent work items.
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < tuples.size(); ++i)
    if (i == 0 || tuples[i].r()[0] != tuples[i - 1].r()[0]) starts.push_back(i);
  starts.push_back(tuples.size());
  const auto n_groups = static_cast<std::int64_t>(starts.size()) - 1;

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t g = 0; g < n_groups; ++g) {
    std::vector<GridKernel<T>> stack{f};
    const std::vector<int>* prev = nullptr;
    for (std::size_t i = starts[static_cast<std::size_t>(g)]; i < starts[static_cast<std::size_t>(g) + 1]; ++i) {
      const auto& r = tuples[i].r();
      std::size_t common = 0;
      if (prev)
        while (common < r.size() && r[common] == (*prev)[common]) ++common;
      stack.resize(common + 1, f);
      for (std::size_t j = common; j < r.size(); ++j) stack.push_back(chain_step(stack.back(), f, r[j], model));
      values[i] = stack.back().scalar();
      prev = &r;
    }
  }
}

template <ChaosScalar T>
void network_values(const GridKernel<T>& f, const std::vector<ContractionTuple>& tuples, Model model,
                    std::vector<T>& values) {
  MemoCache<std::vector<int>, T> memo;
  auto value_of = [&](const Diagram& d) { return *memo.get_or_compute(d.key(), [&] { return evaluate_diagram(f, d); }); };
  const auto n = static_cast<std::int64_t>(tuples.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& t = tuples[static_cast<std::size_t>(i)];
    if (model == Model::free) {
      values[static_cast<std::size_t>(i)] = value_of(free_chain_diagram(t));
    } else {
      T acc = ScalarTraits<T>::from_int(0);
      for (const auto& [weight, d] : classical_chain_diagrams(t)) acc += ScalarTraits<T>::from_rational(weight) * value_of(d);
      values[static_cast<std::size_t>(i)] = acc;
    }
  }
}

template <ChaosScalar T>
T term_sum(const std::vector<ChainTerm<T>>& terms) {
  T sum = ScalarTraits<T>::from_int(0);
  for (const auto& t : terms) sum += t.coefficient * t.chain_value;
  return sum;
}

template <ChaosScalar T>
T factorial_as(int n) {
  return ScalarTraits<T>::from_rational(Rational(factorial(static_cast<unsigned>(n))));
}

template <ChaosScalar T>
T binomial_as(int n, int k) {
  return ScalarTraits<T>::from_rational(Rational(binomial(n, k)));
}

}  // namespace

template <ChaosScalar T>
std::vector<ChainTerm<T>> chain_terms(const GridKernel<T>& f, int k, Model model, ChainStrategy strategy) {
  if (k < 1) throw InputError("moment order k must be >= 1");
  const GridKernel<T> base = chain_base(f, model);
  if (k == 1 || base.order() == 0) {
    if (base.order() == 0) throw InputError("chain expansions need a kernel of order >= 1");
    return {};
  }
  const int p = base.order();
  auto tuples = enumerate(p, k, TupleClass::B);
  std::vector<T> values(tuples.size(), ScalarTraits<T>::from_int(0));

  if (strategy == ChainStrategy::automatic) {
    strategy = grid_size(base.resolution(), dense_chain_peak_order(p, k)) <= entry_budget() ? ChainStrategy::dense
                                                                                          : ChainStrategy::network;
  }
  if (strategy == ChainStrategy::dense) {
    check_budget(base.resolution(), dense_chain_peak_order(p, k));
    dense_values(base, tuples, model, values);
  } else {
    network_values(base, tuples, model, values);
  }

  std::vector<ChainTerm<T>> out;
  out.reserve(tuples.size());
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    T coeff = model == Model::classical ? ScalarTraits<T>::from_rational(Rational(classical_coeff(tuples[i])))
                                        : ScalarTraits<T>::from_int(1);
    out.push_back({std::move(tuples[i]), std::move(values[i]), std::move(coeff)});
  }
  return out;
}

template <ChaosScalar T>
std::vector<ChainTerm<T>> chain_terms(const ScaledKernel<T>& f, int k, Model model, ChainStrategy strategy) {
  auto terms = chain_terms(f.base, k, model, strategy);
  for (auto& t : terms) t.chain_value = detail::apply_scale(t.chain_value, f.scale_sq, k);
  return terms;
}

template <ChaosScalar T>
T free_moment(const GridKernel<T>& f, int k, ChainStrategy strategy) {
  return term_sum(chain_terms(f, k, Model::free, strategy));
}

template <ChaosScalar T>
T free_moment(const ScaledKernel<T>& f, int k, ChainStrategy strategy) {
  return detail::apply_scale(free_moment(f.base, k, strategy), f.scale_sq, k);
}

template <ChaosScalar T>
T classical_moment(const GridKernel<T>& f, int k, ChainStrategy strategy) {
  return term_sum(chain_terms(f, k, Model::classical, strategy));
}

template <ChaosScalar T>
T classical_moment(const ScaledKernel<T>& f, int k, ChainStrategy strategy) {
  return detail::apply_scale(classical_moment(f.base, k, strategy), f.scale_sq, k);
}

template <ChaosScalar T>
T chain_moment(const ScaledKernel<T>& f, int k, Model model, ChainStrategy strategy) {
  return model == Model::classical ? classical_moment(f, k, strategy) : free_moment(f, k, strategy);
}

template <ChaosScalar T>
T free_fourth_identity(const ScaledKernel<T>& f) {
  const auto& g = f.base;
  if (!is_mirror_symmetric(g)) throw PreconditionError("free fourth-moment identity requires a mirror-symmetric kernel");
  const T norm_sq = l2_norm_sq(g);
  T sum = ScalarTraits<T>::from_int(2) * norm_sq * norm_sq;
  for (int r = 1; r < g.order(); ++r) sum += l2_norm_sq(contract_free(g, g, r));
  return sum * f.scale_sq * f.scale_sq;
}

template <ChaosScalar T>
bool is_normalized(const ScaledKernel<T>& f, Model model) {
  const T variance = chaos_variance(f.base, model) * f.scale_sq;
  if constexpr (is_exact_v<T>) {
    return variance == 1;
  } else {
    return std::abs(variance - 1.0) <= 1e-12;
  }
}

namespace {

template <ChaosScalar T>
void require_normalized_symmetric(const ScaledKernel<T>& f, const char* what) {
  if (!is_symmetric(f.base)) throw PreconditionError(std::string(what) + " requires a symmetric kernel");
  if (!is_normalized(f, Model::classical))
    throw PreconditionError(std::string(what) + " requires p! ||f||^2 = 1; normalize_variance first");
}

}  // namespace

template <ChaosScalar T>
T classical_fourth_identity(const ScaledKernel<T>& f) {
  require_normalized_symmetric(f, "classical fourth-moment identity");
  const auto& g = f.base;
  const int p = g.order();
  const T s2 = f.scale_sq * f.scale_sq;
  T sum = ScalarTraits<T>::from_int(3);
  for (int r = 1; r < p; ++r) {
    const auto c = contract_classical(g, g, r);
    const T plain = l2_norm_sq(c) * s2;
    const T sym = l2_norm_sq(symmetrize(c)) * s2;
    const T bin = binomial_as<T>(p, r);
    const T fp = factorial_as<T>(p);
    const T fr = factorial_as<T>(r);
    sum += bin * bin * (fp * fp * plain + fr * fr * bin * bin * factorial_as<T>(2 * p - 2 * r) * sym);
  }
  return sum;
}

template <ChaosScalar T>
std::pair<T, T> tensor_square_identity(const ScaledKernel<T>& f) {
  require_normalized_symmetric(f, "tensor-square identity");
  const auto& g = f.base;
  const int p = g.order();
  const T s2 = f.scale_sq * f.scale_sq;
  const T lhs = factorial_as<T>(2 * p) * l2_norm_sq(contract_classical_sym(g, g, 0)) * s2;
  T sum = ScalarTraits<T>::from_int(0);
  for (int r = 1; r < p; ++r) {
    const T bin = binomial_as<T>(p, r);
    sum += bin * bin * l2_norm_sq(contract_classical(g, g, r)) * s2;
  }
  const T fp = factorial_as<T>(p);
  return {lhs, ScalarTraits<T>::from_int(2) + fp * fp * sum};
}

template <ChaosScalar T>
ContractionProfile<T> contraction_profile(const ScaledKernel<T>& f, Model model) {
  if (f.base.order() < 2) throw InputError("contraction profiles need p >= 2");
  const T s2 = f.scale_sq * f.scale_sq;
  ContractionProfile<T> out;
  if (model == Model::free) {
    for (int r = 1; r < f.base.order(); ++r) out.plain.push_back(l2_norm_sq(contract_free(f.base, f.base, r)) * s2);
    return out;
  }
  const GridKernel<T> g = is_symmetric(f.base) ? f.base : symmetrize(f.base);
  for (int r = 1; r < g.order(); ++r) {
    const auto c = contract_classical(g, g, r);
    out.plain.push_back(l2_norm_sq(c) * s2);
    out.symmetrized.push_back(l2_norm_sq(symmetrize(c)) * s2);
  }
  return out;
}

template <ChaosScalar T>
T moment_target(int k, Model model) {
  const auto v = model == Model::classical ? gaussian_moment(static_cast<unsigned>(k))
                                           : semicircle_moment(static_cast<unsigned>(k));
  return ScalarTraits<T>::from_rational(Rational(v));
}

template <ChaosScalar T>
T fourth_moment_gap(const ScaledKernel<T>& f, Model model, ChainStrategy strategy) {
  if (!is_normalized(f, model)) throw PreconditionError("fourth_moment_gap requires a normalized kernel");
  return chain_moment(f, 4, model, strategy) - moment_target<T>(4, model);
}

template <ChaosScalar T>
std::vector<ConvergenceRow<T>> convergence_report(Family family, const std::vector<int>& n_list, int k_max,
                                                  Model model, ChainStrategy strategy) {
  if (k_max < 2) throw InputError("k_max must be >= 2");
  std::vector<ConvergenceRow<T>> rows;
  for (int n : n_list) {
    const auto f = family_kernel<T>(family, n, model);
    if (!is_normalized(f, model)) throw PreconditionError("convergence_report needs a normalized family");
    std::vector<T> profile;
    if (f.base.order() >= 2) profile = contraction_profile(f, model).plain;
    const T gap = fourth_moment_gap(f, model, strategy);
    for (int k = 2; k <= k_max; ++k) {
      const auto terms = chain_terms(f, k, model, strategy);
      T c_sum = ScalarTraits<T>::from_int(0);
      T e_sum = ScalarTraits<T>::from_int(0);
      for (const auto& t : terms) (t.tuple.tuple_class() == TupleClass::C ? c_sum : e_sum) += t.coefficient * t.chain_value;
      rows.push_back({n, k, c_sum + e_sum, moment_target<T>(k, model), gap, c_sum, e_sum, profile});
    }
  }
  return rows;
}

#define CHAOSKIT_INSTANTIATE(T)                                                                                   \
  template class MomentReport<T>;                                                                                 \
  template std::vector<ChainTerm<T>> chain_terms(const GridKernel<T>&, int, Model, ChainStrategy);                \
  template std::vector<ChainTerm<T>> chain_terms(const ScaledKernel<T>&, int, Model, ChainStrategy);              \
  template T free_moment(const GridKernel<T>&, int, ChainStrategy);                                               \
  template T free_moment(const ScaledKernel<T>&, int, ChainStrategy);                                             \
  template T classical_moment(const GridKernel<T>&, int, ChainStrategy);                                          \
  template T classical_moment(const ScaledKernel<T>&, int, ChainStrategy);                                        \
  template T chain_moment(const ScaledKernel<T>&, int, Model, ChainStrategy);                                     \
  template T free_fourth_identity(const ScaledKernel<T>&);                                                        \
  template T classical_fourth_identity(const ScaledKernel<T>&);                                                   \
  template std::pair<T, T> tensor_square_identity(const ScaledKernel<T>&);                                        \
  template ContractionProfile<T> contraction_profile(const ScaledKernel<T>&, Model);                              \
  template T fourth_moment_gap(const ScaledKernel<T>&, Model, ChainStrategy);                                     \
  template bool is_normalized(const ScaledKernel<T>&, Model);                                                     \
  template T moment_target<T>(int, Model);                                                                        \
  template std::vector<ConvergenceRow<T>> convergence_report(Family, const std::vector<int>&, int, Model,        \
                                                             ChainStrategy);

CHAOSKIT_INSTANTIATE(Rational)
CHAOSKIT_INSTANTIATE(double)

#undef CHAOSKIT_INSTANTIATE

}  // namespace chaoskit
