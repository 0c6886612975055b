#include "chaoskit/diagram.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>

#include "accumulate.hpp"
#include "chaoskit/multi_index.hpp"

namespace chaoskit {

std::vector<int> Diagram::key() const {
  std::vector<std::pair<SlotRef, SlotRef>> sorted;
  sorted.reserve(edges.size());
  for (auto [a, b] : edges) sorted.emplace_back(std::min(a, b), std::max(a, b));
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> out{copies, order};
  for (const auto& [a, b] : sorted) out.insert(out.end(), {a.copy, a.slot, b.copy, b.slot});
  return out;
}

Diagram free_chain_diagram(const ContractionTuple& t) {
  if (t.tuple_class() != TupleClass::C && t.tuple_class() != TupleClass::E)
    throw PreconditionError("chain diagrams need a B_k tuple");
  const int p = t.p();
  Diagram d{t.k(), p, {}};
  std::vector<SlotRef> open;
  for (int s = 0; s < p; ++s) open.push_back({0, s});
  for (int j = 1; j < t.k(); ++j) {
    const int r = t.r()[static_cast<std::size_t>(j - 1)];
    const std::size_t h = open.size();
    // Slot i of the new copy meets the (i+1)-th open slot counted from the end.
    for (int i = 0; i < r; ++i) d.edges.emplace_back(open[h - 1 - static_cast<std::size_t>(i)], SlotRef{j, i});
    open.resize(h - static_cast<std::size_t>(r));
    for (int s = r; s < p; ++s) open.push_back({j, s});
  }
  return d;
}

std::vector<std::pair<Rational, Diagram>> classical_chain_diagrams(const ContractionTuple& t) {
  if (t.tuple_class() != TupleClass::C && t.tuple_class() != TupleClass::E)
    throw PreconditionError("chain diagrams need a B_k tuple");
  const int p = t.p();
  const int k = t.k();
  const auto ku = static_cast<std::size_t>(k);

  // State: open-slot count per copy, and the edge multiplicity between copies.
  using State = std::pair<std::vector<int>, std::vector<int>>;
  std::map<State, Rational> states;
  {
    State init{std::vector<int>(ku, 0), std::vector<int>(ku * ku, 0)};
    init.first[0] = p;
    states.emplace(std::move(init), Rational(1));
  }

  for (int j = 1; j < k; ++j) {
    const int r = t.r()[static_cast<std::size_t>(j - 1)];
    std::map<State, Rational> next;
    for (const auto& [state, weight] : states) {
      const auto& open = state.first;
      int h = 0;
      for (int c : open) h += c;
      const Rational denom(binomial(h, r));
      std::vector<int> take(ku, 0);
      // Distribute the r paired slots across the earlier copies.
      auto split = [&](auto&& self, int copy, int left, BigInt ways) -> void {
        if (copy == j) {
          if (left != 0) return;
          State s = state;
          for (int i = 0; i < j; ++i) {
            s.first[static_cast<std::size_t>(i)] -= take[static_cast<std::size_t>(i)];
            s.second[static_cast<std::size_t>(i) * ku + static_cast<std::size_t>(j)] += take[static_cast<std::size_t>(i)];
          }
          s.first[static_cast<std::size_t>(j)] = p - r;
          Rational w = weight * Rational(ways) / denom;
          auto [it, inserted] = next.try_emplace(std::move(s), 0);
          it->second += w;
          return;
        }
        const int avail = open[static_cast<std::size_t>(copy)];
        for (int x = 0; x <= std::min(avail, left); ++x) {
          take[static_cast<std::size_t>(copy)] = x;
          self(self, copy + 1, left - x, ways * binomial(avail, x));
        }
        take[static_cast<std::size_t>(copy)] = 0;
      };
      split(split, 0, r, BigInt(1));
    }
    states = std::move(next);
  }

  std::vector<std::pair<Rational, Diagram>> out;
  for (auto& [state, weight] : states) {
    for (int c : state.first)
      if (c != 0) throw PreconditionError("tuple does not close to a scalar");
    Diagram d{k, p, {}};
    std::vector<int> cursor(ku, 0);
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b)
        for (int e = 0; e < state.second[static_cast<std::size_t>(a) * ku + static_cast<std::size_t>(b)]; ++e)
          d.edges.emplace_back(SlotRef{a, cursor[static_cast<std::size_t>(a)]++},
                               SlotRef{b, cursor[static_cast<std::size_t>(b)]++});
    out.emplace_back(weight, std::move(d));
  }
  return out;
}

namespace {

// Sparse tensor: nonzero entries keyed by the row-major cell index over
// `labels` (first label most significant), sorted by key.
template <ChaosScalar T>
struct LabeledTensor {
  std::vector<int> labels;
  std::vector<std::pair<std::uint64_t, T>> entries;
};

template <ChaosScalar T>
LabeledTensor<T> from_kernel(const GridKernel<T>& f, std::vector<int> labels) {
  LabeledTensor<T> t{std::move(labels), {}};
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!ScalarTraits<T>::is_zero(f[i])) t.entries.emplace_back(i, f[i]);
  return t;
}

// Splits every key into (shared part, free part); both in the given label order.
struct Projection {
  std::vector<std::uint64_t> shared_weight;  // per source axis, weight in the shared key (0 if free)
  std::vector<std::uint64_t> free_weight;    // per source axis, weight in the free key (0 if shared)
};

Projection project(const std::vector<int>& labels, const std::vector<int>& shared, const std::vector<int>& free,
                   int m) {
  auto weights = [&](const std::vector<int>& order) {
    std::vector<std::uint64_t> w(labels.size(), 0);
    std::uint64_t s = 1;
    for (std::size_t a = order.size(); a-- > 0;) {
      const auto pos = std::find(labels.begin(), labels.end(), order[a]) - labels.begin();
      w[static_cast<std::size_t>(pos)] = s;
      s *= static_cast<std::uint64_t>(m);
    }
    return w;
  };
  return {weights(shared), weights(free)};
}

template <ChaosScalar T>
std::vector<std::tuple<std::uint64_t, std::uint64_t, const T*>> split_keys(const LabeledTensor<T>& t,
                                                                            const Projection& proj, int m) {
  std::vector<std::tuple<std::uint64_t, std::uint64_t, const T*>> out;
  out.reserve(t.entries.size());
  const std::size_t order = t.labels.size();
  for (const auto& [key, value] : t.entries) {
    std::uint64_t rest = key, shared = 0, free = 0;
    for (std::size_t a = order; a-- > 0;) {
      const std::uint64_t digit = rest % static_cast<std::uint64_t>(m);
      rest /= static_cast<std::uint64_t>(m);
      shared += digit * proj.shared_weight[a];
      free += digit * proj.free_weight[a];
    }
    out.emplace_back(shared, free, &value);
  }
  return out;
}

template <ChaosScalar T>
LabeledTensor<T> contract_pair(const LabeledTensor<T>& a, const LabeledTensor<T>& b, int m) {
  std::vector<int> shared, free_a, free_b;
  for (int l : a.labels) {
    if (std::find(b.labels.begin(), b.labels.end(), l) != b.labels.end())
      shared.push_back(l);
    else
      free_a.push_back(l);
  }
  for (int l : b.labels)
    if (std::find(shared.begin(), shared.end(), l) == shared.end()) free_b.push_back(l);

  const int out_order = static_cast<int>(free_a.size() + free_b.size());
  check_budget(m, out_order);

  auto ka = split_keys(a, project(a.labels, shared, free_a, m), m);
  auto kb = split_keys(b, project(b.labels, shared, free_b, m), m);
  auto by_shared = [](const auto& x, const auto& y) {
    return std::get<0>(x) != std::get<0>(y) ? std::get<0>(x) < std::get<0>(y) : std::get<1>(x) < std::get<1>(y);
  };
  std::sort(ka.begin(), ka.end(), by_shared);
  std::sort(kb.begin(), kb.end(), by_shared);

  const auto b_width = static_cast<std::uint64_t>(grid_size(m, static_cast<int>(free_b.size())));
  std::map<std::uint64_t, T> acc;
  detail::MulAdd mul_add;
  // Merge join on the shared key.
  std::size_t j = 0;
  for (std::size_t i = 0; i < ka.size();) {
    const std::uint64_t s = std::get<0>(ka[i]);
    std::size_t i_end = i;
    while (i_end < ka.size() && std::get<0>(ka[i_end]) == s) ++i_end;
    while (j < kb.size() && std::get<0>(kb[j]) < s) ++j;
    std::size_t j_end = j;
    while (j_end < kb.size() && std::get<0>(kb[j_end]) == s) ++j_end;
    for (std::size_t x = i; x < i_end; ++x)
      for (std::size_t y = j; y < j_end; ++y) {
        const std::uint64_t key = std::get<1>(ka[x]) * b_width + std::get<1>(kb[y]);
        auto [it, inserted] = acc.try_emplace(key, ScalarTraits<T>::from_int(0));
        mul_add(it->second, *std::get<2>(ka[x]), *std::get<2>(kb[y]));
      }
    i = i_end;
    j = j_end;
  }

  const T scale = ScalarTraits<T>::from_int(1) / ipow(ScalarTraits<T>::from_int(m), static_cast<int>(shared.size()));
  LabeledTensor<T> out;
  out.labels = free_a;
  out.labels.insert(out.labels.end(), free_b.begin(), free_b.end());
  out.entries.reserve(acc.size());
  for (auto& [key, value] : acc) {
    if (ScalarTraits<T>::is_zero(value)) continue;
    value *= scale;
    out.entries.emplace_back(key, std::move(value));
  }
  return out;
}

}  // namespace

template <ChaosScalar T>
T evaluate_diagram(const GridKernel<T>& f, const Diagram& d) {
  if (f.order() != d.order) throw InputError("diagram order does not match the kernel order");
  const int m = f.resolution();
  const auto p = static_cast<std::size_t>(d.order);
  std::vector<std::vector<int>> labels(static_cast<std::size_t>(d.copies), std::vector<int>(p, -1));
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    const auto [a, b] = d.edges[e];
    if (a.copy == b.copy) throw InputError("diagram edge joins a copy to itself");
    for (SlotRef s : {a, b}) {
      int& l = labels.at(static_cast<std::size_t>(s.copy)).at(static_cast<std::size_t>(s.slot));
      if (l != -1) throw InputError("diagram slot used twice");
      l = static_cast<int>(e);
    }
  }
  for (const auto& ls : labels)
    for (int l : ls)
      if (l == -1) throw InputError("diagram leaves a slot open");

  std::vector<LabeledTensor<T>> pool;
  for (auto& ls : labels) pool.push_back(from_kernel(f, ls));

  T product = ScalarTraits<T>::from_int(1);
  while (!pool.empty()) {
    // Pick the connected pair with the smallest result; ties favour more
    // shared axes, then the earliest pair.
    std::size_t best_i = 0, best_j = 0;
    int best_order = -1, best_shared = -1;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      for (std::size_t j = i + 1; j < pool.size(); ++j) {
        int shared = 0;
        for (int l : pool[i].labels)
          shared += static_cast<int>(std::count(pool[j].labels.begin(), pool[j].labels.end(), l));
        if (shared == 0) continue;
        const int order = static_cast<int>(pool[i].labels.size() + pool[j].labels.size()) - 2 * shared;
        if (best_order < 0 || order < best_order || (order == best_order && shared > best_shared)) {
          best_order = order;
          best_shared = shared;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (best_order < 0) {
      // Whatever is left is disconnected and therefore already scalar.
      for (const auto& t : pool) {
        if (!t.labels.empty()) throw InputError("diagram has a dangling axis");
        if (t.entries.empty()) return ScalarTraits<T>::from_int(0);
        product *= t.entries.front().second;
      }
      break;
    }
    auto merged = contract_pair(pool[best_i], pool[best_j], m);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best_j));
    pool[best_i] = std::move(merged);
  }
  return product;
}

template Rational evaluate_diagram(const GridKernel<Rational>&, const Diagram&);
template double evaluate_diagram(const GridKernel<double>&, const Diagram&);

}  // namespace chaoskit
