#pragma once

#include <utility>
#include <vector>

#include "chaoskit/combinatorics.hpp"
#include "chaoskit/grid_kernel.hpp"

namespace chaoskit {

/// One slot of one copy of the kernel inside a diagram.
struct SlotRef {
  int copy;
  int slot;
  friend auto operator<=>(const SlotRef&, const SlotRef&) = default;
};

/// A perfect matching of the slots of `copies` copies of an order-`order`
/// kernel. Its value is the full contraction
///   m^{-#edges} sum over cell indices of prod_copies f[...],
/// i.e. the scalar an iterated contraction chain ending in order 0 produces.
struct Diagram {
  int copies = 0;
  int order = 0;
  std::vector<std::pair<SlotRef, SlotRef>> edges;

  /// Edge list in a normalized order; equal keys mean equal diagrams.
  std::vector<int> key() const;
};

/// The single diagram of the free chain f ~r1 f ~r2 ... f for a B_k tuple.
Diagram free_chain_diagram(const ContractionTuple& t);

/// The classical symmetrized chain f (x)~r1 f (x)~r2 ... f for a symmetric f,
/// expanded exactly: each symmetrization pairs a uniformly random r-subset
/// of the open slots with the new copy. Returns (probability, diagram) pairs
/// whose probabilities sum to 1; identical diagrams are merged.
std::vector<std::pair<Rational, Diagram>> classical_chain_diagrams(const ContractionTuple& t);

/// Contracts the diagram pairwise on sparse intermediates, greedily keeping
/// their orders small.
template <ChaosScalar T>
T evaluate_diagram(const GridKernel<T>& f, const Diagram& d);

}  // namespace chaoskit
