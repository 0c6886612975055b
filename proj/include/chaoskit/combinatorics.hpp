#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "chaoskit/scalar.hpp"

namespace chaoskit {

/// A_k: iterated-contraction tuples whose every step is admissible.
/// B_k: A_k tuples that end in a scalar. C_k: B_k with entries in {0,p}.
/// E_k: B_k \ C_k.
enum class TupleClass { A, B, C, E };

TupleClass parse_tuple_class(std::string_view text);
const char* to_string(TupleClass cls);

/// (r_1, ..., r_{k-1}) for kernels of order p. The class is the finest of
/// A/B/C/E the tuple belongs to (C or E when in B).
class ContractionTuple {
 public:
  /// Validates membership in `cls`; throws PreconditionError otherwise.
  ContractionTuple(int p, int k, std::vector<int> r, TupleClass cls);

  int p() const noexcept { return p_; }
  int k() const noexcept { return k_; }
  const std::vector<int>& r() const noexcept { return r_; }
  TupleClass tuple_class() const noexcept { return class_; }

  /// Order of the running kernel before step j (1-based): jp - 2(r_1+...+r_{j-1}).
  int order_before(int j) const;

  friend bool operator==(const ContractionTuple&, const ContractionTuple&) = default;

 private:
  int p_;
  int k_;
  std::vector<int> r_;
  TupleClass class_;
};

/// Finest class of `r` (A when not in B_k). Throws when r is not in A_k.
TupleClass classify(int p, int k, const std::vector<int>& r);

bool in_class_a(int p, int k, const std::vector<int>& r);

/// Lexicographic, duplicate-free enumeration by pruned depth-first search.
std::vector<ContractionTuple> enumerate(int p, int k, TupleClass cls);

std::size_t count_c(int p, int k);
BigInt catalan(unsigned n);

/// s_j = 1 - 2 r_j / p and checks 1 + s_1 + ... + s_j >= 0 (j <= k-2) with
/// total 0. Requires a class-C tuple.
bool dyck_check(const ContractionTuple& t);

/// Conditions on s in {-1,1}^{k-1}, encoded as bit j set <=> s_{j+1} = -1.
/// strong: 1 + s_1 + ... + s_j >= (1 - s_{j+1}) / 2; weak: ... >= 0.
bool dyck_condition_strong(std::uint32_t minus_mask, int k);
bool dyck_condition_weak(std::uint32_t minus_mask, int k);

/// prod_j r_j! C(p, r_j) C(jp - 2(r_1+...+r_{j-1}), r_j). Requires class A.
BigInt classical_coeff(const ContractionTuple& t);

/// prod_j C(j - 2(r_1+...+r_{j-1})/p, r_j/p). Requires class C.
BigInt limit_weight(const ContractionTuple& t);

/// limit_weight / prod_j r_j! C(jp - 2(...), r_j). Requires class C.
Rational limit_value(const ContractionTuple& t);

/// (k-1)!! for even k, 0 for odd k.
BigInt gaussian_moment(unsigned k);
/// Cat_{k/2} for even k, 0 for odd k.
BigInt semicircle_moment(unsigned k);

}  // namespace chaoskit
