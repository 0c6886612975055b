#include <doctest.h>

#include <set>

#include "chaoskit/combinatorics.hpp"
#include "support.hpp"

using namespace chaoskit;

namespace {

using Tuple = std::vector<int>;

// Every r in {0..p}^{k-1}, filtered by the set definitions directly.
std::vector<Tuple> brute_sets(int p, int k, TupleClass cls) {
  std::vector<Tuple> out;
  Tuple r(static_cast<std::size_t>(k - 1), 0);
  while (true) {
    bool in_a = true;
    int sum = 0;
    for (int j = 1; j <= k - 1; ++j) {
      const int rj = r[static_cast<std::size_t>(j - 1)];
      if (rj > j * p - 2 * sum) in_a = false;
      sum += rj;
    }
    const bool in_b = in_a && 2 * sum == k * p;
    const bool zero_or_p = std::all_of(r.begin(), r.end(), [&](int x) { return x == 0 || x == p; });
    const bool keep = cls == TupleClass::A   ? in_a
                      : cls == TupleClass::B ? in_b
                      : cls == TupleClass::C ? in_b && zero_or_p
                                             : in_b && !zero_or_p;
    if (keep) out.push_back(r);
    std::size_t i = r.size();
    while (i > 0 && r[i - 1] == p) r[--i] = 0;
    if (i == 0) break;
    ++r[i - 1];
  }
  return out;
}

std::vector<Tuple> tuples_of(const std::vector<ContractionTuple>& ts) {
  std::vector<Tuple> out;
  for (const auto& t : ts) out.push_back(t.r());
  return out;
}

}  // namespace

TEST_CASE("enumerate examples") {
  CHECK(tuples_of(enumerate(2, 4, TupleClass::C)) == std::vector<Tuple>{{0, 2, 2}, {2, 0, 2}});
  CHECK(tuples_of(enumerate(1, 2, TupleClass::B)) == std::vector<Tuple>{{1}});
  for (int p = 1; p <= 4; p += 2)
    for (int k : {3, 5, 7}) CHECK(enumerate(p, k, TupleClass::C).empty());
  CHECK_THROWS_AS(enumerate(0, 4, TupleClass::A), InputError);
  CHECK_THROWS_AS(enumerate(2, 1, TupleClass::A), InputError);
  // (1,2) reaches order 0 at p = 2, k = 3 and is an E tuple.
  CHECK(tuples_of(enumerate(2, 3, TupleClass::B)) == std::vector<Tuple>{{1, 2}});
}

TEST_CASE("enumeration matches the set definitions") {
  for (int p = 1; p <= 4; ++p)
    for (int k = 2; k <= 7; ++k)
      for (auto cls : {TupleClass::A, TupleClass::B, TupleClass::C, TupleClass::E}) {
        CAPTURE(p);
        CAPTURE(k);
        CHECK(tuples_of(enumerate(p, k, cls)) == brute_sets(p, k, cls));
      }
}

TEST_CASE("set relations") {
  for (int p = 1; p <= 3; ++p)
    for (int k = 2; k <= 8; ++k) {
      const auto a = tuples_of(enumerate(p, k, TupleClass::A));
      const auto b = tuples_of(enumerate(p, k, TupleClass::B));
      const auto c = tuples_of(enumerate(p, k, TupleClass::C));
      const auto e = tuples_of(enumerate(p, k, TupleClass::E));
      const std::set<Tuple> as(a.begin(), a.end()), bs(b.begin(), b.end());
      CHECK(as.size() == a.size());
      for (const auto& t : b) CHECK(as.count(t) == 1);
      std::set<Tuple> ce(c.begin(), c.end());
      for (const auto& t : e) CHECK(ce.insert(t).second);
      CHECK(ce == bs);
      for (const auto& t : enumerate(p, k, TupleClass::A)) CHECK(classical_coeff(t) > 0);
    }
}

TEST_CASE("tuple construction validates class") {
  CHECK_NOTHROW(ContractionTuple(2, 4, {0, 2, 2}, TupleClass::C));
  CHECK_THROWS_AS(ContractionTuple(2, 4, {2, 2, 0}, TupleClass::C), PreconditionError);
  CHECK_THROWS_AS(ContractionTuple(2, 4, {1, 1, 2}, TupleClass::C), PreconditionError);
  CHECK(classify(2, 4, {1, 1, 2}) == TupleClass::E);
  CHECK(classify(2, 4, {0, 0, 0}) == TupleClass::A);
  CHECK_THROWS_AS(classify(2, 4, {2, 2, 0}), PreconditionError);
  const ContractionTuple t(2, 4, {0, 2, 2}, TupleClass::C);
  CHECK(t.order_before(1) == 2);
  CHECK(t.order_before(2) == 4);
  CHECK(t.order_before(3) == 2);
  CHECK(parse_tuple_class("E") == TupleClass::E);
  CHECK_THROWS_AS(parse_tuple_class("D"), InputError);
}

TEST_CASE("catalan counts") {
  CHECK(catalan(0) == 1);
  const long expected[] = {1, 1, 2, 5, 14, 42, 132};
  for (unsigned n = 0; n < 7; ++n) CHECK(catalan(n) == expected[n]);
  for (int p = 2; p <= 5; ++p) {
    CHECK(count_c(p, 4) == 2);
    CHECK(count_c(p, 6) == 5);
  }
  for (int p = 1; p <= 5; ++p)
    for (int k = 2; k <= 10; ++k) CHECK(BigInt(static_cast<unsigned long>(count_c(p, k))) == semicircle_moment(k));
}

TEST_CASE("dyck checks") {
  CHECK(dyck_check(ContractionTuple(2, 4, {0, 2, 2}, TupleClass::C)));
  CHECK_THROWS_AS(dyck_check(ContractionTuple(2, 4, {1, 1, 2}, TupleClass::E)), PreconditionError);
  for (int p = 1; p <= 3; ++p)
    for (int k = 2; k <= 10; ++k) {
      for (const auto& t : enumerate(p, k, TupleClass::C)) CHECK(dyck_check(t));
      std::size_t weak = 0;
      for (std::uint32_t mask = 0; mask < (1U << (k - 1)); ++mask) weak += dyck_condition_weak(mask, k);
      CHECK(weak == count_c(p, k));
    }
  for (int k = 2; k <= 12; ++k)
    for (std::uint32_t mask = 0; mask < (1U << (k - 1)); ++mask)
      CHECK(dyck_condition_strong(mask, k) == dyck_condition_weak(mask, k));
}

TEST_CASE("classical coefficients") {
  CHECK(classical_coeff(ContractionTuple(1, 2, {1}, TupleClass::C)) == 1);
  CHECK(classical_coeff(ContractionTuple(2, 4, {0, 2, 2}, TupleClass::C)) == 24);
  CHECK(classical_coeff(ContractionTuple(3, 5, {0, 0, 0, 0}, TupleClass::A)) == 1);
  // r!C(p,r)C(order,r) factor by factor for (1,1,2) at p = 2: 1*2*2 * 1*2*2 * 2*1*1.
  CHECK(classical_coeff(ContractionTuple(2, 4, {1, 1, 2}, TupleClass::E)) == 32);
}

TEST_CASE("limit weights and values") {
  const ContractionTuple a(2, 4, {0, 2, 2}, TupleClass::C);
  const ContractionTuple b(2, 4, {2, 0, 2}, TupleClass::C);
  CHECK(limit_weight(a) == 2);
  CHECK(limit_weight(b) == 1);
  CHECK(limit_value(a) == Rational(1, 12));
  CHECK(limit_value(b) == Rational(1, 4));
  CHECK_THROWS_AS(limit_weight(ContractionTuple(2, 4, {1, 1, 2}, TupleClass::E)), PreconditionError);
  for (int p = 2; p <= 4; ++p)
    for (int k = 2; k <= 8; k += 2) {
      BigInt sum = 0;
      for (const auto& t : enumerate(p, k, TupleClass::C)) sum += limit_weight(t);
      CHECK(sum == testing_support::gaussian_power_moment(k));
    }
}

TEST_CASE("gaussian and semicircle moments") {
  CHECK(gaussian_moment(6) == 15);
  CHECK(semicircle_moment(8) == 14);
  for (unsigned k = 0; k <= 12; ++k) {
    CHECK(gaussian_moment(k) == testing_support::gaussian_power_moment(static_cast<int>(k)));
    CHECK(semicircle_moment(k) == testing_support::semicircle_power_moment(static_cast<int>(k)));
  }
}
