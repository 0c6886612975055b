#include <doctest.h>

#include <random>

#include "chaoskit/contractions.hpp"
#include "chaoskit/random_kernel.hpp"
#include "support.hpp"

using namespace chaoskit;
using testing_support::brute_contract;
using testing_support::kernel;
using testing_support::pair_kernel;
using testing_support::Q;

TEST_CASE("classical contraction examples") {
  const auto one = GridKernel<Rational>::ones(1, 1);
  CHECK(contract_classical(one, one, 1).scalar() == 1);
  const auto pp = contract_classical(pair_kernel(), pair_kernel(), 1);
  CHECK(pp == kernel(2, 2, {"1/2", "0", "0", "1/2"}));
  CHECK(pp == brute_contract(pair_kernel(), pair_kernel(), 1, false));
  const auto f = kernel(2, 2, {"1", "2", "0", "-1"});
  const auto g = kernel(1, 2, {"3", "1/2"});
  const auto t = contract_classical(f, g, 0);
  CHECK(t.order() == 3);
  CHECK(l2_norm_sq(t) == l2_norm_sq(f) * l2_norm_sq(g));
  CHECK(contract_classical(f, f, 2).scalar() == l2_norm_sq(f));
}

TEST_CASE("symmetrized classical contraction examples") {
  CHECK(contract_classical_sym(pair_kernel(), pair_kernel(), 1) == kernel(2, 2, {"1/2", "0", "0", "1/2"}));
  const auto f = kernel(2, 2, {"1", "2", "0", "-1"});
  CHECK(contract_classical_sym(f, f, 2) == contract_classical(f, f, 2));
  const auto e1 = kernel(1, 2, {"1", "0"});
  const auto e2 = kernel(1, 2, {"0", "1"});
  CHECK(contract_classical(e1, e2, 0) == kernel(2, 2, {"0", "1", "0", "0"}));
  CHECK(contract_classical_sym(e1, e2, 0) == kernel(2, 2, {"0", "1/2", "1/2", "0"}));
}

TEST_CASE("free contraction examples") {
  const auto fd = GridKernel<double>(2, 2, {0, std::sqrt(2.0), std::sqrt(2.0), 0});
  const auto c = contract_free(fd, fd, 1);
  const std::vector<double> expect{1, 0, 0, 1};
  for (std::size_t i = 0; i < 4; ++i) CHECK(c[i] == doctest::Approx(expect[i]));
  // Exact version: pair kernel scaled by 2 then divided by the squared scale.
  CHECK(contract_free(pair_kernel(), pair_kernel(), 1).scaled(Q("2")) == kernel(2, 2, {"1", "0", "0", "1"}));
  const auto unit = normalize_variance(kernel(3, 2, {"1", "0", "2", "0", "0", "2", "0", "1"}), Model::free);
  CHECK(contract_free(unit.base, unit.base, 3).scalar() * unit.scale_sq == 1);
  // Reversal: contracted slots of g come first, in reverse order.
  const auto f = kernel(2, 2, {"1", "2", "3", "4"});
  const auto g = kernel(2, 2, {"5", "6", "7", "8"});
  CHECK(contract_free(f, g, 2).scalar() == l2_inner(f, adjoint(g)));
  CHECK(contract_free(f, g, 1) == brute_contract(f, g, 1, true));
  CHECK(contract_free(f, g, 0) == contract_classical(f, g, 0));
}

TEST_CASE("contraction argument checks") {
  const auto f = pair_kernel();
  CHECK_THROWS_AS(contract_classical(f, f, 3), InputError);
  CHECK_THROWS_AS(contract_free(f, f, -1), InputError);
  CHECK_THROWS_AS(contract_classical(f, GridKernel<Rational>::ones(2, 3), 1), InputError);
  CHECK_THROWS_AS(contract_free(f, GridKernel<Rational>::ones(1, 3), 1), InputError);
  const auto saved = entry_budget();
  set_entry_budget(20);
  CHECK_THROWS_AS(contract_classical(GridKernel<Rational>::ones(2, 3), GridKernel<Rational>::ones(2, 3), 0),
                  BudgetError);
  set_entry_budget(saved);
}

TEST_CASE("constant kernels contract to constants") {
  for (int p = 1; p <= 3; ++p)
    for (int q = 1; q <= 3; ++q)
      for (int r = 0; r <= std::min(p, q); ++r)
        CHECK(contract_free(GridKernel<Rational>::ones(p, 2), GridKernel<Rational>::ones(q, 2), r) ==
              GridKernel<Rational>::ones(p + q - 2 * r, 2));
}

TEST_CASE("contractions against brute force and the serial reference") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = 1 + trial % 3, q = 1 + (trial / 3) % 3, m = 2 + trial % 2;
    const auto f = random_kernel<Rational>(p, m, KernelShape::plain, rng);
    const auto g = random_kernel<Rational>(q, m, KernelShape::plain, rng);
    for (int r = 0; r <= std::min(p, q); ++r) {
      const auto c = contract_classical(f, g, r);
      const auto fr = contract_free(f, g, r);
      CHECK(c == brute_contract(f, g, r, false));
      CHECK(fr == brute_contract(f, g, r, true));
      CHECK(c == reference::contract_classical(f, g, r));
      CHECK(fr == reference::contract_free(f, g, r));
      const Rational bound = l2_norm_sq(f) * l2_norm_sq(g);
      CHECK(l2_norm_sq(c) <= bound);
      CHECK(l2_norm_sq(fr) <= bound);
      if (r == 0) {
        CHECK(l2_norm_sq(c) == bound);
        CHECK(l2_norm_sq(fr) == bound);
      }
      CHECK(l2_norm_sq(contract_classical_sym(f, g, r)) <= l2_norm_sq(c));
    }
  }
}

TEST_CASE("free self-contractions of mirror-symmetric kernels are mirror symmetric") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 2 + trial % 2, m = 2 + (trial / 2) % 2;
    const auto f = random_kernel<Rational>(p, m, KernelShape::mirror_symmetric, rng);
    for (int r = 0; r <= p; ++r) CHECK(is_mirror_symmetric(contract_free(f, f, r)));
  }
}

TEST_CASE("free and classical contractions agree on symmetric kernels") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 12; ++trial) {
    const int p = 1 + trial % 3;
    const auto f = random_kernel<Rational>(p, 2, KernelShape::symmetric, rng);
    for (int r = 0; r <= p; ++r) CHECK(contract_free(f, f, r) == contract_classical(f, f, r));
  }
}

TEST_CASE("float contractions match exact ones") {
  std::mt19937_64 rng(17);
  const auto f = random_kernel<Rational>(3, 3, KernelShape::plain, rng);
  const auto g = random_kernel<Rational>(2, 3, KernelShape::plain, rng);
  auto to_double = [](const GridKernel<Rational>& k) {
    std::vector<double> v;
    for (const auto& c : k.coeffs()) v.push_back(c.get_d());
    return GridKernel<double>(k.order(), k.resolution(), v);
  };
  const auto exact = contract_free(f, g, 2);
  const auto fl = contract_free(to_double(f), to_double(g), 2);
  for (std::size_t i = 0; i < exact.size(); ++i) CHECK(fl[i] == doctest::Approx(exact[i].get_d()).epsilon(1e-12));
}

TEST_CASE("memo cache computes once per key") {
  MemoCache<int, int> cache;
  int calls = 0;
  auto compute = [&] { return ++calls * 10; };
  CHECK(*cache.get_or_compute(1, compute) == 10);
  CHECK(*cache.get_or_compute(1, compute) == 10);
  CHECK(*cache.get_or_compute(2, compute) == 20);
  CHECK(cache.size() == 2);
  CHECK(cache.hits() == 1);
}
