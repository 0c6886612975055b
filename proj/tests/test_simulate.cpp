#include <doctest.h>

#include <cmath>
#include <random>

#include "chaoskit/moments.hpp"
#include "chaoskit/parallel.hpp"
#include "chaoskit/random_kernel.hpp"
#include "chaoskit/simulate.hpp"
#include "support.hpp"

using namespace chaoskit;

namespace {

GridKernel<double> to_double(const GridKernel<Rational>& f) {
  std::vector<double> v;
  for (const auto& c : f.coeffs()) v.push_back(c.get_d());
  return {f.order(), f.resolution(), std::move(v)};
}

GridKernel<double> to_double(const ScaledKernel<Rational>& f) {
  return to_double(f.base).scaled(std::sqrt(f.scale_sq.get_d()));
}

double hermite(int n, double x) {
  double a = 1, b = x;
  if (n == 0) return a;
  for (int j = 1; j < n; ++j) {
    const double c = x * b - j * a;
    a = b;
    b = c;
  }
  return b;
}

// Sum over ordered cell tuples of a_I m^{-p/2} prod He_{mult}(xi).
double hermite_oracle(const GridKernel<double>& f, const std::vector<double>& xi) {
  const int p = f.order(), m = f.resolution();
  double total = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<int> mult(static_cast<std::size_t>(m), 0);
    for (int d : testing_support::digits_of(i, m, p)) ++mult[static_cast<std::size_t>(d)];
    double term = f[i] * std::pow(m, -0.5 * p);
    for (int c = 0; c < m; ++c) term *= hermite(mult[static_cast<std::size_t>(c)], xi[static_cast<std::size_t>(c)]);
    total += term;
  }
  return total;
}

bool within(const MomentReport<double>& r, double target, double sigmas, double slack = 0) {
  return std::abs(r.value() - target) <= sigmas * *r.std_error() + slack;
}

}  // namespace

TEST_CASE("rng streams") {
  SplitMix64 a(sample_seed(42, 7)), b(sample_seed(42, 7)), c(sample_seed(42, 8));
  CHECK(a() == b());
  CHECK(a() != c());
  CHECK(sample_seed(1, 0) != sample_seed(2, 0));
  SplitMix64 rng(99);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = standard_normal(rng);
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 4 / std::sqrt(n));
  CHECK(std::abs(sq / n - 1) < 4 * std::sqrt(2.0 / n));
}

TEST_CASE("classical sampler follows the Hermite rule") {
  const ClassicalSampler square(GridKernel<double>::ones(2, 1));
  for (double x : {-1.5, 0.0, 0.3, 2.0}) CHECK(square.evaluate(std::vector<double>{x}) == doctest::Approx(x * x - 1));
  std::mt19937_64 rng(12);
  SplitMix64 normals(5);
  for (int trial = 0; trial < 8; ++trial) {
    const int p = 1 + trial % 3, m = 2 + trial % 2;
    const auto f = to_double(random_kernel<Rational>(p, m, KernelShape::symmetric, rng));
    std::vector<double> xi;
    for (int i = 0; i < m; ++i) xi.push_back(standard_normal(normals));
    CHECK(ClassicalSampler(f).evaluate(xi) == doctest::Approx(hermite_oracle(f, xi)).epsilon(1e-12));
    const auto off = off_diagonal_part(f);
    double plain = 0;
    for (std::size_t i = 0; i < off.size(); ++i) {
      double term = off[i];
      for (int d : testing_support::digits_of(i, m, p)) term *= xi[static_cast<std::size_t>(d)] / std::sqrt(m);
      plain += term;
    }
    CHECK(ClassicalSampler(off).evaluate(xi) == doctest::Approx(plain).epsilon(1e-12));
  }
  CHECK_THROWS_AS(square.evaluate(std::vector<double>{1.0, 2.0}), InputError);
}

TEST_CASE("classical Monte Carlo matches exact moments") {
  SampleConfig cfg;
  cfg.seed = 2024;
  cfg.n_samples = 200000;
  CHECK(within(mc_classical_moment(GridKernel<double>::ones(1, 1), 4, cfg), 3, 4));
  CHECK(within(mc_classical_moment(GridKernel<double>::ones(1, 1), 2, cfg), 1, 4));
  CHECK(within(mc_classical_moment(GridKernel<double>::ones(2, 1), 4, cfg), 60, 4));
  const auto clt = family_kernel<Rational>(Family::pair_clt, 16, Model::classical);
  const double exact = classical_moment(clt, 4).get_d();
  CHECK(within(mc_classical_moment(to_double(clt), 4, cfg), exact, 4));
  const auto rep = mc_classical_moment(GridKernel<double>::ones(1, 1), 4, cfg);
  CHECK(rep.path() == MomentPath::simulation);
  cfg.n_samples = 0;
  CHECK_THROWS_AS(mc_classical_moment(GridKernel<double>::ones(1, 1), 4, cfg), InputError);
}

TEST_CASE("classical Monte Carlo is reproducible") {
  SampleConfig cfg;
  cfg.seed = 77;
  cfg.n_samples = 30001;
  const GridKernel<double> pair(2, 2, {0, 1, 1, 0});
  const auto a = mc_classical_moment(pair, 4, cfg);
  const auto b = mc_classical_moment(pair, 4, cfg);
  CHECK(a.value() == b.value());
  CHECK(*a.std_error() == *b.std_error());
  const auto serial = reference::mc_classical_moment(pair, 4, cfg);
  CHECK(serial.value() == a.value());
  CHECK(*serial.std_error() == *a.std_error());
  const int saved = thread_limit();
  set_thread_limit(3);
  const auto c = mc_classical_moment(pair, 4, cfg);
  set_thread_limit(saved);
  CHECK(c.value() == a.value());
  cfg.seed = 78;
  CHECK(mc_classical_moment(pair, 4, cfg).value() != a.value());
}

TEST_CASE("GUE draws of a single increment follow the semicircle") {
  SampleConfig cfg;
  cfg.seed = 9;
  cfg.n_samples = 200;
  cfg.matrix_dim = 100;
  const auto one = GridKernel<double>::ones(1, 1);
  for (int k : {2, 4, 6}) {
    const double target = static_cast<double>(testing_support::semicircle_power_moment(k));
    CHECK(within(mc_free_moment(one, k, cfg), target, 4, 5.0 * k / (cfg.matrix_dim * cfg.matrix_dim)));
  }
  SplitMix64 rng(sample_seed(3, 0));
  const auto draw = sample_free_gue(one, 60, 6, rng);
  REQUIRE(draw.size() == 6);
  CHECK(std::abs(draw[0]) < 0.1);
  CHECK(draw[1] > 0);
  CHECK(draw[3] > 0);
  CHECK(draw[5] > 0);
}

TEST_CASE("GUE estimates of the normalized pair kernel") {
  const GridKernel<double> pair(2, 2, {0, std::sqrt(2.0), std::sqrt(2.0), 0});
  SampleConfig cfg;
  cfg.seed = 31;
  cfg.n_samples = 300;
  cfg.matrix_dim = 50;
  const auto plain = mc_free_moment(pair, 4, cfg);
  CHECK(within(plain, 2.5, 4, 0.05));
  cfg.control_variates = true;
  const auto cv = mc_free_moment(pair, 4, cfg);
  CHECK(within(cv, 2.5, 4, 0.05));
  CHECK(*cv.std_error() < *plain.std_error());
  CHECK(mc_free_moment(pair, 4, cfg).value() == cv.value());
  SplitMix64 rng(1);
  const auto draw = sample_free_gue(pair, 40, 4, rng);
  CHECK(draw[1] >= 0);
  CHECK(draw[3] >= 0);
}

TEST_CASE("GUE estimate of a refined constant kernel") {
  const auto off = off_diagonal_part(refine(GridKernel<Rational>::ones(2, 1), 8));
  const double exact = free_moment(off, 4).get_d();
  SampleConfig cfg;
  cfg.seed = 4;
  cfg.n_samples = 60;
  cfg.matrix_dim = 60;
  CHECK(within(mc_free_moment(to_double(off), 4, cfg), exact, 4, 0.05));
}

TEST_CASE("GUE sampling rejects unsupported kernels") {
  SplitMix64 rng(1);
  CHECK_THROWS_AS(sample_free_gue(GridKernel<double>(2, 2, {0, 1, 0, 0}), 10, 4, rng), PreconditionError);
  CHECK_THROWS_AS(sample_free_gue(GridKernel<double>::ones(2, 1), 10, 4, rng), PreconditionError);
  CHECK_THROWS_AS(sample_free_gue(GridKernel<double>::ones(1, 1), 1, 4, rng), InputError);
  SampleConfig cfg;
  cfg.n_samples = 50;
  cfg.matrix_dim = 10;
  cfg.control_variates = true;
  CHECK_THROWS_AS(mc_free_moment(off_diagonal_part(GridKernel<double>::ones(2, 5)), 4, cfg), InputError);
}
