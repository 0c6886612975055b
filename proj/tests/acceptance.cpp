// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chaoskit/chaos.hpp"
#include "chaoskit/combinatorics.hpp"
#include "chaoskit/moments.hpp"
#include "chaoskit/random_kernel.hpp"
#include "chaoskit/simulate.hpp"
#include "support.hpp"

using namespace chaoskit;
namespace ts = testing_support;

namespace {

struct Outcome {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& what) { notes.push_back(what); }
  bool passed() const { return failures.empty(); }

  std::string summary() const {
    std::string out;
    for (const auto* list : {&failures, &notes})
      for (const auto& s : *list) out += (out.empty() ? "" : "; ") + s;
    return out;
  }
};

GridKernel<double> to_double(const ScaledKernel<Rational>& f) {
  std::vector<double> v;
  const double s = std::sqrt(f.scale_sq.get_d());
  for (const auto& c : f.base.coeffs()) v.push_back(c.get_d() * s);
  return {f.base.order(), f.base.resolution(), std::move(v)};
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

long centered_chi_square_moment(int k) {
  long s = 0;
  for (int j = 0; j <= k; ++j)
    s += ts::choose(k, j) * ((k - j) % 2 ? -1 : 1) * ts::gaussian_power_moment(2 * j);
  return s;
}

// 1. count_C(p, k) = Cat_{k/2}, and 0 for odd k.
void catalan_identity(Outcome& out) {
  int checked = 0;
  for (int p = 1; p <= 5; ++p) {
    for (int k : {4, 6, 8, 10}) {
      const long want = ts::semicircle_power_moment(k);
      const auto got = count_c(p, k);
      out.require(static_cast<long>(got) == want && catalan(static_cast<unsigned>(k / 2)) == want,
                  "p=" + std::to_string(p) + " k=" + std::to_string(k) + " count " + std::to_string(got));
      ++checked;
    }
    for (int k : {3, 5, 7, 9}) {
      out.require(count_c(p, k) == 0, "odd k=" + std::to_string(k) + " nonempty at p=" + std::to_string(p));
      ++checked;
    }
  }
  out.note(std::to_string(checked) + " (p,k) pairs; counts 2,5,14,42 and 0 for odd k");
}

// 2. Sum of limit weights over C_k = (k-1)!!.
void gaussian_identity(Outcome& out) {
  for (int p = 2; p <= 4; ++p)
    for (int k : {4, 6, 8}) {
      BigInt sum = 0;
      for (const auto& t : enumerate(p, k, TupleClass::C)) sum += limit_weight(t);
      out.require(sum == ts::gaussian_power_moment(k),
                  "p=" + std::to_string(p) + " k=" + std::to_string(k) + " sum " + sum.get_str());
    }
  out.note("sums 3,15,105 for p=2,3,4");
}

// 3. Strong and weak Dyck conditions select the same sign vectors.
void dyck_equivalence(Outcome& out) {
  std::size_t vectors = 0;
  for (int k = 2; k <= 12; ++k)
    for (std::uint32_t mask = 0; mask < (1U << (k - 1)); ++mask) {
      ++vectors;
      if (dyck_condition_strong(mask, k) != dyck_condition_weak(mask, k)) {
        out.require(false, "k=" + std::to_string(k) + " mask=" + std::to_string(mask));
        return;
      }
    }
  out.note(std::to_string(vectors) + " sign vectors for k<=12");
}

// 4. Fourth-moment identities on random kernels, exactly.
void fourth_identities(Outcome& out) {
  std::mt19937_64 rng(4004);
  int classical = 0, free = 0;
  for (int i = 0; i < 50; ++i) {
    const int p = 2 + i % 2, m = 2 + (i / 2) % 2;
    const auto f = normalize_variance(random_kernel<Rational>(p, m, KernelShape::symmetric, rng), Model::classical);
    const auto [lhs, rhs] = tensor_square_identity(f);
    const bool ok = classical_moment(f, 4) == classical_fourth_identity(f) && lhs == rhs;
    out.require(ok, "classical kernel " + std::to_string(i) + " p=" + std::to_string(p) + " m=" + std::to_string(m));
    classical += ok;
  }
  for (int i = 0; i < 50; ++i) {
    const int p = 2 + i % 2, m = 2 + (i / 2) % 2;
    const auto g = random_kernel<Rational>(p, m, KernelShape::mirror_symmetric, rng);
    bool ok = free_moment(g, 4) == free_fourth_identity(unscaled(g));
    if (chaos_variance(g, Model::free) > 0) {
      const auto f = normalize_variance(g, Model::free);
      ok = ok && free_moment(f, 4) == free_fourth_identity(f);
    }
    out.require(ok, "free kernel " + std::to_string(i) + " p=" + std::to_string(p) + " m=" + std::to_string(m));
    free += ok;
  }
  out.note(std::to_string(classical) + "/50 classical kernels (moment and tensor-square identity), " + std::to_string(free) +
           "/50 free kernels");
}

// 5. Formula, product-formula expansion and Wick oracle agree exactly.
void oracle_equivalence(Outcome& out) {
  std::mt19937_64 rng(5005);
  struct Fixture {
    std::string name;
    GridKernel<Rational> f;
    int k_max;
  };
  const std::vector<Fixture> fixtures{
      {"pair", ts::pair_kernel(), 6},
      {"ones(2,1)", GridKernel<Rational>::ones(2, 1), 6},
      {"ones(1,1)", GridKernel<Rational>::ones(1, 1), 8},
      {"ones(3,2)", GridKernel<Rational>::ones(3, 2), 6},
      {"random p2 m3", random_kernel<Rational>(2, 3, KernelShape::symmetric, rng, 2, 2), 6},
      {"random p3 m2", random_kernel<Rational>(3, 2, KernelShape::symmetric, rng, 2, 2), 6},
  };
  int agreements = 0;
  for (const auto& fx : fixtures)
    for (int k = 1; k <= fx.k_max; ++k) {
      const auto formula = classical_moment(fx.f, k);
      const bool ok = formula == moment_via_expansion(fx.f, k, Model::classical) && formula == wick_oracle_moment(fx.f, k);
      out.require(ok, fx.name + " k=" + std::to_string(k));
      agreements += ok;
    }
  out.require(classical_moment(ts::pair_kernel(), 4) == 9, "pair k=4 != 9");
  out.require(classical_moment(GridKernel<Rational>::ones(2, 1), 4) == centered_chi_square_moment(4), "ones(2,1) k=4 != 60");
  for (int k = 1; k <= 8; ++k)
    out.require(classical_moment(GridKernel<Rational>::ones(1, 1), k) == ts::gaussian_power_moment(k),
                "ones(1,1) k=" + std::to_string(k));
  out.note(std::to_string(agreements) + " (kernel,k) cases agree on three paths; pair k4=9, ones(2,1) k4=60, ones(1,1) k<=8 = (k-1)!!");
}

// 6. Free formula against the free product-formula expansion.
void free_cross_path(Outcome& out) {
  std::mt19937_64 rng(6006);
  const std::vector<std::pair<std::string, ScaledKernel<Rational>>> fixtures{
      {"ones(1,1)", unscaled(GridKernel<Rational>::ones(1, 1))},
      {"ones(2,1)", unscaled(GridKernel<Rational>::ones(2, 1))},
      {"normalized pair", normalize_variance(ts::pair_kernel(), Model::free)},
      {"random p2 m3", unscaled(random_kernel<Rational>(2, 3, KernelShape::mirror_symmetric, rng, 2, 2))},
      {"random p3 m2", unscaled(random_kernel<Rational>(3, 2, KernelShape::mirror_symmetric, rng, 2, 2))},
  };
  int agreements = 0;
  for (const auto& [name, f] : fixtures)
    for (int k = 1; k <= 6; ++k) {
      const bool ok = free_moment(f, k) == moment_via_expansion(f, k, Model::free);
      out.require(ok, name + " k=" + std::to_string(k));
      agreements += ok;
    }
  out.require(free_moment(GridKernel<Rational>::ones(2, 1), 4) == 3, "free ones(2,1) k=4 != 3");
  for (int k : {2, 4, 6})
    out.require(free_moment(GridKernel<Rational>::ones(1, 1), k) == ts::semicircle_power_moment(k),
                "free ones(1,1) k=" + std::to_string(k));
  out.note(std::to_string(agreements) + " (kernel,k) cases agree; ones(2,1) k4=3; semicircle 1,2,5");
}

// 7. Classical Monte Carlo within 4 standard errors.
void classical_mc(Outcome& out) {
  SampleConfig cfg;
  cfg.seed = 20240601;
  cfg.n_samples = 1'000'000;
  const std::vector<std::pair<std::string, ScaledKernel<Rational>>> kernels{
      {"pair", unscaled(ts::pair_kernel())},
      {"pair_clt(4)", family_kernel<Rational>(Family::pair_clt, 4, Model::classical)},
  };
  for (const auto& [name, f] : kernels) {
    const double exact = classical_moment(f, 4).get_d();
    const auto rep = mc_classical_moment(to_double(f), 4, cfg);
    const double z = (rep.value() - exact) / *rep.std_error();
    out.require(std::abs(z) <= 4, name + " |z| > 4");
    out.note(name + " " + fmt(rep.value(), 6) + " vs " + fmt(exact, 6) + " (z=" + fmt(z, 3) + ")");
  }
}

// 8. GUE bias for the normalized pair kernel shrinks with N.
void free_gue(Outcome& out) {
  const GridKernel<double> f(2, 2, {0, std::sqrt(2.0), std::sqrt(2.0), 0});
  const std::vector<std::pair<int, int>> plan{{50, 8000}, {100, 8000}, {200, 4000}};
  std::vector<double> bias;
  std::ostringstream summary;
  for (const auto& [n, draws] : plan) {
    SampleConfig cfg;
    cfg.seed = 8008;
    cfg.n_samples = draws;
    cfg.matrix_dim = n;
    cfg.control_variates = true;
    const auto rep = mc_free_moment(f, 4, cfg);
    bias.push_back(std::abs(rep.value() - 2.5));
    summary << (summary.str().empty() ? "" : ", ") << "N=" << n << " " << fmt(rep.value(), 6) << "+-" << fmt(*rep.std_error(), 2);
  }
  out.require(bias[0] > bias[1] && bias[1] > bias[2], "|bias| not shrinking");
  out.require(bias[2] < 0.05, "final |bias| " + fmt(bias[2]));
  out.note(summary.str());
}

double loglog_slope(const std::vector<int>& ns, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double x = std::log(ns[i]), y = std::log(ys[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// 9. Convergence of pair_clt(n) towards the Gaussian and semicircle laws.
void convergence_trend(Outcome& out) {
  const std::vector<int> ns{1, 2, 4, 8, 16, 32};
  for (auto model : {Model::free, Model::classical}) {
    const std::string tag = to_string(model);
    const auto rows = convergence_report<Rational>(Family::pair_clt, ns, 8, model);
    std::vector<double> gaps, profile;
    std::map<int, double> rel;
    for (const auto& row : rows) {
      if (row.k == 4) {
        gaps.push_back(row.gap.get_d());
        profile.push_back(row.profile.at(0).get_d());
      }
      if (row.n == ns.back()) rel[row.k] = ts::rel_err(row.moment.get_d(), row.target.get_d());
    }
    bool positive = true, decreasing = true;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      positive = positive && gaps[i] > 0;
      if (i) decreasing = decreasing && gaps[i] < gaps[i - 1];
    }
    out.require(positive && decreasing, tag + " gap not positive and decreasing");
    out.require(gaps.back() < 0.1, tag + " gap(32)=" + fmt(gaps.back()) + " >= 0.1");
    double worst = 0;
    int worst_k = 0;
    for (int k : {3, 5, 6, 8})
      if (rel[k] >= worst) {
        worst = rel[k];
        worst_k = k;
      }
    out.require(worst < 0.15, tag + " rel err k=" + std::to_string(worst_k) + " " + fmt(worst) + " >= 0.15");
    const double slope = loglog_slope(ns, profile);
    out.require(std::abs(slope + 1) <= 0.1, tag + " profile slope " + fmt(slope));
    out.note(tag + " gap(32)=" + fmt(gaps.back()) + " max rel err " + fmt(worst) + " (k=" + std::to_string(worst_k) +
             ") profile slope " + fmt(slope));
  }
}

// 10. C_k columns: free partial sums are count_C; classical chains approach their limits.
void ck_columns(Outcome& out) {
  const std::vector<int> ns{1, 2, 4, 8, 16, 32};
  for (const auto& row : convergence_report<Rational>(Family::pair_clt, ns, 8, Model::free))
    out.require(row.c_sum == static_cast<unsigned long>(count_c(2, row.k)),
                "free n=" + std::to_string(row.n) + " k=" + std::to_string(row.k) + " c_sum " + row.c_sum.get_str());
  std::map<std::vector<int>, std::vector<double>> errors;
  for (int n : ns) {
    const auto f = family_kernel<Rational>(Family::pair_clt, n, Model::classical);
    for (int k : {4, 6, 8})
      for (const auto& t : chain_terms(f, k, Model::classical))
        if (t.tuple.tuple_class() == TupleClass::C)
          errors[t.tuple.r()].push_back(std::abs(Rational(t.chain_value - limit_value(t.tuple)).get_d()));
  }
  int tuples = 0;
  for (const auto& [r, errs] : errors) {
    bool ok = true;
    for (std::size_t i = 1; i < errs.size(); ++i) ok = ok && (errs[i] == 0 || errs[i] < errs[i - 1]);
    std::string name;
    for (int x : r) name += std::to_string(x);
    out.require(ok, "classical tuple " + name + " error not decreasing");
    ++tuples;
  }
  out.note("free c_sum = count_C for n<=32, k<=8; " + std::to_string(tuples) + " classical C_k tuples checked over n<=32");
}

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "catalan identity", 1, catalan_identity},
      {2, "gaussian-moment identity", 1, gaussian_identity},
      {3, "dyck equivalence", 5, dyck_equivalence},
      {4, "fourth-moment identities", 30, fourth_identities},
      {5, "oracle equivalence", 120, oracle_equivalence},
      {6, "free formula cross-path", 60, free_cross_path},
      {7, "classical monte carlo", 60, classical_mc},
      {8, "free GUE monte carlo", 300, free_gue},
      {9, "convergence trend", 300, convergence_trend},
      {10, "C_k columns", 120, ck_columns},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.require(secs < c.limit_seconds, "took " + fmt(secs, 3) + " s, limit " + fmt(c.limit_seconds) + " s");
    failures += !out.passed();
    std::printf("%s %2d %s: %s [%.2f s]\n", out.passed() ? "PASS" : "FAIL", c.id, c.title, out.summary().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
