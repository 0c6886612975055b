#include "chaoskit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <variant>

#include "chaoskit/chaos.hpp"
#include "chaoskit/combinatorics.hpp"
#include "chaoskit/contractions.hpp"
#include "chaoskit/kernel_io.hpp"
#include "chaoskit/moments.hpp"
#include "chaoskit/random_kernel.hpp"

namespace chaoskit {

namespace {

class Suite {
 public:
  // `body` returns an empty string on success, otherwise what went wrong.
  void run(std::string name, const std::function<std::string()>& body) {
    try {
      std::string failure = body();
      const bool ok = failure.empty();
      results_.push_back({std::move(name), ok, ok ? "ok" : std::move(failure)});
    } catch (const std::exception& e) {
      results_.push_back({std::move(name), false, std::string("exception: ") + e.what()});
    }
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  std::vector<CheckResult> results_;
};

std::string str(const Rational& q) { return ScalarTraits<Rational>::to_string(q); }

GridKernel<double> to_float(const GridKernel<Rational>& f) {
  std::vector<double> coeffs;
  coeffs.reserve(f.size());
  for (const auto& c : f.coeffs()) coeffs.push_back(c.get_d());
  return {f.order(), f.resolution(), std::move(coeffs)};
}

double relative_error(double value, double target) { return std::abs(value - target) / std::max(std::abs(target), 1.0); }

struct Shape {
  int p;
  int m;
};

constexpr Shape kSmallShapes[] = {{1, 3}, {2, 2}, {2, 3}, {3, 2}};

std::string check_kernel_laws(std::mt19937_64& rng, int count) {
  for (int i = 0; i < count; ++i) {
    for (auto [p, m] : kSmallShapes) {
      const auto f = random_kernel<Rational>(p, m, KernelShape::plain, rng);
      const auto g = random_kernel<Rational>(p, m, KernelShape::plain, rng);
      const auto s = symmetrize(f);
      if (symmetrize(s) != s) return "symmetrize is not idempotent";
      if (s != reference::symmetrize(f)) return "parallel and reference symmetrization differ";
      if (adjoint(s) != s) return "a symmetric kernel is not mirror symmetric";
      if (l2_norm_sq(s) > l2_norm_sq(f)) return "symmetrization increased the norm";
      if (adjoint(adjoint(f)) != f) return "adjoint is not an involution";
      if (l2_norm_sq(adjoint(f)) != l2_norm_sq(f)) return "adjoint is not an isometry";
      if (l2_inner(refine(f, 2), refine(g, 2)) != l2_inner(f, g)) return "refine changed an inner product";
      if (l2_inner(f, g) != l2_inner(g, f)) return "inner product is not symmetric";
    }
  }
  return {};
}

std::string check_contractions(std::mt19937_64& rng, int count) {
  for (int i = 0; i < count; ++i) {
    for (auto [p, m] : kSmallShapes) {
      const int q = std::max(1, 4 - p);
      const auto f = random_kernel<Rational>(p, m, KernelShape::plain, rng);
      const auto g = random_kernel<Rational>(q, m, KernelShape::plain, rng);
      for (int r = 0; r <= std::min(p, q); ++r) {
        if (contract_classical(f, g, r) != reference::contract_classical(f, g, r))
          return "classical contraction r=" + std::to_string(r) + " differs from the reference";
        if (contract_free(f, g, r) != reference::contract_free(f, g, r))
          return "free contraction r=" + std::to_string(r) + " differs from the reference";
      }
    }
  }
  return {};
}

std::string check_catalan() {
  for (int p = 1; p <= 5; ++p)
    for (int k = 2; k <= 10; ++k) {
      const BigInt expected = k % 2 == 0 ? catalan(static_cast<unsigned>(k / 2)) : BigInt(0);
      if (BigInt(static_cast<unsigned long>(count_c(p, k))) != expected)
        return "count_c(" + std::to_string(p) + "," + std::to_string(k) + ") != " + expected.get_str();
    }
  return {};
}

std::string check_gaussian_weights() {
  for (int p = 2; p <= 4; ++p)
    for (int k : {4, 6, 8}) {
      BigInt total = 0;
      for (const auto& t : enumerate(p, k, TupleClass::C)) total += limit_weight(t);
      if (total != gaussian_moment(static_cast<unsigned>(k)))
        return "limit weights for p=" + std::to_string(p) + ", k=" + std::to_string(k) + " sum to " + total.get_str();
    }
  return {};
}

std::string check_dyck() {
  for (int k = 2; k <= 12; ++k) {
    std::size_t selected = 0;
    for (std::uint32_t mask = 0; mask < (1U << (k - 1)); ++mask) {
      const bool strong = dyck_condition_strong(mask, k);
      if (strong != dyck_condition_weak(mask, k))
        return "conditions disagree at k=" + std::to_string(k) + ", mask=" + std::to_string(mask);
      selected += strong ? 1 : 0;
    }
    const BigInt expected = k % 2 == 0 ? catalan(static_cast<unsigned>(k / 2)) : BigInt(0);
    if (BigInt(static_cast<unsigned long>(selected)) != expected)
      return "k=" + std::to_string(k) + " selects " + std::to_string(selected) + " sign sequences";
  }
  return {};
}

std::string check_classical_paths(std::mt19937_64& rng, int count) {
  for (int i = 0; i < count; ++i) {
    for (auto [p, m] : {Shape{1, 3}, Shape{2, 2}, Shape{3, 2}}) {
      const auto f = random_kernel<Rational>(p, m, KernelShape::symmetric, rng, 2, 2);
      for (int k = 1; k <= 4; ++k) {
        const Rational formula = classical_moment(f, k);
        const Rational expansion = moment_via_expansion(f, k, Model::classical);
        const Rational oracle = wick_oracle_moment(f, k);
        if (formula != expansion || formula != oracle)
          return "p=" + std::to_string(p) + ", k=" + std::to_string(k) + ": formula " + str(formula) +
                 ", expansion " + str(expansion) + ", oracle " + str(oracle);
      }
    }
  }
  return {};
}

std::string check_free_paths(std::mt19937_64& rng, int count) {
  for (int i = 0; i < count; ++i) {
    for (auto [p, m] : kSmallShapes) {
      const auto f = random_kernel<Rational>(p, m, KernelShape::mirror_symmetric, rng, 2, 2);
      for (int k = 1; k <= 4; ++k) {
        const Rational formula = free_moment(f, k);
        const Rational expansion = moment_via_expansion(f, k, Model::free);
        if (formula != expansion)
          return "p=" + std::to_string(p) + ", k=" + std::to_string(k) + ": formula " + str(formula) +
                 ", expansion " + str(expansion);
      }
    }
  }
  return {};
}

std::string check_fourth_identities(std::mt19937_64& rng, int count) {
  for (int i = 0; i < count; ++i) {
    for (int p : {2, 3}) {
      const auto g = random_kernel<Rational>(p, 2, KernelShape::symmetric, rng);
      const auto f = normalize_variance(g, Model::classical);
      const Rational lhs = classical_moment(f, 4);
      const Rational rhs = classical_fourth_identity(f);
      if (lhs != rhs) return "classical fourth moment " + str(lhs) + " vs identity " + str(rhs);
      const auto [square, sum] = tensor_square_identity(f);
      if (square != sum) return "tensor square identity " + str(square) + " vs " + str(sum);

      const auto h = unscaled(random_kernel<Rational>(p, 2, KernelShape::mirror_symmetric, rng));
      const Rational free_lhs = free_moment(h, 4);
      const Rational free_rhs = free_fourth_identity(h);
      if (free_lhs != free_rhs) return "free fourth moment " + str(free_lhs) + " vs identity " + str(free_rhs);
    }
  }
  return {};
}

std::string check_strategies(std::mt19937_64& rng, int count) {
  for (int i = 0; i < count; ++i) {
    for (auto [p, m] : {Shape{2, 2}, Shape{2, 3}, Shape{3, 2}}) {
      const auto sym = random_kernel<Rational>(p, m, KernelShape::symmetric, rng, 2, 2);
      const auto mir = random_kernel<Rational>(p, m, KernelShape::mirror_symmetric, rng, 2, 2);
      for (int k = 3; k <= 5; ++k) {
        if (classical_moment(sym, k, ChainStrategy::dense) != classical_moment(sym, k, ChainStrategy::network))
          return "classical dense and network chains differ at p=" + std::to_string(p) + ", k=" + std::to_string(k);
        if (free_moment(mir, k, ChainStrategy::dense) != free_moment(mir, k, ChainStrategy::network))
          return "free dense and network chains differ at p=" + std::to_string(p) + ", k=" + std::to_string(k);
      }
    }
  }
  return {};
}

std::string check_modes(const std::vector<KernelDocument<Rational>>& kernels) {
  for (const auto& doc : kernels) {
    const ScaledKernel<double> f{to_float(doc.kernel.base), doc.kernel.scale_sq.get_d()};
    for (int k = 1; k <= 6; ++k) {
      const double exact = chain_moment(doc.kernel, k, doc.model).get_d();
      const double approx = chain_moment(f, k, doc.model);
      if (relative_error(approx, exact) > 1e-9)
        return std::string(to_string(doc.model)) + " k=" + std::to_string(k) + ": rational " + std::to_string(exact) +
               " vs float " + std::to_string(approx);
    }
  }
  return {};
}

template <ChaosScalar T>
std::string check_fixture_value(const KernelDocument<T>& doc, int k, const nlohmann::json& expected) {
  const T value = chain_moment(doc.kernel, k, doc.model);
  if constexpr (is_exact_v<T>) {
    const Rational want = ScalarTraits<Rational>::parse(expected.is_string() ? expected.get<std::string>()
                                                                            : expected.dump());
    if (value != want) return "got " + str(value) + ", expected " + str(want);
  } else {
    const double want = expected.is_string() ? ScalarTraits<double>::parse(expected.get<std::string>())
                                             : expected.get<double>();
    if (relative_error(value, want) > 1e-12)
      return "got " + ScalarTraits<double>::to_string(value) + ", expected " + ScalarTraits<double>::to_string(want);
  }
  return {};
}

void run_fixture(Suite& suite, const std::string& name, const nlohmann::json& doc,
                 std::vector<KernelDocument<Rational>>& exact_kernels) {
  std::optional<AnyKernelDocument> loaded;
  try {
    loaded = parse_kernel_json(doc);
  } catch (const std::exception& e) {
    const std::string what = e.what();
    suite.run("fixture." + name + ".parse", [&] { return what; });
    return;
  }
  const AnyKernelDocument& parsed = *loaded;
  if (const auto* exact = std::get_if<KernelDocument<Rational>>(&parsed)) exact_kernels.push_back(*exact);
  const auto it = doc.find("expected_moments");
  if (it == doc.end() || !it->is_object()) {
    suite.run("fixture." + name + ".expected_moments", [] { return std::string("fixture lacks expected_moments"); });
    return;
  }
  for (const auto& [key, expected] : it->items()) {
    const int k = std::stoi(key);
    suite.run("fixture." + name + ".moment_k" + key,
              [&] { return std::visit([&](const auto& d) { return check_fixture_value(d, k, expected); }, parsed); });
  }
}

}  // namespace

std::vector<std::pair<std::string, std::string>> builtin_fixtures() {
  return {
      {"pair_classical",
       R"({"model":"classical","p":2,"m":2,"mode":"exact","coeffs":["0","1","1","0"],
           "expected_moments":{"1":"0","2":"1","3":"0","4":"9","6":"225"}})"},
      {"square_hermite_classical",
       R"({"model":"classical","p":2,"m":1,"mode":"exact","coeffs":["1"],
           "expected_moments":{"2":"2","3":"8","4":"60"}})"},
      {"gaussian_classical",
       R"({"model":"classical","p":1,"m":1,"mode":"exact","coeffs":["1"],
           "expected_moments":{"1":"0","2":"1","3":"0","4":"3","5":"0","6":"15","7":"0","8":"105"}})"},
      {"square_free",
       R"({"model":"free","p":2,"m":1,"mode":"exact","coeffs":["1"],
           "expected_moments":{"2":"1","3":"1","4":"3"}})"},
      {"pair_free_normalized",
       R"({"model":"free","p":2,"m":2,"mode":"exact","coeffs":["0","1","1","0"],"scale_sq":"2",
           "expected_moments":{"2":"1","4":"5/2"}})"},
      {"semicircle_free",
       R"({"model":"free","p":1,"m":1,"mode":"exact","coeffs":["1"],
           "expected_moments":{"1":"0","2":"1","4":"2","6":"5"}})"},
  };
}

std::vector<CheckResult> run_verify_suite(const VerifyOptions& options) {
  Suite suite;
  std::mt19937_64 rng(options.seed);
  const int n = options.random_kernels;

  suite.run("kernels.symmetry_adjoint_refine_laws", [&] { return check_kernel_laws(rng, n); });
  suite.run("contractions.parallel_matches_reference", [&] { return check_contractions(rng, n); });
  suite.run("combinatorics.catalan_count", check_catalan);
  suite.run("combinatorics.gaussian_weight_sum", check_gaussian_weights);
  suite.run("combinatorics.dyck_conditions_equivalent", check_dyck);
  suite.run("moments.classical_formula_expansion_oracle", [&] { return check_classical_paths(rng, n); });
  suite.run("moments.free_formula_expansion", [&] { return check_free_paths(rng, n); });
  suite.run("moments.fourth_moment_identities", [&] { return check_fourth_identities(rng, n); });
  suite.run("moments.dense_matches_network", [&] { return check_strategies(rng, std::max(1, n / 4)); });

  std::vector<KernelDocument<Rational>> exact_kernels;
  if (options.fixture_dir) {
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(*options.fixture_dir, ec))
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    if (ec) throw InputError("cannot read fixture directory " + *options.fixture_dir + ": " + ec.message());
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
      nlohmann::json doc;
      try {
        std::ifstream in(path);
        in >> doc;
      } catch (const std::exception& e) {
        const std::string what = e.what();
        suite.run("fixture." + path.stem().string() + ".parse", [&] { return what; });
        continue;
      }
      run_fixture(suite, path.stem().string(), doc, exact_kernels);
    }
  } else {
    for (const auto& [name, text] : builtin_fixtures())
      run_fixture(suite, name, nlohmann::json::parse(text), exact_kernels);
  }
  suite.run("modes.rational_matches_float", [&] { return check_modes(exact_kernels); });
  return suite.take();
}

}  // namespace chaoskit
