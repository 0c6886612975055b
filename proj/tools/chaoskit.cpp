#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "chaoskit/chaos.hpp"
#include "chaoskit/combinatorics.hpp"
#include "chaoskit/kernel_io.hpp"
#include "chaoskit/manifest.hpp"
#include "chaoskit/moments.hpp"
#include "chaoskit/parallel.hpp"
#include "chaoskit/simulate.hpp"
#include "chaoskit/verify.hpp"

using namespace chaoskit;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kInput = 2, kBudget = 3, kPrecondition = 4, kVerifyFailed = 5 };

struct KernelArgs {
  std::string file;
  std::string family;
  int n = 0;
  int p = 0;
  std::string model;
  std::string mode;
};

struct GlobalArgs {
  bool json = false;
  std::string output;
  int threads = 0;
  std::size_t budget = 0;
};

void add_kernel_options(CLI::App* cmd, KernelArgs& k) {
  cmd->add_option("kernel", k.file, "Kernel JSON file");
  cmd->add_option("--family", k.family, "Built-in family instead of a file")
      ->check(CLI::IsMember({"pair_clt", "constant_hermite"}));
  cmd->add_option("--n", k.n, "pair_clt parameter")->check(CLI::PositiveNumber);
  cmd->add_option("--p", k.p, "constant_hermite order")->check(CLI::NonNegativeNumber);
  cmd->add_option("--model", k.model, "classical or free (defaults to the file's model)")
      ->check(CLI::IsMember({"classical", "free"}));
  cmd->add_option("--mode", k.mode, "exact or float (defaults to the file's mode, exact for families)")
      ->check(CLI::IsMember({"exact", "float"}));
}

template <ChaosScalar To, ChaosScalar From>
KernelDocument<To> convert(const KernelDocument<From>& doc) {
  if constexpr (std::is_same_v<To, From>) {
    return doc;
  } else {
    auto cast = [](const From& v) {
      if constexpr (is_exact_v<To>)
        return Rational(v);
      else
        return ScalarTraits<From>::to_double(v);
    };
    std::vector<To> coeffs;
    for (const auto& c : doc.kernel.base.coeffs()) coeffs.push_back(cast(c));
    return {doc.model,
            {GridKernel<To>(doc.kernel.base.order(), doc.kernel.base.resolution(), std::move(coeffs)),
             cast(doc.kernel.scale_sq)}};
  }
}

struct LoadedKernel {
  AnyKernelDocument doc;
  std::string source;
};

LoadedKernel load_kernel(const KernelArgs& args) {
  if (!args.file.empty() && !args.family.empty()) throw InputError("give either a kernel file or --family, not both");
  if (args.file.empty() && args.family.empty()) throw InputError("a kernel file or --family is required");
  if (!args.file.empty()) {
    AnyKernelDocument doc = read_kernel_file(args.file);
    if (!args.model.empty()) {
      const Model m = parse_model(args.model);
      std::visit([&](auto& d) { d.model = m; }, doc);
    }
    if (args.mode == "exact") doc = std::visit([](const auto& d) -> AnyKernelDocument { return convert<Rational>(d); }, doc);
    if (args.mode == "float") doc = std::visit([](const auto& d) -> AnyKernelDocument { return convert<double>(d); }, doc);
    return {std::move(doc), args.file};
  }
  if (args.model.empty()) throw InputError("--model is required with --family");
  const Family family = parse_family(args.family);
  const Model model = parse_model(args.model);
  const int parameter = family == Family::pair_clt ? args.n : args.p;
  if (family == Family::pair_clt && args.n < 1) throw InputError("pair_clt needs --n >= 1");
  if (family == Family::constant_hermite && args.p < 1) throw InputError("constant_hermite needs --p >= 1");
  const std::string source = "family:" + args.family + ":" + std::to_string(parameter);
  if (args.mode == "float")
    return {KernelDocument<double>{model, family_kernel<double>(family, parameter, model)}, source};
  return {KernelDocument<Rational>{model, family_kernel<Rational>(family, parameter, model)}, source};
}

std::string mode_name(const AnyKernelDocument& doc) {
  return std::holds_alternative<KernelDocument<Rational>>(doc) ? "exact" : "float";
}

Model model_of(const AnyKernelDocument& doc) {
  return std::visit([](const auto& d) { return d.model; }, doc);
}

template <ChaosScalar T>
json value_json(const T& v) {
  return scalar_to_json(v);
}

template <ChaosScalar T>
double approx(const T& v) {
  return ScalarTraits<T>::to_double(v);
}

template <ChaosScalar T>
std::string cell(const T& v) {
  return ScalarTraits<T>::to_string(v);
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InputError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void emit_json(const GlobalArgs& g, const RunManifest& manifest, json result) {
  Output out(g.output);
  json doc{{"schema", "chaoskit-json/" + std::to_string(kCsvSchemaVersion)},
           {"manifest", to_json(manifest)},
           {"result", std::move(result)}};
  out.stream() << doc.dump(2) << '\n';
}

void emit_table(const GlobalArgs& g, const RunManifest& manifest, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
  if (g.json) {
    json list = json::array();
    for (const auto& row : rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = row[i];
      list.push_back(std::move(obj));
    }
    emit_json(g, manifest, {{"rows", std::move(list)}});
    return;
  }
  Output out(g.output);
  auto& os = out.stream();
  write_csv_preamble(os, manifest);
  auto write_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      const bool quote = row[i].find_first_of(",\"\n") != std::string::npos;
      if (!quote) {
        os << row[i];
        continue;
      }
      os << '"';
      for (char c : row[i]) os << (c == '"' ? "\"\"" : std::string(1, c));
      os << '"';
    }
    os << '\n';
  };
  write_row(header);
  for (const auto& row : rows) write_row(row);
}

RunManifest base_manifest(const std::string& command, const LoadedKernel* kernel, const std::string& mode) {
  RunManifest m;
  m.command = command;
  m.timestamp = manifest_timestamp();
  m.mode = mode;
  if (kernel) {
    m.kernel_source = kernel->source;
    m.model = to_string(model_of(kernel->doc));
  }
  return m;
}

// moment ------------------------------------------------------------------

struct MomentArgs {
  KernelArgs kernel;
  int k = 4;
  std::string path = "formula";
};

template <ChaosScalar T>
T compute_moment(const KernelDocument<T>& d, int k, MomentPath path) {
  switch (path) {
    case MomentPath::formula:
      return chain_moment(d.kernel, k, d.model);
    case MomentPath::expansion:
      return moment_via_expansion(d.kernel, k, d.model);
    case MomentPath::oracle: {
      if (d.model != Model::classical) throw InputError("the oracle path covers the classical model only");
      return wick_oracle_moment(ScaledKernel<T>{symmetrize(d.kernel.base), d.kernel.scale_sq}, k);
    }
    case MomentPath::simulation:
      break;
  }
  throw InputError("use the simulate command for Monte Carlo estimates");
}

int cmd_moment(const GlobalArgs& g, const MomentArgs& a) {
  const auto kernel = load_kernel(a.kernel);
  const MomentPath path = parse_moment_path(a.path);
  auto manifest = base_manifest("moment", &kernel, mode_name(kernel.doc));
  manifest.parameters = {{"k", a.k}, {"path", a.path}};
  json result = std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d.kernel.scale_sq)>;
        const auto report =
            MomentReport<T>::computed(a.k, compute_moment(d, a.k, path), path, moment_target<T>(a.k, d.model));
        return json{{"k", report.k()},
                    {"value", value_json(report.value())},
                    {"value_approx", approx(report.value())},
                    {"path", to_string(report.path())},
                    {"target", value_json(*report.target())},
                    {"model", to_string(d.model)}};
      },
      kernel.doc);
  emit_json(g, manifest, std::move(result));
  return kOk;
}

// fourth-check ------------------------------------------------------------

struct FourthArgs {
  KernelArgs kernel;
  bool normalize = false;
};

template <ChaosScalar T>
json fourth_check(KernelDocument<T> d, bool normalize) {
  if (normalize) {
    auto n = normalize_variance(d.kernel.base, d.model);
    n.scale_sq *= d.kernel.scale_sq;
    d.kernel = std::move(n);
  }
  const auto& f = d.kernel;
  const T moment = chain_moment(f, 4, d.model);
  json out{{"model", to_string(d.model)}, {"moment", value_json(moment)}, {"moment_approx", approx(moment)}};
  T identity;
  if (d.model == Model::classical) {
    identity = classical_fourth_identity(f);
    const auto [square, sum] = tensor_square_identity(f);
    out["tensor_square"] = {{"lhs", value_json(square)}, {"rhs", value_json(sum)}, {"residue", value_json(T(square - sum))}};
  } else {
    identity = free_fourth_identity(f);
  }
  out["identity"] = value_json(identity);
  out["residue"] = value_json(T(moment - identity));
  json plain = json::array(), sym = json::array();
  if (f.base.order() >= 2) {
    const auto profile = contraction_profile(f, d.model);
    for (const auto& v : profile.plain) plain.push_back(value_json(v));
    for (const auto& v : profile.symmetrized) sym.push_back(value_json(v));
  }
  out["profile"] = plain;
  if (d.model == Model::classical) out["profile_symmetrized"] = sym;
  const T gap = fourth_moment_gap(f, d.model);
  out["gap"] = value_json(gap);
  out["gap_approx"] = approx(gap);
  return out;
}

int cmd_fourth_check(const GlobalArgs& g, const FourthArgs& a) {
  const auto kernel = load_kernel(a.kernel);
  auto manifest = base_manifest("fourth-check", &kernel, mode_name(kernel.doc));
  manifest.parameters = {{"normalize", a.normalize}};
  json result = std::visit([&](const auto& d) { return fourth_check(d, a.normalize); }, kernel.doc);
  emit_json(g, manifest, std::move(result));
  return kOk;
}

// index-sets --------------------------------------------------------------

struct IndexArgs {
  int p = 2;
  int k = 4;
  std::string cls = "C";
};

int cmd_index_sets(const GlobalArgs& g, const IndexArgs& a) {
  const TupleClass cls = parse_tuple_class(a.cls);
  auto manifest = base_manifest("index-sets", nullptr, "exact");
  manifest.parameters = {{"p", a.p}, {"k", a.k}, {"class", a.cls}};
  std::vector<std::vector<std::string>> rows;
  for (const auto& t : enumerate(a.p, a.k, cls)) {
    std::string tuple;
    for (std::size_t i = 0; i < t.r().size(); ++i) tuple += (i ? " " : "") + std::to_string(t.r()[i]);
    const bool in_c = t.tuple_class() == TupleClass::C;
    rows.push_back({tuple, to_string(t.tuple_class()), classical_coeff(t).get_str(),
                    in_c ? limit_weight(t).get_str() : "", in_c ? cell(limit_value(t)) : "",
                    in_c ? (dyck_check(t) ? "true" : "false") : ""});
  }
  emit_table(g, manifest, {"tuple", "class", "classical_coeff", "limit_weight", "limit_value", "dyck"}, rows);
  return kOk;
}

// converge ----------------------------------------------------------------

struct ConvergeArgs {
  std::string family = "pair_clt";
  std::vector<int> n_list{1, 2, 4, 8};
  std::string model;
  int k_max = 4;
  std::string mode = "exact";
};

template <ChaosScalar T>
std::vector<std::vector<std::string>> convergence_rows(const ConvergeArgs& a) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : convergence_report<T>(parse_family(a.family), a.n_list, a.k_max, parse_model(a.model))) {
    std::string profile;
    for (std::size_t i = 0; i < r.profile.size(); ++i) profile += (i ? ";" : "") + cell(r.profile[i]);
    rows.push_back({std::to_string(r.n), std::to_string(r.k), cell(r.moment), cell(r.target), cell(r.gap),
                    cell(r.c_sum), cell(r.e_sum), profile});
  }
  return rows;
}

int cmd_converge(const GlobalArgs& g, const ConvergeArgs& a) {
  if (a.model.empty()) throw InputError("--model is required");
  auto manifest = base_manifest("converge", nullptr, a.mode);
  manifest.kernel_source = "family:" + a.family;
  manifest.model = a.model;
  manifest.parameters = {{"n", a.n_list}, {"kmax", a.k_max}};
  const auto rows = a.mode == "float" ? convergence_rows<double>(a) : convergence_rows<Rational>(a);
  emit_table(g, manifest, {"n", "k", "moment", "target", "gap", "c_sum", "e_sum", "profile"}, rows);
  return kOk;
}

// simulate ----------------------------------------------------------------

struct SimulateArgs {
  KernelArgs kernel;
  int k = 4;
  std::optional<std::int64_t> samples;
  std::uint64_t seed = 1;
  int dim = 200;
  bool control_variates = false;
};

int cmd_simulate(const GlobalArgs& g, const SimulateArgs& a) {
  const auto kernel = load_kernel(a.kernel);
  const Model model = model_of(kernel.doc);
  const auto float_doc = std::visit([](const auto& d) { return convert<double>(d); }, kernel.doc);
  const auto f = float_doc.kernel.materialize();

  SampleConfig cfg;
  cfg.seed = a.seed;
  cfg.matrix_dim = a.dim;
  cfg.control_variates = a.control_variates;
  cfg.n_samples = a.samples.value_or(model == Model::classical ? 1'000'000 : 200);

  auto manifest = base_manifest("simulate", &kernel, "float");
  manifest.seed = a.seed;
  manifest.parameters = {{"k", a.k}, {"samples", cfg.n_samples}, {"rng", kRngAlgorithm}};
  if (model == Model::free) {
    manifest.parameters["dim"] = a.dim;
    manifest.parameters["control_variates"] = a.control_variates;
  }

  const auto report = model == Model::classical ? mc_classical_moment(f, a.k, cfg) : mc_free_moment(f, a.k, cfg);
  // The exact target is computed in the kernel's own numeric mode.
  const double target = std::visit([&](const auto& d) { return approx(chain_moment(d.kernel, a.k, d.model)); }, kernel.doc);
  const double se = *report.std_error();
  json result{{"model", to_string(model)},
              {"k", a.k},
              {"estimate", report.value()},
              {"std_error", se},
              {"target", target},
              {"z_score", se > 0 ? json((report.value() - target) / se) : json(nullptr)},
              {"samples", cfg.n_samples},
              {"rng", kRngAlgorithm}};
  if (model == Model::free) result["dim"] = a.dim;
  emit_json(g, manifest, std::move(result));
  return kOk;
}

// verify ------------------------------------------------------------------

struct VerifyArgs {
  std::string fixtures;
  std::uint64_t seed = VerifyOptions{}.seed;
};

int cmd_verify(const GlobalArgs& g, const VerifyArgs& a) {
  VerifyOptions options;
  if (!a.fixtures.empty()) options.fixture_dir = a.fixtures;
  options.seed = a.seed;
  auto manifest = base_manifest("verify", nullptr, "exact");
  manifest.seed = a.seed;
  if (!a.fixtures.empty()) manifest.kernel_source = a.fixtures;
  const auto checks = run_verify_suite(options);
  bool all = true;
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : checks) {
    all = all && c.passed;
    rows.push_back({c.name, c.passed ? "pass" : "fail", c.detail});
  }
  emit_table(g, manifest, {"check", "status", "detail"}, rows);
  return all ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact moments and fourth-moment diagnostics for multiple Wiener-Ito and Wigner integrals"};
  app.require_subcommand(1);
  GlobalArgs g;
  app.add_flag("--json", g.json, "Force JSON output");
  app.add_option("-o,--output", g.output, "Write to a file instead of stdout");
  app.add_option("--threads", g.threads, "Worker thread cap")->envname("CHAOSKIT_THREADS")->check(CLI::PositiveNumber);
  app.add_option("--budget", g.budget, "Entry budget per tensor")->check(CLI::PositiveNumber);

  MomentArgs moment;
  auto* c_moment = app.add_subcommand("moment", "k-th moment of I_p(f)");
  add_kernel_options(c_moment, moment.kernel);
  c_moment->add_option("--k", moment.k, "Moment order")->check(CLI::PositiveNumber);
  c_moment->add_option("--path", moment.path, "formula, expansion or oracle")
      ->check(CLI::IsMember({"formula", "expansion", "oracle"}));

  FourthArgs fourth;
  auto* c_fourth = app.add_subcommand("fourth-check", "Fourth moment, its contraction identity and the gap");
  add_kernel_options(c_fourth, fourth.kernel);
  c_fourth->add_flag("--normalize", fourth.normalize, "Normalize the variance first");

  IndexArgs index;
  auto* c_index = app.add_subcommand("index-sets", "Enumerate contraction tuples");
  c_index->add_option("--p", index.p, "Kernel order")->required()->check(CLI::PositiveNumber);
  c_index->add_option("--k", index.k, "Moment order")->required()->check(CLI::Range(2, 64));
  c_index->add_option("--class", index.cls, "A, B, C or E")->check(CLI::IsMember({"A", "B", "C", "E"}));

  ConvergeArgs converge;
  auto* c_converge = app.add_subcommand("converge", "Moments along a kernel family");
  c_converge->add_option("--family", converge.family, "Family name")->check(CLI::IsMember({"pair_clt"}));
  c_converge->add_option("--n", converge.n_list, "Family parameters")->delimiter(',')->check(CLI::PositiveNumber);
  c_converge->add_option("--model", converge.model, "classical or free")
      ->required()
      ->check(CLI::IsMember({"classical", "free"}));
  c_converge->add_option("--kmax", converge.k_max, "Largest moment order")->check(CLI::Range(2, 64));
  c_converge->add_option("--mode", converge.mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));

  SimulateArgs simulate;
  auto* c_simulate = app.add_subcommand("simulate", "Monte Carlo moment estimate");
  add_kernel_options(c_simulate, simulate.kernel);
  c_simulate->add_option("--k", simulate.k, "Moment order")->check(CLI::PositiveNumber);
  c_simulate->add_option("--samples", simulate.samples, "Sample count (matrix draws for free)")
      ->check(CLI::PositiveNumber);
  c_simulate->add_option("--seed", simulate.seed, "64-bit seed");
  c_simulate->add_option("--dim", simulate.dim, "GUE dimension N")->check(CLI::Range(2, 100000));
  c_simulate->add_flag("--control-variates", simulate.control_variates, "Regression-adjust GUE draws (m <= 4)");

  VerifyArgs verify;
  auto* c_verify = app.add_subcommand("verify", "Run the invariant suite");
  c_verify->add_option("--fixtures", verify.fixtures, "Directory of fixture kernels")->check(CLI::ExistingDirectory);
  c_verify->add_option("--seed", verify.seed, "Seed for random kernels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (g.threads > 0) set_thread_limit(g.threads);
    if (g.budget > 0) set_entry_budget(g.budget);
    if (*c_moment) return cmd_moment(g, moment);
    if (*c_fourth) return cmd_fourth_check(g, fourth);
    if (*c_index) return cmd_index_sets(g, index);
    if (*c_converge) return cmd_converge(g, converge);
    if (*c_simulate) return cmd_simulate(g, simulate);
    if (*c_verify) return cmd_verify(g, verify);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << '\n';
    return kPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
