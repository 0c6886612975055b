#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "chaoskit/combinatorics.hpp"
#include "chaoskit/grid_kernel.hpp"

namespace chaoskit {

enum class MomentPath { formula, expansion, oracle, simulation };

const char* to_string(MomentPath path);
MomentPath parse_moment_path(std::string_view text);

/// A k-th moment together with how it was obtained. A standard error is
/// carried exactly when the value is a simulation estimate.
template <ChaosScalar T>
class MomentReport {
 public:
  static MomentReport computed(int k, T value, MomentPath path, std::optional<T> target = std::nullopt);
  static MomentReport simulated(int k, T value, double std_error, std::optional<T> target = std::nullopt);

  int k() const noexcept { return k_; }
  const T& value() const noexcept { return value_; }
  MomentPath path() const noexcept { return path_; }
  std::optional<double> std_error() const noexcept { return std_error_; }
  const std::optional<T>& target() const noexcept { return target_; }

 private:
  MomentReport(int k, T value, MomentPath path, std::optional<double> se, std::optional<T> target)
      : k_(k), value_(std::move(value)), path_(path), std_error_(se), target_(std::move(target)) {}

  int k_;
  T value_;
  MomentPath path_;
  std::optional<double> std_error_;
  std::optional<T> target_;
};

/// How iterated contraction chains are evaluated.
///   dense:     materialize every intermediate kernel, sharing prefixes
///              between tuples of B_k (one contraction per prefix-tree edge);
///   network:   contract each chain as a tensor network;
///   automatic: dense when the largest intermediate fits the entry budget.
enum class ChainStrategy { automatic, dense, network };

/// One summand of the B_k expansion of E[F^k].
template <ChaosScalar T>
struct ChainTerm {
  ContractionTuple tuple;
  T chain_value;  // f (op r_1) f ... (op r_{k-1}) f, evaluated left to right
  T coefficient;  // 1 (free) or classical_coeff(tuple)
};

/// All B_k summands for E[I_p(f)^k]. Classical chains use symmetrized
/// contractions of symmetrize(f); free chains require mirror symmetry.
template <ChaosScalar T>
std::vector<ChainTerm<T>> chain_terms(const GridKernel<T>& f, int k, Model model,
                                      ChainStrategy strategy = ChainStrategy::automatic);

template <ChaosScalar T>
std::vector<ChainTerm<T>> chain_terms(const ScaledKernel<T>& f, int k, Model model,
                                      ChainStrategy strategy = ChainStrategy::automatic);

/// Largest intermediate kernel order met by the dense evaluation.
int dense_chain_peak_order(int p, int k);

template <ChaosScalar T>
T free_moment(const GridKernel<T>& f, int k, ChainStrategy strategy = ChainStrategy::automatic);
template <ChaosScalar T>
T free_moment(const ScaledKernel<T>& f, int k, ChainStrategy strategy = ChainStrategy::automatic);

template <ChaosScalar T>
T classical_moment(const GridKernel<T>& f, int k, ChainStrategy strategy = ChainStrategy::automatic);
template <ChaosScalar T>
T classical_moment(const ScaledKernel<T>& f, int k, ChainStrategy strategy = ChainStrategy::automatic);

template <ChaosScalar T>
T chain_moment(const ScaledKernel<T>& f, int k, Model model, ChainStrategy strategy = ChainStrategy::automatic);

/// 2||f||^4 + sum_{r=1}^{p-1} ||f ~r f||^2 for mirror-symmetric f
/// (no normalization assumed).
template <ChaosScalar T>
T free_fourth_identity(const ScaledKernel<T>& f);

/// 3 + sum_{r=1}^{p-1} C(p,r)^2 [ (p!)^2 ||f (x)_r f||^2
///                               + (r!)^2 C(p,r)^2 (2p-2r)! ||f (x)~_r f||^2 ]
/// Requires symmetric f with p! ||f||^2 = 1 (exactly, in exact mode).
template <ChaosScalar T>
T classical_fourth_identity(const ScaledKernel<T>& f);

/// Both sides of (2p)! ||f (x)~ f||^2 = 2 + (p!)^2 sum_{r=1}^{p-1} C(p,r)^2 ||f (x)_r f||^2
/// for normalized symmetric f.
template <ChaosScalar T>
std::pair<T, T> tensor_square_identity(const ScaledKernel<T>& f);

struct WickCaps {
  int max_variables = 12;
  int max_degree = 24;
};

/// E[I_p(f)^k] from an explicit polynomial in the m cell Gaussians
/// xi_i = sqrt(m) (B((i+1)/m) - B(i/m)): every ordered cell tuple I adds
/// a_I m^{-p/2} prod_i He_{k_i}(xi_i). The k-th power is expanded
/// symbolically and E[xi^n] = (n-1)!! applied termwise. Shares no code with
/// the contraction machinery.
template <ChaosScalar T>
T wick_oracle_moment(const GridKernel<T>& f, int k, const WickCaps& caps = {});

template <ChaosScalar T>
T wick_oracle_moment(const ScaledKernel<T>& f, int k, const WickCaps& caps = {});

template <ChaosScalar T>
struct ContractionProfile {
  std::vector<T> plain;        // ||f (x)_r f||^2 or ||f ~r f||^2, r = 1..p-1
  std::vector<T> symmetrized;  // ||f (x)~_r f||^2 (classical only)
};

template <ChaosScalar T>
ContractionProfile<T> contraction_profile(const ScaledKernel<T>& f, Model model);

/// E[F^4] - 3 (classical) or E[F^4] - 2 (free) for a normalized kernel.
template <ChaosScalar T>
T fourth_moment_gap(const ScaledKernel<T>& f, Model model, ChainStrategy strategy = ChainStrategy::automatic);

/// Exact variance check: p!||f~||^2 = 1 or <f,f*> = 1 (float: 1e-12 relative).
template <ChaosScalar T>
bool is_normalized(const ScaledKernel<T>& f, Model model);

template <ChaosScalar T>
T moment_target(int k, Model model);

template <ChaosScalar T>
struct ConvergenceRow {
  int n;
  int k;
  T moment;
  T target;
  T gap;
  T c_sum;  // contribution of C_k tuples
  T e_sum;  // contribution of E_k tuples
  std::vector<T> profile;
};

template <ChaosScalar T>
std::vector<ConvergenceRow<T>> convergence_report(Family family, const std::vector<int>& n_list, int k_max,
                                                  Model model, ChainStrategy strategy = ChainStrategy::automatic);

}  // namespace chaoskit
