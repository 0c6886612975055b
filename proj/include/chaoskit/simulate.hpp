#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "chaoskit/grid_kernel.hpp"
#include "chaoskit/moments.hpp"

namespace chaoskit {

/// Identical configs give bit-identical estimates, whatever the thread count.
struct SampleConfig {
  std::uint64_t seed = 1;
  std::int64_t n_samples = 100'000;
  int matrix_dim = 100;  // GUE dimension N (free model)
  /// Free model: regression-adjust the draws with the control variates
  /// tr(G_i^2)/N, tr(G_i^2 G_j^2)/N and tr(G_i G_j G_i G_j)/N (i < j), whose
  /// finite-N means are 1/m, 1/m^2 and 1/(m^2 N^2). Needs m <= 4.
  bool control_variates = false;
};

inline constexpr int kMaxControlResolution = 4;

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of sample (or matrix draw) `index` under the run seed.
std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index);

/// SplitMix64 stream as a UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

 private:
  std::uint64_t state_;
};

/// Standard normal deviate; Box-Muller on 53-bit uniforms, no cached state.
double standard_normal(SplitMix64& rng);

inline constexpr const char* kRngAlgorithm =
    "splitmix64 stream per sample, state = splitmix64(seed ^ splitmix64(index)); Box-Muller normals";

/// Exact-in-law sampler of I_p(f) for a step kernel.
///
/// With xi_i = sqrt(m) times the Brownian increment over cell i, each cell
/// multiset contributes (sum of a_I over its ordered tuples) m^{-p/2}
/// prod_i He_{k_i}(xi_i), k_i the multiplicity of cell i. A non-symmetric f
/// therefore yields I_p of its symmetrization.
class ClassicalSampler {
 public:
  explicit ClassicalSampler(const GridKernel<double>& f);

  int resolution() const noexcept { return m_; }

  /// The integral for given cell variables xi (size m).
  double evaluate(std::span<const double> xi) const;

  double operator()(SplitMix64& rng) const;

 private:
  struct Term {
    double coeff;
    std::vector<std::pair<int, int>> powers;  // (cell, multiplicity)
  };
  int m_;
  int max_multiplicity_ = 0;
  std::vector<Term> terms_;
};

double sample_classical(const GridKernel<double>& f, SplitMix64& rng);

/// Empirical E[F^k]; std error = std of the F^k sample over sqrt(n_samples).
/// Sample i is drawn from SplitMix64(sample_seed(cfg.seed, i)).
MomentReport<double> mc_classical_moment(const GridKernel<double>& f, int k, const SampleConfig& cfg);

/// One N x N realization of the Wigner integral. Increments are independent
/// GUE matrices G_i with E[tr(G_i^2)/N] = 1/m, and
/// F_N = sum_I a_I G_{i_1} ... G_{i_p}. Returns tr(F_N^j)/N for j = 1..k.
/// Requires a mirror-symmetric, off-diagonal kernel.
std::vector<double> sample_free_gue(const GridKernel<double>& f, int matrix_dim, int k, SplitMix64& rng);

/// Mean of sample_free_gue(...)[k-1] over n_samples draws (control-variate
/// adjusted when requested); draw i uses SplitMix64(sample_seed(cfg.seed, i)).
MomentReport<double> mc_free_moment(const GridKernel<double>& f, int k, const SampleConfig& cfg);

namespace reference {

/// Serial mc_classical_moment; bit-identical to the parallel one.
MomentReport<double> mc_classical_moment(const GridKernel<double>& f, int k, const SampleConfig& cfg);

}  // namespace reference

}  // namespace chaoskit
