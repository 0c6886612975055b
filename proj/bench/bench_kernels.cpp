// Serial reference against the OpenMP kernels, plus chain-evaluation strategies.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "chaoskit/contractions.hpp"
#include "chaoskit/moments.hpp"
#include "chaoskit/random_kernel.hpp"
#include "chaoskit/simulate.hpp"

using namespace chaoskit;

namespace {

GridKernel<double> random_double(int p, int m, KernelShape shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_kernel<double>(p, m, shape, rng);
}

void BM_ContractClassical(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto f = random_double(3, m, KernelShape::plain, 1);
  const auto g = random_double(3, m, KernelShape::plain, 2);
  for (auto _ : state) benchmark::DoNotOptimize(contract_classical(f, g, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(std::pow(m, 5)));
}

void BM_ContractClassicalSerial(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto f = random_double(3, m, KernelShape::plain, 1);
  const auto g = random_double(3, m, KernelShape::plain, 2);
  for (auto _ : state) benchmark::DoNotOptimize(reference::contract_classical(f, g, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(std::pow(m, 5)));
}

void BM_ContractFree(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto f = random_double(3, m, KernelShape::mirror_symmetric, 3);
  for (auto _ : state) benchmark::DoNotOptimize(contract_free(f, f, 2));
}

void BM_ContractFreeSerial(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto f = random_double(3, m, KernelShape::mirror_symmetric, 3);
  for (auto _ : state) benchmark::DoNotOptimize(reference::contract_free(f, f, 2));
}

void BM_Symmetrize(benchmark::State& state) {
  const auto f = random_double(4, static_cast<int>(state.range(0)), KernelShape::plain, 4);
  for (auto _ : state) benchmark::DoNotOptimize(symmetrize(f));
}

void BM_SymmetrizeSerial(benchmark::State& state) {
  const auto f = random_double(4, static_cast<int>(state.range(0)), KernelShape::plain, 4);
  for (auto _ : state) benchmark::DoNotOptimize(reference::symmetrize(f));
}

GridKernel<double> clt_kernel(int n) {
  const auto f = family_kernel<double>(Family::pair_clt, n, Model::classical);
  return f.materialize();
}

void BM_MonteCarlo(benchmark::State& state) {
  const auto f = clt_kernel(8);
  SampleConfig cfg;
  cfg.n_samples = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(mc_classical_moment(f, 4, cfg).value());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MonteCarloSerial(benchmark::State& state) {
  const auto f = clt_kernel(8);
  SampleConfig cfg;
  cfg.n_samples = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(reference::mc_classical_moment(f, 4, cfg).value());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ClassicalMomentDense(benchmark::State& state) {
  const auto f = family_kernel<Rational>(Family::pair_clt, static_cast<int>(state.range(0)), Model::classical);
  for (auto _ : state) benchmark::DoNotOptimize(classical_moment(f, 6, ChainStrategy::dense));
}

void BM_ClassicalMomentNetwork(benchmark::State& state) {
  const auto f = family_kernel<Rational>(Family::pair_clt, static_cast<int>(state.range(0)), Model::classical);
  for (auto _ : state) benchmark::DoNotOptimize(classical_moment(f, 6, ChainStrategy::network));
}

}  // namespace

BENCHMARK(BM_ContractClassical)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ContractClassicalSerial)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ContractFree)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ContractFreeSerial)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Symmetrize)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SymmetrizeSerial)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarlo)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloSerial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClassicalMomentDense)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClassicalMomentNetwork)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
