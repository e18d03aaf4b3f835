#include <benchmark/benchmark.h>

#include "cuspsieve/cusps.hpp"
#include "cuspsieve/enveloping_sieve.hpp"
#include "cuspsieve/exp_sums.hpp"
#include "cuspsieve/transference.hpp"

namespace cs = cuspsieve;

namespace {

const cs::PrimeContext& ctx() {
  static const cs::PrimeContext c(1'000'000);
  return c;
}

void BM_PrimeContext(benchmark::State& state) {
  for (auto _ : state) {
    cs::PrimeContext c(static_cast<std::uint64_t>(state.range(0)));
    benchmark::DoNotOptimize(c.prime_count(c.limit()));
  }
}
BENCHMARK(BM_PrimeContext)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_SpectrumGrid(benchmark::State& state) {
  const auto N = static_cast<std::uint64_t>(state.range(0));
  const auto s = cs::subset_full(ctx(), N);
  const auto G = cs::default_grid_size(N);
  for (auto _ : state) {
    cs::SpectrumGrid grid(s, G);
    benchmark::DoNotOptimize(grid.value(1));
  }
  state.counters["grid"] = static_cast<double>(G);
}
BENCHMARK(BM_SpectrumGrid)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_DirectExpSum(benchmark::State& state) {
  const auto s = cs::subset_full(ctx(), 100'000);
  double alpha = 0.1234;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cs::exp_sum_at(s, alpha));
    alpha += 1e-7;
  }
}
BENCHMARK(BM_DirectExpSum);

void BM_FindCusps(benchmark::State& state) {
  const auto s = cs::subset_full(ctx(), 100'000);
  const cs::SpectrumGrid grid(s, cs::default_grid_size(s.N));
  const auto A = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cs::find_cusps(grid, s, A).arcs.size());
}
BENCHMARK(BM_FindCusps)->Arg(2)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_BuildWeights(benchmark::State& state) {
  cs::SieveParams p;
  p.z0 = 3;
  p.z = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cs::build_weights(ctx(), p).w_keys.size());
}
BENCHMARK(BM_BuildWeights)->Arg(30)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_FourierEquivalence(benchmark::State& state) {
  cs::SieveParams p;
  p.z0 = 3;
  p.z = 50;
  const auto w = cs::build_weights(ctx(), p);
  for (auto _ : state) benchmark::DoNotOptimize(cs::check_fourier_equivalence(w, 2000).mismatches);
}
BENCHMARK(BM_FourierEquivalence)->Unit(benchmark::kMillisecond);

void BM_EnvelopingReport(benchmark::State& state) {
  cs::SieveParams p;
  p.z0 = 3;
  p.z = 50;
  const auto w = cs::build_weights(ctx(), p);
  for (auto _ : state) benchmark::DoNotOptimize(cs::enveloping_report(ctx(), w, 100'000).size());
}
BENCHMARK(BM_EnvelopingReport)->Unit(benchmark::kMillisecond);

void BM_LargeSieveTrials(benchmark::State& state) {
  const auto s = cs::subset_full(ctx(), 10'000);
  for (auto _ : state) benchmark::DoNotOptimize(cs::large_sieve_trials(ctx(), s, 20, 42).size());
}
BENCHMARK(BM_LargeSieveTrials)->Unit(benchmark::kMillisecond);

void BM_Decompose(benchmark::State& state) {
  const auto N = static_cast<std::uint64_t>(state.range(0));
  const auto s = cs::subset_full(ctx(), N);
  cs::DecomposeParams p;
  p.z0 = 3;
  p.M = 2;
  p.A = 2;
  p.alpha_samples = 100;
  for (auto _ : state) benchmark::DoNotOptimize(cs::decompose(ctx(), s, p).metrics.residual_max);
}
BENCHMARK(BM_Decompose)->Arg(20'000)->Arg(100'000)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace
BENCHMARK_MAIN();
