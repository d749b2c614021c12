#include <benchmark/benchmark.h>

#include <cmath>

#include "adlab/coefficients.hpp"
#include "adlab/model.hpp"
#include "adlab/prime_stats.hpp"
#include "adlab/psi.hpp"
#include "adlab/sieve.hpp"

namespace {

void BM_SievePrimes(benchmark::State& state) {
  const auto x = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(adlab::sieve_primes(x));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_SievePrimes)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

void BM_AdditiveValuesOmega(benchmark::State& state) {
  const auto x = static_cast<std::uint64_t>(state.range(0));
  const auto f = adlab::AdditiveFunction::omega();
  for (auto _ : state) benchmark::DoNotOptimize(adlab::additive_values_vector(f, x));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_AdditiveValuesOmega)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

void BM_ExactTailDp(benchmark::State& state) {
  const auto f = adlab::AdditiveFunction::omega();
  const auto x = static_cast<std::uint64_t>(state.range(0));
  const auto ens = adlab::BernoulliEnsemble::from_function(f, x);
  const auto stats = adlab::prime_stats(f, x);
  for (auto _ : state) benchmark::DoNotOptimize(adlab::centered_tail(ens, 1.0, stats));
}
BENCHMARK(BM_ExactTailDp)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_McTail(benchmark::State& state) {
  const auto ens = adlab::BernoulliEnsemble::from_function(adlab::AdditiveFunction::omega(), 1000);
  for (auto _ : state) benchmark::DoNotOptimize(adlab::mc_tail(ens, 5.0, static_cast<std::uint64_t>(state.range(0)), 1));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_McTail)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_LambdaPsi(benchmark::State& state) {
  const auto psi = adlab::PsiDistribution::from_atoms({{0.5, 0.25}, {1.0, 0.5}, {2.0, 0.25}});
  const int K = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(adlab::lambda_psi(psi, K));
}
BENCHMARK(BM_LambdaPsi)->Arg(12)->Arg(24);

void BM_LambdaF(benchmark::State& state) {
  const auto ens = adlab::BernoulliEnsemble::from_function(adlab::AdditiveFunction::omega(), 1'000'000);
  for (auto _ : state) benchmark::DoNotOptimize(adlab::lambda_f(ens, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_LambdaF)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
