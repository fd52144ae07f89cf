// Serial reference versus OpenMP sample_batch on the null-argmax workload.
// On a single core the two should be within noise of each other.

#include <benchmark/benchmark.h>

#include <vector>

#include "infousage/ensemble.hpp"
#include "infousage/selection.hpp"

using namespace infousage;

namespace {

StatisticEnsemble null_ensemble(std::size_t m) {
  return StatisticEnsemble::gaussian(std::vector<double>(m, 0.0));
}

void BM_SampleParallel(benchmark::State& state) {
  const auto ens = null_ensemble(static_cast<std::size_t>(state.range(0)));
  const auto rule = SelectionRule::argmax();
  for (auto _ : state) {
    auto b = sample_batch(ens, rule, 2000, 7, {.store_phi = false});
    benchmark::DoNotOptimize(b.selected_value.data());
  }
  state.SetItemsProcessed(state.iterations() * 2000 * state.range(0));
}

void BM_SampleSerial(benchmark::State& state) {
  const auto ens = null_ensemble(static_cast<std::size_t>(state.range(0)));
  const auto rule = SelectionRule::argmax();
  for (auto _ : state) {
    auto b = reference::sample_batch(ens, rule, 2000, 7, {.store_phi = false});
    benchmark::DoNotOptimize(b.selected_value.data());
  }
  state.SetItemsProcessed(state.iterations() * 2000 * state.range(0));
}

void BM_GibbsParallel(benchmark::State& state) {
  const auto ens = null_ensemble(4096);
  const auto rule = SelectionRule::gibbs(2.0);
  for (auto _ : state) {
    auto b = sample_batch(ens, rule, 1000, 7, {.store_phi = false});
    benchmark::DoNotOptimize(b.selections.data());
  }
}

void BM_GibbsSerial(benchmark::State& state) {
  const auto ens = null_ensemble(4096);
  const auto rule = SelectionRule::gibbs(2.0);
  for (auto _ : state) {
    auto b = reference::sample_batch(ens, rule, 1000, 7, {.store_phi = false});
    benchmark::DoNotOptimize(b.selections.data());
  }
}

}  // namespace

BENCHMARK(BM_SampleParallel)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GibbsParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GibbsSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
