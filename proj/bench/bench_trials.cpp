#include <benchmark/benchmark.h>

#include "frm/experiments.hpp"
#include "frm/model.hpp"
#include "frm/montecarlo.hpp"

namespace {

const frm::ModelInstance& instance(double inv_alpha) {
  static const frm::ModelInstance over = frm::materialize(frm::table1_config(3.0));
  static const frm::ModelInstance under = frm::materialize(frm::table1_config(0.7));
  return inv_alpha > 1 ? over : under;
}

const std::vector<frm::EstimatorKind> kKinds = {frm::Gls{}, frm::Ridge{2.7}};

void BM_TrialsSerial(benchmark::State& state) {
  const auto& inst = instance(3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(frm::run_trials_serial(inst, kKinds, static_cast<int>(state.range(0)), 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TrialsParallel(benchmark::State& state) {
  const auto& inst = instance(3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(frm::run_trials(inst, kKinds, static_cast<int>(state.range(0)), 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TrialsParallelUnder(benchmark::State& state) {
  const auto& inst = instance(0.7);
  const std::vector<frm::EstimatorKind> kinds = {frm::Ls{}, frm::Ridge{1.5}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(frm::run_trials(inst, kinds, static_cast<int>(state.range(0)), 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_TrialsSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TrialsParallel)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TrialsParallelUnder)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
