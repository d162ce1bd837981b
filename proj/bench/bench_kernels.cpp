// Serial reference kernels vs their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include "tomeria/analyzer.hpp"
#include "tomeria/placement.hpp"
#include "tomeria/sweep.hpp"

using namespace tomeria;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(1) == 0 ? Exec::Serial : Exec::Parallel; }

void BM_CaStep(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Grid grid = threshold_initial(random_field(1, side, side), 0.45);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ca_step(grid, CaRule{5}, exec_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_CaStep)->ArgsProduct({{64, 256, 1024}, {0, 1}})->ArgNames({"side", "parallel"});

LevelSpec ten_lever_level() {
  GenParams base;
  base.seed = 1;
  LeverPlan plan;
  plan.ircLevers = 5;
  plan.noiLevers = 5;
  LevelSpec spec = place_objectives(base, place_levers(base, plan), std::nullopt, {0, 0}, {16, Exec::Serial});
  // Power-of-two deltas so that every config needs its own generation pass.
  for (int i = 0; i < 10; ++i) {
    Lever& l = spec.levers[static_cast<std::size_t>(i)];
    l.axis = i < 6 ? LeverAxis::Irc : LeverAxis::Noi;
    l.delta = i < 6 ? Lever::kDefaultIrcDelta << i : std::int64_t{1} << (i - 6);
  }
  return spec;
}

void BM_EnumerateConfigs(benchmark::State& state) {
  const LevelSpec spec = ten_lever_level();
  const AnalysisOptions options{16, exec_of(state)};
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_configs(spec, options));
}
BENCHMARK(BM_EnumerateConfigs)->ArgsProduct({{10}, {0, 1}})->ArgNames({"levers", "parallel"})->Unit(benchmark::kMillisecond);

void BM_Analyze(benchmark::State& state) {
  const LevelSpec spec = ten_lever_level();
  const AnalysisOptions options{16, exec_of(state)};
  for (auto _ : state) benchmark::DoNotOptimize(analyze(spec, options));
}
BENCHMARK(BM_Analyze)->ArgsProduct({{10}, {0, 1}})->ArgNames({"levers", "parallel"})->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  GenParams base;
  const auto irc = chance_range(Chance::from_micros(300'000), Chance::from_micros(600'000), Chance::from_micros(50'000));
  const auto noi = int_range(0, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(expressive_sweep(base, irc, noi, static_cast<int>(state.range(0)), exec_of(state)));
  }
}
BENCHMARK(BM_Sweep)->ArgsProduct({{20}, {0, 1}})->ArgNames({"seeds", "parallel"})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
