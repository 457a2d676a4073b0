// Serial reference vs OpenMP kernel for curve estimation, and full vs
// incremental projection.

#include <benchmark/benchmark.h>

#include <random>

#include "pipeplan/annealer.hpp"
#include "pipeplan/projection.hpp"
#include "pipeplan/riskmodel.hpp"
#include "pipeplan/scenario.hpp"

using namespace pipeplan;

namespace {

const ScenarioConfig& demo() {
  static const ScenarioConfig cfg = load_scenario(std::string(PIPEPLAN_SOURCE_DIR) + "/data/demo.json");
  return cfg;
}

void BM_EstimateSerial(benchmark::State& state) {
  ScenarioConfig cfg = demo();
  cfg.solver.mc_iterations = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_all_curves(cfg, {Execution::kSerialReference, 1}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<std::int64_t>(cfg.num_areas()));
}

void BM_EstimateParallel(benchmark::State& state) {
  ScenarioConfig cfg = demo();
  cfg.solver.mc_iterations = state.range(0);
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_all_curves(cfg, {Execution::kParallel, threads}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<std::int64_t>(cfg.num_areas()));
}

struct ModelFixture {
  ScenarioConfig cfg = demo();
  UnitCurveSet curves;
  ProjectionModel model;
  DecisionMatrix n;
  ModelFixture()
      : curves([this] {
          cfg.solver.mc_iterations = 2000;
          return estimate_all_curves(cfg);
        }()),
        model(cfg, curves),
        n(zero_decision(cfg)) {
    std::mt19937_64 rng(1);
    for (std::size_t j = 0; j < n.areas(); ++j) {
      for (int y = 0; y < n.years(); ++y) n(j, y) = static_cast<std::int64_t>(rng() % 5);
    }
  }
};

void BM_ProjectFull(benchmark::State& state) {
  static const ModelFixture fx;
  for (auto _ : state) benchmark::DoNotOptimize(fx.model.project(fx.n));
}

void BM_ProjectIncremental(benchmark::State& state) {
  static const ModelFixture fx;
  ProjectionResult p = fx.model.project(fx.n);
  std::mt19937_64 rng(2);
  for (auto _ : state) {
    const std::size_t j = rng() % fx.n.areas();
    const int y = static_cast<int>(rng() % static_cast<std::uint64_t>(fx.n.years()));
    fx.model.apply(p, j, y, +1);
    fx.model.apply(p, j, y, -1);
    benchmark::DoNotOptimize(p.total.cost.data());
  }
  state.SetItemsProcessed(state.iterations() * 2);
}

void BM_Anneal(benchmark::State& state) {
  static const ModelFixture fx;
  ScenarioConfig cfg = fx.cfg;
  cfg.solver.sa_schedule.iterations = state.range(0);
  cfg.solver.sa_schedule.restarts = 1;
  const SearchContext ctx{cfg, fx.model, {Framing::k1A}};
  AnnealOptions opts;
  opts.threads = 1;
  opts.keep_trace = false;
  for (auto _ : state) benchmark::DoNotOptimize(anneal(ctx, opts));
}

}  // namespace

BENCHMARK(BM_EstimateSerial)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateParallel)->Args({2000, 1})->Args({10000, 1})->Args({10000, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProjectFull)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ProjectIncremental)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Anneal)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
