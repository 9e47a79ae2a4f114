#include <benchmark/benchmark.h>

#include <filesystem>

#include "sncslice/planner.hpp"
#include "sncslice/scenario_io.hpp"
#include "sncslice/simulator.hpp"
#include "sncslice/snc.hpp"

using namespace sncslice;

namespace {

const Scenario& table1() {
  static const Scenario s = load_scenario(std::filesystem::path(SNCSLICE_BENCH_DATA_DIR) / "table1.scn");
  return s;
}

void BM_ArrivalRho(benchmark::State& state) {
  const auto& f = table1().flows()[0];
  double theta = 1e-4;
  for (auto _ : state) benchmark::DoNotOptimize(arrival_rho(f, theta));
}
BENCHMARK(BM_ArrivalRho);

void BM_ServiceRho(benchmark::State& state) {
  const auto& s = table1();
  const ServiceModel m(s.ues()[1].mcs, s.mcs_table(), 6.0, s.numerology());
  for (auto _ : state) benchmark::DoNotOptimize(m.rho(1e-4));
}
BENCHMARK(BM_ServiceRho);

void BM_OptimizeDelayBound(benchmark::State& state) {
  const auto& s = table1();
  const ServiceModel m(s.ues()[2].mcs, s.mcs_table(), static_cast<double>(state.range(0)), s.numerology());
  for (auto _ : state) benchmark::DoNotOptimize(optimize_delay_bound(s.flows()[6], m));
}
BENCHMARK(BM_OptimizeDelayBound)->Arg(4)->Arg(12)->Arg(40);

void BM_Plan(benchmark::State& state) {
  const auto& s = table1();
  const auto layout = build_layout(s, static_cast<DeploymentOption>(state.range(0)));
  PlannerOptions options;
  options.memoize = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(plan(s, layout, options));
}
BENCHMARK(BM_Plan)
    ->ArgsProduct({{0, 1, 2, 4}, {0, 1}})
    ->ArgNames({"option", "memo"})
    ->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const auto& s = table1();
  const auto layout = build_layout(s, DeploymentOption::DO2);
  const auto allocation = plan(s, layout).evaluated.allocation;
  SimConfig c;
  c.duration_slots = state.range(0);
  c.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(s, layout, allocation, c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
