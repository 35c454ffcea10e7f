#include <benchmark/benchmark.h>

#include "moat/gadgets.hpp"
#include "moat/good_plan.hpp"
#include "moat/growth.hpp"
#include "moat/oracles.hpp"
#include "moat/random.hpp"
#include "moat/steiner.hpp"
#include "moat/subdivide.hpp"

using namespace moat;

namespace {

void BM_GrowthLowerBound(benchmark::State& state) {
  Instance inst = lower_bound_instance(int(state.range(0)), Rational(1, 6));
  MergePlan plan = scale(canonical_plan(inst), Rational(7, 6) * Rational(99, 100));
  GrowthOptions go;
  go.record_events = false;
  go.materialize_dual = false;
  go.stop_when_all_reach_root = true;
  for (auto _ : state) benchmark::DoNotOptimize(run(inst, plan, go).trace.online_objective());
  state.counters["vertices"] = double(inst.num_vertices());
}
BENCHMARK(BM_GrowthLowerBound)->Arg(6)->Arg(10)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_GrowthRandom(benchmark::State& state) {
  Rng rng(7);
  Instance inst = random_instance(rng, {int(state.range(0)), 12, int(state.range(0)), 20});
  MergePlan plan = random_ultrametric(rng, terminal_labels(inst), Rational(20), 40);
  for (auto _ : state) benchmark::DoNotOptimize(run(inst, plan).trace.online_objective());
}
BENCHMARK(BM_GrowthRandom)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_WellSubdivide(benchmark::State& state) {
  Rng rng(3);
  Instance inst = random_instance(rng, {40, 8, 40, 12});
  MergePlan plan = scale(canonical_plan(inst), Rational(7, 6) * Rational(99, 100));
  for (auto _ : state) benchmark::DoNotOptimize(make_well_subdivided(inst, plan).instance.num_vertices());
}
BENCHMARK(BM_WellSubdivide)->Unit(benchmark::kMillisecond);

void BM_DreyfusWagner(benchmark::State& state) {
  Rng rng(11);
  int k = int(state.range(0));
  Instance inst = random_instance(rng, {30, k, 30, 9});
  std::vector<VertexId> terms(inst.terminals().begin(), inst.terminals().end());
  for (auto _ : state) {
    SteinerSolver solver(inst, terms);
    benchmark::DoNotOptimize(solver.cost((std::uint32_t(1) << k) - 1));
  }
}
BENCHMARK(BM_DreyfusWagner)->Arg(6)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_BcrLp(benchmark::State& state) {
  Rng rng(5);
  Instance inst = random_instance(rng, {int(state.range(0)), 4, 6, 9});
  for (auto _ : state) benchmark::DoNotOptimize(bcr_value(inst));
}
BENCHMARK(BM_BcrLp)->Arg(7)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_GapBound(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gap_bound().bound_hi);
}
BENCHMARK(BM_GapBound)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
