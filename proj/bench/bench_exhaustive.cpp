// Parallel exhaustive kernel against the serial reference, and one min-cut.

#include "perivar/exhaustive.hpp"
#include "perivar/maxflow.hpp"

#include <benchmark/benchmark.h>

using namespace perivar;

namespace {

EnergySpec line_spec(int n) {
  GridDomain g({n, n});
  MeasureData mu = hyperplane_measure(g, 1, n / 2, make_rational(9, 4));
  return make_spec(SignedPair::minus_only(mu), FullSpace{Region::all(g)});
}

void BM_ExhaustiveParallel(benchmark::State& state) {
  const EnergySpec spec = line_spec(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_minimize(spec, 30));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << spec.free_count()));
}

void BM_ExhaustiveSerial(benchmark::State& state) {
  const EnergySpec spec = line_spec(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_minimize_serial(spec, 30));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << spec.free_count()));
}

void BM_MinCut(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  GridDomain g({n, n});
  const BinaryEnergy e =
      assemble(SignedPair::minus_only(hyperplane_measure(g, 1, n / 2, 2)), FullSpace{Region::all(g)});
  for (auto _ : state) benchmark::DoNotOptimize(minimize(e));
}

}  // namespace

BENCHMARK(BM_ExhaustiveParallel)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExhaustiveSerial)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinCut)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
