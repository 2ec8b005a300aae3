// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include "shrinker/integrals.hpp"
#include "shrinker/variational.hpp"

using namespace shrinker;

namespace {

Execution policy(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_VolumeNodes(benchmark::State& state) {
  const auto m = catalog_model("cyl-s2xr2");
  QuadratureSpec q;
  q.resolution = 64;
  q.exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(volume_nodes(m, DomainSpec::full_manifold(), q, 1.0));
}

void BM_Stokes(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(stokes_selftest(32, 4, 1u, policy(state)));
}

void BM_FunctionalEval(benchmark::State& state) {
  const auto ct = catalog_model("conformal-torus");
  QuadratureSpec q;
  q.resolution = 32;
  q.rule = QuadratureRule::PeriodicTrapezoid;
  q.exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(functional_eval({1, 0}, ct, q));
}

void BM_StabilityScan(benchmark::State& state) {
  std::vector<ParameterPair> grid;
  for (int i = 0; i < 100000; ++i) grid.push_back({1.0 - 2e-5 * i, 0.3 + 1e-5 * i});
  const Execution exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(stability_scan(1.0, 6.0, grid, exec));
}

}  // namespace

// Arg 0 = serial reference, 1 = OpenMP.
BENCHMARK(BM_VolumeNodes)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Stokes)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FunctionalEval)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StabilityScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
