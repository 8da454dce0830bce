// Microbenchmarks for the building blocks that dominate experiment runtimes:
// surface assembly, placement energies, operator assembly, offset root
// finding, and geodesic shooting.
#include <benchmark/benchmark.h>

#include "wlab/metrics.hpp"
#include "wlab/mobius.hpp"
#include "wlab/reduction.hpp"
#include "wlab/surface.hpp"
#include "wlab/variational.hpp"

namespace {

using namespace wlab;

void BM_FundamentalForms(benchmark::State& state) {
  const SurfaceGrid grid = build_clifford_torus(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fundamental_forms(grid));
  }
}
BENCHMARK(BM_FundamentalForms)->Arg(64)->Arg(128)->Arg(256)
    ->Unit(benchmark::kMillisecond);

void BM_PlacedEnergy(benchmark::State& state) {
  const MetricModel model =
      normal_expansion(synthetic_curvature(Mat3::Identity() / 3.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        reduced_energy(model, 0.1, Vec3::Zero(), MobiusParam{}, false));
  }
}
BENCHMARK(BM_PlacedEnergy)->Unit(benchmark::kMillisecond);

void BM_PinchedEnergy(benchmark::State& state) {
  const MetricModel model =
      normal_expansion(synthetic_curvature(Mat3::Identity() / 3.0));
  MobiusParam param;
  param.omega = Eigen::Vector2d(0.95, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        reduced_energy(model, 0.05, Vec3::Zero(), param, false));
  }
}
BENCHMARK(BM_PinchedEnergy)->Unit(benchmark::kMillisecond);

void BM_OperatorAssembly(benchmark::State& state) {
  const int truncation = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        assemble_flat_operator(MobiusParam{}, truncation, {128}));
  }
}
BENCHMARK(BM_OperatorAssembly)->Arg(8)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_OffsetRootFind(benchmark::State& state) {
  const double eta = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(area_preserving_offset(eta));
  }
}
BENCHMARK(BM_OffsetRootFind)->Arg(5)->Arg(320)->Unit(benchmark::kMillisecond);

void BM_GeodesicShot(benchmark::State& state) {
  const MetricModel model = schwarzschild_metric(1.0);
  const Vec3 base(0.5, 0.0, 0.0);
  const Vec3 velocity(0.02, 0.015, -0.01);
  for (auto _ : state) {
    benchmark::DoNotOptimize(exp_map(model, base, velocity));
  }
}
BENCHMARK(BM_GeodesicShot)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
