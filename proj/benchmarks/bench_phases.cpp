#include <benchmark/benchmark.h>

#include <holonomy/holonomy.hpp>

namespace {

using namespace holonomy;

void BM_GeometricPhasesCarried(benchmark::State& state) {
  const DiscretizedPath p = random_orbit_loop({0.7, 0.3}, 3, 3, 1).sample(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(geometric_phases(p));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GeometricPhasesCarried)->Arg(1000)->Arg(8000);

void BM_HorizontalLift(benchmark::State& state) {
  const DiscretizedPath full = random_orbit_loop({0.7, 0.3}, 3, 3, 2).sample(static_cast<int>(state.range(0)));
  std::vector<PathSample> samples;
  for (const auto& s : full.samples()) samples.push_back({s.s, s.rho, {}});
  const DiscretizedPath p(full.weights(), samples, true);
  for (auto _ : state) benchmark::DoNotOptimize(horizontal_lift(p));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HorizontalLift)->Arg(1000)->Arg(8000);

void BM_ConeSurfaceIntegral(benchmark::State& state) {
  const ParametrizedSurface s = cone_surface(random_orbit_loop({0.65, 0.35}, 3, 3, 7));
  const int res = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(surface_integral_fixed(s, 0, 1, 0, 1, res, res));
  state.SetItemsProcessed(state.iterations() * res * res);
}
BENCHMARK(BM_ConeSurfaceIntegral)->Arg(16)->Arg(64);

void BM_ClassifyCurve(benchmark::State& state) {
  const DiscretizedPath p = random_orbit_loop({0.7, 0.3}, 3, 2, 3, 0.3).sample(400);
  for (auto _ : state) benchmark::DoNotOptimize(classify_curve(p));
}
BENCHMARK(BM_ClassifyCurve);

}  // namespace
