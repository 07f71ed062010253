#include <benchmark/benchmark.h>

#include <holonomy/holonomy.hpp>

namespace {

using namespace holonomy;

void BM_ExpmSkew(benchmark::State& state) {
  SplitMix64 rng(1);
  const CMatrix k = random_hermitian(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(expm_skew(k, 0.3));
}
BENCHMARK(BM_ExpmSkew)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_SpectralFrame(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SplitMix64 rng(2);
  const CMatrix rho = project(Frame(random_frame_matrix(rng, n, 2)), {0.7, 0.3});
  for (auto _ : state) benchmark::DoNotOptimize(spectral_frame(rho, 2));
}
BENCHMARK(BM_SpectralFrame)->Arg(3)->Arg(5)->Arg(10);

void BM_KksClosedForm(benchmark::State& state) {
  SplitMix64 rng(3);
  const SpectralWeights w{0.7, 0.3};
  const Frame f(random_frame_matrix(rng, 5, 2));
  const auto tangent = [&] {
    FrameTangent t{random_hermitian(rng, 2), random_complex(rng, 5, 2)};
    t.chi -= f.matrix() * (f.matrix().adjoint() * t.chi);
    return tangent_to_orbit(f, w, t);
  };
  const OrbitTangent a = tangent(), b = tangent();
  for (auto _ : state) benchmark::DoNotOptimize(kks_closed_form(a, b));
}
BENCHMARK(BM_KksClosedForm);

}  // namespace
