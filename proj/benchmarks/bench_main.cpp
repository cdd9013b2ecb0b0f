#include <benchmark/benchmark.h>

#include "oatecho/optimizer.hpp"
#include "oatecho/oracle.hpp"
#include "oatecho/qfi.hpp"
#include "oatecho/wigner.hpp"

using namespace oatecho;

static void BM_Sensitivity(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  double mu = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sensitivity({N, mu, -0.2, {0.1, 0.0}}));
    mu += 1e-9;
  }
}
BENCHMARK(BM_Sensitivity)->Arg(32)->Arg(4096);

static void BM_Landscape(benchmark::State& state) {
  const ParameterGrid grid = make_grid(0.0, kPi, 257, -kPi, kPi, 513);
  for (auto _ : state) {
    benchmark::DoNotOptimize(landscape(grid, 32, {}, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_Landscape)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

static void BM_FindLocalMaxima(benchmark::State& state) {
  const LandscapeGrid land = landscape(make_grid(0.0, kPi, 257, -kPi, kPi, 513), 32, {});
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_local_maxima(land));
  }
}
BENCHMARK(BM_FindLocalMaxima)->Unit(benchmark::kMillisecond);

static void BM_DirectSensitivity(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const ProtocolPoint p{N, 0.7, -0.5, {0.1, 0.0}};
  const OptimizedSensitivity s = sensitivity(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(direct_sensitivity(p, s.n_opt, s.m_opt));
  }
}
BENCHMARK(BM_DirectSensitivity)->Arg(16)->Arg(128)->Unit(benchmark::kMicrosecond);

static void BM_QfiMax(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qfi_max(1.0, 0.1, N));
  }
}
BENCHMARK(BM_QfiMax)->Arg(32)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_WignerCoefficients(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const DickeDensity rho = to_density(apply_oat(x_state(N), 0.5));
  multipole_basis(N);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wigner_field(rho, 0, 0));
  }
}
BENCHMARK(BM_WignerCoefficients)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
