#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "pnglab/fredholm.hpp"
#include "pnglab/kernels.hpp"
#include "pnglab/png.hpp"
#include "pnglab/rmt.hpp"
#include "pnglab/special.hpp"

using namespace pnglab;

static void BM_Airy(benchmark::State& state) {
  double x = -12.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(special::airy(x));
    x = x > 12.0 ? -12.0 : x + 0.01;
  }
}
BENCHMARK(BM_Airy);

static void BM_DistF2(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(fredholm::dist_f2(-1.5));
}
BENCHMARK(BM_DistF2)->Unit(benchmark::kMillisecond);

static void BM_DistGoe2(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(fredholm::dist_goe2(-1.5));
}
BENCHMARK(BM_DistGoe2)->Unit(benchmark::kMillisecond);

// Balanced finite-N kernel on a 16 x 16 edge grid.
static void BM_ContourBlock(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto src = SourceSpec::rank_one_omega(n, 0.0);
  std::vector<double> ep(src.epsilons), xs;
  for (double& e : ep) e /= std::sqrt(2.0);
  const double sc = std::sqrt(2.0) * std::pow(n, 1.0 / 6.0);
  for (int i = 0; i < 16; ++i) xs.push_back(std::sqrt(2.0 * n) + (-2.0 + 0.25 * i) / sc);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::contour_block(ep, 0.0, xs, 0.0, xs, {}));
}
BENCHMARK(BM_ContourBlock)->Arg(10)->Arg(100)->Arg(600)->Unit(benchmark::kMillisecond);

static void BM_PngRun(benchmark::State& state) {
  PngParams p;
  p.n = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(png::run(p, seed++));
}
BENCHMARK(BM_PngRun)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_TridiagonalTop(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng = make_stream(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rmt::top_eigenvalue(rmt::sample_gue_tridiagonal(n, rng)));
}
BENCHMARK(BM_TridiagonalTop)->Arg(100)->Arg(500);

static void BM_DenseEigs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng = make_stream(1, 0);
  const auto m = rmt::sample_gue(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(rmt::eigs_hermitian(m));
}
BENCHMARK(BM_DenseEigs)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
