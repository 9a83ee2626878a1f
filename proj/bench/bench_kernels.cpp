// Parallel kernels against their serial twins. With one hardware thread the pairs should
// time alike; the ratio is the OpenMP speedup elsewhere.

#include <benchmark/benchmark.h>

#include <cmath>

#include "pseudocurve/kernels.hpp"
#include "pseudocurve/operators.hpp"

using namespace pseudocurve;

namespace {

GridFunction sample_input(int nr) {
  auto g = DiscGrid::make(nr, 2 * nr);
  return GridFunction::sample(g, 2, [](cplx z, cplx* o) {
    o[0] = std::exp(z) * std::conj(z);
    o[1] = z * z * std::log(std::norm(z) + 1e-300);
  });
}

std::vector<kernels::Vec3> torus_knot(int n, double phase) {
  std::vector<kernels::Vec3> p(n);
  for (int k = 0; k < n; ++k) {
    const double t = 2 * M_PI * k / n + phase;
    const double r = 2 + std::cos(3 * t);
    p[k] = {r * std::cos(2 * t), r * std::sin(2 * t), std::sin(3 * t)};
  }
  return p;
}

void BM_CauchyGreen(benchmark::State& s) {
  const auto f = sample_input(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(cauchy_green(f));
}

void BM_CauchyGreenSerial(benchmark::State& s) {
  const auto f = sample_input(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(cauchy_green_serial(f));
}

void BM_Linking(benchmark::State& s) {
  const auto a = torus_knot(static_cast<int>(s.range(0)), 0), b = torus_knot(static_cast<int>(s.range(0)), 0.3);
  for (auto _ : s) benchmark::DoNotOptimize(kernels::gauss_linking_sum(a, b));
}

void BM_LinkingSerial(benchmark::State& s) {
  const auto a = torus_knot(static_cast<int>(s.range(0)), 0), b = torus_knot(static_cast<int>(s.range(0)), 0.3);
  for (auto _ : s) benchmark::DoNotOptimize(kernels::gauss_linking_sum_serial(a, b));
}

}  // namespace

BENCHMARK(BM_CauchyGreen)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CauchyGreenSerial)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Linking)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LinkingSerial)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
