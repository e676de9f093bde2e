#include <benchmark/benchmark.h>

#include "instanton/asymptotics.hpp"
#include "instanton/curvature.hpp"
#include "instanton/geodesics.hpp"

using namespace instanton;

namespace {

void BM_L2Ricci(benchmark::State& state) {
  const InstantonParams p = InstantonParams::generalized(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(l2_ricci(p).quadrature.value);
}
BENCHMARK(BM_L2Ricci);

void BM_PointFromPolar(benchmark::State& state) {
  const InstantonParams p = InstantonParams::generalized(0.5);
  const double R = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(point_from_polar(p, R, 0.7).u);
}
BENCHMARK(BM_PointFromPolar)->Arg(1)->Arg(100)->Arg(10000);

void BM_Distance(benchmark::State& state) {
  const InstantonParams p = InstantonParams::generalized(0.3);
  for (auto _ : state) benchmark::DoNotOptimize(distance(p, 3.0, 5.0));
}
BENCHMARK(BM_Distance);

void BM_Curvature4Fd(benchmark::State& state) {
  const InstantonParams p = InstantonParams::generalized(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(curvature4_fd(p, 1.0, 1.3).rm_norm_sq);
}
BENCHMARK(BM_Curvature4Fd);

void BM_AlmostBallQuadrature(benchmark::State& state) {
  const InstantonParams p = InstantonParams::generalized(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(almost_ball_volume_quadrature(p, 100.0).value);
}
BENCHMARK(BM_AlmostBallQuadrature);

void BM_GeodesicShoot(benchmark::State& state) {
  const InstantonParams p = InstantonParams::generalized(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(geodesic_shoot(p, 0.8, 10.0).size());
}
BENCHMARK(BM_GeodesicShoot);

}  // namespace

BENCHMARK_MAIN();
