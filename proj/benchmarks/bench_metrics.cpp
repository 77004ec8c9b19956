#include <benchmark/benchmark.h>

#include "randpoly/bodies.hpp"
#include "randpoly/ellipsoid.hpp"
#include "randpoly/experiments.hpp"
#include "randpoly/metrics.hpp"
#include "randpoly/polygon.hpp"
#include "randpoly/sampler.hpp"

using namespace randpoly;

namespace {

void BM_Mvee(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const UniformSampler sampler(builtin_body("ball" + std::to_string(d)));
  RngStream s(5, 0);
  const PointCloud pts = sampler.sample(static_cast<std::size_t>(state.range(1)), s).points;
  for (auto _ : state) benchmark::DoNotOptimize(mvee(pts));
}

void BM_PolygonHausdorffExact(benchmark::State& state) {
  RngStream a(6, 0);
  RngStream b(6, 1);
  const auto fg = polygon::normal_fan(random_disc_polygon(a));
  const auto fh = polygon::normal_fan(random_disc_polygon(b));
  for (auto _ : state) benchmark::DoNotOptimize(polygon::hausdorff(fg, fh));
}

void BM_HausdorffNet(benchmark::State& state) {
  RngStream a(7, 0);
  RngStream b(7, 1);
  const ConvexBody g = polygon::to_body(random_disc_polygon(a));
  const ConvexBody h = polygon::to_body(random_disc_polygon(b));
  const auto m = static_cast<std::size_t>(state.range(0));
  direction_net(2, m);
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff(g, h, m));
}

void BM_Nikodym2d(benchmark::State& state) {
  RngStream a(8, 0);
  RngStream b(8, 1);
  const auto g = random_disc_polygon(a);
  const auto h = random_disc_polygon(b);
  for (auto _ : state) benchmark::DoNotOptimize(nikodym_2d(g, h));
}

}  // namespace

BENCHMARK(BM_Mvee)->Args({2, 1000})->Args({3, 1000})->Args({5, 1000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PolygonHausdorffExact);
BENCHMARK(BM_HausdorffNet)->Arg(256)->Arg(4096);
BENCHMARK(BM_Nikodym2d);
