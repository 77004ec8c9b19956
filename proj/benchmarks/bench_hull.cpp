#include <benchmark/benchmark.h>

#include "randpoly/bodies.hpp"
#include "randpoly/hull.hpp"
#include "randpoly/sampler.hpp"

using namespace randpoly;

namespace {

void BM_HullBall(benchmark::State& state, const char* body) {
  const ConvexBody k = builtin_body(body);
  const UniformSampler sampler(k);
  RngStream s(1, 0);
  const PointCloud pts = sampler.sample(static_cast<std::size_t>(state.range(0)), s).points;
  for (auto _ : state) benchmark::DoNotOptimize(convex_hull(pts));
  state.SetComplexityN(state.range(0));
}

void BM_MissingVolume(benchmark::State& state, const char* body) {
  const ConvexBody k = builtin_body(body);
  const UniformSampler sampler(k);
  RngStream s(2, 0);
  const PointCloud pts = sampler.sample(static_cast<std::size_t>(state.range(0)), s).points;
  for (auto _ : state) benchmark::DoNotOptimize(missing_volume(k, pts));
}

}  // namespace

BENCHMARK_CAPTURE(BM_HullBall, disc, "disc")->RangeMultiplier(4)->Range(64, 16384)->Complexity();
BENCHMARK_CAPTURE(BM_HullBall, ball3, "ball3")->RangeMultiplier(4)->Range(64, 16384)->Complexity();
BENCHMARK_CAPTURE(BM_HullBall, ball4, "ball4")->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK_CAPTURE(BM_MissingVolume, square, "square")->Arg(4096);
BENCHMARK_CAPTURE(BM_MissingVolume, cube3, "cube3")->Arg(4096);
