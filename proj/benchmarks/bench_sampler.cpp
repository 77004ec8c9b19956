#include <benchmark/benchmark.h>

#include "randpoly/bodies.hpp"
#include "randpoly/polygon.hpp"
#include "randpoly/experiments.hpp"
#include "randpoly/sampler.hpp"

using namespace randpoly;

namespace {

void BM_Sample(benchmark::State& state, ConvexBody body) {
  const UniformSampler sampler(body);
  const auto n = static_cast<std::size_t>(state.range(0));
  PointCloud out(body.dim());
  std::uint64_t stream = 0;
  for (auto _ : state) {
    RngStream s(3, stream++);
    out.clear();
    sampler.sample_into(n, s, out);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

ConvexBody random_polygon_body() {
  RngStream s(4, 0);
  return polygon::to_body(random_disc_polygon(s));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Sample, disc, builtin_body("disc"))->Arg(4096);
BENCHMARK_CAPTURE(BM_Sample, ball5, builtin_body("ball5"))->Arg(4096);
BENCHMARK_CAPTURE(BM_Sample, simplex3, builtin_body("simplex3"))->Arg(4096);
BENCHMARK_CAPTURE(BM_Sample, cube3, builtin_body("cube3"))->Arg(4096);
BENCHMARK_CAPTURE(BM_Sample, polygon_rejection, random_polygon_body())->Arg(4096);
