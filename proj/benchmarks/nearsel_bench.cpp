// Copyright 2026 The nearsel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Microbenchmarks for the hot geometry and refinement queries.

#include <benchmark/benchmark.h>

#include <memory>
#include <string>
#include <vector>

#include "nearsel/config.hpp"
#include "nearsel/pipeline.hpp"
#include "nearsel/sampling.hpp"
#include "nearsel/shape.hpp"

namespace {

using namespace nearsel;

std::vector<Point> random_points(std::size_t n, double lo, double hi, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(make_point({rng.uniform(lo, hi), rng.uniform(lo, hi)}));
  return out;
}

Scenario small_scenario(std::size_t samples) {
  RunConfig cfg = load_config(std::string(NEARSEL_SCENARIO_DIR) + "/translating_disk.cfg");
  cfg.set("run.samples", std::to_string(samples));
  return build_scenario(cfg);
}

void BM_DistPointStar(benchmark::State& state) {
  const Shape s = Shape::regular_star(make_point({0, 0}), static_cast<int>(state.range(0)), 2.0, 0.8, 0.1);
  const auto pts = random_points(1024, -3, 3, 1);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(dist_point_shape(pts[i++ & 1023], s));
}
BENCHMARK(BM_DistPointStar)->Arg(5)->Arg(50);

void BM_DistPointConvex(benchmark::State& state) {
  const Shape s = Shape::regular_star(make_point({0, 0}), static_cast<int>(state.range(0)), 1.0, 0.95, 0.0);
  const Shape hull = Shape::convex_polytope(s.as_star()->vertices);
  const auto pts = random_points(1024, -3, 3, 2);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(dist_point_shape(pts[i++ & 1023], hull));
}
BENCHMARK(BM_DistPointConvex)->Arg(8)->Arg(64);

void BM_HausdorffStars(benchmark::State& state) {
  const Shape a = Shape::regular_star(make_point({0, 0}), 7, 2.0, 0.8, 0.0);
  const Shape b = Shape::regular_star(make_point({0.3, -0.2}), 7, 2.1, 0.7, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff(a, b));
}
BENCHMARK(BM_HausdorffStars);

void BM_HausdorffClouds(benchmark::State& state) {
  const auto a = random_points(static_cast<std::size_t>(state.range(0)), 0, 1, 3);
  const auto b = random_points(static_cast<std::size_t>(state.range(0)), 0, 1, 4);
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff(std::span<const Point>(a), std::span<const Point>(b)));
}
BENCHMARK(BM_HausdorffClouds)->Arg(64)->Arg(200);

void BM_LocateRefined(benchmark::State& state) {
  const Scenario sc = small_scenario(100);
  const auto pts = domain_samples(sc.domain, 1024, 5);
  const int depth = static_cast<int>(state.range(0));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(locate_refined(sc.domain, pts[i++ & 1023], depth));
}
BENCHMARK(BM_LocateRefined)->Arg(2)->Arg(6);

// Shared construction for the query benchmarks below.
const Construction& construction() {
  static const Construction c = prepare(small_scenario(500));
  return c;
}

void BM_ChainAt(benchmark::State& state) {
  const Construction& c = construction();
  const auto pts = domain_samples(c.sys->domain(), 1024, 6);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(c.sys->chain_at(pts[i++ & 1023]));
}
BENCHMARK(BM_ChainAt);

void BM_Prepare(benchmark::State& state) {
  const Scenario sc = small_scenario(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(prepare(sc));
}
BENCHMARK(BM_Prepare)->Arg(500)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
