// Copyright 2026 The freebound Authors
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
#include <benchmark/benchmark.h>

#include "fb/exact.hpp"
#include "fb/grid.hpp"
#include "fb/solver.hpp"

namespace {

// Flat two-component problem on the unit box; argument is 1/h.
void BM_MinimizeFlat(benchmark::State& state) {
  const fb::PParams P = fb::make_params(0.5);
  const double h = 1.0 / static_cast<double>(state.range(0));
  const fb::Grid g = fb::Grid::box(2, {-0.5, -0.5, 0}, {0.5, 0.5, 0}, h);
  const fb::HalfSpaceSolution s(P, {0, 1}, {1, 0}, 0.1);
  const fb::PointwiseRule bc = [&](const fb::Point& x, std::span<double> o) {
    s.eval(std::span<const double>(x.data(), 2), o);
  };
  int iters = 0;
  for (auto _ : state) {
    const fb::SolveResult r = fb::minimize(g, 2, bc, P, fb::SolverConfig{});
    iters = r.report.iterations;
    benchmark::DoNotOptimize(r.field.values().data());
  }
  state.counters["solver_iterations"] = iters;
}
BENCHMARK(BM_MinimizeFlat)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Solve1d(benchmark::State& state) {
  const fb::PParams P = fb::make_params(0.5);
  const std::vector<double> a{0.0}, b{P.cp};
  const double h = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    const fb::Profile1D prof = fb::solve_1d(P, -1.0, 1.0, a, b, h, fb::SolverConfig{});
    benchmark::DoNotOptimize(prof.values.data());
  }
}
BENCHMARK(BM_Solve1d)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
