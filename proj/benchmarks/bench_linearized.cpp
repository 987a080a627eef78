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

#include "fb/grid.hpp"
#include "fb/linearized.hpp"

namespace {

// Quadratic data on [-1,1] x [0,1]; argument is 1/h.
void BM_SolveLinearized(benchmark::State& state) {
  const double s = 2.0 / 3.0;
  const int N = static_cast<int>(state.range(0));
  const fb::Grid g = fb::Grid::box(2, {-1, 0, 0}, {1, 1, 0}, 1.0 / N);
  const auto prob = fb::LinearizedProblem::from_function(
      s, g, [s](const fb::Point& x) { return x[1] * x[1] - (1 + s) * x[0] * x[0]; });
  for (auto _ : state) {
    const fb::LinearizedSolution sol = fb::solve_linearized(prob, 1e-12, 100000);
    benchmark::DoNotOptimize(sol.phi.values().data());
    state.counters["cg_iterations"] = sol.iterations;
  }
}
BENCHMARK(BM_SolveLinearized)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
