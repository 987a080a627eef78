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

#include <random>
#include <vector>

#include "fb/energy.hpp"
#include "fb/exact.hpp"

namespace {

void BM_ProxRadius(benchmark::State& state) {
  const fb::PParams P = fb::make_params(0.5);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(0.0, 2.0);
  std::vector<double> z(4096);
  for (double& v : z) v = U(rng);
  for (auto _ : state) {
    double acc = 0.0;
    for (double v : z) acc += fb::prox_radius(P, v, 0.01);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(z.size()));
}
BENCHMARK(BM_ProxRadius);

void BM_ProxVector(benchmark::State& state) {
  const fb::PParams P = fb::make_params(0.3);
  const std::vector<double> z{0.4, -0.2, 0.1};
  std::vector<double> out(3);
  for (auto _ : state) {
    fb::prox_p(P, z, 0.02, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ProxVector);

}  // namespace
