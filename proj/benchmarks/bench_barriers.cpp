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

#include "fb/barriers.hpp"

namespace {

// Argument is the sample density per axis.
void BM_VerifyBarrier(benchmark::State& state, fb::BarrierCase kase) {
  const fb::BarrierSpec spec = *fb::shipped_constants(kase, 0.5, 0.01);
  const int density = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const fb::BarrierReport r = fb::verify_barrier(spec, density);
    benchmark::DoNotOptimize(r.passed);
  }
}
BENCHMARK_CAPTURE(BM_VerifyBarrier, case_a, fb::BarrierCase::A)
    ->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_VerifyBarrier, case_b, fb::BarrierCase::B)
    ->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_EvalMeridian(benchmark::State& state) {
  const fb::BarrierSpec spec = *fb::shipped_constants(fb::BarrierCase::A, 0.5, 0.01);
  double x = 0.0;
  for (auto _ : state) {
    x = x > 0.5 ? 0.0 : x + 1e-3;
    benchmark::DoNotOptimize(fb::eval_barrier_meridian(spec, 0.25, x));
  }
}
BENCHMARK(BM_EvalMeridian);

}  // namespace
