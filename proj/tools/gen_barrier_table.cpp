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
// Regenerates core/src/barrier_table.cpp from find_constants.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "fb/barriers.hpp"

namespace {

void write_double(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: fb_gen_barrier_table <license.txt> <out.cpp>\n";
    return 2;
  }
  std::ifstream lic(argv[1]);
  std::ofstream os(argv[2]);
  if (!lic || !os) {
    std::cerr << "cannot open input or output\n";
    return 2;
  }
  os << lic.rdbuf();
  os << "// Generated by fb_gen_barrier_table. Do not edit.\n\n"
        "#include \"fb/barriers.hpp\"\n\nnamespace fb {\nnamespace {\n\n"
        "constexpr BarrierTableEntry kTable[] = {\n";
  for (fb::BarrierCase kase : {fb::BarrierCase::A, fb::BarrierCase::B}) {
    const auto names = fb::condition_names(kase);
    for (double p : {0.3, 0.5, 0.8}) {
      for (double eps : {0.005, 0.01, 0.02}) {
        const auto r = fb::search_constants(kase, fb::make_params(p), eps);
        int fails[6] = {0, 0, 0, 0, 0, 0};
        for (const auto& step : r.trace) {
          if (step.passed) continue;
          for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == step.worst) ++fails[i];
        }
        os << "    {BarrierCase::" << (kase == fb::BarrierCase::A ? 'A' : 'B') << ", " << p << ", "
           << eps << ", " << (r.found ? "true" : "false") << ", ";
        for (double v : {r.spec.c0, r.spec.K, r.spec.delta, r.spec.eta}) {
          write_double(os, r.found ? v : 0.0);
          os << ", ";
        }
        os << r.trace.size() << ", {";
        for (int i = 0; i < 6; ++i) os << fails[i] << (i < 5 ? ", " : "");
        os << "}},\n";
        std::cerr << (kase == fb::BarrierCase::A ? 'A' : 'B') << " p=" << p << " eps=" << eps
                  << (r.found ? " found" : " none") << '\n';
      }
    }
  }
  os << "};\n\n}  // namespace\n\nstd::span<const BarrierTableEntry> barrier_table() { return kTable; }\n\n"
        "}  // namespace fb\n";
  return os ? 0 : 1;
}
