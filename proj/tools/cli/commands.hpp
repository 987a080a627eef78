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
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cli/cli.hpp"

namespace fb::cli {

namespace fs = std::filesystem;

struct ExactOptions {
  double p = 0.0;
  fs::path emit;
  std::optional<double> lambda;
  double t_max = 1.0;
  int rows = 1001;
  double step = 1e-4;
};

struct SolveOptions {
  fs::path config;
  fs::path out;
};

struct DiagnoseOptions {
  fs::path field;
  double p = 0.0;
  std::vector<double> center;
  std::string radii;  ///< a:b:step
  fs::path report;
  fs::path emit_fb;
  fs::path emit_weiss;
  fs::path emit_pgm;
  std::optional<double> r0;
  double eta = 0.5;
};

struct BarriersOptions {
  std::string kase;
  double p = 0.0;
  double eps = 0.0;
  int n = 2;
  bool auto_constants = false;
  std::optional<double> c0, K, delta, eta;
  int density = 64;
  bool eps_max = false;
  fs::path report;
  fs::path emit_trace;
};

struct LinearizedOptions {
  double p = 0.0;
  std::string s = "auto";
  int grid = 64;
  int n = 2;
  std::string data = "builtin:quadratic";
  unsigned long long seed = 1;
  double tol = 1e-12;
  int max_iter = 20000;
  double radius = 0.5;
  fs::path report;
  fs::path out_field;
};

struct SweepOptions {
  std::string p_list;
  std::string task = "growth";
  int grid = 64;
  fs::path out;
};

int run_exact(const ExactOptions& o, RunRecord& rec);
int run_solve(const SolveOptions& o, RunRecord& rec);
int run_diagnose(const DiagnoseOptions& o, RunRecord& rec);
int run_barriers(const BarriersOptions& o, RunRecord& rec);
int run_linearized(const LinearizedOptions& o, RunRecord& rec);
int run_sweep(const SweepOptions& o, RunRecord& rec);

/// a:b:step, inclusive of b within step / 1000.
std::vector<double> parse_range(const std::string& text);

}  // namespace fb::cli
