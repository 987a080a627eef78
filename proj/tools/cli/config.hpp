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
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fb/errors.hpp"
#include "fb/exact.hpp"
#include "fb/grid.hpp"
#include "fb/solver.hpp"

namespace fb::cli {

/// Bad command line or config; exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Ordered key = value pairs; '#' starts a comment.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in);

std::vector<double> parse_list(const std::string& text, char sep = ',');
double parse_real(const std::string& text, const std::string& what);
int parse_int(const std::string& text, const std::string& what);
bool parse_bool(const std::string& text, const std::string& what);

/// Everything fb solve needs, with paths made absolute.
struct SolveJob {
  PParams params{};
  int n = 2;
  int m = 1;
  Point lo{};
  Point hi{};
  double h = 0.0;
  std::string bc_kind;  ///< halfspace or custom_file
  double bc_shift = 0.0;
  std::vector<double> bc_e;
  std::vector<double> bc_f;
  std::filesystem::path bc_file;
  SolverConfig solver;

  Grid grid() const;
  /// Boundary data as a field on grid(); interior values are ignored.
  VectorField boundary_field() const;
};

/// Rejects unknown keys and lists every missing required key at once.
SolveJob make_solve_job(const KeyValues& kv, const std::filesystem::path& base_dir);

}  // namespace fb::cli
