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

#include <optional>
#include <vector>

#include "fb/exact.hpp"
#include "fb/grid.hpp"

namespace fb {

struct SolverConfig {
  /// Initial step in units of 1/L, L the Lipschitz constant of the discrete
  /// Dirichlet gradient. 1 is always safe.
  double tau0 = 1.0;
  double backtrack = 0.5;
  int max_iter = 50000;
  double tol_rel = 1e-12;
  double zero_threshold = 1e-10;
  /// Smoothing levels for warm-start legs on (|u|^2 + eps^2)^{p/2}, largest first.
  std::vector<double> continuation;
  int continuation_iters = 20000;
  /// Interior initial guess; zero when absent.
  std::optional<VectorField> seed_field;
  /// Monotone FISTA momentum with restart.
  bool accelerate = true;
  /// Potential weights below 1 solved first; they leave an oversized
  /// positivity set for the support search to trim.
  std::vector<double> weight_continuation{0.25, 0.5, 0.75};
  /// Deepest layer peeled per support-search move; 0 disables the search.
  int support_search_depth = 8;

  void validate() const;
};

struct SolveReport {
  int iterations = 0;
  std::vector<double> energy_history;        ///< exact-energy iterates, nonincreasing
  std::vector<double> continuation_history;  ///< smoothed-energy legs
  double final_step = 0.0;                   ///< in units of 1/L
  bool converged = false;
  int support_moves = 0;  ///< accepted free-boundary moves
  double wallclock = 0.0;
  double final_energy() const { return energy_history.empty() ? 0.0 : energy_history.back(); }
};

struct SolveResult {
  VectorField field;
  SolveReport report;
};

/// Forward-backward minimization of the discrete energy (see discrete_energy)
/// with the boundary nodes of bc held fixed.
SolveResult minimize(const VectorField& bc, const PParams& params, const SolverConfig& cfg);
SolveResult minimize(const Grid& grid, int components, const PointwiseRule& bc,
                     const PParams& params, const SolverConfig& cfg);

struct Profile1D {
  double a = 0.0;
  double h = 0.0;
  int m = 1;
  std::vector<double> x;
  std::vector<double> values;  ///< m per node
  SolveReport report;

  std::size_t size() const { return x.size(); }
  double value(std::size_t node, int c = 0) const {
    return values[node * static_cast<std::size_t>(m) + static_cast<std::size_t>(c)];
  }
  double norm(std::size_t node) const;
};

Profile1D solve_1d(const PParams& params, double a, double b, std::span<const double> ua,
                   std::span<const double> ub, double h, const SolverConfig& cfg);

}  // namespace fb
