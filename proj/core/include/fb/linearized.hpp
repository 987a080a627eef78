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

#include <functional>
#include <vector>

#include "fb/exact.hpp"
#include "fb/grid.hpp"

namespace fb {

/// div(x_n^s grad phi) = 0 on a box whose last axis starts at x_n = 0. The
/// x_n = 0 face carries the natural no-flux closure; every other face node
/// is Dirichlet with the value stored in dirichlet.
struct LinearizedProblem {
  double s = 0.0;
  Grid grid;
  std::vector<double> dirichlet;  ///< node_count entries, read on Dirichlet nodes only

  static LinearizedProblem from_function(double s, const Grid& grid,
                                         const std::function<double(const Point&)>& g);
  bool is_dirichlet(std::size_t node) const;
};

/// Exponents of the two linearizations: 2(kappa - 1) and 2 kappa.
inline double s_first(const PParams& params) { return 2.0 * (params.kappa - 1.0); }
inline double s_second(const PParams& params) { return 2.0 * params.kappa; }

struct LinearizedSolution {
  VectorField phi;  ///< one component
  int iterations = 0;
  std::vector<double> residual_history;  ///< |r| / |b| per iteration
};

/// Jacobi-preconditioned conjugate gradients on the symmetric conservative
/// stencil, to |r| <= tol |b|. Throws ConvergenceError with the residual
/// history after max_iter iterations.
LinearizedSolution solve_linearized(const LinearizedProblem& prob, double tol, int max_iter);

/// Net discrete flux out of the node box [lo, hi] (inclusive multi-indices),
/// which must avoid the Dirichlet nodes.
double flux_balance(const LinearizedProblem& prob, const VectorField& phi, const Index3& lo,
                    const Index3& hi);

enum class TransformDirection { Forward, Inverse };

struct TransformResult {
  VectorField field;
  /// max |v| on the first interior row over max |v| * (h / x_n,max)^{kappa/2};
  /// above 1 the data does not vanish fast enough at x_n = 0.
  double growth_ratio = 0.0;
  bool growth_warning = false;
};

/// Forward w = v / x_n^kappa with the x_n = 0 row extrapolated quadratically
/// from rows 1..3; inverse v = x_n^kappa w. Throws NonFiniteError.
TransformResult transform_components(const VectorField& v, const PParams& params,
                                     TransformDirection direction);

struct C1SigmaFit {
  std::vector<double> a;  ///< tangential gradient a', n - 1 entries
  double C = 0.0;
  double sigma = 0.0;
  std::vector<double> radii;      ///< outer radius of each dyadic annulus
  std::vector<double> residuals;  ///< max |phi - phi(x0) - a'.x'| per annulus
};

/// Fits |phi(x) - phi(x0) - a'.(x - x0)'| <= C |x - x0|^{1+sigma} over dyadic
/// annuli of the half-ball of the given radius (0: largest inside the grid).
/// a' is the least-squares tangential slope over the inner quarter ball.
/// Throws InsufficientDataError with fewer than 4 annuli.
C1SigmaFit check_c1sigma(const VectorField& phi, const Point& x0, double radius = 0.0);

}  // namespace fb
