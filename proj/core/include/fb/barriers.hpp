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
#include <span>
#include <string>
#include <vector>

#include "fb/exact.hpp"
#include "fb/grid.hpp"

namespace fb {

enum class BarrierCase { A, B };

/// Constants of the radial comparison functions. Case A is a supersolution
/// built on the exterior distance to a large ball below the origin, Case B a
/// subsolution built on the signed distance to a large ball above it.
struct BarrierSpec {
  BarrierCase kase = BarrierCase::A;
  PParams params{};
  int n = 2;
  double eps = 0.0;
  double c0 = 0.0;
  double K = 0.0;
  double C0 = 0.0;  ///< 2 K / c0
  double c1 = 0.0;  ///< 1 / (32 C0)
  double delta = 0.0;
  double eta = 0.0;
  double c_delta = 0.0;  ///< Harnack gain on the top face

  /// Builds a spec with C0 and c1 derived from (c0, K). c_delta defaults to
  /// default_c_delta(params, delta).
  static BarrierSpec make(BarrierCase kase, const PParams& params, int n, double eps, double c0,
                          double K, double delta, double eta,
                          std::optional<double> c_delta = std::nullopt);

  bool relations_hold() const;
  double radius() const { return C0 / eps; }
};

double default_c_delta(const PParams& params, double delta);

/// Ratio bound u0'(t)/u0''(t) = t/(kappa-1) <= M on (0,1].
inline double ratio_bound(const PParams& params) { return 1.0 / (params.kappa - 1.0); }

struct BarrierPoint {
  double d = 0.0;    ///< distance argument (signed in case B)
  double psi = 0.0;
  double lap = 0.0;  ///< analytic Laplacian; NaN where undefined
  double dn = 0.0;   ///< derivative along e_n
};

/// Evaluation in meridian coordinates: rho = |x'|, xn = x_n.
BarrierPoint eval_barrier_meridian(const BarrierSpec& spec, double rho, double xn);
double eval_barrier(const BarrierSpec& spec, const Point& x);

struct ConditionMargin {
  std::string name;
  double margin = 0.0;  ///< minimum over samples; +inf when the region is empty
  double rho = 0.0;     ///< witness in meridian coordinates
  double xn = 0.0;
  std::size_t samples = 0;
};

struct BarrierReport {
  std::vector<ConditionMargin> conditions;
  bool passed = false;
  const ConditionMargin& worst() const;
};

/// Samples every condition of the barrier's case on regions resolved by
/// sample_density points per axis (>= 32).
BarrierReport verify_barrier(const BarrierSpec& spec, int sample_density);

/// Throws VerificationFailure naming the worst condition when report failed.
void require_passed(const BarrierReport& report);

/// Case A family (1 - c0 eps) u_lambda(d): minimum relative supersolution
/// margin over the same region as the case A supersolution condition.
ConditionMargin verify_lambda_family(const BarrierSpec& spec, double lambda, int sample_density);

struct SearchStep {
  double c0 = 0.0;
  double K = 0.0;
  double delta = 0.0;
  double eta = 0.0;
  bool passed = false;
  std::string worst;
  double margin = 0.0;
};

struct ConstantsSearch {
  bool found = false;
  BarrierSpec spec;  ///< valid when found
  std::vector<SearchStep> trace;
};

/// Largest eps for which the barrier's other constants still verify, found by
/// geometric growth then bisection. Returns 0 when spec itself fails.
double estimate_eps_max(const BarrierSpec& spec, int sample_density);

/// Log-scale grid search over (K, c0, delta), taking for each candidate the
/// largest eta in 0.125 * 2^{-j/2} that passes. Screens at 32 samples per axis,
/// then confirms at 64 and 128.
ConstantsSearch search_constants(BarrierCase kase, const PParams& params, double eps, int n = 2);

/// search_constants that throws NoConstantsFound when nothing passes.
ConstantsSearch find_constants(BarrierCase kase, const PParams& params, double eps, int n = 2);

/// One row of the shipped constants table: the find_constants result for
/// (case, p, eps) in 2-D plus a summary of its search trace.
struct BarrierTableEntry {
  BarrierCase kase;
  double p;
  double eps;
  bool found;
  double c0;
  double K;
  double delta;
  double eta;
  int candidates;  ///< trace length
  int fail_counts[6];  ///< rejected candidates per condition index
};

inline constexpr int kBarrierTableVersion = 1;

std::span<const BarrierTableEntry> barrier_table();

/// Barrier from the shipped table, or nullopt when absent or not found.
std::optional<BarrierSpec> shipped_constants(BarrierCase kase, double p, double eps);

/// Condition names of a case in report order.
std::vector<std::string> condition_names(BarrierCase kase);

}  // namespace fb
