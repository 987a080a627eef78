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

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "fb/exact.hpp"
#include "fb/grid.hpp"

namespace fb {

/// Interface of the positivity set {|u| > threshold}.
struct FreeBoundary {
  int dim = 2;
  double h = 0.0;
  /// Grid edges (positive node, zero node).
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  /// Level crossing of |u| on each edge, by linear interpolation.
  std::vector<Point> crossings;
  std::vector<std::array<Point, 2>> segments;   ///< n = 2 polyline pieces
  std::vector<std::array<Point, 3>> triangles;  ///< n = 3 triangle soup

  bool empty() const { return edges.empty(); }
  /// Nearest crossing to x; throws PreconditionError when empty.
  Point nearest(const Point& x) const;
  double distance(const Point& x) const;
  /// max over crossings of |<x, e> - offset|.
  double max_distance_to_plane(const Point& e, double offset) const;
};

FreeBoundary extract_free_boundary(const VectorField& field, double zero_threshold = 1e-10);

/// Symmetric Hausdorff distance between the crossing sets.
double hausdorff(const FreeBoundary& a, const FreeBoundary& b);

struct SnapResult {
  Point point{};
  double distance = 0.0;
};

SnapResult snap_to_boundary(const FreeBoundary& fb, const Point& x);

struct FlatnessFit {
  Point e{};
  std::vector<double> f;
  double eps_sup = 0.0;
  double eps_dead = 0.0;
  double eps = 0.0;
};

FlatnessFit fit_flatness(const VectorField& field, const PParams& params, const Point& x0,
                         double r);

/// Hodograph transforms. Entries off the positivity set are NaN.
struct Hodograph {
  std::vector<double> component;  ///< (u0^{-1}((u.f)^+) - <x,e>) / eps
  std::vector<double> modulus;    ///< (u0^{-1}(|u|) - <x,e>) / eps
  std::size_t defined = 0;
};

Hodograph hodograph(const VectorField& field, const PParams& params, const Point& e, double eps,
                    std::span<const double> f = {});

struct TrapLevel {
  double r = 0.0;
  double a = 0.0;
  double b = 0.0;
  double width() const { return b - a; }
};

struct TrapSequence {
  Point center{};  ///< snapped onto the free boundary
  double snap_distance = 0.0;
  Point e{};
  std::vector<double> f;
  std::vector<TrapLevel> levels;
  bool nested() const;
};

/// Tightest u0(<x,e>+a_k) <= (u.f)^+ <= |u| <= u0(<x,e>+b_k) on B_{eta^k r0}(x0),
/// k = 0..K. Throws HypothesisError when the k = 0 trap is wider than
/// max_rel_width * r0 or the ball holds no positive node.
TrapSequence harnack_trap(const VectorField& field, const PParams& params, const Point& x0,
                          double r0, double eta, int K, double max_rel_width = 1.0);

struct ExponentFit {
  double kappa_hat = 0.0;
  std::vector<double> radii;
  std::vector<double> sup_values;
  double residual = 0.0;  ///< rms of the log-log regression
  double snap_distance = 0.0;
  bool boundary_point = true;  ///< x0 within h of the free boundary
};

ExponentFit fit_growth_exponent(const VectorField& field, const Point& x0,
                                const std::vector<double>& radii);

struct DecayCheck {
  double C = 0.0;
  double rho = 0.0;  ///< pair attaining C
  double r = 0.0;
};

/// Smallest C with Etilde(rho) <= C[(rho/r)^n Etilde(r) + r^n] over radius pairs rho < r.
DecayCheck decay_check(const VectorField& field, const PParams& params, const Point& x0,
                       const std::vector<double>& radii);

/// u(x0 + r y) / r^kappa sampled on the target grid.
VectorField blowup(const VectorField& field, const PParams& params, const Point& x0, double r,
                   const Grid& target);

struct SlabDecay {
  double eps = 0.0;
  double ratio = 0.0;  ///< max_{B_1/2} w / max_{B_1} w
  double c = 0.0;      ///< -eps log(ratio)
  int cg_iterations = 0;
};

/// Discrete harmonic w on B_1 and |x_n| < eps, w = 1 on the lateral part of
/// the sphere, w = 0 on |x_n| >= eps. Uses the spacing and dimension of grid.
SlabDecay slab_decay_check(double eps, const Grid& grid);

struct SlabFit {
  std::vector<SlabDecay> runs;
  double c = 0.0;  ///< minus the slope of log(ratio) against 1/eps
  double intercept = 0.0;
  double residual = 0.0;
};

SlabFit fit_slab_decay(const std::vector<double>& eps_list, const Grid& grid);

}  // namespace fb
