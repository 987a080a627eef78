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
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fb/exact.hpp"

namespace fb {

/// Coordinates in R^n, n <= 3; unused trailing entries are zero.
using Point = std::array<double, 3>;
using Index3 = std::array<std::size_t, 3>;

double dot(const Point& a, const Point& b, int dim);
double distance(const Point& a, const Point& b, int dim);

/// Uniform isotropic node lattice on a box, n in {2, 3}. Node ordering is
/// row-major with the last axis fastest.
class Grid {
 public:
  Grid() = default;
  Grid(int dim, const Point& origin, const Point& extent, double h);

  /// Box [lo, hi] with spacing h; the upper corner is rounded to the lattice.
  static Grid box(int dim, const Point& lo, const Point& hi, double h);

  int dim() const { return dim_; }
  double h() const { return h_; }
  const Point& origin() const { return origin_; }
  const Index3& shape() const { return shape_; }
  Point extent() const;
  Point upper() const;
  std::size_t node_count() const { return count_; }
  std::size_t stride(int axis) const { return stride_[static_cast<std::size_t>(axis)]; }
  /// h^n, the measure of one node cell.
  double cell_volume() const;

  Index3 multi_index(std::size_t node) const;
  std::size_t index(const Index3& idx) const;
  Point coords(std::size_t node) const;
  Point coords(const Index3& idx) const;
  bool on_boundary(std::size_t node) const;
  bool contains(const Point& x, double slack = 1e-12) const;
  /// Node nearest to x (clamped to the box).
  std::size_t nearest_node(const Point& x) const;

  bool operator==(const Grid& other) const;

 private:
  int dim_ = 2;
  Point origin_{};
  double h_ = 1.0;
  Index3 shape_{1, 1, 1};
  Index3 stride_{1, 1, 1};
  std::size_t count_ = 1;
};

/// m-component grid function u = (u^1, ..., u^m); values stored node-major.
class VectorField {
 public:
  VectorField() = default;
  VectorField(const Grid& grid, int components);

  const Grid& grid() const { return grid_; }
  int components() const { return m_; }
  std::size_t node_count() const { return grid_.node_count(); }

  std::span<double> at(std::size_t node) {
    return {values_.data() + node * static_cast<std::size_t>(m_), static_cast<std::size_t>(m_)};
  }
  std::span<const double> at(std::size_t node) const {
    return {values_.data() + node * static_cast<std::size_t>(m_), static_cast<std::size_t>(m_)};
  }
  double norm(std::size_t node) const;
  bool is_boundary(std::size_t node) const { return boundary_[node] != 0; }
  const std::vector<std::uint8_t>& boundary_mask() const { return boundary_; }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool operator==(const VectorField& other) const {
    return grid_ == other.grid_ && m_ == other.m_ && values_ == other.values_;
  }

 private:
  Grid grid_;
  int m_ = 1;
  std::vector<double> values_;
  std::vector<std::uint8_t> boundary_;
};

/// Pointwise rule: writes the m components at x into out.
using PointwiseRule = std::function<void(const Point& x, std::span<double> out)>;

/// Node-wise evaluation. Throws NonFiniteError naming the offending node.
VectorField sample_exact(const Grid& grid, int components, const PointwiseRule& rule);
VectorField sample_exact(const Grid& grid, const HalfSpaceSolution& solution);
/// u_lambda(<x,e> + shift) f with the profile's even extension.
VectorField sample_exact(const Grid& grid, const OdeProfile& profile, const Point& e,
                         std::span<const double> f, double shift = 0.0);

/// 2n+1 point Laplacian on interior nodes; boundary nodes hold 0.
VectorField laplacian(const VectorField& field);
/// Central differences with one-sided rows on box faces. Component c, axis d
/// of the result sits at index c * n + d.
VectorField gradient(const VectorField& field);

/// Multilinear interpolation; returns false when x is outside the box.
bool interpolate(const VectorField& field, const Point& x, std::span<double> out);

/// Node weights for integrals over B_r(x0) and its boundary sphere.
struct BallQuadrature {
  Point center{};
  double radius = 0.0;
  std::vector<std::size_t> nodes;  ///< lexicographic
  std::vector<double> weights;     ///< h^n times the cell fraction inside the ball
  std::vector<std::size_t> shell_nodes;
  std::vector<double> shell_weights;  ///< surface-area share of the width-h shell

  double volume() const;
  double area() const;
};

/// Cell-fraction clipped quadrature. Cells are clipped to the grid box as well,
/// so balls may touch the box; a ball that leaves the box by more than h/2 is
/// a GeometryError.
BallQuadrature ball_quadrature(const Grid& grid, const Point& x0, double r);

/// Volume of the unit n-ball and area of the unit (n-1)-sphere.
double unit_ball_volume(int dim);
double unit_sphere_area(int dim);

}  // namespace fb
