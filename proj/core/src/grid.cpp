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
#include "fb/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "fb/errors.hpp"

namespace fb {

double dot(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
  return s;
}

double distance(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)];
    s += d * d;
  }
  return std::sqrt(s);
}

Grid::Grid(int dim, const Point& origin, const Point& extent, double h)
    : dim_(dim), origin_(origin), h_(h) {
  if (dim != 2 && dim != 3) throw DomainError("grid dimension must be 2 or 3");
  if (!(h > 0.0)) throw DomainError("grid spacing must be positive");
  for (int i = 0; i < 3; ++i) {
    const auto a = static_cast<std::size_t>(i);
    if (i < dim) {
      if (!(extent[a] > 0.0)) throw DomainError("grid extent must be positive");
      shape_[a] = static_cast<std::size_t>(std::llround(extent[a] / h)) + 1;
    } else {
      origin_[a] = 0.0;
      shape_[a] = 1;
    }
  }
  stride_ = {shape_[1] * shape_[2], shape_[2], 1};
  count_ = shape_[0] * shape_[1] * shape_[2];
}

Grid Grid::box(int dim, const Point& lo, const Point& hi, double h) {
  Point extent{};
  for (std::size_t i = 0; i < 3; ++i) extent[i] = hi[i] - lo[i];
  return Grid(dim, lo, extent, h);
}

Point Grid::extent() const {
  Point e{};
  for (int i = 0; i < dim_; ++i) {
    const auto a = static_cast<std::size_t>(i);
    e[a] = static_cast<double>(shape_[a] - 1) * h_;
  }
  return e;
}

Point Grid::upper() const {
  Point u = origin_;
  const Point e = extent();
  for (std::size_t i = 0; i < 3; ++i) u[i] += e[i];
  return u;
}

double Grid::cell_volume() const { return std::pow(h_, dim_); }

Index3 Grid::multi_index(std::size_t node) const {
  Index3 idx{};
  idx[0] = node / stride_[0];
  node %= stride_[0];
  idx[1] = node / stride_[1];
  idx[2] = node % stride_[1];
  return idx;
}

std::size_t Grid::index(const Index3& idx) const {
  return idx[0] * stride_[0] + idx[1] * stride_[1] + idx[2];
}

Point Grid::coords(const Index3& idx) const {
  Point x{};
  for (int i = 0; i < dim_; ++i) {
    const auto a = static_cast<std::size_t>(i);
    x[a] = origin_[a] + static_cast<double>(idx[a]) * h_;
  }
  return x;
}

Point Grid::coords(std::size_t node) const { return coords(multi_index(node)); }

bool Grid::on_boundary(std::size_t node) const {
  const Index3 idx = multi_index(node);
  for (int i = 0; i < dim_; ++i) {
    const auto a = static_cast<std::size_t>(i);
    if (idx[a] == 0 || idx[a] + 1 == shape_[a]) return true;
  }
  return false;
}

bool Grid::contains(const Point& x, double slack) const {
  const Point up = upper();
  for (int i = 0; i < dim_; ++i) {
    const auto a = static_cast<std::size_t>(i);
    if (x[a] < origin_[a] - slack || x[a] > up[a] + slack) return false;
  }
  return true;
}

std::size_t Grid::nearest_node(const Point& x) const {
  Index3 idx{};
  for (int i = 0; i < dim_; ++i) {
    const auto a = static_cast<std::size_t>(i);
    const double s = std::round((x[a] - origin_[a]) / h_);
    idx[a] = static_cast<std::size_t>(std::clamp(s, 0.0, static_cast<double>(shape_[a] - 1)));
  }
  return index(idx);
}

bool Grid::operator==(const Grid& other) const {
  return dim_ == other.dim_ && origin_ == other.origin_ && h_ == other.h_ &&
         shape_ == other.shape_;
}

VectorField::VectorField(const Grid& grid, int components)
    : grid_(grid), m_(components) {
  if (components < 1) throw DomainError("a field needs at least one component");
  values_.assign(grid.node_count() * static_cast<std::size_t>(components), 0.0);
  boundary_.resize(grid.node_count());
  for (std::size_t i = 0; i < grid.node_count(); ++i) boundary_[i] = grid.on_boundary(i) ? 1 : 0;
}

double VectorField::norm(std::size_t node) const {
  double s = 0.0;
  for (double v : at(node)) s += v * v;
  return std::sqrt(s);
}

VectorField sample_exact(const Grid& grid, int components, const PointwiseRule& rule) {
  VectorField field(grid, components);
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    auto out = field.at(i);
    rule(grid.coords(i), out);
    for (double v : out) {
      if (!std::isfinite(v)) {
        throw NonFiniteError("nonfinite sample at node " + std::to_string(i), i);
      }
    }
  }
  return field;
}

VectorField sample_exact(const Grid& grid, const HalfSpaceSolution& solution) {
  if (solution.dim() != static_cast<std::size_t>(grid.dim())) {
    throw DomainError("half-space direction does not match the grid dimension");
  }
  return sample_exact(grid, static_cast<int>(solution.components()),
                      [&](const Point& x, std::span<double> out) {
                        solution.eval(std::span<const double>(x.data(), solution.dim()), out);
                      });
}

VectorField sample_exact(const Grid& grid, const OdeProfile& profile, const Point& e,
                         std::span<const double> f, double shift) {
  const int dim = grid.dim();
  return sample_exact(grid, static_cast<int>(f.size()),
                      [&](const Point& x, std::span<double> out) {
                        const double s = profile.value(dot(x, e, dim) + shift);
                        for (std::size_t c = 0; c < f.size(); ++c) out[c] = s * f[c];
                      });
}

namespace {

void require_stencil(const Grid& grid) {
  for (int i = 0; i < grid.dim(); ++i) {
    if (grid.shape()[static_cast<std::size_t>(i)] < 3) {
      throw PreconditionError("finite differences need at least 3 nodes per axis");
    }
  }
}

}  // namespace

VectorField laplacian(const VectorField& field) {
  const Grid& g = field.grid();
  require_stencil(g);
  const int m = field.components();
  VectorField out(g, m);
  const double inv_h2 = 1.0 / (g.h() * g.h());
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (field.is_boundary(i)) continue;
    auto dst = out.at(i);
    const auto ui = field.at(i);
    for (int d = 0; d < g.dim(); ++d) {
      const std::size_t s = g.stride(d);
      const auto up = field.at(i + s);
      const auto dn = field.at(i - s);
      for (int c = 0; c < m; ++c) {
        const auto k = static_cast<std::size_t>(c);
        dst[k] += (up[k] - 2.0 * ui[k] + dn[k]) * inv_h2;
      }
    }
  }
  return out;
}

VectorField gradient(const VectorField& field) {
  const Grid& g = field.grid();
  require_stencil(g);
  const int m = field.components();
  const int n = g.dim();
  VectorField out(g, m * n);
  const double h = g.h();
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const Index3 idx = g.multi_index(i);
    auto dst = out.at(i);
    for (int d = 0; d < n; ++d) {
      const auto a = static_cast<std::size_t>(d);
      const std::size_t s = g.stride(d);
      const bool has_lo = idx[a] > 0;
      const bool has_hi = idx[a] + 1 < g.shape()[a];
      for (int c = 0; c < m; ++c) {
        const auto k = static_cast<std::size_t>(c);
        double v = 0.0;
        if (has_lo && has_hi) {
          v = (field.at(i + s)[k] - field.at(i - s)[k]) / (2.0 * h);
        } else if (has_hi) {
          v = (field.at(i + s)[k] - field.at(i)[k]) / h;
        } else {
          v = (field.at(i)[k] - field.at(i - s)[k]) / h;
        }
        dst[static_cast<std::size_t>(c * n + d)] = v;
      }
    }
  }
  return out;
}

bool interpolate(const VectorField& field, const Point& x, std::span<double> out) {
  const Grid& g = field.grid();
  if (!g.contains(x, 1e-12 * (1.0 + g.h()))) return false;
  const int n = g.dim();
  Index3 base{};
  Point frac{};
  for (int d = 0; d < n; ++d) {
    const auto a = static_cast<std::size_t>(d);
    const double s = (x[a] - g.origin()[a]) / g.h();
    const double cell = std::clamp(std::floor(s), 0.0, static_cast<double>(g.shape()[a] - 2));
    base[a] = static_cast<std::size_t>(cell);
    frac[a] = std::clamp(s - cell, 0.0, 1.0);
  }
  std::fill(out.begin(), out.end(), 0.0);
  const int corners = 1 << n;
  for (int corner = 0; corner < corners; ++corner) {
    Index3 idx = base;
    double w = 1.0;
    for (int d = 0; d < n; ++d) {
      const auto a = static_cast<std::size_t>(d);
      if (corner & (1 << d)) {
        idx[a] += 1;
        w *= frac[a];
      } else {
        w *= 1.0 - frac[a];
      }
    }
    if (w == 0.0) continue;
    const auto v = field.at(g.index(idx));
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += w * v[c];
  }
  return true;
}

double unit_ball_volume(int dim) {
  return std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

double unit_sphere_area(int dim) { return dim * unit_ball_volume(dim); }

double BallQuadrature::volume() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double BallQuadrature::area() const {
  double s = 0.0;
  for (double w : shell_weights) s += w;
  return s;
}

BallQuadrature ball_quadrature(const Grid& grid, const Point& x0, double r) {
  const int n = grid.dim();
  const double h = grid.h();
  if (!(r > 0.0)) throw DomainError("ball radius must be positive");
  const Point lo = grid.origin();
  const Point hi = grid.upper();
  for (int d = 0; d < n; ++d) {
    const auto a = static_cast<std::size_t>(d);
    if (x0[a] - r < lo[a] - 0.5 * h - 1e-12 || x0[a] + r > hi[a] + 0.5 * h + 1e-12) {
      throw GeometryError("ball B_r(x0) leaves the grid box");
    }
  }
  BallQuadrature q;
  q.center = x0;
  q.radius = r;

  const int sub = n == 2 ? 16 : 8;
  const double half_diag = 0.5 * h * std::sqrt(static_cast<double>(n));
  const double cell = grid.cell_volume();
  const double sub_weight = cell / std::pow(sub, n);

  Index3 first{};
  Index3 last{};
  for (int d = 0; d < n; ++d) {
    const auto a = static_cast<std::size_t>(d);
    const double s0 = std::floor((x0[a] - r - h - lo[a]) / h);
    const double s1 = std::ceil((x0[a] + r + h - lo[a]) / h);
    first[a] = static_cast<std::size_t>(std::max(0.0, s0));
    last[a] = static_cast<std::size_t>(
        std::min(static_cast<double>(grid.shape()[a] - 1), std::max(0.0, s1)));
  }

  // Cells cut by the sphere or the box are subsampled; each subpoint spreads
  // its weight to the corners of the lattice cell holding it (multilinear),
  // so smooth integrands are integrated to second order.
  std::map<std::size_t, double> volume;
  std::map<std::size_t, double> shell;
  auto spread = [&](std::map<std::size_t, double>& acc, const Point& y, double w) {
    Index3 base{};
    Point frac{};
    for (int d = 0; d < n; ++d) {
      const auto a = static_cast<std::size_t>(d);
      const double s = (y[a] - lo[a]) / h;
      const double c = std::clamp(std::floor(s), 0.0, static_cast<double>(grid.shape()[a] - 2));
      base[a] = static_cast<std::size_t>(c);
      frac[a] = std::clamp(s - c, 0.0, 1.0);
    }
    for (int corner = 0; corner < (1 << n); ++corner) {
      Index3 idx = base;
      double cw = w;
      for (int d = 0; d < n; ++d) {
        const auto a = static_cast<std::size_t>(d);
        if (corner & (1 << d)) {
          idx[a] += 1;
          cw *= frac[a];
        } else {
          cw *= 1.0 - frac[a];
        }
      }
      if (cw != 0.0) acc[grid.index(idx)] += cw;
    }
  };

  Index3 idx{};
  for (idx[0] = first[0]; idx[0] <= last[0]; ++idx[0]) {
    for (idx[1] = first[1]; idx[1] <= last[1]; ++idx[1]) {
      for (idx[2] = first[2]; idx[2] <= last[2]; ++idx[2]) {
        const std::size_t node = grid.index(idx);
        const Point x = grid.coords(idx);
        const double rho = distance(x, x0, n);
        const bool boundary = grid.on_boundary(node);
        const bool near_sphere = std::abs(rho - r) <= 0.5 * h + half_diag;
        if (rho - half_diag >= r && !near_sphere) continue;
        if (rho + half_diag <= r && !boundary && !near_sphere) {
          volume[node] += cell;
          continue;
        }
        Point y{};
        std::array<int, 3> k{0, 0, 0};
        const int k2max = n >= 3 ? sub : 1;
        for (k[0] = 0; k[0] < sub; ++k[0]) {
          for (k[1] = 0; k[1] < sub; ++k[1]) {
            for (k[2] = 0; k[2] < k2max; ++k[2]) {
              for (int d = 0; d < n; ++d) {
                const auto a = static_cast<std::size_t>(d);
                y[a] = x[a] + h * ((k[a] + 0.5) / sub - 0.5);
              }
              if (!grid.contains(y, 0.0)) continue;
              const double ry = distance(y, x0, n);
              if (ry < r) spread(volume, y, sub_weight);
              if (std::abs(ry - r) < 0.5 * h) {
                spread(shell, y, sub_weight / h * std::pow(r / ry, n - 1));
              }
            }
          }
        }
      }
    }
  }
  for (const auto& [node, w] : volume) {
    q.nodes.push_back(node);
    q.weights.push_back(w);
  }
  for (const auto& [node, w] : shell) {
    q.shell_nodes.push_back(node);
    q.shell_weights.push_back(w);
  }
  return q;
}

}  // namespace fb
