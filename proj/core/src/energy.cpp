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
#include "fb/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fb/errors.hpp"
#include "fb/parallel.hpp"

namespace fb {

namespace {

double norm_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// |grad u(node)|^2 as the mean of the squared one-sided differences on each
// axis. Summed with weight h^n this is the edge energy the solver minimizes,
// and an edge inside the dead zone contributes nothing.
double grad_sq(const VectorField& field, std::size_t node) {
  const Grid& g = field.grid();
  const Index3 idx = g.multi_index(node);
  const double inv_h2 = 1.0 / (g.h() * g.h());
  const auto u = field.at(node);
  double total = 0.0;
  for (int d = 0; d < g.dim(); ++d) {
    const auto a = static_cast<std::size_t>(d);
    const std::size_t s = g.stride(d);
    const bool has_lo = idx[a] > 0;
    const bool has_hi = idx[a] + 1 < g.shape()[a];
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t c = 0; c < u.size(); ++c) {
      if (has_lo) lo += (u[c] - field.at(node - s)[c]) * (u[c] - field.at(node - s)[c]);
      if (has_hi) hi += (field.at(node + s)[c] - u[c]) * (field.at(node + s)[c] - u[c]);
    }
    if (has_lo && has_hi) {
      total += 0.5 * (lo + hi) * inv_h2;
    } else {
      total += (lo + hi) * inv_h2;
    }
  }
  return total;
}

}  // namespace

EnergyBreakdown energy_local(const VectorField& field, const Point& x0, double r,
                             const PParams& params) {
  const BallQuadrature q = ball_quadrature(field.grid(), x0, r);
  EnergyBreakdown e;
  const double c = 2.0 / params.p;
  for (std::size_t k = 0; k < q.nodes.size(); ++k) {
    const std::size_t node = q.nodes[k];
    const double w = q.weights[k];
    const double m = field.norm(node);
    e.dirichlet += w * grad_sq(field, node);
    e.potential += w * c * std::pow(m, params.p);
    e.tilde_potential += w * c * m * m;
  }
  return e;
}

WeissRecord weiss(const VectorField& field, const Point& x0, double r, const PParams& params) {
  const BallQuadrature q = ball_quadrature(field.grid(), x0, r);
  const double c = 2.0 / params.p;
  WeissRecord rec;
  rec.r = r;
  for (std::size_t k = 0; k < q.nodes.size(); ++k) {
    const std::size_t node = q.nodes[k];
    rec.volume_part += q.weights[k] * (grad_sq(field, node) + c * std::pow(field.norm(node), params.p));
  }
  for (std::size_t k = 0; k < q.shell_nodes.size(); ++k) {
    const double m = field.norm(q.shell_nodes[k]);
    rec.surface_part += q.shell_weights[k] * m * m;
  }
  const int n = field.grid().dim();
  rec.W = std::pow(r, -(n + 2.0 * params.kappa - 2.0)) *
          (rec.volume_part - params.kappa / r * rec.surface_part);
  return rec;
}

double prox_radius(const PParams& params, double z_norm, double tau) {
  if (!(tau > 0.0)) throw DomainError("prox step must be positive");
  if (!(z_norm > 0.0)) return 0.0;
  const double p = params.p;
  const double s_crit = std::pow(2.0 * tau * (1.0 - p), 1.0 / (2.0 - p));
  if (s_crit + 2.0 * tau * std::pow(s_crit, p - 1.0) - z_norm > 0.0) return 0.0;
  // g is convex and increasing on [s_crit, inf); Newton from the right is monotone.
  double s = z_norm;
  for (int it = 0; it < 100; ++it) {
    const double sp = std::pow(s, p - 1.0);
    const double g = s + 2.0 * tau * sp - z_norm;
    const double dg = 1.0 + 2.0 * tau * (p - 1.0) * sp / s;
    if (!(dg > 0.0)) break;
    const double next = std::max(s - g / dg, s_crit);
    if (next >= s) break;
    s = next;
  }
  const double f0 = z_norm * z_norm / (2.0 * tau);
  const double fs = (s - z_norm) * (s - z_norm) / (2.0 * tau) + 2.0 / p * std::pow(s, p);
  if (fs >= f0 - 1e-14 * std::max(1.0, f0)) return 0.0;
  return s;
}

double prox_threshold(const PParams& params, double tau) {
  // F(s*) - F(0) changes sign once in |z|; bisect on that sign.
  const double p = params.p;
  const double s_crit = std::pow(2.0 * tau * (1.0 - p), 1.0 / (2.0 - p));
  double lo = s_crit + 2.0 * tau * std::pow(s_crit, p - 1.0);
  double hi = 2.0 * lo + 1.0;
  while (prox_radius(params, hi, tau) == 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (prox_radius(params, mid, tau) == 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

void prox_p(const PParams& params, std::span<const double> z, double tau, std::span<double> out) {
  const double zn = norm_of(z);
  const double s = prox_radius(params, zn, tau);
  if (s == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double scale = s / zn;
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] * scale;
}

std::vector<double> prox_p(const PParams& params, std::span<const double> z, double tau) {
  std::vector<double> out(z.size());
  prox_p(params, z, tau, out);
  return out;
}

SubadditivityResult subadditivity_check(std::span<const double> v, std::span<const double> w,
                                        const PParams& params) {
  if (v.size() != w.size()) throw DomainError("vectors differ in length");
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) d += (v[i] - w[i]) * (v[i] - w[i]);
  const double p = params.p;
  SubadditivityResult res;
  res.margin = std::pow(std::sqrt(d), p) - (std::pow(norm_of(v), p) - std::pow(norm_of(w), p));
  res.holds = res.margin >= -1e-15;
  return res;
}

DiscreteEnergy discrete_energy(const VectorField& field, const PParams& params) {
  const Grid& g = field.grid();
  const int n = g.dim();
  const double h = g.h();
  const double wd = std::pow(h, n - 2);
  const double wp = std::pow(h, n) * 2.0 / params.p;
  const std::size_t count = g.node_count();
  const std::size_t chunks = chunk_count(count);
  std::vector<double> dir(chunks, 0.0);
  std::vector<double> pot(chunks, 0.0);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * kReductionChunk;
    const std::size_t end = std::min(count, begin + kReductionChunk);
    double sd = 0.0;
    double sp = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const Index3 idx = g.multi_index(i);
      const auto u = field.at(i);
      for (int d = 0; d < n; ++d) {
        const auto a = static_cast<std::size_t>(d);
        if (idx[a] + 1 >= g.shape()[a]) continue;
        const auto v = field.at(i + g.stride(d));
        for (std::size_t k = 0; k < u.size(); ++k) sd += (u[k] - v[k]) * (u[k] - v[k]);
      }
      sp += std::pow(norm_of(u), params.p);
    }
    dir[c] = sd * wd;
    pot[c] = sp * wp;
  });
  DiscreteEnergy e;
  for (std::size_t c = 0; c < chunks; ++c) {
    e.dirichlet += dir[c];
    e.potential += pot[c];
  }
  return e;
}

}  // namespace fb
