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
#include "fb/linearized.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fb/errors.hpp"
#include "fb/parallel.hpp"

namespace fb {
namespace {

// Face coefficients of the conservative stencil, per row of the last axis.
struct Stencil {
  int n = 2;
  int ny = 0;
  std::vector<double> vertical;  ///< face between rows j and j + 1
  std::vector<double> lateral;   ///< faces normal to x' on row j
};

void check_half_grid(const Grid& g) {
  const int n = g.dim();
  if (std::abs(g.origin()[static_cast<std::size_t>(n - 1)]) > 1e-12 * g.h()) {
    throw PreconditionError("the last grid axis must start at x_n = 0");
  }
}

Stencil make_stencil(const Grid& g, double s) {
  Stencil st;
  st.n = g.dim();
  st.ny = static_cast<int>(g.shape()[static_cast<std::size_t>(st.n - 1)]);
  const double h = g.h();
  const double hv = std::pow(h, st.n - 2);
  const double hl = std::pow(h, st.n - 3);
  st.vertical.resize(static_cast<std::size_t>(st.ny));
  st.lateral.resize(static_cast<std::size_t>(st.ny));
  for (int j = 0; j < st.ny; ++j) {
    st.vertical[static_cast<std::size_t>(j)] = hv * std::pow((j + 0.5) * h, s);
    const double lo = j == 0 ? 0.0 : (j - 0.5) * h;
    const double hi = (j + 0.5) * h;
    // Cell average of x_n^s over the face: removes the O(h^{s}) bias of the
    // midpoint weight next to x_n = 0.
    st.lateral[static_cast<std::size_t>(j)] =
        hl * (std::pow(hi, s + 1.0) - std::pow(lo, s + 1.0)) / (s + 1.0);
  }
  return st;
}

template <class F>
void for_each_neighbor(const Grid& g, const Stencil& st, std::size_t node, F&& f) {
  const Index3 idx = g.multi_index(node);
  const std::size_t j = idx[static_cast<std::size_t>(st.n - 1)];
  for (int k = 0; k < st.n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const std::size_t stride = g.stride(k);
    const bool vertical = k == st.n - 1;
    if (idx[ku] > 0) f(node - stride, vertical ? st.vertical[j - 1] : st.lateral[j]);
    if (idx[ku] + 1 < g.shape()[ku]) f(node + stride, vertical ? st.vertical[j] : st.lateral[j]);
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t chunks = chunk_count(a.size());
  std::vector<double> part(chunks, 0.0);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(a.size(), (c + 1) * kReductionChunk);
    double acc = 0.0;
    for (std::size_t i = c * kReductionChunk; i < end; ++i) acc += a[i] * b[i];
    part[c] = acc;
  });
  double sum = 0.0;
  for (double v : part) sum += v;
  return sum;
}

template <class F>
void for_nodes(std::size_t count, F&& f) {
  parallel_for(chunk_count(count), [&](std::size_t c) {
    const std::size_t end = std::min(count, (c + 1) * kReductionChunk);
    for (std::size_t i = c * kReductionChunk; i < end; ++i) f(i);
  });
}

}  // namespace

LinearizedProblem LinearizedProblem::from_function(double s, const Grid& grid,
                                                   const std::function<double(const Point&)>& g) {
  LinearizedProblem p;
  p.s = s;
  p.grid = grid;
  p.dirichlet.assign(grid.node_count(), 0.0);
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    if (p.is_dirichlet(i)) p.dirichlet[i] = g(grid.coords(i));
  }
  return p;
}

bool LinearizedProblem::is_dirichlet(std::size_t node) const {
  const int n = grid.dim();
  const Index3 idx = grid.multi_index(node);
  for (int k = 0; k < n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const std::size_t last = grid.shape()[ku] - 1;
    if (idx[ku] == last) return true;
    if (idx[ku] == 0 && k != n - 1) return true;
  }
  return false;
}

LinearizedSolution solve_linearized(const LinearizedProblem& prob, double tol, int max_iter) {
  const Grid& g = prob.grid;
  if (!(prob.s > -1.0)) throw DomainError("the weight exponent s must exceed -1");
  if (!(tol > 0.0) || max_iter < 1) throw PreconditionError("tol > 0 and max_iter >= 1 required");
  for (int k = 0; k < g.dim(); ++k) {
    if (g.shape()[static_cast<std::size_t>(k)] < 32) {
      throw PreconditionError("the linearized solver needs at least 32 nodes per axis");
    }
  }
  check_half_grid(g);
  if (prob.dirichlet.size() != g.node_count()) {
    throw PreconditionError("dirichlet data must hold one value per node");
  }
  const Stencil st = make_stencil(g, prob.s);
  const std::size_t N = g.node_count();
  std::vector<std::uint8_t> fixed(N);
  for (std::size_t i = 0; i < N; ++i) fixed[i] = prob.is_dirichlet(i) ? 1 : 0;

  std::vector<double> diag(N, 1.0), b(N, 0.0);
  for_nodes(N, [&](std::size_t i) {
    if (fixed[i]) return;
    double d = 0.0, rhs = 0.0;
    for_each_neighbor(g, st, i, [&](std::size_t j, double a) {
      d += a;
      if (fixed[j]) rhs += a * prob.dirichlet[j];
    });
    diag[i] = d;
    b[i] = rhs;
  });
  auto apply = [&](const std::vector<double>& x, std::vector<double>& out) {
    for_nodes(N, [&](std::size_t i) {
      if (fixed[i]) {
        out[i] = 0.0;
        return;
      }
      double acc = 0.0;
      for_each_neighbor(g, st, i, [&](std::size_t j, double a) {
        acc += a * (x[i] - (fixed[j] ? 0.0 : x[j]));
      });
      out[i] = acc;
    });
  };

  LinearizedSolution sol;
  std::vector<double> x(N, 0.0), r = b, z(N), p(N), q(N);
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm > 0.0) {
    for (std::size_t i = 0; i < N; ++i) z[i] = r[i] / diag[i];
    p = z;
    double rz = dot(r, z);
    bool done = false;
    for (int it = 0; it < max_iter; ++it) {
      apply(p, q);
      const double alpha = rz / dot(p, q);
      for_nodes(N, [&](std::size_t i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * q[i];
      });
      const double res = std::sqrt(dot(r, r)) / bnorm;
      sol.residual_history.push_back(res);
      sol.iterations = it + 1;
      if (res <= tol) {
        done = true;
        break;
      }
      for (std::size_t i = 0; i < N; ++i) z[i] = r[i] / diag[i];
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for_nodes(N, [&](std::size_t i) { p[i] = z[i] + beta * p[i]; });
    }
    if (!done) {
      std::ostringstream os;
      os << "linearized CG missed tol " << tol << " after " << max_iter << " iterations (residual "
         << sol.residual_history.back() << ")";
      throw ConvergenceError(os.str(), sol.residual_history);
    }
  }
  sol.phi = VectorField(g, 1);
  for (std::size_t i = 0; i < N; ++i) sol.phi.at(i)[0] = fixed[i] ? prob.dirichlet[i] : x[i];
  return sol;
}

double flux_balance(const LinearizedProblem& prob, const VectorField& phi, const Index3& lo,
                    const Index3& hi) {
  const Grid& g = prob.grid;
  check_half_grid(g);
  if (!(phi.grid() == g) || phi.components() != 1) {
    throw PreconditionError("phi must be a scalar field on the problem grid");
  }
  const int n = g.dim();
  for (int k = 0; k < n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    if (lo[ku] > hi[ku] || hi[ku] >= g.shape()[ku]) throw PreconditionError("invalid flux box");
  }
  const Stencil st = make_stencil(g, prob.s);
  auto inside = [&](const Index3& idx) {
    for (int k = 0; k < n; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      if (idx[ku] < lo[ku] || idx[ku] > hi[ku]) return false;
    }
    return true;
  };
  double out = 0.0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (!inside(g.multi_index(i))) continue;
    if (prob.is_dirichlet(i)) throw PreconditionError("flux box touches Dirichlet nodes");
    for_each_neighbor(g, st, i, [&](std::size_t j, double a) {
      if (!inside(g.multi_index(j))) out += a * (phi.at(i)[0] - phi.at(j)[0]);
    });
  }
  return out;
}

TransformResult transform_components(const VectorField& v, const PParams& params,
                                     TransformDirection direction) {
  const Grid& g = v.grid();
  check_half_grid(g);
  const int n = g.dim();
  const std::size_t ny = g.shape()[static_cast<std::size_t>(n - 1)];
  if (ny < 4) throw PreconditionError("the transform needs at least 4 rows in x_n");
  const int m = v.components();
  const double k = params.kappa;
  const double h = g.h();
  TransformResult out;
  out.field = VectorField(g, m);
  auto row = [&](std::size_t i) { return g.multi_index(i)[static_cast<std::size_t>(n - 1)]; };
  const std::size_t sy = g.stride(n - 1);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const std::size_t j = row(i);
    const double y = static_cast<double>(j) * h;
    for (int c = 0; c < m; ++c) {
      double& w = out.field.at(i)[static_cast<std::size_t>(c)];
      if (direction == TransformDirection::Inverse) {
        w = j == 0 ? 0.0 : std::pow(y, k) * v.at(i)[static_cast<std::size_t>(c)];
      } else if (j > 0) {
        w = v.at(i)[static_cast<std::size_t>(c)] / std::pow(y, k);
      }
      if (!std::isfinite(w)) throw NonFiniteError("nonfinite value in the x_n^kappa transform", i);
    }
  }
  if (direction == TransformDirection::Forward) {
    double vmax = 0.0, row1 = 0.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      const double a = v.norm(i);
      vmax = std::max(vmax, a);
      if (row(i) == 1) row1 = std::max(row1, a);
      if (row(i) != 0) continue;
      for (int c = 0; c < m; ++c) {
        const auto cu = static_cast<std::size_t>(c);
        out.field.at(i)[cu] = 3.0 * out.field.at(i + sy)[cu] - 3.0 * out.field.at(i + 2 * sy)[cu] +
                              out.field.at(i + 3 * sy)[cu];
      }
    }
    const double ytop = static_cast<double>(ny - 1) * h;
    out.growth_ratio = vmax > 0.0 ? row1 / (vmax * std::pow(h / ytop, k / 2.0)) : 0.0;
    out.growth_warning = out.growth_ratio > 1.0;
  }
  return out;
}

C1SigmaFit check_c1sigma(const VectorField& phi, const Point& x0, double radius) {
  const Grid& g = phi.grid();
  check_half_grid(g);
  if (phi.components() != 1) throw PreconditionError("check_c1sigma takes a scalar field");
  const int n = g.dim();
  const auto yn = static_cast<std::size_t>(n - 1);
  if (std::abs(x0[yn]) > 1e-12) throw PreconditionError("x0 must lie on x_n = 0");
  if (!g.contains(x0)) throw PreconditionError("x0 outside the grid");
  const Point up = g.upper();
  double rmax = up[yn];
  for (int k = 0; k + 1 < n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    rmax = std::min({rmax, x0[ku] - g.origin()[ku], up[ku] - x0[ku]});
  }
  const double R = radius > 0.0 ? radius : rmax;
  if (R > rmax + 1e-12) throw GeometryError("half-ball leaves the grid");
  double v0 = 0.0;
  interpolate(phi, x0, std::span<double>(&v0, 1));

  // Tangential slope by least squares over the inner quarter ball.
  const int t = n - 1;
  double A[2][2] = {{0, 0}, {0, 0}}, rhs[2] = {0, 0};
  std::size_t used = 0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const Point x = g.coords(i);
    if (distance(x, x0, n) > R / 4.0) continue;
    const double d = phi.at(i)[0] - v0;
    for (int a = 0; a < t; ++a) {
      const double xa = x[static_cast<std::size_t>(a)] - x0[static_cast<std::size_t>(a)];
      rhs[a] += xa * d;
      for (int b = 0; b < t; ++b) A[a][b] += xa * (x[static_cast<std::size_t>(b)] - x0[static_cast<std::size_t>(b)]);
    }
    ++used;
  }
  C1SigmaFit fit;
  fit.a.assign(static_cast<std::size_t>(t), 0.0);
  if (t == 1) {
    if (!(A[0][0] > 0.0)) throw InsufficientDataError("no nodes for the tangential slope");
    fit.a[0] = rhs[0] / A[0][0];
  } else {
    const double det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
    if (!(std::abs(det) > 0.0) || used < 3) {
      throw InsufficientDataError("no nodes for the tangential slope");
    }
    fit.a[0] = (rhs[0] * A[1][1] - rhs[1] * A[0][1]) / det;
    fit.a[1] = (A[0][0] * rhs[1] - A[1][0] * rhs[0]) / det;
  }

  for (double r = R; r / 2.0 >= g.h(); r /= 2.0) {
    double worst = -1.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      const Point x = g.coords(i);
      const double rho = distance(x, x0, n);
      if (!(rho > r / 2.0) || rho > r) continue;
      double lin = 0.0;
      for (int a = 0; a < t; ++a) {
        lin += fit.a[static_cast<std::size_t>(a)] *
               (x[static_cast<std::size_t>(a)] - x0[static_cast<std::size_t>(a)]);
      }
      worst = std::max(worst, std::abs(phi.at(i)[0] - v0 - lin));
    }
    if (worst < 0.0) continue;
    fit.radii.push_back(r);
    fit.residuals.push_back(worst);
  }
  if (fit.radii.size() < 4) throw InsufficientDataError("fewer than 4 dyadic annuli");

  double scale = 0.0;
  for (std::size_t i = 0; i < g.node_count(); ++i) scale = std::max(scale, std::abs(phi.at(i)[0]));
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < fit.radii.size(); ++k) {
    if (fit.residuals[k] > 1e-13 * (1.0 + scale)) {
      lx.push_back(std::log(fit.radii[k]));
      ly.push_back(std::log(fit.residuals[k]));
    }
  }
  double beta = 2.0;  // residuals at round-off: any exponent fits
  if (lx.size() >= 2) {
    const double mx = [&] { double s = 0; for (double v : lx) s += v; return s / lx.size(); }();
    const double my = [&] { double s = 0; for (double v : ly) s += v; return s / ly.size(); }();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
      sxy += (lx[k] - mx) * (ly[k] - my);
      sxx += (lx[k] - mx) * (lx[k] - mx);
    }
    beta = sxy / sxx;
  }
  fit.sigma = beta - 1.0;
  for (std::size_t k = 0; k < fit.radii.size(); ++k) {
    fit.C = std::max(fit.C, fit.residuals[k] / std::pow(fit.radii[k], beta));
  }
  return fit;
}

}  // namespace fb
