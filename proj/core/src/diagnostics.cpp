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
#include "fb/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fb/energy.hpp"
#include "fb/errors.hpp"
#include "fb/parallel.hpp"

namespace fb {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kGolden = 0.6180339887498949;

// Nodes with |x - x0| <= r in lexicographic order.
std::vector<std::size_t> nodes_in_ball(const Grid& g, const Point& x0, double r) {
  Index3 first{};
  Index3 last{};
  for (int d = 0; d < 3; ++d) {
    const auto a = static_cast<std::size_t>(d);
    if (d >= g.dim()) continue;
    const double s0 = std::ceil((x0[a] - r - g.origin()[a]) / g.h() - 1e-9);
    const double s1 = std::floor((x0[a] + r - g.origin()[a]) / g.h() + 1e-9);
    const double top = static_cast<double>(g.shape()[a] - 1);
    first[a] = static_cast<std::size_t>(std::clamp(s0, 0.0, top));
    last[a] = static_cast<std::size_t>(std::clamp(s1, 0.0, top));
  }
  std::vector<std::size_t> out;
  Index3 idx{};
  for (idx[0] = first[0]; idx[0] <= last[0]; ++idx[0]) {
    for (idx[1] = first[1]; idx[1] <= last[1]; ++idx[1]) {
      for (idx[2] = first[2]; idx[2] <= last[2]; ++idx[2]) {
        if (distance(g.coords(idx), x0, g.dim()) <= r * (1.0 + 1e-12)) out.push_back(g.index(idx));
      }
    }
  }
  return out;
}

void require_ball(const Grid& g, const Point& x0, double r) {
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  const Point lo = g.origin();
  const Point hi = g.upper();
  for (int d = 0; d < g.dim(); ++d) {
    const auto a = static_cast<std::size_t>(d);
    if (x0[a] - r < lo[a] - 0.5 * g.h() - 1e-12 || x0[a] + r > hi[a] + 0.5 * g.h() + 1e-12) {
      throw GeometryError("ball leaves the grid box");
    }
  }
}

Point lerp(const Point& a, const Point& b, double t) {
  Point x{};
  for (std::size_t i = 0; i < 3; ++i) x[i] = a[i] + t * (b[i] - a[i]);
  return x;
}

// Crossing of |u| = level between nodes with magnitudes ma and mb.
Point crossing(const Point& xa, double ma, const Point& xb, double mb, double level) {
  const double t = ma == mb ? 0.5 : std::clamp((ma - level) / (ma - mb), 0.0, 1.0);
  return lerp(xa, xb, t);
}

void normalize(Point& e, int dim) {
  const double n = std::sqrt(dot(e, e, dim));
  for (int i = 0; i < dim; ++i) e[static_cast<std::size_t>(i)] /= n;
}

}  // namespace

Point FreeBoundary::nearest(const Point& x) const {
  if (crossings.empty()) throw PreconditionError("free boundary is empty");
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < crossings.size(); ++k) {
    const double d = fb::distance(crossings[k], x, dim);
    if (d < bd) {
      bd = d;
      best = k;
    }
  }
  return crossings[best];
}

double FreeBoundary::distance(const Point& x) const {
  if (crossings.empty()) return std::numeric_limits<double>::infinity();
  return fb::distance(nearest(x), x, dim);
}

double FreeBoundary::max_distance_to_plane(const Point& e, double offset) const {
  double worst = 0.0;
  for (const Point& c : crossings) worst = std::max(worst, std::abs(dot(c, e, dim) - offset));
  return worst;
}

FreeBoundary extract_free_boundary(const VectorField& field, double zero_threshold) {
  const Grid& g = field.grid();
  const int n = g.dim();
  FreeBoundary fb;
  fb.dim = n;
  fb.h = g.h();
  std::vector<double> mag(g.node_count());
  for (std::size_t i = 0; i < g.node_count(); ++i) mag[i] = field.norm(i);
  auto positive = [&](std::size_t i) { return mag[i] > zero_threshold; };

  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const Index3 idx = g.multi_index(i);
    for (int d = 0; d < n; ++d) {
      const auto a = static_cast<std::size_t>(d);
      if (idx[a] + 1 >= g.shape()[a]) continue;
      const std::size_t j = i + g.stride(d);
      if (positive(i) == positive(j)) continue;
      const std::size_t pos = positive(i) ? i : j;
      const std::size_t zer = positive(i) ? j : i;
      fb.edges.emplace_back(pos, zer);
      fb.crossings.push_back(crossing(g.coords(pos), mag[pos], g.coords(zer), mag[zer],
                                      zero_threshold));
    }
  }
  if (fb.edges.empty()) return fb;

  auto cut = [&](std::size_t a, std::size_t b) {
    return positive(a) ? crossing(g.coords(a), mag[a], g.coords(b), mag[b], zero_threshold)
                       : crossing(g.coords(b), mag[b], g.coords(a), mag[a], zero_threshold);
  };

  if (n == 2) {
    const std::size_t s0 = g.stride(0);
    const std::size_t s1 = g.stride(1);
    for (std::size_t i0 = 0; i0 + 1 < g.shape()[0]; ++i0) {
      for (std::size_t i1 = 0; i1 + 1 < g.shape()[1]; ++i1) {
        const std::size_t c[4] = {g.index({i0, i1, 0}), g.index({i0, i1, 0}) + s0,
                                  g.index({i0, i1, 0}) + s0 + s1, g.index({i0, i1, 0}) + s1};
        Point pts[4];
        int count = 0;
        for (int k = 0; k < 4; ++k) {
          const std::size_t a = c[k];
          const std::size_t b = c[(k + 1) % 4];
          if (positive(a) != positive(b)) pts[count++] = cut(a, b);
        }
        if (count == 2) {
          fb.segments.push_back({pts[0], pts[1]});
        } else if (count == 4) {
          // Saddle: the cell-center average decides which corners connect.
          const double centre = 0.25 * (mag[c[0]] + mag[c[1]] + mag[c[2]] + mag[c[3]]);
          const bool joined = (centre > zero_threshold) == positive(c[0]);
          if (joined) {
            fb.segments.push_back({pts[0], pts[1]});
            fb.segments.push_back({pts[2], pts[3]});
          } else {
            fb.segments.push_back({pts[3], pts[0]});
            fb.segments.push_back({pts[1], pts[2]});
          }
        }
      }
    }
    return fb;
  }

  // Marching tetrahedra, six tetrahedra around the main cube diagonal.
  static constexpr int kTets[6][4] = {{0, 1, 3, 7}, {0, 3, 2, 7}, {0, 2, 6, 7},
                                      {0, 6, 4, 7}, {0, 4, 5, 7}, {0, 5, 1, 7}};
  for (std::size_t i0 = 0; i0 + 1 < g.shape()[0]; ++i0) {
    for (std::size_t i1 = 0; i1 + 1 < g.shape()[1]; ++i1) {
      for (std::size_t i2 = 0; i2 + 1 < g.shape()[2]; ++i2) {
        std::size_t corner[8];
        for (int k = 0; k < 8; ++k) {
          corner[k] = g.index({i0 + static_cast<std::size_t>((k >> 2) & 1),
                               i1 + static_cast<std::size_t>((k >> 1) & 1),
                               i2 + static_cast<std::size_t>(k & 1)});
        }
        for (const auto& tet : kTets) {
          std::size_t in[4];
          std::size_t out[4];
          int ni = 0;
          int no = 0;
          for (int v : tet) {
            if (positive(corner[v])) {
              in[ni++] = corner[v];
            } else {
              out[no++] = corner[v];
            }
          }
          if (ni == 0 || no == 0) continue;
          if (ni == 1 || no == 1) {
            const std::size_t lone = ni == 1 ? in[0] : out[0];
            const std::size_t* rest = ni == 1 ? out : in;
            fb.triangles.push_back({cut(lone, rest[0]), cut(lone, rest[1]), cut(lone, rest[2])});
          } else {
            const Point p00 = cut(in[0], out[0]);
            const Point p01 = cut(in[0], out[1]);
            const Point p11 = cut(in[1], out[1]);
            const Point p10 = cut(in[1], out[0]);
            fb.triangles.push_back({p00, p01, p11});
            fb.triangles.push_back({p00, p11, p10});
          }
        }
      }
    }
  }
  return fb;
}

double hausdorff(const FreeBoundary& a, const FreeBoundary& b) {
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const Point& x : a.crossings) worst = std::max(worst, b.distance(x));
  for (const Point& x : b.crossings) worst = std::max(worst, a.distance(x));
  return worst;
}

SnapResult snap_to_boundary(const FreeBoundary& fb, const Point& x) {
  SnapResult s;
  s.point = fb.nearest(x);
  s.distance = distance(s.point, x, fb.dim);
  return s;
}

namespace {

struct FitData {
  std::vector<Point> y;                 // rescaled positions
  std::vector<std::vector<double>> u;   // rescaled values
  std::vector<double> mag;
};

double fit_objective(const FitData& data, const PParams& params, const Point& e,
                     const std::vector<double>& f, int dim, double* sup_out, double* dead_out) {
  double sup = 0.0;
  double dead = 0.0;
  for (std::size_t k = 0; k < data.y.size(); ++k) {
    const double t = dot(data.y[k], e, dim);
    const double prof = u0(params, t);
    double s = 0.0;
    for (std::size_t c = 0; c < f.size(); ++c) {
      const double diff = data.u[k][c] - prof * f[c];
      s += diff * diff;
    }
    sup = std::max(sup, std::sqrt(s));
    if (data.mag[k] > 0.0) dead = std::max(dead, -t);
  }
  if (sup_out) *sup_out = sup;
  if (dead_out) *dead_out = dead;
  return std::max(sup, dead);
}

// Golden-section minimisation of a 1-D objective on [lo, hi].
template <typename F>
double golden(F&& obj, double lo, double hi, double tol, double* best_value) {
  double a = lo;
  double b = hi;
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = obj(c);
  double fd = obj(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = obj(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = obj(d);
    }
  }
  if (fc <= fd) {
    *best_value = fc;
    return c;
  }
  *best_value = fd;
  return d;
}

}  // namespace

FlatnessFit fit_flatness(const VectorField& field, const PParams& params, const Point& x0,
                         double r) {
  const Grid& g = field.grid();
  const int n = g.dim();
  require_ball(g, x0, r);
  const std::vector<std::size_t> nodes = nodes_in_ball(g, x0, r);
  const int m = field.components();
  const double scale = std::pow(r, -params.kappa);

  FitData data;
  std::vector<double> mags;
  for (std::size_t node : nodes) {
    const Point x = g.coords(node);
    Point y{};
    for (int d = 0; d < n; ++d) {
      const auto a = static_cast<std::size_t>(d);
      y[a] = (x[a] - x0[a]) / r;
    }
    data.y.push_back(y);
    std::vector<double> v(field.at(node).begin(), field.at(node).end());
    for (double& q : v) q *= scale;
    data.u.push_back(std::move(v));
    data.mag.push_back(field.norm(node));
    mags.push_back(field.norm(node));
  }
  if (std::all_of(mags.begin(), mags.end(), [](double v) { return v == 0.0; })) {
    throw HypothesisError("|u| vanishes on the ball; flatness fit is degenerate");
  }
  std::vector<double> sorted = mags;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2),
                   sorted.end());
  const double median = sorted[sorted.size() / 2];

  FlatnessFit fit;
  fit.f.assign(static_cast<std::size_t>(m), 0.0);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double cut = median > 0.0 ? median : 0.0;
    if (mags[k] <= cut) continue;
    for (int c = 0; c < m; ++c) fit.f[static_cast<std::size_t>(c)] += field.at(nodes[k])[static_cast<std::size_t>(c)] / mags[k];
  }
  double fn = 0.0;
  for (double v : fit.f) fn += v * v;
  fn = std::sqrt(fn);
  if (fn == 0.0) throw HypothesisError("no coherent direction f on the ball");
  for (double& v : fit.f) v /= fn;

  // Initial e: mean gradient of |u| at non-boundary nodes of the ball.
  Point e0{};
  for (std::size_t node : nodes) {
    if (g.on_boundary(node)) continue;
    for (int d = 0; d < n; ++d) {
      const std::size_t s = g.stride(d);
      e0[static_cast<std::size_t>(d)] += field.norm(node + s) - field.norm(node - s);
    }
  }
  if (dot(e0, e0, n) == 0.0) e0[static_cast<std::size_t>(n - 1)] = 1.0;
  normalize(e0, n);

  auto objective = [&](const Point& e) { return fit_objective(data, params, e, fit.f, n, nullptr, nullptr); };
  Point best_e = e0;
  double best = objective(e0);

  if (n == 2) {
    const double theta0 = std::atan2(e0[1], e0[0]);
    auto at = [](double th) { return Point{std::cos(th), std::sin(th), 0.0}; };
    double best_theta = theta0;
    for (int k = 1; k < 120; ++k) {
      const double th = theta0 + k * 3.0 * kDeg;
      const double v = objective(at(th));
      if (v < best) {
        best = v;
        best_theta = th;
      }
    }
    double refined = 0.0;
    const double th = golden([&](double t) { return objective(at(t)); }, best_theta - 3.0 * kDeg,
                             best_theta + 3.0 * kDeg, 1e-7, &refined);
    best_e = at(best_theta);
    if (refined < best) {
      best = refined;
      best_e = at(th);
    }
  } else {
    // Orthonormal frame (e0, a, b); candidates within a 45 degree cone of e0.
    Point a{};
    const int k_min = std::abs(e0[0]) < 0.9 ? 0 : 1;
    a[static_cast<std::size_t>(k_min)] = 1.0;
    const double pr = dot(a, e0, 3);
    for (std::size_t i = 0; i < 3; ++i) a[i] -= pr * e0[i];
    normalize(a, 3);
    const Point b{e0[1] * a[2] - e0[2] * a[1], e0[2] * a[0] - e0[0] * a[2],
                  e0[0] * a[1] - e0[1] * a[0]};
    auto at = [&](double alpha, double phi) {
      Point e{};
      for (std::size_t i = 0; i < 3; ++i) {
        e[i] = std::cos(alpha) * e0[i] +
               std::sin(alpha) * (std::cos(phi) * a[i] + std::sin(phi) * b[i]);
      }
      return e;
    };
    double ba = 0.0;
    double bp = 0.0;
    for (int ia = 1; ia <= 15; ++ia) {
      const double alpha = ia * 3.0 * kDeg;
      const int nphi = std::max(1, static_cast<int>(std::ceil(360.0 * std::sin(alpha) / 3.0)));
      for (int ip = 0; ip < nphi; ++ip) {
        const double phi = 2.0 * std::numbers::pi * ip / nphi;
        const double v = objective(at(alpha, phi));
        if (v < best) {
          best = v;
          ba = alpha;
          bp = phi;
        }
      }
    }
    best_e = at(ba, bp);
    for (int pass = 0; pass < 2; ++pass) {
      double v = 0.0;
      const double na = golden([&](double t) { return objective(at(t, bp)); },
                               std::max(0.0, ba - 3.0 * kDeg), ba + 3.0 * kDeg, 1e-7, &v);
      if (v < best) {
        best = v;
        ba = na;
        best_e = at(ba, bp);
      }
      const double dphi = ba > 0.0 ? std::min(std::numbers::pi, 3.0 * kDeg / std::sin(ba)) : 0.0;
      if (dphi == 0.0) break;
      const double np = golden([&](double t) { return objective(at(ba, t)); }, bp - dphi,
                               bp + dphi, 1e-7, &v);
      if (v < best) {
        best = v;
        bp = np;
        best_e = at(ba, bp);
      }
    }
  }
  normalize(best_e, n);
  fit.e = best_e;
  fit.eps = fit_objective(data, params, best_e, fit.f, n, &fit.eps_sup, &fit.eps_dead);
  return fit;
}

Hodograph hodograph(const VectorField& field, const PParams& params, const Point& e, double eps,
                    std::span<const double> f) {
  if (!(eps > 0.0)) throw DomainError("hodograph needs eps > 0");
  const Grid& g = field.grid();
  const std::size_t m = static_cast<std::size_t>(field.components());
  std::vector<double> dir(m, 0.0);
  if (f.empty()) {
    dir[0] = 1.0;
  } else {
    if (f.size() != m) throw DomainError("direction f has the wrong length");
    dir.assign(f.begin(), f.end());
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Hodograph hg;
  hg.component.assign(g.node_count(), nan);
  hg.modulus.assign(g.node_count(), nan);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const double mag = field.norm(i);
    if (!(mag > 0.0)) continue;
    double uf = 0.0;
    for (std::size_t c = 0; c < m; ++c) uf += field.at(i)[c] * dir[c];
    const double t = dot(g.coords(i), e, g.dim());
    hg.component[i] = (u0_inverse(params, std::max(uf, 0.0)) - t) / eps;
    hg.modulus[i] = (u0_inverse(params, mag) - t) / eps;
    ++hg.defined;
  }
  return hg;
}

bool TrapSequence::nested() const {
  for (std::size_t k = 1; k < levels.size(); ++k) {
    const TrapLevel& p = levels[k - 1];
    const TrapLevel& q = levels[k];
    if (!(p.a <= q.a && q.a <= q.b && q.b <= p.b)) return false;
  }
  return true;
}

TrapSequence harnack_trap(const VectorField& field, const PParams& params, const Point& x0,
                          double r0, double eta, int K, double max_rel_width) {
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0,1)");
  if (K < 0) throw DomainError("K must be nonnegative");
  const Grid& g = field.grid();
  const FreeBoundary fb = extract_free_boundary(field, 0.0);
  if (fb.empty()) throw HypothesisError("field has no free boundary");
  TrapSequence seq;
  const SnapResult snap = snap_to_boundary(fb, x0);
  seq.center = snap.point;
  seq.snap_distance = snap.distance;
  if (snap.distance > g.h() * (1.0 + 1e-9)) {
    throw HypothesisError("trap center is farther than h from the free boundary");
  }
  const FlatnessFit fit = fit_flatness(field, params, seq.center, r0);
  seq.e = fit.e;
  seq.f = fit.f;
  const std::size_t m = static_cast<std::size_t>(field.components());
  double r = r0;
  for (int k = 0; k <= K; ++k, r *= eta) {
    if (r < 2.0 * g.h()) break;
    const std::vector<std::size_t> nodes = nodes_in_ball(g, seq.center, r);
    double a = std::numeric_limits<double>::infinity();
    double b = -std::numeric_limits<double>::infinity();
    bool any_positive = false;
    for (std::size_t node : nodes) {
      const double t = dot(g.coords(node), seq.e, g.dim());
      double uf = 0.0;
      for (std::size_t c = 0; c < m; ++c) uf += field.at(node)[c] * seq.f[c];
      a = std::min(a, u0_inverse(params, std::max(uf, 0.0)) - t);
      const double mag = field.norm(node);
      if (mag > 0.0) {
        any_positive = true;
        b = std::max(b, u0_inverse(params, mag) - t);
      }
    }
    if (!any_positive) {
      if (k == 0) throw HypothesisError("no positive node in the initial trap ball");
      break;
    }
    if (k == 0 && b - a > max_rel_width * r0) {
      throw HypothesisError("initial trap is too wide; field is not flat at this scale");
    }
    seq.levels.push_back({r, a, b});
  }
  return seq;
}

ExponentFit fit_growth_exponent(const VectorField& field, const Point& x0,
                                const std::vector<double>& radii) {
  const Grid& g = field.grid();
  if (radii.size() < 5) throw InsufficientDataError("growth fit needs at least 5 radii");
  ExponentFit fit;
  const FreeBoundary fb = extract_free_boundary(field, 0.0);
  fit.snap_distance = fb.distance(x0);
  fit.boundary_point = fit.snap_distance <= g.h() * (1.0 + 1e-9);
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  for (double r : radii) {
    if (r < 4.0 * g.h() * (1.0 - 1e-12)) throw PreconditionError("growth radii must be >= 4h");
    require_ball(g, x0, r);
    double sup = 0.0;
    for (std::size_t node : nodes_in_ball(g, x0, r)) sup = std::max(sup, field.norm(node));
    if (sup == 0.0) throw DomainError("sup |u| vanishes on a ball; center is inside the dead zone");
    fit.radii.push_back(r);
    fit.sup_values.push_back(sup);
    const double lx = std::log(r);
    const double ly = std::log(sup);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double k = static_cast<double>(radii.size());
  fit.kappa_hat = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  const double icpt = (sy - fit.kappa_hat * sx) / k;
  double rss = 0.0;
  for (std::size_t i = 0; i < fit.radii.size(); ++i) {
    const double res = std::log(fit.sup_values[i]) - icpt - fit.kappa_hat * std::log(fit.radii[i]);
    rss += res * res;
  }
  fit.residual = std::sqrt(rss / k);
  return fit;
}

DecayCheck decay_check(const VectorField& field, const PParams& params, const Point& x0,
                       const std::vector<double>& radii) {
  std::vector<double> rs = radii;
  std::sort(rs.begin(), rs.end());
  std::vector<double> et;
  for (double r : rs) {
    const EnergyBreakdown e = energy_local(field, x0, r, params);
    et.push_back(e.dirichlet + e.tilde_potential);
  }
  const int n = field.grid().dim();
  DecayCheck out;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      if (!(rs[i] < rs[j])) continue;
      const double denom = std::pow(rs[i] / rs[j], n) * et[j] + std::pow(rs[j], n);
      const double c = et[i] / denom;
      if (c > out.C) {
        out.C = c;
        out.rho = rs[i];
        out.r = rs[j];
      }
    }
  }
  return out;
}

VectorField blowup(const VectorField& field, const PParams& params, const Point& x0, double r,
                   const Grid& target) {
  if (!(r > 0.0)) throw DomainError("blowup scale must be positive");
  if (target.dim() != field.grid().dim()) throw DomainError("target grid dimension mismatch");
  const double scale = std::pow(r, -params.kappa);
  VectorField out(target, field.components());
  for (std::size_t i = 0; i < target.node_count(); ++i) {
    const Point y = target.coords(i);
    Point x{};
    for (int d = 0; d < target.dim(); ++d) {
      const auto a = static_cast<std::size_t>(d);
      x[a] = x0[a] + r * y[a];
    }
    auto dst = out.at(i);
    if (!interpolate(field, x, dst)) throw GeometryError("blowup image leaves the source grid");
    for (double& v : dst) v *= scale;
  }
  return out;
}

SlabDecay slab_decay_check(double eps, const Grid& grid) {
  const int n = grid.dim();
  const double h = grid.h();
  if (!(eps > 4.0 * h)) throw PreconditionError("slab decay needs eps > 4h");
  for (int d = 0; d < n; ++d) {
    const auto a = static_cast<std::size_t>(d);
    if (grid.origin()[a] > -1.0 + 1e-9 || grid.upper()[a] < 1.0 - 1e-9) {
      throw GeometryError("slab decay grid must cover [-1,1]^n");
    }
  }
  // 0: unknown, 1: fixed at 0, 2: fixed at 1, 3: outside.
  const std::size_t count = grid.node_count();
  std::vector<std::uint8_t> kind(count, 3);
  std::vector<std::size_t> unknown_of(count, 0);
  std::vector<std::size_t> unknowns;
  const auto nn = static_cast<std::size_t>(n - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const Point x = grid.coords(i);
    const double rad = std::sqrt(dot(x, x, n));
    if (std::abs(x[nn]) >= eps) {
      kind[i] = 1;
    } else if (rad >= 1.0) {
      kind[i] = 2;
    } else {
      kind[i] = 0;
      unknown_of[i] = unknowns.size();
      unknowns.push_back(i);
    }
  }
  const std::size_t nu = unknowns.size();
  std::vector<double> rhs(nu, 0.0);
  for (std::size_t k = 0; k < nu; ++k) {
    const std::size_t i = unknowns[k];
    for (int d = 0; d < n; ++d) {
      const std::size_t s = grid.stride(d);
      for (std::size_t j : {i - s, i + s}) {
        if (kind[j] == 2) rhs[k] += 1.0;
      }
    }
  }
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t k = 0; k < nu; ++k) {
      const std::size_t i = unknowns[k];
      double v = 2.0 * n * x[k];
      for (int d = 0; d < n; ++d) {
        const std::size_t s = grid.stride(d);
        for (std::size_t j : {i - s, i + s}) {
          if (kind[j] == 0) v -= x[unknown_of[j]];
        }
      }
      y[k] = v;
    }
  };
  std::vector<double> w(nu, 0.0);
  std::vector<double> res = rhs;
  std::vector<double> dir = res;
  std::vector<double> q(nu);
  double rr = 0.0;
  for (double v : res) rr += v * v;
  const double target = 1e-26 * std::max(rr, 1e-300);
  std::vector<double> history;
  SlabDecay out;
  out.eps = eps;
  int it = 0;
  const int max_iter = 100000;
  while (rr > target && it < max_iter) {
    apply(dir, q);
    double pq = 0.0;
    for (std::size_t k = 0; k < nu; ++k) pq += dir[k] * q[k];
    const double alpha = rr / pq;
    double rr_new = 0.0;
    for (std::size_t k = 0; k < nu; ++k) {
      w[k] += alpha * dir[k];
      res[k] -= alpha * q[k];
      rr_new += res[k] * res[k];
    }
    for (std::size_t k = 0; k < nu; ++k) dir[k] = res[k] + rr_new / rr * dir[k];
    rr = rr_new;
    history.push_back(std::sqrt(rr));
    ++it;
  }
  if (rr > target) throw ConvergenceError("slab CG did not converge", history);
  out.cg_iterations = it;
  double inner = 0.0;
  double outer = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const Point x = grid.coords(i);
    const double rad = std::sqrt(dot(x, x, n));
    const double v = kind[i] == 0 ? w[unknown_of[i]] : kind[i] == 2 ? 1.0 : 0.0;
    if (kind[i] == 3) continue;
    if (rad <= 0.5) inner = std::max(inner, v);
    if (rad <= 1.0 + 0.5 * h) outer = std::max(outer, v);
  }
  out.ratio = outer > 0.0 ? inner / outer : 0.0;
  out.c = out.ratio > 0.0 ? -eps * std::log(out.ratio) : std::numeric_limits<double>::infinity();
  return out;
}

SlabFit fit_slab_decay(const std::vector<double>& eps_list, const Grid& grid) {
  if (eps_list.size() < 2) throw InsufficientDataError("slab fit needs at least two eps values");
  SlabFit fit;
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  for (double eps : eps_list) {
    fit.runs.push_back(slab_decay_check(eps, grid));
    const double x = 1.0 / eps;
    const double y = std::log(fit.runs.back().ratio);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(eps_list.size());
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  fit.c = -slope;
  fit.intercept = (sy - slope * sx) / k;
  double rss = 0.0;
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const double r = std::log(fit.runs[i].ratio) - fit.intercept - slope / eps_list[i];
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / k);
  return fit;
}

}  // namespace fb
