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
#include "fb/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "fb/energy.hpp"
#include "fb/errors.hpp"
#include "fb/parallel.hpp"

namespace fb {

void SolverConfig::validate() const {
  if (!(tau0 > 0.0)) throw DomainError("tau0 must be positive");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw DomainError("backtrack must lie in (0,1)");
  if (!(tol_rel > 0.0)) throw DomainError("tol_rel must be positive");
  if (max_iter < 1) throw DomainError("max_iter must be at least 1");
  for (double e : continuation) {
    if (!(e > 0.0)) throw DomainError("continuation levels must be positive");
  }
  for (double w : weight_continuation) {
    if (!(w > 0.0 && w <= 1.0)) throw DomainError("weight continuation levels must lie in (0,1]");
  }
  if (support_search_depth < 0) throw DomainError("support_search_depth must be nonnegative");
}

double Profile1D::norm(std::size_t node) const {
  double s = 0.0;
  for (int c = 0; c < m; ++c) s += value(node, c) * value(node, c);
  return std::sqrt(s);
}

namespace {

// Shape-agnostic lattice shared by the n-D and 1-D drivers.
struct Lattice {
  int dim = 1;
  int m = 1;
  double h = 1.0;
  std::size_t count = 0;
  std::vector<std::size_t> stride;
  std::vector<std::uint8_t> boundary;
  std::vector<std::uint8_t> forward;  // bit d set: node has a +neighbour on axis d
};

class Engine {
 public:
  Engine(Lattice lat, const PParams& params, const SolverConfig& cfg)
      : lat_(std::move(lat)), params_(params), cfg_(cfg) {
    wd_ = std::pow(lat_.h, lat_.dim - 2);
    wn_ = std::pow(lat_.h, lat_.dim);
    lip_ = 8.0 * lat_.dim * wd_;
    chunks_ = chunk_count(lat_.count);
  }

  SolveReport run(std::vector<double>& u) {
    const auto t0 = std::chrono::steady_clock::now();
    SolveReport rep;
    // The energy is nonnegative, so a zero-energy start is already a global minimum.
    if (energy(u, 1.0, 0.0) == 0.0) {
      rep.energy_history.push_back(0.0);
      rep.converged = true;
      rep.final_step = cfg_.tau0;
      return rep;
    }
    for (double eps : cfg_.continuation) smooth_leg(u, eps, rep);
    for (double w : cfg_.weight_continuation) {
      std::vector<double> leg;
      converge(u, w, leg, rep);
      rep.continuation_history.insert(rep.continuation_history.end(), leg.begin(), leg.end());
    }
    double f = converge(u, 1.0, rep.energy_history, rep);
    if (cfg_.support_search_depth > 0) f = support_search(u, f, rep);
    rep.wallclock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  }

 private:
  std::size_t m() const { return static_cast<std::size_t>(lat_.m); }

  double node_norm(const std::vector<double>& u, std::size_t i) const {
    double s = 0.0;
    for (std::size_t c = 0; c < m(); ++c) s += u[i * m() + c] * u[i * m() + c];
    return std::sqrt(s);
  }

  // Dirichlet part plus weight * potential. The potential density is |u|^p,
  // or (|u|^2+eps^2)^{p/2} on smoothing legs (eps > 0).
  double energy(const std::vector<double>& u, double weight, double eps) const {
    std::vector<double> part(chunks_, 0.0);
    parallel_for(chunks_, [&](std::size_t ch) {
      const std::size_t begin = ch * kReductionChunk;
      const std::size_t end = std::min(lat_.count, begin + kReductionChunk);
      double sd = 0.0;
      double sp = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        for (int d = 0; d < lat_.dim; ++d) {
          if (!(lat_.forward[i] & (1u << d))) continue;
          const std::size_t j = i + lat_.stride[static_cast<std::size_t>(d)];
          for (std::size_t c = 0; c < m(); ++c) {
            const double diff = u[i * m() + c] - u[j * m() + c];
            sd += diff * diff;
          }
        }
        const double r = node_norm(u, i);
        sp += eps > 0.0 ? std::pow(r * r + eps * eps, 0.5 * params_.p) : std::pow(r, params_.p);
      }
      part[ch] = sd * wd_ + weight * sp * wn_ * 2.0 / params_.p;
    });
    double total = 0.0;
    for (double v : part) total += v;
    return total;
  }

  // out = prox(y + 2 tau h^n lap y) on interior nodes, boundary copied from y.
  void fb_step(const std::vector<double>& y, double tau, double weight,
               std::vector<double>& out) const {
    const double a = 2.0 * tau * wn_ / (lat_.h * lat_.h);
    const double tau_prox = tau * wn_ * weight;
    const double two_n = 2.0 * lat_.dim;
    parallel_for(chunks_, [&](std::size_t ch) {
      const std::size_t begin = ch * kReductionChunk;
      const std::size_t end = std::min(lat_.count, begin + kReductionChunk);
      double z[16];
      for (std::size_t i = begin; i < end; ++i) {
        if (lat_.boundary[i]) {
          for (std::size_t c = 0; c < m(); ++c) out[i * m() + c] = y[i * m() + c];
          continue;
        }
        double zn = 0.0;
        for (std::size_t c = 0; c < m(); ++c) {
          double lap = -two_n * y[i * m() + c];
          for (int d = 0; d < lat_.dim; ++d) {
            const std::size_t s = lat_.stride[static_cast<std::size_t>(d)];
            lap += y[(i + s) * m() + c] + y[(i - s) * m() + c];
          }
          z[c] = y[i * m() + c] + a * lap;
          zn += z[c] * z[c];
        }
        zn = std::sqrt(zn);
        const double s = prox_radius(params_, zn, tau_prox);
        const double scale = s == 0.0 ? 0.0 : s / zn;
        for (std::size_t c = 0; c < m(); ++c) out[i * m() + c] = s == 0.0 ? 0.0 : z[c] * scale;
      }
    });
  }

  // Gradient step on the smoothed energy.
  void smooth_step(const std::vector<double>& u, double tau, double eps,
                   std::vector<double>& out) const {
    const double a = 2.0 * tau * wn_ / (lat_.h * lat_.h);
    const double two_n = 2.0 * lat_.dim;
    parallel_for(chunks_, [&](std::size_t ch) {
      const std::size_t begin = ch * kReductionChunk;
      const std::size_t end = std::min(lat_.count, begin + kReductionChunk);
      for (std::size_t i = begin; i < end; ++i) {
        if (lat_.boundary[i]) {
          for (std::size_t c = 0; c < m(); ++c) out[i * m() + c] = u[i * m() + c];
          continue;
        }
        const double r = node_norm(u, i);
        const double g = 2.0 * tau * wn_ * std::pow(r * r + eps * eps, 0.5 * params_.p - 1.0);
        for (std::size_t c = 0; c < m(); ++c) {
          double lap = -two_n * u[i * m() + c];
          for (int d = 0; d < lat_.dim; ++d) {
            const std::size_t s = lat_.stride[static_cast<std::size_t>(d)];
            lap += u[(i + s) * m() + c] + u[(i - s) * m() + c];
          }
          out[i * m() + c] = u[i * m() + c] + a * lap - g * u[i * m() + c];
        }
      }
    });
  }

  void check_finite(const std::vector<double>& u) const {
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (!std::isfinite(u[k])) {
        throw DivergedError("iterate became nonfinite at node " + std::to_string(k / m()));
      }
    }
  }

  static bool stalled(const std::vector<double>& hist, double tol) {
    const std::size_t n = hist.size();
    return n > 10 && hist[n - 11] - hist[n - 1] <= tol * std::abs(hist[n - 1]);
  }

  // Monotone FISTA on the smoothed energy.
  void smooth_leg(std::vector<double>& u, double eps, SolveReport& rep) {
    const double tau = 1.0 / (lip_ + 2.0 * wn_ * std::pow(eps, params_.p - 2.0));
    double f = energy(u, 1.0, eps);
    std::vector<double> prev = u;
    std::vector<double> y(u.size());
    std::vector<double> next(u.size());
    std::vector<double> leg{f};
    double t = 1.0;
    for (int it = 0; it < cfg_.continuation_iters; ++it) {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      double beta = cfg_.accelerate ? (t - 1.0) / t_next : 0.0;
      double fn = 0.0;
      for (;;) {
        for (std::size_t q = 0; q < u.size(); ++q) y[q] = u[q] + beta * (u[q] - prev[q]);
        smooth_step(y, tau, eps, next);
        check_finite(next);
        fn = energy(next, 1.0, eps);
        if (fn <= f || beta == 0.0) break;
        beta = 0.0;
        t = 1.0;
      }
      if (fn > f) break;
      prev.swap(u);
      u.swap(next);
      f = fn;
      leg.push_back(f);
      t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      if (stalled(leg, cfg_.tol_rel)) break;
    }
    rep.continuation_history.insert(rep.continuation_history.end(), leg.begin(), leg.end());
  }

  // Monotone FISTA with restart and backtracking on the exact energy with the
  // potential scaled by weight. Appends accepted energies to hist.
  double converge(std::vector<double>& u, double weight, std::vector<double>& hist,
                  SolveReport& rep) {
    const double tau_min = 1e-12 / lip_;
    double tau = cfg_.tau0 / lip_;
    double f = energy(u, weight, 0.0);
    hist.push_back(f);
    const std::size_t start = hist.size() - 1;
    std::vector<double> prev = u;
    std::vector<double> y(u.size());
    std::vector<double> z(u.size());
    double t = 1.0;
    bool converged = false;
    for (int k = 1; k <= cfg_.max_iter; ++k) {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      double beta = cfg_.accelerate ? (t - 1.0) / t_next : 0.0;
      double fz = 0.0;
      for (;;) {
        if (beta != 0.0) {
          for (std::size_t q = 0; q < u.size(); ++q) y[q] = u[q] + beta * (u[q] - prev[q]);
          fb_step(y, tau, weight, z);
        } else {
          fb_step(u, tau, weight, z);
        }
        check_finite(z);
        fz = energy(z, weight, 0.0);
        if (fz <= f) break;
        if (beta != 0.0) {
          beta = 0.0;
          t = 1.0;
          continue;
        }
        // A plain step with tau <= 1/L cannot raise the energy; failing
        // here means round-off dominates and the iterate is stationary.
        if (tau * lip_ <= 1.0) break;
        tau *= cfg_.backtrack;
        if (tau < tau_min) throw DivergedError("step size collapsed during backtracking");
      }
      ++rep.iterations;
      if (fz > f || z == u) {
        converged = true;
        break;
      }
      prev.swap(u);
      u.swap(z);
      f = fz;
      hist.push_back(f);
      // A restart reset t to 1, so momentum builds up again from scratch.
      t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      if (hist.size() - start > 10 && stalled(hist, cfg_.tol_rel)) {
        converged = true;
        break;
      }
    }
    rep.converged = converged;
    rep.final_step = tau * lip_;
    return f;
  }

  // Positive interior nodes within `depth` lattice steps of the zero set.
  std::vector<std::size_t> front_layers(const std::vector<double>& u, int depth) const {
    std::vector<int> layer(lat_.count, 0);
    std::vector<std::size_t> frontier;
    for (std::size_t i = 0; i < lat_.count; ++i) {
      if (node_norm(u, i) == 0.0) layer[i] = -1;
    }
    std::vector<std::size_t> out;
    for (int level = 1; level <= depth; ++level) {
      std::vector<std::size_t> next;
      for (std::size_t i = 0; i < lat_.count; ++i) {
        if (lat_.boundary[i] || layer[i] != 0) continue;
        bool touches = false;
        for (int d = 0; d < lat_.dim && !touches; ++d) {
          const std::size_t s = lat_.stride[static_cast<std::size_t>(d)];
          for (std::size_t j : {i - s, i + s}) {
            if (layer[j] < 0 || (layer[j] > 0 && layer[j] < level)) touches = true;
          }
        }
        if (touches) next.push_back(i);
      }
      if (next.empty()) break;
      for (std::size_t i : next) layer[i] = level;
      out.insert(out.end(), next.begin(), next.end());
    }
    return out;
  }

  // Greedy descent over the free boundary: zero the outer layers of the
  // positivity set, reconverge, keep the result when the energy drops.
  double support_search(std::vector<double>& u, double f, SolveReport& rep) {
    for (int round = 0; round < 256; ++round) {
      bool improved = false;
      for (int depth = 1; depth <= cfg_.support_search_depth; ++depth) {
        const std::vector<std::size_t> peel = front_layers(u, depth);
        if (peel.empty()) break;
        std::vector<double> trial = u;
        for (std::size_t i : peel) {
          for (std::size_t c = 0; c < m(); ++c) trial[i * m() + c] = 0.0;
        }
        std::vector<double> hist;
        const double ft = converge(trial, 1.0, hist, rep);
        if (ft < f - 1e-13 * std::abs(f)) {
          u.swap(trial);
          f = ft;
          rep.energy_history.push_back(f);
          ++rep.support_moves;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    return f;
  }

  Lattice lat_;
  PParams params_;
  SolverConfig cfg_;
  double wd_ = 1.0;
  double wn_ = 1.0;
  double lip_ = 1.0;
  std::size_t chunks_ = 1;
};

Lattice lattice_of(const Grid& g, int m) {
  Lattice lat;
  lat.dim = g.dim();
  lat.m = m;
  lat.h = g.h();
  lat.count = g.node_count();
  for (int d = 0; d < g.dim(); ++d) lat.stride.push_back(g.stride(d));
  lat.boundary.resize(lat.count);
  lat.forward.resize(lat.count);
  for (std::size_t i = 0; i < lat.count; ++i) {
    lat.boundary[i] = g.on_boundary(i) ? 1 : 0;
    const Index3 idx = g.multi_index(i);
    std::uint8_t bits = 0;
    for (int d = 0; d < g.dim(); ++d) {
      const auto a = static_cast<std::size_t>(d);
      if (idx[a] + 1 < g.shape()[a]) bits |= static_cast<std::uint8_t>(1u << d);
    }
    lat.forward[i] = bits;
  }
  return lat;
}

}  // namespace

SolveResult minimize(const VectorField& bc, const PParams& params, const SolverConfig& cfg) {
  cfg.validate();
  const Grid& g = bc.grid();
  for (int d = 0; d < g.dim(); ++d) {
    if (g.shape()[static_cast<std::size_t>(d)] < 8) {
      throw PreconditionError("solver needs at least 8 nodes per axis");
    }
  }
  if (bc.components() > 16) throw PreconditionError("at most 16 components supported");
  VectorField u(g, bc.components());
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto src = bc.at(i);
    for (double v : src) {
      if (!std::isfinite(v)) throw NonFiniteError("boundary data not finite", i);
    }
    if (u.is_boundary(i)) std::copy(src.begin(), src.end(), u.at(i).begin());
  }
  if (cfg.seed_field) {
    const VectorField& seed = *cfg.seed_field;
    if (!(seed.grid() == g) || seed.components() != bc.components()) {
      throw DomainError("seed field does not match the grid");
    }
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      if (!u.is_boundary(i)) std::copy(seed.at(i).begin(), seed.at(i).end(), u.at(i).begin());
    }
  }
  Engine engine(lattice_of(g, bc.components()), params, cfg);
  SolveReport rep = engine.run(u.values());
  return {std::move(u), std::move(rep)};
}

SolveResult minimize(const Grid& grid, int components, const PointwiseRule& bc,
                     const PParams& params, const SolverConfig& cfg) {
  VectorField data(grid, components);
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    if (data.is_boundary(i)) bc(grid.coords(i), data.at(i));
  }
  return minimize(data, params, cfg);
}

Profile1D solve_1d(const PParams& params, double a, double b, std::span<const double> ua,
                   std::span<const double> ub, double h, const SolverConfig& cfg) {
  cfg.validate();
  if (!(b > a)) throw DomainError("interval needs b > a");
  if (!(h > 0.0) || h > (b - a) / 64.0 * (1.0 + 1e-12)) {
    throw PreconditionError("1-D solve needs h <= (b-a)/64");
  }
  if (ua.size() != ub.size() || ua.empty() || ua.size() > 16) {
    throw DomainError("endpoint values must have equal length in [1,16]");
  }
  const auto cells = static_cast<std::size_t>(std::llround((b - a) / h));
  Profile1D prof;
  prof.a = a;
  prof.h = h;
  prof.m = static_cast<int>(ua.size());
  const std::size_t n = cells + 1;
  const std::size_t m = ua.size();
  prof.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) prof.x[i] = a + static_cast<double>(i) * h;
  prof.values.assign(n * m, 0.0);
  std::copy(ua.begin(), ua.end(), prof.values.begin());
  std::copy(ub.begin(), ub.end(), prof.values.begin() + static_cast<std::ptrdiff_t>(cells * m));

  Lattice lat;
  lat.dim = 1;
  lat.m = prof.m;
  lat.h = h;
  lat.count = n;
  lat.stride = {1};
  lat.boundary.assign(n, 0);
  lat.boundary.front() = lat.boundary.back() = 1;
  lat.forward.assign(n, 1);
  lat.forward.back() = 0;
  Engine engine(std::move(lat), params, cfg);
  prof.report = engine.run(prof.values);
  return prof;
}

}  // namespace fb
