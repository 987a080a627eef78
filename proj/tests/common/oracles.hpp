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

#include <cmath>
#include <utility>

namespace fb::testing {

// Minimizer of (s - z)^2 / (2 tau) + (2 / p) s^p over s in [0, z]: uniform scan,
// golden-section refinement around the best scan point, then comparison with s = 0.
inline double prox_scan_oracle(double p, double tau, double z, int scan_points) {
  if (!(z > 0.0)) return 0.0;
  auto F = [&](double s) { return (s - z) * (s - z) / (2.0 * tau) + 2.0 / p * std::pow(s, p); };
  const double step = z / scan_points;
  int best = 0;
  double fbest = F(0.0);
  for (int i = 1; i <= scan_points; ++i) {
    const double f = F(i * step);
    if (f < fbest) {
      fbest = f;
      best = i;
    }
  }
  if (best == 0) return 0.0;
  double a = (best - 1) * step;
  double b = std::min(z, (best + 1) * step);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = F(c), fd = F(d);
  for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + b); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = F(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = F(d);
    }
  }
  const double s = 0.5 * (a + b);
  return F(s) < F(0.0) ? s : 0.0;
}

// Smallest |z| at which the oracle leaves the dead zone, by bisection.
inline double oracle_threshold(double p, double tau, int scan_points) {
  double lo = 0.0, hi = 1.0;
  while (prox_scan_oracle(p, tau, hi, scan_points) == 0.0) hi *= 2.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (prox_scan_oracle(p, tau, mid, scan_points) == 0.0 ? lo : hi) = mid;
  }
  return hi;
}

// Chord-weighted integral of the half-plane energy density over B_r(0) for
// u = u0(x_n + a), by composite Simpson in x_n with n_int panels.
template <class U0, class DU0>
double half_plane_energy(U0 u, DU0 du, double p, double a, double r, int n_int) {
  const double pi = std::acos(-1.0);
  // Substitute y = r sin(theta) to remove the square-root endpoint singularity.
  double sum = 0.0;
  const double lo = -0.5 * pi, hi = 0.5 * pi;
  const double dt = (hi - lo) / n_int;
  for (int i = 0; i <= n_int; ++i) {
    const double th = lo + i * dt;
    const double y = r * std::sin(th);
    const double c = std::cos(th);
    const double g = du(y + a);
    const double dens = g * g + 2.0 / p * std::pow(u(y + a), p);
    const double w = (i == 0 || i == n_int) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * dens * 2.0 * r * c * r * c;
  }
  return sum * dt / 3.0;
}

}  // namespace fb::testing
