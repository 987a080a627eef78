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
#include "fb/exact.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fb/errors.hpp"

namespace fb {

PParams make_params(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("p must lie in (0, 1), got " + std::to_string(p));
  }
  const double kappa = 2.0 / (2.0 - p);
  const double cp = std::pow(kappa * (kappa - 1.0), 1.0 / (p - 2.0));
  return {p, kappa, cp};
}

double u0(const PParams& params, double t, U0Order order) {
  const double k = params.kappa;
  switch (order) {
    case U0Order::Value:
      return t > 0.0 ? params.cp * std::pow(t, k) : 0.0;
    case U0Order::First:
      return t > 0.0 ? params.cp * k * std::pow(t, k - 1.0) : 0.0;
    case U0Order::Second:
      if (!(t > 0.0)) {
        throw UndefinedPointError("u0'' is unbounded as t -> 0+ and undefined for t <= 0");
      }
      return params.cp * k * (k - 1.0) * std::pow(t, k - 2.0);
    case U0Order::Inverse:
      if (t < 0.0) throw DomainError("u0^{-1} requires a nonnegative argument");
      return std::pow(t / params.cp, 1.0 / k);
  }
  throw DomainError("unknown u0 order");
}

HalfSpaceSolution::HalfSpaceSolution(const PParams& params_, std::vector<double> e_,
                                     std::vector<double> f_, double shift_)
    : params(params_), e(std::move(e_)), f(std::move(f_)), shift(shift_) {
  auto norm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  if (e.empty() || f.empty() || std::abs(norm(e) - 1.0) > 1e-12 ||
      std::abs(norm(f) - 1.0) > 1e-12) {
    throw DomainError("half-space directions e and f must be unit vectors");
  }
}

double HalfSpaceSolution::profile(std::span<const double> x) const {
  double t = shift;
  for (std::size_t i = 0; i < e.size(); ++i) t += x[i] * e[i];
  return u0(params, t);
}

void HalfSpaceSolution::eval(std::span<const double> x, std::span<double> out) const {
  const double s = profile(x);
  for (std::size_t c = 0; c < f.size(); ++c) out[c] = s * f[c];
}

std::vector<double> HalfSpaceSolution::eval(std::span<const double> x) const {
  std::vector<double> out(f.size());
  eval(x, out);
  return out;
}

namespace {

struct State {
  double u;
  double du;
};

State rhs(const PParams& params, const State& s) {
  return {s.du, s.u > 0.0 ? std::pow(s.u, params.p - 1.0) : 0.0};
}

State advance(const PParams& params, const State& s, double h, OdeScheme scheme) {
  const State k1 = rhs(params, s);
  const State m1{s.u + 0.5 * h * k1.u, s.du + 0.5 * h * k1.du};
  const State k2 = rhs(params, m1);
  if (scheme == OdeScheme::Midpoint) {
    return {s.u + h * k2.u, s.du + h * k2.du};
  }
  const State m2{s.u + 0.5 * h * k2.u, s.du + 0.5 * h * k2.du};
  const State k3 = rhs(params, m2);
  const State m3{s.u + h * k3.u, s.du + h * k3.du};
  const State k4 = rhs(params, m3);
  return {s.u + h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
          s.du + h / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du)};
}

}  // namespace

OdeProfile integrate_u_lambda(const PParams& params, double lambda, double t_max, double step,
                              OdeScheme scheme) {
  if (lambda < 0.0) throw DomainError("lambda must be nonnegative");
  if (!(step > 0.0) || !(t_max > 0.0)) throw DomainError("step and t_max must be positive");
  const auto count = static_cast<std::size_t>(std::llround(t_max / step));
  OdeProfile out{params, lambda, step, {}};
  out.samples.reserve(count + 1);
  if (lambda == 0.0) {
    // u^{p-1} is unbounded at u = 0: use the closed form instead of the ODE.
    for (std::size_t i = 0; i <= count; ++i) {
      const double t = static_cast<double>(i) * step;
      out.samples.push_back({t, u0(params, t), u0(params, t, U0Order::First)});
    }
    return out;
  }
  State s{lambda, 0.0};
  out.samples.push_back({0.0, s.u, s.du});
  for (std::size_t i = 1; i <= count; ++i) {
    s = advance(params, s, step, scheme);
    if (!std::isfinite(s.u) || !std::isfinite(s.du)) {
      throw IntegrationError("nonfinite ODE state at step " + std::to_string(i));
    }
    out.samples.push_back({static_cast<double>(i) * step, s.u, s.du});
  }
  return out;
}

namespace {

std::size_t locate(const OdeProfile& prof, double t) {
  if (prof.samples.size() < 2 || t > prof.t_max() * (1.0 + 1e-12)) {
    throw DomainError("OdeProfile evaluated outside [-t_max, t_max]");
  }
  auto i = static_cast<std::size_t>(t / prof.step);
  return std::min(i, prof.samples.size() - 2);
}

}  // namespace

double OdeProfile::value(double t) const {
  t = std::abs(t);
  const std::size_t i = locate(*this, t);
  const OdeSample& a = samples[i];
  const OdeSample& b = samples[i + 1];
  const double h = b.t - a.t;
  const double s = (t - a.t) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * a.u + h10 * h * a.du + h01 * b.u + h11 * h * b.du;
}

double OdeProfile::derivative(double t) const {
  const double sign = t < 0.0 ? -1.0 : 1.0;
  t = std::abs(t);
  const std::size_t i = locate(*this, t);
  const OdeSample& a = samples[i];
  const OdeSample& b = samples[i + 1];
  const double h = b.t - a.t;
  const double s = (t - a.t) / h;
  const double d00 = 6 * s * s - 6 * s;
  const double d10 = 3 * s * s - 4 * s + 1;
  const double d01 = -6 * s * s + 6 * s;
  const double d11 = 3 * s * s - 2 * s;
  return sign * ((d00 * a.u + d01 * b.u) / h + d10 * a.du + d11 * b.du);
}

double OdeProfile::second_derivative(double t) const {
  if (lambda == 0.0) return u0(params, std::abs(t), U0Order::Second);
  const double u = value(t);
  return u > 0.0 ? std::pow(u, params.p - 1.0) : 0.0;
}

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(count), 0.0);
  weights.assign(static_cast<std::size_t>(count), 0.0);
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (count == 1) p0 = 1.0;
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(count - 1 - i)] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(count - 1 - i)] = w;
  }
}

double weiss_of_halfspace(const PParams& params, int dim, int quad_points, double radius) {
  if (dim < 2) throw DomainError("dimension must be at least 2");
  if (quad_points < 64) throw PreconditionError("weiss_of_halfspace needs >= 64 quadrature points");
  const double k = params.kappa;
  const double cp = params.cp;
  // |S^{n-2}|: measure of the transverse unit sphere.
  const double transverse =
      2.0 * std::pow(std::numbers::pi, 0.5 * (dim - 1)) / std::tgamma(0.5 * (dim - 1));
  // |grad h|^2 + (2/p)|h|^p = A t^{2k-2}, using kappa p = 2 kappa - 2.
  const double a = cp * cp * k * k + (2.0 / params.p) * std::pow(cp, params.p);

  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(quad_points, x, w);
  const double half_pi = 0.5 * std::numbers::pi;

  double angular_volume = 0.0;
  double angular_surface = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double theta = 0.5 * half_pi * (x[j] + 1.0);
    const double wt = 0.5 * half_pi * w[j];
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double sin_pow = std::pow(s, dim - 2);
    angular_volume += wt * std::pow(c, 2.0 * k - 2.0) * sin_pow;
    angular_surface += wt * std::pow(c, 2.0 * k) * sin_pow;
  }
  double radial = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double rho = 0.5 * radius * (x[i] + 1.0);
    radial += 0.5 * radius * w[i] * std::pow(rho, 2.0 * k - 2.0 + dim - 1);
  }
  const double volume = transverse * a * radial * angular_volume;
  const double surface =
      transverse * cp * cp * std::pow(radius, 2.0 * k + dim - 1) * angular_surface;
  return (volume - k / radius * surface) / std::pow(radius, dim + 2.0 * k - 2.0);
}

}  // namespace fb
