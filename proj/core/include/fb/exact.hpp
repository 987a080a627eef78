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

#include <span>
#include <vector>

namespace fb {

/// Exponent triple of the p-power free boundary system.
struct PParams {
  double p;
  double kappa;  ///< 2 / (2 - p), in (1, 2)
  double cp;     ///< [kappa (kappa - 1)]^{1/(p-2)}
};

/// Builds (p, kappa, c_p); throws DomainError unless 0 < p < 1.
PParams make_params(double p);

enum class U0Order : int { Inverse = -1, Value = 0, First = 1, Second = 2 };

/// One-dimensional profile u0(t) = c_p (t^+)^kappa and its derivatives.
/// Second derivative is undefined at t <= 0 (UndefinedPointError); the inverse
/// requires t >= 0 (DomainError).
double u0(const PParams& params, double t, U0Order order = U0Order::Value);

inline double u0_inverse(const PParams& params, double value) {
  return u0(params, value, U0Order::Inverse);
}

/// x -> c_p (<x,e> + shift)_+^kappa f.
struct HalfSpaceSolution {
  PParams params;
  std::vector<double> e;  ///< unit vector in R^n
  std::vector<double> f;  ///< unit vector in R^m
  double shift = 0.0;

  /// Throws DomainError unless |e| = |f| = 1 within 1e-12.
  HalfSpaceSolution(const PParams& params, std::vector<double> e, std::vector<double> f,
                    double shift = 0.0);

  std::size_t dim() const { return e.size(); }
  std::size_t components() const { return f.size(); }
  double profile(std::span<const double> x) const;
  void eval(std::span<const double> x, std::span<double> out) const;
  std::vector<double> eval(std::span<const double> x) const;
};

enum class OdeScheme { Midpoint, RungeKutta4 };

struct OdeSample {
  double t;
  double u;
  double du;
};

/// Solution of u'' = u^{p-1} chi_{u>0}, u(0) = lambda, u'(0) = 0 on [0, t_max].
struct OdeProfile {
  PParams params;
  double lambda = 0.0;
  double step = 0.0;
  std::vector<OdeSample> samples;

  double t_max() const { return samples.empty() ? 0.0 : samples.back().t; }
  /// Even extension u(|t|), cubic Hermite between samples. Throws DomainError
  /// beyond t_max.
  double value(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;
};

/// lambda == 0 returns closed-form u0 samples; otherwise integrates with the
/// given fixed-step scheme. Throws IntegrationError on nonfinite state.
OdeProfile integrate_u_lambda(const PParams& params, double lambda, double t_max, double step,
                              OdeScheme scheme = OdeScheme::RungeKutta4);

/// Weiss energy W(h, 0, r) of any half-space solution in dimension n, by
/// tensor Gauss-Legendre quadrature in the polar (<x,e>, transverse radius)
/// half-plane with quad_points nodes per direction.
double weiss_of_halfspace(const PParams& params, int dim, int quad_points, double radius = 1.0);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace fb
