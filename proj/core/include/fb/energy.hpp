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

#include "fb/exact.hpp"
#include "fb/grid.hpp"

namespace fb {

struct EnergyBreakdown {
  double dirichlet = 0.0;        ///< integral of |grad u|^2
  double potential = 0.0;        ///< integral of (2/p)|u|^p
  double tilde_potential = 0.0;  ///< integral of (2/p)|u|^2
  double total() const { return dirichlet + potential; }
};

struct WeissRecord {
  double r = 0.0;
  double W = 0.0;
  double volume_part = 0.0;   ///< energy of u on B_r
  double surface_part = 0.0;  ///< integral of |u|^2 over the sphere
};

/// Local energies on B_r(x0) by ball quadrature. |grad u|^2 at a node is the
/// mean of the squared one-sided differences on each axis, so edges inside
/// the dead zone contribute nothing.
EnergyBreakdown energy_local(const VectorField& field, const Point& x0, double r,
                             const PParams& params);

WeissRecord weiss(const VectorField& field, const Point& x0, double r, const PParams& params);

/// Radius s* of the p-power prox for input norm |z|; exactly 0 in the dead zone.
double prox_radius(const PParams& params, double z_norm, double tau);

/// Smallest |z| for which the prox is nonzero.
double prox_threshold(const PParams& params, double tau);

/// argmin_v |v - z|^2 / (2 tau) + (2/p)|v|^p.
void prox_p(const PParams& params, std::span<const double> z, double tau, std::span<double> out);
std::vector<double> prox_p(const PParams& params, std::span<const double> z, double tau);

struct SubadditivityResult {
  bool holds = true;
  double margin = 0.0;  ///< |v - w|^p - (|v|^p - |w|^p)
};

SubadditivityResult subadditivity_check(std::span<const double> v, std::span<const double> w,
                                        const PParams& params);

/// Energy of the discrete problem the solver minimizes: sum over grid edges
/// of h^{n-2}|u_i - u_j|^2 plus sum over nodes of h^n (2/p)|u|^p.
struct DiscreteEnergy {
  double dirichlet = 0.0;
  double potential = 0.0;
  double total() const { return dirichlet + potential; }
};

DiscreteEnergy discrete_energy(const VectorField& field, const PParams& params);

}  // namespace fb
