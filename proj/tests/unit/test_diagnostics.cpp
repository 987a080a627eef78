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
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fb/diagnostics.hpp"
#include "fb/energy.hpp"
#include "fb/errors.hpp"
#include "fb/exact.hpp"
#include "fb/grid.hpp"
#include "fb/solver.hpp"

namespace fb {
namespace {

Grid square(double h) { return Grid::box(2, {-0.5, -0.5, 0}, {0.5, 0.5, 0}, h); }

VectorField half_space(double p, double h, const Point& e, double shift, int m = 2) {
  std::vector<double> f(static_cast<std::size_t>(m), 0.0);
  f[0] = 1.0;
  return sample_exact(square(h), HalfSpaceSolution(make_params(p), {e[0], e[1]}, f, shift));
}

std::vector<double> radii_from(double h, int first, int last, int step) {
  std::vector<double> r;
  for (int k = first; k <= last; k += step) r.push_back(k * h);
  return r;
}

TEST(FreeBoundary, HalfSpaceLine) {
  const double h = 1.0 / 64;
  const FreeBoundary fb = extract_free_boundary(half_space(0.5, h, {0, 1, 0}, 0.0));
  ASSERT_FALSE(fb.empty());
  EXPECT_LE(fb.max_distance_to_plane({0, 1, 0}, 0.0), h);
  EXPECT_FALSE(fb.segments.empty());
}

TEST(FreeBoundary, EdgesHaveOnePositiveEnd) {
  const VectorField u = half_space(0.3, 1.0 / 32, {0.6, 0.8, 0}, 0.05);
  const FreeBoundary fb = extract_free_boundary(u);
  for (const auto& [pos, zero] : fb.edges) {
    EXPECT_GT(u.norm(pos), 0.0);
    EXPECT_LE(u.norm(zero), 1e-10);
  }
}

TEST(FreeBoundary, AllPositiveAndAllZeroAreEmpty) {
  const VectorField pos = sample_exact(square(1.0 / 16), 1, [](const Point&, std::span<double> o) {
    o[0] = 1.0;
  });
  EXPECT_TRUE(extract_free_boundary(pos).empty());
  EXPECT_TRUE(extract_free_boundary(VectorField(square(1.0 / 16), 1)).empty());
}

TEST(FreeBoundary, TiltedLineHausdorff) {
  const double h = 1.0 / 64;
  const double c = std::cos(std::numbers::pi / 6), s = std::sin(std::numbers::pi / 6);
  const FreeBoundary a = extract_free_boundary(half_space(0.5, h, {s, c, 0}, 0.05));
  const FreeBoundary b = extract_free_boundary(half_space(0.5, h / 4, {s, c, 0}, 0.05));
  EXPECT_LE(hausdorff(a, b), 3 * h);
  EXPECT_LE(a.max_distance_to_plane({s, c, 0}, -0.05), h);
}

TEST(FreeBoundary, ThreeDimensionalTriangles) {
  const PParams P = make_params(0.5);
  const Grid g = Grid::box(3, {-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5}, 1.0 / 16);
  const VectorField u = sample_exact(g, HalfSpaceSolution(P, {0, 0, 1}, {1.0}, 0.03));
  const FreeBoundary fb = extract_free_boundary(u);
  EXPECT_FALSE(fb.triangles.empty());
  EXPECT_LE(fb.max_distance_to_plane({0, 0, 1}, -0.03), g.h());
}

TEST(Flatness, ExactSampleIsDiscretizationFlat) {
  const PParams P = make_params(0.5);
  for (double h : {1.0 / 64, 1.0 / 128}) {
    const FlatnessFit fit = fit_flatness(half_space(0.5, h, {0, 1, 0}, 0.0), P, {0, 0, 0}, 0.4);
    EXPECT_LE(fit.eps, 2 * std::pow(h, P.kappa - 1)) << "h=" << h;
    EXPECT_NEAR(fit.e[1], 1.0, 1e-3);
    EXPECT_NEAR(fit.f[0], 1.0, 1e-12);
  }
}

TEST(Flatness, ConstantPerturbationRaisesSupDeviation) {
  const PParams P = make_params(0.5);
  const Grid g = square(1.0 / 64);
  double prev_tilt = 0.0;
  for (double delta : {0.02, 0.1}) {
    const VectorField u = sample_exact(g, 2, [&](const Point& x, std::span<double> o) {
      o[0] = u0(P, x[1]);
      o[1] = delta;
    });
    const FlatnessFit fit = fit_flatness(u, P, {0, 0, 0}, 0.4);
    // After the kappa-rescaling the perturbation reads delta / r^kappa.
    EXPECT_GE(fit.eps_sup, 0.9 * delta / std::pow(0.4, P.kappa)) << "delta=" << delta;
    EXPECT_GT(std::abs(fit.f[1]), prev_tilt);
    prev_tilt = std::abs(fit.f[1]);
  }
}

TEST(Flatness, RotationByQuarterTurn) {
  const PParams P = make_params(0.5);
  const double c = std::cos(0.3), s = std::sin(0.3);
  const VectorField u = half_space(0.5, 1.0 / 64, {s, c, 0}, 0.02);
  // Rotate the node data by 90 degrees: v(i, j) = u(j, N - i).
  const Grid& g = u.grid();
  const std::size_t N = g.shape()[0] - 1;
  VectorField v(g, 2);
  for (std::size_t i = 0; i <= N; ++i) {
    for (std::size_t j = 0; j <= N; ++j) {
      const auto src = u.at(g.index({j, N - i, 0}));
      auto dst = v.at(g.index({i, j, 0}));
      dst[0] = src[0];
      dst[1] = src[1];
    }
  }
  const FlatnessFit fu = fit_flatness(u, P, {0, 0, 0}, 0.4);
  const FlatnessFit fv = fit_flatness(v, P, {0, 0, 0}, 0.4);
  // (x, y) -> (y, -x) rotates the normal by -90 degrees in the index frame.
  EXPECT_NEAR(fv.e[0], -fu.e[1], 1e-9);
  EXPECT_NEAR(fv.e[1], fu.e[0], 1e-9);
}

TEST(Flatness, DeadBallIsDegenerate) {
  const VectorField u = half_space(0.5, 1.0 / 32, {0, 1, 0}, -0.3);
  EXPECT_THROW(fit_flatness(u, make_params(0.5), {0, -0.2, 0}, 0.1), Error);
}

TEST(Hodograph, ShiftedHalfSpaceIsConstant) {
  const PParams P = make_params(0.5);
  const double a = 0.03, eps = 0.1;
  const VectorField u = half_space(0.5, 1.0 / 32, {0, 1, 0}, a);
  const Hodograph hg = hodograph(u, P, {0, 1, 0}, eps);
  ASSERT_GT(hg.defined, 0u);
  std::size_t undefined = 0;
  for (std::size_t i = 0; i < u.node_count(); ++i) {
    if (std::isnan(hg.component[i])) {
      ++undefined;
      EXPECT_EQ(u.norm(i), 0.0);
      continue;
    }
    if (u.norm(i) > 1e-14) EXPECT_NEAR(hg.component[i], a / eps, 1e-12);
    EXPECT_GE(hg.modulus[i], hg.component[i]);
  }
  EXPECT_GT(undefined, 0u);
}

TEST(Hodograph, ModulusDominatesComponent) {
  const PParams P = make_params(0.5);
  const VectorField u = sample_exact(square(1.0 / 32), 2, [&](const Point& x, std::span<double> o) {
    o[0] = u0(P, x[1] + 0.1) * std::cos(x[0]);
    o[1] = u0(P, x[1] + 0.1) * 0.3 * std::sin(3 * x[0]);
  });
  const Hodograph hg = hodograph(u, P, {0, 1, 0}, 0.05);
  for (std::size_t i = 0; i < u.node_count(); ++i) {
    if (!std::isnan(hg.component[i])) EXPECT_GE(hg.modulus[i], hg.component[i] - 1e-12);
  }
}

TEST(Trap, ExactSampleHasZeroWidth) {
  const PParams P = make_params(0.5);
  const double h = 1.0 / 128;
  const VectorField u = half_space(0.5, h, {0, 1, 0}, 0.1);
  const TrapSequence seq = harnack_trap(u, P, {0, -0.1, 0}, 0.3, 0.5, 6);
  ASSERT_FALSE(seq.levels.empty());
  EXPECT_TRUE(seq.nested());
  for (const TrapLevel& l : seq.levels) {
    EXPECT_LE(l.width(), 1e-3);
    EXPECT_NEAR(l.a, 0.1, 1e-3);
  }
}

TEST(Trap, CenterAwayFromBoundaryIsRejected) {
  const VectorField u = half_space(0.5, 1.0 / 64, {0, 1, 0}, 0.1);
  EXPECT_THROW(harnack_trap(u, make_params(0.5), {0, 0.2, 0}, 0.2, 0.5, 4), HypothesisError);
}

TEST(Growth, ExactSampleGivesKappa) {
  const PParams P = make_params(0.5);
  const double h = 1.0 / 128;
  const VectorField u = half_space(0.5, h, {0, 1, 0}, 0.0);
  const ExponentFit fit = fit_growth_exponent(u, {0, 0, 0}, radii_from(h, 8, 48, 8));
  EXPECT_TRUE(fit.boundary_point);
  EXPECT_NEAR(fit.kappa_hat, P.kappa, 0.02);
}

TEST(Growth, InteriorPointIsFlagged) {
  const double h = 1.0 / 64;
  const VectorField u = half_space(0.5, h, {0, 1, 0}, 0.4);
  const ExponentFit fit = fit_growth_exponent(u, {0, 0.2, 0}, radii_from(h, 4, 12, 2));
  EXPECT_FALSE(fit.boundary_point);
  EXPECT_LT(std::abs(fit.kappa_hat), 0.6);
}

TEST(Growth, Preconditions) {
  const double h = 1.0 / 64;
  const VectorField u = half_space(0.5, h, {0, 1, 0}, 0.0);
  EXPECT_THROW(fit_growth_exponent(u, {0, 0, 0}, {0.1, 0.2, 0.3}), InsufficientDataError);
  EXPECT_THROW(fit_growth_exponent(u, {0, 0, 0}, radii_from(h, 2, 10, 2)), PreconditionError);
  EXPECT_THROW(fit_growth_exponent(u, {0, -0.3, 0}, radii_from(h, 4, 12, 2)), DomainError);
}

TEST(Decay, ZeroFieldGivesZero) {
  const VectorField u(square(1.0 / 32), 1);
  EXPECT_EQ(decay_check(u, make_params(0.5), {0, 0, 0}, {0.1, 0.2, 0.3}).C, 0.0);
}

TEST(Decay, HalfSpaceConstantIsUniformAlongBoundary) {
  const PParams P = make_params(0.5);
  const VectorField u = half_space(0.5, 1.0 / 128, {0, 1, 0}, 0.0);
  std::vector<double> cs;
  for (double x : {-0.1, 0.0, 0.1}) {
    cs.push_back(decay_check(u, P, {x, 0, 0}, {0.05, 0.1, 0.2, 0.3}).C);
  }
  for (double c : cs) {
    EXPECT_TRUE(std::isfinite(c));
    EXPECT_GT(c, 0.0);
    EXPECT_NEAR(c / cs[1], 1.0, 0.05);
  }
}

TEST(Blowup, HalfSpaceIsSelfSimilar) {
  const PParams P = make_params(0.5);
  const VectorField u = half_space(0.5, 1.0 / 128, {0, 1, 0}, 0.0);
  const Grid target = Grid::box(2, {-1, -1, 0}, {1, 1, 0}, 1.0 / 16);
  const VectorField ref = sample_exact(target, HalfSpaceSolution(P, {0, 1}, {1, 0}, 0.0));
  for (double r : {0.4, 0.2}) {
    const VectorField b = blowup(u, P, {0, 0, 0}, r, target);
    double worst = 0.0;
    for (std::size_t i = 0; i < target.node_count(); ++i) {
      worst = std::max(worst, std::abs(b.at(i)[0] - ref.at(i)[0]));
    }
    // Linear interpolation of t_+^kappa across the kink.
    EXPECT_LE(worst, 2.0 * std::pow(1.0 / 128 / r, P.kappa)) << "r=" << r;
  }
}

TEST(Blowup, CompositionLaw) {
  const PParams P = make_params(0.5);
  const double h = 1.0 / 128;
  const VectorField u = sample_exact(square(h), 1, [&](const Point& x, std::span<double> o) {
    o[0] = u0(P, x[1] + 0.02 * std::sin(4 * x[0]));
  });
  const Grid mid = Grid::box(2, {-1, -1, 0}, {1, 1, 0}, 1.0 / 128);
  const Grid target = Grid::box(2, {-1, -1, 0}, {1, 1, 0}, 1.0 / 8);
  const VectorField once = blowup(u, P, {0.05, 0, 0}, 0.2, target);
  const VectorField twice = blowup(blowup(u, P, {0.05, 0, 0}, 0.4, mid), P, {0, 0, 0}, 0.5, target);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < target.node_count(); ++i) {
    worst = std::max(worst, std::abs(once.at(i)[0] - twice.at(i)[0]));
    scale = std::max(scale, std::abs(once.at(i)[0]));
  }
  EXPECT_LE(worst, 2 * h / 0.2 * scale);
}

TEST(Blowup, WeissScalingIdentity) {
  const PParams P = make_params(0.5);
  const double h = 1.0 / 128;
  const VectorField u = sample_exact(square(h), 1, [&](const Point& x, std::span<double> o) {
    o[0] = u0(P, x[1] + 0.02 * std::sin(4 * x[0]));
  });
  // Target nodes land on source nodes, so the identity holds up to round-off.
  const double r = 0.5;
  const Grid target = Grid::box(2, {-1, -1, 0}, {1, 1, 0}, h / r);
  const VectorField b = blowup(u, P, {0, 0, 0}, r, target);
  const double s = 0.6;
  const double w = weiss(u, {0, 0, 0}, r * s, P).W;
  EXPECT_NEAR(weiss(b, {0, 0, 0}, s, P).W, w, 1e-10 * std::abs(w));
}

TEST(Blowup, OutOfRangeThrows) {
  const VectorField u = half_space(0.5, 1.0 / 32, {0, 1, 0}, 0.0);
  const Grid target = Grid::box(2, {-1, -1, 0}, {1, 1, 0}, 1.0 / 8);
  EXPECT_THROW(blowup(u, make_params(0.5), {0, 0, 0}, 0.8, target), GeometryError);
}

TEST(Slab, RatioDecreasesWithEps) {
  const Grid g = Grid::box(2, {-1, -1, 0}, {1, 1, 0}, 1.0 / 128);
  double prev = 2.0;
  for (double eps : {0.2, 0.1, 0.05}) {
    const SlabDecay d = slab_decay_check(eps, g);
    EXPECT_LT(d.ratio, prev) << "eps=" << eps;
    EXPECT_GT(d.c, 0.0);
    prev = d.ratio;
  }
}

TEST(Slab, WideSlabGivesUnitRatio) {
  const Grid g = Grid::box(2, {-1, -1, 0}, {1, 1, 0}, 1.0 / 32);
  EXPECT_NEAR(slab_decay_check(1.5, g).ratio, 1.0, 1e-9);
}

TEST(Slab, Preconditions) {
  const Grid small = Grid::box(2, {-0.5, -0.5, 0}, {0.5, 0.5, 0}, 1.0 / 32);
  EXPECT_THROW(slab_decay_check(0.2, small), GeometryError);
  const Grid g = Grid::box(2, {-1, -1, 0}, {1, 1, 0}, 1.0 / 32);
  EXPECT_THROW(slab_decay_check(0.1, g), PreconditionError);
}

}  // namespace
}  // namespace fb
