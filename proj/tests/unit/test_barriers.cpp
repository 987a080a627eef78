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
#include <vector>

#include "fb/barriers.hpp"
#include "fb/errors.hpp"
#include "fb/exact.hpp"

namespace fb {
namespace {

BarrierSpec table_spec(BarrierCase k, double p, double eps) {
  const auto s = shipped_constants(k, p, eps);
  if (!s) throw std::runtime_error("missing table entry");
  return *s;
}

TEST(BarrierSpec, DerivedConstantsAreExact) {
  const PParams P = make_params(0.5);
  const BarrierSpec s = BarrierSpec::make(BarrierCase::A, P, 2, 0.01, 0.25, 1.5, 0.02, 0.1);
  EXPECT_EQ(s.C0, 2.0 / 0.25 * 1.5);
  EXPECT_EQ(s.c1, 1.0 / (32.0 * s.C0));
  EXPECT_GT(s.c0 * s.C0, s.K);
  EXPECT_TRUE(s.relations_hold());
  EXPECT_EQ(s.c_delta, default_c_delta(P, 0.02));
  EXPECT_DOUBLE_EQ(s.radius(), s.C0 / 0.01);
}

TEST(BarrierSpec, RejectsNonPositiveConstants) {
  const PParams P = make_params(0.5);
  EXPECT_THROW(BarrierSpec::make(BarrierCase::A, P, 2, 0.0, 0.25, 1.5, 0.02, 0.1),
               PreconditionError);
  EXPECT_THROW(BarrierSpec::make(BarrierCase::B, P, 2, 0.01, -1.0, 1.5, 0.02, 0.1),
               PreconditionError);
}

TEST(BarrierSpec, ConditionNames) {
  EXPECT_EQ(condition_names(BarrierCase::A).size(), 4u);
  EXPECT_EQ(condition_names(BarrierCase::B).size(), 6u);
  EXPECT_EQ(condition_names(BarrierCase::B)[1], "monotone");
}

// Five-point Laplacian of eval_barrier against the analytic value.
void check_laplacian(const BarrierSpec& s, double x1, double x2) {
  const double d = 1e-4;
  auto f = [&](double a, double b) { return eval_barrier(s, {a, b, 0}); };
  const double fd =
      (f(x1 + d, x2) + f(x1 - d, x2) + f(x1, x2 + d) + f(x1, x2 - d) - 4 * f(x1, x2)) / (d * d);
  const double rho = std::abs(x1);
  const BarrierPoint bp = eval_barrier_meridian(s, rho, x2);
  EXPECT_NEAR(fd, bp.lap, 1e-4 * (1 + std::abs(bp.lap))) << "x=(" << x1 << "," << x2 << ")";
  const double dn = (f(x1, x2 + d) - f(x1, x2 - d)) / (2 * d);
  EXPECT_NEAR(dn, bp.dn, 1e-6 * (1 + std::abs(bp.dn)));
}

TEST(BarrierEval, AnalyticDerivativesMatchFiniteDifferences) {
  const BarrierSpec a = table_spec(BarrierCase::A, 0.5, 0.01);
  const BarrierSpec b = table_spec(BarrierCase::B, 0.5, 0.01);
  for (double x1 : {0.05, 0.2, -0.3}) {
    check_laplacian(a, x1, 0.2);
    check_laplacian(a, x1, 0.5);
    check_laplacian(b, x1, 0.3);
    check_laplacian(b, x1, -0.2);
  }
}

TEST(BarrierEval, NormalDerivativeIsPositiveOnPositivitySet) {
  for (BarrierCase k : {BarrierCase::A, BarrierCase::B}) {
    const BarrierSpec s = table_spec(k, 0.5, 0.01);
    for (double rho = 0.0; rho <= 0.75; rho += 0.05) {
      for (double xn = -0.7; xn <= 0.7; xn += 0.05) {
        if (rho * rho + xn * xn > 0.5625) continue;
        const BarrierPoint bp = eval_barrier_meridian(s, rho, xn);
        if (bp.psi > 0.0) {
          EXPECT_GT(bp.dn, 0.0) << "case " << (k == BarrierCase::A ? "A" : "B") << " rho=" << rho
                                << " xn=" << xn;
        }
      }
    }
  }
}

TEST(BarrierVerify, ShippedSpecsPass) {
  for (const BarrierTableEntry& e : barrier_table()) {
    if (!e.found) continue;
    const auto s = shipped_constants(e.kase, e.p, e.eps);
    ASSERT_TRUE(s.has_value());
    EXPECT_TRUE(s->relations_hold());
    const BarrierReport r = verify_barrier(*s, 64);
    EXPECT_TRUE(r.passed) << "p=" << e.p << " eps=" << e.eps << " worst=" << r.worst().name;
    for (const ConditionMargin& c : r.conditions) EXPECT_GT(c.margin, 0.0) << c.name;
  }
}

TEST(BarrierVerify, ForcedViolationFailsWithWitness) {
  const PParams P = make_params(0.5);
  BarrierSpec s = BarrierSpec::make(BarrierCase::A, P, 2, 0.01, 1.0, 3.0, 0.02, 0.1);
  s.C0 = s.K / (2.0 * s.c0);
  s.c1 = 1.0 / (32.0 * s.C0);
  ASSERT_LT(s.c0 * s.C0, s.K);
  EXPECT_FALSE(s.relations_hold());
  const BarrierReport r = verify_barrier(s, 64);
  EXPECT_FALSE(r.passed);
  EXPECT_LT(r.worst().margin, 0.0);
  EXPECT_TRUE(std::isfinite(r.worst().rho));
  EXPECT_TRUE(std::isfinite(r.worst().xn));
  try {
    require_passed(r);
    FAIL() << "expected VerificationFailure";
  } catch (const VerificationFailure& f) {
    EXPECT_EQ(f.condition(), r.worst().name);
  }
}

TEST(BarrierVerify, DensityBelowMinimumIsRejected) {
  EXPECT_THROW(verify_barrier(table_spec(BarrierCase::A, 0.5, 0.01), 8), PreconditionError);
}

TEST(BarrierVerify, LambdaFamilyKeepsSupersolution) {
  const BarrierSpec s = table_spec(BarrierCase::A, 0.5, 0.01);
  for (double lambda : {0.1, 0.01, 1e-3, 0.0}) {
    const ConditionMargin m = verify_lambda_family(s, lambda, 64);
    EXPECT_GT(m.margin, 0.0) << "lambda=" << lambda;
  }
}

TEST(BarrierVerify, EpsMaxBracketsTableEps) {
  const BarrierSpec s = table_spec(BarrierCase::A, 0.5, 0.01);
  const double emax = estimate_eps_max(s, 32);
  EXPECT_GE(emax, 0.01);
  const BarrierSpec big = BarrierSpec::make(s.kase, s.params, s.n, emax * 1.5, s.c0, s.K, s.delta, s.eta, s.c_delta);
  EXPECT_FALSE(verify_barrier(big, 32).passed);
}

TEST(BarrierTable, CoversCriterionGrid) {
  for (BarrierCase k : {BarrierCase::A, BarrierCase::B}) {
    for (double p : {0.3, 0.5, 0.8}) {
      for (double eps : {0.005, 0.01}) {
        EXPECT_TRUE(shipped_constants(k, p, eps).has_value()) << p << " " << eps;
      }
    }
  }
  EXPECT_FALSE(shipped_constants(BarrierCase::A, 0.45, 0.01).has_value());
}

TEST(BarrierTable, SearchReproducesShippedEntry) {
  const PParams P = make_params(0.8);
  const ConstantsSearch cs = find_constants(BarrierCase::B, P, 0.005);
  const auto s = shipped_constants(BarrierCase::B, 0.8, 0.005);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(cs.spec.c0, s->c0);
  EXPECT_EQ(cs.spec.K, s->K);
  EXPECT_EQ(cs.spec.delta, s->delta);
  EXPECT_EQ(cs.spec.eta, s->eta);
  for (const BarrierTableEntry& e : barrier_table()) {
    if (e.kase == BarrierCase::B && e.p == 0.8 && e.eps == 0.005) {
      EXPECT_EQ(static_cast<std::size_t>(e.candidates), cs.trace.size());
    }
  }
}

TEST(BarrierSearch, HopelessEpsThrows) {
  EXPECT_THROW(find_constants(BarrierCase::A, make_params(0.5), 0.5), NoConstantsFound);
  const ConstantsSearch cs = search_constants(BarrierCase::A, make_params(0.5), 0.5);
  EXPECT_FALSE(cs.found);
  EXPECT_FALSE(cs.trace.empty());
}

}  // namespace
}  // namespace fb
