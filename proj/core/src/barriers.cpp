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
#include "fb/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "fb/errors.hpp"
#include "fb/parallel.hpp"

namespace fb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Sample {
  double rho;
  double xn;
};

// Returns NaN where the condition does not apply at the sample.
using MarginFn = std::function<double(double rho, double xn)>;

ConditionMargin reduce(const std::string& name, const std::vector<Sample>& pts,
                       const MarginFn& fn) {
  ConditionMargin out;
  out.name = name;
  out.margin = kInf;
  const std::size_t chunks = chunk_count(pts.size());
  std::vector<ConditionMargin> part(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    ConditionMargin& m = part[c];
    m.margin = kInf;
    const std::size_t end = std::min(pts.size(), (c + 1) * kReductionChunk);
    for (std::size_t i = c * kReductionChunk; i < end; ++i) {
      const double v = fn(pts[i].rho, pts[i].xn);
      if (std::isnan(v)) continue;
      ++m.samples;
      if (v < m.margin) {
        m.margin = v;
        m.rho = pts[i].rho;
        m.xn = pts[i].xn;
      }
    }
  });
  for (const auto& m : part) {
    out.samples += m.samples;
    if (m.margin < out.margin) {
      out.margin = m.margin;
      out.rho = m.rho;
      out.xn = m.xn;
    }
  }
  return out;
}

// count + 1 uniform points on [lo, hi].
std::vector<double> axis(double lo, double hi, int count) {
  std::vector<double> v;
  if (!(hi > lo) || count < 1) return v;
  for (int i = 0; i <= count; ++i) v.push_back(lo + (hi - lo) * i / count);
  return v;
}

std::vector<Sample> box(const std::vector<double>& rhos, const std::vector<double>& xns) {
  std::vector<Sample> s;
  s.reserve(rhos.size() * xns.size());
  for (double r : rhos)
    for (double x : xns) s.push_back({r, x});
  return s;
}

// Closed meridian half-disc {rho >= 0, rho^2 + xn^2 <= radius^2}. Closures
// are sampled throughout: a positive margin there bounds the open region.
std::vector<Sample> half_disc(double radius, int count) {
  std::vector<Sample> s;
  for (double r : axis(0.0, radius, count))
    for (double x : axis(-radius, radius, 2 * count))
      if (r * r + x * x <= radius * radius) s.push_back({r, x});
  const double pi = std::acos(-1.0);
  for (int k = 0; k <= 4 * count; ++k) {
    const double t = pi * k / (4 * count);
    s.push_back({radius * std::sin(t), -radius * std::cos(t)});
  }
  return s;
}

// Region swept by R under the translations xn -> xn + t, t in (-3/4, 1),
// with extra rows inside R itself.
std::vector<Sample> swept_cylinder(const BarrierSpec& s, int count) {
  std::vector<double> xs = axis(-s.delta - 0.75, 1.0 + s.delta, 4 * count);
  for (double x : axis(-s.delta, s.delta, count)) xs.push_back(x);
  return box(axis(0.0, 0.5, count), xs);
}

double u0v(const PParams& p, double t) { return u0(p, t); }

ConditionMargin case_a(const BarrierSpec& s, int count, int which) {
  const PParams& P = s.params;
  const double e = s.eps;
  switch (which) {
    case 0:
      return reduce("supersolution", swept_cylinder(s, count), [&](double r, double x) {
        const BarrierPoint b = eval_barrier_meridian(s, r, x);
        if (!(b.d > 0.0)) return kNaN;
        return 1.0 - b.lap * std::pow(b.psi, 1.0 - P.p);
      });
    case 1:
      return reduce("lateral", box({0.5}, axis(-e, s.delta, count)),
                    [&](double r, double x) {
                      const double psi = eval_barrier_meridian(s, r, x).psi;
                      const double g = u0v(P, x + e);
                      if (psi > 0.0) return psi - g;
                      return g > 0.0 ? -g : kNaN;
                    });
    case 2:
      return reduce("top", box(axis(0.0, 0.5, count), {s.delta}), [&](double r, double x) {
        return eval_barrier_meridian(s, r, x).psi - u0v(P, x + e) + s.c_delta * e;
      });
    default:
      std::vector<Sample> pts = half_disc(s.eta, count);
      // Row where the comparison profile starts to be positive.
      const double x0 = -(1.0 - s.c1 / 2.0) * e;
      for (double r : axis(0.0, std::sqrt(std::max(0.0, s.eta * s.eta - x0 * x0)), count))
        pts.push_back({r, x0});
      return reduce("improvement", pts, [&](double r, double x) {
        const double psi = eval_barrier_meridian(s, r, x).psi;
        const double g = u0v(P, x + (1.0 - s.c1 / 2.0) * e);
        if (psi <= 0.0 && g <= 0.0) return kNaN;
        return g - psi;
      });
  }
}

ConditionMargin case_b(const BarrierSpec& s, int count, int which) {
  const PParams& P = s.params;
  const double e = s.eps;
  auto ball = [&] {
    std::vector<Sample> pts = half_disc(0.75, count);
    // Extra resolution across the zero level of d.
    for (const Sample& q : box(axis(0.0, 0.75, count), axis(-2.0 * e, 4.0 * e, count)))
      if (q.rho * q.rho + q.xn * q.xn <= 0.5625) pts.push_back(q);
    return pts;
  };
  switch (which) {
    case 0:
      return reduce("subsolution", ball(), [&](double r, double x) {
        const BarrierPoint b = eval_barrier_meridian(s, r, x);
        if (b.d == 0.0) return kNaN;
        if (b.d < 0.0) return b.lap * s.C0 / (e * s.K);
        return b.lap * std::pow(b.psi, 1.0 - P.p) - 1.0;
      });
    case 1:
      return reduce("monotone", ball(),
                    [&](double r, double x) { return eval_barrier_meridian(s, r, x).dn; });
    case 2:
      return reduce("lateral_above", box({0.5}, axis(e, s.delta, count)),
                    [&](double r, double x) {
                      return u0v(P, x - e) - eval_barrier_meridian(s, r, x).psi;
                    });
    case 3:
      return reduce("lateral_below",
                    box({0.5}, axis(-s.delta, std::min(e, s.delta), count)),
                    [&](double r, double x) {
                      return -e * e * e - eval_barrier_meridian(s, r, x).psi;
                    });
    case 4:
      return reduce("top", box(axis(0.0, 0.5, count), {s.delta}), [&](double r, double x) {
        return u0v(P, x - e) + s.c_delta * e - eval_barrier_meridian(s, r, x).psi;
      });
    default: {
      const double lo = (1.0 - s.c1 / 2.0) * e;
      std::vector<Sample> pts;
      for (const Sample& q : half_disc(s.eta, count))
        if (q.xn >= lo) pts.push_back(q);
      for (double r : axis(0.0, std::sqrt(std::max(0.0, s.eta * s.eta - lo * lo)), count))
        pts.push_back({r, lo});
      return reduce("improvement", pts, [&](double r, double x) {
        return eval_barrier_meridian(s, r, x).psi - u0v(P, x - lo);
      });
    }
  }
}

int condition_count(BarrierCase k) { return k == BarrierCase::A ? 4 : 6; }

ConditionMargin condition(const BarrierSpec& s, int count, int which) {
  return s.kase == BarrierCase::A ? case_a(s, count, which) : case_b(s, count, which);
}

// Index of the condition depending on eta.
int eta_condition(BarrierCase k) { return k == BarrierCase::A ? 3 : 5; }

void check_spec(const BarrierSpec& s) {
  if (!(s.eps > 0.0) || !(s.c0 > 0.0) || !(s.K > 0.0) || !(s.C0 > 0.0) || !(s.c1 > 0.0) ||
      !(s.delta > 0.0) || !(s.eta > 0.0) || s.n < 2) {
    throw PreconditionError("barrier constants must be positive and n >= 2");
  }
}

}  // namespace

BarrierSpec BarrierSpec::make(BarrierCase kase, const PParams& params, int n, double eps,
                              double c0, double K, double delta, double eta,
                              std::optional<double> c_delta) {
  BarrierSpec s;
  s.kase = kase;
  s.params = params;
  s.n = n;
  s.eps = eps;
  s.c0 = c0;
  s.K = K;
  s.C0 = 2.0 / c0 * K;
  s.c1 = 1.0 / (32.0 * s.C0);
  s.delta = delta;
  s.eta = eta;
  s.c_delta = c_delta ? *c_delta : default_c_delta(params, delta);
  check_spec(s);
  return s;
}

bool BarrierSpec::relations_hold() const {
  return C0 == 2.0 / c0 * K && c1 == 1.0 / (32.0 * C0);
}

double default_c_delta(const PParams& params, double delta) {
  return delta * u0(params, 0.5, U0Order::First) / 2.0;
}

BarrierPoint eval_barrier_meridian(const BarrierSpec& s, double rho, double xn) {
  const PParams& P = s.params;
  const double R = s.radius();
  const double a = (1.0 - s.c1) * s.eps;
  const double n1 = s.n - 1.0;
  BarrierPoint b;
  if (s.kase == BarrierCase::A) {
    const double cn = -(R + a);
    const double D = std::hypot(rho, xn - cn);
    const double gap = (rho * rho + (xn + a) * (xn + 2.0 * R + a)) / (D + R);
    const double g = 1.0 - s.c0 * s.eps;
    b.d = std::max(0.0, gap);
    b.psi = g * u0(P, b.d);
    if (gap > 0.0) {
      b.lap = g * (u0(P, b.d, U0Order::Second) + n1 * u0(P, b.d, U0Order::First) / (b.d + R));
      b.dn = g * u0(P, b.d, U0Order::First) * (xn - cn) / D;
    } else {
      b.lap = gap < 0.0 ? 0.0 : kNaN;
      b.dn = 0.0;
    }
    return b;
  }
  const double cn = R + a;
  const double D = std::hypot(rho, xn - cn);
  const double d = -(rho * rho + (xn - a) * (xn - 2.0 * R - a)) / (D + R);
  const double k = s.eps * s.K / s.C0;
  b.d = d;
  b.psi = u0(P, d) + k * (d + 0.5 * d * d);
  const double d1 = u0(P, d, U0Order::First) + k * (1.0 + d);
  double d2 = k;
  if (d > 0.0) {
    d2 += u0(P, d, U0Order::Second);
  } else if (d == 0.0) {
    d2 = kNaN;
  }
  b.lap = d2 - n1 * d1 / (R - d);
  b.dn = D > 0.0 ? d1 * (cn - xn) / D : kNaN;
  return b;
}

double eval_barrier(const BarrierSpec& spec, const Point& x) {
  if (spec.n < 2 || spec.n > static_cast<int>(x.size())) {
    throw PreconditionError("barrier dimension must be 2 or 3");
  }
  double rho2 = 0.0;
  for (int i = 0; i + 1 < spec.n; ++i) rho2 += x[i] * x[i];
  return eval_barrier_meridian(spec, std::sqrt(rho2), x[spec.n - 1]).psi;
}

const ConditionMargin& BarrierReport::worst() const {
  if (conditions.empty()) throw PreconditionError("empty barrier report");
  return *std::min_element(conditions.begin(), conditions.end(),
                           [](const auto& a, const auto& b) { return a.margin < b.margin; });
}

BarrierReport verify_barrier(const BarrierSpec& spec, int sample_density) {
  check_spec(spec);
  if (sample_density < 32) throw PreconditionError("sample_density must be at least 32");
  BarrierReport rep;
  for (int i = 0; i < condition_count(spec.kase); ++i) {
    rep.conditions.push_back(condition(spec, sample_density, i));
  }
  rep.passed = std::all_of(rep.conditions.begin(), rep.conditions.end(),
                           [](const auto& c) { return c.margin > 0.0; });
  return rep;
}

void require_passed(const BarrierReport& report) {
  if (report.passed) return;
  const ConditionMargin& w = report.worst();
  std::ostringstream os;
  os << "barrier condition '" << w.name << "' fails: margin " << w.margin << " at |x'| = " << w.rho
     << ", x_n = " << w.xn;
  throw VerificationFailure(os.str(), w.name);
}

ConditionMargin verify_lambda_family(const BarrierSpec& spec, double lambda, int sample_density) {
  check_spec(spec);
  if (spec.kase != BarrierCase::A) throw PreconditionError("the u_lambda family is case A");
  if (!(lambda >= 0.0)) throw PreconditionError("lambda must be nonnegative");
  const std::vector<Sample> pts = swept_cylinder(spec, sample_density);
  double dmax = 0.0;
  for (const Sample& q : pts) dmax = std::max(dmax, eval_barrier_meridian(spec, q.rho, q.xn).d);
  const double tmax = dmax + 0.01;
  const OdeProfile prof = integrate_u_lambda(spec.params, lambda, tmax, tmax * 1e-4);
  const double g = 1.0 - spec.c0 * spec.eps;
  const double R = spec.radius();
  const PParams& P = spec.params;
  ConditionMargin m = reduce("lambda_supersolution", pts, [&](double r, double x) {
    const double d = eval_barrier_meridian(spec, r, x).d;
    if (!(d > 0.0)) return kNaN;
    const double u = prof.value(d);
    if (!(u > 0.0)) return kNaN;
    const double lap = g * (std::pow(u, P.p - 1.0) + (spec.n - 1.0) * prof.derivative(d) / (d + R));
    return 1.0 - lap * std::pow(g * u, 1.0 - P.p);
  });
  return m;
}

double estimate_eps_max(const BarrierSpec& spec, int sample_density) {
  auto ok = [&](double e) {
    BarrierSpec s = spec;
    s.eps = e;
    return verify_barrier(s, sample_density).passed;
  };
  if (!ok(spec.eps)) return 0.0;
  double lo = spec.eps;
  double hi = lo;
  for (int i = 0; i < 64; ++i) {
    hi = lo * 1.25;
    if (!ok(hi)) break;
    lo = hi;
  }
  for (int i = 0; i < 30; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

ConstantsSearch search_constants(BarrierCase kase, const PParams& params, double eps, int n) {
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  if (n < 2) throw PreconditionError("n must be at least 2");
  constexpr int kScreen = 32;
  const double M = ratio_bound(params);
  const double k_base = (n - 1.0) * M / (2.0 * (2.0 - params.p));
  static const double kDeltaRatio[] = {8.0, 6.0, 4.0, 3.0, 2.0, 1.5, 1.25, 1.0, 0.75, 0.5};
  ConstantsSearch out;
  // Largest delta first: the construction wants eps small against delta.
  for (double ratio : kDeltaRatio) {
    const double delta = ratio * eps;
    for (int jk = -4; jk <= 16; ++jk) {
      const double K = k_base * std::exp2(jk / 4.0);
      for (int jc = -8; jc <= 24; ++jc) {
        const double c0 = std::exp2(jc / 4.0);
        if (c0 * eps >= 1.0) continue;
        BarrierSpec s = BarrierSpec::make(kase, params, n, eps, c0, K, delta, delta / 2.0);
        SearchStep step{c0, K, delta, s.eta, false, "", kInf};
        // eta-free conditions first, then the largest eta that passes.
        bool ok = true;
        for (int i = 0; i < condition_count(kase) && ok; ++i) {
          if (i == eta_condition(kase)) continue;
          const ConditionMargin m = condition(s, kScreen, i);
          if (!(m.margin > 0.0)) {
            ok = false;
            step.worst = m.name;
            step.margin = m.margin;
          }
        }
        if (ok) {
          ok = false;
          // c1 C0 = 1/32 bends the ball by more than c1 eps / 2 once
          // |x'|^2 > 1/32, so eta starts safely below 1/sqrt(32).
          for (int je = 0; je <= 8 && !ok; ++je) {
            s.eta = 0.125 * std::exp2(-je / 2.0);
            const ConditionMargin m = condition(s, kScreen, eta_condition(kase));
            step.worst = m.name;
            step.margin = m.margin;
            ok = m.margin > 0.0;
          }
          step.eta = s.eta;
        }
        if (ok) {
          for (int density : {64, 128}) {
            const BarrierReport rep = verify_barrier(s, density);
            const ConditionMargin& w = rep.worst();
            step.worst = w.name;
            step.margin = w.margin;
            if (!rep.passed) {
              ok = false;
              break;
            }
          }
        }
        step.passed = ok;
        out.trace.push_back(step);
        if (ok) {
          out.found = true;
          out.spec = s;
          return out;
        }
      }
    }
  }
  return out;
}

ConstantsSearch find_constants(BarrierCase kase, const PParams& params, double eps, int n) {
  ConstantsSearch out = search_constants(kase, params, eps, n);
  if (out.found) return out;
  std::ostringstream os;
  os << "no barrier constants found for p = " << params.p << ", eps = " << eps << " after "
     << out.trace.size() << " candidates";
  throw NoConstantsFound(os.str());
}

std::vector<std::string> condition_names(BarrierCase kase) {
  if (kase == BarrierCase::A) return {"supersolution", "lateral", "top", "improvement"};
  return {"subsolution", "monotone", "lateral_above", "lateral_below", "top", "improvement"};
}

std::optional<BarrierSpec> shipped_constants(BarrierCase kase, double p, double eps) {
  for (const BarrierTableEntry& e : barrier_table()) {
    if (e.kase == kase && e.p == p && e.eps == eps) {
      if (!e.found) return std::nullopt;
      return BarrierSpec::make(kase, make_params(p), 2, eps, e.c0, e.K, e.delta, e.eta);
    }
  }
  return std::nullopt;
}

}  // namespace fb
