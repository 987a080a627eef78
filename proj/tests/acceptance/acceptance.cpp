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
// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "fb/barriers.hpp"
#include "fb/diagnostics.hpp"
#include "fb/energy.hpp"
#include "fb/errors.hpp"
#include "fb/exact.hpp"
#include "fb/field_io.hpp"
#include "fb/grid.hpp"
#include "fb/linearized.hpp"
#include "fb/solver.hpp"
#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;
using namespace fb;

// Pinned tolerances.
constexpr double kOdeRel = 1e-10;
constexpr double kFirstIntegral = 1e-6;
constexpr double k1dLinf = 5e-3;
constexpr double kEnergySlack = 1e-6;
constexpr double kHausdorffCells = 3.0;
constexpr double kFlatnessFactor = 4.0;
constexpr double kKappaTol = 0.05;
constexpr double kRuntimeSeconds = 120.0;
constexpr double kWeissTolFactor = 10.0;
constexpr double kOmegaRel = 0.02;
constexpr double kTrapStopCells = 4.0;
constexpr int kBarrierDensity = 128;
constexpr double kProxTol = 1e-6;
constexpr int kProxTriples = 10000;
constexpr double kQuadraticLinf = 1e-10;
constexpr double kOrderMin = 1.8;
constexpr double kFluxTol = 1e-10;
constexpr double kSlabR2 = 0.99;
constexpr double kSlabStability = 0.30;

const double kH = 1.0 / 128;
const double kShift = 0.1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// -- 1 --------------------------------------------------------------------
Outcome ode_identity() {
  double worst = 0.0;
  for (double p : {0.3, 0.5, 0.8}) {
    const PParams P = make_params(p);
    for (int i = 0; i <= 9900; ++i) {
      const double t = 0.01 + 1e-4 * i;
      const double dd = u0(P, t, U0Order::Second);
      worst = std::max(worst, std::abs(dd - std::pow(u0(P, t), p - 1.0)) / dd);
    }
  }
  return {worst <= kOdeRel, "max relative residual " + fmt("%.3e", worst)};
}

// -- 2 --------------------------------------------------------------------
Outcome first_integral() {
  double worst = 0.0;
  bool monotone = true;
  for (double p : {0.3, 0.5, 0.8}) {
    const PParams P = make_params(p);
    double prev_sup = INFINITY;
    for (double lambda : {1e-2, 1e-3}) {
      const OdeProfile prof = integrate_u_lambda(P, lambda, 1.0, 1e-4);
      double sup = 0.0;
      for (const auto& s : prof.samples) {
        const double fi = s.du * s.du - 2.0 / p * (std::pow(s.u, p) - std::pow(lambda, p));
        worst = std::max(worst, std::abs(fi));
        sup = std::max(sup, std::abs(s.u - u0(P, s.t)));
      }
      monotone = monotone && sup < prev_sup;
      prev_sup = sup;
    }
  }
  return {worst <= kFirstIntegral && monotone,
          "max first-integral defect " + fmt("%.3e", worst) +
              (monotone ? ", sup|u_l - u0| decreasing" : ", sup|u_l - u0| NOT decreasing")};
}

// -- 3 --------------------------------------------------------------------
Outcome recover_1d() {
  const PParams P = make_params(0.5);
  const double h = 1.0 / 256;
  const std::vector<double> ua{0.0}, ub{P.cp};
  const Profile1D prof = solve_1d(P, -1.0, 1.0, ua, ub, h, SolverConfig{});
  double err = 0.0;
  double fb_x = NAN;
  for (std::size_t i = 0; i < prof.size(); ++i) {
    err = std::max(err, std::abs(prof.value(i) - u0(P, prof.x[i])));
    if (std::isnan(fb_x) && prof.value(i) > 1e-10) fb_x = prof.x[i];
  }
  const bool ok = err <= k1dLinf && std::abs(fb_x) <= 2 * h;
  return {ok, "Linf " + fmt("%.3e", err) + ", free boundary at t = " + fmt("%.5f", fb_x)};
}

// -- 4, 5, 6, 11 --------------------------------------------------------------
struct FlatRun {
  fs::path dir;
  double seconds = 0.0;
  int status = 0;
};

FlatRun run_cli_solve(const fs::path& work, int threads) {
  FlatRun r;
  r.dir = work / ("threads" + std::to_string(threads));
  fs::create_directories(r.dir);
  const fs::path cfg = work / "flat.cfg";
  {
    std::ofstream out(cfg);
    out << "p = 0.5\nn = 2\nm = 2\nbox = -0.5,0.5,-0.5,0.5\nh = " << fmt("%.17g", kH)
        << "\nbc_kind = halfspace\nbc_shift = " << kShift << "\n";
  }
  const std::string cmd = "FB_THREADS=" + std::to_string(threads) + " \"" FB_CLI_PATH "\" --quiet solve --config \"" +
                          cfg.string() + "\" --out \"" + r.dir.string() + "\"";
  const auto t0 = std::chrono::steady_clock::now();
  r.status = std::system(cmd.c_str());
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Outcome flat_minimizer(const VectorField& u, const Point& x0, double seconds) {
  const PParams P = make_params(0.5);
  const Grid& g = u.grid();
  const VectorField exact = sample_exact(g, HalfSpaceSolution(P, {0, 1}, {1, 0}, kShift));
  const double e_u = discrete_energy(u, P).total();
  const double e_x = discrete_energy(exact, P).total();
  const bool a = e_u <= e_x + kEnergySlack;

  // Two-sided Hausdorff distance between the crossings and the segment x_n = -shift.
  const FreeBoundary fb = extract_free_boundary(u);
  double haus = fb.empty() ? INFINITY : fb.max_distance_to_plane({0, 1, 0}, -kShift);
  for (std::size_t i = 0; i < g.shape()[0] && !fb.empty(); ++i) {
    haus = std::max(haus, fb.distance({g.origin()[0] + static_cast<double>(i) * kH, -kShift, 0}));
  }
  const bool b = haus <= kHausdorffCells * kH;

  const FlatnessFit flat = fit_flatness(u, P, x0, 0.4);
  const double flat_tol = kFlatnessFactor * std::pow(kH, P.kappa - 1.0);
  const bool c = flat.eps <= flat_tol;

  std::vector<double> radii;
  for (int k = 16; k <= 48; k += 8) radii.push_back(k * kH);
  const ExponentFit grow = fit_growth_exponent(u, x0, radii);
  const bool d = std::abs(grow.kappa_hat - P.kappa) <= kKappaTol;
  const bool t = seconds <= kRuntimeSeconds;

  std::string det = "(a) E=" + fmt("%.9f", e_u) + " vs competitor " + fmt("%.9f", e_x) +
                    (a ? "" : " FAIL") + "; (b) Hausdorff " + fmt("%.5f", haus) + " <= " +
                    fmt("%.5f", kHausdorffCells * kH) + (b ? "" : " FAIL") + "; (c) eps " +
                    fmt("%.4f", flat.eps) + " <= " + fmt("%.4f", flat_tol) + (c ? "" : " FAIL") +
                    "; (d) kappa_hat " + fmt("%.4f", grow.kappa_hat) + (d ? "" : " FAIL") +
                    "; runtime " + fmt("%.1f", seconds) + " s" + (t ? "" : " FAIL");
  return {a && b && c && d && t, det};
}

Outcome weiss_monotone(const VectorField& u, const Point& x0) {
  const PParams P = make_params(0.5);
  const double tol = kWeissTolFactor * kH / 0.1;
  std::vector<double> rs;
  for (int k = 0; k <= 6; ++k) rs.push_back(0.1 + 0.05 * k);
  double worst_drop = 0.0;
  for (std::size_t i = 1; i < rs.size(); ++i) {
    worst_drop = std::max(worst_drop, weiss(u, x0, rs[i - 1], P).W - weiss(u, x0, rs[i], P).W);
  }
  const bool mono = worst_drop <= tol;

  const VectorField ex = sample_exact(u.grid(), HalfSpaceSolution(P, {0, 1}, {1, 0}, 0.0));
  const double omega = weiss_of_halfspace(P, 2, 1024);
  double wmin = INFINITY, wmax = -INFINITY, rel = 0.0;
  for (double r : rs) {
    const double w = weiss(ex, {0, 0, 0}, r, P).W;
    wmin = std::min(wmin, w);
    wmax = std::max(wmax, w);
    rel = std::max(rel, std::abs(w / omega - 1.0));
  }
  const bool flat = wmax - wmin <= tol;
  const bool om = rel <= kOmegaRel;
  return {mono && flat && om,
          "largest drop " + fmt("%.2e", worst_drop) + " (tol " + fmt("%.3f", tol) +
              "); exact-sample spread " + fmt("%.2e", wmax - wmin) + ", max |W/omega_p - 1| " +
              fmt("%.4f", rel) + " (omega_p " + fmt("%.6f", omega) + ")"};
}

Outcome trap(const VectorField& u, const Point& x0) {
  const PParams P = make_params(0.5);
  const TrapSequence seq = harnack_trap(u, P, x0, 0.3, 0.5, 64);
  bool nested = seq.nested();
  bool strict = true;
  int checked = 0;
  double max_width = 0.0;
  for (std::size_t k = 0; k < seq.levels.size(); ++k) {
    max_width = std::max(max_width, seq.levels[k].width());
    if (k + 1 < seq.levels.size() && seq.levels[k + 1].r >= kTrapStopCells * kH) {
      ++checked;
      strict = strict && seq.levels[k + 1].width() < seq.levels[k].width();
    }
  }
  return {nested && strict && checked > 0,
          std::to_string(seq.levels.size()) + " levels, nested " + (nested ? "yes" : "NO") +
              ", strict decrease over " + std::to_string(checked) + " steps " +
              (strict ? "yes" : "NO") + ", max width " + fmt("%.2e", max_width) +
              " (4h = " + fmt("%.4f", 4 * kH) + ")"};
}

// -- 7 --------------------------------------------------------------------
Outcome barriers() {
  int found = 0, passed = 0;
  double worst = INFINITY;
  std::string misses;
  for (BarrierCase k : {BarrierCase::A, BarrierCase::B}) {
    for (double p : {0.3, 0.5, 0.8}) {
      for (double eps : {0.005, 0.01}) {
        try {
          const ConstantsSearch cs = find_constants(k, make_params(p), eps);
          ++found;
          const BarrierReport r = verify_barrier(cs.spec, kBarrierDensity);
          worst = std::min(worst, r.worst().margin);
          if (r.passed) ++passed;
        } catch (const NoConstantsFound&) {
          misses += std::string(" ") + (k == BarrierCase::A ? "A" : "B") + fmt("/p=%.1f", p) +
                    fmt("/eps=%.3f", eps);
        }
      }
    }
  }
  const PParams P = make_params(0.5);
  BarrierSpec forced = BarrierSpec::make(BarrierCase::A, P, 2, 0.01, 1.0, 3.0, 0.02, 0.1);
  forced.C0 = forced.K / (2.0 * forced.c0);
  forced.c1 = 1.0 / (32.0 * forced.C0);
  const BarrierReport fr = verify_barrier(forced, kBarrierDensity);
  const bool forced_fails = forced.c0 * forced.C0 < forced.K && !fr.passed && fr.worst().margin < 0;
  return {found == 12 && passed == 12 && forced_fails,
          std::to_string(found) + "/12 found, " + std::to_string(passed) +
              "/12 pass at density " + std::to_string(kBarrierDensity) + ", min margin " +
              fmt("%.3e", worst) + (misses.empty() ? "" : ", missing:" + misses) +
              "; forced c0*C0<K: " + fr.worst().name + " margin " + fmt("%.3e", fr.worst().margin) +
              " at (" + fmt("%.4f", fr.worst().rho) + ", " + fmt("%.4f", fr.worst().xn) + ")"};
}

// -- 8 --------------------------------------------------------------------
Outcome prox() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> Up(0.05, 0.95), Ut(-3.0, 0.0), Uz(0.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < kProxTriples; ++i) {
    const double p = Up(rng), tau = std::pow(10.0, Ut(rng)), z = Uz(rng);
    const double got = prox_radius(make_params(p), z, tau);
    const double ref = testing::prox_scan_oracle(p, tau, z, 2000);
    worst = std::max(worst, std::abs(got - ref));
  }
  bool dead = true;
  for (double p : {0.2, 0.5, 0.8}) {
    for (double tau : {1e-3, 1e-2, 0.1, 1.0}) {
      const PParams P = make_params(p);
      const double zs = testing::oracle_threshold(p, tau, 20000);
      const std::vector<double> below{zs * (1 - 1e-4), 0.0}, above{zs * (1 + 1e-4), 0.0};
      const auto lo = prox_p(P, below, tau);
      const auto hi = prox_p(P, above, tau);
      const double s_crit = std::pow(2 * tau * (1 - p), 1 / (2 - p));
      dead = dead && lo[0] == 0.0 && lo[1] == 0.0 && hi[0] >= s_crit;
    }
  }
  return {worst <= kProxTol && dead, "max |prox - oracle| " + fmt("%.2e", worst) + " over " +
                                         std::to_string(kProxTriples) + " triples; dead zone " +
                                         (dead ? "exact on both sides" : "VIOLATED")};
}

// -- 9 --------------------------------------------------------------------
double series_G(double s, double y) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 40; ++k) {
    term *= y * y / ((2.0 * k) * (2.0 * k - 1.0 + s));
    sum += term;
  }
  return sum;
}

Outcome linearized() {
  const PParams P = make_params(0.5);
  bool ok = true;
  std::string det;
  for (double s : {s_first(P), s_second(P)}) {
    double qmax = 0.0, flux = 0.0;
    std::vector<double> err;
    for (int N : {32, 64, 128}) {
      const Grid g = Grid::box(2, {-1, 0, 0}, {1, 1, 0}, 1.0 / N);
      const auto quad = [s](const Point& x) { return x[1] * x[1] - (1 + s) * x[0] * x[0]; };
      const auto smooth = [s](const Point& x) { return std::cos(x[0]) * series_G(s, x[1]); };
      for (int which = 0; which < 2; ++which) {
        const auto& f = which == 0 ? std::function<double(const Point&)>(quad)
                                   : std::function<double(const Point&)>(smooth);
        const auto prob = LinearizedProblem::from_function(s, g, f);
        const LinearizedSolution sol = solve_linearized(prob, 1e-13, 100000);
        double e = 0.0;
        for (std::size_t i = 0; i < g.node_count(); ++i) {
          e = std::max(e, std::abs(sol.phi.at(i)[0] - f(g.coords(i))));
        }
        const auto n = static_cast<std::size_t>(N);
        flux = std::max(flux, std::abs(flux_balance(prob, sol.phi, {n / 2, 0, 0},
                                                    {3 * n / 2, n / 2, 0})));
        if (which == 0) {
          qmax = std::max(qmax, e);
        } else {
          err.push_back(e);
        }
      }
    }
    const double order = std::min(std::log2(err[0] / err[1]), std::log2(err[1] / err[2]));
    ok = ok && qmax <= kQuadraticLinf && order >= kOrderMin && flux <= kFluxTol;
    det += fmt("s=%.4f: ", s) + "quadratic Linf " + fmt("%.1e", qmax) + ", smooth order " +
           fmt("%.2f", order) + ", flux " + fmt("%.1e", flux) + "; ";
  }
  det.resize(det.size() - 2);
  return {ok, det};
}

// -- 10 -------------------------------------------------------------------
Outcome slab() {
  const std::vector<double> eps{0.2, 0.1, 0.05};
  std::vector<double> cs;
  double r2min = 1.0;
  for (double h : {1.0 / 128, 1.0 / 256}) {
    const SlabFit fit = fit_slab_decay(eps, Grid::box(2, {-1, -1, 0}, {1, 1, 0}, h));
    double mean = 0.0;
    for (const auto& r : fit.runs) mean += std::log(r.ratio) / 3.0;
    double tss = 0.0;
    for (const auto& r : fit.runs) tss += (std::log(r.ratio) - mean) * (std::log(r.ratio) - mean);
    const double r2 = 1.0 - 3.0 * fit.residual * fit.residual / tss;
    r2min = std::min(r2min, r2);
    cs.push_back(fit.c);
  }
  const double drift = std::abs(cs[1] / cs[0] - 1.0);
  return {cs[0] > 0 && cs[1] > 0 && r2min >= kSlabR2 && drift <= kSlabStability,
          "c = " + fmt("%.4f", cs[0]) + " (h=1/128), " + fmt("%.4f", cs[1]) + " (h=1/256), drift " +
              fmt("%.3f", drift) + ", min R^2 " + fmt("%.5f", r2min)};
}

std::string bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int failures = 0;

void report(int id, const std::function<Outcome()>& check) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("error: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("criterion %2d: %s  %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), s);
  std::fflush(stdout);
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "fb_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  report(1, ode_identity);
  report(2, first_integral);
  report(3, recover_1d);

  const FlatRun one = run_cli_solve(work, 1);
  VectorField u;
  Point x0{};
  bool have_field = false;
  try {
    if (one.status == 0) {
      u = read_vfg((one.dir / "u.vfg").string());
      x0 = snap_to_boundary(extract_free_boundary(u), {0, -kShift, 0}).point;
      have_field = true;
    }
  } catch (const std::exception&) {
  }
  const auto need_field = [&](auto fn) {
    return [&, fn]() -> Outcome {
      if (!have_field) return {false, "flat solve failed (status " + std::to_string(one.status) + ")"};
      return fn();
    };
  };
  report(4, need_field([&] { return flat_minimizer(u, x0, one.seconds); }));
  report(5, need_field([&] { return weiss_monotone(u, x0); }));
  report(6, need_field([&] { return trap(u, x0); }));
  report(7, barriers);
  report(8, prox);
  report(9, linearized);
  report(10, slab);
  report(11, [&]() -> Outcome {
    const FlatRun eight = run_cli_solve(work, 8);
    if (one.status != 0 || eight.status != 0) return {false, "solve failed"};
    const std::string a = bytes(one.dir / "u.vfg"), b = bytes(eight.dir / "u.vfg");
    return {!a.empty() && a == b, std::to_string(a.size()) + " bytes, FB_THREADS=1 vs 8 " +
                                      (a == b ? "identical" : "DIFFER")};
  });

  fs::remove_all(work);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
