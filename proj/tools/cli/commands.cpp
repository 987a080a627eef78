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
#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "cli/config.hpp"
#include "fb/barriers.hpp"
#include "fb/diagnostics.hpp"
#include "fb/energy.hpp"
#include "fb/field_io.hpp"
#include "fb/linearized.hpp"
#include "fb/solver.hpp"

namespace fb::cli {
namespace {

using nlohmann::json;

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

void write_json(const fs::path& p, const json& j) {
  ensure_parent(p);
  std::ofstream os(p);
  if (!os) throw UsageError("cannot write " + p.string());
  os << j.dump(2) << '\n';
}

std::ofstream open_out(const fs::path& p) {
  ensure_parent(p);
  std::ofstream os(p);
  if (!os) throw UsageError("cannot write " + p.string());
  return os;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

json error_json(const std::exception& e) { return json{{"error", e.what()}}; }

json point_json(const Point& x, int n) {
  json j = json::array();
  for (int i = 0; i < n; ++i) j.push_back(x[static_cast<std::size_t>(i)]);
  return j;
}

// The flat benchmark problem: u0(x_n + shift) f with f the first unit vector.
SolveJob flat_job(double p, int n, int m, double h, double shift) {
  SolveJob job;
  job.params = make_params(p);
  job.n = n;
  job.m = m;
  for (int k = 0; k < n; ++k) {
    job.lo[static_cast<std::size_t>(k)] = -0.5;
    job.hi[static_cast<std::size_t>(k)] = 0.5;
  }
  job.h = h;
  job.bc_kind = "halfspace";
  job.bc_shift = shift;
  job.bc_e.assign(static_cast<std::size_t>(n), 0.0);
  job.bc_e.back() = 1.0;
  job.bc_f.assign(static_cast<std::size_t>(m), 0.0);
  job.bc_f.front() = 1.0;
  return job;
}

// Multiples of h spread over [lo, hi], at least count distinct values.
std::vector<double> lattice_radii(double lo, double hi, int count, double h) {
  std::vector<double> r;
  for (int i = 0; i < count; ++i) {
    const double t = lo + (hi - lo) * i / (count - 1);
    const double v = std::round(t / h) * h;
    if (r.empty() || v > r.back()) r.push_back(v);
  }
  return r;
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(parse_real(item, "radii"));
  if (parts.size() != 3 || !(parts[2] > 0.0) || !(parts[0] > 0.0) || parts[1] < parts[0]) {
    throw UsageError("radii must be a:b:step with 0 < a <= b and step > 0");
  }
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double r = parts[0] + i * parts[2];
    if (r > parts[1] + parts[2] * 1e-3) break;
    out.push_back(r);
  }
  return out;
}

int run_exact(const ExactOptions& o, RunRecord& rec) {
  const PParams P = make_params(o.p);
  if (o.rows < 2 || !(o.t_max > 0.0)) throw UsageError("--rows >= 2 and --t-max > 0 required");
  rec.config = {{"p", o.p}, {"t_max", o.t_max}, {"rows", o.rows}};
  std::ofstream os = open_out(o.emit);
  if (o.lambda) {
    rec.config["lambda"] = *o.lambda;
    rec.config["step"] = o.step;
    const OdeProfile prof = integrate_u_lambda(P, *o.lambda, o.t_max, o.step);
    os << "t,u,du,ddu\n";
    for (int i = 0; i < o.rows; ++i) {
      const double t = std::min(o.t_max * i / (o.rows - 1), prof.t_max());
      os << fmt(t) << ',' << fmt(prof.value(t)) << ',' << fmt(prof.derivative(t)) << ','
         << fmt(prof.second_derivative(t)) << '\n';
    }
  } else {
    os << "t,u0,du0,ddu0\n";
    for (int i = 0; i < o.rows; ++i) {
      const double t = o.t_max * i / (o.rows - 1);
      // u0'' blows up as t -> 0+.
      const double dd = t > 0.0 ? u0(P, t, U0Order::Second) : HUGE_VAL;
      os << fmt(t) << ',' << fmt(u0(P, t)) << ',' << fmt(u0(P, t, U0Order::First)) << ','
         << (t > 0.0 ? fmt(dd) : std::string("inf")) << '\n';
    }
  }
  rec.outputs.push_back(o.emit);
  rec.summary = "exact: " + std::to_string(o.rows) + " rows -> " + o.emit.string();
  return 0;
}

int run_solve(const SolveOptions& o, RunRecord& rec) {
  std::ifstream in(o.config);
  if (!in) throw UsageError("cannot read config " + o.config.string());
  const KeyValues kv = parse_key_values(in);
  const SolveJob job = make_solve_job(kv, o.config.parent_path());
  rec.inputs.push_back(o.config);
  if (job.bc_kind == "custom_file") rec.inputs.push_back(job.bc_file);
  for (const auto& [k, v] : kv) rec.config[k] = v;

  const SolveResult res = minimize(job.boundary_field(), job.params, job.solver);
  const fs::path field = o.out / "u.vfg";
  const fs::path report = o.out / "report.json";
  fs::create_directories(o.out);
  write_vfg(field.string(), res.field);
  const DiscreteEnergy de = discrete_energy(res.field, job.params);
  const FreeBoundary fb = extract_free_boundary(res.field, job.solver.zero_threshold);
  const SolveReport& r = res.report;
  json j = {{"iterations", r.iterations},
            {"converged", r.converged},
            {"final_energy", r.final_energy()},
            {"dirichlet", de.dirichlet},
            {"potential", de.potential},
            {"final_step", r.final_step},
            {"support_moves", r.support_moves},
            {"free_boundary_crossings", fb.crossings.size()},
            {"energy_history", r.energy_history},
            {"continuation_history", r.continuation_history}};
  write_json(report, j);
  rec.outputs = {field, report};
  rec.summary = "solve: " + std::to_string(r.iterations) + " iterations, energy " +
                short_num(r.final_energy()) + (r.converged ? ", converged" : ", not converged") +
                ", " + short_num(r.wallclock) + " s -> " + field.string();
  return 0;
}

int run_diagnose(const DiagnoseOptions& o, RunRecord& rec) {
  const VectorField field = read_vfg(o.field.string());
  rec.inputs.push_back(o.field);
  const PParams P = make_params(o.p);
  const Grid& g = field.grid();
  const int n = g.dim();
  if (o.center.size() != static_cast<std::size_t>(n)) {
    throw UsageError("--center needs " + std::to_string(n) + " coordinates");
  }
  Point c{};
  for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = o.center[static_cast<std::size_t>(i)];
  const std::vector<double> radii = parse_range(o.radii);
  rec.config = {{"p", o.p}, {"center", o.center}, {"radii", o.radii}, {"eta", o.eta}};
  if (o.r0) rec.config["r0"] = *o.r0;

  json j;
  const FreeBoundary fb = extract_free_boundary(field);
  j["free_boundary"] = {{"crossings", fb.crossings.size()}};
  if (fb.empty()) throw HypothesisError("the field has no free boundary");
  const SnapResult snap = snap_to_boundary(fb, c);
  const Point x0 = snap.point;
  j["center"] = point_json(x0, n);
  j["snap_distance"] = snap.distance;

  json weiss_rows = json::array();
  std::vector<WeissRecord> wrecs;
  for (double r : radii) {
    try {
      const WeissRecord w = weiss(field, x0, r, P);
      wrecs.push_back(w);
      weiss_rows.push_back({{"r", r}, {"W", w.W}, {"volume_part", w.volume_part},
                            {"surface_part", w.surface_part}});
    } catch (const Error& e) {
      weiss_rows.push_back({{"r", r}, {"error", e.what()}});
    }
  }
  j["weiss"] = weiss_rows;
  j["omega_p"] = weiss_of_halfspace(P, n, 64);
  const double rmax = radii.back();
  try {
    const FlatnessFit f = fit_flatness(field, P, x0, rmax);
    j["flatness"] = {{"r", rmax}, {"e", point_json(f.e, n)}, {"f", f.f}, {"eps", f.eps},
                     {"eps_sup", f.eps_sup}, {"eps_dead", f.eps_dead}};
  } catch (const Error& e) {
    j["flatness"] = error_json(e);
  }
  try {
    std::vector<double> gr;
    for (double r : radii)
      if (r >= 4.0 * g.h() * (1.0 - 1e-12)) gr.push_back(r);
    const ExponentFit ef = fit_growth_exponent(field, x0, gr);
    j["growth"] = {{"kappa", P.kappa}, {"kappa_hat", ef.kappa_hat}, {"radii", ef.radii},
                   {"sup_values", ef.sup_values}, {"residual", ef.residual}};
  } catch (const Error& e) {
    j["growth"] = error_json(e);
  }
  try {
    const DecayCheck d = decay_check(field, P, x0, radii);
    j["decay"] = {{"C", d.C}, {"rho", d.rho}, {"r", d.r}};
  } catch (const Error& e) {
    j["decay"] = error_json(e);
  }
  try {
    const TrapSequence t = harnack_trap(field, P, x0, o.r0.value_or(rmax), o.eta, 64);
    json levels = json::array();
    for (const TrapLevel& l : t.levels) {
      levels.push_back({{"r", l.r}, {"a", l.a}, {"b", l.b}, {"width", l.width()}});
    }
    j["trap"] = {{"e", point_json(t.e, n)}, {"f", t.f}, {"nested", t.nested()}, {"levels", levels}};
  } catch (const Error& e) {
    j["trap"] = error_json(e);
  }
  write_json(o.report, j);
  rec.outputs.push_back(o.report);

  if (!o.emit_fb.empty()) {
    std::ofstream os = open_out(o.emit_fb);
    os << (n == 2 ? "piece,x,y\n" : "piece,x,y,z\n");
    auto row = [&](std::size_t id, const Point& x) {
      os << id;
      for (int i = 0; i < n; ++i) os << ',' << fmt(x[static_cast<std::size_t>(i)]);
      os << '\n';
    };
    if (n == 2) {
      for (std::size_t s = 0; s < fb.segments.size(); ++s)
        for (const Point& x : fb.segments[s]) row(s, x);
    } else {
      for (std::size_t s = 0; s < fb.triangles.size(); ++s)
        for (const Point& x : fb.triangles[s]) row(s, x);
    }
    rec.outputs.push_back(o.emit_fb);
  }
  if (!o.emit_weiss.empty()) {
    std::ofstream os = open_out(o.emit_weiss);
    os << "r,W,volume_part,surface_part\n";
    for (const WeissRecord& w : wrecs) {
      os << fmt(w.r) << ',' << fmt(w.W) << ',' << fmt(w.volume_part) << ',' << fmt(w.surface_part)
         << '\n';
    }
    rec.outputs.push_back(o.emit_weiss);
  }
  if (!o.emit_pgm.empty()) {
    ensure_parent(o.emit_pgm);
    write_pgm(o.emit_pgm.string(), field);
    rec.outputs.push_back(o.emit_pgm);
    rec.outputs.push_back(o.emit_pgm.string() + ".txt");
  }
  std::string kh = j["growth"].contains("kappa_hat") ? short_num(j["growth"]["kappa_hat"].get<double>())
                                                     : std::string("n/a");
  rec.summary = "diagnose: " + std::to_string(fb.crossings.size()) + " crossings, kappa_hat " + kh +
                " -> " + o.report.string();
  return 0;
}

int run_barriers(const BarriersOptions& o, RunRecord& rec) {
  BarrierCase kase;
  if (o.kase == "A") {
    kase = BarrierCase::A;
  } else if (o.kase == "B") {
    kase = BarrierCase::B;
  } else {
    throw UsageError("--case must be A or B");
  }
  const PParams P = make_params(o.p);
  rec.config = {{"case", o.kase}, {"p", o.p}, {"eps", o.eps}, {"n", o.n},
                {"auto_constants", o.auto_constants}, {"density", o.density}};
  const bool manual = o.c0 || o.K || o.delta || o.eta;
  if (manual && !(o.c0 && o.K && o.delta && o.eta)) {
    throw UsageError("explicit constants need all of --c0, --K, --delta, --eta");
  }
  if (manual && o.auto_constants) throw UsageError("--auto-constants excludes explicit constants");
  json j;
  BarrierSpec spec;
  std::string source;
  if (o.auto_constants) {
    const ConstantsSearch s = search_constants(kase, P, o.eps, o.n);
    std::vector<int> fails(6, 0);
    const auto names = condition_names(kase);
    for (const SearchStep& st : s.trace) {
      for (std::size_t i = 0; i < names.size(); ++i)
        if (!st.passed && names[i] == st.worst) ++fails[i];
    }
    json fj;
    for (std::size_t i = 0; i < names.size(); ++i) fj[names[i]] = fails[i];
    j["search"] = {{"candidates", s.trace.size()}, {"found", s.found}, {"rejected_by", fj}};
    if (!o.emit_trace.empty()) {
      std::ofstream os = open_out(o.emit_trace);
      os << "c0,K,delta,eta,passed,worst,margin\n";
      for (const SearchStep& st : s.trace) {
        os << fmt(st.c0) << ',' << fmt(st.K) << ',' << fmt(st.delta) << ',' << fmt(st.eta) << ','
           << (st.passed ? 1 : 0) << ',' << st.worst << ',' << fmt(st.margin) << '\n';
      }
      rec.outputs.push_back(o.emit_trace);
    }
    if (!s.found) {
      j["passed"] = false;
      write_json(o.report, j);
      rec.outputs.push_back(o.report);
      rec.summary = "barriers: no constants found after " + std::to_string(s.trace.size()) +
                    " candidates (eps too large)";
      return 1;
    }
    spec = s.spec;
    source = "search";
  } else if (manual) {
    spec = BarrierSpec::make(kase, P, o.n, o.eps, *o.c0, *o.K, *o.delta, *o.eta);
    source = "explicit";
  } else {
    const auto shipped = o.n == 2 ? shipped_constants(kase, o.p, o.eps) : std::nullopt;
    if (!shipped) {
      throw UsageError("no shipped constants for this (case, p, eps, n); use --auto-constants");
    }
    spec = *shipped;
    source = "table v" + std::to_string(kBarrierTableVersion);
  }
  const BarrierReport rep = verify_barrier(spec, o.density);
  json conds = json::array();
  for (const ConditionMargin& m : rep.conditions) {
    conds.push_back({{"name", m.name}, {"margin", m.margin}, {"rho", m.rho}, {"xn", m.xn},
                     {"samples", m.samples}});
  }
  j["constants"] = {{"source", source}, {"c0", spec.c0},   {"K", spec.K},
                    {"C0", spec.C0},    {"c1", spec.c1},   {"delta", spec.delta},
                    {"eta", spec.eta},  {"c_delta", spec.c_delta}};
  j["conditions"] = conds;
  j["passed"] = rep.passed;
  if (o.eps_max && rep.passed) j["eps_max"] = estimate_eps_max(spec, o.density);
  write_json(o.report, j);
  rec.outputs.push_back(o.report);
  const ConditionMargin& w = rep.worst();
  rec.summary = std::string("barriers: case ") + o.kase + (rep.passed ? " passed" : " FAILED") +
                ", worst " + w.name + " margin " + short_num(w.margin) + " at (|x'|, x_n) = (" +
                short_num(w.rho) + ", " + short_num(w.xn) + ")";
  return rep.passed ? 0 : 1;
}

int run_linearized(const LinearizedOptions& o, RunRecord& rec) {
  const PParams P = make_params(o.p);
  const double s = o.s == "auto" ? s_first(P) : parse_real(o.s, "--s");
  if (o.n != 2 && o.n != 3) throw UsageError("--n must be 2 or 3");
  if (o.grid < 16) throw UsageError("--grid must be at least 16");
  const double h = 1.0 / o.grid;
  Point lo{}, hi{};
  for (int k = 0; k + 1 < o.n; ++k) {
    lo[static_cast<std::size_t>(k)] = -1.0;
    hi[static_cast<std::size_t>(k)] = 1.0;
  }
  hi[static_cast<std::size_t>(o.n - 1)] = 1.0;
  const Grid g = Grid::box(o.n, lo, hi, h);
  rec.config = {{"p", o.p}, {"s", s}, {"grid", o.grid}, {"n", o.n}, {"data", o.data},
                {"tol", o.tol}, {"max_iter", o.max_iter}, {"radius", o.radius}};
  const int yn = o.n - 1;
  auto quadratic = [&](const Point& x) {
    double r2 = 0.0;
    for (int k = 0; k < yn; ++k) r2 += x[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k)];
    // x_n^2 - (1 + s)/(n - 1) |x'|^2 solves div(x_n^s grad phi) = 0.
    return x[static_cast<std::size_t>(yn)] * x[static_cast<std::size_t>(yn)] - (1.0 + s) / yn * r2;
  };
  LinearizedProblem prob;
  bool exact = false;
  if (o.data == "builtin:quadratic") {
    prob = LinearizedProblem::from_function(s, g, quadratic);
    exact = true;
  } else if (o.data == "builtin:random") {
    rec.config["seed"] = o.seed;
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    prob = LinearizedProblem::from_function(s, g, [&](const Point&) { return dist(rng); });
  } else {
    const fs::path file = o.data;
    const VectorField f = read_vfg(file.string());
    if (!(f.grid() == g) || f.components() != 1) {
      throw UsageError("--data field must be scalar on [-1,1]^(n-1) x [0,1] with h = 1/grid");
    }
    rec.inputs.push_back(file);
    prob = LinearizedProblem::from_function(s, g, [&](const Point& x) {
      return f.at(g.nearest_node(x))[0];
    });
  }
  const LinearizedSolution sol = solve_linearized(prob, o.tol, o.max_iter);
  json j = {{"s", s}, {"h", h}, {"iterations", sol.iterations},
            {"residual", sol.residual_history.empty() ? 0.0 : sol.residual_history.back()}};
  if (exact) {
    double err = 0.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      err = std::max(err, std::abs(sol.phi.at(i)[0] - quadratic(g.coords(i))));
    }
    j["max_error"] = err;
  }
  Index3 blo{0, 0, 0}, bhi{0, 0, 0};
  for (int k = 0; k < yn; ++k) {
    blo[static_cast<std::size_t>(k)] = static_cast<std::size_t>(o.grid / 2);
    bhi[static_cast<std::size_t>(k)] = static_cast<std::size_t>(3 * o.grid / 2);
  }
  bhi[static_cast<std::size_t>(yn)] = static_cast<std::size_t>(o.grid / 2);
  j["flux_balance"] = flux_balance(prob, sol.phi, blo, bhi);
  try {
    const C1SigmaFit fit = check_c1sigma(sol.phi, Point{}, o.radius);
    j["c1sigma"] = {{"a", fit.a}, {"C", fit.C}, {"sigma", fit.sigma}, {"radii", fit.radii},
                    {"residuals", fit.residuals}};
  } catch (const Error& e) {
    j["c1sigma"] = error_json(e);
  }
  write_json(o.report, j);
  rec.outputs.push_back(o.report);
  if (!o.out_field.empty()) {
    ensure_parent(o.out_field);
    write_vfg(o.out_field.string(), sol.phi);
    rec.outputs.push_back(o.out_field);
  }
  rec.summary = "linearized: s = " + short_num(s) + ", " + std::to_string(sol.iterations) +
                " CG iterations" +
                (exact ? ", max error " + short_num(j["max_error"].get<double>()) : std::string()) +
                " -> " + o.report.string();
  return 0;
}

int run_sweep(const SweepOptions& o, RunRecord& rec) {
  const std::vector<double> ps = parse_list(o.p_list);
  if (ps.empty()) throw UsageError("--p-list is empty");
  if (o.task != "growth" && o.task != "weiss") throw UsageError("--task must be growth or weiss");
  if (o.grid < 32) throw UsageError("--grid must be at least 32");
  for (double p : ps) make_params(p);
  rec.config = {{"p_list", ps}, {"task", o.task}, {"grid", o.grid}};
  const double h = 1.0 / o.grid;
  const double shift = 0.1;
  std::string summary;
  for (double p : ps) {
    const SolveJob job = flat_job(p, 2, 2, h, shift);
    const SolveResult res = minimize(job.boundary_field(), job.params, job.solver);
    const FreeBoundary fb = extract_free_boundary(res.field);
    const SnapResult snap = snap_to_boundary(fb, Point{0.0, -shift, 0.0});
    json j = {{"p", p}, {"kappa", job.params.kappa}, {"h", h}, {"iterations", res.report.iterations},
              {"final_energy", res.report.final_energy()}, {"center", point_json(snap.point, 2)}};
    if (o.task == "growth") {
      const ExponentFit ef =
          fit_growth_exponent(res.field, snap.point, lattice_radii(0.125, 0.375, 5, h));
      j["kappa_hat"] = ef.kappa_hat;
      j["radii"] = ef.radii;
      j["sup_values"] = ef.sup_values;
      j["residual"] = ef.residual;
      summary += " p=" + short_num(p) + ": kappa_hat " + short_num(ef.kappa_hat) + " (kappa " +
                 short_num(job.params.kappa) + ")";
    } else {
      json rows = json::array();
      for (int k = 0; k <= 6; ++k) {
        const double r = 0.1 + 0.05 * k;
        rows.push_back({{"r", r}, {"W", weiss(res.field, snap.point, r, job.params).W}});
      }
      j["weiss"] = rows;
      j["omega_p"] = weiss_of_halfspace(job.params, 2, 64);
      summary += " p=" + short_num(p) + " done";
    }
    char name[64];
    std::snprintf(name, sizeof name, "%s_p%g.json", o.task.c_str(), p);
    const fs::path path = o.out / name;
    write_json(path, j);
    rec.outputs.push_back(path);
  }
  rec.summary = "sweep " + o.task + ":" + summary;
  return 0;
}

}  // namespace fb::cli
