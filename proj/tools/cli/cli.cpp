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
#include "cli/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "fb/errors.hpp"
#include "fb/parallel.hpp"

namespace fb::cli {
namespace {

using nlohmann::json;

fs::path absolute_path(const fs::path& p) {
  return p.empty() ? p : fs::absolute(p).lexically_normal();
}

json file_list(const std::vector<fs::path>& files) {
  json j = json::array();
  for (const fs::path& f : files) {
    j.push_back({{"path", f.string()}, {"fnv1a64", hex64(fnv1a64_file(f))}});
  }
  return j;
}

void write_manifest(const fs::path& path, const RunRecord& rec,
                    const std::vector<std::string>& args, double seconds) {
  json j = {{"tool", "fb"},
            {"version", kToolVersion},
            {"command", rec.command},
            {"args", args},
            {"cwd", fs::current_path().string()},
            {"threads", thread_count()},
            {"config", rec.config},
            {"inputs", file_list(rec.inputs)},
            {"outputs", file_list(rec.outputs)},
            {"wallclock", seconds}};
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw UsageError("cannot write manifest " + path.string());
  os << j.dump(2) << '\n';
}

int replay(const fs::path& manifest_path, bool quiet) {
  std::ifstream in(manifest_path);
  if (!in) throw UsageError("cannot read manifest " + manifest_path.string());
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed manifest: ") + e.what());
  }
  for (const auto& f : m.at("inputs")) {
    const fs::path p = f.at("path").get<std::string>();
    if (!fs::exists(p) || hex64(fnv1a64_file(p)) != f.at("fnv1a64").get<std::string>()) {
      std::cerr << "replay: input changed: " << p << '\n';
      return 1;
    }
  }
  std::vector<std::string> args = m.at("args").get<std::vector<std::string>>();
  const fs::path old = fs::current_path();
  fs::current_path(m.at("cwd").get<std::string>());
  int code = 0;
  try {
    code = run(args);
  } catch (...) {
    fs::current_path(old);
    throw;
  }
  fs::current_path(old);
  if (code != 0) return code;
  int mismatches = 0;
  for (const auto& f : m.at("outputs")) {
    const fs::path p = f.at("path").get<std::string>();
    if (!fs::exists(p) || hex64(fnv1a64_file(p)) != f.at("fnv1a64").get<std::string>()) {
      std::cerr << "replay: output differs: " << p << '\n';
      ++mismatches;
    }
  }
  if (!quiet) {
    std::cout << "replay: " << m.at("outputs").size() - static_cast<std::size_t>(mismatches) << " of "
              << m.at("outputs").size() << " outputs identical\n";
  }
  return mismatches == 0 ? 0 : 1;
}

// Library errors caused by bad user values count as usage errors.
int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const FormatError*>(&e) ||
      dynamic_cast<const DomainError*>(&e) || dynamic_cast<const PreconditionError*>(&e) ||
      dynamic_cast<const GeometryError*>(&e)) {
    return 2;
  }
  return 1;
}

}  // namespace

std::uint64_t fnv1a64_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

int run(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }

int run(const std::vector<std::string>& args) {
  CLI::App app{"fb: numerical laboratory for the p-power free boundary system"};
  app.name("fb");
  app.require_subcommand(0, 1);
  app.fallthrough();
  int threads = 0;
  bool quiet = false;
  std::string manifest;
  std::string replay_path;
  app.add_option("--threads", threads, "Worker threads (default FB_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "No summary line");
  app.add_option("--manifest", manifest, "Manifest path (default next to the outputs)");
  app.add_option("--replay", replay_path, "Re-run a manifest and compare output hashes");

  ExactOptions ex;
  std::string ex_emit;
  auto* c_exact = app.add_subcommand("exact", "Sample u0 or the u_lambda family to CSV");
  c_exact->add_option("--p", ex.p, "Exponent in (0,1)")->required();
  c_exact->add_option("--emit", ex_emit, "CSV path")->required();
  c_exact->add_option("--lambda", ex.lambda, "Initial value of the ODE family");
  c_exact->add_option("--t-max", ex.t_max, "Right end of the samples");
  c_exact->add_option("--rows", ex.rows, "Number of rows");
  c_exact->add_option("--step", ex.step, "ODE step");

  SolveOptions so;
  std::string so_config, so_out;
  auto* c_solve = app.add_subcommand("solve", "Minimize the discrete energy");
  c_solve->add_option("--config", so_config, "key = value config file")->required();
  c_solve->add_option("--out", so_out, "Output directory")->required();

  DiagnoseOptions di;
  std::string di_field, di_report, di_fb, di_weiss, di_pgm;
  auto* c_diag = app.add_subcommand("diagnose", "Free boundary diagnostics of a field");
  c_diag->add_option("--field", di_field, "VFG1 field")->required();
  c_diag->add_option("--p", di.p, "Exponent in (0,1)")->required();
  c_diag->add_option("--center", di.center, "Point near the free boundary")
      ->required()->delimiter(',');
  c_diag->add_option("--radii", di.radii, "a:b:step")->required();
  c_diag->add_option("--report", di_report, "JSON report")->required();
  c_diag->add_option("--emit-fb", di_fb, "Free boundary polyline CSV");
  c_diag->add_option("--emit-weiss", di_weiss, "Weiss scan CSV");
  c_diag->add_option("--emit-pgm", di_pgm, "|u| as 16-bit PGM");
  c_diag->add_option("--r0", di.r0, "Trap radius (default: largest radius)");
  c_diag->add_option("--eta", di.eta, "Trap contraction");

  BarriersOptions ba;
  std::string ba_report, ba_trace;
  auto* c_bar = app.add_subcommand("barriers", "Verify the comparison functions");
  c_bar->add_option("--case", ba.kase, "A or B")->required();
  c_bar->add_option("--p", ba.p, "Exponent in (0,1)")->required();
  c_bar->add_option("--eps", ba.eps, "Flatness")->required();
  c_bar->add_option("--n", ba.n, "Dimension");
  c_bar->add_flag("--auto-constants", ba.auto_constants, "Search for constants");
  c_bar->add_option("--c0", ba.c0);
  c_bar->add_option("--K", ba.K);
  c_bar->add_option("--delta", ba.delta);
  c_bar->add_option("--eta", ba.eta);
  c_bar->add_option("--density", ba.density, "Samples per axis (>= 32)");
  c_bar->add_flag("--eps-max", ba.eps_max, "Estimate the largest passing eps");
  c_bar->add_option("--report", ba_report, "JSON report")->required();
  c_bar->add_option("--emit-trace", ba_trace, "Search trace CSV");

  LinearizedOptions li;
  std::string li_report, li_field;
  auto* c_lin = app.add_subcommand("linearized", "Solve div(x_n^s grad phi) = 0");
  c_lin->add_option("--p", li.p, "Exponent in (0,1)")->required();
  c_lin->add_option("--s", li.s, "auto (2(kappa-1)) or a number");
  c_lin->add_option("--grid", li.grid, "Nodes per unit length");
  c_lin->add_option("--n", li.n, "Dimension");
  c_lin->add_option("--data", li.data, "builtin:quadratic, builtin:random or a VFG1 file");
  c_lin->add_option("--seed", li.seed, "Seed for builtin:random");
  c_lin->add_option("--tol", li.tol, "Relative CG residual");
  c_lin->add_option("--max-iter", li.max_iter, "CG iteration cap");
  c_lin->add_option("--radius", li.radius, "Half-ball radius of the C^{1,sigma} fit");
  c_lin->add_option("--report", li_report, "JSON report")->required();
  c_lin->add_option("--out-field", li_field, "Solution as VFG1");

  SweepOptions sw;
  std::string sw_out = ".";
  auto* c_sweep = app.add_subcommand("sweep", "Batch the flat problem over p");
  c_sweep->add_option("--p-list", sw.p_list, "Comma separated p values")->required();
  c_sweep->add_option("--task", sw.task, "growth or weiss");
  c_sweep->add_option("--grid", sw.grid, "Nodes per unit length");
  c_sweep->add_option("--out", sw_out, "Output directory");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    if (threads > 0) set_thread_count(static_cast<std::size_t>(threads));
    if (!replay_path.empty()) {
      if (!app.get_subcommands().empty()) throw UsageError("--replay takes no subcommand");
      return replay(absolute_path(replay_path), quiet);
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return 2;
    }
    RunRecord rec;
    const auto t0 = std::chrono::steady_clock::now();
    int code = 0;
    fs::path default_dir;
    fs::path default_file;
    if (c_exact->parsed()) {
      rec.command = "exact";
      ex.emit = absolute_path(ex_emit);
      default_file = ex.emit;
      code = run_exact(ex, rec);
    } else if (c_solve->parsed()) {
      rec.command = "solve";
      so.config = absolute_path(so_config);
      so.out = absolute_path(so_out);
      default_dir = so.out;
      code = run_solve(so, rec);
    } else if (c_diag->parsed()) {
      rec.command = "diagnose";
      di.field = absolute_path(di_field);
      di.report = absolute_path(di_report);
      di.emit_fb = absolute_path(di_fb);
      di.emit_weiss = absolute_path(di_weiss);
      di.emit_pgm = absolute_path(di_pgm);
      default_file = di.report;
      code = run_diagnose(di, rec);
    } else if (c_bar->parsed()) {
      rec.command = "barriers";
      ba.report = absolute_path(ba_report);
      ba.emit_trace = absolute_path(ba_trace);
      default_file = ba.report;
      code = run_barriers(ba, rec);
    } else if (c_lin->parsed()) {
      rec.command = "linearized";
      li.report = absolute_path(li_report);
      li.out_field = absolute_path(li_field);
      if (li.data.rfind("builtin:", 0) != 0) li.data = absolute_path(li.data).string();
      default_file = li.report;
      code = run_linearized(li, rec);
    } else {
      rec.command = "sweep";
      sw.out = absolute_path(sw_out);
      default_dir = sw.out;
      code = run_sweep(sw, rec);
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    fs::path mpath = absolute_path(manifest);
    if (mpath.empty()) {
      // Directory outputs own manifest.json; single files get a sibling so
      // runs sharing a directory do not clobber each other.
      mpath = default_file.empty() ? default_dir / "manifest.json"
                                   : default_file.parent_path() /
                                         (default_file.stem().string() + ".manifest.json");
    }
    std::vector<std::string> stored(args.begin() + (args.empty() ? 0 : 1), args.end());
    stored.insert(stored.begin(), "fb");
    write_manifest(mpath, rec, stored, seconds);
    if (!quiet) std::cout << rec.summary << '\n';
    return code;
  } catch (const std::exception& e) {
    std::cerr << "fb: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace fb::cli
