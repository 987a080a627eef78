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
#include "cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <set>
#include <sstream>

#include "fb/field_io.hpp"

namespace fb::cli {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

const std::set<std::string> kRequired = {"p", "n", "m", "box", "h", "bc_kind"};
const std::set<std::string> kOptional = {
    "bc_shift",  "bc_e",           "bc_f",    "bc_file",
    "tau0",      "backtrack",      "max_iter", "tol_rel",
    "continuation", "accelerate",  "weight_continuation", "support_search_depth",
    "zero_threshold", "continuation_iters"};

}  // namespace

KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError("config line " + std::to_string(number) + ": empty key");
    if (!kv.emplace(key, value).second) {
      throw UsageError("config line " + std::to_string(number) + ": duplicate key " + key);
    }
  }
  return kv;
}

double parse_real(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
    throw UsageError(what + ": not a number: '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw UsageError(what + ": not an integer: '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw UsageError(what + ": expected true or false, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& text, char sep) {
  std::vector<double> out;
  if (trim(text).empty() || trim(text) == "none") return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(parse_real(item, "list entry"));
  return out;
}

Grid SolveJob::grid() const { return Grid::box(n, lo, hi, h); }

VectorField SolveJob::boundary_field() const {
  const Grid g = grid();
  if (bc_kind == "custom_file") {
    VectorField f = read_vfg(bc_file.string());
    if (!(f.grid() == g) || f.components() != m) {
      throw UsageError("bc_file grid or component count does not match the config");
    }
    return f;
  }
  return sample_exact(g, HalfSpaceSolution(params, bc_e, bc_f, bc_shift));
}

SolveJob make_solve_job(const KeyValues& kv, const std::filesystem::path& base_dir) {
  std::vector<std::string> unknown, missing;
  for (const auto& [k, v] : kv) {
    if (!kRequired.count(k) && !kOptional.count(k)) unknown.push_back(k);
  }
  for (const auto& k : kRequired) {
    if (!kv.count(k)) missing.push_back(k);
  }
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s;
  };
  if (!unknown.empty()) throw UsageError("unknown config keys: " + join(unknown));
  if (kv.count("bc_kind") && kv.at("bc_kind") == "custom_file" && !kv.count("bc_file")) {
    missing.push_back("bc_file");
  }
  if (!missing.empty()) throw UsageError("missing config keys: " + join(missing));

  SolveJob job;
  job.params = make_params(parse_real(kv.at("p"), "p"));
  job.n = parse_int(kv.at("n"), "n");
  job.m = parse_int(kv.at("m"), "m");
  if (job.n != 2 && job.n != 3) throw UsageError("n must be 2 or 3");
  if (job.m < 1) throw UsageError("m must be positive");
  const std::vector<double> box = parse_list(kv.at("box"));
  if (box.size() != static_cast<std::size_t>(2 * job.n)) {
    throw UsageError("box needs lo,hi per axis: " + std::to_string(2 * job.n) + " numbers");
  }
  for (int k = 0; k < job.n; ++k) {
    job.lo[static_cast<std::size_t>(k)] = box[static_cast<std::size_t>(2 * k)];
    job.hi[static_cast<std::size_t>(k)] = box[static_cast<std::size_t>(2 * k + 1)];
  }
  job.h = parse_real(kv.at("h"), "h");
  job.bc_kind = kv.at("bc_kind");
  if (job.bc_kind != "halfspace" && job.bc_kind != "custom_file") {
    throw UsageError("bc_kind must be halfspace or custom_file");
  }
  auto get = [&](const std::string& k) -> const std::string* {
    const auto it = kv.find(k);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (auto v = get("bc_shift")) job.bc_shift = parse_real(*v, "bc_shift");
  job.bc_e.assign(static_cast<std::size_t>(job.n), 0.0);
  job.bc_e.back() = 1.0;
  job.bc_f.assign(static_cast<std::size_t>(job.m), 0.0);
  job.bc_f.front() = 1.0;
  if (auto v = get("bc_e")) job.bc_e = parse_list(*v);
  if (auto v = get("bc_f")) job.bc_f = parse_list(*v);
  if (job.bc_e.size() != static_cast<std::size_t>(job.n)) throw UsageError("bc_e needs n entries");
  if (job.bc_f.size() != static_cast<std::size_t>(job.m)) throw UsageError("bc_f needs m entries");
  if (auto v = get("bc_file")) {
    job.bc_file = std::filesystem::absolute(base_dir / *v).lexically_normal();
  }

  SolverConfig& c = job.solver;
  if (auto v = get("tau0")) c.tau0 = parse_real(*v, "tau0");
  if (auto v = get("backtrack")) c.backtrack = parse_real(*v, "backtrack");
  if (auto v = get("max_iter")) c.max_iter = parse_int(*v, "max_iter");
  if (auto v = get("tol_rel")) c.tol_rel = parse_real(*v, "tol_rel");
  if (auto v = get("zero_threshold")) c.zero_threshold = parse_real(*v, "zero_threshold");
  if (auto v = get("continuation")) c.continuation = parse_list(*v);
  if (auto v = get("continuation_iters")) c.continuation_iters = parse_int(*v, "continuation_iters");
  if (auto v = get("accelerate")) c.accelerate = parse_bool(*v, "accelerate");
  if (auto v = get("weight_continuation")) c.weight_continuation = parse_list(*v);
  if (auto v = get("support_search_depth")) {
    c.support_search_depth = parse_int(*v, "support_search_depth");
  }
  try {
    c.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return job;
}

}  // namespace fb::cli
