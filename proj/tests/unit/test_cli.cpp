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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli.hpp"
#include "cli/config.hpp"
#include "fb/field_io.hpp"
#include "json.hpp"

namespace fb::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    cwd_ = fs::current_path();
    dir_ = fs::temp_directory_path() /
           ("fb_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override {
    fs::current_path(cwd_);
    fs::remove_all(dir_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
  }
  fs::path cwd_;
  fs::path dir_;
};

std::size_t count_lines(const std::string& file) {
  std::ifstream in(file);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

nlohmann::json read_json(const std::string& file) {
  std::ifstream in(file);
  return nlohmann::json::parse(in);
}

TEST(Config, KeyValues) {
  std::istringstream in("# comment\np = 0.5\n  n=2  \n\nbox = -0.5,0.5,-0.5,0.5 # trailing\n");
  const KeyValues kv = parse_key_values(in);
  EXPECT_EQ(kv.at("p"), "0.5");
  EXPECT_EQ(kv.at("n"), "2");
  EXPECT_EQ(kv.at("box"), "-0.5,0.5,-0.5,0.5");
}

TEST(Config, DuplicateAndMalformedLinesAreRejected) {
  std::istringstream dup("p = 0.5\np = 0.6\n");
  EXPECT_THROW(parse_key_values(dup), UsageError);
  std::istringstream bad("just words\n");
  EXPECT_THROW(parse_key_values(bad), UsageError);
}

TEST(Config, Scalars) {
  EXPECT_EQ(parse_real("1e-3", "x"), 1e-3);
  EXPECT_THROW(parse_real("1e-3x", "x"), UsageError);
  EXPECT_EQ(parse_int("42", "x"), 42);
  EXPECT_THROW(parse_int("4.2", "x"), UsageError);
  EXPECT_TRUE(parse_bool("true", "x"));
  EXPECT_FALSE(parse_bool("0", "x"));
  EXPECT_TRUE(parse_list("none").empty());
  EXPECT_EQ(parse_list("0.1, 0.2").size(), 2u);
}

KeyValues flat_config() {
  return {{"p", "0.5"}, {"n", "2"}, {"m", "2"}, {"box", "-0.5,0.5,-0.5,0.5"},
          {"h", "0.03125"}, {"bc_kind", "halfspace"}, {"bc_shift", "0.1"}};
}

TEST(Config, SolveJob) {
  KeyValues kv = flat_config();
  kv["tau0"] = "0.5";
  kv["continuation"] = "0.1,0.01";
  const SolveJob job = make_solve_job(kv, ".");
  EXPECT_EQ(job.n, 2);
  EXPECT_EQ(job.m, 2);
  EXPECT_EQ(job.params.p, 0.5);
  EXPECT_EQ(job.solver.tau0, 0.5);
  EXPECT_EQ(job.solver.continuation.size(), 2u);
  EXPECT_EQ(job.grid().shape()[0], 33u);
  ASSERT_EQ(job.bc_e.size(), 2u);
  EXPECT_EQ(job.bc_e[1], 1.0);
  const VectorField bc = job.boundary_field();
  EXPECT_EQ(bc.components(), 2);
}

std::string usage_message(const KeyValues& kv) {
  try {
    make_solve_job(kv, ".");
  } catch (const UsageError& e) {
    return e.what();
  }
  return {};
}

TEST(Config, SolveJobErrorsListEveryKey) {
  KeyValues kv = flat_config();
  kv["colour"] = "blue";
  kv["shade"] = "dark";
  const std::string unknown = usage_message(kv);
  EXPECT_NE(unknown.find("colour"), std::string::npos);
  EXPECT_NE(unknown.find("shade"), std::string::npos);
  kv = flat_config();
  kv.erase("h");
  kv.erase("bc_kind");
  const std::string missing = usage_message(kv);
  EXPECT_NE(missing.find("h"), std::string::npos);
  EXPECT_NE(missing.find("bc_kind"), std::string::npos);
}

TEST(Config, CustomFileNeedsPath) {
  KeyValues kv = flat_config();
  kv["bc_kind"] = "custom_file";
  EXPECT_THROW(make_solve_job(kv, "."), UsageError);
}

TEST(Hash, Fnv1aKnownVector) {
  const fs::path f = fs::temp_directory_path() / "fb_fnv_probe.txt";
  std::ofstream(f) << "a";
  EXPECT_EQ(hex64(fnv1a64_file(f)), "af63dc4c8601ec8c");
  fs::remove(f);
}

TEST_F(CliTest, HelpAndUsageErrors) {
  EXPECT_EQ(run({"fb", "--help"}), 0);
  EXPECT_EQ(run({"fb", "exact"}), 2);
  EXPECT_EQ(run({"fb", "nosuch"}), 2);
  EXPECT_EQ(run({"fb", "--quiet", "exact", "--p", "1.5", "--emit", path("x.csv")}), 2);
}

TEST_F(CliTest, ExactWritesRowsAndManifest) {
  ASSERT_EQ(run({"fb", "--quiet", "exact", "--p", "0.5", "--emit", path("u0.csv")}), 0);
  EXPECT_EQ(count_lines(path("u0.csv")), 1002u);
  std::ifstream in(path("u0.csv"));
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "t,u0,du0,ddu0");
  EXPECT_NE(first.find("inf"), std::string::npos);
  const nlohmann::json m = read_json(path("u0.manifest.json"));
  EXPECT_EQ(m["command"], "exact");
  EXPECT_EQ(m["outputs"].size(), 1u);
}

TEST_F(CliTest, SolveDiagnoseAndReplay) {
  write("flat.cfg",
        "p = 0.5\nn = 2\nm = 2\nbox = -0.5,0.5,-0.5,0.5\nh = 0.03125\n"
        "bc_kind = halfspace\nbc_shift = 0.1\n");
  ASSERT_EQ(run({"fb", "--quiet", "solve", "--config", path("flat.cfg"), "--out", path("run")}), 0);
  ASSERT_TRUE(fs::exists(path("run/u.vfg")));
  const nlohmann::json rep = read_json(path("run/report.json"));
  EXPECT_GT(rep["iterations"].get<int>(), 0);
  EXPECT_FALSE(rep.contains("wallclock"));
  const VectorField u = read_vfg(path("run/u.vfg"));
  EXPECT_EQ(u.components(), 2);

  ASSERT_EQ(run({"fb", "--quiet", "diagnose", "--field", path("run/u.vfg"), "--p", "0.5", "--center",
                 "0,-0.1", "--radii", "0.125:0.375:0.0625", "--report", path("diag.json")}),
            0);
  const nlohmann::json d = read_json(path("diag.json"));
  EXPECT_TRUE(d.contains("growth"));

  EXPECT_EQ(run({"fb", "--quiet", "--replay", path("run/manifest.json")}), 0);
  // A changed input invalidates the replay.
  write("flat.cfg", "p = 0.6\n");
  EXPECT_EQ(run({"fb", "--quiet", "--replay", path("run/manifest.json")}), 1);
}

TEST_F(CliTest, BarriersExitCodes) {
  EXPECT_EQ(run({"fb", "--quiet", "barriers", "--case", "A", "--p", "0.5", "--eps", "0.01", "--report",
                 path("a.json")}),
            0);
  EXPECT_TRUE(read_json(path("a.json"))["passed"].get<bool>());
  EXPECT_EQ(run({"fb", "--quiet", "barriers", "--case", "A", "--p", "0.5", "--eps", "0.01", "--c0", "1",
                 "--K", "100", "--delta", "0.02", "--eta", "0.1", "--report", path("bad.json")}),
            1);
  EXPECT_EQ(run({"fb", "--quiet", "barriers", "--case", "C", "--p", "0.5", "--eps", "0.01", "--report",
                 path("c.json")}),
            2);
}

TEST_F(CliTest, LinearizedQuadratic) {
  ASSERT_EQ(run({"fb", "--quiet", "linearized", "--p", "0.5", "--grid", "32", "--report", path("l.json")}),
            0);
  const nlohmann::json r = read_json(path("l.json"));
  EXPECT_LE(r["max_error"].get<double>(), 1e-10);
}

TEST_F(CliTest, MissingConfigIsUsageError) {
  EXPECT_EQ(run({"fb", "--quiet", "solve", "--config", path("none.cfg"), "--out", path("o")}), 2);
}

}  // namespace
}  // namespace fb::cli
