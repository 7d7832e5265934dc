// Copyright 2026 The raqm-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "raqm/cli.hpp"

namespace {

namespace fs = std::filesystem;
using namespace raqm::cli;

struct Invocation {
  int status;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "raqm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

long lines(const fs::path& p) {
  const std::string text = slurp(p);
  return std::count(text.begin(), text.end(), '\n');
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("raqm_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ::unsetenv("RAQM_SEED");
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, DefaultsAreResolvedAndEchoed) {
  const auto cfg = resolve_config("chsh", {}, std::nullopt, {});
  EXPECT_EQ(cfg.get("seed"), "42");
  EXPECT_EQ(cfg.get("p"), "10007");
  EXPECT_EQ(cfg.get("runs"), "100000");
  EXPECT_EQ(cfg.get("mode"), "sampled");
  EXPECT_NEAR(cfg.epsilon_for(10007), 10.0 / 10007, 1e-18);
  const auto prov = cfg.provenance();
  EXPECT_TRUE(std::none_of(prov.begin(), prov.end(), [](const auto& kv) { return kv.first == "threads"; }));
}

TEST_F(CliTest, LayerPrecedence) {
  const KeyValues file = parse_config_text("# lab config\np = 101\nseed=7\nruns = 10\n");
  EXPECT_EQ(resolve_config("chsh", file, std::nullopt, {{"p", "1009"}}).get("p"), "1009");
  EXPECT_EQ(resolve_config("chsh", file, std::nullopt, {}).get("p"), "101");
  EXPECT_EQ(resolve_config("chsh", file, std::string("9"), {}).get("seed"), "9");
  EXPECT_EQ(resolve_config("chsh", file, std::string("9"), {{"seed", "3"}}).get("seed"), "3");
}

TEST_F(CliTest, ConfigFileAndFlagsThroughTheCommandLine) {
  std::ofstream(path("lab.cfg")) << "p=101\nruns=50\nmode=exact\n";
  const auto r = invoke({"chsh", "--config", path("lab.cfg"), "--p", "1009", "--out", "none", "--summary",
                         path("s.json")});
  ASSERT_EQ(r.status, 0) << r.err;
  const std::string summary = slurp(path("s.json"));
  EXPECT_NE(summary.find("\"p\": \"1009\""), std::string::npos);
  EXPECT_NE(summary.find("\"runs\": \"50\""), std::string::npos);
  EXPECT_NE(summary.find("\"version\": \"0.3.0\""), std::string::npos);
}

TEST_F(CliTest, EnvironmentSeedOverridesFile) {
  std::ofstream(path("lab.cfg")) << "seed=5\n";
  ::setenv("RAQM_SEED", "77", 1);
  const auto r = invoke({"chsh", "--config", path("lab.cfg"), "--runs", "5", "--out", "none", "--summary", "none"});
  ::unsetenv("RAQM_SEED");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("seed=77"), std::string::npos);
}

TEST_F(CliTest, ConfigErrorsExitWithTwo) {
  auto r = invoke({"chsh", "--p", "100"});
  EXPECT_EQ(r.status, kExitConfig);
  EXPECT_NE(r.err.find("p must be prime"), std::string::npos);
  EXPECT_EQ(invoke({"chsh", "--set", "colour=blue"}).status, kExitConfig);
  EXPECT_EQ(invoke({"qubit", "--p", "5"}).status, kExitConfig);  // m1 missing
  EXPECT_EQ(invoke({"chsh", "--runs", "0"}).status, kExitConfig);
  EXPECT_EQ(invoke({"chsh", "--mode", "fast"}).status, kExitConfig);
  EXPECT_EQ(invoke({"nonsense"}).status, kExitConfig);
  EXPECT_EQ(invoke({}).status, kExitConfig);
  std::ofstream(path("bad.cfg")) << "just words\n";
  EXPECT_EQ(invoke({"chsh", "--config", path("bad.cfg")}).status, kExitConfig);
  EXPECT_THROW(parse_config_text("p 101"), ConfigError);
  EXPECT_THROW(resolve_config("chsh", {{"colour", "blue"}}, std::nullopt, {}), ConfigError);
}

TEST_F(CliTest, RuntimeErrorsExitWithThreeAndLeaveNothingBehind) {
  const auto r = invoke({"chsh", "--p", "3", "--epsilon", "1e-6", "--runs", "10", "--out", path("runs.csv"),
                         "--summary", path("s.json")});
  EXPECT_EQ(r.status, kExitRuntime);
  EXPECT_FALSE(fs::exists(path("runs.csv")));
  EXPECT_FALSE(fs::exists(path("s.json")));
}

TEST_F(CliTest, DecimalAndRationalFormatting) {
  const auto r = raqm::exactmath::Rational::parse("-50/101");
  EXPECT_EQ(format_rational(r), "-50/101");
  EXPECT_EQ(format_decimal(r.to_double()), "-0.495049504950");
  EXPECT_EQ(format_decimal(1.0), "1.00000000000");
  EXPECT_EQ(format_decimal(-0.0), "0.00000000000");
  EXPECT_EQ(format_rational(raqm::exactmath::Rational(1)), "1/1");
}

TEST_F(CliTest, EmptyRunLogIsHeaderOnly) {
  EXPECT_EQ(run_log_csv({}), "run_id,x,y,m,cos_exact,outcome_a,outcome_b,def_xy,def_xy',def_x'y,def_x'y'\n");
}

TEST_F(CliTest, ArtifactsByteIdenticalAcrossWorkerCounts) {
  std::string reference_csv, reference_json;
  for (const char* threads : {"1", "4", "8"}) {
    const auto r = invoke({"chsh", "--runs", "3000", "--threads", threads, "--out", path("runs.csv"), "--summary",
                           path("s.json")});
    ASSERT_EQ(r.status, 0) << r.err;
    const std::string csv = slurp(path("runs.csv")), json = slurp(path("s.json"));
    if (reference_csv.empty()) {
      reference_csv = csv;
      reference_json = json;
    } else {
      EXPECT_EQ(csv, reference_csv) << threads;
      EXPECT_EQ(json, reference_json) << threads;
    }
  }
  EXPECT_NE(reference_csv.find("7058/10007"), std::string::npos);
}

TEST_F(CliTest, AtomicWriteReplacesWholeFiles) {
  write_atomic(path("a.txt"), "first");
  write_atomic(path("a.txt"), "second");
  EXPECT_EQ(slurp(path("a.txt")), "second");
  for (const auto& e : fs::directory_iterator(dir_)) EXPECT_EQ(e.path().filename(), "a.txt");
  EXPECT_THROW(write_atomic(path("missing/dir/a.txt"), "x"), std::runtime_error);
}

TEST_F(CliTest, FailedCommitRemovesEarlierFiles) {
  std::ofstream(path("blocker")) << "a file where a directory is needed";
  ArtifactSet set;
  set.add(path("one.txt"), "1");
  set.add(path("blocker/two.txt"), "2");
  EXPECT_ANY_THROW(set.commit());
  EXPECT_FALSE(fs::exists(path("one.txt")));
}

TEST_F(CliTest, TriangleWorkedExample) {
  const auto r = invoke({"triangle", "3/5", "4/5", "1/7"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("verdict: ForcedIrrational"), std::string::npos);
}

TEST_F(CliTest, ChshCertificateCommand) {
  const auto r = invoke({"chsh-cert", "--c00", "1/3", "--alpha", "1/7", "--beta", "2/11", "--gamma", "3/13",
                         "--delta", "1/5", "--summary", path("cert.json")});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("X0Y1: ForcedIrrational"), std::string::npos);
  EXPECT_NE(slurp(path("cert.json")).find("\"X1Y1\""), std::string::npos);
  EXPECT_EQ(invoke({"chsh-cert", "--c00", "1/3", "--alpha", "1/7", "--beta", "2/11", "--gamma", "3/13", "--delta",
                    "1/5", "--realized", "X1Y1"})
                .status,
            kExitConfig);
}

TEST_F(CliTest, ChshSummaryNearTwoRootTwo) {
  const auto r = invoke({"chsh", "--mode", "exact", "--runs", "200", "--out", "none", "--summary", path("s.json")});
  ASSERT_EQ(r.status, 0) << r.err;
  const std::string json = slurp(path("s.json"));
  EXPECT_NE(json.find("\"S\": \"2.8284"), std::string::npos);
  EXPECT_NE(json.find("\"lc1_violations\": 0"), std::string::npos);
}

TEST_F(CliTest, ButterflyTableReachesOneRadian) {
  const auto r = invoke({"butterfly", "--out", path("b.csv")});
  ASSERT_EQ(r.status, 0);
  const std::string csv = slurp(path("b.csv"));
  EXPECT_EQ(csv.rfind("M,log10_dtheta_M\n0,", 0), 0u);
  EXPECT_NE(csv.find("\n30,"), std::string::npos);
  EXPECT_NE(invoke({"butterfly", "--l", "1e-10"}).status, 0);
}

TEST_F(CliTest, ConvergenceScanDecreases) {
  const auto r = invoke({"convergence", "--out", path("c.csv"), "--summary", path("c.json")});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(slurp(path("c.json")).find("\"strictly_decreasing\": true"), std::string::npos);
  EXPECT_EQ(lines(path("c.csv")), 4);
}

TEST_F(CliTest, SmallCommands) {
  EXPECT_EQ(invoke({"qubit", "--p", "5", "--m1", "3", "--n1", "2"}).status, 0);
  const auto s = invoke({"singlet", "--p", "101", "--m", "151", "--out", path("s.csv")});
  EXPECT_NE(s.out.find("-50/101"), std::string::npos);
  EXPECT_EQ(lines(path("s.csv")), 203);
  const auto l = invoke({"lorenz", "--steps", "20000", "--stride", "100", "--out", path("t.csv"), "--summary",
                         path("l.json")});
  EXPECT_EQ(l.status, 0) << l.err;
  EXPECT_EQ(lines(path("t.csv")), 202);
  EXPECT_EQ(invoke({"mi-report", "--runs", "500", "--summary", path("mi.json")}).status, 0);
  EXPECT_EQ(invoke({"audit", "--experiment", "bell1964", "--runs", "200", "--summary", path("a.json")}).status, 0);
  EXPECT_NE(slurp(path("a.json")).find("\"lc1_violations\": 0"), std::string::npos);
}

}  // namespace
