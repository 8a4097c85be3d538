// Copyright 2026 The qualsmith Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qualsmith/campaign.h"

#include <gtest/gtest.h>
#include <stdlib.h>
#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>

namespace qualsmith {
namespace {

namespace fs = std::filesystem;

ToolchainTarget Stub(const std::string& name, const std::string& script) {
  ToolchainTarget t;
  t.name = name;
  t.executable = std::string(QUALSMITH_STUB_DIR) + "/" + script;
  t.timeout_s = 5;
  return t;
}

std::size_t CountFiles(const fs::path& dir, const std::string& ext) {
  std::size_t n = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ext) ++n;
  }
  return n;
}

std::size_t CountLines(const fs::path& file) {
  std::ifstream in(file);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) n += !line.empty();
  return n;
}

class CampaignTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qualsmith-campaign-" + std::to_string(::getpid()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CampaignConfig Base(std::size_t iterations, std::size_t k) const {
    CampaignConfig c;
    c.out_dir = dir_;
    c.seed = 21;
    c.iterations = iterations;
    c.gen_limit = k;
    return c;
  }

  fs::path dir_;
};

TEST(ExploreFlagsTest, PointRangesAreIdentity) {
  GeneratorConfig base;
  base.seed = 4;
  Rng rng(1);
  GeneratorConfig got = ExploreFlags(base, FlagRanges::PointAt(base), rng);
  EXPECT_EQ(got.ToJson(), base.ToJson());
}

TEST(ExploreFlagsTest, SamplesValidateAndVary) {
  GeneratorConfig base;
  Rng rng(7);
  std::set<std::string> distinct;
  for (int i = 0; i < 100; ++i) {
    GeneratorConfig c = ExploreFlags(base, FlagRanges::Defaults(), rng);
    ASSERT_NO_THROW(c.Validate());
    distinct.insert(c.ToJson().dump());
    if (i < 20) {
      c.seed = i;
      GeneratedTemplate g = Generate(c);
      EXPECT_TRUE(g.cs.IsSolvable());
    }
  }
  EXPECT_GT(distinct.size(), 50u);
}

TEST(ExploreFlagsTest, RangesRoundTripAndValidate) {
  FlagRanges r = FlagRanges::Defaults();
  EXPECT_NO_THROW(r.Validate());
  EXPECT_EQ(FlagRanges::FromJson(r.ToJson()).ToJson(), r.ToJson());
  r.contracts = {3, 1};
  EXPECT_THROW(r.Validate(), ConfigError);
}

TEST(ThroughputTest, Examples) {
  Throughput t = ReportThroughput({{2.0, 1, 100}});
  EXPECT_DOUBLE_EQ(t.templates_per_s, 0.5);
  EXPECT_DOUBLE_EQ(t.programs_per_s, 50);
  EXPECT_THROW(ReportThroughput({}), std::invalid_argument);
  // One slow iteration does not move the median.
  Throughput m = ReportThroughput(
      {{1.0, 1, 10}, {1.0, 1, 10}, {1.0, 1, 10}, {100.0, 1, 10}, {1.0, 1, 10}});
  EXPECT_DOUBLE_EQ(m.templates_per_s, 1.0);
  EXPECT_DOUBLE_EQ(m.programs_per_s, 10.0);
}

TEST_F(CampaignTest, GenerateOnlyLayout) {
  CampaignConfig c = Base(10, 5);
  c.generate_only = true;
  CampaignReport r = RunCampaign(c);
  EXPECT_EQ(r.templates.size(), 10u);
  EXPECT_LE(r.programs, 50u);
  EXPECT_GE(r.programs, 10u);
  EXPECT_EQ(CountFiles(dir_, ".sol"), r.programs);
  EXPECT_FALSE(fs::exists(dir_ / "verdicts.jsonl"));
  EXPECT_TRUE(fs::exists(dir_ / "report.json"));
  for (const TemplateStats& t : r.templates) {
    fs::path d = dir_ / t.dir;
    for (const char* f : {"template.json", "config.json",
                          "constraints.pre.json", "constraints.post.json"}) {
      EXPECT_TRUE(fs::exists(d / f)) << d / f;
    }
    EXPECT_EQ(t.dir.substr(0, 7),
              std::string(6 - std::to_string(t.iteration).size(), '0') +
                  std::to_string(t.iteration) + "-");
    EXPECT_EQ(t.dir.substr(7), t.id.substr(0, 12));
  }
  EXPECT_EQ(r.corpus_hash, CorpusHash(dir_));
}

TEST_F(CampaignTest, TalliesCoverEveryProgramAndTarget) {
  CampaignConfig c = Base(4, 3);
  c.targets = {Stub("good", "ok.sh"), Stub("bad", "ice.sh")};
  CampaignReport r = RunCampaign(c);
  ASSERT_EQ(r.tallies.size(), 2u);
  std::size_t total = 0;
  for (const auto& [name, t] : r.tallies) {
    total += std::accumulate(t.begin(), t.end(), std::size_t{0});
  }
  EXPECT_EQ(total, r.programs * 2);
  EXPECT_EQ(r.tallies.at("good")[static_cast<int>(Category::kAccepted)],
            r.programs);
  EXPECT_EQ(
      r.tallies.at("bad")[static_cast<int>(Category::kInternalCompilerError)],
      r.programs);
  // All ICEs share one normalized signature.
  EXPECT_EQ(r.failures.size(), 1u);
  EXPECT_EQ(CountLines(dir_ / "verdicts.jsonl"), r.programs * 2);
  EXPECT_TRUE(fs::exists(dir_ / "triage.json"));
}

TEST_F(CampaignTest, ResumeSkipsFinishedPrograms) {
  CampaignConfig c = Base(3, 2);
  c.targets = {Stub("good", "ok.sh")};
  CampaignReport first = RunCampaign(c);
  EXPECT_EQ(first.resumed, 0u);
  CampaignReport second = RunCampaign(c);
  EXPECT_EQ(second.resumed, first.programs);
  EXPECT_EQ(second.corpus_hash, first.corpus_hash);
  EXPECT_EQ(CountLines(dir_ / "verdicts.jsonl"), first.programs);

  // A torn final record is ignored and redone.
  {
    std::ofstream(dir_ / "verdicts.jsonl", std::ios::app) << "{\"file\": \"x";
  }
  c.iterations = 4;
  CampaignReport third = RunCampaign(c);
  EXPECT_EQ(third.resumed, first.programs);
  EXPECT_GT(third.programs, first.programs);
}

TEST_F(CampaignTest, ParallelJobsMatchSerial) {
  CampaignConfig c = Base(3, 3);
  c.targets = {Stub("good", "ok.sh")};
  CampaignReport serial = RunCampaign(c);
  fs::remove_all(dir_);
  c.jobs = 3;
  CampaignReport parallel = RunCampaign(c);
  EXPECT_EQ(serial.corpus_hash, parallel.corpus_hash);
  EXPECT_EQ(serial.tallies, parallel.tallies);
}

TEST_F(CampaignTest, ConfigErrors) {
  CampaignConfig none = Base(1, 1);
  EXPECT_THROW(RunCampaign(none), ConfigError);  // no targets
  CampaignConfig missing = Base(1, 1);
  missing.targets = {Stub("x", "no-such-stub.sh")};
  EXPECT_THROW(RunCampaign(missing), ConfigError);
  CampaignConfig zero = Base(1, 0);
  zero.generate_only = true;
  EXPECT_THROW(zero.Validate(), ConfigError);
  CampaignConfig unbounded = Base(1, 1);
  unbounded.generate_only = true;
  unbounded.iterations.reset();
  EXPECT_THROW(unbounded.Validate(), ConfigError);
  CampaignConfig jobs = Base(1, 1);
  jobs.generate_only = true;
  jobs.jobs = 0;
  EXPECT_THROW(jobs.Validate(), ConfigError);
}

TEST(EnvOverrideTest, ReplacesExecutable) {
  std::vector<ToolchainTarget> ts(2);
  ts[0].name = "solc-0.8";
  ts[0].executable = "solc";
  ts[1].name = "other";
  ts[1].executable = "other";
  ::setenv("QUALSMITH_TARGET_SOLC_0_8", "/opt/solc", 1);
  ApplyEnvOverrides(ts);
  ::unsetenv("QUALSMITH_TARGET_SOLC_0_8");
  EXPECT_EQ(ts[0].executable, "/opt/solc");
  EXPECT_EQ(ts[1].executable, "other");
}

int RunCli(const std::string& args) {
  std::string cmd =
      std::string(QUALSMITH_CLI) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(CampaignTest, CliExitCodes) {
  std::string out = " --out " + dir_.string();
  EXPECT_EQ(
      RunCli("--seed 3 --iterations 2 --gen 2 --max --generate-only" + out), 0);
  EXPECT_TRUE(fs::exists(dir_ / "report.json"));
  EXPECT_EQ(RunCli("--iterations 1" + out), 1);  // no target
  EXPECT_EQ(RunCli("--iterations 1 --target bogus" + out), 1);
  EXPECT_EQ(RunCli("--iterations 1 --gen 0 --generate-only" + out), 1);
  EXPECT_EQ(RunCli("--iterations 1 --target ok=" +
                   std::string(QUALSMITH_STUB_DIR) + "/ok.sh" + out + "-2"),
            0);
  fs::remove_all(dir_.string() + "-2");
  EXPECT_NE(RunCli("--no-such-flag" + out), 0);
}

}  // namespace
}  // namespace qualsmith
