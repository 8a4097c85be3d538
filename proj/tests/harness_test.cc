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

#include "qualsmith/harness.h"

#include <gtest/gtest.h>
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>

namespace qualsmith {
namespace {

namespace fs = std::filesystem;

ToolchainTarget Stub(const std::string& script, double timeout = 10) {
  ToolchainTarget t;
  t.name = script;
  t.executable = std::string(QUALSMITH_STUB_DIR) + "/" + script;
  t.timeout_s = timeout;
  return t;
}

class HarnessTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qualsmith-harness-" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    program_ = (dir_ / "p.sol").string();
    std::ofstream(program_) << "contract C0 {}\n";
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
  std::string program_;
};

TEST_F(HarnessTest, StubMatrix) {
  const std::pair<const char*, Category> cases[] = {
      {"ok.sh", Category::kAccepted},
      {"reject.sh", Category::kRejectedFrontend},
      {"ice.sh", Category::kInternalCompilerError},
      {"crash.sh", Category::kCrash},
      {"suspect.sh", Category::kIncorrectBehaviorSuspect},
  };
  for (const auto& [script, want] : cases) {
    Verdict v = RunOne(Stub(script), program_);
    EXPECT_EQ(v.category, want) << script << ": " << v.output;
    EXPECT_EQ(v.file, program_);
    EXPECT_EQ(v.target, script);
  }
}

TEST_F(HarnessTest, HangIsReapedNearTimeout) {
  auto start = std::chrono::steady_clock::now();
  Verdict v = RunOne(Stub("hang.sh", 1), program_);
  double ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - start)
                  .count();
  EXPECT_EQ(v.category, Category::kHang);
  EXPECT_GE(ms, 1000);
  EXPECT_LE(ms, 3000);
}

TEST_F(HarnessTest, CrashReportsSignal) {
  Verdict v = RunOne(Stub("crash.sh"), program_);
  EXPECT_EQ(v.signal, 11);
}

TEST_F(HarnessTest, OutputCapturesBothStreams) {
  ProcessResult r =
      RunProcess({"/bin/sh", "-c", "echo out; echo err >&2; exit 3"}, 5);
  EXPECT_FALSE(r.timed_out);
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_NE(r.output.find("out"), std::string::npos);
  EXPECT_NE(r.output.find("err"), std::string::npos);
}

TEST_F(HarnessTest, MissingExecutableIsConfigError) {
  ToolchainTarget t;
  t.name = "nope";
  t.executable = (dir_ / "does-not-exist").string();
  EXPECT_THROW(ValidateTarget(t), ConfigError);
  t.executable = "qualsmith-no-such-binary-on-path";
  EXPECT_THROW(ValidateTarget(t), ConfigError);
  EXPECT_NO_THROW(ValidateTarget(Stub("ok.sh")));
}

TEST(ClassifyTest, Priorities) {
  ToolchainTarget t;
  ProcessResult r;
  r.output = "Internal compiler error: boom";
  r.timed_out = true;
  EXPECT_EQ(Classify(t, r).category, Category::kHang);
  r.timed_out = false;
  r.signaled = true;
  r.signal = 6;
  EXPECT_EQ(Classify(t, r).category, Category::kCrash);
  r.signaled = false;
  r.exit_code = 1;
  EXPECT_EQ(Classify(t, r).category, Category::kInternalCompilerError);
  r.output = "Assertion failed: x";
  r.exit_code = 0;
  EXPECT_EQ(Classify(t, r).category, Category::kIncorrectBehaviorSuspect);
  r.exit_code = 1;
  r.output = "Warning: unused\nTypeError: bad at /tmp/a.sol:3:4";
  Verdict v = Classify(t, r);
  EXPECT_EQ(v.category, Category::kRejectedFrontend);
  EXPECT_EQ(v.signature, "TypeError: bad at <path>:<n>:<n>");
}

TEST(NormalizeTest, Examples) {
  EXPECT_EQ(NormalizeSignature("Error at /tmp/x/000012-ab.sol:12:7"),
            "Error at <path>:<n>:<n>");
  EXPECT_EQ(NormalizeSignature("slot 0x1f2e   of  v12 in C3"),
            "slot <hex> of <id> in <id>");
  EXPECT_EQ(NormalizeSignature("  f0 calls Err2 with 42  "),
            "<id> calls <id> with <n>");
}

TEST(NormalizeTest, Idempotent) {
  for (const char* s :
       {"TypeError: Type int8 is not implicitly convertible to uint16.",
        "Internal compiler error: /src/libsolidity/ast.cpp(123): v4",
        "at 0xdeadbeef, value 300, contract C1, S0.m", "", "   "}) {
    std::string once = NormalizeSignature(s);
    EXPECT_EQ(NormalizeSignature(once), once) << s;
  }
}

Verdict Make(std::string file, Category c, std::string sig) {
  Verdict v;
  v.file = std::move(file);
  v.target = "t";
  v.category = c;
  v.signature = std::move(sig);
  return v;
}

TEST(DedupeTest, GroupsBySignature) {
  std::vector<Verdict> vs = {
      Make("a", Category::kInternalCompilerError, "x <n>"),
      Make("b", Category::kInternalCompilerError, "x <n>"),
      Make("c", Category::kInternalCompilerError, "y"),
      Make("d", Category::kCrash, "x <n>"),
      Make("e", Category::kAccepted, ""),
      Make("f", Category::kRejectedFrontend, "z"),
  };
  auto groups = Dedupe(vs);
  ASSERT_EQ(groups.size(), 3u);
  EXPECT_EQ(groups.at({Category::kInternalCompilerError, "x <n>"}),
            (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(groups.at({Category::kCrash, "x <n>"}),
            (std::vector<std::string>{"d"}));
}

TEST_F(HarnessTest, TriageValidity) {
  std::vector<Verdict> vs;
  for (int i = 0; i < 95; ++i)
    vs.push_back(Make("ok", Category::kAccepted, ""));
  for (int i = 0; i < 5; ++i) {
    Verdict v = Make(program_, Category::kRejectedFrontend, "TypeError: <n>");
    v.output = "Warning: w\nTypeError: nope\n";
    vs.push_back(v);
  }
  vs.push_back(Make("x", Category::kCrash, "sig"));
  TriageBundle b = FalseAlarmTriage(vs);
  EXPECT_DOUBLE_EQ(b.validity, 0.95);
  EXPECT_EQ(b.accepted, 95u);
  EXPECT_EQ(b.rejected, 5u);
  ASSERT_EQ(b.entries.size(), 5u);
  EXPECT_EQ(b.entries[0].source, "contract C0 {}\n");
  EXPECT_EQ(b.entries[0].diagnostic, "TypeError: nope");
  EXPECT_EQ(b.ToJson()["entries"].size(), 5u);
}

TEST(TriageTest, EdgeCases) {
  std::vector<Verdict> all_ok(3, Make("a", Category::kAccepted, ""));
  TriageBundle b = FalseAlarmTriage(all_ok);
  EXPECT_DOUBLE_EQ(b.validity, 1.0);
  EXPECT_TRUE(b.entries.empty());
  EXPECT_DOUBLE_EQ(FalseAlarmTriage({}).validity, 0.0);
}

TEST(VerdictTest, JsonRoundTrip) {
  Verdict v = Make("/x/y.sol", Category::kHang, "");
  v.exit_code = -1;
  v.signal = 9;
  v.output = "partial\n";
  v.wall_ms = 1234.5;
  Verdict back = Verdict::FromJson(v.ToJson());
  EXPECT_EQ(back.ToJson(), v.ToJson());
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    auto c = static_cast<Category>(i);
    EXPECT_EQ(ParseCategory(CategoryName(c)), c);
  }
  EXPECT_FALSE(ParseCategory("bogus"));
}

}  // namespace
}  // namespace qualsmith
