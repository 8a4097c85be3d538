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

// Running toolchain binaries on programs and classifying the outcome.

#ifndef QUALSMITH_HARNESS_H_
#define QUALSMITH_HARNESS_H_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace qualsmith {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Category {
  kAccepted,
  kRejectedFrontend,
  kCrash,
  kHang,
  kInternalCompilerError,
  kIncorrectBehaviorSuspect,
};
inline constexpr std::size_t kCategoryCount = 6;
std::string_view CategoryName(Category c);
std::optional<Category> ParseCategory(std::string_view s);

struct ToolchainTarget {
  std::string name;
  std::string executable;
  // "{file}" is replaced by the program path.
  std::vector<std::string> args = {"{file}"};
  double timeout_s = 10;
  std::vector<int> normal_exit_codes = {0};
  std::vector<std::string> ice_patterns = {
      "Internal compiler error", "InternalCompilerError", "solAssert"};
  std::vector<std::string> assertion_patterns = {
      "Assertion failed", "assertion failed", "Assertion `"};
};

// Throws ConfigError when the executable is missing or not runnable.
void ValidateTarget(const ToolchainTarget& t);

struct ProcessResult {
  bool timed_out = false;
  bool signaled = false;
  int exit_code = 0;
  int signal = 0;
  std::string output;  // stdout and stderr interleaved
  double wall_ms = 0;
};

// Runs argv in its own process group and kills the group at the deadline.
ProcessResult RunProcess(const std::vector<std::string>& argv,
                         double timeout_s);

struct Verdict {
  std::string file;
  std::string target;
  Category category = Category::kAccepted;
  int exit_code = 0;
  int signal = 0;
  std::string output;
  std::string signature;
  double wall_ms = 0;

  nlohmann::json ToJson() const;
  static Verdict FromJson(const nlohmann::json& j);
};

// Paths, numbers, hex values and generated identifiers are replaced by
// placeholders. Idempotent.
std::string NormalizeSignature(std::string_view message);

Verdict Classify(const ToolchainTarget& t, const ProcessResult& r);
Verdict RunOne(const ToolchainTarget& t, const std::string& program_path);

struct FailureKey {
  Category category;
  std::string signature;
  friend auto operator<=>(const FailureKey&, const FailureKey&) = default;
};
// Accepted and rejected verdicts are left out.
std::map<FailureKey, std::vector<std::string>> Dedupe(
    const std::vector<Verdict>& verdicts);

struct TriageEntry {
  std::string file;
  std::string source;
  std::string diagnostic;  // first error line
};
struct TriageBundle {
  double validity = 0;  // accepted / (accepted + rejected), 0 when empty
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::vector<TriageEntry> entries;
  nlohmann::json ToJson() const;
};
// Reads each rejected program's source from its path.
TriageBundle FalseAlarmTriage(const std::vector<Verdict>& verdicts);

}  // namespace qualsmith

#endif  // QUALSMITH_HARNESS_H_
