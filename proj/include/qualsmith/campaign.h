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

// The generate, reduce, lower, test loop and its on-disk layout.
//
//   <out>/<iteration>-<template id>/template.json
//                                  /config.json
//                                  /constraints.pre.json
//                                  /constraints.post.json
//                                  /<k>.sol, <k>.json
//   <out>/verdicts.jsonl   one record per (program, target); resume ledger
//   <out>/report.json
//   <out>/triage.json

#ifndef QUALSMITH_CAMPAIGN_H_
#define QUALSMITH_CAMPAIGN_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qualsmith/generator.h"
#include "qualsmith/harness.h"
#include "qualsmith/reduction.h"
#include "qualsmith/rng.h"

namespace qualsmith {

// Inclusive ranges sampled by flag exploration.
struct FlagRanges {
  std::pair<int, int> contracts{1, 1};
  std::pair<int, int> functions_per_contract{1, 1};
  std::pair<int, int> state_variables{0, 0};
  std::pair<int, int> structs{0, 0};
  std::pair<int, int> modifiers{0, 0};
  std::pair<int, int> max_parameters{0, 0};
  std::pair<int, int> statements_per_body{1, 1};
  std::pair<int, int> max_statement_depth{0, 0};
  std::pair<int, int> max_expression_depth{0, 0};
  std::pair<double, double> array_probability{0, 0};
  std::pair<double, double> mapping_probability{0, 0};
  // Flip dynamic arrays, strings, addresses and contract values at random.
  bool toggle_features = false;

  // Every range collapsed onto the value in `c`.
  static FlagRanges PointAt(const GeneratorConfig& c);
  // The ranges used by --explore-flags.
  static FlagRanges Defaults();
  void Validate() const;
  nlohmann::json ToJson() const;
  static FlagRanges FromJson(const nlohmann::json& j);
};

// The result always passes GeneratorConfig::Validate.
GeneratorConfig ExploreFlags(const GeneratorConfig& base,
                             const FlagRanges& ranges, Rng& rng);

struct CampaignConfig {
  GeneratorConfig gen;
  std::size_t gen_limit = 1;
  bool exhaust = false;
  std::optional<std::size_t> iterations;
  std::optional<double> duration_s;
  std::vector<ToolchainTarget> targets;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  bool explore_flags = false;
  FlagRanges ranges = FlagRanges::Defaults();
  bool generate_only = false;
  bool smtchecker = false;
  int jobs = 1;

  // Throws ConfigError.
  void Validate() const;
};

// QUALSMITH_TARGET_<NAME> replaces the executable of target <name>; the name
// is upper-cased with non-alphanumerics mapped to '_'.
void ApplyEnvOverrides(std::vector<ToolchainTarget>& targets);

struct IterationTiming {
  double seconds = 0;
  std::size_t templates = 1;
  std::size_t programs = 0;
};
struct Throughput {
  double templates_per_s = 0;
  double programs_per_s = 0;
};
// Medians over iterations. Throws std::invalid_argument on empty input.
Throughput ReportThroughput(const std::vector<IterationTiming>& timings);

struct TemplateStats {
  std::size_t iteration = 0;
  std::string id;
  std::string dir;
  std::uint64_t seed = 0;
  std::array<std::size_t, kAllKinds.size()> placeholders{};  // before reduction
  std::array<std::size_t, kAllKinds.size()> reduced{};
  SpaceSize space_before;
  SpaceSize space_after;
  std::size_t substitutions = 0;
  std::size_t programs = 0;
  std::size_t collapsed = 0;
  double seconds = 0;
};

struct CampaignReport {
  std::uint64_t seed = 0;
  std::vector<TemplateStats> templates;
  std::size_t programs = 0;
  std::map<std::string, std::array<std::size_t, kCategoryCount>> tallies;
  std::map<FailureKey, std::vector<std::string>> failures;
  TriageBundle triage;
  Throughput throughput;
  std::size_t resumed = 0;  // verdicts taken from an earlier run's ledger
  std::string corpus_hash;

  nlohmann::json ToJson() const;
};

// Throws ConfigError on a bad configuration before anything is generated and
// InvariantViolation when the pipeline breaks one of its guarantees.
CampaignReport RunCampaign(const CampaignConfig& config);

// SHA-256 over the sorted relative paths and contents of every .sol file.
std::string CorpusHash(const std::filesystem::path& out_dir);

}  // namespace qualsmith

#endif  // QUALSMITH_CAMPAIGN_H_
