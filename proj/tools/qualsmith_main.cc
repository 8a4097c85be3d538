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

// qualsmith: generate Solidity test programs and feed them to compilers.
//
// Exit status: 0 campaign complete, 1 configuration error, 2 internal
// invariant violation.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qualsmith/campaign.h"

namespace {

nlohmann::json ReadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qualsmith::ConfigError("cannot read " + path);
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw qualsmith::ConfigError("malformed JSON: " + path);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Bounded-exhaustive random program generator for Solidity "
      "compilers"};
  std::uint64_t seed = 0;
  std::size_t gen = 1;
  bool max = false;
  std::size_t iterations = 0;
  double duration = 0;
  std::string out;
  std::vector<std::string> targets;
  double timeout = 10;
  bool explore = false;
  std::string ranges_file;
  std::string config_file;
  bool generate_only = false;
  bool smtchecker = false;
  int jobs = 1;
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--gen", gen, "Programs per template (K)");
  app.add_flag("--max", max,
               "Keep enumerating until K distinct programs or no more "
               "solutions");
  auto* iter_opt =
      app.add_option("--iterations", iterations, "Number of templates");
  auto* dur_opt =
      app.add_option("--duration", duration, "Wall-clock budget in seconds");
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--target", targets,
                 "Toolchain as name=path; the program path is its argument");
  app.add_option("--timeout", timeout, "Per-compile timeout in seconds");
  app.add_flag("--explore-flags", explore,
               "Sample generator flags per iteration");
  app.add_option("--flag-ranges", ranges_file,
                 "JSON file with ranges for --explore-flags");
  app.add_option("--config", config_file, "Generator configuration JSON");
  app.add_flag("--generate-only", generate_only, "Skip compilation");
  app.add_flag("--smtchecker", smtchecker,
               "Add the SMTChecker pragma to every program");
  app.add_option("--jobs", jobs, "Parallel compile workers");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    qualsmith::CampaignConfig cfg;
    if (!config_file.empty()) {
      cfg.gen = qualsmith::GeneratorConfig::FromJson(ReadJson(config_file));
    }
    cfg.seed = seed;
    cfg.gen_limit = gen;
    cfg.exhaust = max;
    if (*iter_opt) cfg.iterations = iterations;
    if (*dur_opt) cfg.duration_s = duration;
    if (!*iter_opt && !*dur_opt) cfg.iterations = 1;
    cfg.out_dir = out;
    cfg.explore_flags = explore;
    if (!ranges_file.empty()) {
      cfg.ranges = qualsmith::FlagRanges::FromJson(ReadJson(ranges_file));
    }
    cfg.generate_only = generate_only;
    cfg.smtchecker = smtchecker;
    cfg.jobs = jobs;
    for (const std::string& spec : targets) {
      auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
        throw qualsmith::ConfigError("--target expects name=path, got " + spec);
      }
      qualsmith::ToolchainTarget t;
      t.name = spec.substr(0, eq);
      t.executable = spec.substr(eq + 1);
      t.timeout_s = timeout;
      cfg.targets.push_back(std::move(t));
    }
    qualsmith::CampaignReport r = qualsmith::RunCampaign(cfg);
    std::cout << "templates " << r.templates.size() << " programs "
              << r.programs << " corpus " << r.corpus_hash << "\n";
    for (const auto& [target, counts] : r.tallies) {
      std::cout << target << ":";
      for (std::size_t i = 0; i < qualsmith::kCategoryCount; ++i) {
        if (counts[i] == 0) continue;
        std::cout << " "
                  << qualsmith::CategoryName(
                         static_cast<qualsmith::Category>(i))
                  << "=" << counts[i];
      }
      std::cout << "\n";
    }
    if (!generate_only) std::cout << "validity " << r.triage.validity << "\n";
    std::cout << "failure groups " << r.failures.size() << "\n";
    return 0;
  } catch (const qualsmith::InvariantViolation& e) {
    std::cerr << "qualsmith: invariant violation: " << e.what() << "\n";
    return 2;
  } catch (const qualsmith::ConfigError& e) {
    std::cerr << "qualsmith: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "qualsmith: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "qualsmith: bad configuration: " << e.what() << "\n";
    return 1;
  }
}
