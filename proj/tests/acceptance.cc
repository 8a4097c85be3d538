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

// End-to-end acceptance checks. Usage: qualsmith_acceptance <1..8|all>.
// Prints one PASS/FAIL line per criterion and exits nonzero on any FAIL.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.h"
#include "qualsmith/campaign.h"
#include "qualsmith/harness.h"
#include "qualsmith/lowering.h"
#include "qualsmith/reduction.h"
#include "qualsmith/rng.h"
#include "scripted_chooser.h"
#include "small_templates.h"

namespace qs = qualsmith;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

fs::path ScratchDir(const std::string& name) {
  fs::path p = fs::temp_directory_path() /
               ("qualsmith-acceptance-" + std::to_string(getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<qs::PlaceholderId> DeclarationIds(const qs::ConstraintSet& cs) {
  std::vector<qs::PlaceholderId> out;
  for (qs::PlaceholderId id : cs.Ids()) {
    if (cs.Get(id).level == qs::Level::kDeclaration) out.push_back(id);
  }
  return out;
}

// 500 small templates: reduce vs. brute-force projection.
Outcome Criterion1() {
  auto t0 = Clock::now();
  std::size_t cases = 0, mismatches = 0, attempts = 0;
  for (std::uint64_t i = 0; cases < 500 && attempts < 100000; ++i, ++attempts) {
    auto c = qs::testing::MakeSmallCase(qs::DeriveSeed(1, i));
    if (!c) continue;
    ++cases;
    qs::ConstraintSet reduced = qs::Reduce(c->input);
    std::vector<qs::PlaceholderId> decl = DeclarationIds(c->input);
    qs::oracle::BruteForce before(c->input);
    auto expected = before.Project(decl);
    bool ok = DeclarationIds(reduced) == decl && reduced.Ids() == decl;
    if (ok) {
      qs::oracle::BruteForce after(reduced);
      ok = after.Project(decl) == expected &&
           qs::oracle::ToTuples(reduced.Solutions(decl, std::nullopt, 0),
                                decl) == expected;
    }
    if (!ok) ++mismatches;
  }
  double s = Seconds(t0);
  std::ostringstream d;
  d << cases << " templates, " << mismatches << " mismatches, " << s << " s";
  return {cases == 500 && mismatches == 0 && s < 300, d.str()};
}

// 1000 seeded default-config generations are solvable and lower.
Outcome Criterion2() {
  std::size_t solvable = 0, lowered = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    qs::GeneratorConfig c;
    c.seed = qs::DeriveSeed(2, i);
    qs::GeneratedTemplate g = qs::Generate(c);
    if (g.cs.IsSolvable() && g.cs.IsSolvableBySearch()) ++solvable;
    qs::LoweringOptions o;
    o.seed = c.seed;
    try {
      if (qs::LowerTemplate(g, o).substitutions >= 1) ++lowered;
    } catch (const qs::InvariantViolation&) {
    }
  }
  std::ostringstream d;
  d << "solvable " << solvable << "/1000, lowered " << lowered << "/1000";
  return {solvable == 1000 && lowered == 1000, d.str()};
}

// |programs| == min(K, |solutions|) against brute-force counts.
Outcome Criterion3() {
  std::size_t templates = 0, checks = 0, wrong = 0, saturated = 0;
  for (std::uint64_t i = 0; templates < 100 && i < 100000; ++i) {
    auto c = qs::testing::MakeSmallCase(qs::DeriveSeed(3, i));
    if (!c) continue;
    ++templates;
    for (std::size_t k : {1u, 5u, 50u}) {
      qs::LoweringOptions o;
      o.gen_limit = k;
      o.seed = i;
      qs::LoweringResult r = qs::LowerTemplate(c->g, o);
      qs::oracle::BruteForce bf(r.reduced.cs);
      std::size_t count = bf.Count();
      std::size_t expected = std::min(k, count);
      if (count < k) ++saturated;
      ++checks;
      if (r.substitutions != expected || r.programs.size() != expected) {
        ++wrong;
      }
    }
  }
  std::ostringstream d;
  d << templates << " templates, " << checks << " checks (" << saturated
    << " with fewer solutions than K), " << wrong << " wrong";
  return {templates == 100 && wrong == 0, d.str()};
}

Outcome Criterion4() {
  qs::testing::ScriptedChooser ch = qs::testing::CompoundAssignScript();
  qs::GeneratorConfig cfg;
  cfg.seed = 6;
  std::optional<qs::GeneratedTemplate> replay;
  try {
    replay = qs::GenerateExpressionStatement(cfg, ch);
  } catch (const std::exception& e) {
    return {false, std::string("replay failed: ") + e.what()};
  }
  const qs::GeneratedTemplate& g = *replay;
  if (ch.failed || ch.fresh.size() != 2 || !ch.productions.empty()) {
    return {false, "script did not play out as written"};
  }
  const auto kT = qs::QualifierKind::kDataType;
  std::size_t t_placeholders = 0, t_relations = 0;
  for (qs::PlaceholderId id : g.cs.Ids()) {
    if (g.cs.Get(id).kind == kT) ++t_placeholders;
  }
  for (const qs::Constraint& c : g.cs.Relations()) {
    if (g.cs.Get(c.lhs).kind == kT) ++t_relations;
  }
  qs::PlaceholderId x1 = g.tpl.at(ch.fresh[0]).slots.type;
  qs::PlaceholderId x2 = g.tpl.at(ch.fresh[1]).slots.type;
  qs::ReducedConstraintSet r = qs::ReduceTemplate(g.cs, g.tpl);
  std::vector<qs::Constraint> t_after;
  for (const qs::Constraint& c : r.cs.Relations()) {
    if (r.cs.Get(c.lhs).kind == kT) t_after.push_back(c);
  }
  bool shape =
      t_after.size() == 1 && ((t_after[0].lhs == x2 && t_after[0].rhs == x1 &&
                               t_after[0].rel == qs::Relation::kSub) ||
                              (t_after[0].lhs == x1 && t_after[0].rhs == x2 &&
                               t_after[0].rel == qs::Relation::kSuper));
  std::ostringstream d;
  d << t_relations << " T relations over " << t_placeholders
    << " T placeholders; after reduction " << t_after.size() << " relation";
  if (t_after.size() == 1) {
    const qs::Constraint& c = t_after[0];
    d << " "
      << (c.lhs == x1   ? "x1"
          : c.lhs == x2 ? "x2"
                        : "?")
      << " " << qs::RelationSymbol(c.rel) << " "
      << (c.rhs == x1   ? "x1"
          : c.rhs == x2 ? "x2"
                        : "?");
  }
  return {t_relations == 12 && t_placeholders == 11 && shape, d.str()};
}

std::string SolcPath() {
  if (const char* p = std::getenv("QUALSMITH_SOLC"); p && *p) return p;
  return "solc";
}

// Live solc validity over 200 default-config programs, K=5.
Outcome Criterion5() {
  auto t0 = Clock::now();
  qs::CampaignConfig cfg;
  cfg.seed = 5;
  cfg.gen_limit = 5;
  cfg.out_dir = ScratchDir("c5");
  qs::ToolchainTarget solc;
  solc.name = "solc";
  solc.executable = SolcPath();
  solc.timeout_s = 30;
  cfg.targets = {solc};
  qs::CampaignReport r;
  std::size_t iterations = 40;
  try {
    // Rerunning into the same directory only compiles the new programs.
    while (true) {
      cfg.iterations = iterations;
      r = qs::RunCampaign(cfg);
      if (r.programs >= 200) break;
      iterations += (200 - r.programs + 4) / 5;
    }
  } catch (const qs::ConfigError& e) {
    return {false, std::string("solc unavailable: ") + e.what()};
  }
  double s = Seconds(t0);
  std::size_t total = 0;
  for (const auto& [t, counts] : r.tallies) {
    for (std::size_t n : counts) total += n;
  }
  std::ostringstream d;
  d << r.programs << " programs, accepted " << r.triage.accepted
    << ", rejected " << r.triage.rejected << ", validity " << r.triage.validity
    << ", triage entries " << r.triage.entries.size() << ", " << s << " s";
  for (const auto& e : r.triage.entries) {
    d << "\n    rejected " << e.file << ": " << e.diagnostic;
  }
  return {r.programs >= 200 && total == r.programs &&
              r.triage.validity >= 0.90 &&
              r.triage.entries.size() == r.triage.rejected && s < 600,
          d.str()};
}

// Search-space reduction over 1000 default-config templates.
Outcome Criterion6() {
  std::size_t violations = 0;
  std::vector<double> t_log_factor;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    qs::GeneratorConfig c;
    c.seed = qs::DeriveSeed(6, i);
    qs::GeneratedTemplate g = qs::Generate(c);
    qs::ReducedConstraintSet r = qs::ReduceTemplate(g.cs, g.tpl);
    qs::SpaceSize before = qs::SearchSpace(g.cs);
    qs::SpaceSize after = qs::SearchSpace(r.cs);
    for (std::size_t k = 0; k < qs::kAllKinds.size(); ++k) {
      if (after.all[k] > before.all[k] + 1e-9 ||
          after.related[k] > before.related[k] + 1e-9) {
        ++violations;
      }
    }
    std::size_t t = qs::KindIndex(qs::QualifierKind::kDataType);
    t_log_factor.push_back(before.all[t] - after.all[t]);
  }
  qs::SpaceSummary s = qs::Summarize(t_log_factor);
  std::ostringstream d;
  d << violations << " per-kind increases; median DataType reduction factor "
    << "1e" << s.median << " (min 1e" << s.min << ", max 1e" << s.max << ")";
  return {violations == 0 && s.median > 0, d.str()};
}

// Stub toolchain matrix.
Outcome Criterion7() {
  const fs::path stubs = QUALSMITH_STUB_DIR;
  fs::path dir = ScratchDir("c7");
  fs::path program = dir / "p.sol";
  std::ofstream(program) << "contract C {}\n";
  struct Row {
    const char* stub;
    qs::Category want;
  };
  const Row rows[] = {
      {"ok.sh", qs::Category::kAccepted},
      {"ice.sh", qs::Category::kInternalCompilerError},
      {"crash.sh", qs::Category::kCrash},
      {"hang.sh", qs::Category::kHang},
  };
  const double timeout = 2;
  std::size_t right = 0, total = 0;
  double worst_hang_ms = 0;
  std::ostringstream d;
  for (int round = 0; round < 3; ++round) {
    for (const Row& row : rows) {
      qs::ToolchainTarget t;
      t.name = row.stub;
      t.executable = (stubs / row.stub).string();
      t.timeout_s = timeout;
      qs::ValidateTarget(t);
      qs::Verdict v = qs::RunOne(t, program.string());
      ++total;
      if (v.category == row.want) {
        ++right;
      } else {
        d << row.stub << " -> " << qs::CategoryName(v.category) << "; ";
      }
      if (row.want == qs::Category::kHang) {
        worst_hang_ms = std::max(worst_hang_ms, v.wall_ms);
      }
    }
  }
  d << right << "/" << total << " classified; hang reaped after "
    << worst_hang_ms << " ms (limit " << (timeout + 2) * 1000 << ")";
  return {right == total && worst_hang_ms <= (timeout + 2) * 1000, d.str()};
}

// Generate-only determinism.
Outcome Criterion8() {
  bool all = true;
  std::ostringstream d;
  for (bool explore : {false, true}) {
    std::string hashes[2];
    std::size_t programs[2] = {0, 0};
    for (int run = 0; run < 2; ++run) {
      qs::CampaignConfig cfg;
      cfg.seed = 8;
      cfg.gen_limit = 5;
      cfg.iterations = 10;
      cfg.generate_only = true;
      cfg.explore_flags = explore;
      cfg.out_dir = ScratchDir("c8-" + std::to_string(explore) + "-" +
                               std::to_string(run));
      qs::CampaignReport r = qs::RunCampaign(cfg);
      hashes[run] = r.corpus_hash;
      programs[run] = r.programs;
      if (qs::CorpusHash(cfg.out_dir) != r.corpus_hash) all = false;
    }
    bool same =
        hashes[0] == hashes[1] && programs[0] == programs[1] && programs[0] > 0;
    all = all && same;
    d << (explore ? "explored flags: " : "default flags: ") << programs[0]
      << " programs, " << hashes[0].substr(0, 16) << " vs "
      << hashes[1].substr(0, 16) << (same ? " equal" : " DIFFERENT") << "; ";
  }
  return {all, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {
      Criterion1, Criterion2, Criterion3, Criterion4,
      Criterion5, Criterion6, Criterion7, Criterion8};
  std::string which = argc > 1 ? argv[1] : "all";
  std::vector<std::size_t> run;
  if (which == "all") {
    for (std::size_t i = 0; i < criteria.size(); ++i) run.push_back(i);
  } else {
    int n = std::atoi(which.c_str());
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::cerr << "usage: " << argv[0] << " <1..8|all>\n";
      return 2;
    }
    run.push_back(static_cast<std::size_t>(n - 1));
  }
  bool ok = true;
  for (std::size_t i : run) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    ok = ok && o.pass;
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL")
              << "  " << o.detail << std::endl;
  }
  fs::remove_all(fs::temp_directory_path() /
                 ("qualsmith-acceptance-" + std::to_string(getpid())));
  return ok ? 0 : 1;
}
