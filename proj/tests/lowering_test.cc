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

#include "qualsmith/lowering.h"

#include <gtest/gtest.h>

#include <set>

#include "qualsmith/hash.h"
#include "qualsmith/rng.h"

namespace qualsmith {
namespace {

GeneratedTemplate Make(std::uint64_t seed) {
  GeneratorConfig c;
  c.seed = seed;
  return Generate(c);
}

TEST(LoweringTest, AtMostKDistinctPrograms) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    GeneratedTemplate g = Make(DeriveSeed(4, seed));
    for (std::size_t k : {1u, 3u, 8u}) {
      LoweringOptions o;
      o.gen_limit = k;
      o.seed = seed;
      LoweringResult r = LowerTemplate(g, o);
      ASSERT_GE(r.programs.size(), 1u);
      ASSERT_LE(r.programs.size(), k);
      EXPECT_EQ(r.substitutions, r.programs.size() + r.collapsed);
      EXPECT_LE(r.substitutions, k);
      std::set<std::string> hashes;
      for (std::size_t i = 0; i < r.programs.size(); ++i) {
        const RenderedProgram& p = r.programs[i];
        EXPECT_EQ(p.index, i);
        EXPECT_EQ(p.hash, Sha256Hex(p.source));
        EXPECT_TRUE(hashes.insert(p.hash).second);
        EXPECT_EQ(p.template_id, g.Id());
        EXPECT_NE(p.source.find(kPragma), std::string::npos);
      }
    }
  }
}

TEST(LoweringTest, ExhaustFillsUpToK) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    GeneratedTemplate g = Make(seed);
    LoweringOptions plain;
    plain.gen_limit = 6;
    LoweringOptions full = plain;
    full.exhaust = true;
    LoweringResult a = LowerTemplate(g, plain);
    LoweringResult b = LowerTemplate(g, full);
    EXPECT_GE(b.programs.size(), a.programs.size());
    EXPECT_LE(b.programs.size(), 6u);
    if (b.programs.size() < 6) {
      // Exhausted: every solution was tried.
      auto all = Enumerate(b.reduced.cs, 100000, 0);
      EXPECT_EQ(b.substitutions, all.size()) << seed;
    }
  }
}

TEST(LoweringTest, Deterministic) {
  GeneratedTemplate g = Make(42);
  LoweringOptions o;
  o.gen_limit = 5;
  o.seed = 9;
  LoweringResult a = LowerTemplate(g, o);
  LoweringResult b = LowerTemplate(g, o);
  ASSERT_EQ(a.programs.size(), b.programs.size());
  for (std::size_t i = 0; i < a.programs.size(); ++i) {
    EXPECT_EQ(a.programs[i].source, b.programs[i].source);
  }
}

TEST(LoweringTest, KeywordsAreSolidity) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    GeneratedTemplate g = Make(seed);
    LoweringOptions o;
    o.gen_limit = 4;
    for (const RenderedProgram& p : LowerTemplate(g, o).programs) {
      EXPECT_EQ(p.source.find("nonpayable"), std::string::npos);
      EXPECT_EQ(p.source.find("storage pointer"), std::string::npos);
      EXPECT_EQ(p.source.find("storage reference"), std::string::npos);
      EXPECT_EQ(p.source.find("SMTChecker"), std::string::npos);
    }
  }
}

TEST(LoweringTest, SmtCheckerPragma) {
  GeneratedTemplate g = Make(3);
  LoweringOptions o;
  o.smtchecker = true;
  LoweringResult r = LowerTemplate(g, o);
  EXPECT_NE(r.programs[0].source.find("pragma experimental SMTChecker;"),
            std::string::npos);
}

// A calldata parameter is rendered with its keyword.
TEST(LoweringTest, CalldataParametersRendered) {
  int seen = 0;
  for (std::uint64_t seed = 0; seed < 80 && seen < 5; ++seed) {
    GeneratedTemplate g = Make(seed);
    LoweringOptions o;
    o.gen_limit = 4;
    LoweringResult r = LowerTemplate(g, o);
    for (const RenderedProgram& p : r.programs) {
      bool calldata = false;
      for (const Node& n : g.tpl.nodes()) {
        if (n.kind != NodeKind::kVarDecl || n.site != VarSite::kParameter) {
          continue;
        }
        auto it = p.substitution.find(n.slots.storage);
        if (it != p.substitution.end() &&
            it->second.index ==
                static_cast<std::uint16_t>(StorageLocation::kCalldata)) {
          calldata = true;
        }
      }
      if (!calldata) continue;
      ++seen;
      EXPECT_NE(p.source.find(" calldata "), std::string::npos);
    }
  }
  EXPECT_GT(seen, 0);
}

TEST(LoweringTest, MissingValueThrows) {
  GeneratedTemplate g = Make(5);
  ReducedConstraintSet r = ReduceTemplate(g.cs, g.tpl);
  EXPECT_THROW(RenderSource(g, r, Substitution{}, false), std::logic_error);
}

TEST(LoweringTest, DegenerateTemplateLowers) {
  GeneratorConfig c;
  c.seed = 1;
  c.max_expressions = 0;
  GeneratedTemplate g = Generate(c);
  LoweringOptions o;
  o.gen_limit = 3;
  LoweringResult r = LowerTemplate(g, o);
  EXPECT_GE(r.programs.size(), 1u);
}

TEST(LoweringTest, ProvenanceAndDigest) {
  GeneratedTemplate g = Make(8);
  LoweringOptions o;
  RenderedProgram p = LowerTemplate(g, o).programs.at(0);
  nlohmann::json j = p.Provenance(*g.universe);
  EXPECT_EQ(j["seed"], 8u);
  EXPECT_EQ(j["hash"], p.hash);
  EXPECT_EQ(j["substitution"].size(), p.substitution.size());
  GeneratorConfig a, b;
  a.seed = 1;
  b.seed = 2;
  EXPECT_EQ(ConfigDigest(a), ConfigDigest(b));
  b.contracts = 3;
  EXPECT_NE(ConfigDigest(a), ConfigDigest(b));
}

TEST(LoweringTest, ZeroLimitRejected) {
  GeneratedTemplate g = Make(1);
  LoweringOptions o;
  o.gen_limit = 0;
  EXPECT_THROW(LowerTemplate(g, o), std::invalid_argument);
}

}  // namespace
}  // namespace qualsmith
