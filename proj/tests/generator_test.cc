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

#include "qualsmith/generator.h"

#include <gtest/gtest.h>

#include <algorithm>

#include "scripted_chooser.h"

namespace qualsmith {
namespace {

constexpr QualifierKind kT = QualifierKind::kDataType;
constexpr QualifierKind kS = QualifierKind::kStorageLocation;

std::size_t CountKind(const Template& t, NodeKind k) {
  return std::count_if(t.nodes().begin(), t.nodes().end(),
                       [k](const Node& n) { return n.kind == k; });
}

bool Subset(const Domain& a, const Domain& b) { return (a & ~b).none(); }

TEST(GeneratorTest, SkeletonCounts) {
  GeneratorConfig c;
  c.seed = 11;
  c.contracts = 2;
  c.functions_per_contract = 2;
  c.max_functions_per_contract = 2;
  c.structs = 1;
  c.events = 1;
  GeneratedTemplate g = Generate(c);
  EXPECT_EQ(CountKind(g.tpl, NodeKind::kContract), 2u);
  EXPECT_EQ(CountKind(g.tpl, NodeKind::kFunction), 4u);
  EXPECT_EQ(CountKind(g.tpl, NodeKind::kStruct), 2u);
  EXPECT_EQ(CountKind(g.tpl, NodeKind::kEvent), 2u);
}

TEST(GeneratorTest, StateVariablesLiveInStorage) {
  const Domain storage =
      QualifierUniverse::Set({StorageLocation::kStorageReference});
  int seen = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    GeneratorConfig c;
    c.seed = seed;
    GeneratedTemplate g = Generate(c);
    for (const Node& n : g.tpl.nodes()) {
      if (n.kind != NodeKind::kVarDecl || n.site != VarSite::kState) continue;
      if (n.slots.storage == kNoPlaceholder) continue;
      ++seen;
      EXPECT_EQ(g.cs.Codomain(n.slots.storage), storage);
    }
  }
  EXPECT_GT(seen, 0);
}

TEST(GeneratorTest, DeterministicPerSeed) {
  GeneratorConfig c;
  c.seed = 77;
  GeneratedTemplate a = Generate(c);
  GeneratedTemplate b = Generate(c);
  EXPECT_EQ(a.tpl.ToJson(), b.tpl.ToJson());
  EXPECT_EQ(a.cs.Dump(), b.cs.Dump());
}

TEST(GeneratorTest, TemplatesAreSolvableAndResolve) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    GeneratorConfig c;
    c.seed = DeriveSeed(3, seed);
    GeneratedTemplate g = Generate(c);
    ASSERT_TRUE(g.cs.IsSolvable()) << seed;
    ASSERT_TRUE(g.cs.IsSolvableBySearch()) << seed;
    ASSERT_TRUE(IdentifiersResolve(g.tpl, g.ctx)) << seed;
    ASSERT_LE(g.stats.expressions, c.max_expressions) << seed;
  }
}

// Declarations carry declaration-level placeholders, expressions carry
// expression-level ones.
TEST(GeneratorTest, SlotLevels) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    GeneratorConfig c;
    c.seed = seed;
    GeneratedTemplate g = Generate(c);
    for (const Node& n : g.tpl.nodes()) {
      bool decl = n.kind == NodeKind::kVarDecl || n.kind == NodeKind::kFunction;
      bool expr = IsExpression(n.kind);
      for (PlaceholderId p : {n.slots.type, n.slots.storage, n.slots.visibility,
                              n.slots.mutability}) {
        if (p == kNoPlaceholder || !g.cs.Contains(p)) continue;
        if (decl) EXPECT_EQ(g.cs.Get(p).level, Level::kDeclaration);
        if (expr) EXPECT_EQ(g.cs.Get(p).level, Level::kExpression);
      }
    }
  }
}

TEST(GeneratorTest, ConditionsAreBool) {
  int conditions = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    GeneratorConfig c;
    c.seed = seed;
    GeneratedTemplate g = Generate(c);
    const Domain b = g.universe->TypesOf(TypeFamily::kBool);
    for (const Node& n : g.tpl.nodes()) {
      NodeId cond = kNoNode;
      if (n.kind == NodeKind::kIf || n.kind == NodeKind::kWhile ||
          n.kind == NodeKind::kDoWhile) {
        cond = n.kids.at(0);
      } else if (n.kind == NodeKind::kFor) {
        cond = n.kids.at(1);
      }
      if (cond == kNoNode) continue;
      PlaceholderId t = g.tpl.at(cond).slots.type;
      ASSERT_NE(t, kNoPlaceholder);
      ++conditions;
      EXPECT_TRUE(Subset(g.cs.Current(t), b)) << seed;
    }
  }
  EXPECT_GT(conditions, 0);
}

TEST(GeneratorTest, AssignmentRelations) {
  int compound = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    GeneratorConfig c;
    c.seed = seed;
    GeneratedTemplate g = Generate(c);
    const Domain ints = g.universe->TypesOf(TypeFamily::kInt) |
                        g.universe->TypesOf(TypeFamily::kUInt);
    for (const Node& n : g.tpl.nodes()) {
      if (n.kind != NodeKind::kAssign) continue;
      PlaceholderId lhs = g.tpl.at(n.kids[0]).slots.type;
      PlaceholderId rhs = g.tpl.at(n.kids[1]).slots.type;
      EXPECT_EQ(g.cs.Current(n.slots.type), g.cs.Current(lhs));
      if (n.op != "=") {
        ++compound;
        EXPECT_TRUE(Subset(g.cs.Current(n.slots.type), ints)) << n.op;
        EXPECT_TRUE(Subset(g.cs.Current(lhs), ints)) << n.op;
        EXPECT_TRUE(Subset(g.cs.Current(rhs), ints)) << n.op;
      }
      // Every solution satisfies rhs <= assignment type unless shifting.
      if (n.op == "<<=" || n.op == ">>=") continue;
      for (const Substitution& s : g.cs.Solutions(
               std::vector<PlaceholderId>{rhs, n.slots.type}, 20, seed)) {
        EXPECT_TRUE(g.universe->Leq(s.at(rhs), s.at(n.slots.type)));
      }
    }
  }
  EXPECT_GT(compound, 0);
}

TEST(GeneratorTest, StatementDepthZeroHasNoNesting) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    GeneratorConfig c;
    c.seed = seed;
    c.max_statement_depth = 0;
    GeneratedTemplate g = Generate(c);
    for (NodeKind k : {NodeKind::kIf, NodeKind::kFor, NodeKind::kWhile,
                       NodeKind::kDoWhile}) {
      EXPECT_EQ(CountKind(g.tpl, k), 0u) << seed;
    }
  }
}

TEST(GeneratorTest, ZeroExpressionBudget) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GeneratorConfig c;
    c.seed = seed;
    c.max_expressions = 0;
    GeneratedTemplate g = Generate(c);
    EXPECT_EQ(g.stats.expressions, 0);
    for (const Node& n : g.tpl.nodes()) {
      EXPECT_FALSE(IsExpression(n.kind)) << NodeKindName(n.kind);
    }
    EXPECT_TRUE(g.cs.IsSolvable());
  }
}

TEST(GeneratorTest, StorageOnlyOnReferenceCapableDeclarations) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    GeneratorConfig c;
    c.seed = seed;
    GeneratedTemplate g = Generate(c);
    for (PlaceholderId id : g.cs.Ids(kS, Level::kDeclaration)) {
      EXPECT_FALSE(g.cs.Codomain(id).none());
    }
    for (const Node& n : g.tpl.nodes()) {
      if (n.kind != NodeKind::kVarDecl || n.slots.storage == kNoPlaceholder) {
        continue;
      }
      ASSERT_NE(n.slots.type, kNoPlaceholder);
      EXPECT_EQ(g.cs.Get(n.slots.type).kind, kT);
    }
  }
}

TEST(GeneratorConfigTest, ValidateRejectsBadSettings) {
  GeneratorConfig ok;
  EXPECT_NO_THROW(ok.Validate());
  auto bad = [](auto mutate) {
    GeneratorConfig c;
    mutate(c);
    return c;
  };
  EXPECT_THROW(bad([](GeneratorConfig& c) { c.contracts = 0; }).Validate(),
               std::invalid_argument);
  EXPECT_THROW(bad([](GeneratorConfig& c) {
                 c.max_functions_per_contract = 1;
               }).Validate(),
               std::invalid_argument);
  EXPECT_THROW(
      bad([](GeneratorConfig& c) { c.array_probability = 1.5; }).Validate(),
      std::invalid_argument);
  EXPECT_THROW(
      bad([](GeneratorConfig& c) { c.integer_widths = {7}; }).Validate(),
      std::invalid_argument);
  EXPECT_THROW(bad([](GeneratorConfig& c) {
                 c.production_weights[static_cast<std::size_t>(
                     Production::kIdentifier)] = 0;
               }).Validate(),
               std::invalid_argument);
}

TEST(GeneratorConfigTest, JsonRoundTrip) {
  GeneratorConfig c;
  c.seed = 123456789012345ULL;
  c.contracts = 3;
  c.integer_widths = {8, 64};
  c.ident_storage = IdentStorageRule::kSub;
  c.production_weights[3] = 2.5;
  GeneratorConfig back = GeneratorConfig::FromJson(c.ToJson());
  EXPECT_EQ(back.ToJson(), c.ToJson());
}

TEST(GeneratorTest, ProductionNamesRoundTrip) {
  for (std::size_t i = 0; i < kProductionCount; ++i) {
    auto p = static_cast<Production>(i);
    EXPECT_EQ(ParseProduction(ProductionName(p)), p);
  }
}

// (x1 += x2) + (x1 * (1 - x2)) replayed through the scripted chooser.
TEST(GeneratorTest, ScriptedDerivation) {
  testing::ScriptedChooser ch = testing::CompoundAssignScript();
  GeneratorConfig c;
  c.seed = 6;
  GeneratedTemplate g = GenerateExpressionStatement(c, ch);
  ASSERT_FALSE(ch.failed);
  ASSERT_EQ(ch.fresh.size(), 2u);
  EXPECT_EQ(CountKind(g.tpl, NodeKind::kIdentifier), 4u);
  EXPECT_EQ(CountKind(g.tpl, NodeKind::kLiteral), 1u);
  EXPECT_EQ(CountKind(g.tpl, NodeKind::kBinary), 3u);
  EXPECT_EQ(CountKind(g.tpl, NodeKind::kAssign), 1u);
  std::size_t t_rel = 0;
  for (const Constraint& r : g.cs.Relations()) {
    if (g.cs.Get(r.lhs).kind == kT) ++t_rel;
  }
  EXPECT_EQ(t_rel, 12u);
  EXPECT_TRUE(g.cs.IsSolvable());
}

}  // namespace
}  // namespace qualsmith
