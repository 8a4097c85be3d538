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

#include "qualsmith/template.h"

#include <gtest/gtest.h>

#include "qualsmith/generator.h"

namespace qualsmith {
namespace {

Node Decl(std::string name) {
  Node n;
  n.kind = NodeKind::kVarDecl;
  n.name = std::move(name);
  return n;
}

TEST(ContextTest, QueryInnermostFirst) {
  Template t;
  Context ctx;
  ScopeId c = ctx.Open(ScopeClass::kContractMember, ctx.root(), kNoNode);
  ScopeId f = ctx.Open(ScopeClass::kFunctionBody, c, kNoNode);
  ScopeId b = ctx.Open(ScopeClass::kBlock, f, kNoNode);
  NodeId s0 = t.Add(Decl("v0"));
  NodeId s1 = t.Add(Decl("v1"));
  NodeId l0 = t.Add(Decl("v2"));
  NodeId l1 = t.Add(Decl("v3"));
  ctx.PushDecl(s0, c);
  ctx.PushDecl(s1, c);
  ctx.PushDecl(l0, f);
  ctx.PushDecl(l1, b);
  EXPECT_EQ(ctx.Query(b), (std::vector<NodeId>{l1, l0, s1, s0}));
  EXPECT_EQ(ctx.Query(f), (std::vector<NodeId>{l0, s1, s0}));
  EXPECT_TRUE(ctx.Query(ctx.root()).empty());
  EXPECT_EQ(ctx.ScopeOf(l0), f);
  EXPECT_FALSE(ctx.ScopeOf(999).has_value());
  EXPECT_THROW(ctx.PushDecl(s0, f), std::invalid_argument);
}

TEST(ContextTest, FindVisibleScopes) {
  Context ctx;
  ScopeId c = ctx.Open(ScopeClass::kContractMember, ctx.root(), kNoNode);
  ScopeId f = ctx.Open(ScopeClass::kFunctionBody, c, kNoNode);
  ScopeId l = ctx.Open(ScopeClass::kLoopBody, f, kNoNode);
  EXPECT_EQ(ctx.FindVisibleScopes(l), (std::vector<ScopeId>{l, f, c}));
  EXPECT_EQ(ctx.FindVisibleScopes(l, DeclCategory::kStateOnly),
            (std::vector<ScopeId>{c}));
  EXPECT_EQ(ctx.FindVisibleScopes(l, DeclCategory::kContract),
            (std::vector<ScopeId>{ctx.root()}));
  EXPECT_EQ(ctx.FindVisibleScopes(ctx.root(), DeclCategory::kContract),
            (std::vector<ScopeId>{ctx.root()}));
  EXPECT_TRUE(ctx.FindVisibleScopes(ctx.root()).empty());
  EXPECT_EQ(ctx.Enclosing(l, ScopeClass::kContractMember), c);
  EXPECT_EQ(ctx.Enclosing(c, ScopeClass::kFunctionBody), kNoScope);
}

TEST(TemplateTest, FreshNamesCountPerPrefix) {
  Template t;
  EXPECT_EQ(t.FreshName("v"), "v0");
  EXPECT_EQ(t.FreshName("v"), "v1");
  EXPECT_EQ(t.FreshName("f"), "f0");
  EXPECT_EQ(t.FreshName("Err"), "Err0");
  EXPECT_EQ(t.FreshName("v"), "v2");
}

TEST(TemplateTest, NodeKindNamesRoundTrip) {
  for (int k = 0; k <= static_cast<int>(NodeKind::kMember); ++k) {
    auto kind = static_cast<NodeKind>(k);
    EXPECT_EQ(ParseNodeKind(NodeKindName(kind)), kind);
  }
  EXPECT_FALSE(ParseNodeKind("bogus").has_value());
  EXPECT_TRUE(IsExpression(NodeKind::kBinary));
  EXPECT_FALSE(IsExpression(NodeKind::kIf));
  EXPECT_TRUE(IsStatement(NodeKind::kWhile));
}

TEST(TemplateTest, UnresolvedIdentifierIsDetected) {
  Template t;
  Context ctx;
  ScopeId f = ctx.Open(ScopeClass::kFunctionBody, ctx.root(), kNoNode);
  ScopeId g = ctx.Open(ScopeClass::kFunctionBody, ctx.root(), kNoNode);
  NodeId d = t.Add(Decl("v0"));
  ctx.PushDecl(d, f);
  Node id;
  id.kind = NodeKind::kIdentifier;
  id.ref = d;
  id.scope = f;
  NodeId use = t.Add(id);
  EXPECT_TRUE(IdentifiersResolve(t, ctx));
  t.at(use).scope = g;
  EXPECT_FALSE(IdentifiersResolve(t, ctx));
}

TEST(TemplateTest, GeneratedTemplatesRoundTrip) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GeneratorConfig c;
    c.seed = seed;
    GeneratedTemplate g = Generate(c);
    EXPECT_TRUE(IdentifiersResolve(g.tpl, g.ctx)) << seed;
    Template back = Template::FromJson(g.tpl.ToJson());
    EXPECT_EQ(back.ToJson(), g.tpl.ToJson()) << seed;
    EXPECT_EQ(back.Fingerprint(), g.tpl.Fingerprint());
    EXPECT_EQ(g.tpl.Fingerprint().size(), 16u);
  }
}

TEST(TemplateTest, FingerprintSeparatesTemplates) {
  GeneratorConfig a, b;
  a.seed = 1;
  b.seed = 2;
  EXPECT_NE(Generate(a).Id(), Generate(b).Id());
  EXPECT_EQ(Generate(a).Id(), Generate(a).Id());
}

}  // namespace
}  // namespace qualsmith
