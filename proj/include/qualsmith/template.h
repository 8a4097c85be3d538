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

// Program templates: Solidity-like ASTs whose qualifier positions hold
// placeholders, plus the lexical scope tree used during generation.

#ifndef QUALSMITH_TEMPLATE_H_
#define QUALSMITH_TEMPLATE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qualsmith/constraint_set.h"
#include "qualsmith/qualifier.h"

namespace qualsmith {

enum class NodeKind : std::uint8_t {
  kProgram,
  kContract,
  kFunction,
  kModifier,
  kEvent,
  kError,
  kStruct,
  kVarDecl,
  kExprStmt,
  kVarDeclStmt,
  kIf,
  kFor,
  kWhile,
  kDoWhile,
  kReturn,
  kEmit,
  kRevert,
  kLiteral,
  kIdentifier,
  kAssign,
  kBinary,
  kUnary,
  kNew,
  kConditional,
  kCall,
  kIndex,
  kMember,
};

std::string_view NodeKindName(NodeKind k);
std::optional<NodeKind> ParseNodeKind(std::string_view s);
bool IsExpression(NodeKind k);
bool IsStatement(NodeKind k);

enum class VarSite : std::uint8_t {
  kState,
  kLocal,
  kParameter,
  kReturn,
  kModifierParameter,
  kEventParameter,
  kErrorParameter,
  kStructMember,
};

Placement PlacementOf(VarSite site);

enum class CallKind : std::uint8_t {
  kInternal,
  kExternal,  // receiver.f(...), receiver is `this` or a contract value
  kGetter,    // receiver.v()
  kStructConstructor,
};

// Placeholder slots of a node. Unused slots hold kNoPlaceholder.
struct Slots {
  PlaceholderId type = kNoPlaceholder;
  PlaceholderId storage = kNoPlaceholder;
  PlaceholderId visibility = kNoPlaceholder;
  PlaceholderId mutability = kNoPlaceholder;
  PlaceholderId key = kNoPlaceholder;    // mapping declarations
  PlaceholderId value = kNoPlaceholder;  // mapping declarations
};

using ScopeId = std::uint32_t;
inline constexpr ScopeId kNoScope = UINT32_MAX;

struct Node {
  NodeKind kind = NodeKind::kProgram;
  NodeId parent = kNoNode;
  ScopeId scope = kNoScope;  // scope the node appears in
  std::string name;          // declared name
  std::string op;            // operator of assignments and operations
  LiteralValue literal;
  VarSite site = VarSite::kLocal;
  CallKind call = CallKind::kInternal;
  NodeId ref = kNoNode;       // referenced declaration
  NodeId receiver = kNoNode;  // external calls and getters; kNoNode = this
  std::vector<NodeId> kids;   // operands, arguments, parameters
  std::vector<NodeId> rets;   // function returns
  std::vector<NodeId> body;   // members and statements
  std::vector<NodeId> alt;    // else branch
  std::vector<NodeId> mods;   // modifier invocations of a function
  Slots slots;
};

class Template {
 public:
  Template();

  NodeId root() const { return 0; }
  NodeId Add(Node n);
  Node& at(NodeId id);
  const Node& at(NodeId id) const;
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }

  // Fresh names per prefix: v0, v1, f0, C0, S0, E0, Err0, m0.
  std::string FreshName(std::string_view prefix);

  // Placeholders in slot order across all nodes.
  std::vector<PlaceholderId> Placeholders() const;

  nlohmann::json ToJson() const;
  static Template FromJson(const nlohmann::json& j);

  // Stable identifier derived from the serialized form.
  std::string Fingerprint() const;

 private:
  std::vector<Node> nodes_;
  std::map<std::string, int, std::less<>> counters_;
};

enum class ScopeClass : std::uint8_t {
  kProgram,
  kContractMember,
  kFunctionBody,
  kModifierBody,
  kBlock,
  kLoopBody,
  kIfBranch,
};

std::string_view ScopeClassName(ScopeClass c);

// What a pending declaration is, for host-scope filtering.
enum class DeclCategory : std::uint8_t {
  kVariable,
  kStateOnly,  // members that must live in a contract
  kContract,
};

struct Scope {
  ScopeId id = kNoScope;
  ScopeClass cls = ScopeClass::kProgram;
  ScopeId parent = kNoScope;
  NodeId owner = kNoNode;  // contract, function, modifier or statement
  std::vector<NodeId> decls;
};

class Context {
 public:
  Context();

  ScopeId root() const { return 0; }
  ScopeId Open(ScopeClass cls, ScopeId parent, NodeId owner);
  const Scope& at(ScopeId s) const { return scopes_.at(s); }
  std::size_t size() const { return scopes_.size(); }

  void PushDecl(NodeId decl, ScopeId s);
  // Declarations visible from s, innermost scope first and, inside a
  // scope, most recent first.
  std::vector<NodeId> Query(ScopeId s) const;
  // s and its ancestors that can host a declaration of the category.
  std::vector<ScopeId> FindVisibleScopes(
      ScopeId s, DeclCategory category = DeclCategory::kVariable) const;
  // Nearest enclosing scope of a class, or kNoScope.
  ScopeId Enclosing(ScopeId s, ScopeClass cls) const;
  std::optional<ScopeId> ScopeOf(NodeId decl) const;

 private:
  std::vector<Scope> scopes_;
  std::map<NodeId, ScopeId> decl_scope_;
};

// True when every identifier refers to a declaration visible from it.
bool IdentifiersResolve(const Template& t, const Context& ctx);

}  // namespace qualsmith

#endif  // QUALSMITH_TEMPLATE_H_
