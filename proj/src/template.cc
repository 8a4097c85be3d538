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

#include <algorithm>
#include <array>
#include <stdexcept>

#include "qualsmith/hash.h"

namespace qualsmith {

namespace {

constexpr std::array<std::string_view, 27> kNodeKindNames = {
    "program", "contract", "function", "modifier",    "event",
    "error",   "struct",   "var_decl", "expr_stmt",   "var_decl_stmt",
    "if",      "for",      "while",    "do_while",    "return",
    "emit",    "revert",   "literal",  "identifier",  "assign",
    "binary",  "unary",    "new",      "conditional", "call",
    "index",   "member"};

constexpr std::array<std::string_view, 7> kScopeClassNames = {
    "program", "contract-member", "function-body", "modifier-body",
    "block",   "loop-body",       "if-branch"};

nlohmann::json Ph(PlaceholderId id) {
  return id == kNoPlaceholder ? nlohmann::json(nullptr) : nlohmann::json(id);
}

PlaceholderId ReadPh(const nlohmann::json& j) {
  return j.is_null() ? kNoPlaceholder : j.get<PlaceholderId>();
}

nlohmann::json NodeRef(NodeId id) {
  return id == kNoNode ? nlohmann::json(nullptr) : nlohmann::json(id);
}

NodeId ReadNode(const nlohmann::json& j) {
  return j.is_null() ? kNoNode : j.get<NodeId>();
}

}  // namespace

std::string_view NodeKindName(NodeKind k) {
  return kNodeKindNames[static_cast<std::size_t>(k)];
}

std::optional<NodeKind> ParseNodeKind(std::string_view s) {
  for (std::size_t i = 0; i < kNodeKindNames.size(); ++i) {
    if (kNodeKindNames[i] == s) return static_cast<NodeKind>(i);
  }
  return std::nullopt;
}

bool IsExpression(NodeKind k) { return k >= NodeKind::kLiteral; }

bool IsStatement(NodeKind k) {
  return k >= NodeKind::kExprStmt && k <= NodeKind::kRevert;
}

Placement PlacementOf(VarSite site) {
  switch (site) {
    case VarSite::kState:
      return Placement::kContractMember;
    case VarSite::kLocal:
      return Placement::kFunctionBody;
    case VarSite::kParameter:
      return Placement::kFunctionParameter;
    case VarSite::kReturn:
      return Placement::kFunctionReturn;
    case VarSite::kModifierParameter:
      return Placement::kModifierParameter;
    case VarSite::kEventParameter:
      return Placement::kEventParameter;
    case VarSite::kErrorParameter:
      return Placement::kErrorParameter;
    case VarSite::kStructMember:
      return Placement::kStructMember;
  }
  return Placement::kExpression;
}

std::string_view ScopeClassName(ScopeClass c) {
  return kScopeClassNames[static_cast<std::size_t>(c)];
}

Template::Template() {
  Node root;
  root.kind = NodeKind::kProgram;
  root.scope = 0;
  nodes_.push_back(std::move(root));
}

NodeId Template::Add(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size() - 1);
}

Node& Template::at(NodeId id) {
  if (id >= nodes_.size()) throw std::out_of_range("node id out of range");
  return nodes_[id];
}

const Node& Template::at(NodeId id) const {
  if (id >= nodes_.size()) throw std::out_of_range("node id out of range");
  return nodes_[id];
}

std::string Template::FreshName(std::string_view prefix) {
  auto it = counters_.find(prefix);
  if (it == counters_.end())
    it = counters_.emplace(std::string(prefix), 0).first;
  return std::string(prefix) + std::to_string(it->second++);
}

std::vector<PlaceholderId> Template::Placeholders() const {
  std::vector<PlaceholderId> out;
  for (const Node& n : nodes_) {
    for (PlaceholderId p : {n.slots.type, n.slots.storage, n.slots.visibility,
                            n.slots.mutability, n.slots.key, n.slots.value}) {
      if (p != kNoPlaceholder) out.push_back(p);
    }
  }
  return out;
}

nlohmann::json Template::ToJson() const {
  using nlohmann::json;
  json nodes = json::array();
  for (const Node& n : nodes_) {
    json j;
    j["kind"] = std::string(NodeKindName(n.kind));
    j["parent"] = NodeRef(n.parent);
    j["scope"] = n.scope == kNoScope ? json(nullptr) : json(n.scope);
    j["name"] = n.name;
    j["op"] = n.op;
    j["lit"] = {static_cast<int>(n.literal.kind), n.literal.negative,
                n.literal.magnitude, n.literal.text};
    j["site"] = static_cast<int>(n.site);
    j["call"] = static_cast<int>(n.call);
    j["ref"] = NodeRef(n.ref);
    j["receiver"] = NodeRef(n.receiver);
    j["kids"] = n.kids;
    j["rets"] = n.rets;
    j["body"] = n.body;
    j["alt"] = n.alt;
    j["mods"] = n.mods;
    j["slots"] = {Ph(n.slots.type),       Ph(n.slots.storage),
                  Ph(n.slots.visibility), Ph(n.slots.mutability),
                  Ph(n.slots.key),        Ph(n.slots.value)};
    nodes.push_back(std::move(j));
  }
  json out;
  out["nodes"] = std::move(nodes);
  out["counters"] = counters_;
  return out;
}

Template Template::FromJson(const nlohmann::json& j) {
  Template t;
  t.nodes_.clear();
  for (const auto& jn : j.at("nodes")) {
    Node n;
    auto kind = ParseNodeKind(jn.at("kind").get<std::string>());
    if (!kind) throw std::invalid_argument("unknown node kind");
    n.kind = *kind;
    n.parent = ReadNode(jn.at("parent"));
    n.scope =
        jn.at("scope").is_null() ? kNoScope : jn.at("scope").get<ScopeId>();
    n.name = jn.at("name").get<std::string>();
    n.op = jn.at("op").get<std::string>();
    const auto& lit = jn.at("lit");
    n.literal.kind = static_cast<LiteralKind>(lit.at(0).get<int>());
    n.literal.negative = lit.at(1).get<bool>();
    n.literal.magnitude = lit.at(2).get<std::uint64_t>();
    n.literal.text = lit.at(3).get<std::string>();
    n.site = static_cast<VarSite>(jn.at("site").get<int>());
    n.call = static_cast<CallKind>(jn.at("call").get<int>());
    n.ref = ReadNode(jn.at("ref"));
    n.receiver = ReadNode(jn.at("receiver"));
    n.kids = jn.at("kids").get<std::vector<NodeId>>();
    n.rets = jn.at("rets").get<std::vector<NodeId>>();
    n.body = jn.at("body").get<std::vector<NodeId>>();
    n.alt = jn.at("alt").get<std::vector<NodeId>>();
    n.mods = jn.at("mods").get<std::vector<NodeId>>();
    const auto& s = jn.at("slots");
    n.slots = {ReadPh(s.at(0)), ReadPh(s.at(1)), ReadPh(s.at(2)),
               ReadPh(s.at(3)), ReadPh(s.at(4)), ReadPh(s.at(5))};
    t.nodes_.push_back(std::move(n));
  }
  if (t.nodes_.empty() || t.nodes_[0].kind != NodeKind::kProgram) {
    throw std::invalid_argument("template without a program root");
  }
  for (const auto& [k, v] : j.at("counters").items()) {
    t.counters_[k] = v.get<int>();
  }
  return t;
}

std::string Template::Fingerprint() const {
  return Sha256Hex(ToJson().dump()).substr(0, 16);
}

Context::Context() {
  scopes_.push_back({0, ScopeClass::kProgram, kNoScope, 0, {}});
}

ScopeId Context::Open(ScopeClass cls, ScopeId parent, NodeId owner) {
  if (parent >= scopes_.size()) throw std::out_of_range("unknown scope");
  auto id = static_cast<ScopeId>(scopes_.size());
  scopes_.push_back({id, cls, parent, owner, {}});
  return id;
}

void Context::PushDecl(NodeId decl, ScopeId s) {
  if (s >= scopes_.size()) throw std::out_of_range("unknown scope");
  if (decl_scope_.count(decl)) {
    throw std::invalid_argument("declaration pushed twice");
  }
  scopes_[s].decls.push_back(decl);
  decl_scope_[decl] = s;
}

std::vector<NodeId> Context::Query(ScopeId s) const {
  std::vector<NodeId> out;
  for (ScopeId cur = s; cur != kNoScope; cur = scopes_.at(cur).parent) {
    const auto& d = scopes_[cur].decls;
    out.insert(out.end(), d.rbegin(), d.rend());
  }
  return out;
}

std::vector<ScopeId> Context::FindVisibleScopes(ScopeId s,
                                                DeclCategory category) const {
  std::vector<ScopeId> out;
  for (ScopeId cur = s; cur != kNoScope; cur = scopes_.at(cur).parent) {
    ScopeClass c = scopes_[cur].cls;
    bool ok = false;
    switch (category) {
      case DeclCategory::kVariable:
        ok = c != ScopeClass::kProgram;
        break;
      case DeclCategory::kStateOnly:
        ok = c == ScopeClass::kContractMember;
        break;
      case DeclCategory::kContract:
        ok = c == ScopeClass::kProgram;
        break;
    }
    if (ok) out.push_back(cur);
  }
  return out;
}

ScopeId Context::Enclosing(ScopeId s, ScopeClass cls) const {
  for (ScopeId cur = s; cur != kNoScope; cur = scopes_.at(cur).parent) {
    if (scopes_[cur].cls == cls) return cur;
  }
  return kNoScope;
}

std::optional<ScopeId> Context::ScopeOf(NodeId decl) const {
  auto it = decl_scope_.find(decl);
  if (it == decl_scope_.end()) return std::nullopt;
  return it->second;
}

bool IdentifiersResolve(const Template& t, const Context& ctx) {
  for (const Node& n : t.nodes()) {
    if (n.kind != NodeKind::kIdentifier) continue;
    if (n.ref == kNoNode || n.scope == kNoScope) return false;
    auto visible = ctx.Query(n.scope);
    if (std::count(visible.begin(), visible.end(), n.ref) != 1) return false;
  }
  return true;
}

}  // namespace qualsmith
