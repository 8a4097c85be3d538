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

#include <algorithm>
#include <map>
#include <stdexcept>

namespace qualsmith {

namespace {

constexpr std::array<std::string_view, kProductionCount> kProductionNames = {
    "literal",
    "identifier",
    "assign",
    "compare",
    "arith",
    "shift",
    "logic",
    "not",
    "negate",
    "bitnot",
    "incdec",
    "new",
    "conditional",
    "call",
    "external_call",
    "getter",
    "struct_constructor",
    "index",
    "mapping_index",
    "member"};

constexpr std::array<std::string_view, kStatementCount> kStatementNames = {
    "expr",     "var_decl", "if",     "for",   "while",
    "do_while", "emit",     "revert", "return"};

constexpr const char* kAddressLiteral =
    "0x5B38Da6a701c568545dCfcB03FcB875f56beddC4";

using SL = StorageLocation;
using Vis = Visibility;
using Mut = Mutability;
constexpr QualifierKind kT = QualifierKind::kDataType;
constexpr QualifierKind kS = QualifierKind::kStorageLocation;
constexpr QualifierKind kV = QualifierKind::kVisibility;
constexpr QualifierKind kM = QualifierKind::kMutability;

struct Goal {
  PlaceholderId t = kNoPlaceholder;
  PlaceholderId s = kNoPlaceholder;
  bool lvalue = false;
  bool no_literal = false;
  bool no_const = false;
  bool void_ok = false;
  bool array = false;
  int literal_lo = 1;
  int literal_hi = 127;
};

struct Tentative {
  std::vector<Constraint> rel;
  std::vector<CodomainRestriction> res;
};

enum class Effect { kNone, kRead, kWrite };

struct ContractInfo {
  NodeId node = kNoNode;
  ScopeId scope = kNoScope;
  int index = 0;
  std::vector<NodeId> functions;
  std::vector<NodeId> events;
  std::vector<NodeId> errors;
  std::vector<NodeId> modifiers;
};

// Everything a statement rollback restores.
struct State {
  explicit State(std::shared_ptr<const QualifierUniverse> u)
      : cs(std::move(u)) {}
  Template tpl;
  Context ctx;
  ConstraintSet cs;
  std::vector<ContractInfo> contracts;
  std::vector<NodeId> structs;       // by ordinal
  std::vector<int> struct_contract;  // ordinal -> contract index
  std::vector<NodeId> pending;       // functions and modifiers to fill
  std::map<ScopeId, std::pair<NodeId, int>> lists;  // scope -> statement list
  std::map<ScopeId, std::size_t> hoisted;
  int expressions = 0;
  std::uint64_t version = 0;
};

struct Frame {
  int contract = 0;
  NodeId owner = kNoNode;
  PlaceholderId mut = kNoPlaceholder;
  bool modifier = false;
};

struct DeclShape {
  enum Form { kScalar, kArray, kMapping } form = kScalar;
  Domain t;     // scalar codomain or the single array shape
  Domain base;  // array element types
  Domain key;
  Domain value;
};

class Engine {
 public:
  Engine(const GeneratorConfig& cfg, Chooser& chooser)
      : cfg_(cfg),
        chooser_(chooser),
        rng_(cfg.seed),
        u_(std::make_shared<QualifierUniverse>(cfg.Universe())),
        st_(u_) {
    const QualifierUniverse& u = *u_;
    ints_ = u.Integers();
    uints_ = u.TypesOf(TypeFamily::kUInt);
    signed_ = u.TypesOf(TypeFamily::kInt);
    bool_ = u.TypesOf(TypeFamily::kBool);
    Domain addr = u.TypesOf(TypeFamily::kAddress) |
                  u.TypesOf(TypeFamily::kAddressPayable);
    elem_ = ints_ | bool_;
    if (cfg.addresses) elem_ |= addr;
    scalar_ = elem_;
    if (cfg.strings) scalar_ |= u.TypesOf(TypeFamily::kString);
    if (cfg.structs > 0) scalar_ |= u.TypesOf(TypeFamily::kStruct);
    if (cfg.contract_values) scalar_ |= u.TypesOf(TypeFamily::kContract);
    value_ = u.ValueTypes();
    ref_ = u.ReferenceTypes();
    shapes_ = u.Arrays();
    mapping_ = u.TypesOf(TypeFamily::kMapping);
    storage_expr_ = CodomainOf(u, kS, Placement::kExpression);
    // The parser takes no `address payable` key.
    key_ = elem_ & ~u.TypesOf(TypeFamily::kAddressPayable);
  }

  GeneratedTemplate Run();
  GeneratedTemplate RunExpressionStatement();

 private:
  // Constraint-set mutation, counted so that failures can tell whether
  // they left traces.
  PlaceholderId NewPh(QualifierKind k, Level level, NodeId owner,
                      const Domain& d) {
    ++st_.version;
    return st_.cs.AddPlaceholder(k, level, owner, d);
  }
  bool Restrict(PlaceholderId p, const Domain& d) {
    if (p == kNoPlaceholder) return true;
    if (!st_.cs.RestrictCodomain({p, d})) return false;
    ++st_.version;
    return true;
  }
  void Relate(PlaceholderId a, Relation r, PlaceholderId b) {
    if (a == kNoPlaceholder || b == kNoPlaceholder) return;
    ++st_.version;
    st_.cs.PushRelation({a, r, b});
  }
  bool Check(const Tentative& t) const {
    return st_.cs.IsSolvableWith(t.rel, t.res);
  }
  bool Apply(const Tentative& t) {
    for (const auto& r : t.res) {
      if (!Restrict(r.target, r.codomain)) return false;
    }
    for (const auto& c : t.rel) Relate(c.lhs, c.rel, c.rhs);
    return st_.cs.IsSolvable();
  }
  const Domain& Cur(PlaceholderId p) const { return st_.cs.Current(p); }
  PlaceholderId BaseOf(PlaceholderId p) const { return st_.cs.Get(p).base; }

  NodeId AddNode(Node n) {
    ++st_.version;
    NodeId id = st_.tpl.Add(std::move(n));
    Node& node = st_.tpl.at(id);
    if (IsExpression(node.kind)) {
      ++st_.expressions;
    }
    for (PlaceholderId p :
         {node.slots.type, node.slots.storage, node.slots.visibility,
          node.slots.mutability, node.slots.key, node.slots.value}) {
      if (p != kNoPlaceholder) st_.cs.SetOwner(p, id);
    }
    if (node.slots.type != kNoPlaceholder) {
      PlaceholderId b = BaseOf(node.slots.type);
      if (b != kNoPlaceholder) st_.cs.SetOwner(b, id);
    }
    return id;
  }
  void Adopt(NodeId parent, const std::vector<NodeId>& kids) {
    for (NodeId k : kids) {
      if (k != kNoNode) st_.tpl.at(k).parent = parent;
    }
  }
  std::vector<NodeId>& List(NodeId owner, int which) {
    Node& n = st_.tpl.at(owner);
    return which == 0 ? n.body : n.alt;
  }

  Goal ScalarGoal(const Domain& t) {
    Goal g;
    g.t = NewPh(kT, Level::kExpression, kNoNode, t);
    if ((t & ref_).any()) {
      g.s = NewPh(kS, Level::kExpression, kNoNode, storage_expr_);
    }
    return g;
  }
  Goal ArrayGoal(const Domain& shapes, const Domain& base) {
    Goal g;
    g.array = true;
    g.t = NewPh(kT, Level::kExpression, kNoNode, shapes);
    st_.cs.AddBase(g.t, base);
    g.s = NewPh(kS, Level::kExpression, kNoNode, storage_expr_);
    return g;
  }
  // Goal for a value flowing into a declaration: T <: decl, S <: decl.
  Goal FlowGoal(NodeId decl) {
    const Node& d = st_.tpl.at(decl);
    PlaceholderId td = d.slots.type;
    PlaceholderId sd = d.slots.storage;
    Goal g;
    if ((Cur(td) & shapes_).any()) {
      PlaceholderId b = BaseOf(td);
      g = ArrayGoal(Cur(td), b == kNoPlaceholder ? elem_ : Cur(b));
    } else {
      g = ScalarGoal(scalar_);
    }
    Relate(g.t, Relation::kSub, td);
    if (g.s != kNoPlaceholder && sd != kNoPlaceholder) {
      Relate(g.s, Relation::kSub, sd);
    }
    return g;
  }
  Goal ArgGoal(NodeId param, bool relate_storage) {
    const Node& d = st_.tpl.at(param);
    PlaceholderId td = d.slots.type;
    Goal g;
    if ((Cur(td) & shapes_).any()) {
      PlaceholderId b = BaseOf(td);
      g = ArrayGoal(Cur(td), b == kNoPlaceholder ? elem_ : Cur(b));
    } else {
      g = ScalarGoal(scalar_);
    }
    Relate(g.t, Relation::kSub, td);
    if (relate_storage) Relate(g.s, Relation::kSub, d.slots.storage);
    return g;
  }

  Domain Homogenize(const Domain& d) {
    Domain v = d & value_, r = d & ref_;
    if (v.none()) return r;
    if (r.none()) return v;
    return rng_.Chance(0.5) ? v : r;
  }
  DeclShape RandomShape(Placement p, bool arrays, bool mappings) {
    DeclShape s;
    Domain site = CodomainOf(*u_, kT, p);
    if (mappings && mapping_.any() && (site & mapping_).any() &&
        rng_.Chance(cfg_.mapping_probability)) {
      s.form = DeclShape::kMapping;
      s.t = mapping_;
      s.key = key_;
      s.value = elem_;
      return s;
    }
    Domain shapes = site & shapes_;
    if (arrays && shapes.any() && rng_.Chance(cfg_.array_probability)) {
      s.form = DeclShape::kArray;
      s.t = Single(shapes);
      s.base = elem_;
      return s;
    }
    s.t = Homogenize(site & scalar_);
    return s;
  }
  Domain Single(const Domain& d) {
    std::vector<std::size_t> bits;
    for (std::size_t i = d._Find_first(); i < d.size(); i = d._Find_next(i)) {
      bits.push_back(i);
    }
    Domain out;
    out.set(rng_.Pick(bits));
    return out;
  }

  NodeId NewVarDecl(VarSite site, ScopeId scope, const DeclShape& shape,
                    bool hoisted);
  NodeId NewFunction(int ci, std::optional<Domain> ret, bool has_ret);
  void BuildSkeleton();
  void FillBodies();
  void FillBody(NodeId owner);

  void Block(ScopeId scope, NodeId owner, int which, int depth, int count);
  bool StatementWithRetry(ScopeId scope, NodeId owner, int which, int depth,
                          std::optional<StatementKind> forced);
  std::optional<NodeId> Statement(StatementKind k, ScopeId scope, int depth);
  std::vector<StatementKind> ViableStatements(int depth) const;

  std::optional<NodeId> Expr(ScopeId s, const Goal& g, int depth);
  std::vector<Production> Viable(ScopeId s, const Goal& g, int depth) const;
  std::optional<NodeId> ApplyProduction(Production p, ScopeId s, const Goal& g,
                                        int depth);
  std::optional<NodeId> Literal(ScopeId s, const Goal& g);
  std::optional<NodeId> Identifier(ScopeId s, const Goal& g, Effect write);
  std::optional<Tentative> Bind(const Goal& g, NodeId decl, Effect effect);
  std::optional<NodeId> FreshVariable(ScopeId s, const Goal& g, Effect effect);
  std::optional<NodeId> Assign(ScopeId s, const Goal& g, int depth);
  std::optional<NodeId> Binary(Production p, ScopeId s, const Goal& g,
                               int depth);
  std::optional<NodeId> Unary(Production p, ScopeId s, const Goal& g,
                              int depth);
  std::optional<NodeId> New(ScopeId s, const Goal& g);
  std::optional<NodeId> Conditional(ScopeId s, const Goal& g, int depth);
  std::optional<NodeId> Call(ScopeId s, const Goal& g, int depth);
  std::optional<NodeId> ExternalCall(ScopeId s, const Goal& g, int depth);
  std::optional<NodeId> Getter(ScopeId s, const Goal& g);
  std::optional<NodeId> StructConstructor(ScopeId s, const Goal& g, int depth);
  std::optional<NodeId> Index(ScopeId s, const Goal& g, int depth);
  std::optional<NodeId> MappingIndex(ScopeId s, const Goal& g, int depth);
  std::optional<NodeId> Member(ScopeId s, const Goal& g, int depth);
  std::optional<NodeId> Receiver(ScopeId s, int contract);
  bool Arguments(ScopeId s, const std::vector<NodeId>& params, int depth,
                 bool relate_storage, std::vector<NodeId>* out);

  void EffectRestriction(Effect e,
                         std::vector<CodomainRestriction>* res) const {
    if (frame_.mut == kNoPlaceholder || e == Effect::kNone) return;
    res->push_back({frame_.mut, QualifierUniverse::MutabilityAtLeast(
                                    e == Effect::kRead ? 1 : 2)});
  }
  bool IsConst(NodeId n) const {
    const Node& x = st_.tpl.at(n);
    if (x.kind == NodeKind::kLiteral) return true;
    if (x.kind == NodeKind::kUnary && x.op == "-") return IsConst(x.kids[0]);
    return false;
  }
  bool Exhausted() const { return st_.expressions >= cfg_.max_expressions; }
  GeneratedTemplate Finish();

  const GeneratorConfig& cfg_;
  Chooser& chooser_;
  Rng rng_;
  std::shared_ptr<QualifierUniverse> u_;
  State st_;
  Frame frame_;
  GenerationStats stats_;
  Domain ints_, uints_, signed_, bool_, elem_, scalar_, value_, ref_, shapes_,
      mapping_, storage_expr_, key_;
};

NodeId Engine::NewVarDecl(VarSite site, ScopeId scope, const DeclShape& shape,
                          bool hoisted) {
  Placement p = PlacementOf(site);
  Node n;
  n.kind = NodeKind::kVarDecl;
  n.site = site;
  n.scope = scope;
  n.name = st_.tpl.FreshName("v");
  n.slots.type = NewPh(kT, Level::kDeclaration, kNoNode, shape.t);
  if (shape.form == DeclShape::kArray) {
    st_.cs.AddBase(n.slots.type, shape.base);
  } else if (shape.form == DeclShape::kMapping) {
    n.slots.key = NewPh(kT, Level::kDeclaration, kNoNode, shape.key);
    n.slots.value = NewPh(kT, Level::kDeclaration, kNoNode, shape.value);
  }
  Domain s = CodomainOf(*u_, kS, p);
  if (hoisted) s = QualifierUniverse::Set({SL::kMemory});
  if (s.any()) n.slots.storage = NewPh(kS, Level::kDeclaration, kNoNode, s);
  Domain v = CodomainOf(*u_, kV, p);
  if (v.any()) n.slots.visibility = NewPh(kV, Level::kDeclaration, kNoNode, v);
  return AddNode(std::move(n));
}

NodeId Engine::NewFunction(int ci, std::optional<Domain> ret, bool has_ret) {
  ContractInfo& c = st_.contracts[ci];
  Node fn;
  fn.kind = NodeKind::kFunction;
  fn.scope = c.scope;
  fn.parent = c.node;
  fn.name = st_.tpl.FreshName("f");
  bool external_facing = rng_.Chance(0.5);
  fn.slots.visibility = NewPh(
      kV, Level::kDeclaration, kNoNode,
      external_facing ? QualifierUniverse::Set({Vis::kPublic, Vis::kExternal})
                      : u_->All(kV));
  Domain m = u_->All(kM);
  if (!external_facing) m.reset(static_cast<std::size_t>(Mut::kPayable));
  bool use_modifier =
      !c.modifiers.empty() && rng_.Chance(cfg_.modifier_use_probability);
  if (use_modifier) m &= QualifierUniverse::MutabilityAtLeast(2);
  fn.slots.mutability = NewPh(kM, Level::kDeclaration, kNoNode, m);
  if (use_modifier) fn.mods.push_back(rng_.Pick(c.modifiers));
  NodeId f = AddNode(std::move(fn));
  ScopeId body = st_.ctx.Open(ScopeClass::kFunctionBody, c.scope, f);
  st_.lists[body] = {f, 0};
  int nparams = rng_.Range(0, cfg_.max_parameters);
  std::vector<NodeId> params;
  for (int i = 0; i < nparams; ++i) {
    NodeId p = NewVarDecl(
        VarSite::kParameter, body,
        RandomShape(Placement::kFunctionParameter, true, false), false);
    st_.tpl.at(p).parent = f;
    st_.ctx.PushDecl(p, body);
    params.push_back(p);
  }
  std::vector<NodeId> rets;
  if (has_ret) {
    DeclShape shape =
        ret ? DeclShape{DeclShape::kScalar, *ret, {}, {}, {}}
            : RandomShape(Placement::kFunctionReturn, true, false);
    NodeId r = NewVarDecl(VarSite::kReturn, body, shape, false);
    st_.tpl.at(r).parent = f;
    rets.push_back(r);
  }
  Node& fnode = st_.tpl.at(f);
  fnode.kids = params;
  fnode.rets = rets;
  st_.tpl.at(c.node).body.push_back(f);
  st_.ctx.PushDecl(f, c.scope);
  c.functions.push_back(f);
  st_.pending.push_back(f);
  return f;
}

void Engine::BuildSkeleton() {
  for (int i = 0; i < cfg_.contracts; ++i) {
    Node cn;
    cn.kind = NodeKind::kContract;
    cn.parent = st_.tpl.root();
    cn.scope = st_.ctx.root();
    cn.name = st_.tpl.FreshName("C");
    NodeId c = AddNode(std::move(cn));
    st_.tpl.at(st_.tpl.root()).body.push_back(c);
    st_.ctx.PushDecl(c, st_.ctx.root());
    ContractInfo info;
    info.node = c;
    info.index = i;
    info.scope = st_.ctx.Open(ScopeClass::kContractMember, st_.ctx.root(), c);
    st_.lists[info.scope] = {c, 0};
    st_.contracts.push_back(info);
  }
  for (int i = 0; i < cfg_.contracts; ++i) {
    ContractInfo& c = st_.contracts[i];
    auto member_list = [&](NodeKind kind, std::string_view prefix, VarSite site,
                           int max_members, int min_members) {
      Node d;
      d.kind = kind;
      d.parent = c.node;
      d.scope = c.scope;
      d.name = st_.tpl.FreshName(prefix);
      NodeId id = AddNode(std::move(d));
      int n = rng_.Range(min_members, max_members);
      std::vector<NodeId> members;
      for (int k = 0; k < n; ++k) {
        NodeId m = NewVarDecl(
            site, c.scope, RandomShape(PlacementOf(site), false, false), false);
        st_.tpl.at(m).parent = id;
        members.push_back(m);
      }
      st_.tpl.at(id).kids = members;
      st_.tpl.at(c.node).body.push_back(id);
      st_.ctx.PushDecl(id, c.scope);
      return id;
    };
    for (int k = 0; k < cfg_.structs; ++k) {
      NodeId s = member_list(NodeKind::kStruct, "S", VarSite::kStructMember,
                             cfg_.max_struct_members, 1);
      st_.structs.push_back(s);
      st_.struct_contract.push_back(i);
    }
    for (int k = 0; k < cfg_.events; ++k) {
      c.events.push_back(member_list(NodeKind::kEvent, "E",
                                     VarSite::kEventParameter,
                                     cfg_.max_parameters, 0));
    }
    for (int k = 0; k < cfg_.errors; ++k) {
      c.errors.push_back(member_list(NodeKind::kError, "Err",
                                     VarSite::kErrorParameter,
                                     cfg_.max_parameters, 0));
    }
    for (int k = 0; k < cfg_.state_variables; ++k) {
      NodeId v = NewVarDecl(VarSite::kState, c.scope,
                            RandomShape(Placement::kContractMember, true, true),
                            false);
      st_.tpl.at(v).parent = c.node;
      st_.tpl.at(c.node).body.push_back(v);
      st_.ctx.PushDecl(v, c.scope);
    }
    for (int k = 0; k < cfg_.modifiers; ++k) {
      Node m;
      m.kind = NodeKind::kModifier;
      m.parent = c.node;
      m.scope = c.scope;
      m.name = st_.tpl.FreshName("m");
      NodeId id = AddNode(std::move(m));
      ScopeId body = st_.ctx.Open(ScopeClass::kModifierBody, c.scope, id);
      st_.lists[body] = {id, 0};
      st_.tpl.at(c.node).body.push_back(id);
      st_.ctx.PushDecl(id, c.scope);
      c.modifiers.push_back(id);
      st_.pending.push_back(id);
    }
  }
  // Functions come last so that modifiers exist when they are attached.
  for (int i = 0; i < cfg_.contracts; ++i) {
    for (int k = 0; k < cfg_.functions_per_contract; ++k) {
      NewFunction(i, std::nullopt, rng_.Chance(cfg_.return_probability));
    }
  }
}

void Engine::FillBodies() {
  // Bodies may create functions; they join the queue.
  for (std::size_t i = 0; i < st_.pending.size(); ++i) {
    FillBody(st_.pending[i]);
  }
}

void Engine::FillBody(NodeId owner) {
  const Node& n = st_.tpl.at(owner);
  frame_ = Frame{};
  for (const auto& c : st_.contracts) {
    if (c.node == n.parent) frame_.contract = c.index;
  }
  frame_.owner = owner;
  frame_.modifier = n.kind == NodeKind::kModifier;
  frame_.mut = n.slots.mutability;
  ScopeId body = kNoScope;
  for (const auto& [scope, list] : st_.lists) {
    if (list.first == owner && list.second == 0 &&
        st_.ctx.at(scope).cls != ScopeClass::kContractMember) {
      body = scope;
    }
  }
  if (body == kNoScope) throw InvariantViolation("body scope missing");
  int count = rng_.Range(1, std::max(1, cfg_.statements_per_body));
  Block(body, owner, 0, 0, count);
  if (!st_.tpl.at(owner).rets.empty()) {
    if (cfg_.max_expressions == 0 ||
        !StatementWithRetry(body, owner, 0, 0, StatementKind::kReturn)) {
      // Ends the function without falling off its end.
      Node r;
      r.kind = NodeKind::kRevert;
      r.scope = body;
      r.parent = owner;
      NodeId id = AddNode(std::move(r));
      List(owner, 0).push_back(id);
    }
  }
}

void Engine::Block(ScopeId scope, NodeId owner, int which, int depth,
                   int count) {
  for (int i = 0; i < count && !Exhausted(); ++i) {
    StatementWithRetry(scope, owner, which, depth, std::nullopt);
  }
}

std::vector<StatementKind> Engine::ViableStatements(int depth) const {
  std::vector<StatementKind> out = {StatementKind::kExpr,
                                    StatementKind::kVarDecl};
  if (depth < cfg_.max_statement_depth) {
    out.insert(out.end(), {StatementKind::kIf, StatementKind::kFor,
                           StatementKind::kWhile, StatementKind::kDoWhile});
  }
  const ContractInfo& c = st_.contracts[frame_.contract];
  if (!c.events.empty()) out.push_back(StatementKind::kEmit);
  if (!c.errors.empty() && depth > 0) out.push_back(StatementKind::kRevert);
  if (!frame_.modifier && depth > 0 && !st_.tpl.at(frame_.owner).rets.empty()) {
    out.push_back(StatementKind::kReturn);
  }
  return out;
}

bool Engine::StatementWithRetry(ScopeId scope, NodeId owner, int which,
                                int depth,
                                std::optional<StatementKind> forced) {
  for (int attempt = 0; attempt < 3; ++attempt) {
    StatementKind k;
    if (forced) {
      k = *forced;
    } else {
      std::vector<StatementKind> viable = ViableStatements(depth);
      std::vector<double> w;
      for (StatementKind s : viable) {
        w.push_back(cfg_.statement_weights[static_cast<std::size_t>(s)]);
      }
      double total = 0;
      for (double x : w) total += x;
      if (total <= 0) return false;
      k = viable[rng_.Weighted(w)];
    }
    State snapshot = st_;
    std::optional<NodeId> id = Statement(k, scope, depth);
    if (id && st_.cs.IsSolvable() && st_.expressions <= cfg_.max_expressions) {
      st_.tpl.at(*id).parent = owner;
      List(owner, which).push_back(*id);
      ++stats_.statements;
      return true;
    }
    st_ = std::move(snapshot);
    ++stats_.rollbacks;
  }
  return false;
}

std::optional<NodeId> Engine::Statement(StatementKind k, ScopeId scope,
                                        int depth) {
  Node n;
  n.scope = scope;
  auto finish = [&](Node node) -> NodeId {
    std::vector<NodeId> kids = node.kids;
    NodeId id = AddNode(std::move(node));
    Adopt(id, kids);
    return id;
  };
  switch (k) {
    case StatementKind::kExpr: {
      Goal g = ScalarGoal(scalar_);
      g.void_ok = true;
      g.no_literal = true;
      auto e = Expr(scope, g, 0);
      if (!e) return std::nullopt;
      n.kind = NodeKind::kExprStmt;
      n.kids = {*e};
      return finish(std::move(n));
    }
    case StatementKind::kVarDecl: {
      NodeId d =
          NewVarDecl(VarSite::kLocal, scope,
                     RandomShape(Placement::kFunctionBody, true, false), false);
      Goal g = FlowGoal(d);
      auto e = Expr(scope, g, 0);
      if (!e) return std::nullopt;
      n.kind = NodeKind::kVarDeclStmt;
      n.kids = {d, *e};
      NodeId id = finish(std::move(n));
      st_.ctx.PushDecl(d, scope);
      return id;
    }
    case StatementKind::kIf:
    case StatementKind::kWhile:
    case StatementKind::kDoWhile: {
      n.kind = k == StatementKind::kIf      ? NodeKind::kIf
               : k == StatementKind::kWhile ? NodeKind::kWhile
                                            : NodeKind::kDoWhile;
      Goal g = ScalarGoal(bool_);
      auto c = Expr(scope, g, 0);
      if (!c) return std::nullopt;
      n.kids = {*c};
      NodeId id = finish(std::move(n));
      ScopeClass cls = k == StatementKind::kIf ? ScopeClass::kIfBranch
                                               : ScopeClass::kLoopBody;
      ScopeId then_scope = st_.ctx.Open(cls, scope, id);
      st_.lists[then_scope] = {id, 0};
      Block(then_scope, id, 0, depth + 1, rng_.Range(1, 2));
      if (k == StatementKind::kIf && rng_.Chance(0.4)) {
        ScopeId else_scope = st_.ctx.Open(cls, scope, id);
        st_.lists[else_scope] = {id, 1};
        Block(else_scope, id, 1, depth + 1, rng_.Range(1, 2));
      }
      return id;
    }
    case StatementKind::kFor: {
      n.kind = NodeKind::kFor;
      Goal gi = ScalarGoal(scalar_);
      gi.no_literal = true;
      gi.void_ok = true;
      auto init = Expr(scope, gi, 1);
      if (!init) return std::nullopt;
      Goal gc = ScalarGoal(bool_);
      auto cond = Expr(scope, gc, 1);
      if (!cond) return std::nullopt;
      Goal gs = ScalarGoal(scalar_);
      gs.no_literal = true;
      gs.void_ok = true;
      auto step = Expr(scope, gs, 1);
      if (!step) return std::nullopt;
      n.kids = {*init, *cond, *step};
      NodeId id = finish(std::move(n));
      ScopeId body = st_.ctx.Open(ScopeClass::kLoopBody, scope, id);
      st_.lists[body] = {id, 0};
      Block(body, id, 0, depth + 1, rng_.Range(1, 2));
      return id;
    }
    case StatementKind::kEmit:
    case StatementKind::kRevert: {
      const ContractInfo& c = st_.contracts[frame_.contract];
      const auto& pool = k == StatementKind::kEmit ? c.events : c.errors;
      if (pool.empty()) return std::nullopt;
      NodeId target = rng_.Pick(pool);
      if (k == StatementKind::kEmit) {
        Tentative t;
        EffectRestriction(Effect::kWrite, &t.res);
        if (!Check(t) || !Apply(t)) return std::nullopt;
      }
      std::vector<NodeId> args;
      if (!Arguments(scope, st_.tpl.at(target).kids, 1, false, &args)) {
        return std::nullopt;
      }
      n.kind = k == StatementKind::kEmit ? NodeKind::kEmit : NodeKind::kRevert;
      n.ref = target;
      n.kids = args;
      return finish(std::move(n));
    }
    case StatementKind::kReturn: {
      const Node& fn = st_.tpl.at(frame_.owner);
      if (fn.rets.empty()) return std::nullopt;
      Goal g = FlowGoal(fn.rets[0]);
      auto e = Expr(scope, g, 0);
      if (!e) return std::nullopt;
      n.kind = NodeKind::kReturn;
      n.kids = {*e};
      return finish(std::move(n));
    }
  }
  return std::nullopt;
}

std::vector<Production> Engine::Viable(ScopeId, const Goal& g,
                                       int depth) const {
  using P = Production;
  if (g.array || g.lvalue) return {P::kIdentifier};
  const Domain& d = Cur(g.t);
  auto has = [&](const Domain& x) { return (d & x).any(); };
  std::vector<P> out;
  bool literal_ok = !g.no_literal && !g.no_const;
  Domain lit_types = ints_ | bool_;
  if (cfg_.strings) lit_types |= u_->TypesOf(TypeFamily::kString);
  if (cfg_.addresses) lit_types |= u_->TypesOf(TypeFamily::kAddress);
  if (literal_ok && has(lit_types)) out.push_back(P::kLiteral);
  out.push_back(P::kIdentifier);
  if (depth >= cfg_.max_expression_depth || Exhausted()) return out;

  const ContractInfo& c = st_.contracts[frame_.contract];
  out.push_back(P::kAssign);
  if (has(bool_)) {
    out.insert(out.end(), {P::kCompare, P::kLogic, P::kNot});
  }
  if (has(ints_)) {
    out.insert(out.end(), {P::kArith, P::kShift, P::kBitNot, P::kIncDec});
  }
  if (has(signed_)) out.push_back(P::kNegate);
  for (int j = 0; j < frame_.contract; ++j) {
    auto ct = u_->ContractType(j);
    if (ct && d.test(*ct) && scalar_.test(*ct)) {
      out.push_back(P::kNew);
      break;
    }
  }
  out.push_back(P::kConditional);
  out.push_back(P::kCall);
  if (!st_.contracts.empty()) out.push_back(P::kExternalCall);
  if (has(value_)) out.push_back(P::kGetter);
  if (has(u_->TypesOf(TypeFamily::kStruct) & scalar_)) {
    out.push_back(P::kStructConstructor);
  }
  if (shapes_.any() && has(elem_)) out.push_back(P::kIndex);
  if (mapping_.any() && has(elem_)) out.push_back(P::kMappingIndex);
  if (!st_.structs.empty() && has(value_)) out.push_back(P::kMember);
  (void)c;
  return out;
}

std::optional<NodeId> Engine::Expr(ScopeId s, const Goal& g, int depth) {
  // The budget is hard: once spent, the enclosing statement rolls back.
  if (Exhausted()) return std::nullopt;
  std::vector<Production> viable = Viable(s, g, depth);
  while (!viable.empty()) {
    std::vector<double> w;
    for (Production p : viable) {
      w.push_back(cfg_.production_weights[static_cast<std::size_t>(p)]);
    }
    double total = 0;
    for (double x : w) total += x;
    if (total <= 0) return std::nullopt;
    Production p = chooser_.ChooseProduction(viable, w, rng_);
    auto it = std::find(viable.begin(), viable.end(), p);
    if (it == viable.end()) {
      throw std::invalid_argument("chooser picked a non-viable production " +
                                  std::string(ProductionName(p)));
    }
    std::uint64_t before = st_.version;
    std::optional<NodeId> r = ApplyProduction(p, s, g, depth);
    if (r) return r;
    if (st_.version != before) return std::nullopt;
    viable.erase(it);
  }
  return std::nullopt;
}

std::optional<NodeId> Engine::ApplyProduction(Production p, ScopeId s,
                                              const Goal& g, int depth) {
  using P = Production;
  switch (p) {
    case P::kLiteral:
      return Literal(s, g);
    case P::kIdentifier:
      return Identifier(s, g, g.lvalue ? Effect::kWrite : Effect::kRead);
    case P::kAssign:
      return Assign(s, g, depth);
    case P::kCompare:
    case P::kArith:
    case P::kShift:
    case P::kLogic:
      return Binary(p, s, g, depth);
    case P::kNot:
    case P::kNegate:
    case P::kBitNot:
    case P::kIncDec:
      return Unary(p, s, g, depth);
    case P::kNew:
      return New(s, g);
    case P::kConditional:
      return Conditional(s, g, depth);
    case P::kCall:
      return Call(s, g, depth);
    case P::kExternalCall:
      return ExternalCall(s, g, depth);
    case P::kGetter:
      return Getter(s, g);
    case P::kStructConstructor:
      return StructConstructor(s, g, depth);
    case P::kIndex:
      return Index(s, g, depth);
    case P::kMappingIndex:
      return MappingIndex(s, g, depth);
    case P::kMember:
      return Member(s, g, depth);
  }
  return std::nullopt;
}

std::optional<NodeId> Engine::Literal(ScopeId s, const Goal& g) {
  const Domain& d = Cur(g.t);
  std::vector<LiteralKind> kinds;
  if ((d & ints_).any()) kinds.push_back(LiteralKind::kInteger);
  if ((d & bool_).any()) kinds.push_back(LiteralKind::kBool);
  Domain str = u_->TypesOf(TypeFamily::kString);
  bool string_ok = cfg_.strings && (d & str).any() &&
                   (g.s == kNoPlaceholder ||
                    Cur(g.s).test(static_cast<std::size_t>(SL::kMemory)));
  if (string_ok) kinds.push_back(LiteralKind::kString);
  if (cfg_.addresses && (d & u_->TypesOf(TypeFamily::kAddress)).any()) {
    kinds.push_back(LiteralKind::kAddress);
  }
  if (kinds.empty()) return std::nullopt;
  LiteralValue lit =
      chooser_.ChooseLiteral(kinds, g.literal_lo, g.literal_hi, rng_);
  Tentative t;
  t.res.push_back({g.t, LiteralDomain(*u_, lit)});
  if (lit.kind == LiteralKind::kString && g.s != kNoPlaceholder) {
    t.res.push_back({g.s, QualifierUniverse::Set({SL::kMemory})});
  }
  if (!Check(t) || !Apply(t)) return std::nullopt;
  Node n;
  n.kind = NodeKind::kLiteral;
  n.scope = s;
  n.literal = lit;
  n.slots.type = g.t;
  n.slots.storage = g.s;
  return AddNode(std::move(n));
}

std::optional<Tentative> Engine::Bind(const Goal& g, NodeId decl,
                                      Effect effect) {
  const Node& d = st_.tpl.at(decl);
  PlaceholderId td = d.slots.type;
  if ((Cur(g.t) & Cur(td)).none()) return std::nullopt;
  Tentative t;
  t.res.push_back({td, st_.cs.Codomain(g.t)});
  t.rel.push_back({g.t, Relation::kSame, td});
  PlaceholderId bg = BaseOf(g.t), bd = BaseOf(td);
  if (bg != kNoPlaceholder && bd != kNoPlaceholder) {
    t.rel.push_back({bg, Relation::kSame, bd});
  }
  if (g.s != kNoPlaceholder && d.slots.storage != kNoPlaceholder) {
    if (cfg_.ident_storage == IdentStorageRule::kSame) {
      t.res.push_back({d.slots.storage, st_.cs.Codomain(g.s)});
      t.rel.push_back({g.s, Relation::kSame, d.slots.storage});
    } else {
      t.rel.push_back({g.s, Relation::kSub, d.slots.storage});
    }
  }
  if (d.site == VarSite::kState) EffectRestriction(effect, &t.res);
  return t;
}

std::optional<NodeId> Engine::Identifier(ScopeId s, const Goal& g,
                                         Effect effect) {
  std::vector<NodeId> candidates;
  for (NodeId d : st_.ctx.Query(s)) {
    const Node& n = st_.tpl.at(d);
    if (n.kind != NodeKind::kVarDecl) continue;
    if (n.site == VarSite::kReturn) continue;
    if (n.slots.key != kNoPlaceholder) continue;  // mappings
    candidates.push_back(d);
  }
  rng_.Shuffle(candidates);
  std::vector<NodeId> passing;
  std::vector<Tentative> plans;
  for (NodeId d : candidates) {
    auto t = Bind(g, d, effect);
    if (t && Check(*t)) {
      passing.push_back(d);
      plans.push_back(std::move(*t));
    }
  }
  std::size_t pick =
      passing.empty() ? 0 : chooser_.ChooseCandidate(passing, rng_);
  if (pick < passing.size()) {
    if (!Apply(plans[pick])) return std::nullopt;
    Node n;
    n.kind = NodeKind::kIdentifier;
    n.scope = s;
    n.ref = passing[pick];
    n.slots.type = g.t;
    n.slots.storage = g.s;
    return AddNode(std::move(n));
  }
  return FreshVariable(s, g, effect);
}

std::optional<NodeId> Engine::FreshVariable(ScopeId s, const Goal& g,
                                            Effect effect) {
  struct Option {
    ScopeId scope;
    DeclShape shape;
  };
  std::vector<Option> options;
  std::vector<ScopeId> scopes;
  const Domain goal_t = Cur(g.t);
  for (ScopeId sc : st_.ctx.FindVisibleScopes(s, DeclCategory::kVariable)) {
    bool state = st_.ctx.at(sc).cls == ScopeClass::kContractMember;
    Placement p = state ? Placement::kContractMember : Placement::kFunctionBody;
    Domain site_s = state ? QualifierUniverse::Set({SL::kStorageReference})
                          : QualifierUniverse::Set({SL::kMemory});
    std::vector<DeclShape> shapes;
    if (g.array) {
      Domain t = goal_t & CodomainOf(*u_, kT, p) & shapes_;
      if (t.none()) continue;
      DeclShape sh;
      sh.form = DeclShape::kArray;
      sh.t = Single(t);
      PlaceholderId b = BaseOf(g.t);
      sh.base = elem_ & (b == kNoPlaceholder ? elem_ : Cur(b));
      if (sh.base.none()) continue;
      shapes.push_back(sh);
    } else {
      Domain t = goal_t & CodomainOf(*u_, kT, p) & scalar_;
      Domain parts[2] = {t & value_, t & ref_};
      int first = rng_.Chance(0.5) ? 0 : 1;
      for (int k = 0; k < 2; ++k) {
        const Domain& part = parts[(first + k) % 2];
        if (part.any())
          shapes.push_back({DeclShape::kScalar, part, {}, {}, {}});
      }
    }
    for (const DeclShape& sh : shapes) {
      Tentative t;
      t.res.push_back({g.t, sh.t});
      if (g.array && BaseOf(g.t) != kNoPlaceholder) {
        t.res.push_back({BaseOf(g.t), sh.base});
      }
      if (g.s != kNoPlaceholder && (sh.t & ref_).any()) {
        t.res.push_back({g.s, site_s});
      }
      if (state) EffectRestriction(effect, &t.res);
      if (Check(t)) {
        options.push_back({sc, sh});
        scopes.push_back(sc);
        break;
      }
    }
  }
  if (options.empty()) return std::nullopt;
  std::size_t pick = chooser_.ChooseScope(scopes, rng_);
  if (pick >= options.size()) throw std::out_of_range("scope choice");
  const Option& opt = options[pick];
  bool state = st_.ctx.at(opt.scope).cls == ScopeClass::kContractMember;
  NodeId d = NewVarDecl(state ? VarSite::kState : VarSite::kLocal, opt.scope,
                        opt.shape, !state);
  if (state) {
    NodeId contract = st_.ctx.at(opt.scope).owner;
    st_.tpl.at(d).parent = contract;
    st_.tpl.at(contract).body.push_back(d);
  } else {
    // Hoisted to the top of its block without an initializer.
    Node stmt;
    stmt.kind = NodeKind::kVarDeclStmt;
    stmt.scope = opt.scope;
    stmt.kids = {d};
    auto [owner, which] = st_.lists.at(opt.scope);
    stmt.parent = owner;
    NodeId sid = AddNode(std::move(stmt));
    st_.tpl.at(d).parent = sid;
    std::size_t& pos = st_.hoisted[opt.scope];
    auto& list = List(owner, which);
    list.insert(list.begin() + static_cast<long>(std::min(pos, list.size())),
                sid);
    ++pos;
  }
  st_.ctx.PushDecl(d, opt.scope);
  ++stats_.fresh_declarations;
  chooser_.OnFreshDeclaration(d);
  auto t = Bind(g, d, effect);
  if (!t || !Apply(*t)) return std::nullopt;
  Node n;
  n.kind = NodeKind::kIdentifier;
  n.scope = s;
  n.ref = d;
  n.slots.type = g.t;
  n.slots.storage = g.s;
  return AddNode(std::move(n));
}

std::optional<NodeId> Engine::Assign(ScopeId s, const Goal& g, int depth) {
  std::vector<std::string> ops = {"="};
  if ((Cur(g.t) & ints_).any()) {
    ops.insert(ops.end(), {"+=", "-=", "*=", "|=", "&=", "^=", "<<=", ">>="});
  }
  std::string op = chooser_.ChooseOperator(Production::kAssign, ops, rng_);
  if (op != "=") {
    Tentative t;
    t.res.push_back({g.t, ints_});
    if (!Check(t) || !Apply(t)) return std::nullopt;
  }
  Goal lhs = ScalarGoal(op == "=" ? scalar_ : ints_);
  lhs.lvalue = true;
  Relate(lhs.t, Relation::kSame, g.t);
  Relate(lhs.s, Relation::kSame, g.s);
  auto l = Expr(s, lhs, depth + 1);
  if (!l) return std::nullopt;
  Goal rhs;
  if (op == "<<=" || op == ">>=") {
    rhs = ScalarGoal(uints_ & scalar_);
  } else {
    rhs = ScalarGoal(op == "=" ? scalar_ : ints_);
    Relate(rhs.t, Relation::kSub, g.t);
    Relate(rhs.s, Relation::kSub, g.s);
  }
  auto r = Expr(s, rhs, depth + 1);
  if (!r) return std::nullopt;
  Node n;
  n.kind = NodeKind::kAssign;
  n.scope = s;
  n.op = op;
  n.kids = {*l, *r};
  n.slots.type = g.t;
  n.slots.storage = g.s;
  NodeId id = AddNode(std::move(n));
  Adopt(id, {*l, *r});
  return id;
}

std::optional<NodeId> Engine::Binary(Production p, ScopeId s, const Goal& g,
                                     int depth) {
  std::vector<std::string> ops;
  Domain result, operand;
  switch (p) {
    case Production::kCompare:
      ops = {"<", ">", "<=", ">=", "==", "!="};
      result = bool_;
      operand = ints_;
      break;
    case Production::kArith:
      ops = {"+", "-", "*", "/", "%", "&", "|", "^"};
      result = ints_;
      operand = ints_;
      break;
    case Production::kShift:
      ops = {"<<", ">>"};
      result = ints_;
      operand = ints_;
      break;
    default:
      ops = {"&&", "||"};
      result = bool_;
      operand = bool_;
      break;
  }
  Tentative pre;
  pre.res.push_back({g.t, result});
  if (!Check(pre)) return std::nullopt;
  std::string op = chooser_.ChooseOperator(p, ops, rng_);
  if (!Apply(pre)) return std::nullopt;
  Goal a = ScalarGoal(operand);
  if (p == Production::kShift) {
    a.no_literal = true;
    a.no_const = true;
  }
  if (p != Production::kCompare) Relate(a.t, Relation::kSub, g.t);
  auto e1 = Expr(s, a, depth + 1);
  if (!e1) return std::nullopt;
  Goal b = ScalarGoal(p == Production::kShift ? (uints_ & scalar_) : operand);
  if (p == Production::kCompare) {
    Relate(b.t, Relation::kComparable, a.t);
  } else if (p != Production::kShift) {
    Relate(b.t, Relation::kSub, g.t);
  }
  if (p != Production::kShift && IsConst(*e1)) b.no_const = true;
  auto e2 = Expr(s, b, depth + 1);
  if (!e2) return std::nullopt;
  Node n;
  n.kind = NodeKind::kBinary;
  n.scope = s;
  n.op = op;
  n.kids = {*e1, *e2};
  n.slots.type = g.t;
  NodeId id = AddNode(std::move(n));
  Adopt(id, {*e1, *e2});
  return id;
}

std::optional<NodeId> Engine::Unary(Production p, ScopeId s, const Goal& g,
                                    int depth) {
  Domain result;
  std::vector<std::string> ops;
  switch (p) {
    case Production::kNot:
      result = bool_;
      ops = {"!"};
      break;
    case Production::kNegate:
      result = signed_;
      ops = {"-"};
      break;
    case Production::kBitNot:
      result = ints_;
      ops = {"~"};
      break;
    default:
      result = ints_;
      ops = {"++", "--"};
      break;
  }
  Tentative pre;
  pre.res.push_back({g.t, result});
  if (!Check(pre)) return std::nullopt;
  std::string op = chooser_.ChooseOperator(p, ops, rng_);
  if (!Apply(pre)) return std::nullopt;
  Goal a = ScalarGoal(result);
  if (p == Production::kIncDec) a.lvalue = true;
  if (p == Production::kBitNot) a.no_const = true;
  if (g.no_const && p == Production::kNegate) a.no_const = true;
  Relate(a.t, Relation::kSame, g.t);
  auto e = Expr(s, a, depth + 1);
  if (!e) return std::nullopt;
  Node n;
  n.kind = NodeKind::kUnary;
  n.scope = s;
  n.op = op;
  n.kids = {*e};
  n.slots.type = g.t;
  NodeId id = AddNode(std::move(n));
  Adopt(id, {*e});
  return id;
}

std::optional<NodeId> Engine::New(ScopeId s, const Goal& g) {
  std::vector<int> targets;
  for (int j = 0; j < frame_.contract; ++j) {
    auto ct = u_->ContractType(j);
    if (ct && Cur(g.t).test(*ct)) targets.push_back(j);
  }
  rng_.Shuffle(targets);
  for (int j : targets) {
    Tentative t;
    Domain d;
    d.set(*u_->ContractType(j));
    t.res.push_back({g.t, d});
    EffectRestriction(Effect::kWrite, &t.res);
    if (!Check(t)) continue;
    if (!Apply(t)) return std::nullopt;
    Node n;
    n.kind = NodeKind::kNew;
    n.scope = s;
    n.ref = st_.contracts[j].node;
    n.slots.type = g.t;
    return AddNode(std::move(n));
  }
  return std::nullopt;
}

std::optional<NodeId> Engine::Conditional(ScopeId s, const Goal& g, int depth) {
  Goal c = ScalarGoal(bool_);
  auto ec = Expr(s, c, depth + 1);
  if (!ec) return std::nullopt;
  std::vector<NodeId> kids = {*ec};
  for (int k = 0; k < 2; ++k) {
    Goal b = ScalarGoal(scalar_);
    b.no_const = true;
    Relate(b.t, Relation::kSub, g.t);
    Relate(b.s, Relation::kSame, g.s);
    auto e = Expr(s, b, depth + 1);
    if (!e) return std::nullopt;
    kids.push_back(*e);
  }
  Node n;
  n.kind = NodeKind::kConditional;
  n.scope = s;
  n.kids = kids;
  n.slots.type = g.t;
  n.slots.storage = g.s;
  NodeId id = AddNode(std::move(n));
  Adopt(id, kids);
  return id;
}

bool Engine::Arguments(ScopeId s, const std::vector<NodeId>& params, int depth,
                       bool relate_storage, std::vector<NodeId>* out) {
  for (NodeId p : params) {
    Goal a = ArgGoal(p, relate_storage);
    auto e = Expr(s, a, depth + 1);
    if (!e) return false;
    out->push_back(*e);
  }
  return true;
}

std::optional<NodeId> Engine::Call(ScopeId s, const Goal& g, int depth) {
  ContractInfo& c = st_.contracts[frame_.contract];
  struct Plan {
    NodeId fn;
    Tentative t;
  };
  std::vector<Plan> plans;
  auto plan_for = [&](NodeId f) -> std::optional<Tentative> {
    const Node& fn = st_.tpl.at(f);
    if (fn.rets.size() > 1) return std::nullopt;
    if (fn.rets.empty() && !g.void_ok) return std::nullopt;
    std::vector<int> levels = {0, 1, 2};
    rng_.Shuffle(levels);
    for (int t : levels) {
      Tentative plan;
      if (!fn.rets.empty()) {
        const Node& r = st_.tpl.at(fn.rets[0]);
        if ((Cur(r.slots.type) & shapes_).any()) return std::nullopt;
        plan.rel.push_back({g.t, Relation::kSame, r.slots.type});
        if (g.s != kNoPlaceholder && r.slots.storage != kNoPlaceholder) {
          plan.rel.push_back({g.s, Relation::kSame, r.slots.storage});
        }
      }
      plan.res.push_back({fn.slots.visibility,
                          QualifierUniverse::Set(
                              {Vis::kInternal, Vis::kPrivate, Vis::kPublic})});
      plan.res.push_back(
          {fn.slots.mutability, QualifierUniverse::MutabilityAtMost(t)});
      if (frame_.mut != kNoPlaceholder && frame_.mut != fn.slots.mutability) {
        plan.res.push_back(
            {frame_.mut, QualifierUniverse::MutabilityAtLeast(t)});
      } else if (frame_.mut == fn.slots.mutability) {
        plan.res.push_back(
            {frame_.mut, QualifierUniverse::MutabilityAtLeast(t) &
                             QualifierUniverse::MutabilityAtMost(t)});
      }
      if (Check(plan)) return plan;
    }
    return std::nullopt;
  };
  for (NodeId f : c.functions) {
    if (auto t = plan_for(f)) plans.push_back({f, std::move(*t)});
  }
  NodeId target = kNoNode;
  if (!plans.empty()) {
    const Plan& p = plans[rng_.Below(plans.size())];
    if (!Apply(p.t)) return std::nullopt;
    target = p.fn;
  } else {
    if (static_cast<int>(c.functions.size()) >=
        cfg_.max_functions_per_contract) {
      return std::nullopt;
    }
    Domain ret = Homogenize(
        Cur(g.t) & CodomainOf(*u_, kT, Placement::kFunctionReturn) & scalar_);
    if (ret.none()) return std::nullopt;
    Tentative pre;
    pre.res.push_back({g.t, ret});
    if (g.s != kNoPlaceholder && (ret & ref_).any()) {
      pre.res.push_back(
          {g.s, QualifierUniverse::Set({SL::kCalldata, SL::kMemory})});
    }
    if (!Check(pre)) return std::nullopt;
    target = NewFunction(frame_.contract, ret, true);
    // A fresh signature can still be unusable here, e.g. visibility.
    auto t = plan_for(target);
    if (!t || !Apply(*t)) return std::nullopt;
  }
  std::vector<NodeId> args;
  if (!Arguments(s, st_.tpl.at(target).kids, depth, true, &args)) {
    return std::nullopt;
  }
  Node n;
  n.kind = NodeKind::kCall;
  n.call = CallKind::kInternal;
  n.scope = s;
  n.ref = target;
  n.kids = args;
  n.slots.type = g.t;
  n.slots.storage = g.s;
  NodeId id = AddNode(std::move(n));
  Adopt(id, args);
  return id;
}

std::optional<NodeId> Engine::Receiver(ScopeId s, int contract) {
  if (contract == frame_.contract) return kNoNode;
  auto ct = u_->ContractType(contract);
  if (!ct || !scalar_.test(*ct)) return std::nullopt;
  Domain d;
  d.set(*ct);
  Goal g = ScalarGoal(d);
  return Identifier(s, g, Effect::kRead);
}

std::optional<NodeId> Engine::ExternalCall(ScopeId s, const Goal& g,
                                           int depth) {
  struct Plan {
    int contract;
    NodeId fn;
    Tentative t;
  };
  std::vector<Plan> plans;
  for (const ContractInfo& c : st_.contracts) {
    if (c.index != frame_.contract) {
      auto ct = u_->ContractType(c.index);
      if (!cfg_.contract_values || !ct) continue;
    }
    for (NodeId f : c.functions) {
      const Node& fn = st_.tpl.at(f);
      if (fn.rets.size() > 1 || (fn.rets.empty() && !g.void_ok)) continue;
      if (f == frame_.owner) continue;
      std::vector<int> levels = {0, 1, 2};
      rng_.Shuffle(levels);
      for (int t : levels) {
        Tentative plan;
        if (!fn.rets.empty()) {
          const Node& r = st_.tpl.at(fn.rets[0]);
          if ((Cur(r.slots.type) & shapes_).any()) break;
          plan.rel.push_back({g.t, Relation::kSame, r.slots.type});
        }
        if (g.s != kNoPlaceholder) {
          plan.res.push_back({g.s, QualifierUniverse::Set({SL::kMemory})});
        }
        plan.res.push_back(
            {fn.slots.visibility,
             QualifierUniverse::Set({Vis::kPublic, Vis::kExternal})});
        plan.res.push_back(
            {fn.slots.mutability, QualifierUniverse::MutabilityAtMost(t)});
        if (frame_.mut != kNoPlaceholder) {
          plan.res.push_back({frame_.mut, QualifierUniverse::MutabilityAtLeast(
                                              std::max(t, 1))});
        }
        if (Check(plan)) {
          plans.push_back({c.index, f, std::move(plan)});
          break;
        }
      }
    }
  }
  if (plans.empty()) return std::nullopt;
  const Plan& p = plans[rng_.Below(plans.size())];
  if (!Apply(p.t)) return std::nullopt;
  auto recv = Receiver(s, p.contract);
  if (!recv) return std::nullopt;
  std::vector<NodeId> args;
  if (!Arguments(s, st_.tpl.at(p.fn).kids, depth, false, &args)) {
    return std::nullopt;
  }
  Node n;
  n.kind = NodeKind::kCall;
  n.call = CallKind::kExternal;
  n.scope = s;
  n.ref = p.fn;
  n.receiver = *recv;
  n.kids = args;
  n.slots.type = g.t;
  n.slots.storage = g.s;
  NodeId id = AddNode(std::move(n));
  Adopt(id, args);
  if (*recv != kNoNode) st_.tpl.at(*recv).parent = id;
  return id;
}

std::optional<NodeId> Engine::Getter(ScopeId s, const Goal& g) {
  struct Plan {
    int contract;
    NodeId var;
    Tentative t;
  };
  std::vector<Plan> plans;
  for (const ContractInfo& c : st_.contracts) {
    if (c.index != frame_.contract && !cfg_.contract_values) continue;
    for (NodeId m : st_.tpl.at(c.node).body) {
      const Node& v = st_.tpl.at(m);
      if (v.kind != NodeKind::kVarDecl || v.site != VarSite::kState) continue;
      if (v.slots.key != kNoPlaceholder) continue;
      if ((Cur(v.slots.type) & ~value_).any()) continue;
      if ((Cur(v.slots.type) & Cur(g.t)).none()) continue;
      Tentative plan;
      plan.rel.push_back({g.t, Relation::kSame, v.slots.type});
      plan.res.push_back(
          {v.slots.visibility, QualifierUniverse::Set({Vis::kPublic})});
      EffectRestriction(Effect::kRead, &plan.res);
      if (Check(plan)) plans.push_back({c.index, m, std::move(plan)});
    }
  }
  if (plans.empty()) return std::nullopt;
  const Plan& p = plans[rng_.Below(plans.size())];
  if (!Apply(p.t)) return std::nullopt;
  auto recv = Receiver(s, p.contract);
  if (!recv) return std::nullopt;
  Node n;
  n.kind = NodeKind::kCall;
  n.call = CallKind::kGetter;
  n.scope = s;
  n.ref = p.var;
  n.receiver = *recv;
  n.slots.type = g.t;
  n.slots.storage = g.s;
  NodeId id = AddNode(std::move(n));
  if (*recv != kNoNode) st_.tpl.at(*recv).parent = id;
  return id;
}

std::optional<NodeId> Engine::StructConstructor(ScopeId s, const Goal& g,
                                                int depth) {
  std::vector<std::size_t> ordinals;
  for (std::size_t k = 0; k < st_.structs.size(); ++k) {
    auto st = u_->StructType(static_cast<int>(k));
    if (st && Cur(g.t).test(*st)) ordinals.push_back(k);
  }
  rng_.Shuffle(ordinals);
  for (std::size_t k : ordinals) {
    Tentative t;
    Domain d;
    d.set(*u_->StructType(static_cast<int>(k)));
    t.res.push_back({g.t, d});
    if (g.s != kNoPlaceholder) {
      t.res.push_back({g.s, QualifierUniverse::Set({SL::kMemory})});
    }
    if (!Check(t)) continue;
    if (!Apply(t)) return std::nullopt;
    NodeId decl = st_.structs[k];
    std::vector<NodeId> args;
    if (!Arguments(s, st_.tpl.at(decl).kids, depth, false, &args)) {
      return std::nullopt;
    }
    Node n;
    n.kind = NodeKind::kCall;
    n.call = CallKind::kStructConstructor;
    n.scope = s;
    n.ref = decl;
    n.kids = args;
    n.slots.type = g.t;
    n.slots.storage = g.s;
    NodeId id = AddNode(std::move(n));
    Adopt(id, args);
    return id;
  }
  return std::nullopt;
}

std::optional<NodeId> Engine::Index(ScopeId s, const Goal& g, int depth) {
  if ((Cur(g.t) & elem_).none()) return std::nullopt;
  Goal a = ArrayGoal(shapes_, elem_);
  Relate(BaseOf(a.t), Relation::kSame, g.t);
  auto e1 = Expr(s, a, depth + 1);
  if (!e1) return std::nullopt;
  int length = 0;
  const Domain& shape = Cur(a.t);
  if (shape.count() == 1) length = u_->Type(shape._Find_first()).length;
  Goal i = ScalarGoal(uints_ & scalar_);
  i.literal_lo = 0;
  i.literal_hi = length > 0 ? length - 1 : 3;
  auto e2 = Expr(s, i, depth + 1);
  if (!e2) return std::nullopt;
  Node n;
  n.kind = NodeKind::kIndex;
  n.scope = s;
  n.kids = {*e1, *e2};
  n.slots.type = g.t;
  n.slots.storage = g.s;
  NodeId id = AddNode(std::move(n));
  Adopt(id, {*e1, *e2});
  return id;
}

std::optional<NodeId> Engine::MappingIndex(ScopeId s, const Goal& g,
                                           int depth) {
  std::vector<NodeId> passing;
  std::vector<Tentative> plans;
  for (NodeId d : st_.ctx.Query(s)) {
    const Node& n = st_.tpl.at(d);
    if (n.kind != NodeKind::kVarDecl || n.slots.key == kNoPlaceholder) continue;
    if ((Cur(n.slots.value) & Cur(g.t)).none()) continue;
    Tentative t;
    t.res.push_back({n.slots.value, st_.cs.Codomain(g.t)});
    t.rel.push_back({g.t, Relation::kSame, n.slots.value});
    EffectRestriction(Effect::kRead, &t.res);
    if (Check(t)) {
      passing.push_back(d);
      plans.push_back(std::move(t));
    }
  }
  NodeId decl = kNoNode;
  if (!passing.empty()) {
    std::size_t k = rng_.Below(passing.size());
    if (!Apply(plans[k])) return std::nullopt;
    decl = passing[k];
  } else {
    ScopeId cs = st_.contracts[frame_.contract].scope;
    Domain value = Cur(g.t) & elem_;
    if (value.none()) return std::nullopt;
    Tentative pre;
    pre.res.push_back({g.t, value});
    EffectRestriction(Effect::kRead, &pre.res);
    if (!Check(pre)) return std::nullopt;
    DeclShape sh{DeclShape::kMapping, mapping_, {}, key_, value};
    decl = NewVarDecl(VarSite::kState, cs, sh, false);
    NodeId contract = st_.contracts[frame_.contract].node;
    st_.tpl.at(decl).parent = contract;
    st_.tpl.at(contract).body.push_back(decl);
    st_.ctx.PushDecl(decl, cs);
    ++stats_.fresh_declarations;
    const Node& dn = st_.tpl.at(decl);
    Tentative t;
    t.rel.push_back({g.t, Relation::kSame, dn.slots.value});
    EffectRestriction(Effect::kRead, &t.res);
    if (!Apply(t)) return std::nullopt;
  }
  const Node& dn = st_.tpl.at(decl);
  PlaceholderId key = dn.slots.key;
  PlaceholderId mt = dn.slots.type;
  Node ident;
  ident.kind = NodeKind::kIdentifier;
  ident.scope = s;
  ident.ref = decl;
  ident.slots.type = NewPh(kT, Level::kExpression, kNoNode, mapping_);
  Relate(ident.slots.type, Relation::kSame, mt);
  NodeId iid = AddNode(std::move(ident));
  Goal k = ScalarGoal(scalar_);
  Relate(k.t, Relation::kSub, key);
  auto e2 = Expr(s, k, depth + 1);
  if (!e2) return std::nullopt;
  Node n;
  n.kind = NodeKind::kIndex;
  n.scope = s;
  n.kids = {iid, *e2};
  n.slots.type = g.t;
  NodeId id = AddNode(std::move(n));
  Adopt(id, {iid, *e2});
  return id;
}

std::optional<NodeId> Engine::Member(ScopeId s, const Goal& g, int depth) {
  struct Plan {
    std::size_t ordinal;
    NodeId member;
    Tentative t;
  };
  std::vector<Plan> plans;
  for (std::size_t k = 0; k < st_.structs.size(); ++k) {
    auto st = u_->StructType(static_cast<int>(k));
    if (!st || !scalar_.test(*st)) continue;
    for (NodeId m : st_.tpl.at(st_.structs[k]).kids) {
      PlaceholderId tm = st_.tpl.at(m).slots.type;
      if ((Cur(tm) & Cur(g.t)).none()) continue;
      Tentative t;
      t.rel.push_back({g.t, Relation::kSame, tm});
      if (Check(t)) plans.push_back({k, m, std::move(t)});
    }
  }
  if (plans.empty()) return std::nullopt;
  const Plan& p = plans[rng_.Below(plans.size())];
  if (!Apply(p.t)) return std::nullopt;
  NodeId member = p.member;
  Domain d;
  d.set(*u_->StructType(static_cast<int>(p.ordinal)));
  Goal base = ScalarGoal(d);
  base.no_const = true;
  auto e1 = Expr(s, base, depth + 1);
  if (!e1) return std::nullopt;
  Node n;
  n.kind = NodeKind::kMember;
  n.scope = s;
  n.ref = member;
  n.kids = {*e1};
  n.slots.type = g.t;
  NodeId id = AddNode(std::move(n));
  Adopt(id, {*e1});
  return id;
}

GeneratedTemplate Engine::Finish() {
  if (!st_.cs.IsSolvable()) {
    throw InvariantViolation("generated constraint set is unsolvable");
  }
  if (!IdentifiersResolve(st_.tpl, st_.ctx)) {
    throw InvariantViolation("identifier does not resolve");
  }
  stats_.expressions = st_.expressions;
  return GeneratedTemplate{
      u_,    std::move(st_.tpl), std::move(st_.ctx), std::move(st_.cs), cfg_,
      stats_};
}

GeneratedTemplate Engine::Run() {
  BuildSkeleton();
  FillBodies();
  return Finish();
}

GeneratedTemplate Engine::RunExpressionStatement() {
  Node cn;
  cn.kind = NodeKind::kContract;
  cn.parent = st_.tpl.root();
  cn.scope = st_.ctx.root();
  cn.name = st_.tpl.FreshName("C");
  NodeId c = AddNode(std::move(cn));
  st_.tpl.at(st_.tpl.root()).body.push_back(c);
  st_.ctx.PushDecl(c, st_.ctx.root());
  ContractInfo info;
  info.node = c;
  info.scope = st_.ctx.Open(ScopeClass::kContractMember, st_.ctx.root(), c);
  st_.lists[info.scope] = {c, 0};
  st_.contracts.push_back(info);

  Node fn;
  fn.kind = NodeKind::kFunction;
  fn.scope = info.scope;
  fn.parent = c;
  fn.name = st_.tpl.FreshName("f");
  fn.slots.visibility = NewPh(kV, Level::kDeclaration, kNoNode, u_->All(kV));
  Domain m = u_->All(kM);
  m.reset(static_cast<std::size_t>(Mut::kPayable));
  fn.slots.mutability = NewPh(kM, Level::kDeclaration, kNoNode, m);
  NodeId f = AddNode(std::move(fn));
  st_.tpl.at(c).body.push_back(f);
  st_.ctx.PushDecl(f, info.scope);
  st_.contracts[0].functions.push_back(f);
  ScopeId body = st_.ctx.Open(ScopeClass::kFunctionBody, info.scope, f);
  st_.lists[body] = {f, 0};
  frame_ = Frame{0, f, st_.tpl.at(f).slots.mutability, false};

  Goal g = ScalarGoal(scalar_);
  g.void_ok = true;
  auto e = Expr(body, g, 0);
  if (!e) throw std::invalid_argument("scripted expression failed");
  Node stmt;
  stmt.kind = NodeKind::kExprStmt;
  stmt.scope = body;
  stmt.parent = f;
  stmt.kids = {*e};
  NodeId sid = AddNode(std::move(stmt));
  st_.tpl.at(*e).parent = sid;
  List(f, 0).push_back(sid);
  return Finish();
}

}  // namespace

std::string_view ProductionName(Production p) {
  return kProductionNames[static_cast<std::size_t>(p)];
}

std::optional<Production> ParseProduction(std::string_view s) {
  for (std::size_t i = 0; i < kProductionNames.size(); ++i) {
    if (kProductionNames[i] == s) return static_cast<Production>(i);
  }
  return std::nullopt;
}

std::string_view StatementKindName(StatementKind k) {
  return kStatementNames[static_cast<std::size_t>(k)];
}

GeneratorConfig::GeneratorConfig() {
  production_weights.fill(1.0);
  production_weights[static_cast<std::size_t>(Production::kLiteral)] = 2.0;
  production_weights[static_cast<std::size_t>(Production::kIdentifier)] = 3.0;
  statement_weights.fill(1.0);
  statement_weights[static_cast<std::size_t>(StatementKind::kExpr)] = 3.0;
  statement_weights[static_cast<std::size_t>(StatementKind::kVarDecl)] = 2.0;
}

UniverseSpec GeneratorConfig::Universe() const {
  UniverseSpec u;
  u.integer_widths = integer_widths;
  u.struct_count = contracts * structs;
  u.contract_count = contracts;
  u.static_array_lengths = static_array_lengths;
  u.dynamic_arrays = dynamic_arrays;
  u.mapping = mapping_probability > 0;
  return u;
}

void GeneratorConfig::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(contracts >= 1 && contracts <= 8, "contracts must be in [1, 8]");
  require(functions_per_contract >= 0, "functions_per_contract < 0");
  require(max_functions_per_contract >= functions_per_contract,
          "max_functions_per_contract < functions_per_contract");
  require(state_variables >= 0 && structs >= 0 && events >= 0 && errors >= 0 &&
              modifiers >= 0,
          "negative declaration count");
  require(max_struct_members >= 1, "max_struct_members < 1");
  require(max_parameters >= 0, "max_parameters < 0");
  require(statements_per_body >= 1, "statements_per_body < 1");
  require(max_statement_depth >= 0, "max_statement_depth < 0");
  require(max_expression_depth >= 0, "max_expression_depth < 0");
  require(max_expressions >= 0, "max_expressions < 0");
  for (double p : {array_probability, mapping_probability, return_probability,
                   modifier_use_probability}) {
    require(p >= 0 && p <= 1, "probability outside [0, 1]");
  }
  for (double w : production_weights) require(w >= 0, "negative weight");
  for (double w : statement_weights) require(w >= 0, "negative weight");
  require(
      production_weights[static_cast<std::size_t>(Production::kIdentifier)] > 0,
      "identifier production must stay enabled");
  QualifierUniverse check(Universe());
  (void)check;
}

nlohmann::json GeneratorConfig::ToJson() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["contracts"] = contracts;
  j["functions_per_contract"] = functions_per_contract;
  j["max_functions_per_contract"] = max_functions_per_contract;
  j["state_variables"] = state_variables;
  j["structs"] = structs;
  j["events"] = events;
  j["errors"] = errors;
  j["modifiers"] = modifiers;
  j["max_struct_members"] = max_struct_members;
  j["max_parameters"] = max_parameters;
  j["statements_per_body"] = statements_per_body;
  j["max_statement_depth"] = max_statement_depth;
  j["max_expression_depth"] = max_expression_depth;
  j["max_expressions"] = max_expressions;
  j["array_probability"] = array_probability;
  j["mapping_probability"] = mapping_probability;
  j["return_probability"] = return_probability;
  j["modifier_use_probability"] = modifier_use_probability;
  j["integer_widths"] = integer_widths;
  j["static_array_lengths"] = static_array_lengths;
  j["dynamic_arrays"] = dynamic_arrays;
  j["strings"] = strings;
  j["addresses"] = addresses;
  j["contract_values"] = contract_values;
  j["ident_storage"] =
      ident_storage == IdentStorageRule::kSame ? "same" : "sub";
  nlohmann::json pw, sw;
  for (std::size_t i = 0; i < kProductionCount; ++i) {
    pw[std::string(kProductionNames[i])] = production_weights[i];
  }
  for (std::size_t i = 0; i < kStatementCount; ++i) {
    sw[std::string(kStatementNames[i])] = statement_weights[i];
  }
  j["production_weights"] = pw;
  j["statement_weights"] = sw;
  return j;
}

GeneratorConfig GeneratorConfig::FromJson(const nlohmann::json& j) {
  GeneratorConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("seed", c.seed);
  get("contracts", c.contracts);
  get("functions_per_contract", c.functions_per_contract);
  get("max_functions_per_contract", c.max_functions_per_contract);
  get("state_variables", c.state_variables);
  get("structs", c.structs);
  get("events", c.events);
  get("errors", c.errors);
  get("modifiers", c.modifiers);
  get("max_struct_members", c.max_struct_members);
  get("max_parameters", c.max_parameters);
  get("statements_per_body", c.statements_per_body);
  get("max_statement_depth", c.max_statement_depth);
  get("max_expression_depth", c.max_expression_depth);
  get("max_expressions", c.max_expressions);
  get("array_probability", c.array_probability);
  get("mapping_probability", c.mapping_probability);
  get("return_probability", c.return_probability);
  get("modifier_use_probability", c.modifier_use_probability);
  get("integer_widths", c.integer_widths);
  get("static_array_lengths", c.static_array_lengths);
  get("dynamic_arrays", c.dynamic_arrays);
  get("strings", c.strings);
  get("addresses", c.addresses);
  get("contract_values", c.contract_values);
  if (j.contains("ident_storage")) {
    std::string r = j.at("ident_storage").get<std::string>();
    if (r != "same" && r != "sub") {
      throw std::invalid_argument("ident_storage must be same or sub");
    }
    c.ident_storage =
        r == "same" ? IdentStorageRule::kSame : IdentStorageRule::kSub;
  }
  if (j.contains("production_weights")) {
    for (const auto& [k, v] : j.at("production_weights").items()) {
      auto p = ParseProduction(k);
      if (!p) throw std::invalid_argument("unknown production " + k);
      c.production_weights[static_cast<std::size_t>(*p)] = v.get<double>();
    }
  }
  if (j.contains("statement_weights")) {
    for (const auto& [k, v] : j.at("statement_weights").items()) {
      bool found = false;
      for (std::size_t i = 0; i < kStatementCount; ++i) {
        if (kStatementNames[i] == k) {
          c.statement_weights[i] = v.get<double>();
          found = true;
        }
      }
      if (!found) throw std::invalid_argument("unknown statement kind " + k);
    }
  }
  return c;
}

Production Chooser::ChooseProduction(const std::vector<Production>& viable,
                                     const std::vector<double>& weights,
                                     Rng& rng) {
  return viable[rng.Weighted(weights)];
}

std::string Chooser::ChooseOperator(Production,
                                    const std::vector<std::string>& ops,
                                    Rng& rng) {
  return rng.Pick(ops);
}

std::size_t Chooser::ChooseCandidate(const std::vector<NodeId>& passing,
                                     Rng& rng) {
  return rng.Below(passing.size());
}

std::size_t Chooser::ChooseScope(const std::vector<ScopeId>& scopes, Rng& rng) {
  return rng.Below(scopes.size());
}

LiteralValue Chooser::ChooseLiteral(const std::vector<LiteralKind>& kinds,
                                    int lo, int hi, Rng& rng) {
  LiteralValue v;
  v.kind = rng.Pick(kinds);
  switch (v.kind) {
    case LiteralKind::kInteger:
      v.magnitude = static_cast<std::uint64_t>(rng.Range(lo, hi));
      break;
    case LiteralKind::kBool:
      v.text = rng.Chance(0.5) ? "true" : "false";
      break;
    case LiteralKind::kAddress:
      v.text = kAddressLiteral;
      break;
    case LiteralKind::kString: {
      static constexpr char kAlphabet[] = "abcdefghijklmnopqrstuvwxyz";
      int n = rng.Range(1, 4);
      for (int i = 0; i < n; ++i) v.text.push_back(kAlphabet[rng.Below(26)]);
      break;
    }
  }
  return v;
}

GeneratedTemplate Generate(const GeneratorConfig& config, Chooser* chooser) {
  config.Validate();
  Chooser fallback;
  Engine engine(config, chooser ? *chooser : fallback);
  return engine.Run();
}

GeneratedTemplate GenerateExpressionStatement(const GeneratorConfig& config,
                                              Chooser& chooser) {
  config.Validate();
  Engine engine(config, chooser);
  return engine.RunExpressionStatement();
}

}  // namespace qualsmith
