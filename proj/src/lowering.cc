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

#include <set>
#include <sstream>
#include <stdexcept>

#include "qualsmith/hash.h"

namespace qualsmith {

namespace {

class Printer {
 public:
  Printer(const GeneratedTemplate& g, const ReducedConstraintSet& r,
          const Substitution& sub)
      : g_(g), r_(r), sub_(sub), u_(*g.universe) {
    for (NodeId i = 0; i < g.tpl.size(); ++i) {
      const Node& n = g.tpl.at(i);
      if (n.kind == NodeKind::kStruct) structs_.push_back(i);
      if (n.kind == NodeKind::kContract) contracts_.push_back(i);
    }
  }

  std::string Program(bool smtchecker) {
    out_ << "// SPDX-License-Identifier: UNLICENSED\n" << kPragma << "\n";
    if (smtchecker) out_ << "pragma experimental SMTChecker;\n";
    for (NodeId c : g_.tpl.at(g_.tpl.root()).body) Contract(c);
    return out_.str();
  }

 private:
  Qualifier Value(PlaceholderId p) const {
    auto it = sub_.find(p);
    if (it != sub_.end()) return it->second;
    if (r_.cs.Contains(p) && r_.cs.Current(p).count() == 1) {
      return {r_.cs.Get(p).kind,
              static_cast<std::uint16_t>(r_.cs.Current(p)._Find_first())};
    }
    auto e = r_.elements.find(p);
    if (e != r_.elements.end() && e->second.shape) {
      return {QualifierKind::kDataType, *e->second.shape};
    }
    throw std::logic_error("placeholder " + std::to_string(p) +
                           " has no value");
  }

  std::string TypeOf(PlaceholderId t, const Node* decl) const {
    const DataTypeInfo& info = u_.Type(Value(t).index);
    switch (info.family) {
      case TypeFamily::kArray: {
        auto e = r_.elements.find(t);
        if (e == r_.elements.end())
          throw std::logic_error("array without element");
        return TypeOf(e->second.element, nullptr) + info.name;
      }
      case TypeFamily::kMapping:
        if (!decl) throw std::logic_error("mapping outside a declaration");
        return "mapping(" + TypeOf(decl->slots.key, nullptr) + " => " +
               TypeOf(decl->slots.value, nullptr) + ")";
      case TypeFamily::kStruct: {
        const Node& s =
            g_.tpl.at(structs_.at(static_cast<std::size_t>(info.ordinal)));
        if (s.parent != contract_)
          return g_.tpl.at(s.parent).name + "." + s.name;
        return s.name;
      }
      case TypeFamily::kContract:
        return g_.tpl.at(contracts_.at(static_cast<std::size_t>(info.ordinal)))
            .name;
      default:
        return info.name;
    }
  }

  bool IsReferenceDecl(const Node& d) const {
    const DataTypeInfo& info = u_.Type(Value(d.slots.type).index);
    return info.IsReference() && info.family != TypeFamily::kMapping;
  }

  // Type, location and name as in a parameter list or local declaration.
  std::string Decl(const Node& d, bool named) const {
    std::string s = TypeOf(d.slots.type, &d);
    bool located = d.site == VarSite::kLocal || d.site == VarSite::kParameter ||
                   d.site == VarSite::kReturn ||
                   d.site == VarSite::kModifierParameter;
    if (located && IsReferenceDecl(d)) {
      StorageLocation loc = StorageLocation::kMemory;
      if (d.slots.storage != kNoPlaceholder &&
          std::find(r_.pruned.begin(), r_.pruned.end(), d.slots.storage) ==
              r_.pruned.end()) {
        loc = static_cast<StorageLocation>(Value(d.slots.storage).index);
      }
      s += " ";
      s += StorageKeyword(loc);
    }
    if (named) s += " " + d.name;
    return s;
  }

  std::string Params(const std::vector<NodeId>& ps, bool named) const {
    std::string s;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (i) s += ", ";
      s += Decl(g_.tpl.at(ps[i]), named);
    }
    return s;
  }

  void Line(int indent, const std::string& s) {
    out_ << std::string(static_cast<std::size_t>(indent) * 4, ' ') << s << "\n";
  }

  void Contract(NodeId c) {
    contract_ = c;
    const Node& n = g_.tpl.at(c);
    Line(0, "");
    Line(0, "contract " + n.name + " {");
    for (NodeId m : n.body) Member(m);
    Line(0, "}");
  }

  void Member(NodeId id) {
    const Node& n = g_.tpl.at(id);
    switch (n.kind) {
      case NodeKind::kStruct: {
        Line(1, "struct " + n.name + " {");
        for (NodeId k : n.kids) Line(2, Decl(g_.tpl.at(k), true) + ";");
        Line(1, "}");
        break;
      }
      case NodeKind::kEvent:
        Line(1, "event " + n.name + "(" + Params(n.kids, true) + ");");
        break;
      case NodeKind::kError:
        Line(1, "error " + n.name + "(" + Params(n.kids, true) + ");");
        break;
      case NodeKind::kVarDecl: {
        std::string vis(VisibilityKeyword(
            static_cast<Visibility>(Value(n.slots.visibility).index)));
        Line(1, TypeOf(n.slots.type, &n) + " " + vis + " " + n.name + ";");
        break;
      }
      case NodeKind::kModifier:
        Line(1, "modifier " + n.name + "(" + Params(n.kids, true) + ") {");
        Statements(n.body, 2);
        Line(2, "_;");
        Line(1, "}");
        break;
      case NodeKind::kFunction: {
        std::string h = "function " + n.name + "(" + Params(n.kids, true) + ")";
        h += " ";
        h += VisibilityKeyword(
            static_cast<Visibility>(Value(n.slots.visibility).index));
        std::string_view mut = MutabilityKeyword(
            static_cast<Mutability>(Value(n.slots.mutability).index));
        if (!mut.empty()) {
          h += " ";
          h += mut;
        }
        for (NodeId m : n.mods) h += " " + g_.tpl.at(m).name;
        if (!n.rets.empty()) h += " returns (" + Params(n.rets, false) + ")";
        Line(1, h + " {");
        Statements(n.body, 2);
        Line(1, "}");
        break;
      }
      default:
        throw std::logic_error("unexpected contract member");
    }
  }

  void Statements(const std::vector<NodeId>& list, int indent) {
    for (NodeId s : list) Statement(s, indent);
  }

  void Statement(NodeId id, int indent) {
    const Node& n = g_.tpl.at(id);
    switch (n.kind) {
      case NodeKind::kExprStmt:
        Line(indent, StatementExpr(n.kids[0]) + ";");
        break;
      case NodeKind::kVarDeclStmt: {
        std::string s = Decl(g_.tpl.at(n.kids[0]), true);
        if (n.kids.size() > 1) s += " = " + Expr(n.kids[1]);
        Line(indent, s + ";");
        break;
      }
      case NodeKind::kIf:
        Line(indent, "if (" + Expr(n.kids[0]) + ") {");
        Statements(n.body, indent + 1);
        if (!n.alt.empty()) {
          Line(indent, "} else {");
          Statements(n.alt, indent + 1);
        }
        Line(indent, "}");
        break;
      case NodeKind::kFor:
        Line(indent, "for (" + StatementExpr(n.kids[0]) + "; " +
                         Expr(n.kids[1]) + "; " + StatementExpr(n.kids[2]) +
                         ") {");
        Statements(n.body, indent + 1);
        Line(indent, "}");
        break;
      case NodeKind::kWhile:
        Line(indent, "while (" + Expr(n.kids[0]) + ") {");
        Statements(n.body, indent + 1);
        Line(indent, "}");
        break;
      case NodeKind::kDoWhile:
        Line(indent, "do {");
        Statements(n.body, indent + 1);
        Line(indent, "} while (" + Expr(n.kids[0]) + ");");
        break;
      case NodeKind::kReturn:
        Line(indent, "return " + Expr(n.kids[0]) + ";");
        break;
      case NodeKind::kEmit:
        Line(indent,
             "emit " + g_.tpl.at(n.ref).name + "(" + Args(n.kids) + ");");
        break;
      case NodeKind::kRevert:
        if (n.ref == kNoNode) {
          Line(indent, "revert();");
        } else {
          Line(indent,
               "revert " + g_.tpl.at(n.ref).name + "(" + Args(n.kids) + ");");
        }
        break;
      default:
        throw std::logic_error("unexpected statement");
    }
  }

  std::string Args(const std::vector<NodeId>& kids) const {
    std::string s;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i) s += ", ";
      s += Expr(kids[i]);
    }
    return s;
  }

  // The parser reads a leading parenthesis followed by `+` as a tuple and a
  // unary plus, so such statements get one more pair.
  std::string StatementExpr(NodeId id) const {
    std::string s = Expr(id);
    if (!s.empty() && s.front() == '(') return "(" + s + ")";
    return s;
  }

  // Operands other than atoms are parenthesized.
  std::string Operand(NodeId id) const {
    NodeKind k = g_.tpl.at(id).kind;
    if (k == NodeKind::kLiteral || k == NodeKind::kIdentifier) return Expr(id);
    return "(" + Expr(id) + ")";
  }

  std::string Literal(const LiteralValue& v) const {
    switch (v.kind) {
      case LiteralKind::kInteger:
        return (v.negative ? "-" : "") + std::to_string(v.magnitude);
      case LiteralKind::kString:
        return "\"" + v.text + "\"";
      default:
        return v.text;
    }
  }

  std::string Expr(NodeId id) const {
    const Node& n = g_.tpl.at(id);
    switch (n.kind) {
      case NodeKind::kLiteral:
        return Literal(n.literal);
      case NodeKind::kIdentifier:
        return g_.tpl.at(n.ref).name;
      case NodeKind::kAssign:
      case NodeKind::kBinary:
        return Operand(n.kids[0]) + " " + n.op + " " + Operand(n.kids[1]);
      case NodeKind::kUnary:
        if (n.op == "++" || n.op == "--") return Operand(n.kids[0]) + n.op;
        return n.op + Operand(n.kids[0]);
      case NodeKind::kNew:
        return "new " + g_.tpl.at(n.ref).name + "()";
      case NodeKind::kConditional:
        return Operand(n.kids[0]) + " ? " + Operand(n.kids[1]) + " : " +
               Operand(n.kids[2]);
      case NodeKind::kCall: {
        const Node& target = g_.tpl.at(n.ref);
        std::string recv = n.receiver == kNoNode ? "this" : Operand(n.receiver);
        switch (n.call) {
          case CallKind::kInternal:
            return target.name + "(" + Args(n.kids) + ")";
          case CallKind::kExternal:
            return recv + "." + target.name + "(" + Args(n.kids) + ")";
          case CallKind::kGetter:
            return recv + "." + target.name + "()";
          case CallKind::kStructConstructor: {
            std::string name = target.name;
            if (target.parent != contract_) {
              name = g_.tpl.at(target.parent).name + "." + name;
            }
            return name + "(" + Args(n.kids) + ")";
          }
        }
        break;
      }
      case NodeKind::kIndex:
        return Operand(n.kids[0]) + "[" + Expr(n.kids[1]) + "]";
      case NodeKind::kMember:
        return Operand(n.kids[0]) + "." + g_.tpl.at(n.ref).name;
      default:
        break;
    }
    throw std::logic_error("unexpected expression");
  }

  const GeneratedTemplate& g_;
  const ReducedConstraintSet& r_;
  const Substitution& sub_;
  const QualifierUniverse& u_;
  std::vector<NodeId> structs_;
  std::vector<NodeId> contracts_;
  NodeId contract_ = kNoNode;
  std::ostringstream out_;
};

}  // namespace

nlohmann::json RenderedProgram::Provenance(const QualifierUniverse& u) const {
  nlohmann::json j;
  j["seed"] = seed;
  j["config_digest"] = config_digest;
  j["template"] = template_id;
  j["index"] = index;
  j["hash"] = hash;
  nlohmann::json s = nlohmann::json::object();
  for (const auto& [p, q] : substitution) s[std::to_string(p)] = u.Name(q);
  j["substitution"] = std::move(s);
  return j;
}

std::vector<Substitution> Enumerate(const ConstraintSet& reduced, std::size_t k,
                                    std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("gen limit must be >= 1");
  std::vector<PlaceholderId> over = reduced.Ids();
  return reduced.Solutions(over, k, seed);
}

std::string RenderSource(const GeneratedTemplate& g,
                         const ReducedConstraintSet& r, const Substitution& sub,
                         bool smtchecker) {
  Printer p(g, r, sub);
  return p.Program(smtchecker);
}

RenderedProgram Render(const GeneratedTemplate& g,
                       const ReducedConstraintSet& r, const Substitution& sub,
                       bool smtchecker) {
  RenderedProgram out;
  out.source = RenderSource(g, r, sub, smtchecker);
  out.hash = Sha256Hex(out.source);
  out.seed = g.config.seed;
  out.config_digest = ConfigDigest(g.config);
  out.template_id = g.Id();
  out.substitution = sub;
  return out;
}

LoweringResult LowerTemplate(const GeneratedTemplate& g,
                             const LoweringOptions& opts) {
  if (opts.gen_limit == 0)
    throw std::invalid_argument("gen limit must be >= 1");
  LoweringResult out{ReduceTemplate(g.cs, g.tpl), {}, 0, 0};
  std::set<std::string> seen;
  std::size_t limit = opts.gen_limit;
  std::size_t done = 0;
  while (true) {
    std::vector<Substitution> subs =
        Enumerate(out.reduced.cs, limit, opts.seed);
    for (; done < subs.size() && out.programs.size() < opts.gen_limit; ++done) {
      RenderedProgram p = Render(g, out.reduced, subs[done], opts.smtchecker);
      if (!seen.insert(p.hash).second) {
        ++out.collapsed;
        continue;
      }
      p.index = out.programs.size();
      out.programs.push_back(std::move(p));
    }
    out.substitutions = done;
    bool exhausted = subs.size() < limit;
    if (!opts.exhaust || exhausted || out.programs.size() >= opts.gen_limit) {
      break;
    }
    limit *= 2;
  }
  if (out.programs.empty()) {
    throw InvariantViolation("lowering produced no program");
  }
  return out;
}

std::string ConfigDigest(const GeneratorConfig& c) {
  GeneratorConfig unseeded = c;
  unseeded.seed = 0;
  return Sha256Hex(unseeded.ToJson().dump()).substr(0, 16);
}

}  // namespace qualsmith
