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

#include "qualsmith/constraint_set.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "qualsmith/rng.h"

namespace qualsmith {

namespace {

template <typename F>
void ForEachBit(const Domain& d, F&& f) {
  for (std::size_t i = d._Find_first(); i < d.size(); i = d._Find_next(i)) {
    f(i);
  }
}

}  // namespace

std::string_view RelationSymbol(Relation r) {
  switch (r) {
    case Relation::kSame:
      return "==";
    case Relation::kSub:
      return "<:";
    case Relation::kSuper:
      return ":>";
    case Relation::kComparable:
      return "<>";
  }
  return "?";
}

std::optional<Relation> ParseRelation(std::string_view s) {
  for (Relation r : {Relation::kSame, Relation::kSub, Relation::kSuper,
                     Relation::kComparable}) {
    if (RelationSymbol(r) == s) return r;
  }
  return std::nullopt;
}

Relation Converse(Relation r) {
  if (r == Relation::kSub) return Relation::kSuper;
  if (r == Relation::kSuper) return Relation::kSub;
  return r;
}

Relation Compose(Relation a, Relation b) {
  if (a == Relation::kSame) return b;
  if (b == Relation::kSame) return a;
  if (a == b && a != Relation::kComparable) return a;
  return Relation::kComparable;
}

Relation Conjoin(Relation a, Relation b) {
  if (a == b) return a;
  if (a == Relation::kComparable) return b;
  if (b == Relation::kComparable) return a;
  // Same with anything ordered, or Sub with Super.
  return Relation::kSame;
}

bool Precedes(Relation a, Relation b) {
  auto rank = [](Relation r) {
    switch (r) {
      case Relation::kSub:
        return 0;
      case Relation::kSame:
        return 1;
      case Relation::kSuper:
        return 2;
      default:
        return -1;
    }
  };
  int ra = rank(a), rb = rank(b);
  return ra >= 0 && rb >= 0 && ra < rb;
}

bool Holds(const QualifierUniverse& u, Qualifier a, Relation r, Qualifier b) {
  switch (r) {
    case Relation::kSame:
      return a == b;
    case Relation::kSub:
      return u.Leq(a, b);
    case Relation::kSuper:
      return u.Leq(b, a);
    case Relation::kComparable:
      return u.Leq(a, b) || u.Leq(b, a);
  }
  return false;
}

ConstraintSet::ConstraintSet(std::shared_ptr<const QualifierUniverse> universe)
    : universe_(std::move(universe)) {
  if (!universe_) throw std::invalid_argument("null universe");
}

void ConstraintSet::CheckId(PlaceholderId id) const {
  if (!Contains(id)) {
    throw std::invalid_argument("unknown placeholder " + std::to_string(id));
  }
}

const Placeholder& ConstraintSet::Get(PlaceholderId id) const {
  CheckId(id);
  return placeholders_[id];
}

const Domain& ConstraintSet::Current(PlaceholderId id) const {
  CheckId(id);
  return current_[id];
}

PlaceholderId ConstraintSet::AddPlaceholder(QualifierKind kind, Level level,
                                            NodeId owner,
                                            const Domain& codomain) {
  if (codomain.none()) throw std::invalid_argument("empty codomain");
  if ((codomain & ~universe_->All(kind)).any()) {
    throw std::invalid_argument("codomain outside the universe");
  }
  Placeholder p;
  p.id = static_cast<PlaceholderId>(placeholders_.size());
  p.kind = kind;
  p.level = level;
  p.owner = owner;
  p.codomain = codomain;
  placeholders_.push_back(p);
  incident_.emplace_back();
  current_.push_back(codomain);
  return p.id;
}

PlaceholderId ConstraintSet::AddBase(PlaceholderId parent,
                                     const Domain& codomain) {
  CheckId(parent);
  if (placeholders_[parent].kind != QualifierKind::kDataType) {
    throw std::invalid_argument("only data-type placeholders have bases");
  }
  if (placeholders_[parent].base != kNoPlaceholder) {
    throw std::invalid_argument("placeholder already has a base");
  }
  Level level = placeholders_[parent].level;
  NodeId owner = placeholders_[parent].owner;
  PlaceholderId b =
      AddPlaceholder(QualifierKind::kDataType, level, owner, codomain);
  placeholders_[parent].base = b;
  placeholders_[b].base_of = parent;
  return b;
}

void ConstraintSet::PushRelation(const Constraint& c) {
  CheckId(c.lhs);
  CheckId(c.rhs);
  if (c.lhs == c.rhs) throw std::invalid_argument("relation with itself");
  if (placeholders_[c.lhs].kind != placeholders_[c.rhs].kind) {
    throw std::invalid_argument("relation between different kinds");
  }
  auto index = static_cast<std::uint32_t>(relations_.size());
  relations_.push_back(c);
  incident_[c.lhs].push_back(index);
  incident_[c.rhs].push_back(index);
  if (consistent_) {
    consistent_ = Propagate(current_, {c.lhs, c.rhs}, {});
  }
  PlaceholderId bl = placeholders_[c.lhs].base;
  PlaceholderId br = placeholders_[c.rhs].base;
  if (bl != kNoPlaceholder && br != kNoPlaceholder && bl != br) {
    PushRelation({bl, Relation::kSame, br});
  }
}

bool ConstraintSet::RestrictCodomain(const CodomainRestriction& r) {
  CheckId(r.target);
  Domain next = placeholders_[r.target].codomain & r.codomain;
  if (next.none()) return false;
  placeholders_[r.target].codomain = next;
  if (consistent_) {
    Domain narrowed = current_[r.target] & r.codomain;
    if (narrowed != current_[r.target]) {
      current_[r.target] = narrowed;
      consistent_ = narrowed.any() && Propagate(current_, {r.target}, {});
    }
  }
  return true;
}

bool ConstraintSet::IsSolvableWith(
    std::span<const Constraint> relations,
    std::span<const CodomainRestriction> restrictions) const {
  if (!consistent_) return false;
  std::vector<Domain> dom = current_;
  std::vector<PlaceholderId> queue;
  for (const auto& r : restrictions) {
    CheckId(r.target);
    dom[r.target] &= r.codomain;
    if (dom[r.target].none()) return false;
    queue.push_back(r.target);
  }
  for (const auto& c : relations) {
    CheckId(c.lhs);
    CheckId(c.rhs);
    if (c.lhs == c.rhs) throw std::invalid_argument("relation with itself");
    if (placeholders_[c.lhs].kind != placeholders_[c.rhs].kind) {
      throw std::invalid_argument("relation between different kinds");
    }
    queue.push_back(c.lhs);
    queue.push_back(c.rhs);
  }
  return Propagate(dom, std::move(queue), relations);
}

Domain ConstraintSet::Support(QualifierKind kind, const Domain& from,
                              Relation r) const {
  if (r == Relation::kSame) return from;
  Domain out;
  const QualifierUniverse& u = *universe_;
  ForEachBit(from, [&](std::size_t a) {
    switch (r) {
      case Relation::kSub:
        out |= u.Up(kind, a);
        break;
      case Relation::kSuper:
        out |= u.Down(kind, a);
        break;
      default:
        out |= u.Chain(kind, a);
        break;
    }
  });
  return out;
}

bool ConstraintSet::Revise(std::vector<Domain>& dom, const Constraint& c,
                           bool revise_rhs) const {
  QualifierKind kind = placeholders_[c.lhs].kind;
  if (revise_rhs) {
    Domain next = dom[c.rhs] & Support(kind, dom[c.lhs], c.rel);
    if (next == dom[c.rhs]) return false;
    dom[c.rhs] = next;
  } else {
    Domain next = dom[c.lhs] & Support(kind, dom[c.rhs], Converse(c.rel));
    if (next == dom[c.lhs]) return false;
    dom[c.lhs] = next;
  }
  return true;
}

bool ConstraintSet::Propagate(std::vector<Domain>& dom,
                              std::vector<PlaceholderId> queue,
                              std::span<const Constraint> extra) const {
  std::vector<char> queued(dom.size(), 0);
  for (PlaceholderId q : queue) queued[q] = 1;
  std::size_t head = 0;
  auto visit = [&](const Constraint& c, PlaceholderId x) -> bool {
    bool rhs_side = c.lhs == x;
    PlaceholderId y = rhs_side ? c.rhs : c.lhs;
    if (Revise(dom, c, rhs_side)) {
      if (dom[y].none()) return false;
      if (!queued[y]) {
        queued[y] = 1;
        queue.push_back(y);
      }
    }
    return true;
  };
  while (head < queue.size()) {
    PlaceholderId x = queue[head++];
    queued[x] = 0;
    for (std::uint32_t ci : incident_[x]) {
      if (!visit(relations_[ci], x)) return false;
    }
    for (const Constraint& c : extra) {
      if (c.lhs == x || c.rhs == x) {
        if (!visit(c, x)) return false;
      }
    }
    if (head > 4096 && head * 2 > queue.size()) {
      queue.erase(queue.begin(), queue.begin() + static_cast<long>(head));
      head = 0;
    }
  }
  return true;
}

void ConstraintSet::Recompute() {
  for (std::size_t i = 0; i < placeholders_.size(); ++i) {
    current_[i] = placeholders_[i].alive ? placeholders_[i].codomain : Domain();
  }
  std::vector<PlaceholderId> queue = Ids();
  consistent_ = Propagate(current_, std::move(queue), {});
}

void ConstraintSet::Kill(PlaceholderId id) {
  PlaceholderId ids[] = {id};
  KillAll(ids);
}

void ConstraintSet::KillAll(std::span<const PlaceholderId> ids) {
  for (PlaceholderId id : ids) {
    CheckId(id);
    Unlink(id);
    placeholders_[id].alive = false;
  }
  std::vector<Constraint> kept;
  kept.reserve(relations_.size());
  for (const Constraint& c : relations_) {
    if (placeholders_[c.lhs].alive && placeholders_[c.rhs].alive) {
      kept.push_back(c);
    }
  }
  ReplaceRelations(std::move(kept));
}

void ConstraintSet::ReplaceRelations(std::vector<Constraint> relations) {
  for (const Constraint& c : relations) {
    CheckId(c.lhs);
    CheckId(c.rhs);
    if (c.lhs == c.rhs) throw std::invalid_argument("relation with itself");
    if (placeholders_[c.lhs].kind != placeholders_[c.rhs].kind) {
      throw std::invalid_argument("relation between different kinds");
    }
  }
  relations_ = std::move(relations);
  for (auto& v : incident_) v.clear();
  for (std::uint32_t i = 0; i < relations_.size(); ++i) {
    incident_[relations_[i].lhs].push_back(i);
    incident_[relations_[i].rhs].push_back(i);
  }
  Recompute();
}

void ConstraintSet::Unlink(PlaceholderId id) {
  CheckId(id);
  Placeholder& p = placeholders_[id];
  if (p.base != kNoPlaceholder) placeholders_[p.base].base_of = kNoPlaceholder;
  if (p.base_of != kNoPlaceholder)
    placeholders_[p.base_of].base = kNoPlaceholder;
  p.base = p.base_of = kNoPlaceholder;
}

void ConstraintSet::SetOwner(PlaceholderId id, NodeId owner) {
  CheckId(id);
  placeholders_[id].owner = owner;
}

std::vector<PlaceholderId> ConstraintSet::Ids() const {
  std::vector<PlaceholderId> out;
  for (const auto& p : placeholders_) {
    if (p.alive) out.push_back(p.id);
  }
  return out;
}

std::vector<PlaceholderId> ConstraintSet::Ids(QualifierKind kind,
                                              Level level) const {
  std::vector<PlaceholderId> out;
  for (const auto& p : placeholders_) {
    if (p.alive && p.kind == kind && p.level == level) out.push_back(p.id);
  }
  return out;
}

std::vector<Constraint> ConstraintSet::RelationsOf(PlaceholderId id) const {
  CheckId(id);
  std::vector<Constraint> out;
  for (std::uint32_t ci : incident_[id]) out.push_back(relations_[ci]);
  return out;
}

std::size_t ConstraintSet::LiveCount() const {
  std::size_t n = 0;
  for (const auto& p : placeholders_) n += p.alive ? 1 : 0;
  return n;
}

void ConstraintSet::NarrowCodomains() {
  if (!consistent_) return;
  for (std::size_t i = 0; i < placeholders_.size(); ++i) {
    if (placeholders_[i].alive) placeholders_[i].codomain = current_[i];
  }
}

bool ConstraintSet::SearchFrom(std::vector<Domain>& dom,
                               const std::vector<PlaceholderId>& order,
                               std::size_t depth) const {
  if (depth == order.size()) return true;
  PlaceholderId v = order[depth];
  Domain values = dom[v];
  for (std::size_t a = values._Find_first(); a < values.size();
       a = values._Find_next(a)) {
    std::vector<Domain> next = dom;
    next[v].reset();
    next[v].set(a);
    if (Propagate(next, {v}, {}) && SearchFrom(next, order, depth + 1)) {
      dom = std::move(next);
      return true;
    }
  }
  return false;
}

bool ConstraintSet::IsSolvableBySearch() const {
  std::vector<Domain> dom(placeholders_.size());
  for (std::size_t i = 0; i < placeholders_.size(); ++i) {
    if (placeholders_[i].alive) dom[i] = placeholders_[i].codomain;
  }
  std::vector<PlaceholderId> order = Ids();
  // Plain backtracking without a propagation pre-pass, smallest codomain
  // first, with forward checking after each assignment.
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return dom[a].count() < dom[b].count();
  });
  return SearchFrom(dom, order, 0);
}

std::vector<Substitution> ConstraintSet::Solutions(
    std::span<const PlaceholderId> over, std::optional<std::size_t> limit,
    std::uint64_t seed) const {
  std::vector<Substitution> out;
  if (!consistent_ || (limit && *limit == 0)) return out;
  std::vector<PlaceholderId> order(over.begin(), over.end());
  for (PlaceholderId id : order) CheckId(id);
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return current_[a].count() < current_[b].count();
  });
  std::vector<std::vector<std::uint16_t>> values(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    ForEachBit(current_[order[i]], [&](std::size_t a) {
      values[i].push_back(static_cast<std::uint16_t>(a));
    });
    Rng rng(DeriveSeed(seed, order[i]));
    rng.Shuffle(values[i]);
  }

  std::vector<std::vector<Domain>> stack(order.size() + 1);
  stack[0] = current_;
  std::vector<std::size_t> cursor(order.size(), 0);
  std::size_t depth = 0;
  if (order.empty()) {
    out.emplace_back();
    return out;
  }
  // Iterative search keeps deep enumerations off the call stack.
  while (true) {
    if (depth == order.size()) {
      Substitution s;
      for (std::size_t i = 0; i < order.size(); ++i) {
        QualifierKind k = placeholders_[order[i]].kind;
        s[order[i]] = Qualifier{k, static_cast<std::uint16_t>(
                                       stack[depth][order[i]]._Find_first())};
      }
      out.push_back(std::move(s));
      if (limit && out.size() >= *limit) break;
      --depth;
      continue;
    }
    PlaceholderId v = order[depth];
    bool descended = false;
    while (cursor[depth] < values[depth].size()) {
      std::uint16_t a = values[depth][cursor[depth]++];
      if (!stack[depth][v].test(a)) continue;
      stack[depth + 1] = stack[depth];
      stack[depth + 1][v].reset();
      stack[depth + 1][v].set(a);
      if (Propagate(stack[depth + 1], {v}, {})) {
        descended = true;
        break;
      }
    }
    if (descended) {
      ++depth;
      if (depth < order.size()) cursor[depth] = 0;
      continue;
    }
    if (depth == 0) break;
    --depth;
  }
  return out;
}

nlohmann::json ConstraintSet::Dump() const {
  using nlohmann::json;
  json phs = json::array();
  for (const auto& p : placeholders_) {
    if (!p.alive) continue;
    json j;
    j["id"] = p.id;
    j["kind"] = std::string(KindName(p.kind));
    j["level"] = p.level == Level::kDeclaration ? "decl" : "expr";
    j["owner"] = p.owner == kNoNode ? json(nullptr) : json(p.owner);
    j["codomain"] = universe_->Names(p.kind, p.codomain);
    if (p.base != kNoPlaceholder) j["base"] = p.base;
    if (p.base_of != kNoPlaceholder) j["base_of"] = p.base_of;
    phs.push_back(std::move(j));
  }
  json rels = json::array();
  for (const auto& c : relations_) {
    rels.push_back({c.lhs, std::string(RelationSymbol(c.rel)), c.rhs});
  }
  json out;
  out["placeholders"] = std::move(phs);
  out["relations"] = std::move(rels);
  return out;
}

}  // namespace qualsmith
