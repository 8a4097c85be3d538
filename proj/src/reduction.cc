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

#include "qualsmith/reduction.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>

namespace qualsmith {

namespace {

using PairKey = std::pair<PlaceholderId, PlaceholderId>;

// Relations keyed by ordered pair, merged by conjunction.
class RelationTable {
 public:
  void Put(PlaceholderId a, Relation r, PlaceholderId b) {
    if (a == b) return;
    if (a > b) {
      std::swap(a, b);
      r = Converse(r);
    }
    auto [it, fresh] = table_.emplace(PairKey{a, b}, r);
    if (!fresh) it->second = Conjoin(it->second, r);
    adj_[a].insert(b);
    adj_[b].insert(a);
  }
  // Relation from a to b. Requires the pair to be present.
  Relation Get(PlaceholderId a, PlaceholderId b) const {
    if (a < b) return table_.at({a, b});
    return Converse(table_.at({b, a}));
  }
  const std::set<PlaceholderId>& Neighbours(PlaceholderId x) { return adj_[x]; }
  void Erase(PlaceholderId x) {
    for (PlaceholderId n : adj_[x]) {
      table_.erase(x < n ? PairKey{x, n} : PairKey{n, x});
      adj_[n].erase(x);
    }
    adj_.erase(x);
  }
  std::vector<Constraint> List() const {
    std::vector<Constraint> out;
    out.reserve(table_.size());
    for (const auto& [k, r] : table_) out.push_back({k.first, r, k.second});
    return out;
  }

 private:
  std::map<PairKey, Relation> table_;
  std::map<PlaceholderId, std::set<PlaceholderId>> adj_;
};

// Relation from x to the other endpoint of c.
Relation Outgoing(const Constraint& c, PlaceholderId x) {
  return c.lhs == x ? c.rel : Converse(c.rel);
}

}  // namespace

FlatSet FlattenBaseTypes(const ConstraintSet& cs) {
  FlatSet out{cs, {}};
  out.cs.NarrowCodomains();
  std::vector<PlaceholderId> fixed;
  std::vector<PlaceholderId> linked;
  for (PlaceholderId id : out.cs.Ids()) {
    const Placeholder& p = out.cs.Get(id);
    if (p.base == kNoPlaceholder) continue;
    std::set<PlaceholderId> seen = {id};
    for (PlaceholderId b = p.base; b != kNoPlaceholder;
         b = out.cs.Get(b).base) {
      if (!seen.insert(b).second) throw std::logic_error("cyclic base chain");
    }
    ElementInfo info;
    info.element = p.base;
    const Domain& cur = out.cs.Current(id);
    if (cur.count() == 1) {
      info.shape = static_cast<std::uint16_t>(cur._Find_first());
      fixed.push_back(id);
    }
    out.elements[id] = info;
    linked.push_back(id);
  }
  for (PlaceholderId id : linked) out.cs.Unlink(id);
  if (!fixed.empty()) out.cs.KillAll(fixed);
  return out;
}

ConstraintSet PruneStoragePlaceholders(const ConstraintSet& cs,
                                       const Template& t,
                                       const ElementMap& elements,
                                       std::vector<PlaceholderId>* pruned) {
  ConstraintSet out = cs;
  out.NarrowCodomains();
  const Domain refs = out.universe().ReferenceTypes();
  std::vector<PlaceholderId> kill;
  for (PlaceholderId id : out.Ids()) {
    const Placeholder& p = out.Get(id);
    if (p.kind != QualifierKind::kStorageLocation || p.owner == kNoNode) {
      continue;
    }
    if (p.owner >= t.size()) continue;
    PlaceholderId type = t.at(p.owner).slots.type;
    bool reference = true;
    if (type == kNoPlaceholder) {
      reference = true;
    } else if (out.Contains(type)) {
      reference = (out.Current(type) & refs).any();
    } else {
      reference = elements.count(type) > 0;
    }
    if (!reference) kill.push_back(id);
  }
  if (!kill.empty()) out.KillAll(kill);
  if (pruned) *pruned = kill;
  return out;
}

Relation Infer(Relation ri, Relation rj) { return Compose(Converse(ri), rj); }

ReachMap Propagate(const ConstraintSet& cs) {
  ReachMap out;
  for (PlaceholderId e : cs.Ids()) {
    if (cs.Get(e).level != Level::kExpression) continue;
    std::map<PlaceholderId, Relation> best;
    std::deque<PlaceholderId> work;
    auto update = [&](PlaceholderId n, Relation r) {
      auto it = best.find(n);
      if (it != best.end()) {
        Relation next = Conjoin(it->second, r);
        if (next == it->second) return;
        it->second = next;
      } else {
        best.emplace(n, r);
      }
      if (cs.Get(n).level == Level::kExpression) work.push_back(n);
    };
    for (const Constraint& c : cs.RelationsOf(e)) {
      update(c.lhs == e ? c.rhs : c.lhs, Outgoing(c, e));
    }
    while (!work.empty()) {
      PlaceholderId x = work.front();
      work.pop_front();
      Relation rx = best.at(x);
      for (const Constraint& c : cs.RelationsOf(x)) {
        PlaceholderId y = c.lhs == x ? c.rhs : c.lhs;
        if (y == e) continue;
        update(y, Compose(rx, Outgoing(c, x)));
      }
    }
    auto& row = out[e];
    for (const auto& [n, r] : best) {
      if (cs.Get(n).level == Level::kDeclaration) row[n] = r;
    }
  }
  return out;
}

ConstraintSet Reduce(const ConstraintSet& cs) {
  if (!cs.IsSolvable())
    throw std::invalid_argument("reducing an unsolvable set");
  ConstraintSet w = cs;
  w.NarrowCodomains();
  RelationTable table;
  for (const Constraint& c : w.Relations()) table.Put(c.lhs, c.rel, c.rhs);
  w.ReplaceRelations(table.List());
  w.NarrowCodomains();

  std::vector<PlaceholderId> order;
  for (PlaceholderId id : w.Ids()) {
    if (w.Get(id).level == Level::kExpression) order.push_back(id);
  }
  // Children are created after their parents, so leaves go first.
  std::reverse(order.begin(), order.end());
  for (PlaceholderId e : order) {
    std::vector<PlaceholderId> nbrs(table.Neighbours(e).begin(),
                                    table.Neighbours(e).end());
    std::vector<Relation> to_e;
    for (PlaceholderId n : nbrs) to_e.push_back(table.Get(n, e));
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
        table.Put(nbrs[i], Compose(to_e[i], Converse(to_e[j])), nbrs[j]);
      }
    }
    table.Erase(e);
    PlaceholderId dead[] = {e};
    w.KillAll(dead);
    w.ReplaceRelations(table.List());
    if (!w.IsSolvable()) throw std::logic_error("reduction lost solvability");
    w.NarrowCodomains();
  }
  return w;
}

ReducedConstraintSet ReduceTemplate(const ConstraintSet& cs,
                                    const Template& t) {
  FlatSet flat = FlattenBaseTypes(cs);
  ReducedConstraintSet out{cs, std::move(flat.elements), {}};
  ConstraintSet pruned =
      PruneStoragePlaceholders(flat.cs, t, out.elements, &out.pruned);
  out.cs = Reduce(pruned);
  return out;
}

SpaceSize SearchSpace(const ConstraintSet& cs) {
  SpaceSize s;
  for (PlaceholderId id : cs.Ids()) {
    const Placeholder& p = cs.Get(id);
    double l = std::log10(static_cast<double>(p.codomain.count()));
    std::size_t k = KindIndex(p.kind);
    s.all[k] += l;
    if (!cs.RelationsOf(id).empty()) s.related[k] += l;
  }
  return s;
}

SpaceSummary Summarize(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("empty sample");
  std::sort(values.begin(), values.end());
  SpaceSummary s;
  std::size_t n = values.size();
  s.median = n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2;
  s.min = values.front();
  s.max = values.back();
  return s;
}

nlohmann::json SpaceToJson(const SpaceSize& s) {
  nlohmann::json j;
  for (QualifierKind k : kAllKinds) {
    std::string name(KindName(k));
    j["log10_all"][name] = s.all[KindIndex(k)];
    j["log10_related"][name] = s.related[KindIndex(k)];
  }
  return j;
}

}  // namespace qualsmith
