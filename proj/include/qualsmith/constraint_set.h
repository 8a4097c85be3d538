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

// Placeholders, relations between them and the finite-domain solver.
//
// A ConstraintSet keeps, next to the declared codomain of every placeholder,
// an arc-consistent domain that is updated incrementally as relations are
// pushed and codomains narrowed. Because every universe is a union of
// chains, a non-empty arc-consistent state always extends to a solution, so
// solvability checks cost one propagation. Enumeration uses
// propagate-and-branch search.

#ifndef QUALSMITH_CONSTRAINT_SET_H_
#define QUALSMITH_CONSTRAINT_SET_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qualsmith/qualifier.h"

namespace qualsmith {

using PlaceholderId = std::uint32_t;
using NodeId = std::uint32_t;
inline constexpr PlaceholderId kNoPlaceholder = UINT32_MAX;
inline constexpr NodeId kNoNode = UINT32_MAX;

enum class Level : std::uint8_t { kExpression, kDeclaration };

// x Same y: equal. x Sub y: x <= y. x Super y: x >= y.
// x Comparable y: x and y lie on one chain.
enum class Relation : std::uint8_t { kSame, kSub, kSuper, kComparable };

std::string_view RelationSymbol(Relation r);
std::optional<Relation> ParseRelation(std::string_view s);
Relation Converse(Relation r);
// x a y and y b z imply x Compose(a, b) z.
Relation Compose(Relation a, Relation b);
// x a y and x b y together are equivalent to x Conjoin(a, b) y.
Relation Conjoin(Relation a, Relation b);
// The strict order Sub < Same < Super; Comparable is unordered.
bool Precedes(Relation a, Relation b);
bool Holds(const QualifierUniverse& u, Qualifier a, Relation r, Qualifier b);

struct Placeholder {
  PlaceholderId id = kNoPlaceholder;
  QualifierKind kind = QualifierKind::kDataType;
  Level level = Level::kExpression;
  NodeId owner = kNoNode;
  Domain codomain;
  PlaceholderId base = kNoPlaceholder;     // element type of an array shape
  PlaceholderId base_of = kNoPlaceholder;  // inverse link
  bool alive = true;
};

struct Constraint {
  PlaceholderId lhs = kNoPlaceholder;
  Relation rel = Relation::kSame;
  PlaceholderId rhs = kNoPlaceholder;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

struct CodomainRestriction {
  PlaceholderId target = kNoPlaceholder;
  Domain codomain;
};

using Substitution = std::map<PlaceholderId, Qualifier>;

class ConstraintSet {
 public:
  explicit ConstraintSet(std::shared_ptr<const QualifierUniverse> universe);

  const QualifierUniverse& universe() const { return *universe_; }
  std::shared_ptr<const QualifierUniverse> universe_ptr() const {
    return universe_;
  }

  // Throws std::invalid_argument on an empty codomain or one that reaches
  // outside the universe.
  PlaceholderId AddPlaceholder(QualifierKind kind, Level level, NodeId owner,
                               const Domain& codomain);
  // Adds the element-type placeholder of an array-shape placeholder.
  PlaceholderId AddBase(PlaceholderId parent, const Domain& codomain);

  // Throws std::invalid_argument for unknown ids, lhs == rhs or mismatched
  // kinds. Also relates the bases of both sides by Same when both have one.
  // Does not check solvability.
  void PushRelation(const Constraint& c);
  // Intersects the codomain. Returns false and leaves the set untouched
  // when the intersection is empty.
  bool RestrictCodomain(const CodomainRestriction& r);

  bool IsSolvable() const { return consistent_; }
  // Solvability after tentatively adding relations and restrictions.
  bool IsSolvableWith(std::span<const Constraint> relations,
                      std::span<const CodomainRestriction> restrictions) const;
  // Independent check by search; agrees with IsSolvable.
  bool IsSolvableBySearch() const;

  // Distinct assignments of the placeholders in `over` that extend to a
  // full solution. Values of each placeholder are tried in an order
  // shuffled by `seed`; the sequence is a deterministic function of the set
  // and the seed. Without a limit the whole projected solution set is
  // returned.
  std::vector<Substitution> Solutions(std::span<const PlaceholderId> over,
                                      std::optional<std::size_t> limit,
                                      std::uint64_t seed) const;

  // Removes a placeholder and every relation it takes part in.
  void Kill(PlaceholderId id);
  void KillAll(std::span<const PlaceholderId> ids);
  // Replaces the relation list wholesale; bases are not followed.
  void ReplaceRelations(std::vector<Constraint> relations);
  // Clears base links of a placeholder and its base.
  void Unlink(PlaceholderId id);
  void SetOwner(PlaceholderId id, NodeId owner);

  bool Contains(PlaceholderId id) const {
    return id < placeholders_.size() && placeholders_[id].alive;
  }
  const Placeholder& Get(PlaceholderId id) const;
  const Domain& Codomain(PlaceholderId id) const { return Get(id).codomain; }
  // Arc-consistent narrowing of the codomain.
  const Domain& Current(PlaceholderId id) const;
  std::vector<PlaceholderId> Ids() const;
  std::vector<PlaceholderId> Ids(QualifierKind kind, Level level) const;
  std::size_t IdBound() const { return placeholders_.size(); }
  const std::vector<Constraint>& Relations() const { return relations_; }
  std::vector<Constraint> RelationsOf(PlaceholderId id) const;
  std::size_t LiveCount() const;

  // Replaces each codomain by its arc-consistent narrowing.
  void NarrowCodomains();

  nlohmann::json Dump() const;

 private:
  bool Propagate(std::vector<Domain>& dom, std::vector<PlaceholderId> queue,
                 std::span<const Constraint> extra) const;
  bool Revise(std::vector<Domain>& dom, const Constraint& c,
              bool revise_rhs) const;
  Domain Support(QualifierKind kind, const Domain& from, Relation r) const;
  void Recompute();
  bool SearchFrom(std::vector<Domain>& dom,
                  const std::vector<PlaceholderId>& order,
                  std::size_t depth) const;
  void CheckId(PlaceholderId id) const;

  std::shared_ptr<const QualifierUniverse> universe_;
  std::vector<Placeholder> placeholders_;
  std::vector<Constraint> relations_;
  std::vector<std::vector<std::uint32_t>> incident_;
  std::vector<Domain> current_;
  bool consistent_ = true;
};

}  // namespace qualsmith

#endif  // QUALSMITH_CONSTRAINT_SET_H_
