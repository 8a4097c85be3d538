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

// Constraint reduction: removes expression-level placeholders so that
// enumeration ranges over declaration-level ones only.
//
// Reduce eliminates one expression-level placeholder at a time. Its
// neighbours receive the pairwise relations implied through it, merged with
// existing ones by conjunction, and all domains are kept arc-consistent.
// On chain-union lattices with codomains convex on every chain this is an
// exact projection.

#ifndef QUALSMITH_REDUCTION_H_
#define QUALSMITH_REDUCTION_H_

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "json.hpp"
#include "qualsmith/constraint_set.h"
#include "qualsmith/template.h"

namespace qualsmith {

// Structural link from an array-shape placeholder to its element type.
struct ElementInfo {
  std::optional<std::uint16_t> shape;  // set when the shape was fixed
  PlaceholderId element = kNoPlaceholder;
};
using ElementMap = std::map<PlaceholderId, ElementInfo>;

struct FlatSet {
  ConstraintSet cs;
  ElementMap elements;
};

// Unlinks every base placeholder, records the link and removes shape
// placeholders whose shape is determined.
FlatSet FlattenBaseTypes(const ConstraintSet& cs);

// Removes storage placeholders whose owner's data type cannot be a
// reference type. Returns the removed ids through `pruned` when given.
ConstraintSet PruneStoragePlaceholders(
    const ConstraintSet& cs, const Template& t, const ElementMap& elements,
    std::vector<PlaceholderId>* pruned = nullptr);

// For each expression-level placeholder, the relation implied along paths
// through expression-level placeholders to each declaration-level one.
using ReachMap = std::map<PlaceholderId, std::map<PlaceholderId, Relation>>;
ReachMap Propagate(const ConstraintSet& cs);

// The pair relation implied by e ri di and e rj dj.
Relation Infer(Relation ri, Relation rj);

// Requires a solvable set. The result holds only declaration-level
// placeholders, one relation per pair (lhs < rhs, sorted) and arc-consistent
// codomains. Ids are preserved.
ConstraintSet Reduce(const ConstraintSet& cs);

struct ReducedConstraintSet {
  ConstraintSet cs;
  ElementMap elements;
  std::vector<PlaceholderId> pruned;
};

// Flatten, prune, reduce.
ReducedConstraintSet ReduceTemplate(const ConstraintSet& cs, const Template& t);

// log10 of the raw cross-product size per kind.
struct SpaceSize {
  std::array<double, 4> all{};      // every live placeholder
  std::array<double, 4> related{};  // placeholders in some relation
};
SpaceSize SearchSpace(const ConstraintSet& cs);

struct SpaceSummary {
  double median = 0;
  double min = 0;
  double max = 0;
};
// Throws std::invalid_argument on an empty sample.
SpaceSummary Summarize(std::vector<double> values);
nlohmann::json SpaceToJson(const SpaceSize& s);

}  // namespace qualsmith

#endif  // QUALSMITH_REDUCTION_H_
