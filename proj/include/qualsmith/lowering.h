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

// Lowering: enumerate substitutions of a reduced constraint set and render
// each as Solidity source.

#ifndef QUALSMITH_LOWERING_H_
#define QUALSMITH_LOWERING_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "qualsmith/generator.h"
#include "qualsmith/reduction.h"

namespace qualsmith {

inline constexpr const char* kPragma = "pragma solidity ^0.8.20;";

struct LoweringOptions {
  std::size_t gen_limit = 1;  // K
  // Keep enumerating past K substitutions until K distinct programs exist
  // or the solution set runs out.
  bool exhaust = false;
  bool smtchecker = false;
  std::uint64_t seed = 0;
};

struct RenderedProgram {
  std::string source;
  std::string hash;  // SHA-256 of source
  std::uint64_t seed = 0;
  std::string config_digest;
  std::string template_id;
  std::size_t index = 0;
  Substitution substitution;

  nlohmann::json Provenance(const QualifierUniverse& u) const;
};

// At most k substitutions over every live placeholder of `reduced`; at least
// one when it is solvable.
std::vector<Substitution> Enumerate(const ConstraintSet& reduced, std::size_t k,
                                    std::uint64_t seed);

// Source text only. Throws std::logic_error if a rendered placeholder has
// no value.
std::string RenderSource(const GeneratedTemplate& g,
                         const ReducedConstraintSet& r, const Substitution& sub,
                         bool smtchecker);

RenderedProgram Render(const GeneratedTemplate& g,
                       const ReducedConstraintSet& r, const Substitution& sub,
                       bool smtchecker);

struct LoweringResult {
  ReducedConstraintSet reduced;
  std::vector<RenderedProgram> programs;
  std::size_t substitutions = 0;  // enumerated
  std::size_t collapsed = 0;      // dropped as duplicate renderings
};

LoweringResult LowerTemplate(const GeneratedTemplate& g,
                             const LoweringOptions& opts);

// Digest of a generator configuration, used in provenance.
std::string ConfigDigest(const GeneratorConfig& c);

}  // namespace qualsmith

#endif  // QUALSMITH_LOWERING_H_
