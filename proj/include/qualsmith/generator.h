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

// Random template generation.
//
// The generator builds a program skeleton, then fills function and modifier
// bodies statement by statement. Every production records its typing rule as
// codomain restrictions and relations; identifiers are resolved by the
// qualifier-constrained use procedure, which reuses a visible declaration
// when the tentative constraint set stays solvable and declares a fresh one
// otherwise. A statement whose generation fails is rolled back.

#ifndef QUALSMITH_GENERATOR_H_
#define QUALSMITH_GENERATOR_H_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qualsmith/constraint_set.h"
#include "qualsmith/qualifier.h"
#include "qualsmith/rng.h"
#include "qualsmith/template.h"

namespace qualsmith {

enum class Production : std::uint8_t {
  kLiteral,
  kIdentifier,
  kAssign,
  kCompare,
  kArith,
  kShift,
  kLogic,
  kNot,
  kNegate,
  kBitNot,
  kIncDec,
  kNew,
  kConditional,
  kCall,
  kExternalCall,
  kGetter,
  kStructConstructor,
  kIndex,
  kMappingIndex,
  kMember,
};
inline constexpr std::size_t kProductionCount = 20;
std::string_view ProductionName(Production p);
std::optional<Production> ParseProduction(std::string_view s);

enum class StatementKind : std::uint8_t {
  kExpr,
  kVarDecl,
  kIf,
  kFor,
  kWhile,
  kDoWhile,
  kEmit,
  kRevert,
  kReturn,
};
inline constexpr std::size_t kStatementCount = 9;
std::string_view StatementKindName(StatementKind k);

// Relation between an identifier's storage location and its declaration's.
enum class IdentStorageRule : std::uint8_t {
  kSame,  // S(x) == S(decl)
  kSub,   // S(x) <: S(decl)
};

struct GeneratorConfig {
  std::uint64_t seed = 0;
  int contracts = 2;
  int functions_per_contract = 2;
  int max_functions_per_contract = 4;
  int state_variables = 2;
  int structs = 1;
  int events = 1;
  int errors = 1;
  int modifiers = 1;
  int max_struct_members = 2;
  int max_parameters = 2;
  int statements_per_body = 4;
  int max_statement_depth = 2;
  int max_expression_depth = 3;
  int max_expressions = 80;
  double array_probability = 0.15;
  double mapping_probability = 0.15;
  double return_probability = 0.7;
  double modifier_use_probability = 0.3;
  std::vector<int> integer_widths;  // empty: 8..256 step 8
  std::vector<int> static_array_lengths = {2, 3};
  bool dynamic_arrays = true;
  bool strings = true;
  bool addresses = true;
  bool contract_values = true;
  IdentStorageRule ident_storage = IdentStorageRule::kSame;
  std::array<double, kProductionCount> production_weights;
  std::array<double, kStatementCount> statement_weights;

  GeneratorConfig();
  UniverseSpec Universe() const;
  // Throws std::invalid_argument on out-of-range settings.
  void Validate() const;
  nlohmann::json ToJson() const;
  static GeneratorConfig FromJson(const nlohmann::json& j);
};

// Decision points of generation. The default implementation draws from the
// generator's random stream; tests substitute scripted choices.
class Chooser {
 public:
  virtual ~Chooser() = default;
  virtual Production ChooseProduction(const std::vector<Production>& viable,
                                      const std::vector<double>& weights,
                                      Rng& rng);
  virtual std::string ChooseOperator(Production p,
                                     const std::vector<std::string>& ops,
                                     Rng& rng);
  // Index into `passing`, or passing.size() to declare a fresh variable.
  virtual std::size_t ChooseCandidate(const std::vector<NodeId>& passing,
                                      Rng& rng);
  virtual void OnFreshDeclaration(NodeId /*decl*/) {}
  virtual std::size_t ChooseScope(const std::vector<ScopeId>& scopes, Rng& rng);
  // kinds is non-empty; integers lie in [lo, hi].
  virtual LiteralValue ChooseLiteral(const std::vector<LiteralKind>& kinds,
                                     int lo, int hi, Rng& rng);
};

struct GenerationStats {
  int statements = 0;
  int rollbacks = 0;
  int fresh_declarations = 0;
  int expressions = 0;
};

struct GeneratedTemplate {
  std::shared_ptr<const QualifierUniverse> universe;
  Template tpl;
  Context ctx;
  ConstraintSet cs;
  GeneratorConfig config;
  GenerationStats stats;

  std::string Id() const { return tpl.Fingerprint(); }
};

// Thrown when generation breaks one of its own guarantees.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

GeneratedTemplate Generate(const GeneratorConfig& config,
                           Chooser* chooser = nullptr);

// One contract with one parameterless function whose body is a single
// expression statement. Used to replay scripted derivations.
GeneratedTemplate GenerateExpressionStatement(const GeneratorConfig& config,
                                              Chooser& chooser);

}  // namespace qualsmith

#endif  // QUALSMITH_GENERATOR_H_
