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

// Qualifier universes and their partial orders.
//
// Every qualifier kind owns a finite universe of at most kMaxUniverse
// entries. Subsets of a universe are bitsets indexed by universe position.
// Each universe is a disjoint union of chains; elements of different chains
// are unrelated.

#ifndef QUALSMITH_QUALIFIER_H_
#define QUALSMITH_QUALIFIER_H_

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qualsmith {

enum class QualifierKind : std::uint8_t {
  kDataType,
  kStorageLocation,
  kVisibility,
  kMutability,
};

inline constexpr std::array<QualifierKind, 4> kAllKinds = {
    QualifierKind::kDataType, QualifierKind::kStorageLocation,
    QualifierKind::kVisibility, QualifierKind::kMutability};

std::string_view KindName(QualifierKind kind);
std::optional<QualifierKind> ParseKind(std::string_view name);
inline constexpr std::size_t KindIndex(QualifierKind kind) {
  return static_cast<std::size_t>(kind);
}

inline constexpr std::size_t kMaxUniverse = 128;
using Domain = std::bitset<kMaxUniverse>;

struct Qualifier {
  QualifierKind kind = QualifierKind::kDataType;
  std::uint16_t index = 0;

  friend bool operator==(const Qualifier&, const Qualifier&) = default;
  friend auto operator<=>(const Qualifier&, const Qualifier&) = default;
};

enum class TypeFamily : std::uint8_t {
  kBool,
  kAddress,
  kAddressPayable,
  kString,
  kInt,
  kUInt,
  kStruct,
  kContract,
  kArray,
  kMapping,
};

struct DataTypeInfo {
  TypeFamily family = TypeFamily::kBool;
  int width = 0;    // integers only
  int ordinal = 0;  // struct or contract number
  int length = 0;   // arrays: 0 for dynamic
  std::string name;

  bool IsInteger() const {
    return family == TypeFamily::kInt || family == TypeFamily::kUInt;
  }
  // Reference types need a data location when declared as locals.
  bool IsReference() const {
    return family == TypeFamily::kString || family == TypeFamily::kStruct ||
           family == TypeFamily::kArray || family == TypeFamily::kMapping;
  }
};

// Positions of the fixed universes.
enum class StorageLocation : std::uint8_t {
  kCalldata,
  kMemory,
  kStorageReference,
  kStoragePointer,
};
enum class Visibility : std::uint8_t {
  kPublic,
  kPrivate,
  kInternal,
  kExternal
};
enum class Mutability : std::uint8_t { kPure, kView, kPayable, kNonPayable };

std::string_view StorageKeyword(StorageLocation loc);
std::string_view VisibilityKeyword(Visibility vis);
std::string_view MutabilityKeyword(Mutability mut);  // empty for nonpayable
// pure=0, view=1, payable=nonpayable=2.
int MutabilityLevel(Mutability mut);

struct UniverseSpec {
  std::vector<int> integer_widths;  // empty means 8..256 step 8
  int struct_count = 0;
  int contract_count = 0;
  std::vector<int> static_array_lengths;
  bool dynamic_arrays = false;
  bool mapping = false;
};

// Read-only description of one ordered kind. Pairs list strict orderings.
struct QualifierLattice {
  QualifierKind kind;
  std::size_t size = 0;
  std::vector<std::pair<std::uint16_t, std::uint16_t>> ordered_pairs;
};

class QualifierUniverse {
 public:
  explicit QualifierUniverse(const UniverseSpec& spec);

  const UniverseSpec& spec() const { return spec_; }
  std::size_t Size(QualifierKind kind) const { return sizes_[KindIndex(kind)]; }
  Domain All(QualifierKind kind) const { return all_[KindIndex(kind)]; }
  std::string Name(Qualifier q) const;
  std::optional<Qualifier> Find(QualifierKind kind,
                                std::string_view name) const;

  // Throws std::invalid_argument when the kinds differ.
  bool Leq(Qualifier a, Qualifier b) const;
  // Elements >= x and elements <= x, x included.
  const Domain& Up(QualifierKind kind, std::size_t x) const {
    return up_[KindIndex(kind)][x];
  }
  const Domain& Down(QualifierKind kind, std::size_t x) const {
    return down_[KindIndex(kind)][x];
  }
  const Domain& Chain(QualifierKind kind, std::size_t x) const {
    return chain_[KindIndex(kind)][x];
  }
  std::size_t ChainId(QualifierKind kind, std::size_t x) const {
    return chain_id_[KindIndex(kind)][x];
  }
  // Elements between lo and hi, both included. Empty when unrelated.
  Domain Bounded(Qualifier lo, Qualifier hi) const;
  // Elements related to some member of d.
  Domain ChainsOf(QualifierKind kind, const Domain& d) const;
  QualifierLattice Lattice(QualifierKind kind) const;

  const DataTypeInfo& Type(std::size_t index) const { return types_[index]; }
  const std::vector<DataTypeInfo>& Types() const { return types_; }
  Domain TypesOf(TypeFamily family) const;
  Domain Integers() const;
  Domain ValueTypes() const;
  Domain ReferenceTypes() const;
  Domain Arrays() const { return TypesOf(TypeFamily::kArray); }
  // Types an expression may have outside index and mapping positions.
  Domain ScalarTypes() const;
  std::optional<std::uint16_t> IntType(bool is_signed, int width) const;
  std::optional<std::uint16_t> StructType(int ordinal) const;
  std::optional<std::uint16_t> ContractType(int ordinal) const;
  std::optional<std::uint16_t> ArrayType(int length) const;

  static Qualifier Of(StorageLocation v) {
    return {QualifierKind::kStorageLocation, static_cast<std::uint16_t>(v)};
  }
  static Qualifier Of(Visibility v) {
    return {QualifierKind::kVisibility, static_cast<std::uint16_t>(v)};
  }
  static Qualifier Of(Mutability v) {
    return {QualifierKind::kMutability, static_cast<std::uint16_t>(v)};
  }
  static Domain Set(std::initializer_list<StorageLocation> l);
  static Domain Set(std::initializer_list<Visibility> l);
  static Domain Set(std::initializer_list<Mutability> l);
  // Mutabilities whose level is at most / at least t.
  static Domain MutabilityAtMost(int t);
  static Domain MutabilityAtLeast(int t);

  std::vector<std::string> Names(QualifierKind kind, const Domain& d) const;

 private:
  void AddChainOrder(QualifierKind kind,
                     const std::vector<std::size_t>& ascending);
  void Finish();

  UniverseSpec spec_;
  std::vector<DataTypeInfo> types_;
  std::array<std::size_t, 4> sizes_{};
  std::array<Domain, 4> all_{};
  std::array<std::vector<Domain>, 4> up_;
  std::array<std::vector<Domain>, 4> down_;
  std::array<std::vector<Domain>, 4> chain_;
  std::array<std::vector<std::size_t>, 4> chain_id_;
};

// Literal forms the generator emits.
enum class LiteralKind : std::uint8_t { kBool, kInteger, kAddress, kString };

struct LiteralValue {
  LiteralKind kind = LiteralKind::kInteger;
  bool negative = false;
  std::uint64_t magnitude = 0;  // integers
  std::string text;             // bools, addresses, strings
};

enum class Signedness : std::uint8_t { kSigned, kUnsigned };

// Least and greatest data types of a literal within one integer chain, or of
// a non-integer literal. nullopt when no type of that chain can hold it.
std::optional<std::pair<Qualifier, Qualifier>> LiteralBounds(
    const QualifierUniverse& u, const LiteralValue& lit, Signedness sign);
// Union over both integer chains for integer literals.
Domain LiteralDomain(const QualifierUniverse& u, const LiteralValue& lit);

// Declaration and expression positions that carry placeholders.
enum class Placement : std::uint8_t {
  kContractMember,  // state variable
  kFunctionDecl,    // the function itself (V and M)
  kFunctionBody,    // local variable
  kFunctionParameter,
  kFunctionReturn,
  kModifierParameter,
  kEventParameter,
  kErrorParameter,
  kStructMember,
  kExpression,
};

// Admissible qualifiers of a kind at a placement. Empty when the placement
// does not carry that kind.
Domain CodomainOf(const QualifierUniverse& u, QualifierKind kind,
                  Placement placement);

}  // namespace qualsmith

#endif  // QUALSMITH_QUALIFIER_H_
