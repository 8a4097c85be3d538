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

#include "qualsmith/qualifier.h"

#include <algorithm>
#include <stdexcept>

namespace qualsmith {

namespace {

constexpr std::array<std::string_view, 4> kStorageNames = {
    "calldata", "memory", "storage reference", "storage pointer"};
constexpr std::array<std::string_view, 4> kVisibilityNames = {
    "public", "private", "internal", "external"};
constexpr std::array<std::string_view, 4> kMutabilityNames = {
    "pure", "view", "payable", "nonpayable"};

std::vector<int> DefaultWidths() {
  std::vector<int> w;
  for (int i = 8; i <= 256; i += 8) w.push_back(i);
  return w;
}

}  // namespace

std::string_view KindName(QualifierKind kind) {
  switch (kind) {
    case QualifierKind::kDataType:
      return "T";
    case QualifierKind::kStorageLocation:
      return "S";
    case QualifierKind::kVisibility:
      return "V";
    case QualifierKind::kMutability:
      return "M";
  }
  return "?";
}

std::optional<QualifierKind> ParseKind(std::string_view name) {
  for (QualifierKind k : kAllKinds) {
    if (KindName(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view StorageKeyword(StorageLocation loc) {
  switch (loc) {
    case StorageLocation::kCalldata:
      return "calldata";
    case StorageLocation::kMemory:
      return "memory";
    case StorageLocation::kStorageReference:
    case StorageLocation::kStoragePointer:
      return "storage";
  }
  return "";
}

std::string_view VisibilityKeyword(Visibility vis) {
  return kVisibilityNames[static_cast<std::size_t>(vis)];
}

std::string_view MutabilityKeyword(Mutability mut) {
  if (mut == Mutability::kNonPayable) return "";
  return kMutabilityNames[static_cast<std::size_t>(mut)];
}

int MutabilityLevel(Mutability mut) {
  switch (mut) {
    case Mutability::kPure:
      return 0;
    case Mutability::kView:
      return 1;
    default:
      return 2;
  }
}

QualifierUniverse::QualifierUniverse(const UniverseSpec& spec) : spec_(spec) {
  std::vector<int> widths =
      spec.integer_widths.empty() ? DefaultWidths() : spec.integer_widths;
  std::sort(widths.begin(), widths.end());
  widths.erase(std::unique(widths.begin(), widths.end()), widths.end());
  for (int w : widths) {
    if (w < 8 || w > 256 || w % 8 != 0) {
      throw std::invalid_argument(
          "integer width must be a multiple of 8 in "
          "[8, 256]");
    }
  }
  spec_.integer_widths = widths;
  std::vector<int> lengths = spec.static_array_lengths;
  std::sort(lengths.begin(), lengths.end());
  lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
  for (int n : lengths) {
    if (n < 1) throw std::invalid_argument("static array length must be >= 1");
  }
  spec_.static_array_lengths = lengths;

  types_.push_back({TypeFamily::kBool, 0, 0, 0, "bool"});
  types_.push_back({TypeFamily::kAddressPayable, 0, 0, 0, "address payable"});
  types_.push_back({TypeFamily::kAddress, 0, 0, 0, "address"});
  types_.push_back({TypeFamily::kString, 0, 0, 0, "string"});
  for (int w : widths) {
    types_.push_back({TypeFamily::kInt, w, 0, 0, "int" + std::to_string(w)});
  }
  for (int w : widths) {
    types_.push_back({TypeFamily::kUInt, w, 0, 0, "uint" + std::to_string(w)});
  }
  for (int i = 0; i < spec.struct_count; ++i) {
    types_.push_back({TypeFamily::kStruct, 0, i, 0, "S" + std::to_string(i)});
  }
  for (int i = 0; i < spec.contract_count; ++i) {
    types_.push_back({TypeFamily::kContract, 0, i, 0, "C" + std::to_string(i)});
  }
  for (int n : lengths) {
    types_.push_back(
        {TypeFamily::kArray, 0, 0, n, "[" + std::to_string(n) + "]"});
  }
  if (spec.dynamic_arrays) {
    types_.push_back({TypeFamily::kArray, 0, 0, 0, "[]"});
  }
  if (spec.mapping)
    types_.push_back({TypeFamily::kMapping, 0, 0, 0, "mapping"});
  if (types_.size() > kMaxUniverse) {
    throw std::invalid_argument("data type universe exceeds " +
                                std::to_string(kMaxUniverse) + " entries");
  }

  sizes_[KindIndex(QualifierKind::kDataType)] = types_.size();
  sizes_[KindIndex(QualifierKind::kStorageLocation)] = 4;
  sizes_[KindIndex(QualifierKind::kVisibility)] = 4;
  sizes_[KindIndex(QualifierKind::kMutability)] = 4;
  for (QualifierKind k : kAllKinds) {
    std::size_t n = Size(k);
    auto& up = up_[KindIndex(k)];
    auto& down = down_[KindIndex(k)];
    up.assign(n, Domain());
    down.assign(n, Domain());
    for (std::size_t i = 0; i < n; ++i) {
      up[i].set(i);
      down[i].set(i);
      all_[KindIndex(k)].set(i);
    }
  }

  std::vector<std::size_t> ints, uints;
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (types_[i].family == TypeFamily::kInt) ints.push_back(i);
    if (types_[i].family == TypeFamily::kUInt) uints.push_back(i);
  }
  AddChainOrder(QualifierKind::kDataType, ints);
  AddChainOrder(QualifierKind::kDataType, uints);
  AddChainOrder(QualifierKind::kDataType, {1, 2});
  AddChainOrder(QualifierKind::kStorageLocation, {0, 1, 2, 3});
  Finish();
}

void QualifierUniverse::AddChainOrder(QualifierKind kind,
                                      const std::vector<std::size_t>& asc) {
  auto& up = up_[KindIndex(kind)];
  auto& down = down_[KindIndex(kind)];
  for (std::size_t i = 0; i < asc.size(); ++i) {
    for (std::size_t j = i; j < asc.size(); ++j) {
      up[asc[i]].set(asc[j]);
      down[asc[j]].set(asc[i]);
    }
  }
}

void QualifierUniverse::Finish() {
  for (QualifierKind k : kAllKinds) {
    std::size_t n = Size(k);
    auto& chain = chain_[KindIndex(k)];
    auto& ids = chain_id_[KindIndex(k)];
    chain.assign(n, Domain());
    ids.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      chain[i] = Up(k, i) | Down(k, i);
      // The least element of a chain names it.
      std::size_t least = i;
      for (std::size_t j = 0; j < n; ++j) {
        if (chain[i].test(j)) {
          least = j;
          break;
        }
      }
      ids[i] = least;
    }
  }
}

std::string QualifierUniverse::Name(Qualifier q) const {
  if (q.index >= Size(q.kind)) {
    throw std::out_of_range("qualifier index out of range");
  }
  switch (q.kind) {
    case QualifierKind::kDataType:
      return types_[q.index].name;
    case QualifierKind::kStorageLocation:
      return std::string(kStorageNames[q.index]);
    case QualifierKind::kVisibility:
      return std::string(kVisibilityNames[q.index]);
    case QualifierKind::kMutability:
      return std::string(kMutabilityNames[q.index]);
  }
  return "";
}

std::optional<Qualifier> QualifierUniverse::Find(QualifierKind kind,
                                                 std::string_view name) const {
  for (std::size_t i = 0; i < Size(kind); ++i) {
    Qualifier q{kind, static_cast<std::uint16_t>(i)};
    if (Name(q) == name) return q;
  }
  return std::nullopt;
}

bool QualifierUniverse::Leq(Qualifier a, Qualifier b) const {
  if (a.kind != b.kind) {
    throw std::invalid_argument("comparing qualifiers of different kinds");
  }
  if (a.index >= Size(a.kind) || b.index >= Size(b.kind)) {
    throw std::out_of_range("qualifier index out of range");
  }
  return Up(a.kind, a.index).test(b.index);
}

Domain QualifierUniverse::Bounded(Qualifier lo, Qualifier hi) const {
  if (lo.kind != hi.kind) {
    throw std::invalid_argument("bounds of different kinds");
  }
  return Up(lo.kind, lo.index) & Down(hi.kind, hi.index);
}

Domain QualifierUniverse::ChainsOf(QualifierKind kind, const Domain& d) const {
  Domain out;
  for (std::size_t i = 0; i < Size(kind); ++i) {
    if (d.test(i)) out |= Chain(kind, i);
  }
  return out;
}

QualifierLattice QualifierUniverse::Lattice(QualifierKind kind) const {
  QualifierLattice lat{kind, Size(kind), {}};
  for (std::size_t i = 0; i < Size(kind); ++i) {
    for (std::size_t j = 0; j < Size(kind); ++j) {
      if (i != j && Up(kind, i).test(j)) {
        lat.ordered_pairs.emplace_back(static_cast<std::uint16_t>(i),
                                       static_cast<std::uint16_t>(j));
      }
    }
  }
  return lat;
}

Domain QualifierUniverse::TypesOf(TypeFamily family) const {
  Domain d;
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (types_[i].family == family) d.set(i);
  }
  return d;
}

Domain QualifierUniverse::Integers() const {
  return TypesOf(TypeFamily::kInt) | TypesOf(TypeFamily::kUInt);
}

Domain QualifierUniverse::ValueTypes() const {
  Domain d;
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (!types_[i].IsReference()) d.set(i);
  }
  return d;
}

Domain QualifierUniverse::ReferenceTypes() const {
  return All(QualifierKind::kDataType) & ~ValueTypes();
}

Domain QualifierUniverse::ScalarTypes() const {
  return All(QualifierKind::kDataType) & ~Arrays() &
         ~TypesOf(TypeFamily::kMapping);
}

std::optional<std::uint16_t> QualifierUniverse::IntType(bool is_signed,
                                                        int width) const {
  TypeFamily f = is_signed ? TypeFamily::kInt : TypeFamily::kUInt;
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (types_[i].family == f && types_[i].width == width) {
      return static_cast<std::uint16_t>(i);
    }
  }
  return std::nullopt;
}

std::optional<std::uint16_t> QualifierUniverse::StructType(int ordinal) const {
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (types_[i].family == TypeFamily::kStruct &&
        types_[i].ordinal == ordinal) {
      return static_cast<std::uint16_t>(i);
    }
  }
  return std::nullopt;
}

std::optional<std::uint16_t> QualifierUniverse::ContractType(
    int ordinal) const {
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (types_[i].family == TypeFamily::kContract &&
        types_[i].ordinal == ordinal) {
      return static_cast<std::uint16_t>(i);
    }
  }
  return std::nullopt;
}

std::optional<std::uint16_t> QualifierUniverse::ArrayType(int length) const {
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (types_[i].family == TypeFamily::kArray && types_[i].length == length) {
      return static_cast<std::uint16_t>(i);
    }
  }
  return std::nullopt;
}

Domain QualifierUniverse::Set(std::initializer_list<StorageLocation> l) {
  Domain d;
  for (auto v : l) d.set(static_cast<std::size_t>(v));
  return d;
}

Domain QualifierUniverse::Set(std::initializer_list<Visibility> l) {
  Domain d;
  for (auto v : l) d.set(static_cast<std::size_t>(v));
  return d;
}

Domain QualifierUniverse::Set(std::initializer_list<Mutability> l) {
  Domain d;
  for (auto v : l) d.set(static_cast<std::size_t>(v));
  return d;
}

Domain QualifierUniverse::MutabilityAtMost(int t) {
  Domain d;
  for (std::size_t i = 0; i < 4; ++i) {
    if (MutabilityLevel(static_cast<Mutability>(i)) <= t) d.set(i);
  }
  return d;
}

Domain QualifierUniverse::MutabilityAtLeast(int t) {
  Domain d;
  for (std::size_t i = 0; i < 4; ++i) {
    if (MutabilityLevel(static_cast<Mutability>(i)) >= t) d.set(i);
  }
  return d;
}

std::vector<std::string> QualifierUniverse::Names(QualifierKind kind,
                                                  const Domain& d) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < Size(kind); ++i) {
    if (d.test(i)) out.push_back(Name({kind, static_cast<std::uint16_t>(i)}));
  }
  return out;
}

std::optional<std::pair<Qualifier, Qualifier>> LiteralBounds(
    const QualifierUniverse& u, const LiteralValue& lit, Signedness sign) {
  const QualifierKind T = QualifierKind::kDataType;
  auto single =
      [&](TypeFamily f) -> std::optional<std::pair<Qualifier, Qualifier>> {
    Domain d = u.TypesOf(f);
    if (d.none()) return std::nullopt;
    for (std::size_t i = 0; i < u.Size(T); ++i) {
      if (d.test(i)) {
        Qualifier q{T, static_cast<std::uint16_t>(i)};
        return std::make_pair(q, q);
      }
    }
    return std::nullopt;
  };
  switch (lit.kind) {
    case LiteralKind::kBool:
      return single(TypeFamily::kBool);
    case LiteralKind::kString:
      return single(TypeFamily::kString);
    case LiteralKind::kAddress:
      // Address literals have type address and do not convert to
      // address payable implicitly.
      return single(TypeFamily::kAddress);
    case LiteralKind::kInteger:
      break;
  }
  bool is_signed = sign == Signedness::kSigned;
  if (lit.negative && !is_signed) return std::nullopt;
  std::optional<std::uint16_t> least, greatest;
  for (int w : u.spec().integer_widths) {
    bool fits;
    if (w >= 72) {
      fits = true;  // magnitude is below 2^64
    } else if (is_signed) {
      // -2^(w-1) <= v <= 2^(w-1) - 1
      std::uint64_t half = std::uint64_t{1} << (w - 1);
      fits = lit.negative ? lit.magnitude <= half : lit.magnitude < half;
    } else {
      fits = w == 64 || lit.magnitude < (std::uint64_t{1} << w);
    }
    if (!fits) continue;
    auto idx = u.IntType(is_signed, w);
    if (!least) least = idx;
    greatest = idx;
  }
  if (!least) return std::nullopt;
  return std::make_pair(Qualifier{T, *least}, Qualifier{T, *greatest});
}

Domain LiteralDomain(const QualifierUniverse& u, const LiteralValue& lit) {
  Domain d;
  for (Signedness s : {Signedness::kSigned, Signedness::kUnsigned}) {
    if (auto b = LiteralBounds(u, lit, s)) d |= u.Bounded(b->first, b->second);
    if (lit.kind != LiteralKind::kInteger) break;
  }
  return d;
}

Domain CodomainOf(const QualifierUniverse& u, QualifierKind kind, Placement p) {
  using SL = StorageLocation;
  using V = Visibility;
  const Domain mapping = u.TypesOf(TypeFamily::kMapping);
  switch (kind) {
    case QualifierKind::kDataType:
      switch (p) {
        case Placement::kFunctionDecl:
          return {};
        case Placement::kContractMember:
        case Placement::kExpression:
          return u.All(kind);
        case Placement::kStructMember:
          return u.ValueTypes();
        case Placement::kEventParameter:
        case Placement::kErrorParameter:
          return u.All(kind) & ~mapping & ~u.Arrays();
        default:
          return u.All(kind) & ~mapping;
      }
    case QualifierKind::kStorageLocation:
      switch (p) {
        case Placement::kContractMember:
          return QualifierUniverse::Set({SL::kStorageReference});
        case Placement::kFunctionBody:
        case Placement::kFunctionParameter:
        case Placement::kFunctionReturn:
          return QualifierUniverse::Set({SL::kCalldata, SL::kMemory});
        case Placement::kModifierParameter:
          return QualifierUniverse::Set({SL::kMemory});
        case Placement::kExpression:
          return QualifierUniverse::Set(
              {SL::kCalldata, SL::kMemory, SL::kStorageReference});
        default:
          return {};
      }
    case QualifierKind::kVisibility:
      if (p == Placement::kFunctionDecl) return u.All(kind);
      if (p == Placement::kContractMember) {
        return QualifierUniverse::Set({V::kPublic, V::kPrivate, V::kInternal});
      }
      return {};
    case QualifierKind::kMutability:
      if (p == Placement::kFunctionDecl) return u.All(kind);
      return {};
  }
  return {};
}

}  // namespace qualsmith
