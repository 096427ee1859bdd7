// Copyright 2026 The SafeIR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SAFEIR_IR_ABI_HPP_
#define SAFEIR_IR_ABI_HPP_

#include <cstdint>
#include <optional>
#include <string_view>

#include "safeir/ir/type_shape.hpp"

namespace safeir::ir {

/// Pointer classification attached to every IR value.
///
/// kSafe: validity guaranteed by the static type system once established.
/// kRaw: no static guarantees; every dereference stays checked.
/// kNoPtr: compiler-generated address (stack slot handle, function address)
///         that user code cannot manipulate; treated as always safe.
/// kNonPtr: the value is not a pointer at all.
enum class PtrKind : std::uint8_t { kSafe, kRaw, kNoPtr, kNonPtr };

std::string_view to_string(PtrKind kind);
std::optional<PtrKind> parse_ptr_kind(std::string_view text);

/// Dataflow meet. RAW absorbs everything; SAFE meets NOPTR at SAFE; NONPTR
/// only meets NONPTR. Mixing pointer and non-pointer kinds yields RAW.
PtrKind meet(PtrKind a, PtrKind b);

inline bool is_pointer_kind(PtrKind k) { return k != PtrKind::kNonPtr; }

struct AbiClass {
  enum class Tag : std::uint8_t { kUninhabited, kScalar, kScalarPair, kAggregate };

  Tag tag = Tag::kAggregate;
  PtrKind first = PtrKind::kNonPtr;
  PtrKind second = PtrKind::kNonPtr;

  static AbiClass Uninhabited() { return {Tag::kUninhabited}; }
  static AbiClass Scalar(PtrKind k) { return {Tag::kScalar, k}; }
  static AbiClass ScalarPair(PtrKind a, PtrKind b) {
    return {Tag::kScalarPair, a, b};
  }
  static AbiClass Aggregate() { return {Tag::kAggregate}; }

  friend bool operator==(const AbiClass&, const AbiClass&) = default;
};

/// Classifies how a shape is lowered to machine values and which pointer
/// kind the lowered value carries.
///
///  * zero-sized shapes are Uninhabited;
///  * a thin pointer, or a struct nesting exactly one non-zero-sized field,
///    is a Scalar carrying the leaf's kind;
///  * a union of scalar-lowered fields is Scalar(SAFE) only if every field
///    is a safe pointer, Scalar(RAW) if any field is pointer-like, and a
///    non-pointer Scalar otherwise;
///  * slices are ScalarPair(RAW, NONPTR), trait objects ScalarPair(RAW, SAFE);
///  * function pointers are Scalar(NOPTR);
///  * everything else is an Aggregate.
///
/// Throws ValidationError on a malformed shape.
AbiClass classify_abi(const TypeShape& shape);

/// Kind carried by a value of this shape: the scalar kind for Scalar-class
/// shapes, the data-pointer kind for ScalarPair shapes, NONPTR otherwise.
PtrKind value_kind_of_shape(const TypeShape& shape);

}  // namespace safeir::ir

#endif  // SAFEIR_IR_ABI_HPP_
