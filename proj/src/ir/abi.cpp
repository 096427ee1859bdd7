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

#include "safeir/ir/abi.hpp"

#include <vector>

#include "safeir/ir/errors.hpp"

namespace safeir::ir {

std::string_view to_string(PtrKind kind) {
  switch (kind) {
    case PtrKind::kSafe:
      return "safe";
    case PtrKind::kRaw:
      return "raw";
    case PtrKind::kNoPtr:
      return "noptr";
    case PtrKind::kNonPtr:
      return "nonptr";
  }
  return "?";
}

std::optional<PtrKind> parse_ptr_kind(std::string_view text) {
  if (text == "safe") return PtrKind::kSafe;
  if (text == "raw") return PtrKind::kRaw;
  if (text == "noptr") return PtrKind::kNoPtr;
  if (text == "nonptr") return PtrKind::kNonPtr;
  return std::nullopt;
}

PtrKind meet(PtrKind a, PtrKind b) {
  if (a == b) return a;
  if (a == PtrKind::kNonPtr || b == PtrKind::kNonPtr) return PtrKind::kRaw;
  if (a == PtrKind::kRaw || b == PtrKind::kRaw) return PtrKind::kRaw;
  // The only remaining mix is SAFE with NOPTR.
  return PtrKind::kSafe;
}

namespace {

AbiClass classify_union(const TypeShape& shape) {
  bool all_safe = true;
  bool any_pointer = false;
  for (const auto& field : shape.fields()) {
    const AbiClass fc = classify_abi(field);
    if (fc.tag == AbiClass::Tag::kUninhabited) continue;
    if (fc.tag != AbiClass::Tag::kScalar) return AbiClass::Aggregate();
    all_safe = all_safe && fc.first == PtrKind::kSafe;
    any_pointer = any_pointer || is_pointer_kind(fc.first);
  }
  if (all_safe) return AbiClass::Scalar(PtrKind::kSafe);
  if (any_pointer) return AbiClass::Scalar(PtrKind::kRaw);
  return AbiClass::Scalar(PtrKind::kNonPtr);
}

}  // namespace

AbiClass classify_abi(const TypeShape& shape) {
  if (auto err = shape.validate(); !err.empty()) {
    throw ValidationError("malformed shape " + shape.to_string() + ": " + err);
  }
  if (shape.byte_size() == 0) return AbiClass::Uninhabited();

  switch (shape.kind()) {
    case ShapeKind::kInt:
      return AbiClass::Scalar(PtrKind::kNonPtr);
    case ShapeKind::kSafePtr:
      return AbiClass::Scalar(PtrKind::kSafe);
    case ShapeKind::kRawPtr:
      return AbiClass::Scalar(PtrKind::kRaw);
    case ShapeKind::kFnPtr:
      return AbiClass::Scalar(PtrKind::kNoPtr);
    case ShapeKind::kSlice:
      return AbiClass::ScalarPair(PtrKind::kRaw, PtrKind::kNonPtr);
    case ShapeKind::kTraitObject:
      // The table word is compiler-managed.
      return AbiClass::ScalarPair(PtrKind::kRaw, PtrKind::kSafe);
    case ShapeKind::kStruct: {
      const TypeShape* only = nullptr;
      for (const auto& field : shape.fields()) {
        if (field.byte_size() == 0) continue;
        if (only != nullptr) return AbiClass::Aggregate();
        only = &field;
      }
      return classify_abi(*only);
    }
    case ShapeKind::kUnion:
      return classify_union(shape);
    case ShapeKind::kArray:
    case ShapeKind::kZeroSized:
      break;
  }
  return AbiClass::Aggregate();
}

PtrKind value_kind_of_shape(const TypeShape& shape) {
  const AbiClass c = classify_abi(shape);
  switch (c.tag) {
    case AbiClass::Tag::kScalar:
    case AbiClass::Tag::kScalarPair:
      return c.first;
    default:
      return PtrKind::kNonPtr;
  }
}

}  // namespace safeir::ir
