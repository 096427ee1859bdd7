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

#include "safeir/ir/type_shape.hpp"

#include <algorithm>
#include <utility>

namespace safeir::ir {

bool is_valid_int_width(std::uint32_t width_bits) {
  switch (width_bits) {
    case 1:
    case 8:
    case 16:
    case 32:
    case 64:
      return true;
    default:
      return false;
  }
}

TypeShape TypeShape::Int(std::uint32_t width_bits) {
  TypeShape s;
  s.kind_ = ShapeKind::kInt;
  s.width_ = width_bits;
  return s;
}

TypeShape TypeShape::ZeroSized() { return TypeShape(); }

TypeShape TypeShape::SafePtr(TypeShape pointee) {
  TypeShape s;
  s.kind_ = ShapeKind::kSafePtr;
  s.children_.push_back(std::move(pointee));
  return s;
}

TypeShape TypeShape::RawPtr(TypeShape pointee) {
  TypeShape s;
  s.kind_ = ShapeKind::kRawPtr;
  s.children_.push_back(std::move(pointee));
  return s;
}

TypeShape TypeShape::Struct(std::vector<TypeShape> fields) {
  TypeShape s;
  s.kind_ = ShapeKind::kStruct;
  s.children_ = std::move(fields);
  return s;
}

TypeShape TypeShape::Union(std::vector<TypeShape> fields) {
  TypeShape s;
  s.kind_ = ShapeKind::kUnion;
  s.children_ = std::move(fields);
  return s;
}

TypeShape TypeShape::Array(TypeShape elem, std::uint64_t count) {
  TypeShape s;
  s.kind_ = ShapeKind::kArray;
  s.count_ = count;
  s.children_.push_back(std::move(elem));
  return s;
}

TypeShape TypeShape::Slice(TypeShape elem) {
  TypeShape s;
  s.kind_ = ShapeKind::kSlice;
  s.children_.push_back(std::move(elem));
  return s;
}

TypeShape TypeShape::TraitObject() {
  TypeShape s;
  s.kind_ = ShapeKind::kTraitObject;
  return s;
}

TypeShape TypeShape::FnPtr() {
  TypeShape s;
  s.kind_ = ShapeKind::kFnPtr;
  return s;
}

std::uint64_t TypeShape::byte_size() const {
  switch (kind_) {
    case ShapeKind::kInt:
      return width_ <= 8 ? 1 : width_ / 8;
    case ShapeKind::kZeroSized:
      return 0;
    case ShapeKind::kSafePtr:
    case ShapeKind::kRawPtr:
    case ShapeKind::kFnPtr:
      return kWordSize;
    case ShapeKind::kSlice:
    case ShapeKind::kTraitObject:
      return 2 * kWordSize;
    case ShapeKind::kStruct: {
      std::uint64_t total = 0;
      for (const auto& f : children_) total += f.byte_size();
      return total;
    }
    case ShapeKind::kUnion: {
      std::uint64_t widest = 0;
      for (const auto& f : children_) widest = std::max(widest, f.byte_size());
      return widest;
    }
    case ShapeKind::kArray:
      return count_ * children_.front().byte_size();
  }
  return 0;
}

std::string TypeShape::validate() const {
  switch (kind_) {
    case ShapeKind::kInt:
      if (!is_valid_int_width(width_)) {
        return "invalid integer width " + std::to_string(width_);
      }
      return {};
    case ShapeKind::kZeroSized:
    case ShapeKind::kTraitObject:
    case ShapeKind::kFnPtr:
      return {};
    case ShapeKind::kSafePtr:
    case ShapeKind::kRawPtr:
    case ShapeKind::kArray:
    case ShapeKind::kSlice:
      if (children_.size() != 1) return "malformed element shape";
      return children_.front().validate();
    case ShapeKind::kStruct:
    case ShapeKind::kUnion:
      if (children_.empty()) {
        return kind_ == ShapeKind::kStruct ? "struct without fields"
                                           : "union without fields";
      }
      for (const auto& f : children_) {
        if (auto err = f.validate(); !err.empty()) return err;
      }
      return {};
  }
  return "unknown shape kind";
}

namespace {

std::string join_fields(const std::vector<TypeShape>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i != 0) out += ", ";
    out += fields[i].to_string();
  }
  return out;
}

}  // namespace

std::string TypeShape::to_string() const {
  switch (kind_) {
    case ShapeKind::kInt:
      return "i" + std::to_string(width_);
    case ShapeKind::kZeroSized:
      return "zst";
    case ShapeKind::kSafePtr:
      return "&" + children_.front().to_string();
    case ShapeKind::kRawPtr:
      return "*" + children_.front().to_string();
    case ShapeKind::kStruct:
      return "{" + join_fields(children_) + "}";
    case ShapeKind::kUnion:
      return "union{" + join_fields(children_) + "}";
    case ShapeKind::kArray:
      return "[" + children_.front().to_string() + " x " +
             std::to_string(count_) + "]";
    case ShapeKind::kSlice:
      return "[" + children_.front().to_string() + "]";
    case ShapeKind::kTraitObject:
      return "dyn";
    case ShapeKind::kFnPtr:
      return "fnptr";
  }
  return "?";
}

}  // namespace safeir::ir
