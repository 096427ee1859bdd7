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

#ifndef SAFEIR_IR_TYPE_SHAPE_HPP_
#define SAFEIR_IR_TYPE_SHAPE_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace safeir::ir {

/// Machine word size in bytes. Every thin pointer occupies one word.
inline constexpr std::uint64_t kWordSize = 8;

enum class ShapeKind : std::uint8_t {
  kInt,
  kZeroSized,
  kSafePtr,
  kRawPtr,
  kStruct,
  kUnion,
  kArray,
  kSlice,
  kTraitObject,
  kFnPtr,
};

/// Layout-level description of a value's type.
///
/// Sizes are computed without padding: a struct is the sum of its fields, a
/// union the maximum of its fields. Slices and trait objects describe the
/// fat pointer itself (data word plus length or table word), so they occupy
/// two words.
class TypeShape {
 public:
  TypeShape() = default;

  static TypeShape Int(std::uint32_t width_bits);
  static TypeShape ZeroSized();
  static TypeShape SafePtr(TypeShape pointee);
  static TypeShape RawPtr(TypeShape pointee);
  static TypeShape Struct(std::vector<TypeShape> fields);
  static TypeShape Union(std::vector<TypeShape> fields);
  static TypeShape Array(TypeShape elem, std::uint64_t count);
  static TypeShape Slice(TypeShape elem);
  static TypeShape TraitObject();
  static TypeShape FnPtr();

  ShapeKind kind() const { return kind_; }
  std::uint32_t width() const { return width_; }
  std::uint64_t count() const { return count_; }

  /// Pointee of SafePtr/RawPtr, element of Array/Slice.
  const TypeShape& elem() const { return children_.front(); }
  /// Fields of Struct/Union.
  const std::vector<TypeShape>& fields() const { return children_; }

  bool is_int() const { return kind_ == ShapeKind::kInt; }
  bool is_thin_pointer() const {
    return kind_ == ShapeKind::kSafePtr || kind_ == ShapeKind::kRawPtr;
  }
  /// Any shape a load/store/gep may use as an address operand.
  bool is_address() const { return is_thin_pointer(); }
  bool is_void() const { return kind_ == ShapeKind::kZeroSized; }

  std::uint64_t byte_size() const;

  /// Returns an empty string when the shape is well-formed, otherwise a
  /// description of the first problem found.
  std::string validate() const;

  /// Canonical textual form, e.g. `&{i32, i32, i64}` or `[*i8 x 4]`.
  std::string to_string() const;

  friend bool operator==(const TypeShape&, const TypeShape&) = default;

 private:
  ShapeKind kind_ = ShapeKind::kZeroSized;
  std::uint32_t width_ = 0;
  std::uint64_t count_ = 0;
  std::vector<TypeShape> children_;
};

/// Integer widths the IR accepts; `i1` is the comparison result type.
bool is_valid_int_width(std::uint32_t width_bits);

}  // namespace safeir::ir

#endif  // SAFEIR_IR_TYPE_SHAPE_HPP_
