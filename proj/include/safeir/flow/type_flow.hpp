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

// Intraprocedural pointer-kind dataflow. Kinds are seeded from parameter,
// global and instruction declarations and forwarded through bitcast, gep and
// phi until a fixpoint is reached. The analysis never looks at other
// functions' bodies.

#ifndef SAFEIR_FLOW_TYPE_FLOW_HPP_
#define SAFEIR_FLOW_TYPE_FLOW_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "safeir/ir/module.hpp"

namespace safeir::flow {

/// Total map from a function's value ids to their pointer kind.
class KindMap {
 public:
  KindMap() = default;
  explicit KindMap(std::vector<ir::PtrKind> kinds) : kinds_(std::move(kinds)) {}

  /// Throws AnalysisError for an id outside the function.
  ir::PtrKind kind(ir::ValueId v) const;
  bool contains(ir::ValueId v) const { return v < kinds_.size(); }
  std::size_t size() const { return kinds_.size(); }
  const std::vector<ir::PtrKind>& kinds() const { return kinds_; }

  /// Count of values per kind, indexed by PtrKind.
  std::array<std::size_t, 4> histogram() const;

  friend bool operator==(const KindMap&, const KindMap&) = default;

 private:
  std::vector<ir::PtrKind> kinds_;
};

/// Runs the dataflow to a fixpoint. Throws AnalysisError naming the value
/// when some value's kind cannot be derived (e.g. a phi cycle with no
/// seeded input).
KindMap infer_kinds(const ir::ProgramModule& m, const ir::FunctionDef& f);

/// Kind of a gep result. A raw base always yields RAW. A SAFE or NOPTR base
/// keeps its kind only when the offset is static and the accessed range
/// [offset, offset + access_size) lies inside the base pointee; anything else
/// is downgraded to RAW.
ir::PtrKind derive_gep_kind(ir::PtrKind base_kind, const ir::TypeShape& base_pointee,
                            std::optional<std::int64_t> static_offset,
                            std::uint64_t access_size);

/// True for SAFE and NOPTR values: dereferences through them need no
/// per-access check. Throws AnalysisError for unknown ids.
bool is_safe_pointer(const KindMap& km, ir::ValueId v);

}  // namespace safeir::flow

#endif  // SAFEIR_FLOW_TYPE_FLOW_HPP_
