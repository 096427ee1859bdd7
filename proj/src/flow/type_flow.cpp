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

#include "safeir/flow/type_flow.hpp"

#include <string>

#include "safeir/ir/errors.hpp"

namespace safeir::flow {

using ir::Instruction;
using ir::Opcode;
using ir::PtrKind;
using ir::ValueId;

PtrKind KindMap::kind(ValueId v) const {
  if (v >= kinds_.size()) {
    throw AnalysisError("value id " + std::to_string(v) + " is not in the kind map");
  }
  return kinds_[v];
}

std::array<std::size_t, 4> KindMap::histogram() const {
  std::array<std::size_t, 4> counts{};
  for (PtrKind k : kinds_) ++counts[static_cast<std::size_t>(k)];
  return counts;
}

PtrKind derive_gep_kind(PtrKind base_kind, const ir::TypeShape& base_pointee,
                        std::optional<std::int64_t> static_offset,
                        std::uint64_t access_size) {
  if (base_kind == PtrKind::kRaw || base_kind == PtrKind::kNonPtr) {
    return PtrKind::kRaw;
  }
  if (!static_offset || *static_offset < 0) return PtrKind::kRaw;
  const auto offset = static_cast<std::uint64_t>(*static_offset);
  if (offset + access_size > base_pointee.byte_size()) return PtrKind::kRaw;
  return base_kind;
}

bool is_safe_pointer(const KindMap& km, ValueId v) {
  const PtrKind k = km.kind(v);
  return k == PtrKind::kSafe || k == PtrKind::kNoPtr;
}

namespace {

using Lattice = std::optional<PtrKind>;  // nullopt = not yet derived

Lattice forward(const ir::FunctionDef& f, const Instruction& inst,
                const std::vector<Lattice>& kinds) {
  switch (inst.op) {
    case Opcode::kBitcast:
      return kinds[inst.operands[0]];
    case Opcode::kGep: {
      const Lattice base = kinds[inst.operands[0]];
      if (!base) return std::nullopt;
      const auto& base_shape = f.value(inst.operands[0]).shape;
      if (!base_shape.is_thin_pointer() || !inst.shape.is_thin_pointer()) {
        return PtrKind::kRaw;
      }
      std::optional<std::int64_t> offset;
      if (inst.is_static_gep()) offset = inst.imm;
      return derive_gep_kind(*base, base_shape.elem(), offset,
                             inst.shape.elem().byte_size());
    }
    case Opcode::kPhi: {
      Lattice acc;
      for (ValueId in : inst.operands) {
        if (!kinds[in]) continue;
        acc = acc ? ir::meet(*acc, *kinds[in]) : *kinds[in];
      }
      return acc;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

KindMap infer_kinds(const ir::ProgramModule& m, const ir::FunctionDef& f) {
  std::vector<Lattice> kinds(f.values.size());
  const bool foreign = f.is_foreign();

  for (std::size_t i = 0; i < f.num_params(); ++i) {
    PtrKind k = f.param_kinds[i];
    if (foreign && ir::is_pointer_kind(k)) k = PtrKind::kRaw;
    kinds[i] = k;
  }

  std::vector<const Instruction*> forwarders;
  for (const auto& bb : f.blocks) {
    for (const auto& inst : bb.insts) {
      if (inst.result == ir::kNoValue) continue;
      if (auto k = ir::default_decl_kind(m, f, inst)) {
        kinds[inst.result] = *k;
      } else {
        forwarders.push_back(&inst);
      }
    }
  }

  // Each value only moves down the chain unknown > NOPTR > SAFE > RAW, so
  // the loop terminates after at most four passes per value.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Instruction* inst : forwarders) {
      Lattice next = forward(f, *inst, kinds);
      if (next && foreign && ir::is_pointer_kind(*next)) next = PtrKind::kRaw;
      if (next != kinds[inst->result]) {
        kinds[inst->result] = next;
        changed = true;
      }
    }
  }

  std::vector<PtrKind> out;
  out.reserve(kinds.size());
  for (std::size_t v = 0; v < kinds.size(); ++v) {
    if (!kinds[v]) {
      throw AnalysisError("no derivable pointer kind for %" + f.values[v].name +
                          " in function " + f.name);
    }
    out.push_back(*kinds[v]);
  }
  return KindMap(std::move(out));
}

}  // namespace safeir::flow
