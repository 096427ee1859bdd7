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

#include "safeir/ir/module.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "safeir/ir/errors.hpp"

namespace safeir::ir {

std::string SourceLocation::to_string() const {
  std::string out = file.empty() ? "<input>" : file;
  out += ":" + std::to_string(line) + ":" + std::to_string(column);
  return out;
}

std::string_view to_string(Opcode op) {
  switch (op) {
    case Opcode::kAlloca: return "alloca";
    case Opcode::kHeapAlloc: return "heapalloc";
    case Opcode::kHeapFree: return "heapfree";
    case Opcode::kLoad: return "load";
    case Opcode::kStore: return "store";
    case Opcode::kGep: return "gep";
    case Opcode::kBitcast: return "bitcast";
    case Opcode::kPtrToInt: return "ptrtoint";
    case Opcode::kIntToPtr: return "inttoptr";
    case Opcode::kCastToSafe: return "castsafe";
    case Opcode::kPhi: return "phi";
    case Opcode::kCall: return "call";
    case Opcode::kBinOp: return "binop";
    case Opcode::kCmp: return "cmp";
    case Opcode::kConst: return "const";
    case Opcode::kGlobalAddr: return "globaladdr";
    case Opcode::kBr: return "br";
    case Opcode::kCondBr: return "condbr";
    case Opcode::kRet: return "ret";
    case Opcode::kCheck: return "check";
  }
  return "?";
}

std::string_view to_string(BinOpKind op) {
  switch (op) {
    case BinOpKind::kAdd: return "add";
    case BinOpKind::kSub: return "sub";
    case BinOpKind::kMul: return "mul";
    case BinOpKind::kAnd: return "and";
    case BinOpKind::kOr: return "or";
    case BinOpKind::kXor: return "xor";
  }
  return "?";
}

std::string_view to_string(CmpPred pred) {
  switch (pred) {
    case CmpPred::kEq: return "eq";
    case CmpPred::kNe: return "ne";
    case CmpPred::kLt: return "lt";
    case CmpPred::kLe: return "le";
    case CmpPred::kGt: return "gt";
    case CmpPred::kGe: return "ge";
  }
  return "?";
}

std::string_view to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::kDeref: return "deref";
    case CheckKind::kCast: return "cast";
    case CheckKind::kLoad: return "load";
    case CheckKind::kParam: return "param";
    case CheckKind::kReturn: return "ret";
    case CheckKind::kHeap: return "heap";
  }
  return "?";
}

std::optional<CheckKind> parse_check_kind(std::string_view text) {
  for (int i = 0; i < kNumCheckKinds; ++i) {
    const auto k = static_cast<CheckKind>(i);
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::string_view to_string(InstrumentMode mode) {
  switch (mode) {
    case InstrumentMode::kNone: return "none";
    case InstrumentMode::kBaseline: return "baseline";
    case InstrumentMode::kSafeFfi: return "safeffi";
    case InstrumentMode::kSafeFfiHeap: return "safeffi-heap";
  }
  return "?";
}

std::optional<InstrumentMode> parse_instrument_mode(std::string_view text) {
  if (text == "none") return InstrumentMode::kNone;
  if (text == "baseline") return InstrumentMode::kBaseline;
  if (text == "safeffi") return InstrumentMode::kSafeFfi;
  if (text == "safeffi-heap") return InstrumentMode::kSafeFfiHeap;
  return std::nullopt;
}

ValueId Instruction::address_operand() const {
  switch (op) {
    case Opcode::kLoad:
    case Opcode::kHeapFree:
    case Opcode::kCheck:
      return operands.at(0);
    case Opcode::kStore:
      return operands.at(1);
    default:
      return kNoValue;
  }
}

std::vector<ValueId> Instruction::call_args() const {
  if (!is_indirect_call()) return operands;
  return {operands.begin() + 1, operands.end()};
}

ValueId FunctionDef::add_value(std::string value_name, TypeShape shape) {
  values.push_back(Value{std::move(value_name), std::move(shape)});
  return static_cast<ValueId>(values.size() - 1);
}

std::optional<BlockId> FunctionDef::find_block(std::string_view label) const {
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].label == label) return static_cast<BlockId>(i);
  }
  return std::nullopt;
}

const FunctionDef* ProgramModule::find_function(std::string_view fn_name) const {
  for (const auto& f : functions) {
    if (f.name == fn_name) return &f;
  }
  return nullptr;
}

FunctionDef* ProgramModule::find_function(std::string_view fn_name) {
  for (auto& f : functions) {
    if (f.name == fn_name) return &f;
  }
  return nullptr;
}

const GlobalDef* ProgramModule::find_global(std::string_view global_name) const {
  for (const auto& g : globals) {
    if (g.name == global_name) return &g;
  }
  return nullptr;
}

const ExternDecl* ProgramModule::find_external(std::string_view extern_name) const {
  for (const auto& e : externals) {
    if (e.name == extern_name) return &e;
  }
  return nullptr;
}

namespace {

InstId first_non_check(const BasicBlock& bb) {
  for (const auto& inst : bb.insts) {
    if (inst.op != Opcode::kCheck) return inst.id;
  }
  return kNoInst;
}

}  // namespace

void renumber(FunctionDef& f) {
  InstId next = 0;
  for (auto& bb : f.blocks) {
    for (auto& inst : bb.insts) inst.id = next++;
  }
  for (std::size_t b = 0; b < f.blocks.size(); ++b) {
    auto& insts = f.blocks[b].insts;
    for (std::size_t i = 0; i < insts.size(); ++i) {
      auto& inst = insts[i];
      if (inst.op != Opcode::kCheck) continue;
      inst.anchor = kNoInst;
      switch (inst.check) {
        case CheckKind::kDeref:
        case CheckKind::kHeap:
        case CheckKind::kCast:
          for (std::size_t j = i + 1; j < insts.size(); ++j) {
            if (insts[j].op != Opcode::kCheck) {
              inst.anchor = insts[j].id;
              break;
            }
          }
          break;
        case CheckKind::kLoad:
        case CheckKind::kReturn:
          for (std::size_t j = i; j-- > 0;) {
            if (insts[j].op != Opcode::kCheck) {
              inst.anchor = insts[j].id;
              break;
            }
          }
          break;
        case CheckKind::kParam:
          inst.anchor = first_non_check(f.blocks.front());
          break;
      }
    }
  }
}

void renumber(ProgramModule& m) {
  for (auto& f : m.functions) renumber(f);
}

void canonicalize(FunctionDef& f) {
  std::vector<ValueId> order;
  std::vector<ValueId> remap(f.values.size(), kNoValue);
  auto take = [&](ValueId v) {
    if (v < remap.size() && remap[v] == kNoValue) {
      remap[v] = static_cast<ValueId>(order.size());
      order.push_back(v);
    }
  };
  for (ValueId v = 0; v < f.num_params(); ++v) take(v);
  for (const auto& bb : f.blocks) {
    for (const auto& inst : bb.insts) take(inst.result);
  }
  for (ValueId v = 0; v < f.values.size(); ++v) take(v);

  std::vector<Value> values;
  values.reserve(order.size());
  for (ValueId old : order) values.push_back(std::move(f.values[old]));
  f.values = std::move(values);
  for (auto& bb : f.blocks) {
    for (auto& inst : bb.insts) {
      if (inst.result != kNoValue) inst.result = remap[inst.result];
      for (auto& v : inst.operands) {
        if (v < remap.size()) v = remap[v];
      }
    }
  }
  renumber(f);
}

void canonicalize(ProgramModule& m) {
  for (auto& f : m.functions) canonicalize(f);
}

bool structurally_equal(const Instruction& a, const Instruction& b) {
  return a.op == b.op && a.result == b.result && a.operands == b.operands &&
         a.blocks == b.blocks && a.shape == b.shape && a.imm == b.imm &&
         a.symbol == b.symbol && a.binop == b.binop && a.pred == b.pred &&
         a.check == b.check && a.id == b.id && a.anchor == b.anchor;
}

bool structurally_equal(const FunctionDef& a, const FunctionDef& b) {
  if (a.name != b.name || a.param_kinds != b.param_kinds ||
      a.ret_shape != b.ret_shape || a.ret_kind != b.ret_kind ||
      a.attrs != b.attrs || a.values.size() != b.values.size() ||
      a.blocks.size() != b.blocks.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (a.values[i].name != b.values[i].name ||
        a.values[i].shape != b.values[i].shape) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.blocks.size(); ++i) {
    const auto& ba = a.blocks[i];
    const auto& bb = b.blocks[i];
    if (ba.label != bb.label || ba.insts.size() != bb.insts.size()) return false;
    for (std::size_t j = 0; j < ba.insts.size(); ++j) {
      if (!structurally_equal(ba.insts[j], bb.insts[j])) return false;
    }
  }
  return true;
}

bool structurally_equal(const ProgramModule& a, const ProgramModule& b) {
  if (a.name != b.name || a.instrumented != b.instrumented ||
      a.functions.size() != b.functions.size() ||
      a.globals.size() != b.globals.size() ||
      a.externals.size() != b.externals.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.globals.size(); ++i) {
    const auto& ga = a.globals[i];
    const auto& gb = b.globals[i];
    if (ga.name != gb.name || ga.shape != gb.shape || ga.kind != gb.kind ||
        ga.init != gb.init) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.externals.size(); ++i) {
    if (a.externals[i].name != b.externals[i].name ||
        a.externals[i].nofree != b.externals[i].nofree) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.functions.size(); ++i) {
    if (!structurally_equal(a.functions[i], b.functions[i])) return false;
  }
  return true;
}

namespace {

PtrKind alloca_kind(const TypeShape& shape) {
  return classify_abi(shape).tag == AbiClass::Tag::kAggregate ? PtrKind::kNoPtr
                                                              : PtrKind::kSafe;
}

std::optional<PtrKind> raw_default_kind(const ProgramModule& m,
                                        const Instruction& inst) {
  switch (inst.op) {
    case Opcode::kAlloca:
      return alloca_kind(inst.shape);
    case Opcode::kHeapAlloc:
    case Opcode::kIntToPtr:
      return PtrKind::kRaw;
    case Opcode::kCastToSafe:
      return PtrKind::kSafe;
    case Opcode::kLoad:
      return value_kind_of_shape(inst.shape);
    case Opcode::kCall: {
      if (inst.result == kNoValue) return std::nullopt;
      if (!inst.is_indirect_call()) {
        if (const auto* callee = m.find_function(inst.symbol)) {
          return callee->ret_kind;
        }
      }
      return value_kind_of_shape(inst.shape);
    }
    case Opcode::kGlobalAddr: {
      if (const auto* g = m.find_global(inst.symbol)) return g->kind;
      return PtrKind::kNoPtr;  // function address
    }
    case Opcode::kPtrToInt:
    case Opcode::kBinOp:
    case Opcode::kCmp:
    case Opcode::kConst:
      return PtrKind::kNonPtr;
    case Opcode::kBitcast:
    case Opcode::kGep:
    case Opcode::kPhi:
    default:
      return std::nullopt;
  }
}

}  // namespace

std::optional<PtrKind> default_decl_kind(const ProgramModule& m,
                                         const FunctionDef& f,
                                         const Instruction& inst) {
  auto kind = raw_default_kind(m, inst);
  if (kind && f.is_foreign() && is_pointer_kind(*kind)) return PtrKind::kRaw;
  return kind;
}

std::uint64_t checked_pointee_size(const TypeShape& pointer_shape) {
  if (!pointer_shape.is_thin_pointer()) return kWordSize;
  return std::max<std::uint64_t>(1, pointer_shape.elem().byte_size());
}

ProgramModule extract_unit(const ProgramModule& m,
                           const std::vector<std::string>& members,
                           std::string unit_name) {
  const std::set<std::string> member_set(members.begin(), members.end());
  ProgramModule unit;
  unit.name = std::move(unit_name);
  unit.globals = m.globals;
  unit.externals = m.externals;
  unit.instrumented = m.instrumented;

  std::set<std::string> declared;
  for (const auto& e : unit.externals) declared.insert(e.name);

  for (const auto& f : m.functions) {
    if (member_set.count(f.name) != 0 || f.is_declaration()) {
      unit.functions.push_back(f);
    }
  }
  for (const auto& f : unit.functions) {
    for (const auto& bb : f.blocks) {
      for (const auto& inst : bb.insts) {
        const bool names_function =
            (inst.op == Opcode::kCall && !inst.is_indirect_call()) ||
            (inst.op == Opcode::kGlobalAddr && m.find_global(inst.symbol) == nullptr);
        if (!names_function || unit.find_function(inst.symbol) != nullptr) continue;
        if (declared.insert(inst.symbol).second) {
          unit.externals.push_back(ExternDecl{inst.symbol, false});
        }
      }
    }
  }
  return unit;
}

}  // namespace safeir::ir
