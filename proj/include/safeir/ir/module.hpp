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

// SSA mini-IR: modules own functions, globals and external declarations;
// functions own a value table and a list of basic blocks.

#ifndef SAFEIR_IR_MODULE_HPP_
#define SAFEIR_IR_MODULE_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "safeir/ir/abi.hpp"
#include "safeir/ir/type_shape.hpp"

namespace safeir::ir {

struct SourceLocation {
  std::string file;
  std::uint32_t line = 0;
  std::uint32_t column = 0;

  bool valid() const { return line >= 1 && column >= 1; }
  std::string to_string() const;

  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

using ValueId = std::uint32_t;
using BlockId = std::uint32_t;
using InstId = std::uint32_t;

inline constexpr ValueId kNoValue = std::numeric_limits<ValueId>::max();
inline constexpr InstId kNoInst = std::numeric_limits<InstId>::max();

enum class Opcode : std::uint8_t {
  kAlloca,
  kHeapAlloc,
  kHeapFree,
  kLoad,
  kStore,
  kGep,
  kBitcast,
  kPtrToInt,
  kIntToPtr,
  kCastToSafe,
  kPhi,
  kCall,
  kBinOp,
  kCmp,
  kConst,
  kGlobalAddr,
  kBr,
  kCondBr,
  kRet,
  kCheck,
};

enum class BinOpKind : std::uint8_t { kAdd, kSub, kMul, kAnd, kOr, kXor };
enum class CmpPred : std::uint8_t { kEq, kNe, kLt, kLe, kGt, kGe };

/// Dynamic check categories. kDeref is the sanitizer's per-access check;
/// the others are boundary checks inserted by the elision pass.
enum class CheckKind : std::uint8_t { kDeref, kCast, kLoad, kParam, kReturn, kHeap };

inline constexpr int kNumCheckKinds = 6;

std::string_view to_string(Opcode op);
std::string_view to_string(BinOpKind op);
std::string_view to_string(CmpPred pred);
std::string_view to_string(CheckKind kind);
std::optional<CheckKind> parse_check_kind(std::string_view text);

/// One IR instruction. The meaning of `shape`, `imm` and `symbol` depends on
/// the opcode:
///
///   alloca      shape = allocated object; result is &shape
///   heapalloc   operands = {size}; shape = result pointer
///   heapfree    operands = {address}
///   load        operands = {address}; shape = loaded value
///   store       operands = {value, address}
///   gep         operands = {base} with static offset `imm`, or {base, offset}
///   bitcast, inttoptr, castsafe
///               operands = {source}; shape = result
///   ptrtoint    operands = {pointer}; shape = i64
///   phi         operands[i] flows in from blocks[i]
///   call        direct: symbol = callee, operands = args;
///               indirect: symbol empty, operands = {callee, args...};
///               shape = result (zst when void)
///   binop, cmp  operands = {lhs, rhs}
///   const       shape = integer type, imm = value
///   globaladdr  symbol = global or function name; shape = result pointer
///   br, condbr  blocks = targets; condbr operands = {condition}
///   ret         operands = {} or {value}
///   check       operands = {pointer}; imm = checked byte size
struct Instruction {
  Opcode op = Opcode::kRet;
  ValueId result = kNoValue;
  std::vector<ValueId> operands;
  std::vector<BlockId> blocks;
  TypeShape shape;
  std::int64_t imm = 0;
  std::string symbol;
  BinOpKind binop = BinOpKind::kAdd;
  CmpPred pred = CmpPred::kEq;
  CheckKind check = CheckKind::kDeref;

  /// Function-unique id in textual order; see renumber().
  InstId id = kNoInst;
  /// For checks: the instruction the check protects.
  InstId anchor = kNoInst;
  SourceLocation loc;

  bool is_terminator() const {
    return op == Opcode::kBr || op == Opcode::kCondBr || op == Opcode::kRet;
  }
  bool is_memory_access() const {
    return op == Opcode::kLoad || op == Opcode::kStore;
  }
  bool is_static_gep() const { return op == Opcode::kGep && operands.size() == 1; }
  bool is_indirect_call() const { return op == Opcode::kCall && symbol.empty(); }

  /// Address operand of load/store/heapfree/check.
  ValueId address_operand() const;
  /// Arguments of a call, excluding the callee value of an indirect call.
  std::vector<ValueId> call_args() const;
};

struct BasicBlock {
  std::string label;
  std::vector<Instruction> insts;
};

struct Value {
  std::string name;
  TypeShape shape;
};

enum FunctionAttr : std::uint8_t {
  kAttrNone = 0,
  kAttrExternVisible = 1 << 0,
  kAttrForeign = 1 << 1,
  kAttrKnownDealloc = 1 << 2,
  kAttrNofreeDeclared = 1 << 3,
};

struct FunctionDef {
  std::string name;
  /// Value table; the first `param_kinds.size()` entries are the parameters.
  std::vector<Value> values;
  std::vector<PtrKind> param_kinds;
  TypeShape ret_shape;
  PtrKind ret_kind = PtrKind::kNonPtr;
  std::vector<BasicBlock> blocks;
  std::uint8_t attrs = kAttrNone;
  SourceLocation loc;

  std::size_t num_params() const { return param_kinds.size(); }
  bool has(FunctionAttr a) const { return (attrs & a) != 0; }
  bool is_foreign() const { return has(kAttrForeign); }
  bool is_declaration() const { return blocks.empty(); }

  ValueId add_value(std::string name, TypeShape shape);
  std::optional<BlockId> find_block(std::string_view label) const;
  const Value& value(ValueId id) const { return values.at(id); }
};

struct GlobalDef {
  std::string name;
  TypeShape shape;
  PtrKind kind = PtrKind::kRaw;
  std::int64_t init = 0;
};

struct ExternDecl {
  std::string name;
  bool nofree = false;
};

enum class InstrumentMode : std::uint8_t { kNone, kBaseline, kSafeFfi, kSafeFfiHeap };

std::string_view to_string(InstrumentMode mode);
std::optional<InstrumentMode> parse_instrument_mode(std::string_view text);

struct ProgramModule {
  std::string name;
  std::vector<FunctionDef> functions;
  std::vector<GlobalDef> globals;
  std::vector<ExternDecl> externals;
  InstrumentMode instrumented = InstrumentMode::kNone;

  const FunctionDef* find_function(std::string_view fn_name) const;
  FunctionDef* find_function(std::string_view fn_name);
  const GlobalDef* find_global(std::string_view global_name) const;
  const ExternDecl* find_external(std::string_view extern_name) const;
};

/// Reassigns instruction ids in textual order and derives each check's
/// anchor: DEREF, HEAP and CAST checks protect the next non-check
/// instruction, LOAD and RETURN checks the previous one, PARAM checks the
/// first non-check instruction of the entry block.
void renumber(FunctionDef& f);
void renumber(ProgramModule& m);

/// Reorders the value table to parameters first, then results in textual
/// order (the order the parser assigns), and renumbers. Values that are
/// never defined are kept at the end.
void canonicalize(FunctionDef& f);
void canonicalize(ProgramModule& m);

/// Structural equality ignoring source locations.
bool structurally_equal(const Instruction& a, const Instruction& b);
bool structurally_equal(const FunctionDef& a, const FunctionDef& b);
bool structurally_equal(const ProgramModule& a, const ProgramModule& b);

/// Default pointer kind of the value an instruction defines, before
/// forwarding. Returns nullopt for kind-forwarding instructions (bitcast,
/// gep, phi) and for instructions without a result. Values defined inside
/// foreign functions never receive SAFE or NOPTR.
std::optional<PtrKind> default_decl_kind(const ProgramModule& m,
                                         const FunctionDef& f,
                                         const Instruction& inst);

/// Byte size a check on `shape`'s pointee must cover. Zero-sized pointees
/// yield a one-byte liveness probe.
std::uint64_t checked_pointee_size(const TypeShape& pointer_shape);

/// Copies the functions named in `members` into a new compilation unit.
/// Calls to module functions outside the unit become extern declarations;
/// globals and existing externals are carried over.
ProgramModule extract_unit(const ProgramModule& m,
                           const std::vector<std::string>& members,
                           std::string unit_name);

}  // namespace safeir::ir

#endif  // SAFEIR_IR_MODULE_HPP_
