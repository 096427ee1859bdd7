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

#include "safeir/ir/validate.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "safeir/flow/type_flow.hpp"
#include "safeir/ir/cfg.hpp"
#include "safeir/ir/errors.hpp"

namespace safeir::ir {

std::string Diagnostic::to_string() const {
  std::string out;
  if (loc.valid()) out += loc.to_string() + ": ";
  if (!function.empty()) {
    out += "in fn " + function;
    if (!block.empty()) out += ", block " + block;
    if (inst != kNoInst) out += ", inst #" + std::to_string(inst);
    out += ": ";
  }
  out += message;
  return out;
}

namespace {

bool defines_value(Opcode op) {
  switch (op) {
    case Opcode::kHeapFree:
    case Opcode::kStore:
    case Opcode::kBr:
    case Opcode::kCondBr:
    case Opcode::kRet:
    case Opcode::kCheck:
    case Opcode::kCall:
      return false;
    default:
      return true;
  }
}

class FunctionValidator {
 public:
  FunctionValidator(const ProgramModule& m, const FunctionDef& f,
                    std::vector<Diagnostic>& out)
      : m_(m), f_(f), out_(out) {}

  void run() {
    check_signature();
    if (f_.is_declaration()) return;
    check_blocks();
    check_definitions();
    if (errors_ > 0) return;
    for (BlockId b = 0; b < f_.blocks.size(); ++b) {
      for (const auto& inst : f_.blocks[b].insts) check_instruction(b, inst);
    }
    if (errors_ > 0) return;
    check_dominance();
    if (errors_ > 0) return;
    check_kinds();
  }

 private:
  void error(std::string msg, BlockId b = Cfg::kNoBlock,
             const Instruction* inst = nullptr) {
    Diagnostic d;
    d.function = f_.name;
    if (b != Cfg::kNoBlock && b < f_.blocks.size()) d.block = f_.blocks[b].label;
    if (inst != nullptr) {
      d.inst = inst->id;
      d.loc = inst->loc;
    } else {
      d.loc = f_.loc;
    }
    d.message = std::move(msg);
    out_.push_back(std::move(d));
    ++errors_;
  }

  const TypeShape& shape_of(ValueId v) const { return f_.values[v].shape; }

  std::string name_of(ValueId v) const { return "%" + f_.values[v].name; }

  void check_signature() {
    if (f_.values.size() < f_.num_params()) {
      error("value table is smaller than the parameter list");
      return;
    }
    for (std::size_t i = 0; i < f_.num_params(); ++i) {
      const auto& shape = f_.values[i].shape;
      if (auto err = shape.validate(); !err.empty()) {
        error("parameter " + name_of(i) + ": " + err);
        continue;
      }
      check_declared_kind(shape, f_.param_kinds[i], "parameter " + name_of(i));
      if (f_.is_foreign() && f_.param_kinds[i] == PtrKind::kSafe) {
        error("foreign function has safe parameter " + name_of(i));
      }
    }
    if (auto err = f_.ret_shape.validate(); !err.empty()) {
      error("return shape: " + err);
    } else {
      check_declared_kind(f_.ret_shape, f_.ret_kind, "return value");
    }
    if (f_.is_foreign() && f_.ret_kind == PtrKind::kSafe) {
      error("foreign function returns a safe pointer");
    }
    if (f_.is_declaration() && !f_.has(kAttrKnownDealloc)) {
      error("only known_dealloc functions may be declared without a body");
    }
    if (f_.has(kAttrKnownDealloc)) {
      if (!f_.is_declaration()) {
        error("known_dealloc function must not have a body");
      }
      if (f_.num_params() == 0 || !f_.values[0].shape.is_thin_pointer()) {
        error("known_dealloc function must take the freed pointer first");
      }
    }
  }

  void check_declared_kind(const TypeShape& shape, PtrKind kind,
                           const std::string& what) {
    const bool pointer_shape = is_pointer_kind(value_kind_of_shape(shape));
    if (pointer_shape != is_pointer_kind(kind)) {
      error(what + " declared " + std::string(ir::to_string(kind)) +
            " does not match shape " + shape.to_string());
    }
  }

  void check_blocks() {
    std::set<std::string> labels;
    for (BlockId b = 0; b < f_.blocks.size(); ++b) {
      const auto& bb = f_.blocks[b];
      if (!labels.insert(bb.label).second) {
        error("duplicate block label " + bb.label, b);
      }
      if (bb.insts.empty()) {
        error("empty block", b);
        continue;
      }
      bool seen_non_phi = false;
      for (std::size_t i = 0; i < bb.insts.size(); ++i) {
        const auto& inst = bb.insts[i];
        const bool last = i + 1 == bb.insts.size();
        if (inst.is_terminator() != last) {
          error(last ? "block does not end in a terminator"
                     : "terminator in the middle of a block",
                b, &inst);
        }
        if (inst.op == Opcode::kPhi) {
          if (seen_non_phi) error("phi after a non-phi instruction", b, &inst);
        } else {
          seen_non_phi = true;
        }
        for (BlockId t : inst.blocks) {
          if (t >= f_.blocks.size()) error("branch to unknown block", b, &inst);
          if (t == 0 && inst.is_terminator()) {
            error("the entry block cannot be a branch target", b, &inst);
          }
        }
      }
    }
  }

  void check_definitions() {
    std::vector<int> defs(f_.values.size(), 0);
    for (std::size_t i = 0; i < f_.num_params() && i < defs.size(); ++i) defs[i] = 1;
    for (BlockId b = 0; b < f_.blocks.size(); ++b) {
      for (const auto& inst : f_.blocks[b].insts) {
        for (ValueId v : inst.operands) {
          if (v >= f_.values.size()) error("operand refers to an unknown value", b, &inst);
        }
        const bool must_define = defines_value(inst.op);
        if (inst.result == kNoValue) {
          if (must_define) error("instruction must define a value", b, &inst);
          continue;
        }
        if (!must_define && inst.op != Opcode::kCall) {
          error("instruction cannot define a value", b, &inst);
          continue;
        }
        if (inst.result >= f_.values.size()) {
          error("result refers to an unknown value", b, &inst);
          continue;
        }
        if (++defs[inst.result] > 1) {
          error("value " + name_of(inst.result) + " is defined more than once", b, &inst);
        }
      }
    }
    for (std::size_t v = 0; v < defs.size(); ++v) {
      if (defs[v] == 0) error("value " + name_of(v) + " is never defined");
    }
  }

  void expect(bool cond, const char* msg, BlockId b, const Instruction& inst) {
    if (!cond) error(msg, b, &inst);
  }

  bool is_int(ValueId v) const { return shape_of(v).is_int(); }
  bool is_ptr(ValueId v) const { return shape_of(v).is_thin_pointer(); }

  bool result_shape_is(const Instruction& inst, const TypeShape& s) const {
    return inst.result != kNoValue && shape_of(inst.result) == s;
  }

  void check_instruction(BlockId b, const Instruction& inst) {
    const auto arity = [&](std::size_t n) {
      if (inst.operands.size() != n) {
        error(std::string(ir::to_string(inst.op)) + " expects " + std::to_string(n) +
                  " operand(s)",
              b, &inst);
        return false;
      }
      return true;
    };
    if (auto err = inst.shape.validate(); !err.empty()) {
      error("malformed shape: " + err, b, &inst);
      return;
    }
    if (inst.op == Opcode::kCheck && m_.instrumented == InstrumentMode::kNone) {
      error("check pseudo-instruction in a module that is not instrumented", b, &inst);
    }
    switch (inst.op) {
      case Opcode::kAlloca:
        expect(arity(0) && result_shape_is(inst, TypeShape::SafePtr(inst.shape)),
               "alloca result must be a safe pointer to the allocated shape", b, inst);
        break;
      case Opcode::kHeapAlloc:
        expect(arity(1) && is_int(inst.operands[0]), "heapalloc size must be an integer",
               b, inst);
        expect(inst.shape.is_thin_pointer() && result_shape_is(inst, inst.shape),
               "heapalloc must produce a pointer", b, inst);
        break;
      case Opcode::kHeapFree:
        expect(arity(1) && is_ptr(inst.operands[0]), "heapfree needs a pointer operand",
               b, inst);
        break;
      case Opcode::kLoad:
        expect(arity(1) && is_ptr(inst.operands[0]), "load address must be a pointer",
               b, inst);
        expect(inst.shape.byte_size() > 0 && result_shape_is(inst, inst.shape),
               "load must produce a sized value of the loaded shape", b, inst);
        break;
      case Opcode::kStore:
        if (arity(2)) {
          expect(is_ptr(inst.operands[1]), "store address must be a pointer", b, inst);
          expect(shape_of(inst.operands[0]).byte_size() > 0,
                 "stored value must be sized", b, inst);
        }
        break;
      case Opcode::kGep:
        if (inst.operands.empty() || inst.operands.size() > 2) {
          error("gep expects a base and an optional dynamic offset", b, &inst);
          break;
        }
        expect(is_ptr(inst.operands[0]), "gep base must be a pointer", b, inst);
        expect(inst.operands.size() == 1 || is_int(inst.operands[1]),
               "dynamic gep offset must be an integer", b, inst);
        expect(inst.shape.is_thin_pointer() && result_shape_is(inst, inst.shape),
               "gep must produce a pointer", b, inst);
        break;
      case Opcode::kBitcast:
        expect(arity(1) && is_ptr(inst.operands[0]), "bitcast source must be a pointer",
               b, inst);
        expect(inst.shape.is_thin_pointer() && result_shape_is(inst, inst.shape),
               "bitcast must produce a pointer", b, inst);
        break;
      case Opcode::kPtrToInt:
        expect(arity(1) && (is_ptr(inst.operands[0]) ||
                            shape_of(inst.operands[0]).kind() == ShapeKind::kFnPtr),
               "ptrtoint source must be a pointer", b, inst);
        expect(result_shape_is(inst, TypeShape::Int(64)), "ptrtoint produces i64", b, inst);
        break;
      case Opcode::kIntToPtr:
        expect(arity(1) && is_int(inst.operands[0]), "inttoptr source must be an integer",
               b, inst);
        expect(inst.shape.is_thin_pointer() && result_shape_is(inst, inst.shape),
               "inttoptr must produce a pointer", b, inst);
        break;
      case Opcode::kCastToSafe:
        expect(arity(1) && is_ptr(inst.operands[0]), "castsafe source must be a pointer",
               b, inst);
        expect(inst.shape.kind() == ShapeKind::kSafePtr && result_shape_is(inst, inst.shape),
               "castsafe must produce a safe pointer shape", b, inst);
        if (f_.is_foreign()) error("castsafe inside a foreign function", b, &inst);
        break;
      case Opcode::kPhi:
        check_phi(b, inst);
        break;
      case Opcode::kCall:
        check_call(b, inst);
        break;
      case Opcode::kBinOp:
      case Opcode::kCmp:
        if (!arity(2)) break;
        expect(is_int(inst.operands[0]) && shape_of(inst.operands[0]) == shape_of(inst.operands[1]),
               "operands must be integers of the same shape", b, inst);
        if (inst.op == Opcode::kBinOp) {
          expect(result_shape_is(inst, shape_of(inst.operands[0])),
                 "binop result must match its operands", b, inst);
        } else {
          expect(result_shape_is(inst, TypeShape::Int(1)), "cmp produces i1", b, inst);
        }
        break;
      case Opcode::kConst:
        expect(arity(0) && inst.shape.is_int() && result_shape_is(inst, inst.shape),
               "const must produce an integer", b, inst);
        break;
      case Opcode::kGlobalAddr:
        check_global_addr(b, inst);
        break;
      case Opcode::kBr:
        expect(arity(0) && inst.blocks.size() == 1, "br takes one target", b, inst);
        break;
      case Opcode::kCondBr:
        expect(arity(1) && is_int(inst.operands[0]) && inst.blocks.size() == 2,
               "condbr takes an integer condition and two targets", b, inst);
        break;
      case Opcode::kRet:
        if (f_.ret_shape.is_void()) {
          expect(inst.operands.empty(), "void function returns a value", b, inst);
        } else {
          expect(inst.operands.size() == 1 && shape_of(inst.operands[0]) == f_.ret_shape,
                 "return value does not match the declared return shape", b, inst);
        }
        break;
      case Opcode::kCheck:
        expect(arity(1) && is_ptr(inst.operands[0]), "checks take a pointer operand", b,
               inst);
        expect(inst.imm > 0, "checked byte size must be positive", b, inst);
        check_anchor(b, inst);
        break;
    }
  }

  void check_phi(BlockId b, const Instruction& inst) {
    if (inst.operands.size() != inst.blocks.size() || inst.operands.empty()) {
      error("phi needs one incoming value per incoming block", b, &inst);
      return;
    }
    if (!result_shape_is(inst, inst.shape)) {
      error("phi result shape mismatch", b, &inst);
    }
    for (ValueId v : inst.operands) {
      if (shape_of(v) != inst.shape) {
        error("phi incoming " + name_of(v) + " has a different shape", b, &inst);
      }
    }
    // Incoming blocks must be exactly the predecessors.
    std::vector<BlockId> preds;
    for (BlockId p = 0; p < f_.blocks.size(); ++p) {
      const auto& insts = f_.blocks[p].insts;
      if (insts.empty() || !insts.back().is_terminator()) continue;
      const auto& t = insts.back().blocks;
      if (std::find(t.begin(), t.end(), b) != t.end()) preds.push_back(p);
    }
    std::vector<BlockId> incoming = inst.blocks;
    std::sort(incoming.begin(), incoming.end());
    if (incoming != preds) {
      error("phi incoming blocks do not match the block's predecessors", b, &inst);
    }
  }

  void check_call(BlockId b, const Instruction& inst) {
    const bool has_result = inst.result != kNoValue;
    if (has_result && (inst.shape.is_void() || !result_shape_is(inst, inst.shape))) {
      error("call result shape mismatch", b, &inst);
    }
    if (inst.is_indirect_call()) {
      if (inst.operands.empty() ||
          shape_of(inst.operands[0]).kind() != ShapeKind::kFnPtr) {
        error("indirect call through a non-function-pointer value", b, &inst);
      }
      return;
    }
    if (const FunctionDef* callee = m_.find_function(inst.symbol)) {
      const auto args = inst.call_args();
      if (args.size() != callee->num_params()) {
        error("call to " + inst.symbol + " passes " + std::to_string(args.size()) +
                  " argument(s), expected " + std::to_string(callee->num_params()),
              b, &inst);
        return;
      }
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (shape_of(args[i]) != callee->values[i].shape) {
          error("argument " + std::to_string(i) + " of call to " + inst.symbol +
                    " has the wrong shape",
                b, &inst);
        }
      }
      if (has_result && inst.shape != callee->ret_shape) {
        error("call result shape differs from the return shape of " + inst.symbol, b,
              &inst);
      }
      return;
    }
    if (m_.find_external(inst.symbol) == nullptr) {
      error("unresolved callee @" + inst.symbol, b, &inst);
    }
  }

  void check_global_addr(BlockId b, const Instruction& inst) {
    if (const GlobalDef* g = m_.find_global(inst.symbol)) {
      expect(inst.shape.is_thin_pointer() && inst.shape.elem() == g->shape &&
                 result_shape_is(inst, inst.shape),
             "globaladdr result must point to the global's shape", b, inst);
      return;
    }
    if (m_.find_function(inst.symbol) != nullptr || m_.find_external(inst.symbol) != nullptr) {
      expect(inst.shape.kind() == ShapeKind::kFnPtr && result_shape_is(inst, inst.shape),
             "address of a function must be a fnptr", b, inst);
      return;
    }
    error("unresolved symbol @" + inst.symbol, b, &inst);
  }

  const Instruction* find_inst(InstId id, BlockId* block) const {
    for (BlockId b = 0; b < f_.blocks.size(); ++b) {
      for (const auto& inst : f_.blocks[b].insts) {
        if (inst.id == id) {
          if (block != nullptr) *block = b;
          return &inst;
        }
      }
    }
    return nullptr;
  }

  void check_anchor(BlockId b, const Instruction& check) {
    if (check.operands.size() != 1) return;
    BlockId anchor_block = Cfg::kNoBlock;
    const Instruction* anchor = find_inst(check.anchor, &anchor_block);
    const ValueId checked = check.operands[0];
    switch (check.check) {
      case CheckKind::kCast:
        expect(anchor != nullptr && anchor->op == Opcode::kCastToSafe &&
                   anchor->operands[0] == checked,
               "cast check must precede the castsafe of the checked value", b, check);
        break;
      case CheckKind::kLoad:
        expect(anchor != nullptr && anchor->op == Opcode::kLoad && anchor->result == checked,
               "load check must follow the load of the checked value", b, check);
        break;
      case CheckKind::kReturn:
        expect(anchor != nullptr && anchor->op == Opcode::kCall && anchor->result == checked,
               "return check must follow the call producing the checked value", b, check);
        break;
      case CheckKind::kParam:
        expect(b == 0 && f_.has(kAttrExternVisible) && checked < f_.num_params(),
               "param checks belong in the entry block of an extern_visible function", b,
               check);
        break;
      case CheckKind::kDeref:
      case CheckKind::kHeap:
        expect(anchor != nullptr &&
                   (anchor->is_memory_access() && anchor->address_operand() == checked),
               "access checks must precede an access through the checked value", b, check);
        break;
    }
  }

  void check_dominance() {
    const Cfg cfg(f_);
    const auto idom = cfg.immediate_dominators();
    // def_site[v] = (block, index); params are defined before the entry.
    std::vector<std::pair<BlockId, std::size_t>> def_site(
        f_.values.size(), {Cfg::kNoBlock, 0});
    for (BlockId b = 0; b < f_.blocks.size(); ++b) {
      const auto& insts = f_.blocks[b].insts;
      for (std::size_t i = 0; i < insts.size(); ++i) {
        if (insts[i].result != kNoValue) def_site[insts[i].result] = {b, i};
      }
    }
    const auto& live = cfg.reachable_from_entry();
    for (BlockId b = 0; b < f_.blocks.size(); ++b) {
      if (!live[b]) continue;
      const auto& insts = f_.blocks[b].insts;
      for (std::size_t i = 0; i < insts.size(); ++i) {
        const auto& inst = insts[i];
        for (std::size_t k = 0; k < inst.operands.size(); ++k) {
          const ValueId v = inst.operands[k];
          if (v < f_.num_params()) continue;
          const auto [db, di] = def_site[v];
          bool ok;
          if (inst.op == Opcode::kPhi) {
            const BlockId from = inst.blocks[k];
            ok = live[from] ? dominates(idom, db, from) : true;
          } else if (db == b) {
            ok = di < i;
          } else {
            ok = dominates(idom, db, b);
          }
          if (!ok) {
            error("use of " + name_of(v) + " is not dominated by its definition", b, &inst);
          }
        }
      }
    }
  }

  void check_kinds() {
    flow::KindMap km;
    try {
      km = flow::infer_kinds(m_, f_);
    } catch (const AnalysisError& e) {
      error(e.what());
      return;
    }
    for (BlockId b = 0; b < f_.blocks.size(); ++b) {
      for (const auto& inst : f_.blocks[b].insts) {
        if (inst.op == Opcode::kCastToSafe && km.kind(inst.operands[0]) != PtrKind::kRaw) {
          error("castsafe operand " + name_of(inst.operands[0]) + " is " +
                    std::string(ir::to_string(km.kind(inst.operands[0]))) + ", not raw",
                b, &inst);
        }
      }
    }
  }

  const ProgramModule& m_;
  const FunctionDef& f_;
  std::vector<Diagnostic>& out_;
  int errors_ = 0;
};

void module_error(std::vector<Diagnostic>& out, std::string msg) {
  Diagnostic d;
  d.message = std::move(msg);
  out.push_back(std::move(d));
}

}  // namespace

std::vector<Diagnostic> validate_module(const ProgramModule& m) {
  std::vector<Diagnostic> out;
  std::set<std::string> symbols;
  for (const auto& g : m.globals) {
    if (!symbols.insert(g.name).second) module_error(out, "duplicate symbol @" + g.name);
    if (auto err = g.shape.validate(); !err.empty()) {
      module_error(out, "global @" + g.name + ": " + err);
    }
    if (!is_pointer_kind(g.kind)) {
      module_error(out, "global @" + g.name + " must declare a pointer kind");
    }
  }
  for (const auto& f : m.functions) {
    if (!symbols.insert(f.name).second) module_error(out, "duplicate symbol @" + f.name);
  }
  for (const auto& e : m.externals) {
    if (!symbols.insert(e.name).second) module_error(out, "duplicate symbol @" + e.name);
  }
  for (const auto& f : m.functions) FunctionValidator(m, f, out).run();
  return out;
}

void require_valid(const ProgramModule& m) {
  const auto diags = validate_module(m);
  if (diags.empty()) return;
  std::string msg = "module " + m.name + " is invalid:";
  for (const auto& d : diags) msg += "\n  " + d.to_string();
  throw ValidationError(msg);
}

}  // namespace safeir::ir
