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

#include <sstream>

#include "safeir/text/text.hpp"

namespace safeir::text {

using ir::FunctionDef;
using ir::Instruction;
using ir::Opcode;

namespace {

std::string kind_suffix(ir::PtrKind k) {
  return ir::is_pointer_kind(k) ? " :" + std::string(ir::to_string(k)) : "";
}

std::string local(const FunctionDef& f, ir::ValueId v) {
  if (v >= f.values.size()) return "%<bad" + std::to_string(v) + ">";
  return "%" + f.values[v].name;
}

std::string label(const FunctionDef& f, ir::BlockId b) {
  return b < f.blocks.size() ? f.blocks[b].label : "<bad" + std::to_string(b) + ">";
}

}  // namespace

std::string print_instruction(const FunctionDef& f, const Instruction& inst) {
  std::ostringstream os;
  if (inst.result != ir::kNoValue) os << local(f, inst.result) << " = ";
  const auto op = [&](std::size_t i) { return local(f, inst.operands.at(i)); };
  switch (inst.op) {
    case Opcode::kAlloca:
      os << "alloca " << inst.shape.to_string();
      break;
    case Opcode::kHeapAlloc:
      os << "heapalloc " << op(0) << " : " << inst.shape.to_string();
      break;
    case Opcode::kHeapFree:
      os << "heapfree " << op(0);
      break;
    case Opcode::kLoad:
      os << "load " << inst.shape.to_string() << ", " << op(0);
      break;
    case Opcode::kStore:
      os << "store " << op(0) << ", " << op(1);
      break;
    case Opcode::kGep:
      os << "gep " << op(0) << ", "
         << (inst.is_static_gep() ? std::to_string(inst.imm) : op(1)) << " : "
         << inst.shape.to_string();
      break;
    case Opcode::kBitcast:
      os << "bitcast " << op(0) << " : " << inst.shape.to_string();
      break;
    case Opcode::kPtrToInt:
      os << "ptrtoint " << op(0);
      break;
    case Opcode::kIntToPtr:
      os << "inttoptr " << op(0) << " : " << inst.shape.to_string();
      break;
    case Opcode::kCastToSafe:
      os << "castsafe " << op(0) << " : " << inst.shape.to_string();
      break;
    case Opcode::kPhi:
      os << "phi " << inst.shape.to_string();
      for (std::size_t i = 0; i < inst.operands.size(); ++i) {
        os << (i == 0 ? " " : ", ") << "[" << op(i) << ", " << label(f, inst.blocks.at(i))
           << "]";
      }
      break;
    case Opcode::kCall: {
      os << "call ";
      if (!inst.shape.is_void()) os << inst.shape.to_string() << " ";
      std::size_t first_arg = 0;
      if (inst.is_indirect_call()) {
        os << op(0);
        first_arg = 1;
      } else {
        os << "@" << inst.symbol;
      }
      os << "(";
      for (std::size_t i = first_arg; i < inst.operands.size(); ++i) {
        os << (i == first_arg ? "" : ", ") << op(i);
      }
      os << ")";
      break;
    }
    case Opcode::kBinOp:
      os << ir::to_string(inst.binop) << " " << inst.shape.to_string() << " " << op(0)
         << ", " << op(1);
      break;
    case Opcode::kCmp:
      os << "cmp " << ir::to_string(inst.pred) << " " << op(0) << ", " << op(1);
      break;
    case Opcode::kConst:
      os << "const " << inst.shape.to_string() << " " << inst.imm;
      break;
    case Opcode::kGlobalAddr:
      os << "globaladdr @" << inst.symbol << " : " << inst.shape.to_string();
      break;
    case Opcode::kBr:
      os << "br " << label(f, inst.blocks.at(0));
      break;
    case Opcode::kCondBr:
      os << "condbr " << op(0) << ", " << label(f, inst.blocks.at(0)) << ", "
         << label(f, inst.blocks.at(1));
      break;
    case Opcode::kRet:
      os << "ret";
      if (!inst.operands.empty()) os << " " << op(0);
      break;
    case Opcode::kCheck:
      if (inst.check == ir::CheckKind::kDeref) {
        os << "check " << op(0) << ", " << inst.imm;
      } else {
        os << "ensure " << op(0) << ", " << inst.imm << " !" << ir::to_string(inst.check);
      }
      break;
  }
  return os.str();
}

std::string print_function(const FunctionDef& f) {
  std::ostringstream os;
  os << "fn " << f.name << "(";
  for (std::size_t i = 0; i < f.num_params(); ++i) {
    os << (i == 0 ? "" : ", ") << "%" << f.values[i].name << ": "
       << f.values[i].shape.to_string() << kind_suffix(f.param_kinds[i]);
  }
  os << ")";
  if (!f.ret_shape.is_void()) {
    os << " -> " << f.ret_shape.to_string() << kind_suffix(f.ret_kind);
  }
  if (f.has(ir::kAttrExternVisible)) os << " extern_visible";
  if (f.has(ir::kAttrForeign)) os << " foreign";
  if (f.has(ir::kAttrKnownDealloc)) os << " known_dealloc";
  if (f.has(ir::kAttrNofreeDeclared)) os << " nofree";
  if (f.is_declaration()) {
    os << "\n";
    return os.str();
  }
  os << " {\n";
  for (const auto& bb : f.blocks) {
    os << bb.label << ":\n";
    for (const auto& inst : bb.insts) os << "  " << print_instruction(f, inst) << "\n";
  }
  os << "}\n";
  return os.str();
}

std::string print_module(const ir::ProgramModule& m) {
  std::ostringstream os;
  os << "module " << m.name << "\n";
  if (m.instrumented != ir::InstrumentMode::kNone) {
    os << "mode " << ir::to_string(m.instrumented) << "\n";
  }
  if (!m.externals.empty() || !m.globals.empty()) os << "\n";
  for (const auto& e : m.externals) {
    os << "extern " << e.name << (e.nofree ? " nofree" : "") << "\n";
  }
  for (const auto& g : m.globals) {
    os << "global @" << g.name << " : " << g.shape.to_string() << " :"
       << ir::to_string(g.kind) << " = " << g.init << "\n";
  }
  for (const auto& f : m.functions) os << "\n" << print_function(f);
  return os.str();
}

}  // namespace safeir::text
