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

#include "safeir/rt/interpreter.hpp"

#include <map>
#include <unordered_map>
#include <vector>

#include "safeir/ir/errors.hpp"
#include "safeir/ir/validate.hpp"

namespace safeir::rt {

using ir::Opcode;

std::string Violation::check_name() const {
  if (!check) return "INTERCEPT";
  switch (*check) {
    case ir::CheckKind::kDeref: return "DEREF";
    case ir::CheckKind::kCast: return "CAST";
    case ir::CheckKind::kLoad: return "LOAD";
    case ir::CheckKind::kParam: return "PARAM";
    case ir::CheckKind::kReturn: return "RETURN";
    case ir::CheckKind::kHeap: return "HEAP";
  }
  return "?";
}

nlohmann::json Violation::to_json() const {
  return {{"kind", std::string(to_string(kind))},
          {"check", check_name()},
          {"function", function},
          {"inst", inst},
          {"location", loc.to_string()},
          {"line", loc.line},
          {"address", address},
          {"expected_tag", expected_tag},
          {"found_tag", found_tag}};
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kCleanExit: return "CLEAN_EXIT";
    case Verdict::kViolation: return "VIOLATION";
    case Verdict::kTimeout: return "TIMEOUT";
  }
  return "?";
}

std::uint64_t Counters::total_checks() const {
  std::uint64_t n = 0;
  for (auto c : checks) n += c;
  return n;
}

nlohmann::json Counters::to_json() const {
  nlohmann::json per_kind = nlohmann::json::object();
  for (int k = 0; k < ir::kNumCheckKinds; ++k) {
    per_kind[std::string(ir::to_string(static_cast<ir::CheckKind>(k)))] = checks[k];
  }
  return {{"checks", per_kind},       {"ensures", ensures},
          {"instructions", instructions}, {"heap_allocs", heap_allocs},
          {"heap_frees", heap_frees}};
}

nlohmann::json Outcome::to_json() const {
  nlohmann::json j;
  j["verdict"] = std::string(to_string(verdict));
  if (verdict == Verdict::kCleanExit) j["exit_code"] = exit_code;
  if (violation) j["violation"] = violation->to_json();
  j["counters"] = counters.to_json();
  return j;
}

namespace {

constexpr std::uint64_t kCodeBase = 0x1000;
constexpr std::uint64_t kCodeStride = 16;

struct Slot {
  std::uint64_t bits = 0;
  std::vector<std::uint8_t> wide;  // values wider than 8 bytes
};

std::uint64_t width_mask(std::uint32_t w) {
  return w >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1;
}

std::int64_t sign_extend(std::uint64_t v, std::uint32_t w) {
  if (w == 0 || w >= 64) return static_cast<std::int64_t>(v);
  const std::uint64_t m = std::uint64_t{1} << (w - 1);
  v &= width_mask(w);
  return static_cast<std::int64_t>((v ^ m) - m);
}

struct Frame {
  const ir::FunctionDef* f = nullptr;
  std::vector<Slot> vals;
  ir::BlockId block = 0;
  std::size_t ip = 0;
  std::uint64_t stack_mark = 0;
  ir::ValueId ret_to = ir::kNoValue;  // caller value receiving the result
};

class Machine {
 public:
  Machine(const ir::ProgramModule& m, const RunConfig& config)
      : m_(m), config_(config), shadow_(config.shadow) {
    for (const auto& g : m_.globals) {
      const std::uint64_t p = shadow_.allocate(g.shape.byte_size(), AllocKind::kGlobal);
      globals_[g.name] = p;
      const std::uint64_t n = std::min<std::uint64_t>(8, g.shape.byte_size());
      write_bits(p, static_cast<std::uint64_t>(g.init), n);
    }
    std::uint64_t code = kCodeBase;
    for (const auto& f : m_.functions) {
      code_[f.name] = code;
      by_code_[code] = f.name;
      code += kCodeStride;
    }
    for (const auto& e : m_.externals) {
      code_[e.name] = code;
      by_code_[code] = e.name;
      code += kCodeStride;
    }
    if (code > config.shadow.global_base) throw Error("too many functions for the code region");
  }

  Outcome run(const std::string& entry) {
    const ir::FunctionDef* f = m_.find_function(entry);
    if (f == nullptr) throw Error("entry function '" + entry + "' not found");
    if (f->is_declaration()) throw Error("entry function '" + entry + "' has no body");
    push_frame(*f, ir::kNoValue);
    while (!frames_.empty()) {
      if (steps_ >= config_.max_steps) {
        out_.verdict = Verdict::kTimeout;
        return out_;
      }
      Frame& fr = frames_.back();
      const ir::Instruction& inst = fr.f->blocks[fr.block].insts[fr.ip];
      ++steps_;
      if (inst.op == Opcode::kCheck) {
        ++out_.counters.checks[static_cast<int>(inst.check)];
        if (inst.check != ir::CheckKind::kDeref) ++out_.counters.ensures;
      } else {
        ++out_.counters.instructions;
      }
      if (!step(fr, inst)) return out_;
      if (config_.on_step) config_.on_step(shadow_);
    }
    return out_;
  }

 private:
  void push_frame(const ir::FunctionDef& f, ir::ValueId ret_to) {
    Frame fr;
    fr.f = &f;
    fr.vals.resize(f.values.size());
    fr.stack_mark = shadow_.stack_top();
    fr.ret_to = ret_to;
    frames_.push_back(std::move(fr));
  }

  // Memory image -----------------------------------------------------------

  std::uint8_t read_byte(std::uint64_t a) const {
    auto it = mem_.find(a);
    return it == mem_.end() ? 0 : it->second;
  }

  void write_bits(std::uint64_t p, std::uint64_t v, std::uint64_t n) {
    const std::uint64_t a = address_of(p);
    for (std::uint64_t i = 0; i < n; ++i) mem_[(a + i) & kAddressMask] = (v >> (8 * i)) & 0xff;
  }

  Slot load(std::uint64_t p, std::uint64_t n) const {
    const std::uint64_t a = address_of(p);
    Slot s;
    if (n <= 8) {
      for (std::uint64_t i = 0; i < n; ++i) {
        s.bits |= std::uint64_t{read_byte((a + i) & kAddressMask)} << (8 * i);
      }
    } else {
      s.wide.resize(n);
      for (std::uint64_t i = 0; i < n; ++i) s.wide[i] = read_byte((a + i) & kAddressMask);
    }
    return s;
  }

  void store(std::uint64_t p, const Slot& s, std::uint64_t n) {
    if (n <= 8) {
      write_bits(p, s.bits, n);
      return;
    }
    const std::uint64_t a = address_of(p);
    for (std::uint64_t i = 0; i < n; ++i) {
      mem_[(a + i) & kAddressMask] = i < s.wide.size() ? s.wide[i] : 0;
    }
  }

  static Slot zero_of(const ir::TypeShape& shape) {
    Slot s;
    if (shape.byte_size() > 8) s.wide.assign(shape.byte_size(), 0);
    return s;
  }

  // Execution --------------------------------------------------------------

  bool fail(const Frame& fr, const ir::Instruction& inst, const Fault& fault,
            std::optional<ir::CheckKind> check) {
    Violation v;
    v.kind = fault.kind;
    v.check = check;
    v.function = fr.f->name;
    v.inst = inst.op == Opcode::kCheck ? inst.anchor : inst.id;
    v.loc = inst.loc;
    v.address = fault.address;
    v.expected_tag = fault.expected_tag;
    v.found_tag = fault.found_tag;
    out_.verdict = Verdict::kViolation;
    out_.violation = std::move(v);
    return false;
  }

  std::int64_t int_value(const Frame& fr, ir::ValueId v) const {
    const auto& shape = fr.f->values[v].shape;
    return shape.is_int() ? sign_extend(fr.vals[v].bits, shape.width())
                          : static_cast<std::int64_t>(fr.vals[v].bits);
  }

  void jump(Frame& fr, ir::BlockId to) {
    const ir::BlockId from = fr.block;
    const auto& insts = fr.f->blocks[to].insts;
    std::vector<std::pair<ir::ValueId, Slot>> incoming;
    std::size_t i = 0;
    for (; i < insts.size() && insts[i].op == Opcode::kPhi; ++i) {
      const auto& phi = insts[i];
      for (std::size_t k = 0; k < phi.blocks.size(); ++k) {
        if (phi.blocks[k] == from) {
          incoming.emplace_back(phi.result, fr.vals[phi.operands[k]]);
          break;
        }
      }
    }
    for (auto& [v, s] : incoming) fr.vals[v] = std::move(s);
    out_.counters.instructions += i;
    fr.block = to;
    fr.ip = i;
  }

  bool call(Frame& fr, const ir::Instruction& inst) {
    std::string callee = inst.symbol;
    if (inst.is_indirect_call()) {
      auto it = by_code_.find(address_of(fr.vals[inst.operands[0]].bits));
      if (it == by_code_.end()) {
        throw Error("indirect call in " + fr.f->name + " to a non-function address");
      }
      callee = it->second;
    }
    const auto args = inst.call_args();
    const ir::FunctionDef* f = m_.find_function(callee);
    if (f != nullptr && !f->is_declaration()) {
      std::vector<Slot> vals;
      for (ir::ValueId a : args) vals.push_back(fr.vals[a]);
      ++fr.ip;
      push_frame(*f, inst.result);
      Frame& callee_fr = frames_.back();
      for (std::size_t i = 0; i < vals.size() && i < f->num_params(); ++i) {
        callee_fr.vals[i] = std::move(vals[i]);
      }
      return true;
    }
    if (f != nullptr && f->has(ir::kAttrKnownDealloc)) {
      if (args.empty()) throw Error("deallocator " + callee + " called without a pointer");
      if (auto fault = shadow_.intercept_free(fr.vals[args[0]].bits)) {
        return fail(fr, inst, *fault, std::nullopt);
      }
      ++out_.counters.heap_frees;
    }
    if (inst.result != ir::kNoValue) fr.vals[inst.result] = zero_of(inst.shape);
    ++fr.ip;
    return true;
  }

  bool ret(const ir::Instruction& inst) {
    Frame done = std::move(frames_.back());
    frames_.pop_back();
    shadow_.release_stack_to(done.stack_mark);
    Slot value;
    if (!inst.operands.empty()) value = done.vals[inst.operands[0]];
    if (frames_.empty()) {
      out_.verdict = Verdict::kCleanExit;
      out_.exit_code = inst.operands.empty() ? 0 : int_value(done, inst.operands[0]);
      return true;
    }
    if (done.ret_to != ir::kNoValue) frames_.back().vals[done.ret_to] = std::move(value);
    return true;
  }

  bool step(Frame& fr, const ir::Instruction& inst) {
    auto& vals = fr.vals;
    auto bits = [&](std::size_t k) { return vals[inst.operands[k]].bits; };
    switch (inst.op) {
      case Opcode::kAlloca:
        vals[inst.result].bits = shadow_.allocate(inst.shape.byte_size(), AllocKind::kStack);
        break;
      case Opcode::kHeapAlloc:
        vals[inst.result].bits = shadow_.allocate(bits(0), AllocKind::kHeap);
        ++out_.counters.heap_allocs;
        break;
      case Opcode::kHeapFree:
        if (auto fault = shadow_.intercept_free(bits(0))) {
          return fail(fr, inst, *fault, std::nullopt);
        }
        ++out_.counters.heap_frees;
        break;
      case Opcode::kLoad:
        vals[inst.result] = load(bits(0), inst.shape.byte_size());
        break;
      case Opcode::kStore:
        store(bits(1), vals[inst.operands[0]],
              fr.f->values[inst.operands[0]].shape.byte_size());
        break;
      case Opcode::kGep: {
        const std::int64_t off =
            inst.is_static_gep() ? inst.imm : int_value(fr, inst.operands[1]);
        const std::uint64_t base = bits(0);
        vals[inst.result].bits =
            make_tagged(address_of(base) + static_cast<std::uint64_t>(off), tag_of(base));
        break;
      }
      case Opcode::kBitcast:
      case Opcode::kCastToSafe:
      case Opcode::kPtrToInt:
      case Opcode::kIntToPtr:
        vals[inst.result] = vals[inst.operands[0]];
        break;
      case Opcode::kPhi:
        // Phis are evaluated on block entry; reaching one here means the
        // entry block starts with a phi, which validation rejects.
        throw Error("phi executed outside block entry in " + fr.f->name);
      case Opcode::kCall:
        return call(fr, inst);
      case Opcode::kBinOp: {
        const std::uint64_t a = bits(0), b = bits(1);
        std::uint64_t r = 0;
        switch (inst.binop) {
          case ir::BinOpKind::kAdd: r = a + b; break;
          case ir::BinOpKind::kSub: r = a - b; break;
          case ir::BinOpKind::kMul: r = a * b; break;
          case ir::BinOpKind::kAnd: r = a & b; break;
          case ir::BinOpKind::kOr: r = a | b; break;
          case ir::BinOpKind::kXor: r = a ^ b; break;
        }
        vals[inst.result].bits = r & width_mask(inst.shape.width());
        break;
      }
      case Opcode::kCmp: {
        const auto& shape = fr.f->values[inst.operands[0]].shape;
        bool r = false;
        if (shape.is_int()) {
          const std::int64_t a = int_value(fr, inst.operands[0]);
          const std::int64_t b = int_value(fr, inst.operands[1]);
          r = compare(inst.pred, a, b);
        } else {
          r = compare(inst.pred, bits(0), bits(1));
        }
        vals[inst.result].bits = r ? 1 : 0;
        break;
      }
      case Opcode::kConst:
        vals[inst.result].bits =
            static_cast<std::uint64_t>(inst.imm) & width_mask(inst.shape.width());
        break;
      case Opcode::kGlobalAddr: {
        auto g = globals_.find(inst.symbol);
        vals[inst.result].bits = g != globals_.end() ? g->second : code_.at(inst.symbol);
        break;
      }
      case Opcode::kBr:
        jump(fr, inst.blocks[0]);
        return true;
      case Opcode::kCondBr:
        jump(fr, (bits(0) & 1) != 0 ? inst.blocks[0] : inst.blocks[1]);
        return true;
      case Opcode::kRet:
        return ret(inst);
      case Opcode::kCheck:
        if (auto fault = shadow_.check(bits(0), static_cast<std::uint64_t>(inst.imm))) {
          return fail(fr, inst, *fault, inst.check);
        }
        break;
    }
    ++fr.ip;
    return true;
  }

  template <typename T>
  static bool compare(ir::CmpPred p, T a, T b) {
    switch (p) {
      case ir::CmpPred::kEq: return a == b;
      case ir::CmpPred::kNe: return a != b;
      case ir::CmpPred::kLt: return a < b;
      case ir::CmpPred::kLe: return a <= b;
      case ir::CmpPred::kGt: return a > b;
      case ir::CmpPred::kGe: return a >= b;
    }
    return false;
  }

  const ir::ProgramModule& m_;
  const RunConfig& config_;
  ShadowState shadow_;
  std::unordered_map<std::uint64_t, std::uint8_t> mem_;
  std::map<std::string, std::uint64_t, std::less<>> globals_;
  std::map<std::string, std::uint64_t, std::less<>> code_;
  std::unordered_map<std::uint64_t, std::string> by_code_;
  std::vector<Frame> frames_;
  std::uint64_t steps_ = 0;
  Outcome out_;
};

}  // namespace

Outcome execute(const ir::ProgramModule& m, const std::string& entry, const RunConfig& config) {
  ir::require_valid(m);
  Machine machine(m, config);
  return machine.run(entry);
}

}  // namespace safeir::rt
