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

#include <algorithm>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "safeir/flow/type_flow.hpp"
#include "safeir/ir/errors.hpp"
#include "safeir/ir/validate.hpp"
#include "safeir/text/text.hpp"
#include "support/fixtures.hpp"
#include "support/kind_oracle.hpp"
#include "support/random_programs.hpp"

namespace safeir::flow {
namespace {

using ir::FunctionDef;
using ir::Instruction;
using ir::Opcode;
using ir::PtrKind;
using ir::ProgramModule;
using text::parse_module;

std::map<std::string, PtrKind> kinds_by_name(const ProgramModule& m, const FunctionDef& f) {
  const KindMap km = infer_kinds(m, f);
  std::map<std::string, PtrKind> out;
  for (ir::ValueId v = 0; v < f.values.size(); ++v) out[f.values[v].name] = km.kind(v);
  return out;
}

TEST(DeriveGepKindTest, Examples) {
  const auto pair = text::parse_shape("{i32, i32}");
  EXPECT_EQ(derive_gep_kind(PtrKind::kSafe, pair, 4, 4), PtrKind::kSafe);
  EXPECT_EQ(derive_gep_kind(PtrKind::kSafe, pair, std::nullopt, 4), PtrKind::kRaw);
  EXPECT_EQ(derive_gep_kind(PtrKind::kSafe, pair, 8, 4), PtrKind::kRaw);
  EXPECT_EQ(derive_gep_kind(PtrKind::kSafe, pair, -4, 4), PtrKind::kRaw);
  EXPECT_EQ(derive_gep_kind(PtrKind::kNoPtr, pair, 0, 8), PtrKind::kNoPtr);
  EXPECT_EQ(derive_gep_kind(PtrKind::kRaw, pair, 0, 4), PtrKind::kRaw);
}

TEST(InferKindsTest, ForwardingExamples) {
  const auto m = parse_module(R"(module t
fn f(%p: &{i32, i32} :safe, %r: *i32 :raw, %c: i1) {
entry:
  %q = bitcast %p : &i8
  %field = gep %p, 4 : &i32
  %n = const i64 1
  %dyn = gep %p, %n : &i32
  %rq = bitcast %r : &i32
  condbr %c, left, right
left:
  br join
right:
  br join
join:
  %mix = phi &i32 [%field, left], [%rq, right]
  %same = phi &i32 [%field, left], [%field, right]
  ret
}
)");
  const auto k = kinds_by_name(m, m.functions[0]);
  EXPECT_EQ(k.at("q"), PtrKind::kSafe);
  EXPECT_EQ(k.at("field"), PtrKind::kSafe);
  EXPECT_EQ(k.at("dyn"), PtrKind::kRaw);
  EXPECT_EQ(k.at("rq"), PtrKind::kRaw);
  EXPECT_EQ(k.at("mix"), PtrKind::kRaw);
  EXPECT_EQ(k.at("same"), PtrKind::kSafe);
  EXPECT_EQ(k.at("n"), PtrKind::kNonPtr);
}

TEST(InferKindsTest, LoopCarriedPhiStaysSafe) {
  const auto m = parse_module(R"(module t
fn f(%p: &i32 :safe, %c: i1) {
entry:
  br loop
loop:
  %cur = phi &i32 [%p, entry], [%next, loop]
  %next = bitcast %cur : &i32
  condbr %c, loop, out
out:
  ret
}
)");
  const auto k = kinds_by_name(m, m.functions[0]);
  EXPECT_EQ(k.at("cur"), PtrKind::kSafe);
  EXPECT_EQ(k.at("next"), PtrKind::kSafe);

  // Enumerating every path through the two-block loop: the value reaching
  // %cur is %p after any number of bitcasts, so SAFE is the only kind ever
  // observed. A RAW value on the back edge must poison both.
  const auto raw = parse_module(R"(module t
fn f(%p: &i32 :safe, %c: i1) {
entry:
  br loop
loop:
  %cur = phi &i32 [%p, entry], [%next, loop]
  %n = const i64 4
  %next = gep %cur, %n : &i32
  condbr %c, loop, out
out:
  ret
}
)");
  const auto kr = kinds_by_name(raw, raw.functions[0]);
  EXPECT_EQ(kr.at("cur"), PtrKind::kRaw);
  EXPECT_EQ(kr.at("next"), PtrKind::kRaw);
}

TEST(InferKindsTest, IsSafePointerQuery) {
  const auto m = parse_module(R"(module t
fn f(%p: &i32 :safe) {
entry:
  %n = const i64 8
  %h = heapalloc %n : *i32
  %s = castsafe %h : &i32
  %d = gep %p, %n : &i32
  %slot = alloca {i32, i32}
  ret
}
)");
  const FunctionDef& f = m.functions[0];
  const KindMap km = infer_kinds(m, f);
  auto id = [&](const char* name) {
    for (ir::ValueId v = 0; v < f.values.size(); ++v) {
      if (f.values[v].name == name) return v;
    }
    throw std::runtime_error(name);
  };
  EXPECT_TRUE(is_safe_pointer(km, id("s")));
  EXPECT_FALSE(is_safe_pointer(km, id("h")));
  EXPECT_FALSE(is_safe_pointer(km, id("d")));
  EXPECT_TRUE(is_safe_pointer(km, id("slot")));
  EXPECT_THROW(is_safe_pointer(km, 1000), AnalysisError);
}

TEST(InferKindsTest, GlobalsAndForeignCoercion) {
  const auto m = parse_module(R"(module t
global @g : i32 :safe = 0
global @graw : i64 :raw = 0
fn f() {
entry:
  %a = globaladdr @g : &i32
  %b = globaladdr @graw : *i64
  ret
}
fn c(%p: *i32 :noptr) foreign {
entry:
  %a = globaladdr @g : &i32
  %s = alloca i32
  %q = bitcast %p : *i8
  ret
}
)");
  const auto k = kinds_by_name(m, m.functions[0]);
  EXPECT_EQ(k.at("a"), PtrKind::kSafe);
  EXPECT_EQ(k.at("b"), PtrKind::kRaw);
  const auto kc = kinds_by_name(m, m.functions[1]);
  EXPECT_EQ(kc.at("a"), PtrKind::kRaw);
  EXPECT_EQ(kc.at("s"), PtrKind::kRaw);
  EXPECT_EQ(kc.at("p"), PtrKind::kRaw);
  EXPECT_EQ(kc.at("q"), PtrKind::kRaw);
}

TEST(InferKindsTest, UnseededPhiCycleIsAnError) {
  // Unreachable cycle of phis with no seeded input anywhere.
  const auto m = text::parse_module_unchecked(R"(module t
fn f() {
entry:
  ret
a:
  %x = phi &i32 [%y, b]
  br b
b:
  %y = phi &i32 [%x, a]
  br a
}
)");
  EXPECT_THROW(infer_kinds(m, m.functions[0]), AnalysisError);
}

using testing::oracle_kinds;

TEST(InferKindsTest, MatchesNaivePropagationOracle) {
  std::mt19937 order_rng(7);
  int checked = 0;
  for (std::uint32_t seed = 1; seed <= 600; ++seed) {
    testing::RandomProgram gen(seed, 40, seed % 5 == 0);
    const std::string src = gen.generate();
    ProgramModule m;
    ASSERT_NO_THROW(m = parse_module(src)) << src;
    const FunctionDef& f = *m.find_function("f");
    std::size_t count = 0;
    for (const auto& bb : f.blocks) count += bb.insts.size();
    ASSERT_LE(count, 50u) << src;
    const KindMap km = infer_kinds(m, f);
    ASSERT_EQ(km.size(), f.values.size());
    ASSERT_EQ(km.kinds(), oracle_kinds(m, f, order_rng)) << src;
    if (f.is_foreign()) {
      for (PtrKind k : km.kinds()) ASSERT_NE(k, PtrKind::kSafe) << src;
    }
    ++checked;
  }
  EXPECT_EQ(checked, 600);
}

TEST(InferKindsTest, AddingRawPhiInputNeverRaisesKinds) {
  for (std::uint32_t seed = 1; seed <= 300; ++seed) {
    testing::RandomProgram gen(seed, 40, false);
    ProgramModule m = parse_module(gen.generate());
    FunctionDef& f = *m.find_function("f");
    const KindMap before = infer_kinds(m, f);
    // Redirect the back-edge input of every pointer phi to a fresh RAW value
    // (inttoptr placed in the body block) and compare pointwise.
    const ir::BlockId body = *f.find_block("body");
    const ir::ValueId zero = f.add_value("rawint", ir::TypeShape::Int(64));
    Instruction c;
    c.op = Opcode::kConst;
    c.result = zero;
    c.shape = ir::TypeShape::Int(64);
    c.imm = 64;
    std::vector<Instruction> extra{c};
    bool touched = false;
    const ir::BlockId loop = *f.find_block("loop");
    for (auto& inst : f.blocks[loop].insts) {
      if (inst.op != Opcode::kPhi) continue;
      const ir::ValueId raw = f.add_value("raw" + std::to_string(inst.result), inst.shape);
      Instruction i2p;
      i2p.op = Opcode::kIntToPtr;
      i2p.result = raw;
      i2p.operands = {zero};
      i2p.shape = inst.shape;
      extra.push_back(i2p);
      for (std::size_t k = 0; k < inst.blocks.size(); ++k) {
        if (inst.blocks[k] == body) inst.operands[k] = raw;
      }
      touched = true;
    }
    if (!touched) continue;
    auto& insts = f.blocks[body].insts;
    insts.insert(insts.begin(), extra.begin(), extra.end());
    ir::renumber(f);
    ASSERT_TRUE(ir::validate_module(m).empty());
    const KindMap after = infer_kinds(m, f);
    for (ir::ValueId v = 0; v < before.size(); ++v) {
      if (before.kind(v) == PtrKind::kRaw) ASSERT_EQ(after.kind(v), PtrKind::kRaw);
    }
  }
}

TEST(InferKindsTest, LoopHoistKinds) {
  const auto m = testing::load_fixture("loop_hoist.sir");
  const auto k = kinds_by_name(m, *m.find_function("foo"));
  EXPECT_EQ(k.at("raw1"), PtrKind::kRaw);
  for (const char* safe : {"p", "safe1", "a", "b", "c", "d"}) EXPECT_EQ(k.at(safe), PtrKind::kSafe) << safe;
  const auto hist = infer_kinds(m, *m.find_function("foo")).histogram();
  EXPECT_EQ(hist[static_cast<int>(PtrKind::kRaw)], 1u);
}

}  // namespace
}  // namespace safeir::flow
