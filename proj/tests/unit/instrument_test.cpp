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

#include <random>

#include <gtest/gtest.h>

#include "safeir/dealloc/heap_checks.hpp"
#include "safeir/instrument/instrument.hpp"
#include "safeir/ir/cfg.hpp"
#include "safeir/ir/validate.hpp"
#include "safeir/text/text.hpp"
#include "support/dealloc_oracles.hpp"
#include "support/fixtures.hpp"
#include "support/random_programs.hpp"

namespace safeir::instrument {
namespace {

using ir::CheckKind;
using ir::InstrumentMode;

std::size_t count_checks(const ir::FunctionDef& f, CheckKind kind) {
  std::size_t n = 0;
  for (const auto& bb : f.blocks) {
    for (const auto& inst : bb.insts) n += inst.op == ir::Opcode::kCheck && inst.check == kind;
  }
  return n;
}

TEST(InstrumentTest, LoopDerefSitesCollapseIntoOneCast) {
  const auto m = testing::load_fixture("loop_hoist.sir");
  const auto base = instrument_baseline(m);
  EXPECT_EQ(count_checks(*base.module.find_function("foo"), CheckKind::kDeref), 5u);
  EXPECT_EQ(base.stats.functions.at("foo").baseline, 5u);

  const auto safe = instrument_safeffi(m, false);
  const auto& foo = *safe.module.find_function("foo");
  EXPECT_EQ(count_checks(foo, CheckKind::kDeref), 0u);
  EXPECT_EQ(count_checks(foo, CheckKind::kCast), 1u);
  const auto& st = safe.stats.functions.at("foo");
  EXPECT_EQ(st.baseline, 5u);
  EXPECT_EQ(st.elided, 5u);
  EXPECT_EQ(st.added, (AddedCounts{1, 0, 0, 0, 0}));
  EXPECT_DOUBLE_EQ(*st.remaining_pct(), 20.0);
  const auto& cast = safe.sites.at("foo");
  ASSERT_EQ(cast.size(), 1u);
  EXPECT_EQ(cast[0].size, 16u);

  // do_some is nofree, c_create has no accesses: no heap checks either.
  const auto heap = instrument_safeffi(m, true);
  EXPECT_EQ(heap.stats.functions.at("foo").added, (AddedCounts{1, 0, 0, 0, 0}));
  EXPECT_EQ(heap.module.instrumented, InstrumentMode::kSafeFfiHeap);
}

TEST(InstrumentTest, ReturnCheckAfterDerive) {
  const auto m = testing::load_fixture("use_after_return.sir");
  const auto r = instrument_safeffi(m, false);
  const auto& foo = r.sites.at("foo");
  ASSERT_EQ(foo.size(), 1u);
  EXPECT_EQ(foo[0].kind, CheckKind::kReturn);
  EXPECT_EQ(foo[0].size, 4u);
  EXPECT_EQ(count_checks(*r.module.find_function("derive"), CheckKind::kCast), 1u);
  // The RETURN check is printed right after the call it guards.
  const std::string text = text::print_module(r.module);
  EXPECT_NE(text.find("%b = call &i32 @derive(%a)\n  ensure %b, 4 !ret\n"), std::string::npos)
      << text;
}

TEST(InstrumentTest, ParamAndLoadChecks) {
  const auto m = text::parse_module(R"(module m
fn api(%p: &&i32 :safe, %q: *i32 :raw, %n: i32) -> i32 extern_visible {
entry:
  %inner = load &i32, %p
  %v = load i32, %inner
  %w = load i32, %q
  %s = add i32 %v, %w
  ret %s
}
fn internal(%p: &i32 :safe) -> i32 {
entry:
  %v = load i32, %p
  ret %v
}
)");
  const auto r = instrument_safeffi(m, false);
  const auto& api = r.stats.functions.at("api");
  EXPECT_EQ(api.baseline, 3u);
  EXPECT_EQ(api.elided, 2u);
  EXPECT_EQ(api.added, (AddedCounts{0, 1, 1, 0, 0}));
  EXPECT_EQ(r.stats.functions.at("internal").added.total(), 0u);
  const auto& f = *r.module.find_function("api");
  EXPECT_EQ(f.blocks[0].insts[0].op, ir::Opcode::kCheck);
  EXPECT_EQ(f.blocks[0].insts[0].check, CheckKind::kParam);
  EXPECT_EQ(f.blocks[0].insts[0].imm, 8);
  EXPECT_TRUE(ir::validate_module(r.module).empty());
}

TEST(InstrumentTest, ForeignCodeKeepsEveryCheck) {
  const auto m = text::parse_module(R"(module m
fn c(%p: *i32 :raw) foreign {
entry:
  %s = alloca i32
  %v = load i32, %p
  store %v, %s
  ret
}
)");
  const auto r = instrument_safeffi(m, true);
  const auto& st = r.stats.functions.at("c");
  EXPECT_EQ(st.baseline, 2u);
  EXPECT_EQ(st.elided, 0u);
  EXPECT_DOUBLE_EQ(*st.remaining_pct(), 100.0);
}

TEST(InstrumentTest, AllSafeStackProgramElidesEverything) {
  const auto m = text::parse_module(R"(module m
fn f() -> i64 {
entry:
  %a = alloca i64
  %b = alloca {i64, i64, i64}
  %k = const i64 3
  store %k, %a
  %f = gep %b, 8 : &i64
  store %k, %f
  %x = load i64, %a
  ret %x
}
)");
  const auto r = instrument_safeffi(m, true);
  const auto& st = r.stats.functions.at("f");
  EXPECT_EQ(st.baseline, 3u);
  EXPECT_EQ(st.added.total(), 0u);
  EXPECT_DOUBLE_EQ(*st.remaining_pct(), 0.0);
}

TEST(InstrumentTest, StatsJsonShape) {
  InstrumentationStats s;
  s.mode = InstrumentMode::kSafeFfi;
  s.functions["a"] = FunctionStats{4, 3, AddedCounts{1, 0, 0, 1, 0}};
  s.functions["b"] = FunctionStats{0, 0, AddedCounts{}};
  const auto j = s.to_json();
  EXPECT_EQ(j["a"]["baseline"], 4);
  EXPECT_EQ(j["a"]["added"]["ret"], 1);
  EXPECT_DOUBLE_EQ(j["a"]["remaining_pct"].get<double>(), 75.0);
  EXPECT_TRUE(j["b"]["remaining_pct"].is_null());
  EXPECT_EQ(j["<total>"]["elided"], 3);
  EXPECT_EQ(s.total().remaining(), 3u);
}

TEST(InstrumentTest, RejectsInstrumentedModules) {
  const auto m = testing::load_fixture("loop_hoist.sir");
  const auto once = instrument_baseline(m);
  EXPECT_THROW(instrument_baseline(once.module), Error);
  EXPECT_THROW(instrument_safeffi(once.module, true), Error);
  const auto none = instrument(m, InstrumentMode::kNone);
  EXPECT_TRUE(ir::structurally_equal(none.module, m));
  EXPECT_TRUE(none.stats.functions.empty());
}

// Every baseline site is either kept or elided, and only accesses through
// elidable addresses outside foreign code are elided.
TEST(InstrumentTest, ElisionPartitionsBaselineSites) {
  for (std::uint32_t seed = 1; seed <= 300; ++seed) {
    testing::RandomProgram gen(seed, 40, seed % 4 == 0);
    const auto m = text::parse_module(gen.generate());
    const auto base = instrument_baseline(m);
    for (const auto mode : {InstrumentMode::kSafeFfi, InstrumentMode::kSafeFfiHeap}) {
      const auto r = instrument(m, mode);
      ASSERT_TRUE(ir::validate_module(r.module).empty()) << seed;
      for (const auto& f : m.functions) {
        if (f.is_declaration()) continue;
        const auto km = flow::infer_kinds(m, f);
        const auto& st = r.stats.functions.at(f.name);
        EXPECT_EQ(st.baseline, base.stats.functions.at(f.name).baseline);
        std::size_t kept = 0;
        for (const auto& s : r.sites.at(f.name)) {
          if (s.kind != CheckKind::kDeref) continue;
          ++kept;
          EXPECT_TRUE(f.is_foreign() || !flow::is_safe_pointer(km, s.value));
        }
        EXPECT_EQ(kept + st.elided, st.baseline);
        std::size_t checks = 0;
        for (const auto& bb : r.module.find_function(f.name)->blocks) {
          for (const auto& inst : bb.insts) checks += inst.op == ir::Opcode::kCheck;
        }
        EXPECT_EQ(checks, st.remaining());
      }
      // Instrumented output survives a text round trip.
      const auto again = text::parse_module(text::print_module(r.module));
      EXPECT_TRUE(ir::structurally_equal(again, r.module)) << seed;
    }
  }
}

// With heap checks, every SAFE access that a freeing call can precede is
// immediately preceded by a HEAP check.
TEST(InstrumentTest, HeapModeGuardsEveryReachableSafeAccess) {
  std::mt19937 rng(77);
  for (int round = 0; round < 300; ++round) {
    const auto cfg = testing::random_cfg(rng, 2 + rng() % 11);
    const auto m = text::parse_module(cfg.text);
    const auto r = instrument_safeffi(m, true);
    const auto& f = r.module.functions[0];
    const ir::Cfg g(f);
    std::vector<bool> after(f.blocks.size(), false);
    for (ir::BlockId s = 0; s < f.blocks.size(); ++s) {
      bool frees = false;
      for (const auto& inst : f.blocks[s].insts) {
        frees |= inst.op == ir::Opcode::kCall && inst.symbol == "c_free";
      }
      if (!frees) continue;
      const auto reach = g.reachable_after(s);
      for (ir::BlockId t = 0; t < f.blocks.size(); ++t) after[t] = after[t] || reach[t];
    }
    for (ir::BlockId b = 0; b < f.blocks.size(); ++b) {
      bool freed = after[b];
      const auto& insts = f.blocks[b].insts;
      for (std::size_t i = 0; i < insts.size(); ++i) {
        const auto& inst = insts[i];
        if (inst.op == ir::Opcode::kCall && inst.symbol == "c_free") freed = true;
        if (!inst.is_memory_access() || !freed) continue;
        if (f.values[inst.address_operand()].shape.kind() != ir::ShapeKind::kSafePtr) continue;
        if (inst.address_operand() != 0) continue;  // only %p is SAFE here
        ASSERT_GT(i, 0u);
        EXPECT_EQ(insts[i - 1].op, ir::Opcode::kCheck) << cfg.text;
        EXPECT_EQ(insts[i - 1].check, CheckKind::kHeap) << cfg.text;
      }
    }
  }
}

}  // namespace
}  // namespace safeir::instrument
