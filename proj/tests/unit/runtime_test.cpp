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

#include <gtest/gtest.h>

#include "safeir/instrument/instrument.hpp"
#include "safeir/ir/errors.hpp"
#include "safeir/rt/interpreter.hpp"
#include "safeir/rt/shadow.hpp"
#include "safeir/text/text.hpp"
#include "support/fixtures.hpp"
#include "support/random_programs.hpp"

namespace safeir::rt {
namespace {

using ir::CheckKind;
using ir::InstrumentMode;

TEST(ShadowTest, LiveAllocationPassesItsOwnCheck) {
  ShadowState s;
  const std::uint64_t p = s.allocate(16, AllocKind::kHeap);
  EXPECT_NE(tag_of(p), 0);
  EXPECT_EQ(address_of(p) % 16, 0u);
  EXPECT_FALSE(s.check(p, 16).has_value());
  EXPECT_FALSE(s.check(p + 15, 1).has_value());
}

TEST(ShadowTest, OverrunIntoNeighbourFailsOnThatGranule) {
  ShadowState s(ShadowConfig{.granule = 8});
  const std::uint64_t p = s.allocate(16, AllocKind::kHeap);
  const std::uint64_t q = s.allocate(16, AllocKind::kHeap);
  const auto fault = s.check(p, 24);
  ASSERT_TRUE(fault.has_value());
  EXPECT_EQ(fault->kind, ViolationKind::kTagMismatch);
  EXPECT_EQ(fault->expected_tag, tag_of(p));
  EXPECT_EQ(fault->found_tag, tag_of(q));

  ShadowState wide;
  const std::uint64_t a = wide.allocate(16, AllocKind::kHeap);
  wide.allocate(16, AllocKind::kHeap);
  EXPECT_TRUE(wide.check(a, 24).has_value());
}

TEST(ShadowTest, NullAndCraftedPointers) {
  ShadowState s;
  const std::uint64_t p = s.allocate(32, AllocKind::kGlobal);
  EXPECT_EQ(s.check(0, 4)->kind, ViolationKind::kNullDeref);
  const auto crafted = s.check(address_of(p), 4);  // tag 0
  ASSERT_TRUE(crafted.has_value());
  EXPECT_EQ(crafted->kind, ViolationKind::kTagMismatch);
  EXPECT_EQ(crafted->found_tag, tag_of(p));
  // Tag 0 on never-allocated memory matches the granule but not a live
  // allocation.
  EXPECT_EQ(s.check(0x5000, 4)->kind, ViolationKind::kTagMismatch);
}

TEST(ShadowTest, TagsAreSequentialAndSkipZero) {
  ShadowState s;
  std::uint8_t prev = 0;
  for (int i = 0; i < 600; ++i) {
    const std::uint8_t t = tag_of(s.allocate(8, AllocKind::kHeap));
    EXPECT_NE(t, 0);
    EXPECT_NE(t, prev);
    prev = t;
  }
}

TEST(ShadowTest, InterceptorFaults) {
  ShadowState s;
  const std::uint64_t p = s.allocate(32, AllocKind::kHeap);
  EXPECT_EQ(s.intercept_free(p + 8)->kind, ViolationKind::kInvalidFree);
  EXPECT_EQ(s.intercept_free(make_tagged(address_of(p), tag_of(p) + 1))->kind,
            ViolationKind::kInvalidFree);
  const std::uint64_t st = s.allocate(8, AllocKind::kStack);
  EXPECT_EQ(s.intercept_free(st)->kind, ViolationKind::kInvalidFree);

  EXPECT_FALSE(s.intercept_free(p).has_value());
  const auto uaf = s.check(p, 4);
  ASSERT_TRUE(uaf.has_value());
  EXPECT_NE(uaf->found_tag, tag_of(p));
  EXPECT_EQ(s.intercept_free(p)->kind, ViolationKind::kDoubleFree);
}

TEST(ShadowTest, StackReleaseRetags) {
  ShadowState s;
  const std::uint64_t mark = s.stack_top();
  const std::uint64_t a = s.allocate(4, AllocKind::kStack);
  EXPECT_FALSE(s.check(a, 4).has_value());
  s.release_stack_to(mark);
  EXPECT_TRUE(s.check(a, 4).has_value());
  const std::uint64_t b = s.allocate(4, AllocKind::kStack);
  EXPECT_EQ(address_of(a), address_of(b));
  EXPECT_NE(tag_of(a), tag_of(b));
  EXPECT_TRUE(s.check(a, 4).has_value());
}

TEST(ShadowTest, RejectsBadGranules) {
  EXPECT_THROW(ShadowState(ShadowConfig{.granule = 12}), Error);
  EXPECT_THROW(ShadowState(ShadowConfig{.granule = 0}), Error);
}

Outcome run(const std::string& src, InstrumentMode mode, const std::string& entry = "main") {
  const auto m = text::parse_module(src, "t.sir");
  return execute(instrument::instrument(m, mode).module, entry);
}

TEST(InterpreterTest, LoopHoistCounters) {
  const auto m = testing::load_fixture("loop_hoist.sir");
  const auto base = execute(instrument::instrument_baseline(m).module, "main");
  const auto safe = execute(instrument::instrument_safeffi(m, false).module, "main");
  EXPECT_EQ(base.verdict, Verdict::kCleanExit);
  EXPECT_EQ(safe.verdict, Verdict::kCleanExit);
  // main's store, *p, the two field loads, then two loads per iteration.
  EXPECT_EQ(base.counters.checks_of(CheckKind::kDeref), 4u + 2 * 1000);
  EXPECT_EQ(base.counters.ensures, 0u);
  EXPECT_EQ(safe.counters.checks_of(CheckKind::kDeref), 0u);
  EXPECT_EQ(safe.counters.ensures, 1u);
  EXPECT_EQ(safe.counters.checks_of(CheckKind::kCast), 1u);
  EXPECT_EQ(base.counters.instructions, safe.counters.instructions);
}

TEST(InterpreterTest, ReturnCheckCatchesUseAfterReturn) {
  const auto m = testing::load_fixture("use_after_return.sir");
  const auto plain = execute(m, "foo");
  EXPECT_EQ(plain.verdict, Verdict::kCleanExit);
  EXPECT_EQ(plain.exit_code, 42);

  const auto base = execute(instrument::instrument_baseline(m).module, "foo");
  ASSERT_EQ(base.verdict, Verdict::kViolation);
  EXPECT_EQ(base.violation->check, CheckKind::kDeref);
  EXPECT_EQ(base.violation->loc.line, 42u);

  const auto safe = execute(instrument::instrument_safeffi(m, false).module, "foo");
  ASSERT_EQ(safe.verdict, Verdict::kViolation);
  EXPECT_EQ(safe.violation->check, CheckKind::kReturn);
  EXPECT_EQ(safe.violation->loc.line, 41u);
  EXPECT_EQ(safe.violation->function, "foo");
}

constexpr const char* kDanglingCast = R"(module dangling
fn c_make() -> *i32 :raw foreign {
entry:
  %n = const i64 16
  %h = heapalloc %n : *i32
  heapfree %h
  ret %h
}
fn main() -> i32 {
entry:
  %r = call *i32 @c_make()
  %s = castsafe %r : &i32
  %v = load i32, %s
  ret %v
}
)";

TEST(InterpreterTest, DanglingCastReportsAtTheCast) {
  const auto safe = run(kDanglingCast, InstrumentMode::kSafeFfi);
  ASSERT_EQ(safe.verdict, Verdict::kViolation);
  EXPECT_EQ(safe.violation->kind, ViolationKind::kTagMismatch);
  EXPECT_EQ(safe.violation->check, CheckKind::kCast);
  EXPECT_EQ(safe.violation->loc.line, 12u);
  const auto base = run(kDanglingCast, InstrumentMode::kBaseline);
  ASSERT_EQ(base.verdict, Verdict::kViolation);
  EXPECT_EQ(base.violation->check, CheckKind::kDeref);
  EXPECT_EQ(base.violation->loc.line, 13u);
  EXPECT_NE(base.violation->found_tag, base.violation->expected_tag);
  // Nothing checks the access without instrumentation.
  EXPECT_EQ(run(kDanglingCast, InstrumentMode::kNone).verdict, Verdict::kCleanExit);
}

TEST(InterpreterTest, StorePastHeapObject) {
  const char* src = R"(module oob
fn main() -> i32 {
entry:
  %n = const i64 16
  %a = heapalloc %n : *i32
  %b = heapalloc %n : *i32
  %p = gep %a, 16 : *i32
  %v = const i32 9
  store %v, %p
  %z = const i32 0
  ret %z
}
)";
  const auto o = run(src, InstrumentMode::kBaseline);
  ASSERT_EQ(o.verdict, Verdict::kViolation);
  EXPECT_EQ(o.violation->check, CheckKind::kDeref);
  EXPECT_EQ(o.violation->loc.line, 9u);
  EXPECT_EQ(o.violation->expected_tag + 1, o.violation->found_tag);
}

TEST(InterpreterTest, OverflowInsideLastGranuleIsMissed) {
  const char* src = R"(module honest
fn main() -> i32 {
entry:
  %n = const i64 12
  %a = heapalloc %n : *i32
  %p = gep %a, 12 : *i32
  %v = load i32, %p
  ret %v
}
)";
  EXPECT_EQ(run(src, InstrumentMode::kBaseline).verdict, Verdict::kCleanExit);
}

TEST(InterpreterTest, InterceptorRunsWithoutInstrumentation) {
  const char* src = R"(module df
fn __rust_dealloc(%p: *i8 :raw) known_dealloc
fn main() {
entry:
  %n = const i64 8
  %a = heapalloc %n : *i8
  call @__rust_dealloc(%a)
  heapfree %a
  ret
}
)";
  const auto o = run(src, InstrumentMode::kNone);
  ASSERT_EQ(o.verdict, Verdict::kViolation);
  EXPECT_EQ(o.violation->kind, ViolationKind::kDoubleFree);
  EXPECT_FALSE(o.violation->check.has_value());
  EXPECT_EQ(o.violation->check_name(), "INTERCEPT");
  EXPECT_EQ(o.violation->loc.line, 8u);
  EXPECT_EQ(o.counters.heap_frees, 1u);
}

TEST(InterpreterTest, CallsGlobalsAndIndirectCalls) {
  const char* src = R"(module calls
extern ext
global @g : i64 :noptr = 40
fn add2(%x: i64) -> i64 {
entry:
  %two = const i64 2
  %y = add i64 %x, %two
  ret %y
}
fn main() -> i64 {
entry:
  %gp = globaladdr @g : &i64
  %v = load i64, %gp
  %fp = globaladdr @add2 : fnptr
  %r = call i64 %fp(%v)
  call @ext()
  %neg = const i64 -1
  %lt = cmp lt %neg, %r
  condbr %lt, yes, no
yes:
  ret %r
no:
  ret %neg
}
)";
  const auto o = run(src, InstrumentMode::kBaseline);
  EXPECT_EQ(o.verdict, Verdict::kCleanExit);
  EXPECT_EQ(o.exit_code, 42);
}

TEST(InterpreterTest, TimeoutAndErrors) {
  const auto m = text::parse_module(R"(module spin
fn main() {
entry:
  br loop
loop:
  br loop
}
)");
  RunConfig cfg;
  cfg.max_steps = 1000;
  EXPECT_EQ(execute(m, "main", cfg).verdict, Verdict::kTimeout);
  EXPECT_THROW(execute(m, "nope"), Error);
  const auto bad = text::parse_module(R"(module bad
fn main() {
entry:
  %s = alloca fnptr
  %f = load fnptr, %s
  call %f()
  ret
}
)");
  EXPECT_THROW(execute(bad, "main"), Error);
}

TEST(InterpreterTest, DeterministicAndConserving) {
  for (std::uint32_t seed = 1; seed <= 150; ++seed) {
    testing::RandomProgram gen(seed, 40, seed % 5 == 0);
    const auto m = text::parse_module(gen.generate());
    for (const auto mode : {InstrumentMode::kNone, InstrumentMode::kBaseline,
                            InstrumentMode::kSafeFfiHeap}) {
      const auto im = instrument::instrument(m, mode).module;
      RunConfig cfg;
      cfg.max_steps = 3000;
      std::uint64_t steps = 0;
      cfg.on_step = [&](const ShadowState& s) {
        ++steps;
        ASSERT_EQ(s.live_bytes(), s.allocated_bytes() - s.released_bytes());
      };
      const auto a = execute(im, "f", cfg);
      const auto b = execute(im, "f", cfg);
      EXPECT_EQ(a.to_json(), b.to_json()) << seed;
      EXPECT_LE(steps, 2 * (a.counters.instructions + a.counters.total_checks()));
    }
  }
}

TEST(InterpreterTest, OutcomeJson) {
  const auto o = run(kDanglingCast, InstrumentMode::kSafeFfi);
  const auto j = o.to_json();
  EXPECT_EQ(j["verdict"], "VIOLATION");
  EXPECT_EQ(j["violation"]["check"], "CAST");
  EXPECT_EQ(j["violation"]["kind"], "TAG_MISMATCH");
  EXPECT_EQ(j["counters"]["ensures"], 1);
  EXPECT_FALSE(j.contains("exit_code"));
}

}  // namespace
}  // namespace safeir::rt
