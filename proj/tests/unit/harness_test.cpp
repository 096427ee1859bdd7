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

#include <filesystem>
#include <set>

#include "safeir/harness/corpus.hpp"
#include "safeir/harness/parity.hpp"
#include "safeir/instrument/instrument.hpp"
#include "safeir/rt/interpreter.hpp"
#include "safeir/text/text.hpp"
#include "support/fixtures.hpp"

namespace safeir {
namespace {

using harness::CorpusCase;
using ir::InstrumentMode;

std::size_t instruction_count(const ir::ProgramModule& m) {
  std::size_t n = 0;
  for (const auto& f : m.functions) {
    for (const auto& bb : f.blocks) n += bb.insts.size();
  }
  return n;
}

const std::vector<CorpusCase>& corpus() {
  static const auto c = harness::gen_corpus();
  return c;
}

const CorpusCase& by_id(const std::string& id) {
  for (const auto& c : corpus()) {
    if (c.id == id) return c;
  }
  throw std::runtime_error("no case " + id);
}

TEST(Corpus, ShapeAndCounts) {
  ASSERT_EQ(corpus().size(), 45u);
  std::size_t violations = 0;
  std::set<std::string> ids;
  for (const auto& c : corpus()) {
    violations += c.expect_violation;
    EXPECT_TRUE(ids.insert(c.id).second) << c.id;
    EXPECT_LE(instruction_count(c.program), 60u) << c.id;
    EXPECT_EQ(c.expect_violation, c.invalidation != harness::Invalidation::kNone) << c.id;
  }
  EXPECT_EQ(violations, 35u);
}

TEST(Corpus, Deterministic) {
  const auto again = harness::gen_corpus();
  ASSERT_EQ(again.size(), corpus().size());
  for (std::size_t i = 0; i < again.size(); ++i) {
    EXPECT_EQ(again[i].id, corpus()[i].id);
    EXPECT_EQ(again[i].text, corpus()[i].text);
  }
}

TEST(Corpus, ExcludedCombinations) {
  for (const auto& c : corpus()) {
    if (c.invalidation != harness::Invalidation::kDealloc) {
      EXPECT_NE(c.permutation, 1) << c.id;
      EXPECT_EQ(c.dealloc, harness::DeallocSite::kNone) << c.id;
      continue;
    }
    EXPECT_NE(c.alloc, harness::AllocSite::kGlobal) << c.id;
    const bool stack =
        c.alloc == harness::AllocSite::kCStack || c.alloc == harness::AllocSite::kRustStack;
    EXPECT_EQ(stack, c.dealloc == harness::DeallocSite::kFrameReturn) << c.id;
  }
}

// Independent check of every expected verdict: the per-access baseline
// flags a case iff it is expected to, and without instrumentation only the
// free interceptor could fire, which no case triggers.
TEST(Corpus, ExpectedVerdictsMatchBaselineRuns) {
  for (const auto& c : corpus()) {
    const auto plain = rt::execute(c.program, c.entry);
    EXPECT_EQ(plain.verdict, rt::Verdict::kCleanExit) << c.id;
    const auto base = instrument::instrument_baseline(c.program);
    const auto o = rt::execute(base.module, c.entry);
    EXPECT_EQ(o.verdict == rt::Verdict::kViolation, c.expect_violation) << c.id;
    if (o.violation) {
      EXPECT_EQ(o.violation->kind, rt::ViolationKind::kTagMismatch) << c.id;
      EXPECT_EQ(o.violation->check, ir::CheckKind::kDeref) << c.id;
    }
  }
}

TEST(Corpus, ExpectedCheckFiresUnderHeapMode) {
  for (const auto& c : corpus()) {
    const auto r = instrument::instrument(c.program, InstrumentMode::kSafeFfiHeap);
    const auto o = rt::execute(r.module, c.entry);
    if (!c.expected_check) {
      EXPECT_FALSE(o.violation.has_value()) << c.id;
      continue;
    }
    ASSERT_TRUE(o.violation.has_value()) << c.id;
    EXPECT_EQ(o.violation->check, c.expected_check) << c.id;
  }
}

TEST(Corpus, RustHeapFreedByCBeforeCast) {
  const auto& c = by_id("dealloc-rust-heap-c-free-p0");
  EXPECT_TRUE(c.expect_violation);
  EXPECT_EQ(c.expected_check, ir::CheckKind::kCast);
  EXPECT_TRUE(c.invalid_before_cast);
  EXPECT_FALSE(c.free_during_scope);
}

TEST(Corpus, TextRoundTrips) {
  for (const auto& c : corpus()) {
    const std::string once = text::print_module(c.program);
    EXPECT_EQ(text::print_module(text::parse_module(once)), once) << c.id;
  }
}

TEST(Corpus, WriteAndLoad) {
  const auto dir = std::filesystem::temp_directory_path() / "safeir_corpus_test";
  std::filesystem::remove_all(dir);
  harness::write_corpus(corpus(), dir.string());
  const auto loaded = harness::load_corpus(dir.string());
  ASSERT_EQ(loaded.size(), corpus().size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    const auto& a = corpus()[i];
    const auto& b = loaded[i];
    EXPECT_EQ(a.text, b.text);
    EXPECT_EQ(a.manifest_entry(), b.manifest_entry());
  }
  std::filesystem::remove_all(dir);
  EXPECT_THROW(harness::load_corpus(dir.string()), Error);
}

TEST(Parity, FullCorpus) {
  const auto report =
      harness::evaluate_parity(corpus(), {InstrumentMode::kNone, InstrumentMode::kBaseline,
                                          InstrumentMode::kSafeFfi, InstrumentMode::kSafeFfiHeap});
  EXPECT_TRUE(report.passes_bar());
  EXPECT_TRUE(report.parity_mismatches.empty());
  const auto& base = report.summary.at(InstrumentMode::kBaseline);
  EXPECT_EQ(base.true_positives, 35u);
  EXPECT_EQ(base.true_negatives, 10u);
  const auto& heap = report.summary.at(InstrumentMode::kSafeFfiHeap);
  EXPECT_EQ(heap.false_positives + heap.false_negatives, 0u);
  EXPECT_EQ(report.summary.at(InstrumentMode::kNone).false_negatives, 35u);

  std::set<std::string> missed;
  for (const auto& c : report.cases) {
    const auto& r = c.runs.at(InstrumentMode::kSafeFfi);
    if (r.classification == harness::Classification::kFalseNegative) {
      EXPECT_TRUE(r.expected_miss) << c.id;
      missed.insert(c.id);
    }
  }
  const std::set<std::string> fds = {
      "dealloc-c-heap-c-free-p1", "dealloc-c-heap-rust-dealloc-p1",
      "dealloc-rust-heap-c-free-p1", "dealloc-rust-heap-rust-dealloc-p1"};
  EXPECT_EQ(missed, fds);
  EXPECT_EQ(report.summary.at(InstrumentMode::kSafeFfi).expected_misses, 4u);

  const auto j = report.to_json();
  EXPECT_EQ(j["cases"].size(), 45u);
  EXPECT_EQ(j["summary"]["safeffi"]["fn"], 4);
  EXPECT_TRUE(j["passes_bar"].get<bool>());
  EXPECT_NE(harness::format_parity_table(report).find("bar: PASS"), std::string::npos);
}

TEST(Parity, EmptyModeList) {
  const auto report = harness::evaluate_parity(corpus(), {});
  EXPECT_TRUE(report.cases.empty());
  EXPECT_TRUE(report.summary.empty());
  EXPECT_TRUE(report.passes_bar());
}

TEST(Parity, BarFailsOnWrongExpectation) {
  std::vector<CorpusCase> one = {by_id("none-c-heap-p0")};
  one[0].expect_violation = true;
  const auto report = harness::evaluate_parity(one, {InstrumentMode::kBaseline});
  EXPECT_EQ(report.summary.at(InstrumentMode::kBaseline).false_negatives, 1u);
  EXPECT_FALSE(report.passes_bar());
}

TEST(Stats, LoopMicrobenchmark) {
  const auto m = testing::load_fixture("loop_hoist.sir");
  std::map<InstrumentMode, instrument::InstrumentationStats> st;
  std::map<InstrumentMode, rt::Outcome> out;
  for (auto mode : {InstrumentMode::kBaseline, InstrumentMode::kSafeFfi}) {
    const auto r = instrument::instrument(m, mode);
    st[mode] = r.stats;
    out[mode] = rt::execute(r.module, "main");
  }
  const auto j = harness::emit_stats(st, out);
  EXPECT_DOUBLE_EQ(j["modes"]["baseline"]["remaining_pct"].get<double>(), 100.0);
  // Five accesses in foo plus main's store; only the cast remains.
  EXPECT_DOUBLE_EQ(j["modes"]["safeffi"]["remaining_pct"].get<double>(), 100.0 / 6.0);
  EXPECT_DOUBLE_EQ(j["modes"]["safeffi"]["static"]["foo"]["remaining_pct"].get<double>(), 20.0);
  EXPECT_EQ(j["modes"]["baseline"]["dynamic"]["total_checks"], 2004);
  EXPECT_EQ(j["modes"]["safeffi"]["dynamic"]["total_checks"], 1);
  EXPECT_DOUBLE_EQ(j["dynamic_ratio"]["safeffi"].get<double>(), 1.0 / 2004.0);
  EXPECT_DOUBLE_EQ(j["dynamic_ratio"]["baseline"].get<double>(), 1.0);
  EXPECT_FALSE(harness::format_stats_table(j).empty());
}

TEST(Stats, AllRawProgramKeepsEverything) {
  const auto m = text::parse_module(
      "module raw\n"
      "fn f(%p: *i32 :raw) {\nentry:\n  %v = const i32 1\n  store %v, %p\n"
      "  %w = load i32, %p\n  ret\n}\n");
  const auto r = instrument::instrument(m, InstrumentMode::kSafeFfi);
  const auto j = harness::emit_stats({{InstrumentMode::kSafeFfi, r.stats}}, {});
  EXPECT_DOUBLE_EQ(j["modes"]["safeffi"]["remaining_pct"].get<double>(), 100.0);
  EXPECT_TRUE(j["dynamic_ratio"].empty());
}

}  // namespace
}  // namespace safeir
