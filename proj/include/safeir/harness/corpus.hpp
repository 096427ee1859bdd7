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

// Synthetic mixed-language test corpus. Every case moves one object from
// its allocation site through a foreign boundary into safe code, optionally
// invalidating the pointer on the way.
//
// Permutations order the invalidation relative to the raw-to-safe cast:
//   P0  invalidate, cast, dereference
//   P1  cast, invalidate, dereference
//   P2  invalidate, dereference through the raw pointer (no cast)

#ifndef SAFEIR_HARNESS_CORPUS_HPP_
#define SAFEIR_HARNESS_CORPUS_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "safeir/ir/module.hpp"
#include "safeir/rt/interpreter.hpp"

namespace safeir::harness {

enum class AllocSite : std::uint8_t { kGlobal, kCStack, kCHeap, kRustStack, kRustHeap };
enum class DeallocSite : std::uint8_t { kNone, kCFree, kRustDealloc, kFrameReturn };
enum class Invalidation : std::uint8_t { kArithmeticOob, kDealloc, kCraftedPtr, kNone };

std::string_view to_string(AllocSite s);
std::string_view to_string(DeallocSite s);
std::string_view to_string(Invalidation i);
std::optional<AllocSite> parse_alloc_site(std::string_view s);
std::optional<DeallocSite> parse_dealloc_site(std::string_view s);
std::optional<Invalidation> parse_invalidation(std::string_view s);

struct CorpusCase {
  std::string id;
  AllocSite alloc = AllocSite::kGlobal;
  DeallocSite dealloc = DeallocSite::kNone;
  Invalidation invalidation = Invalidation::kNone;
  int permutation = 0;
  std::string entry = "main";
  std::string text;
  ir::ProgramModule program;

  bool expect_violation = false;
  /// Check expected to fire under full safeffi instrumentation.
  std::optional<ir::CheckKind> expected_check;
  /// The object dies while a safe reference to it is live.
  bool free_during_scope = false;
  /// The pointer is already invalid when it is cast to a safe pointer.
  bool invalid_before_cast = false;

  nlohmann::json manifest_entry() const;
};

/// All 45 cases in a fixed order; the output is identical on every call.
std::vector<CorpusCase> gen_corpus();

/// Writes `<id>.sir` per case plus `manifest.json`.
void write_corpus(const std::vector<CorpusCase>& corpus, const std::string& dir);
/// Reads a directory produced by write_corpus.
std::vector<CorpusCase> load_corpus(const std::string& dir);

}  // namespace safeir::harness

#endif  // SAFEIR_HARNESS_CORPUS_HPP_
