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

#ifndef SAFEIR_HARNESS_PARITY_HPP_
#define SAFEIR_HARNESS_PARITY_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "safeir/dealloc/nofree.hpp"
#include "safeir/harness/corpus.hpp"
#include "safeir/instrument/instrument.hpp"
#include "safeir/rt/interpreter.hpp"

namespace safeir::harness {

enum class Classification : std::uint8_t {
  kTruePositive,
  kTrueNegative,
  kFalsePositive,
  kFalseNegative,
};

std::string_view to_string(Classification c);

struct RunSummary {
  rt::Verdict verdict = rt::Verdict::kCleanExit;
  std::optional<rt::Violation> violation;
  Classification classification = Classification::kTrueNegative;
  /// A miss of a free-during-scope case by safeffi without heap checks.
  bool expected_miss = false;

  nlohmann::json to_json() const;
};

struct CaseResult {
  std::string id;
  bool expect_violation = false;
  bool free_during_scope = false;
  std::map<ir::InstrumentMode, RunSummary> runs;
};

struct ModeSummary {
  std::size_t true_positives = 0;
  std::size_t true_negatives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  /// False negatives that are free-during-scope misses.
  std::size_t expected_misses = 0;

  nlohmann::json to_json() const;
};

struct ParityReport {
  std::vector<ir::InstrumentMode> modes;
  std::vector<CaseResult> cases;
  std::map<ir::InstrumentMode, ModeSummary> summary;
  /// Case ids where baseline and safeffi-heap differ in verdict or
  /// violation kind; empty unless both modes ran.
  std::vector<std::string> parity_mismatches;
  double seconds = 0.0;

  /// Baseline and safeffi-heap: no false positives or negatives and no
  /// parity mismatch. Safeffi: no false positives, and every miss is a
  /// free-during-scope case.
  bool passes_bar() const;
  nlohmann::json to_json() const;
};

/// Instruments every case in every mode and runs it. Instrumentation and
/// engine errors propagate.
ParityReport evaluate_parity(const std::vector<CorpusCase>& corpus,
                             const std::vector<ir::InstrumentMode>& modes,
                             const dealloc::NofreeDb& db = {});

/// Per-mode static and dynamic check counts for one program. Dynamic
/// counts are present for modes with an outcome; "dynamic_ratio" relates
/// executed checks to the baseline run.
nlohmann::json emit_stats(const std::map<ir::InstrumentMode, instrument::InstrumentationStats>& stat,
                          const std::map<ir::InstrumentMode, rt::Outcome>& outcomes);

/// Human-readable tables for terminals.
std::string format_parity_table(const ParityReport& report);
std::string format_stats_table(const nlohmann::json& stats);

}  // namespace safeir::harness

#endif  // SAFEIR_HARNESS_PARITY_HPP_
