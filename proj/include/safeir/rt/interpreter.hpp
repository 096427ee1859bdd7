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

// Small-step interpreter for (instrumented) modules on top of the shadow
// memory model. Memory is a sparse byte image over synthetic addresses.
//
// Semantics not fixed by the IR itself:
//  - heap memory is zero-initialised and never reused;
//  - calls to externals do nothing and return zero;
//  - calls to known deallocators and heapfree go through the interceptor;
//  - comparisons are signed at the operands' integer width and unsigned on
//    pointers.

#ifndef SAFEIR_RT_INTERPRETER_HPP_
#define SAFEIR_RT_INTERPRETER_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "json.hpp"

#include "safeir/ir/module.hpp"
#include "safeir/rt/shadow.hpp"

namespace safeir::rt {

struct Violation {
  ViolationKind kind = ViolationKind::kTagMismatch;
  /// Kind of the failing check; nullopt for the free interceptor.
  std::optional<ir::CheckKind> check;
  std::string function;
  ir::InstId inst = ir::kNoInst;
  ir::SourceLocation loc;
  std::uint64_t address = 0;
  std::uint8_t expected_tag = 0;
  std::uint8_t found_tag = 0;

  /// "DEREF", "CAST", ... or "INTERCEPT".
  std::string check_name() const;
  nlohmann::json to_json() const;
};

enum class Verdict : std::uint8_t { kCleanExit, kViolation, kTimeout };

std::string_view to_string(Verdict v);

struct Counters {
  std::array<std::uint64_t, ir::kNumCheckKinds> checks{};
  /// Boundary checks, i.e. every executed check except DEREF.
  std::uint64_t ensures = 0;
  /// Executed instructions, check pseudo-instructions excluded.
  std::uint64_t instructions = 0;
  std::uint64_t heap_allocs = 0;
  std::uint64_t heap_frees = 0;

  std::uint64_t checks_of(ir::CheckKind k) const { return checks[static_cast<int>(k)]; }
  std::uint64_t total_checks() const;
  nlohmann::json to_json() const;

  friend bool operator==(const Counters&, const Counters&) = default;
};

struct Outcome {
  Verdict verdict = Verdict::kCleanExit;
  std::int64_t exit_code = 0;
  std::optional<Violation> violation;
  Counters counters;

  /// `{verdict, exit_code?, violation?, counters}`
  nlohmann::json to_json() const;
};

struct RunConfig {
  ShadowConfig shadow;
  std::uint64_t max_steps = 50'000'000;
  /// Called after every executed instruction; for invariant tests.
  std::function<void(const ShadowState&)> on_step;
};

/// Runs `entry` (whose parameters, if any, receive zero) to completion.
/// Throws Error for invalid modules, a missing entry and engine faults
/// such as indirect calls to non-functions.
Outcome execute(const ir::ProgramModule& m, const std::string& entry,
                const RunConfig& config = {});

}  // namespace safeir::rt

#endif  // SAFEIR_RT_INTERPRETER_HPP_
