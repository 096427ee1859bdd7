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

// Instrumentation passes. The baseline pass checks every load and store.
// The safeffi pass drops the checks on SAFE/NOPTR addresses and instead
// validates pointers where they enter the safe world: at raw-to-safe casts,
// when safe pointers are loaded from memory, at extern-visible entry points,
// after calls returning safe pointers and, optionally, before safe accesses
// that a deallocation may have invalidated.

#ifndef SAFEIR_INSTRUMENT_INSTRUMENT_HPP_
#define SAFEIR_INSTRUMENT_INSTRUMENT_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "safeir/dealloc/nofree.hpp"
#include "safeir/flow/type_flow.hpp"
#include "safeir/ir/check_site.hpp"

namespace safeir::instrument {

struct AddedCounts {
  std::size_t cast = 0;
  std::size_t load = 0;
  std::size_t param = 0;
  std::size_t ret = 0;
  std::size_t heap = 0;

  std::size_t total() const { return cast + load + param + ret + heap; }
  void add(ir::CheckKind kind);
  AddedCounts& operator+=(const AddedCounts& o);
  friend bool operator==(const AddedCounts&, const AddedCounts&) = default;
};

struct FunctionStats {
  std::size_t baseline = 0;
  std::size_t elided = 0;
  AddedCounts added;

  std::size_t remaining() const { return baseline - elided + added.total(); }
  /// remaining / baseline in percent; nullopt when the baseline is empty.
  std::optional<double> remaining_pct() const;
  FunctionStats& operator+=(const FunctionStats& o);
  friend bool operator==(const FunctionStats&, const FunctionStats&) = default;
};

struct InstrumentationStats {
  ir::InstrumentMode mode = ir::InstrumentMode::kNone;
  std::map<std::string, FunctionStats> functions;

  FunctionStats total() const;
  /// `{fn: {baseline, elided, added: {cast, load, param, ret, heap},
  /// remaining_pct}, ..., "<total>": {...}}`
  nlohmann::json to_json() const;
};

struct InstrumentResult {
  ir::ProgramModule module;
  InstrumentationStats stats;
  /// Sites per function, in the uninstrumented numbering.
  std::map<std::string, std::vector<ir::CheckSite>> sites;
};

/// Per-access DEREF sites for every load and store, foreign code included.
std::vector<ir::CheckSite> place_deref_checks(const ir::FunctionDef& f);
std::vector<ir::CheckSite> place_cast_checks(const ir::FunctionDef& f);
std::vector<ir::CheckSite> place_load_checks(const ir::FunctionDef& f, const flow::KindMap& km);
std::vector<ir::CheckSite> place_param_checks(const ir::FunctionDef& f);
std::vector<ir::CheckSite> place_return_checks(const ir::ProgramModule& m,
                                               const ir::FunctionDef& f);

/// Both passes reject modules that are already instrumented or invalid.
InstrumentResult instrument_baseline(const ir::ProgramModule& m);

/// With `heap_checks`, the database is first completed by analysing `m`'s
/// call graph; missing externals count as MAYFREE.
InstrumentResult instrument_safeffi(const ir::ProgramModule& m, bool heap_checks,
                                    const dealloc::NofreeDb& db = {});

/// Dispatches on mode; kNone returns an unmodified copy with empty stats.
InstrumentResult instrument(const ir::ProgramModule& m, ir::InstrumentMode mode,
                            const dealloc::NofreeDb& db = {});

}  // namespace safeir::instrument

#endif  // SAFEIR_INSTRUMENT_INSTRUMENT_HPP_
