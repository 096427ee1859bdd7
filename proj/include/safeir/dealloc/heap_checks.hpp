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

#ifndef SAFEIR_DEALLOC_HEAP_CHECKS_HPP_
#define SAFEIR_DEALLOC_HEAP_CHECKS_HPP_

#include <string>
#include <vector>

#include "safeir/dealloc/nofree.hpp"
#include "safeir/flow/type_flow.hpp"
#include "safeir/ir/check_site.hpp"

namespace safeir::dealloc {

/// True for instructions after which a heap object may have been released:
/// heapfree, indirect calls and direct calls to MAYFREE callees.
bool may_deallocate(const ir::ProgramModule& m, const NofreeDb& db, const ir::Instruction& inst);

/// Plans one HEAP site before every load/store whose address is SAFE and
/// which some deallocating instruction can reach, either later in the same
/// block or through the block graph (loop back edges included). NOPTR
/// addresses never get heap checks: they name stack slots.
std::vector<ir::CheckSite> insert_heap_checks(const ir::ProgramModule& m,
                                              const ir::FunctionDef& f, const NofreeDb& db,
                                              const flow::KindMap& km);

/// Sets NOFREE_DECLARED on every defined function the database marks
/// NOFREE.
void annotate_nofree(ir::ProgramModule& m, const NofreeDb& db);

/// Analyses several compilation units, threading the database from one to
/// the next. Units are visited callees-first according to their cross-unit
/// calls, so the visiting order does not depend on the order given; units
/// that call each other are visited in the given order.
NofreeDb analyze_units(const std::vector<ir::ProgramModule>& units, NofreeDb db);

/// Visiting order used by analyze_units, as indexes into `units`.
std::vector<std::size_t> unit_order(const std::vector<ir::ProgramModule>& units);

}  // namespace safeir::dealloc

#endif  // SAFEIR_DEALLOC_HEAP_CHECKS_HPP_
