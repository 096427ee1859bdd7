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

#include "safeir/dealloc/heap_checks.hpp"

#include <map>

#include "safeir/ir/cfg.hpp"

namespace safeir::dealloc {

using ir::Opcode;

bool may_deallocate(const ir::ProgramModule& m, const NofreeDb& db, const ir::Instruction& inst) {
  if (inst.op == Opcode::kHeapFree) return true;
  if (inst.op != Opcode::kCall) return false;
  if (inst.is_indirect_call()) return true;
  return callee_verdict(m, db, inst.symbol) == FreeVerdict::kMayfree;
}

namespace {

std::uint64_t access_size(const ir::FunctionDef& f, const ir::Instruction& inst) {
  if (inst.op == Opcode::kLoad) return inst.shape.byte_size();
  return f.values[inst.operands[0]].shape.byte_size();
}

}  // namespace

std::vector<ir::CheckSite> insert_heap_checks(const ir::ProgramModule& m,
                                              const ir::FunctionDef& f, const NofreeDb& db,
                                              const flow::KindMap& km) {
  std::vector<ir::CheckSite> sites;
  if (f.is_declaration()) return sites;
  const ir::Cfg cfg(f);

  // Blocks reachable from some deallocating instruction, and for each block
  // the position of its first deallocating instruction.
  std::vector<bool> reached(f.blocks.size(), false);
  std::vector<std::size_t> first_free(f.blocks.size(), static_cast<std::size_t>(-1));
  for (ir::BlockId b = 0; b < f.blocks.size(); ++b) {
    const auto& insts = f.blocks[b].insts;
    for (std::size_t i = 0; i < insts.size(); ++i) {
      if (!may_deallocate(m, db, insts[i])) continue;
      if (first_free[b] == static_cast<std::size_t>(-1)) first_free[b] = i;
    }
    if (first_free[b] == static_cast<std::size_t>(-1)) continue;
    const auto after = cfg.reachable_after(b);
    for (ir::BlockId t = 0; t < f.blocks.size(); ++t) {
      if (after[t]) reached[t] = true;
    }
  }

  for (ir::BlockId b = 0; b < f.blocks.size(); ++b) {
    const auto& insts = f.blocks[b].insts;
    for (std::size_t i = 0; i < insts.size(); ++i) {
      const auto& inst = insts[i];
      if (!inst.is_memory_access()) continue;
      const ir::ValueId addr = inst.address_operand();
      if (km.kind(addr) != ir::PtrKind::kSafe) continue;
      const bool after_free_here = first_free[b] != static_cast<std::size_t>(-1) && first_free[b] < i;
      if (!after_free_here && !reached[b]) continue;
      sites.push_back(ir::CheckSite{ir::CheckKind::kHeap, inst.id, addr, access_size(f, inst),
                                    "heap-checks"});
    }
  }
  return sites;
}

void annotate_nofree(ir::ProgramModule& m, const NofreeDb& db) {
  for (auto& f : m.functions) {
    if (f.is_declaration()) continue;
    if (db.lookup(f.name) == FreeVerdict::kNofree) f.attrs |= ir::kAttrNofreeDeclared;
  }
}

std::vector<std::size_t> unit_order(const std::vector<ir::ProgramModule>& units) {
  std::map<std::string, std::size_t> owner;
  for (std::size_t u = 0; u < units.size(); ++u) {
    for (const auto& f : units[u].functions) {
      if (!f.is_declaration()) owner.emplace(f.name, u);
    }
  }
  // deps[u] = units whose functions u calls.
  std::vector<std::vector<bool>> deps(units.size(), std::vector<bool>(units.size(), false));
  for (std::size_t u = 0; u < units.size(); ++u) {
    for (const auto& e : units[u].externals) {
      auto it = owner.find(e.name);
      if (it != owner.end() && it->second != u) deps[u][it->second] = true;
    }
  }
  // Repeatedly take the first unit (in the given order) whose dependencies
  // are all done; on a cycle take the first remaining unit.
  std::vector<std::size_t> order;
  std::vector<bool> done(units.size(), false);
  while (order.size() < units.size()) {
    std::size_t pick = units.size();
    for (std::size_t u = 0; u < units.size() && pick == units.size(); ++u) {
      if (done[u]) continue;
      bool ready = true;
      for (std::size_t v = 0; v < units.size(); ++v) {
        if (deps[u][v] && !done[v]) ready = false;
      }
      if (ready) pick = u;
    }
    if (pick == units.size()) {
      for (std::size_t u = 0; u < units.size(); ++u) {
        if (!done[u]) {
          pick = u;
          break;
        }
      }
    }
    done[pick] = true;
    order.push_back(pick);
  }
  return order;
}

NofreeDb analyze_units(const std::vector<ir::ProgramModule>& units, NofreeDb db) {
  for (std::size_t u : unit_order(units)) db = compute_nofree(build_call_graph(units[u]), db);
  return db;
}

}  // namespace safeir::dealloc
