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

#include "safeir/instrument/instrument.hpp"

#include "safeir/dealloc/heap_checks.hpp"
#include "safeir/ir/validate.hpp"

namespace safeir::instrument {

using ir::CheckKind;
using ir::CheckSite;
using ir::FunctionDef;
using ir::Opcode;
using ir::PtrKind;

void AddedCounts::add(CheckKind kind) {
  switch (kind) {
    case CheckKind::kCast: ++cast; break;
    case CheckKind::kLoad: ++load; break;
    case CheckKind::kParam: ++param; break;
    case CheckKind::kReturn: ++ret; break;
    case CheckKind::kHeap: ++heap; break;
    case CheckKind::kDeref: break;
  }
}

AddedCounts& AddedCounts::operator+=(const AddedCounts& o) {
  cast += o.cast;
  load += o.load;
  param += o.param;
  ret += o.ret;
  heap += o.heap;
  return *this;
}

std::optional<double> FunctionStats::remaining_pct() const {
  if (baseline == 0) return std::nullopt;
  return 100.0 * static_cast<double>(remaining()) / static_cast<double>(baseline);
}

FunctionStats& FunctionStats::operator+=(const FunctionStats& o) {
  baseline += o.baseline;
  elided += o.elided;
  added += o.added;
  return *this;
}

FunctionStats InstrumentationStats::total() const {
  FunctionStats t;
  for (const auto& [name, s] : functions) t += s;
  return t;
}

namespace {

nlohmann::json stats_json(const FunctionStats& s) {
  nlohmann::json j;
  j["baseline"] = s.baseline;
  j["elided"] = s.elided;
  j["added"] = {{"cast", s.added.cast},   {"load", s.added.load}, {"param", s.added.param},
                {"ret", s.added.ret},     {"heap", s.added.heap}};
  if (auto pct = s.remaining_pct()) {
    j["remaining_pct"] = *pct;
  } else {
    j["remaining_pct"] = nullptr;
  }
  return j;
}

std::uint64_t access_size(const FunctionDef& f, const ir::Instruction& inst) {
  if (inst.op == Opcode::kLoad) return inst.shape.byte_size();
  return f.values[inst.operands[0]].shape.byte_size();
}

void reject_instrumented(const ir::ProgramModule& m) {
  if (m.instrumented != ir::InstrumentMode::kNone) {
    throw Error("module " + m.name + " is already instrumented (" +
                std::string(ir::to_string(m.instrumented)) + ")");
  }
  ir::require_valid(m);
}

}  // namespace

nlohmann::json InstrumentationStats::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, s] : functions) j[name] = stats_json(s);
  j["<total>"] = stats_json(total());
  return j;
}

std::vector<CheckSite> place_deref_checks(const FunctionDef& f) {
  std::vector<CheckSite> sites;
  for (const auto& bb : f.blocks) {
    for (const auto& inst : bb.insts) {
      if (!inst.is_memory_access()) continue;
      sites.push_back(
          {CheckKind::kDeref, inst.id, inst.address_operand(), access_size(f, inst), "baseline"});
    }
  }
  return sites;
}

std::vector<CheckSite> place_cast_checks(const FunctionDef& f) {
  std::vector<CheckSite> sites;
  for (const auto& bb : f.blocks) {
    for (const auto& inst : bb.insts) {
      if (inst.op != Opcode::kCastToSafe) continue;
      sites.push_back({CheckKind::kCast, inst.id, inst.operands[0],
                       ir::checked_pointee_size(inst.shape), "cast-checks"});
    }
  }
  return sites;
}

std::vector<CheckSite> place_load_checks(const FunctionDef& f, const flow::KindMap& km) {
  std::vector<CheckSite> sites;
  if (f.is_foreign()) return sites;
  for (const auto& bb : f.blocks) {
    for (const auto& inst : bb.insts) {
      if (inst.op != Opcode::kLoad || inst.shape.kind() != ir::ShapeKind::kSafePtr) continue;
      if (km.kind(inst.result) != PtrKind::kSafe) continue;
      sites.push_back({CheckKind::kLoad, inst.id, inst.result,
                       ir::checked_pointee_size(inst.shape), "load-checks"});
    }
  }
  return sites;
}

std::vector<CheckSite> place_param_checks(const FunctionDef& f) {
  std::vector<CheckSite> sites;
  if (!f.has(ir::kAttrExternVisible) || f.is_foreign() || f.is_declaration()) return sites;
  for (ir::ValueId p = 0; p < f.num_params(); ++p) {
    const auto& shape = f.values[p].shape;
    if (f.param_kinds[p] != PtrKind::kSafe || !shape.is_thin_pointer()) continue;
    sites.push_back({CheckKind::kParam, f.blocks.front().insts.front().id, p,
                     ir::checked_pointee_size(shape), "param-checks"});
  }
  return sites;
}

std::vector<CheckSite> place_return_checks(const ir::ProgramModule& m, const FunctionDef& f) {
  std::vector<CheckSite> sites;
  if (f.is_foreign()) return sites;
  for (const auto& bb : f.blocks) {
    for (const auto& inst : bb.insts) {
      if (inst.op != Opcode::kCall || inst.result == ir::kNoValue) continue;
      if (!inst.shape.is_thin_pointer()) continue;
      // Declared return kind of the callee; unknown callees fall back to
      // the kind implied by the result shape.
      if (ir::default_decl_kind(m, f, inst) != PtrKind::kSafe) continue;
      sites.push_back({CheckKind::kReturn, inst.id, inst.result,
                       ir::checked_pointee_size(inst.shape), "return-checks"});
    }
  }
  return sites;
}

InstrumentResult instrument_baseline(const ir::ProgramModule& m) {
  reject_instrumented(m);
  InstrumentResult r;
  r.module = m;
  r.module.instrumented = ir::InstrumentMode::kBaseline;
  r.stats.mode = ir::InstrumentMode::kBaseline;
  for (auto& f : r.module.functions) {
    if (f.is_declaration()) continue;
    auto sites = place_deref_checks(f);
    FunctionStats& s = r.stats.functions[f.name];
    s.baseline = sites.size();
    ir::insert_checks(f, sites);
    r.sites[f.name] = std::move(sites);
  }
  return r;
}

InstrumentResult instrument_safeffi(const ir::ProgramModule& m, bool heap_checks,
                                    const dealloc::NofreeDb& db) {
  reject_instrumented(m);
  InstrumentResult r;
  r.module = m;
  const auto mode = heap_checks ? ir::InstrumentMode::kSafeFfiHeap : ir::InstrumentMode::kSafeFfi;
  r.module.instrumented = mode;
  r.stats.mode = mode;

  dealloc::NofreeDb full_db;
  if (heap_checks) full_db = dealloc::compute_nofree(dealloc::build_call_graph(m), db);

  for (auto& f : r.module.functions) {
    if (f.is_declaration()) continue;
    const flow::KindMap km = flow::infer_kinds(m, f);
    FunctionStats& s = r.stats.functions[f.name];
    std::vector<CheckSite> sites;
    for (auto& site : place_deref_checks(f)) {
      ++s.baseline;
      if (!f.is_foreign() && flow::is_safe_pointer(km, site.value)) {
        ++s.elided;
        continue;
      }
      sites.push_back(std::move(site));
    }
    std::vector<CheckSite> added;
    for (auto&& part : {place_cast_checks(f), place_load_checks(f, km), place_param_checks(f),
                        place_return_checks(m, f)}) {
      added.insert(added.end(), part.begin(), part.end());
    }
    if (heap_checks) {
      auto heap = dealloc::insert_heap_checks(m, f, full_db, km);
      added.insert(added.end(), heap.begin(), heap.end());
    }
    for (const auto& site : added) s.added.add(site.kind);
    sites.insert(sites.end(), added.begin(), added.end());
    ir::insert_checks(f, sites);
    r.sites[f.name] = std::move(sites);
  }
  return r;
}

InstrumentResult instrument(const ir::ProgramModule& m, ir::InstrumentMode mode,
                            const dealloc::NofreeDb& db) {
  switch (mode) {
    case ir::InstrumentMode::kBaseline:
      return instrument_baseline(m);
    case ir::InstrumentMode::kSafeFfi:
      return instrument_safeffi(m, false, db);
    case ir::InstrumentMode::kSafeFfiHeap:
      return instrument_safeffi(m, true, db);
    case ir::InstrumentMode::kNone:
      break;
  }
  InstrumentResult r;
  r.module = m;
  return r;
}

}  // namespace safeir::instrument
