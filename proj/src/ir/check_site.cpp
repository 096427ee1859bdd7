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

#include "safeir/ir/check_site.hpp"

#include <map>

#include "safeir/ir/errors.hpp"

namespace safeir::ir {

namespace {

Instruction make_check(const CheckSite& site, const SourceLocation& loc) {
  Instruction c;
  c.op = Opcode::kCheck;
  c.check = site.kind;
  c.operands = {site.value};
  c.imm = static_cast<std::int64_t>(site.size);
  c.loc = loc;
  return c;
}

}  // namespace

void insert_checks(FunctionDef& f, const std::vector<CheckSite>& sites) {
  if (f.is_declaration()) {
    if (!sites.empty()) throw ValidationError("checks planned for declaration " + f.name);
    return;
  }
  std::map<InstId, std::vector<const CheckSite*>> before;
  std::map<InstId, std::vector<const CheckSite*>> after;
  std::vector<const CheckSite*> entry;
  for (const auto& s : sites) {
    if (s.size == 0) {
      throw ValidationError("zero-sized " + std::string(to_string(s.kind)) + " check in " +
                            f.name);
    }
    switch (s.kind) {
      case CheckKind::kParam:
        entry.push_back(&s);
        break;
      case CheckKind::kLoad:
      case CheckKind::kReturn:
        after[s.anchor].push_back(&s);
        break;
      default:
        before[s.anchor].push_back(&s);
        break;
    }
  }

  std::size_t placed = entry.size();
  for (std::size_t b = 0; b < f.blocks.size(); ++b) {
    std::vector<Instruction> out;
    auto& insts = f.blocks[b].insts;
    if (b == 0) {
      const SourceLocation loc = insts.empty() ? f.loc : insts.front().loc;
      for (const CheckSite* s : entry) out.push_back(make_check(*s, loc));
    }
    for (auto& inst : insts) {
      if (auto it = before.find(inst.id); it != before.end()) {
        for (const CheckSite* s : it->second) out.push_back(make_check(*s, inst.loc));
        placed += it->second.size();
      }
      const InstId id = inst.id;
      const SourceLocation loc = inst.loc;
      out.push_back(std::move(inst));
      if (auto it = after.find(id); it != after.end()) {
        for (const CheckSite* s : it->second) out.push_back(make_check(*s, loc));
        placed += it->second.size();
      }
    }
    insts = std::move(out);
  }
  if (placed != sites.size()) {
    throw ValidationError("check site anchored at an unknown instruction in " + f.name);
  }
  renumber(f);
}

}  // namespace safeir::ir
