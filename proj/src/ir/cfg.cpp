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

#include "safeir/ir/cfg.hpp"

#include <algorithm>

namespace safeir::ir {

Cfg::Cfg(const FunctionDef& f)
    : succs_(f.blocks.size()), preds_(f.blocks.size()), reachable_(f.blocks.size()) {
  for (std::size_t b = 0; b < f.blocks.size(); ++b) {
    const auto& insts = f.blocks[b].insts;
    if (insts.empty() || !insts.back().is_terminator()) continue;
    for (BlockId t : insts.back().blocks) {
      if (t >= f.blocks.size()) continue;
      if (std::find(succs_[b].begin(), succs_[b].end(), t) == succs_[b].end()) {
        succs_[b].push_back(t);
        preds_[t].push_back(static_cast<BlockId>(b));
      }
    }
  }
  if (f.blocks.empty()) return;
  std::vector<BlockId> work{0};
  reachable_[0] = true;
  while (!work.empty()) {
    BlockId b = work.back();
    work.pop_back();
    for (BlockId s : succs_[b]) {
      if (!reachable_[s]) {
        reachable_[s] = true;
        work.push_back(s);
      }
    }
  }
}

std::vector<bool> Cfg::reachable_after(BlockId from) const {
  std::vector<bool> seen(size());
  std::vector<BlockId> work(succs_[from].begin(), succs_[from].end());
  for (BlockId s : work) seen[s] = true;
  while (!work.empty()) {
    BlockId b = work.back();
    work.pop_back();
    for (BlockId s : succs_[b]) {
      if (!seen[s]) {
        seen[s] = true;
        work.push_back(s);
      }
    }
  }
  return seen;
}

std::vector<BlockId> Cfg::immediate_dominators() const {
  // Cooper, Harvey and Kennedy's iterative algorithm over reverse postorder.
  const std::size_t n = size();
  std::vector<BlockId> idom(n, kNoBlock);
  if (n == 0) return idom;

  std::vector<BlockId> postorder;
  std::vector<bool> visited(n);
  std::vector<std::pair<BlockId, std::size_t>> stack{{0, 0}};
  visited[0] = true;
  while (!stack.empty()) {
    auto& [b, next] = stack.back();
    if (next < succs_[b].size()) {
      BlockId s = succs_[b][next++];
      if (!visited[s]) {
        visited[s] = true;
        stack.push_back({s, 0});
      }
    } else {
      postorder.push_back(b);
      stack.pop_back();
    }
  }
  std::vector<std::size_t> po_index(n, 0);
  for (std::size_t i = 0; i < postorder.size(); ++i) po_index[postorder[i]] = i;

  auto intersect = [&](BlockId a, BlockId b) {
    while (a != b) {
      while (po_index[a] < po_index[b]) a = idom[a];
      while (po_index[b] < po_index[a]) b = idom[b];
    }
    return a;
  };

  idom[0] = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = postorder.rbegin(); it != postorder.rend(); ++it) {
      const BlockId b = *it;
      if (b == 0) continue;
      BlockId new_idom = kNoBlock;
      for (BlockId p : preds_[b]) {
        if (idom[p] == kNoBlock) continue;
        new_idom = new_idom == kNoBlock ? p : intersect(p, new_idom);
      }
      if (new_idom != idom[b]) {
        idom[b] = new_idom;
        changed = true;
      }
    }
  }
  return idom;
}

bool dominates(const std::vector<BlockId>& idom, BlockId a, BlockId b) {
  if (idom[b] == Cfg::kNoBlock || idom[a] == Cfg::kNoBlock) return false;
  while (true) {
    if (a == b) return true;
    if (b == 0) return false;
    b = idom[b];
  }
}

}  // namespace safeir::ir
