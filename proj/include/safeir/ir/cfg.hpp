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

#ifndef SAFEIR_IR_CFG_HPP_
#define SAFEIR_IR_CFG_HPP_

#include <vector>

#include "safeir/ir/module.hpp"

namespace safeir::ir {

/// Block-level control-flow graph of one function.
class Cfg {
 public:
  explicit Cfg(const FunctionDef& f);

  std::size_t size() const { return succs_.size(); }
  const std::vector<BlockId>& succs(BlockId b) const { return succs_[b]; }
  const std::vector<BlockId>& preds(BlockId b) const { return preds_[b]; }

  /// Blocks reachable from the entry block.
  const std::vector<bool>& reachable_from_entry() const { return reachable_; }

  /// Blocks reachable by following at least one edge out of `from`.
  /// `from` itself is included only when it lies on a cycle.
  std::vector<bool> reachable_after(BlockId from) const;

  /// Immediate dominators of entry-reachable blocks; the entry maps to
  /// itself and unreachable blocks to kNoBlock.
  std::vector<BlockId> immediate_dominators() const;

  static constexpr BlockId kNoBlock = static_cast<BlockId>(-1);

 private:
  std::vector<std::vector<BlockId>> succs_;
  std::vector<std::vector<BlockId>> preds_;
  std::vector<bool> reachable_;
};

/// True when `a` dominates `b` under the given immediate-dominator tree.
bool dominates(const std::vector<BlockId>& idom, BlockId a, BlockId b);

}  // namespace safeir::ir

#endif  // SAFEIR_IR_CFG_HPP_
