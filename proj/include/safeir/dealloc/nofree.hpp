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

// Call-graph deallocation analysis. A function is NOFREE when no path in
// the call graph reaches a deallocation: a known deallocator, a heapfree
// instruction, an indirect or unresolved call, or an external without a
// NOFREE verdict.

#ifndef SAFEIR_DEALLOC_NOFREE_HPP_
#define SAFEIR_DEALLOC_NOFREE_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "safeir/ir/errors.hpp"
#include "safeir/ir/module.hpp"

namespace safeir::dealloc {

enum class FreeVerdict : std::uint8_t { kNofree, kMayfree };

std::string_view to_string(FreeVerdict v);

struct NofreeEntry {
  FreeVerdict verdict = FreeVerdict::kMayfree;
  std::string unit;

  friend bool operator==(const NofreeEntry&, const NofreeEntry&) = default;
};

/// Persisted function-name -> verdict map shared between compilation units.
class NofreeDb {
 public:
  std::optional<FreeVerdict> lookup(std::string_view name) const;
  const NofreeEntry* find(std::string_view name) const;

  /// Inserts or replaces an entry; callers that must not lose MAYFREE
  /// information use merge() instead.
  void set(const std::string& name, FreeVerdict verdict, const std::string& unit);

  /// Conservative union: MAYFREE wins on conflict; the unit of the winning
  /// entry is kept.
  void merge(const NofreeDb& other);
  void merge_entry(const std::string& name, const NofreeEntry& entry);

  const std::map<std::string, NofreeEntry, std::less<>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const NofreeDb&, const NofreeDb&) = default;

 private:
  std::map<std::string, NofreeEntry, std::less<>> entries_;
};

class DbParseError : public Error {
 public:
  DbParseError(const std::string& file, std::size_t line, const std::string& msg);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Line format: `name<TAB>NOFREE|MAYFREE<TAB>unit`, sorted by name.
std::string format_nofree_db(const NofreeDb& db);
NofreeDb parse_nofree_db(std::string_view text, const std::string& file = "<db>");
void save_nofree_db(const NofreeDb& db, const std::string& path);
/// A missing file yields an empty database.
NofreeDb load_nofree_db(const std::string& path);

struct CallGraphNode {
  std::string name;
  std::vector<std::size_t> callees;  // sorted, unique
  bool defined = false;              // has a body in this module
  bool known_dealloc = false;
  bool external = false;             // declared external, body elsewhere
  bool external_nofree = false;      // `extern NAME nofree`
  bool frees_directly = false;       // contains heapfree
  bool has_indirect_call = false;
  bool has_unknown_callee = false;
};

struct CallGraph {
  std::string unit;
  std::vector<CallGraphNode> nodes;

  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t add_node(const std::string& name);
  void add_edge(std::size_t from, std::size_t to);
  std::size_t num_edges() const;
};

CallGraph build_call_graph(const ir::ProgramModule& m);

/// Strongly connected components in reverse topological order: every
/// component appears after all components it calls into.
std::vector<std::vector<std::size_t>> strongly_connected_components(const CallGraph& g);

/// Verdict for every node of `g`, merged into a copy of `db`. External
/// nodes take their verdict from `db` when present, else from their
/// `nofree` declaration, else MAYFREE. Known deallocators are MAYFREE.
NofreeDb compute_nofree(const CallGraph& g, const NofreeDb& db);

/// Verdict used by heap-check placement for a direct callee. Unknown names
/// are MAYFREE.
FreeVerdict callee_verdict(const ir::ProgramModule& m, const NofreeDb& db,
                           std::string_view callee);

}  // namespace safeir::dealloc

#endif  // SAFEIR_DEALLOC_NOFREE_HPP_
