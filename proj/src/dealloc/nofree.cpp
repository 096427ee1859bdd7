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

#include "safeir/dealloc/nofree.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace safeir::dealloc {

std::string_view to_string(FreeVerdict v) {
  return v == FreeVerdict::kNofree ? "NOFREE" : "MAYFREE";
}

const NofreeEntry* NofreeDb::find(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<FreeVerdict> NofreeDb::lookup(std::string_view name) const {
  if (const NofreeEntry* e = find(name)) return e->verdict;
  return std::nullopt;
}

void NofreeDb::set(const std::string& name, FreeVerdict verdict, const std::string& unit) {
  entries_[name] = NofreeEntry{verdict, unit};
}

void NofreeDb::merge_entry(const std::string& name, const NofreeEntry& entry) {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    entries_.emplace(name, entry);
  } else if (it->second.verdict == FreeVerdict::kNofree &&
             entry.verdict == FreeVerdict::kMayfree) {
    it->second = entry;
  }
}

void NofreeDb::merge(const NofreeDb& other) {
  for (const auto& [name, entry] : other.entries_) merge_entry(name, entry);
}

DbParseError::DbParseError(const std::string& file, std::size_t line, const std::string& msg)
    : Error(file + ":" + std::to_string(line) + ": " + msg), line_(line) {}

std::string format_nofree_db(const NofreeDb& db) {
  std::string out;
  for (const auto& [name, entry] : db.entries()) {
    out += name;
    out += '\t';
    out += to_string(entry.verdict);
    out += '\t';
    out += entry.unit;
    out += '\n';
  }
  return out;
}

NofreeDb parse_nofree_db(std::string_view text, const std::string& file) {
  NofreeDb db;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    std::vector<std::string_view> cols;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 3) {
      throw DbParseError(file, line_no, "expected 3 tab-separated columns, found " +
                                            std::to_string(cols.size()));
    }
    if (cols[0].empty()) throw DbParseError(file, line_no, "empty function name");
    FreeVerdict verdict;
    if (cols[1] == "NOFREE") {
      verdict = FreeVerdict::kNofree;
    } else if (cols[1] == "MAYFREE") {
      verdict = FreeVerdict::kMayfree;
    } else {
      throw DbParseError(file, line_no, "unknown verdict '" + std::string(cols[1]) + "'");
    }
    const std::string name(cols[0]);
    if (db.find(name) != nullptr) {
      throw DbParseError(file, line_no, "duplicate entry for " + name);
    }
    db.set(name, verdict, std::string(cols[2]));
  }
  return db;
}

void save_nofree_db(const NofreeDb& db, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write nofree database " + path);
  out << format_nofree_db(db);
  if (!out) throw Error("failed writing nofree database " + path);
}

NofreeDb load_nofree_db(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_nofree_db(ss.str(), path);
}

std::optional<std::size_t> CallGraph::find(std::string_view name) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t CallGraph::add_node(const std::string& name) {
  if (auto i = find(name)) return *i;
  nodes.push_back(CallGraphNode{});
  nodes.back().name = name;
  return nodes.size() - 1;
}

void CallGraph::add_edge(std::size_t from, std::size_t to) {
  auto& callees = nodes[from].callees;
  auto it = std::lower_bound(callees.begin(), callees.end(), to);
  if (it == callees.end() || *it != to) callees.insert(it, to);
}

std::size_t CallGraph::num_edges() const {
  std::size_t n = 0;
  for (const auto& node : nodes) n += node.callees.size();
  return n;
}

CallGraph build_call_graph(const ir::ProgramModule& m) {
  CallGraph g;
  g.unit = m.name;
  for (const auto& f : m.functions) {
    CallGraphNode& node = g.nodes[g.add_node(f.name)];
    node.defined = !f.is_declaration();
    node.known_dealloc = f.has(ir::kAttrKnownDealloc);
  }
  for (const auto& e : m.externals) {
    CallGraphNode& node = g.nodes[g.add_node(e.name)];
    node.external = true;
    node.external_nofree = e.nofree;
  }
  for (const auto& f : m.functions) {
    const std::size_t from = *g.find(f.name);
    for (const auto& bb : f.blocks) {
      for (const auto& inst : bb.insts) {
        if (inst.op == ir::Opcode::kHeapFree) g.nodes[from].frees_directly = true;
        if (inst.op != ir::Opcode::kCall) continue;
        if (inst.is_indirect_call()) {
          g.nodes[from].has_indirect_call = true;
        } else if (auto to = g.find(inst.symbol)) {
          g.add_edge(from, *to);
        } else {
          g.nodes[from].has_unknown_callee = true;
        }
      }
    }
  }
  return g;
}

std::vector<std::vector<std::size_t>> strongly_connected_components(const CallGraph& g) {
  // Iterative Tarjan; components are emitted callees-first.
  const std::size_t n = g.nodes.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  std::size_t next_index = 0;

  struct Frame {
    std::size_t node;
    std::size_t edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& fr = frames.back();
      const auto& callees = g.nodes[fr.node].callees;
      if (fr.edge < callees.size()) {
        const std::size_t w = callees[fr.edge++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[fr.node] = std::min(low[fr.node], index[w]);
        }
        continue;
      }
      const std::size_t v = fr.node;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().node] = std::min(low[frames.back().node], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    }
  }
  return out;
}

namespace {

// Verdict of a node considered in isolation, ignoring its callees.
bool frees_locally(const CallGraphNode& node, const NofreeDb& db) {
  if (node.known_dealloc || node.frees_directly || node.has_indirect_call ||
      node.has_unknown_callee) {
    return true;
  }
  if (!node.defined) {
    if (auto v = db.lookup(node.name)) return *v == FreeVerdict::kMayfree;
    return !(node.external && node.external_nofree);
  }
  return false;
}

}  // namespace

NofreeDb compute_nofree(const CallGraph& g, const NofreeDb& db) {
  const auto sccs = strongly_connected_components(g);
  std::vector<int> comp_of(g.nodes.size(), -1);
  for (std::size_t c = 0; c < sccs.size(); ++c) {
    for (std::size_t v : sccs[c]) comp_of[v] = static_cast<int>(c);
  }
  std::vector<bool> mayfree(g.nodes.size(), false);
  for (std::size_t c = 0; c < sccs.size(); ++c) {
    bool frees = false;
    for (std::size_t v : sccs[c]) {
      if (frees_locally(g.nodes[v], db)) frees = true;
      for (std::size_t w : g.nodes[v].callees) {
        // Components are processed callees-first, so out-of-component
        // verdicts are final here.
        if (comp_of[w] != static_cast<int>(c) && mayfree[w]) frees = true;
      }
    }
    for (std::size_t v : sccs[c]) mayfree[v] = frees;
  }

  NofreeDb out = db;
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    const CallGraphNode& node = g.nodes[v];
    const FreeVerdict verdict = mayfree[v] ? FreeVerdict::kMayfree : FreeVerdict::kNofree;
    if (node.defined || node.known_dealloc) {
      out.merge_entry(node.name, NofreeEntry{verdict, g.unit});
    }
  }
  return out;
}

FreeVerdict callee_verdict(const ir::ProgramModule& m, const NofreeDb& db,
                           std::string_view callee) {
  const ir::FunctionDef* f = m.find_function(callee);
  if (f != nullptr && f->has(ir::kAttrKnownDealloc)) return FreeVerdict::kMayfree;
  if (auto v = db.lookup(callee)) return *v;
  if (f != nullptr && f->has(ir::kAttrNofreeDeclared)) return FreeVerdict::kNofree;
  if (const ir::ExternDecl* e = m.find_external(callee); e != nullptr && e->nofree) {
    return FreeVerdict::kNofree;
  }
  return FreeVerdict::kMayfree;
}

}  // namespace safeir::dealloc
