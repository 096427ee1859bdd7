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

#include "safeir/harness/parity.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

namespace safeir::harness {

using ir::InstrumentMode;

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::kTruePositive: return "TP";
    case Classification::kTrueNegative: return "TN";
    case Classification::kFalsePositive: return "FP";
    case Classification::kFalseNegative: return "FN";
  }
  return "?";
}

nlohmann::json RunSummary::to_json() const {
  nlohmann::json j;
  j["verdict"] = std::string(rt::to_string(verdict));
  j["class"] = std::string(to_string(classification));
  if (violation) {
    j["kind"] = std::string(rt::to_string(violation->kind));
    j["check"] = violation->check_name();
    j["line"] = violation->loc.line;
    j["function"] = violation->function;
  }
  if (expected_miss) j["expected_miss"] = true;
  return j;
}

nlohmann::json ModeSummary::to_json() const {
  return {{"tp", true_positives},   {"tn", true_negatives},  {"fp", false_positives},
          {"fn", false_negatives},  {"expected_misses", expected_misses}};
}

bool ParityReport::passes_bar() const {
  for (const auto& [mode, s] : summary) {
    switch (mode) {
      case InstrumentMode::kBaseline:
      case InstrumentMode::kSafeFfiHeap:
        if (s.false_positives != 0 || s.false_negatives != 0) return false;
        break;
      case InstrumentMode::kSafeFfi:
        if (s.false_positives != 0 || s.false_negatives != s.expected_misses) return false;
        break;
      case InstrumentMode::kNone:
        break;
    }
  }
  return parity_mismatches.empty();
}

nlohmann::json ParityReport::to_json() const {
  nlohmann::json j;
  j["modes"] = nlohmann::json::array();
  for (auto m : modes) j["modes"].push_back(std::string(ir::to_string(m)));
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : cases) {
    nlohmann::json e;
    e["id"] = c.id;
    e["expected"] = c.expect_violation ? "VIOLATION" : "CLEAN_EXIT";
    e["free_during_scope"] = c.free_during_scope;
    for (const auto& [m, r] : c.runs) e["runs"][std::string(ir::to_string(m))] = r.to_json();
    cs.push_back(std::move(e));
  }
  j["cases"] = std::move(cs);
  for (const auto& [m, s] : summary) j["summary"][std::string(ir::to_string(m))] = s.to_json();
  j["parity_mismatches"] = parity_mismatches;
  j["seconds"] = seconds;
  j["passes_bar"] = passes_bar();
  return j;
}

ParityReport evaluate_parity(const std::vector<CorpusCase>& corpus,
                             const std::vector<InstrumentMode>& modes,
                             const dealloc::NofreeDb& db) {
  const auto start = std::chrono::steady_clock::now();
  ParityReport report;
  if (modes.empty()) return report;
  report.modes = modes;
  for (auto m : modes) report.summary[m];

  for (const auto& c : corpus) {
    CaseResult cr;
    cr.id = c.id;
    cr.expect_violation = c.expect_violation;
    cr.free_during_scope = c.free_during_scope;
    for (auto m : modes) {
      const auto inst = instrument::instrument(c.program, m, db);
      const rt::Outcome o = rt::execute(inst.module, c.entry);
      RunSummary r;
      r.verdict = o.verdict;
      r.violation = o.violation;
      const bool flagged = o.verdict != rt::Verdict::kCleanExit;
      auto& s = report.summary[m];
      if (c.expect_violation && flagged) {
        r.classification = Classification::kTruePositive;
        ++s.true_positives;
      } else if (c.expect_violation) {
        r.classification = Classification::kFalseNegative;
        ++s.false_negatives;
        if (m == InstrumentMode::kSafeFfi && c.free_during_scope) {
          r.expected_miss = true;
          ++s.expected_misses;
        }
      } else if (flagged) {
        r.classification = Classification::kFalsePositive;
        ++s.false_positives;
      } else {
        r.classification = Classification::kTrueNegative;
        ++s.true_negatives;
      }
      cr.runs.emplace(m, std::move(r));
    }

    const auto b = cr.runs.find(InstrumentMode::kBaseline);
    const auto h = cr.runs.find(InstrumentMode::kSafeFfiHeap);
    if (b != cr.runs.end() && h != cr.runs.end()) {
      const auto kind = [](const RunSummary& r) {
        return r.violation ? std::optional(r.violation->kind) : std::nullopt;
      };
      if (b->second.verdict != h->second.verdict || kind(b->second) != kind(h->second)) {
        report.parity_mismatches.push_back(c.id);
      }
    }
    report.cases.push_back(std::move(cr));
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

nlohmann::json emit_stats(const std::map<InstrumentMode, instrument::InstrumentationStats>& stat,
                          const std::map<InstrumentMode, rt::Outcome>& outcomes) {
  nlohmann::json j;
  j["modes"] = nlohmann::json::object();
  for (const auto& [m, s] : stat) {
    nlohmann::json e;
    e["static"] = s.to_json();
    const auto pct = s.total().remaining_pct();
    e["remaining_pct"] = pct ? nlohmann::json(*pct) : nlohmann::json(nullptr);
    j["modes"][std::string(ir::to_string(m))] = std::move(e);
  }
  for (const auto& [m, o] : outcomes) {
    auto& e = j["modes"][std::string(ir::to_string(m))];
    e["verdict"] = std::string(rt::to_string(o.verdict));
    e["dynamic"] = o.counters.to_json();
    e["dynamic"]["total_checks"] = o.counters.total_checks();
  }
  j["dynamic_ratio"] = nlohmann::json::object();
  const auto base = outcomes.find(InstrumentMode::kBaseline);
  if (base != outcomes.end()) {
    const auto denom = base->second.counters.total_checks();
    for (const auto& [m, o] : outcomes) {
      j["dynamic_ratio"][std::string(ir::to_string(m))] =
          denom == 0 ? nlohmann::json(nullptr)
                     : nlohmann::json(static_cast<double>(o.counters.total_checks()) /
                                      static_cast<double>(denom));
    }
  }
  return j;
}

namespace {

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

std::string fmt_pct(const nlohmann::json& v) {
  if (v.is_null()) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", v.get<double>());
  return buf;
}

}  // namespace

std::string format_parity_table(const ParityReport& report) {
  std::ostringstream os;
  std::size_t w = 4;
  for (const auto& c : report.cases) w = std::max(w, c.id.size());
  os << pad("case", w + 2) << pad("expected", 11);
  for (auto m : report.modes) os << pad(std::string(ir::to_string(m)), 22);
  os << "\n";
  for (const auto& c : report.cases) {
    os << pad(c.id, w + 2) << pad(c.expect_violation ? "VIOLATION" : "CLEAN", 11);
    for (auto m : report.modes) {
      const auto& r = c.runs.at(m);
      std::string cell(to_string(r.classification));
      if (r.violation) cell += " " + r.violation->check_name() + ":" + std::to_string(r.violation->loc.line);
      if (r.verdict == rt::Verdict::kTimeout) cell += " TIMEOUT";
      if (r.expected_miss) cell += " (fds)";
      os << pad(cell, 22);
    }
    os << "\n";
  }
  os << "\n";
  for (const auto& [m, s] : report.summary) {
    os << pad(std::string(ir::to_string(m)), 14) << "TP " << s.true_positives << "  TN "
       << s.true_negatives << "  FP " << s.false_positives << "  FN " << s.false_negatives;
    if (s.expected_misses) os << " (" << s.expected_misses << " free-during-scope)";
    os << "\n";
  }
  os << "parity mismatches: " << report.parity_mismatches.size() << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f s", report.seconds);
  os << "elapsed: " << buf << "\nbar: " << (report.passes_bar() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string format_stats_table(const nlohmann::json& stats) {
  std::ostringstream os;
  os << pad("mode", 14) << pad("static", 10) << pad("remaining", 11) << pad("dyn checks", 12)
     << "ratio\n";
  for (const auto& [mode, e] : stats.at("modes").items()) {
    const auto& total = e.at("static").at("<total>");
    const std::size_t remaining =
        total.at("baseline").get<std::size_t>() - total.at("elided").get<std::size_t>() +
        [&] {
          std::size_t n = 0;
          for (const auto& [k, v] : total.at("added").items()) n += v.get<std::size_t>();
          return n;
        }();
    os << pad(mode, 14) << pad(std::to_string(remaining), 10)
       << pad(fmt_pct(e.at("remaining_pct")), 11);
    if (e.contains("dynamic")) {
      os << pad(std::to_string(e["dynamic"]["total_checks"].get<std::uint64_t>()), 12);
    } else {
      os << pad("-", 12);
    }
    const auto& ratio = stats.at("dynamic_ratio");
    if (ratio.contains(mode) && !ratio[mode].is_null()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f", ratio[mode].get<double>());
      os << buf;
    } else {
      os << "-";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace safeir::harness
