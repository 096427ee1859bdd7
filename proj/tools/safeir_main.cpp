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

// safeir command-line driver.
//
// Exit status: 0 success (or clean run), 1 error, 2 violation found,
// 3 timeout, 4 parity bar failed.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "safeir/dealloc/nofree.hpp"
#include "safeir/flow/type_flow.hpp"
#include "safeir/harness/corpus.hpp"
#include "safeir/harness/parity.hpp"
#include "safeir/instrument/instrument.hpp"
#include "safeir/ir/errors.hpp"
#include "safeir/rt/interpreter.hpp"
#include "safeir/text/text.hpp"

namespace {

using namespace safeir;

constexpr int kExitError = 1;
constexpr int kExitViolation = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitBar = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << data;
}

ir::ProgramModule load_module(const std::string& path) {
  return text::parse_module(read_file(path), path);
}

ir::InstrumentMode mode_from(const std::string& s) {
  auto m = ir::parse_instrument_mode(s);
  if (!m) throw Error("unknown mode '" + s + "' (none, baseline, safeffi, safeffi-heap)");
  return *m;
}

// --nofree-db wins over SAFEIR_NOFREE_DB.
std::string db_path(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SAFEIR_NOFREE_DB")) return env;
  return {};
}

dealloc::NofreeDb load_db_if_present(const std::string& path) {
  if (path.empty() || !std::filesystem::exists(path)) return {};
  return dealloc::load_nofree_db(path);
}

nlohmann::json kind_histograms(const ir::ProgramModule& m) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& f : m.functions) {
    if (f.blocks.empty()) continue;
    const auto h = flow::infer_kinds(m, f).histogram();
    nlohmann::json e;
    for (int k = 0; k < 4; ++k) {
      e[std::string(ir::to_string(static_cast<ir::PtrKind>(k)))] = h[k];
    }
    j[f.name] = std::move(e);
  }
  return j;
}

int exit_for(const rt::Outcome& o) {
  switch (o.verdict) {
    case rt::Verdict::kCleanExit: return 0;
    case rt::Verdict::kViolation: return kExitViolation;
    case rt::Verdict::kTimeout: return kExitTimeout;
  }
  return kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"safeir: typesystem-guided sanitizer check placement on a mini-IR"};
  app.require_subcommand(1);

  std::string db_flag;
  std::uint64_t granule = 16;
  app.add_option("--nofree-db", db_flag, "nofree database (default: $SAFEIR_NOFREE_DB)");
  app.add_option("--granule", granule, "tag granule in bytes")->default_val(16);

  std::string input, output;

  auto* parse = app.add_subcommand("parse", "parse and validate a .sir file");
  parse->add_option("file", input)->required();

  auto* print = app.add_subcommand("print", "print a .sir file in canonical form");
  print->add_option("file", input)->required();
  print->add_option("-o,--output", output);

  std::string mode_name = "safeffi";
  std::string stats_out;
  auto* instr = app.add_subcommand("instrument", "insert sanitizer checks");
  instr->add_option("file", input)->required();
  instr->add_option("--mode", mode_name)->default_val("safeffi");
  instr->add_option("-o,--output", output);
  instr->add_option("--stats", stats_out, "write per-function statistics JSON");

  std::string entry = "main";
  std::string json_out;
  std::uint64_t max_steps = 50'000'000;
  auto* run = app.add_subcommand("run", "instrument and execute a program");
  run->add_option("file", input)->required();
  run->add_option("--entry", entry)->default_val("main");
  run->add_option("--mode", mode_name)->default_val("safeffi");
  run->add_option("--json", json_out, "write the outcome as JSON");
  run->add_option("--max-steps", max_steps)->default_val(50'000'000);

  bool stats_run = false;
  auto* stats = app.add_subcommand("stats", "static and dynamic check statistics for all modes");
  stats->add_option("file", input)->required();
  stats->add_option("--entry", entry)->default_val("main");
  stats->add_flag("--run", stats_run, "also execute the entry in every mode");
  stats->add_option("--json", json_out);

  auto* gen = app.add_subcommand("gen-corpus", "write the synthetic test corpus");
  gen->add_option("--out", output)->required();

  std::string corpus_dir;
  std::string modes_csv = "baseline,safeffi,safeffi-heap";
  auto* eval = app.add_subcommand("evaluate", "run the corpus in several modes");
  eval->add_option("--corpus", corpus_dir, "corpus directory (default: freshly generated)");
  eval->add_option("--modes", modes_csv)->default_val("baseline,safeffi,safeffi-heap");
  eval->add_option("--json", json_out);

  std::vector<std::string> db_inputs;
  auto* db = app.add_subcommand("nofree-db", "nofree database maintenance");
  db->require_subcommand(1);
  auto* db_compute = db->add_subcommand("compute", "analyse units in order, threading the database");
  db_compute->add_option("files", db_inputs)->required();
  db_compute->add_option("-o,--output", output);
  auto* db_show = db->add_subcommand("show", "print a database");
  db_show->add_option("file", input);
  auto* db_merge = db->add_subcommand("merge", "conservatively merge databases");
  db_merge->add_option("files", db_inputs)->required();
  db_merge->add_option("-o,--output", output);

  CLI11_PARSE(app, argc, argv);

  try {
    rt::RunConfig config;
    config.shadow.granule = granule;
    const std::string dbp = db_path(db_flag);

    if (*parse) {
      const auto m = load_module(input);
      std::size_t insts = 0;
      for (const auto& f : m.functions) {
        for (const auto& bb : f.blocks) insts += bb.insts.size();
      }
      std::cout << input << ": ok, " << m.functions.size() << " functions, " << insts
                << " instructions\n";
      return 0;
    }
    if (*print) {
      write_output(output, text::print_module(load_module(input)));
      return 0;
    }
    if (*instr) {
      const auto r = instrument::instrument(load_module(input), mode_from(mode_name),
                                            load_db_if_present(dbp));
      write_output(output, text::print_module(r.module));
      if (!stats_out.empty()) write_output(stats_out, r.stats.to_json().dump(2) + "\n");
      return 0;
    }
    if (*run) {
      config.max_steps = max_steps;
      const auto m = load_module(input);
      const auto r = instrument::instrument(m, mode_from(mode_name), load_db_if_present(dbp));
      const auto o = rt::execute(r.module, entry, config);
      const auto j = o.to_json();
      if (!json_out.empty()) write_output(json_out, j.dump(2) + "\n");
      std::cerr << rt::to_string(o.verdict);
      if (o.verdict == rt::Verdict::kCleanExit) std::cerr << " exit=" << o.exit_code;
      if (o.violation) {
        std::cerr << " " << rt::to_string(o.violation->kind) << " at "
                  << o.violation->check_name() << " " << o.violation->loc.to_string()
                  << " in " << o.violation->function;
      }
      std::cerr << "\n";
      if (json_out.empty()) std::cout << j.dump(2) << "\n";
      return exit_for(o);
    }
    if (*stats) {
      const auto m = load_module(input);
      const auto fdb = load_db_if_present(dbp);
      std::map<ir::InstrumentMode, instrument::InstrumentationStats> st;
      std::map<ir::InstrumentMode, rt::Outcome> out;
      for (auto mode : {ir::InstrumentMode::kBaseline, ir::InstrumentMode::kSafeFfi,
                        ir::InstrumentMode::kSafeFfiHeap}) {
        const auto r = instrument::instrument(m, mode, fdb);
        st[mode] = r.stats;
        if (stats_run) out[mode] = rt::execute(r.module, entry, config);
      }
      auto j = harness::emit_stats(st, out);
      j["kinds"] = kind_histograms(m);
      std::cerr << harness::format_stats_table(j);
      write_output(json_out, j.dump(2) + "\n");
      return 0;
    }
    if (*gen) {
      const auto corpus = harness::gen_corpus();
      harness::write_corpus(corpus, output);
      std::cerr << "wrote " << corpus.size() << " cases to " << output << "\n";
      return 0;
    }
    if (*eval) {
      std::vector<ir::InstrumentMode> modes;
      std::stringstream ss(modes_csv);
      for (std::string item; std::getline(ss, item, ',');) {
        if (!item.empty()) modes.push_back(mode_from(item));
      }
      const auto corpus =
          corpus_dir.empty() ? harness::gen_corpus() : harness::load_corpus(corpus_dir);
      const auto report = harness::evaluate_parity(corpus, modes, load_db_if_present(dbp));
      std::cerr << harness::format_parity_table(report);
      write_output(json_out, report.to_json().dump(2) + "\n");
      return report.passes_bar() ? 0 : kExitBar;
    }
    if (*db_compute) {
      auto fdb = load_db_if_present(dbp);
      for (const auto& f : db_inputs) {
        fdb = dealloc::compute_nofree(dealloc::build_call_graph(load_module(f)), fdb);
      }
      const std::string target = !output.empty() ? output : dbp;
      if (target.empty()) {
        std::cout << dealloc::format_nofree_db(fdb);
      } else {
        dealloc::save_nofree_db(fdb, target);
        std::cerr << "wrote " << fdb.size() << " entries to " << target << "\n";
      }
      return 0;
    }
    if (*db_show) {
      const std::string path = !input.empty() ? input : dbp;
      if (path.empty()) throw Error("no database given (argument, --nofree-db or SAFEIR_NOFREE_DB)");
      std::cout << dealloc::format_nofree_db(dealloc::load_nofree_db(path));
      return 0;
    }
    if (*db_merge) {
      dealloc::NofreeDb merged;
      for (const auto& f : db_inputs) merged.merge(dealloc::load_nofree_db(f));
      if (output.empty()) {
        std::cout << dealloc::format_nofree_db(merged);
      } else {
        dealloc::save_nofree_db(merged, output);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "safeir: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
