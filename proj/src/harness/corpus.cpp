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

#include "safeir/harness/corpus.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "safeir/ir/errors.hpp"
#include "safeir/text/text.hpp"

namespace safeir::harness {

namespace {

constexpr std::string_view kAllocNames[] = {"GLOBAL", "C_STACK", "C_HEAP", "RUST_STACK",
                                            "RUST_HEAP"};
constexpr std::string_view kDeallocNames[] = {"NONE", "C_FREE", "RUST_DEALLOC",
                                              "FRAME_RETURN"};
constexpr std::string_view kInvalidationNames[] = {"ARITHMETIC_OOB", "DEALLOC", "CRAFTED_PTR",
                                                   "NONE"};

template <typename E, std::size_t N>
std::optional<E> parse_enum(const std::string_view (&names)[N], std::string_view s) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(AllocSite s) { return kAllocNames[static_cast<int>(s)]; }
std::string_view to_string(DeallocSite s) { return kDeallocNames[static_cast<int>(s)]; }
std::string_view to_string(Invalidation i) { return kInvalidationNames[static_cast<int>(i)]; }
std::optional<AllocSite> parse_alloc_site(std::string_view s) {
  return parse_enum<AllocSite>(kAllocNames, s);
}
std::optional<DeallocSite> parse_dealloc_site(std::string_view s) {
  return parse_enum<DeallocSite>(kDeallocNames, s);
}
std::optional<Invalidation> parse_invalidation(std::string_view s) {
  return parse_enum<Invalidation>(kInvalidationNames, s);
}

namespace {

std::string check_name(ir::CheckKind k) {
  rt::Violation v;
  v.check = k;
  return v.check_name();
}

// ---------------------------------------------------------------------------
// Program text. The object is a 16-byte [i32 x 4]; every path reads its
// second element.

constexpr const char* kObj = "[i32 x 4]";

std::string init_object(const std::string& ptr, bool raw) {
  std::ostringstream os;
  os << "  %f = gep %" << ptr << ", 4 : " << (raw ? "*" : "&") << "i32\n"
     << "  %seven = const i32 7\n"
     << "  store %seven, %f\n";
  return os.str();
}

std::string fn_c_get_global() {
  return std::string("fn c_get() -> *") + kObj + " :raw foreign {\nentry:\n  %g = globaladdr @obj : *" +
         kObj + "\n  ret %g\n}\n";
}

std::string fn_c_get_heap() {
  std::ostringstream os;
  os << "fn c_get() -> *" << kObj << " :raw foreign {\nentry:\n"
     << "  %n = const i64 16\n  %h = heapalloc %n : *" << kObj << "\n"
     << init_object("h", true) << "  ret %h\n}\n";
  return os.str();
}

std::string fn_c_pass() {
  std::ostringstream os;
  os << "fn c_pass(%p: *" << kObj << " :raw) -> *" << kObj << " :raw foreign {\nentry:\n"
     << "  ret %p\n}\n";
  return os.str();
}

std::string fn_c_frame() {
  std::ostringstream os;
  os << "fn c_frame() -> i32 foreign {\nentry:\n  %o = alloca " << kObj << "\n"
     << init_object("o", false) << "  %r = bitcast %o : *" << kObj << "\n"
     << "  %x = call i32 @consume(%r)\n  ret %x\n}\n";
  return os.str();
}

std::string fn_dangle(const std::string& name, bool foreign) {
  std::ostringstream os;
  os << "fn " << name << "() -> *" << kObj << " :raw" << (foreign ? " foreign" : "")
     << " {\nentry:\n  %o = alloca " << kObj << "\n"
     << init_object("o", false) << "  %r = bitcast %o : *" << kObj << "\n  ret %r\n}\n";
  return os.str();
}

std::string fn_derive() {
  std::ostringstream os;
  os << "fn derive() -> &" << kObj << " :safe {\nentry:\n  %o = alloca " << kObj << "\n"
     << init_object("o", false) << "  %p = bitcast %o : *" << kObj << "\n"
     << "  %r = call *" << kObj << " @c_pass(%p)\n"
     << "  %s = castsafe %r : &" << kObj << "\n  ret %s\n}\n";
  return os.str();
}

std::string fn_c_advance() {
  std::ostringstream os;
  os << "fn c_advance(%p: *" << kObj << " :raw) -> *" << kObj << " :raw foreign {\nentry:\n"
     << "  %q = gep %p, 16 : *" << kObj << "\n  ret %q\n}\n";
  return os.str();
}

std::string fn_c_craft() {
  std::ostringstream os;
  os << "fn c_craft(%p: *" << kObj << " :raw) -> *" << kObj << " :raw foreign {\nentry:\n"
     << "  %i = ptrtoint %p\n  %mask = const i64 0x00ffffffffffffff\n"
     << "  %j = and i64 %i, %mask\n  %q = inttoptr %j : *" << kObj << "\n  ret %q\n}\n";
  return os.str();
}

std::string fn_c_release() {
  std::ostringstream os;
  os << "fn c_release(%p: *" << kObj << " :raw) foreign {\nentry:\n  heapfree %p\n  ret\n}\n";
  return os.str();
}

// Statement that invalidates %r; the invalid pointer is %q afterwards.
std::string invalidate(Invalidation inv, DeallocSite d) {
  switch (inv) {
    case Invalidation::kArithmeticOob:
      return std::string("  %q = call *") + kObj + " @c_advance(%r)\n";
    case Invalidation::kCraftedPtr:
      return std::string("  %q = call *") + kObj + " @c_craft(%r)\n";
    case Invalidation::kDealloc:
      if (d == DeallocSite::kCFree) return "  call @c_release(%r)\n  %q = bitcast %r : *" +
                                           std::string(kObj) + "\n";
      if (d == DeallocSite::kRustDealloc) {
        return "  %b = bitcast %r : *i8\n  call @__rust_dealloc(%b)\n  %q = bitcast %r : *" +
               std::string(kObj) + "\n";
      }
      break;
    case Invalidation::kNone:
      break;
  }
  return "  %q = bitcast %r : *" + std::string(kObj) + "\n";
}

std::string fn_consume(Invalidation inv, DeallocSite d, int perm) {
  std::ostringstream os;
  os << "fn consume(%r: *" << kObj << " :raw) -> i32 {\nentry:\n";
  if (perm == 1) {
    os << "  %s = castsafe %r : &" << kObj << "\n  %e = gep %s, 4 : &i32\n"
       << invalidate(inv, d) << "  %x = load i32, %e\n";
  } else {
    os << invalidate(inv, d);
    if (perm == 0) {
      os << "  %s = castsafe %q : &" << kObj << "\n  %e = gep %s, 4 : &i32\n";
    } else {
      os << "  %e = gep %q, 4 : *i32\n";
    }
    os << "  %x = load i32, %e\n";
  }
  os << "  ret %x\n}\n";
  return os.str();
}

std::string fn_main(AllocSite alloc, bool dangling) {
  std::ostringstream os;
  os << "fn main() -> i32 {\nentry:\n";
  if (dangling) {
    const char* producer = alloc == AllocSite::kCStack ? "c_dangle" : "rust_dangle";
    os << "  %r = call *" << kObj << " @" << producer << "()\n"
       << "  %x = call i32 @consume(%r)\n";
  } else {
    switch (alloc) {
      case AllocSite::kGlobal:
      case AllocSite::kCHeap:
        os << "  %r = call *" << kObj << " @c_get()\n  %x = call i32 @consume(%r)\n";
        break;
      case AllocSite::kCStack:
        os << "  %x = call i32 @c_frame()\n";
        break;
      case AllocSite::kRustHeap:
        os << "  %n = const i64 16\n  %h = heapalloc %n : *" << kObj << "\n"
           << init_object("h", true) << "  %r = call *" << kObj << " @c_pass(%h)\n"
           << "  %x = call i32 @consume(%r)\n";
        break;
      case AllocSite::kRustStack:
        os << "  %o = alloca " << kObj << "\n" << init_object("o", false)
           << "  %p = bitcast %o : *" << kObj << "\n"
           << "  %r = call *" << kObj << " @c_pass(%p)\n"
           << "  %x = call i32 @consume(%r)\n";
        break;
    }
  }
  os << "  ret %x\n}\n";
  return os.str();
}

// Use after return of a safe reference created inside the callee.
std::string fn_main_derive() {
  std::ostringstream os;
  os << "fn main() -> i32 {\nentry:\n  %s = call &" << kObj << " @derive()\n"
     << "  %e = gep %s, 4 : &i32\n  %x = load i32, %e\n  ret %x\n}\n";
  return os.str();
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

CorpusCase make_case(AllocSite alloc, Invalidation inv, DeallocSite d, int perm) {
  CorpusCase c;
  c.alloc = alloc;
  c.invalidation = inv;
  c.dealloc = d;
  c.permutation = perm;
  c.id = lower(to_string(inv)) + "-" + lower(to_string(alloc));
  if (d != DeallocSite::kNone) c.id += "-" + lower(to_string(d));
  c.id += "-p" + std::to_string(perm);
  for (char& ch : c.id) {
    if (ch == '_') ch = '-';
  }

  c.expect_violation = inv != Invalidation::kNone;
  const bool stack_dealloc = d == DeallocSite::kFrameReturn;
  const bool derive_case = stack_dealloc && alloc == AllocSite::kRustStack && perm == 1;
  if (c.expect_violation) {
    if (perm == 0) c.expected_check = ir::CheckKind::kCast;
    if (perm == 2) c.expected_check = ir::CheckKind::kDeref;
    if (perm == 1) c.expected_check = derive_case ? ir::CheckKind::kReturn : ir::CheckKind::kHeap;
  }
  c.free_during_scope = inv == Invalidation::kDealloc && perm == 1 && !stack_dealloc;
  c.invalid_before_cast = c.expect_violation && perm == 0;

  std::string module_name = c.id;
  for (char& ch : module_name) {
    if (ch == '-') ch = '_';
  }
  std::ostringstream os;
  os << "# alloc=" << to_string(alloc) << " dealloc=" << to_string(d)
     << " invalidation=" << to_string(inv) << " permutation=P" << perm << "\n"
     << "# expect " << (c.expect_violation ? "VIOLATION" : "CLEAN_EXIT");
  if (c.expected_check) os << " at " << check_name(*c.expected_check);
  os << "\nmodule " << module_name << "\n";
  if (alloc == AllocSite::kGlobal) os << "global @obj : " << kObj << " :raw = 7\n";
  if (d == DeallocSite::kRustDealloc) {
    os << "fn __rust_dealloc(%p: *i8 :raw) known_dealloc\n";
  }
  os << "\n";

  if (derive_case) {
    os << fn_c_pass() << "\n" << fn_derive() << "\n" << fn_main_derive();
  } else {
    switch (alloc) {
      case AllocSite::kGlobal: os << fn_c_get_global() << "\n"; break;
      case AllocSite::kCHeap: os << fn_c_get_heap() << "\n"; break;
      case AllocSite::kCStack:
        os << (stack_dealloc ? fn_dangle("c_dangle", true) : fn_c_frame()) << "\n";
        break;
      case AllocSite::kRustStack:
        os << (stack_dealloc ? fn_dangle("rust_dangle", false) : fn_c_pass()) << "\n";
        break;
      case AllocSite::kRustHeap: os << fn_c_pass() << "\n"; break;
    }
    if (inv == Invalidation::kArithmeticOob) os << fn_c_advance() << "\n";
    if (inv == Invalidation::kCraftedPtr) os << fn_c_craft() << "\n";
    if (d == DeallocSite::kCFree) os << fn_c_release() << "\n";
    os << fn_consume(inv, d, perm) << "\n" << fn_main(alloc, stack_dealloc);
  }
  c.text = os.str();
  c.program = text::parse_module(c.text, c.id + ".sir");
  return c;
}

}  // namespace

nlohmann::json CorpusCase::manifest_entry() const {
  nlohmann::json j;
  j["id"] = id;
  j["file"] = id + ".sir";
  j["entry"] = entry;
  j["alloc"] = std::string(to_string(alloc));
  j["dealloc"] = std::string(to_string(dealloc));
  j["invalidation"] = std::string(to_string(invalidation));
  j["permutation"] = permutation;
  j["expected"] = expect_violation ? "VIOLATION" : "CLEAN_EXIT";
  j["expected_check"] = expected_check ? nlohmann::json(check_name(*expected_check)) : nullptr;
  j["free_during_scope"] = free_during_scope;
  j["invalid_before_cast"] = invalid_before_cast;
  return j;
}

std::vector<CorpusCase> gen_corpus() {
  constexpr AllocSite kAllSites[] = {AllocSite::kGlobal, AllocSite::kCStack, AllocSite::kCHeap,
                                     AllocSite::kRustStack, AllocSite::kRustHeap};
  std::vector<CorpusCase> out;

  // Out-of-bounds arithmetic and crafted pointers: every allocation site,
  // before the cast (P0) or with no cast at all (P2). P1 is excluded:
  // arithmetic on a safe pointer, or an integer turned into a pointer,
  // always yields a raw pointer, so a "cast, then invalidate" program is
  // the P2 program.
  for (Invalidation inv : {Invalidation::kArithmeticOob, Invalidation::kCraftedPtr}) {
    for (AllocSite a : kAllSites) {
      for (int perm : {0, 2}) out.push_back(make_case(a, inv, DeallocSite::kNone, perm));
    }
  }

  // Heap deallocation. Both heaps can be released through either
  // deallocator, before (P0) or during (P1) the safe reference's scope.
  for (AllocSite a : {AllocSite::kCHeap, AllocSite::kRustHeap}) {
    for (DeallocSite d : {DeallocSite::kCFree, DeallocSite::kRustDealloc}) {
      for (int perm : {0, 1}) out.push_back(make_case(a, Invalidation::kDealloc, d, perm));
    }
  }
  // Raw use after free never reaches a cast, so the deallocator cannot
  // influence checking: one case per heap with its own deallocator.
  out.push_back(make_case(AllocSite::kCHeap, Invalidation::kDealloc, DeallocSite::kCFree, 2));
  out.push_back(
      make_case(AllocSite::kRustHeap, Invalidation::kDealloc, DeallocSite::kRustDealloc, 2));
  // Stack objects die when their frame returns. Heap deallocators on stack
  // objects are invalid frees, a different bug class, and are excluded, as
  // is every deallocation of a global.
  // A C frame cannot hold a safe reference, so there is no C-stack P1.
  out.push_back(
      make_case(AllocSite::kCStack, Invalidation::kDealloc, DeallocSite::kFrameReturn, 0));
  out.push_back(
      make_case(AllocSite::kCStack, Invalidation::kDealloc, DeallocSite::kFrameReturn, 2));
  for (int perm : {0, 1, 2}) {
    out.push_back(
        make_case(AllocSite::kRustStack, Invalidation::kDealloc, DeallocSite::kFrameReturn, perm));
  }

  // Benign flows: cast-then-dereference and raw dereference. P1 without an
  // invalidation is the P0 program.
  for (AllocSite a : kAllSites) {
    for (int perm : {0, 2}) out.push_back(make_case(a, Invalidation::kNone, DeallocSite::kNone, perm));
  }
  return out;
}

void write_corpus(const std::vector<CorpusCase>& corpus, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  nlohmann::json manifest = nlohmann::json::array();
  for (const auto& c : corpus) {
    std::ofstream out(fs::path(dir) / (c.id + ".sir"), std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write corpus case " + c.id + " to " + dir);
    out << c.text;
    manifest.push_back(c.manifest_entry());
  }
  std::ofstream out(fs::path(dir) / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write corpus manifest to " + dir);
  out << manifest.dump(2) << "\n";
}

std::vector<CorpusCase> load_corpus(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path manifest_path = fs::path(dir) / "manifest.json";
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw Error("no corpus manifest at " + manifest_path.string());
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(manifest_path.string() + ": " + e.what());
  }
  std::vector<CorpusCase> out;
  for (const auto& j : manifest) {
    CorpusCase c;
    try {
      c.id = j.at("id").get<std::string>();
      c.entry = j.value("entry", "main");
      c.alloc = parse_alloc_site(j.at("alloc").get<std::string>()).value();
      c.dealloc = parse_dealloc_site(j.at("dealloc").get<std::string>()).value();
      c.invalidation = parse_invalidation(j.at("invalidation").get<std::string>()).value();
      c.permutation = j.at("permutation").get<int>();
      c.expect_violation = j.at("expected").get<std::string>() == "VIOLATION";
      if (!j.at("expected_check").is_null()) {
        const std::string k = j.at("expected_check").get<std::string>();
        for (int i = 0; i < ir::kNumCheckKinds; ++i) {
          if (check_name(static_cast<ir::CheckKind>(i)) == k) {
            c.expected_check = static_cast<ir::CheckKind>(i);
          }
        }
      }
      c.free_during_scope = j.at("free_during_scope").get<bool>();
      c.invalid_before_cast = j.at("invalid_before_cast").get<bool>();
    } catch (const std::exception& e) {
      throw Error(manifest_path.string() + ": malformed entry: " + e.what());
    }
    const fs::path file = fs::path(dir) / j.at("file").get<std::string>();
    std::ifstream src(file, std::ios::binary);
    if (!src) throw Error("missing corpus file " + file.string());
    std::ostringstream ss;
    ss << src.rdbuf();
    c.text = ss.str();
    c.program = text::parse_module(c.text, file.filename().string());
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace safeir::harness
