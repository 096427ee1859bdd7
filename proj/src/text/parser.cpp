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

#include <cctype>
#include <charconv>
#include <map>
#include <utility>

#include "safeir/ir/validate.hpp"
#include "safeir/text/text.hpp"

namespace safeir::text {

using ir::BasicBlock;
using ir::FunctionDef;
using ir::Instruction;
using ir::Opcode;
using ir::ProgramModule;
using ir::PtrKind;
using ir::SourceLocation;
using ir::TypeShape;

ParseError::ParseError(const SourceLocation& loc, const std::string& msg)
    : Error(loc.to_string() + ": " + msg), loc_(loc) {}

namespace {

enum class Tok { kIdent, kLocal, kGlobal, kInt, kPunct, kArrow, kNewline, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  std::int64_t value = 0;
  SourceLocation loc;
};

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '.';
}

class Lexer {
 public:
  Lexer(std::string_view text, const std::string& file) : src_(text), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        out.push_back(make(Tok::kNewline, "\n"));
        advance();
        ++line_;
        col_ = 1;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == '%' || c == '@') {
        Token t = make(c == '%' ? Tok::kLocal : Tok::kGlobal, "");
        advance();
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_name_char(src_[pos_])) advance();
        if (pos_ == start) throw ParseError(t.loc, std::string("expected a name after '") + c + "'");
        t.text = std::string(src_.substr(start, pos_ - start));
        out.push_back(std::move(t));
      } else if (c == '-' && peek(1) == '>') {
        out.push_back(make(Tok::kArrow, "->"));
        advance();
        advance();
      } else if (std::isdigit(static_cast<unsigned char>(c)) != 0 ||
                 (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1))) != 0)) {
        out.push_back(lex_int());
      } else if (std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_') {
        Token t = make(Tok::kIdent, "");
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (is_name_char(src_[pos_]) ||
                (src_[pos_] == '-' && std::isalpha(static_cast<unsigned char>(peek(1))) != 0))) {
          advance();
        }
        t.text = std::string(src_.substr(start, pos_ - start));
        out.push_back(std::move(t));
      } else if (std::string_view("(){}[],:=&*!").find(c) != std::string_view::npos) {
        out.push_back(make(Tok::kPunct, std::string(1, c)));
        advance();
      } else {
        throw ParseError(here(), std::string("unexpected character '") + c + "'");
      }
    }
    out.push_back(make(Tok::kNewline, "\n"));
    out.push_back(make(Tok::kEnd, ""));
    return out;
  }

 private:
  SourceLocation here() const { return SourceLocation{file_, line_, col_}; }
  Token make(Tok kind, std::string text) const {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.loc = here();
    return t;
  }
  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  void advance() {
    ++pos_;
    ++col_;
  }

  Token lex_int() {
    Token t = make(Tok::kInt, "");
    const std::size_t start = pos_;
    bool negative = false;
    if (src_[pos_] == '-') {
      negative = true;
      advance();
    }
    int base = 10;
    if (src_[pos_] == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      base = 16;
      advance();
      advance();
    }
    const std::size_t digits = pos_;
    while (pos_ < src_.size() && std::isxdigit(static_cast<unsigned char>(src_[pos_])) != 0) {
      advance();
    }
    t.text = std::string(src_.substr(start, pos_ - start));
    std::uint64_t magnitude = 0;
    const char* first = src_.data() + digits;
    const char* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, magnitude, base);
    if (ec != std::errc() || ptr != last || first == last) {
      throw ParseError(t.loc, "malformed integer literal '" + t.text + "'");
    }
    if (negative && magnitude > (std::uint64_t{1} << 63)) {
      throw ParseError(t.loc, "integer literal out of range");
    }
    t.value = negative ? static_cast<std::int64_t>(0 - magnitude)
                       : static_cast<std::int64_t>(magnitude);
    return t;
  }

  std::string_view src_;
  const std::string& file_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
};

struct NameRef {
  std::string name;
  SourceLocation loc;
};

// Instruction whose value and block operands are still names.
struct PendingInst {
  Instruction inst;
  std::optional<NameRef> result;
  std::vector<NameRef> operands;
  std::vector<NameRef> blocks;
};

struct PendingBlock {
  std::string label;
  SourceLocation loc;
  std::vector<PendingInst> insts;
};

TypeShape result_shape(const Instruction& inst) {
  switch (inst.op) {
    case Opcode::kAlloca:
      return TypeShape::SafePtr(inst.shape);
    case Opcode::kCmp:
      return TypeShape::Int(1);
    case Opcode::kPtrToInt:
      return TypeShape::Int(64);
    default:
      return inst.shape;
  }
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ProgramModule parse_module() {
    ProgramModule m;
    skip_newlines();
    expect_keyword("module");
    m.name = expect(Tok::kIdent, "module name").text;
    expect_eol();
    while (true) {
      skip_newlines();
      if (peek().kind == Tok::kEnd) break;
      const Token& t = peek();
      if (is_keyword("mode")) {
        next();
        const Token& name = expect(Tok::kIdent, "instrumentation mode");
        auto mode = ir::parse_instrument_mode(name.text);
        if (!mode) throw ParseError(name.loc, "unknown mode '" + name.text + "'");
        m.instrumented = *mode;
        expect_eol();
      } else if (is_keyword("extern")) {
        next();
        ir::ExternDecl e;
        e.name = expect(Tok::kIdent, "extern name").text;
        if (is_keyword("nofree")) {
          next();
          e.nofree = true;
        }
        expect_eol();
        m.externals.push_back(std::move(e));
      } else if (is_keyword("global")) {
        next();
        ir::GlobalDef g;
        g.name = expect(Tok::kGlobal, "global name").text;
        expect_punct(':');
        g.shape = parse_checked_shape();
        expect_punct(':');
        g.kind = parse_kind_name();
        expect_punct('=');
        g.init = expect(Tok::kInt, "initializer").value;
        expect_eol();
        m.globals.push_back(std::move(g));
      } else if (is_keyword("fn")) {
        m.functions.push_back(parse_function());
      } else {
        throw ParseError(t.loc, "expected 'mode', 'extern', 'global' or 'fn', found '" +
                                    t.text + "'");
      }
    }
    return m;
  }

  TypeShape parse_shape_only() {
    TypeShape s = parse_checked_shape();
    skip_newlines();
    if (peek().kind != Tok::kEnd) throw ParseError(peek().loc, "trailing text after shape");
    return s;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is_keyword(std::string_view kw) const {
    return peek().kind == Tok::kIdent && peek().text == kw;
  }
  bool is_punct(char c) const {
    return peek().kind == Tok::kPunct && peek().text[0] == c;
  }
  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::kNewline:
        return "end of line";
      case Tok::kEnd:
        return "end of input";
      case Tok::kLocal:
        return "'%" + t.text + "'";
      case Tok::kGlobal:
        return "'@" + t.text + "'";
      default:
        return "'" + t.text + "'";
    }
  }
  const Token& expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) {
      throw ParseError(peek().loc, "expected " + what + ", found " + describe(peek()));
    }
    return next();
  }
  void expect_punct(char c) {
    if (!is_punct(c)) {
      throw ParseError(peek().loc,
                       std::string("expected '") + c + "', found " + describe(peek()));
    }
    next();
  }
  void expect_keyword(std::string_view kw) {
    if (!is_keyword(kw)) {
      throw ParseError(peek().loc,
                       "expected '" + std::string(kw) + "', found " + describe(peek()));
    }
    next();
  }
  void expect_eol() {
    if (peek().kind != Tok::kNewline && peek().kind != Tok::kEnd) {
      throw ParseError(peek().loc, "expected end of line, found " + describe(peek()));
    }
    skip_newlines();
  }
  void skip_newlines() {
    while (peek().kind == Tok::kNewline) next();
  }

  std::uint64_t expect_count() {
    const Token& t = expect(Tok::kInt, "element count");
    if (t.value < 0) throw ParseError(t.loc, "negative element count");
    return static_cast<std::uint64_t>(t.value);
  }

  std::vector<TypeShape> parse_field_list() {
    expect_punct('{');
    std::vector<TypeShape> fields;
    if (!is_punct('}')) {
      fields.push_back(parse_shape());
      while (is_punct(',')) {
        next();
        fields.push_back(parse_shape());
      }
    }
    expect_punct('}');
    return fields;
  }

  TypeShape parse_shape() {
    const Token& t = peek();
    if (is_punct('&')) {
      next();
      return TypeShape::SafePtr(parse_shape());
    }
    if (is_punct('*')) {
      next();
      return TypeShape::RawPtr(parse_shape());
    }
    if (is_punct('{')) return TypeShape::Struct(parse_field_list());
    if (is_punct('[')) {
      next();
      TypeShape elem = parse_shape();
      if (is_keyword("x")) {
        next();
        const std::uint64_t n = expect_count();
        expect_punct(']');
        return TypeShape::Array(std::move(elem), n);
      }
      expect_punct(']');
      return TypeShape::Slice(std::move(elem));
    }
    if (t.kind == Tok::kIdent) {
      if (t.text == "union") {
        next();
        return TypeShape::Union(parse_field_list());
      }
      if (t.text == "zst") return next(), TypeShape::ZeroSized();
      if (t.text == "dyn") return next(), TypeShape::TraitObject();
      if (t.text == "fnptr") return next(), TypeShape::FnPtr();
      if (t.text.size() > 1 && t.text[0] == 'i') {
        std::uint32_t width = 0;
        const char* first = t.text.data() + 1;
        const char* last = t.text.data() + t.text.size();
        auto [ptr, ec] = std::from_chars(first, last, width);
        if (ec == std::errc() && ptr == last) {
          if (!ir::is_valid_int_width(width)) {
            throw ParseError(t.loc, "unsupported integer width in '" + t.text + "'");
          }
          next();
          return TypeShape::Int(width);
        }
      }
    }
    throw ParseError(t.loc, "expected a shape, found " + describe(t));
  }

  TypeShape parse_checked_shape() {
    const SourceLocation loc = peek().loc;
    TypeShape s = parse_shape();
    if (auto err = s.validate(); !err.empty()) {
      throw ParseError(loc, "malformed shape " + s.to_string() + ": " + err);
    }
    return s;
  }

  PtrKind parse_kind_name() {
    const Token& t = expect(Tok::kIdent, "pointer kind");
    auto k = ir::parse_ptr_kind(t.text);
    if (!k) throw ParseError(t.loc, "unknown pointer kind '" + t.text + "'");
    return *k;
  }

  // `:kind` suffix; defaults to the kind implied by the shape.
  PtrKind parse_kind_suffix(const TypeShape& shape) {
    if (is_punct(':')) {
      next();
      return parse_kind_name();
    }
    return ir::value_kind_of_shape(shape);
  }

  FunctionDef parse_function() {
    FunctionDef f;
    f.loc = next().loc;  // 'fn'
    f.name = expect(Tok::kIdent, "function name").text;
    expect_punct('(');
    std::vector<NameRef> params;
    if (!is_punct(')')) {
      while (true) {
        const Token& p = expect(Tok::kLocal, "parameter");
        params.push_back({p.text, p.loc});
        expect_punct(':');
        TypeShape shape = parse_checked_shape();
        f.param_kinds.push_back(parse_kind_suffix(shape));
        f.values.push_back({p.text, std::move(shape)});
        if (!is_punct(',')) break;
        next();
      }
    }
    expect_punct(')');
    f.ret_shape = TypeShape::ZeroSized();
    f.ret_kind = PtrKind::kNonPtr;
    if (peek().kind == Tok::kArrow) {
      next();
      f.ret_shape = parse_checked_shape();
      f.ret_kind = parse_kind_suffix(f.ret_shape);
    }
    while (peek().kind == Tok::kIdent) {
      const Token& a = next();
      if (a.text == "extern_visible") {
        f.attrs |= ir::kAttrExternVisible;
      } else if (a.text == "foreign") {
        f.attrs |= ir::kAttrForeign;
      } else if (a.text == "known_dealloc") {
        f.attrs |= ir::kAttrKnownDealloc;
      } else if (a.text == "nofree") {
        f.attrs |= ir::kAttrNofreeDeclared;
      } else {
        throw ParseError(a.loc, "unknown function attribute '" + a.text + "'");
      }
    }
    if (!is_punct('{')) {
      expect_eol();
      check_params(params);
      return f;
    }
    next();
    expect_eol();
    std::vector<PendingBlock> blocks;
    while (!is_punct('}')) {
      if (peek().kind == Tok::kEnd) throw ParseError(peek().loc, "unterminated function body");
      if (peek().kind == Tok::kIdent && peek(1).kind == Tok::kPunct && peek(1).text == ":") {
        const Token& label = next();
        next();
        blocks.push_back({label.text, label.loc, {}});
        expect_eol();
        continue;
      }
      if (blocks.empty()) throw ParseError(peek().loc, "instruction before the first block label");
      blocks.back().insts.push_back(parse_instruction());
      expect_eol();
    }
    const SourceLocation close = next().loc;
    expect_eol();
    if (blocks.empty()) throw ParseError(close, "function body has no blocks");
    resolve(f, params, blocks);
    return f;
  }

  static void check_params(const std::vector<NameRef>& params) {
    std::map<std::string, ir::ValueId> seen;
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (!seen.emplace(params[i].name, static_cast<ir::ValueId>(i)).second) {
        throw ParseError(params[i].loc, "duplicate parameter %" + params[i].name);
      }
    }
  }

  void resolve(FunctionDef& f, const std::vector<NameRef>& params,
               std::vector<PendingBlock>& blocks) {
    std::map<std::string, ir::ValueId> values;
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (!values.emplace(params[i].name, static_cast<ir::ValueId>(i)).second) {
        throw ParseError(params[i].loc, "duplicate parameter %" + params[i].name);
      }
    }
    std::map<std::string, ir::BlockId> labels;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (!labels.emplace(blocks[b].label, static_cast<ir::BlockId>(b)).second) {
        throw ParseError(blocks[b].loc, "duplicate block label " + blocks[b].label);
      }
    }
    // Definitions first, in textual order, so forward references resolve.
    for (auto& pb : blocks) {
      for (auto& pi : pb.insts) {
        if (!pi.result) continue;
        auto [it, fresh] = values.emplace(pi.result->name, static_cast<ir::ValueId>(f.values.size()));
        if (!fresh) {
          throw ParseError(pi.result->loc,
                           "%" + pi.result->name + " is defined more than once");
        }
        pi.inst.result = it->second;
        f.values.push_back({pi.result->name, result_shape(pi.inst)});
      }
    }
    for (auto& pb : blocks) {
      BasicBlock bb;
      bb.label = pb.label;
      for (auto& pi : pb.insts) {
        for (const auto& ref : pi.operands) {
          auto it = values.find(ref.name);
          if (it == values.end()) throw ParseError(ref.loc, "use of undefined value %" + ref.name);
          pi.inst.operands.push_back(it->second);
        }
        for (const auto& ref : pi.blocks) {
          auto it = labels.find(ref.name);
          if (it == labels.end()) throw ParseError(ref.loc, "unknown block label " + ref.name);
          pi.inst.blocks.push_back(it->second);
        }
        bb.insts.push_back(std::move(pi.inst));
      }
      f.blocks.push_back(std::move(bb));
    }
    ir::renumber(f);
  }

  NameRef expect_local() {
    const Token& t = expect(Tok::kLocal, "value");
    return {t.text, t.loc};
  }
  NameRef expect_label() {
    const Token& t = expect(Tok::kIdent, "block label");
    return {t.text, t.loc};
  }

  PendingInst parse_instruction() {
    PendingInst pi;
    pi.inst.loc = peek().loc;
    if (peek().kind == Tok::kLocal) {
      pi.result = expect_local();
      expect_punct('=');
    }
    const Token& op = expect(Tok::kIdent, "opcode");
    Instruction& inst = pi.inst;
    const std::string& name = op.text;
    const bool has_result = pi.result.has_value();
    auto need_result = [&](bool want) {
      if (has_result != want) {
        throw ParseError(op.loc, "'" + name + "' " +
                                     (want ? "must define a value" : "does not define a value"));
      }
    };
    auto shape_suffix = [&] {
      expect_punct(':');
      inst.shape = parse_checked_shape();
    };

    if (name == "alloca") {
      need_result(true);
      inst.op = Opcode::kAlloca;
      inst.shape = parse_checked_shape();
    } else if (name == "heapalloc") {
      need_result(true);
      inst.op = Opcode::kHeapAlloc;
      pi.operands.push_back(expect_local());
      shape_suffix();
    } else if (name == "heapfree") {
      need_result(false);
      inst.op = Opcode::kHeapFree;
      pi.operands.push_back(expect_local());
    } else if (name == "load") {
      need_result(true);
      inst.op = Opcode::kLoad;
      inst.shape = parse_checked_shape();
      expect_punct(',');
      pi.operands.push_back(expect_local());
    } else if (name == "store") {
      need_result(false);
      inst.op = Opcode::kStore;
      pi.operands.push_back(expect_local());
      expect_punct(',');
      pi.operands.push_back(expect_local());
    } else if (name == "gep") {
      need_result(true);
      inst.op = Opcode::kGep;
      pi.operands.push_back(expect_local());
      expect_punct(',');
      if (peek().kind == Tok::kInt) {
        inst.imm = next().value;
      } else {
        pi.operands.push_back(expect_local());
      }
      shape_suffix();
    } else if (name == "bitcast" || name == "inttoptr" || name == "castsafe") {
      need_result(true);
      inst.op = name == "bitcast"    ? Opcode::kBitcast
                : name == "inttoptr" ? Opcode::kIntToPtr
                                     : Opcode::kCastToSafe;
      pi.operands.push_back(expect_local());
      shape_suffix();
    } else if (name == "ptrtoint") {
      need_result(true);
      inst.op = Opcode::kPtrToInt;
      inst.shape = TypeShape::Int(64);
      pi.operands.push_back(expect_local());
    } else if (name == "phi") {
      need_result(true);
      inst.op = Opcode::kPhi;
      inst.shape = parse_checked_shape();
      while (true) {
        expect_punct('[');
        pi.operands.push_back(expect_local());
        expect_punct(',');
        pi.blocks.push_back(expect_label());
        expect_punct(']');
        if (!is_punct(',')) break;
        next();
      }
    } else if (name == "call") {
      inst.op = Opcode::kCall;
      inst.shape = TypeShape::ZeroSized();
      if (peek().kind != Tok::kGlobal && peek().kind != Tok::kLocal) {
        inst.shape = parse_checked_shape();
      }
      if (has_result && inst.shape.is_void()) {
        throw ParseError(op.loc, "a call that defines a value needs a result shape");
      }
      if (peek().kind == Tok::kGlobal) {
        inst.symbol = next().text;
      } else {
        pi.operands.push_back(expect_local());
      }
      expect_punct('(');
      if (!is_punct(')')) {
        pi.operands.push_back(expect_local());
        while (is_punct(',')) {
          next();
          pi.operands.push_back(expect_local());
        }
      }
      expect_punct(')');
    } else if (auto binop = parse_binop(name)) {
      need_result(true);
      inst.op = Opcode::kBinOp;
      inst.binop = *binop;
      inst.shape = parse_checked_shape();
      pi.operands.push_back(expect_local());
      expect_punct(',');
      pi.operands.push_back(expect_local());
    } else if (name == "cmp") {
      need_result(true);
      inst.op = Opcode::kCmp;
      inst.shape = TypeShape::Int(1);
      const Token& p = expect(Tok::kIdent, "comparison predicate");
      auto pred = parse_pred(p.text);
      if (!pred) throw ParseError(p.loc, "unknown comparison predicate '" + p.text + "'");
      inst.pred = *pred;
      pi.operands.push_back(expect_local());
      expect_punct(',');
      pi.operands.push_back(expect_local());
    } else if (name == "const") {
      need_result(true);
      inst.op = Opcode::kConst;
      inst.shape = parse_checked_shape();
      inst.imm = expect(Tok::kInt, "integer constant").value;
    } else if (name == "globaladdr") {
      need_result(true);
      inst.op = Opcode::kGlobalAddr;
      inst.symbol = expect(Tok::kGlobal, "symbol").text;
      shape_suffix();
    } else if (name == "br") {
      need_result(false);
      inst.op = Opcode::kBr;
      pi.blocks.push_back(expect_label());
    } else if (name == "condbr") {
      need_result(false);
      inst.op = Opcode::kCondBr;
      pi.operands.push_back(expect_local());
      expect_punct(',');
      pi.blocks.push_back(expect_label());
      expect_punct(',');
      pi.blocks.push_back(expect_label());
    } else if (name == "ret") {
      need_result(false);
      inst.op = Opcode::kRet;
      if (peek().kind == Tok::kLocal) pi.operands.push_back(expect_local());
    } else if (name == "check" || name == "ensure") {
      need_result(false);
      inst.op = Opcode::kCheck;
      pi.operands.push_back(expect_local());
      expect_punct(',');
      inst.imm = expect(Tok::kInt, "checked size").value;
      if (name == "ensure") {
        expect_punct('!');
        const Token& k = expect(Tok::kIdent, "check kind");
        auto kind = ir::parse_check_kind(k.text);
        if (!kind || *kind == ir::CheckKind::kDeref) {
          throw ParseError(k.loc, "unknown ensure kind '" + k.text + "'");
        }
        inst.check = *kind;
      } else {
        inst.check = ir::CheckKind::kDeref;
      }
    } else {
      throw ParseError(op.loc, "unknown opcode '" + name + "'");
    }
    return pi;
  }

  static std::optional<ir::BinOpKind> parse_binop(std::string_view s) {
    using ir::BinOpKind;
    if (s == "add") return BinOpKind::kAdd;
    if (s == "sub") return BinOpKind::kSub;
    if (s == "mul") return BinOpKind::kMul;
    if (s == "and") return BinOpKind::kAnd;
    if (s == "or") return BinOpKind::kOr;
    if (s == "xor") return BinOpKind::kXor;
    return std::nullopt;
  }

  static std::optional<ir::CmpPred> parse_pred(std::string_view s) {
    using ir::CmpPred;
    if (s == "eq") return CmpPred::kEq;
    if (s == "ne") return CmpPred::kNe;
    if (s == "lt") return CmpPred::kLt;
    if (s == "le") return CmpPred::kLe;
    if (s == "gt") return CmpPred::kGt;
    if (s == "ge") return CmpPred::kGe;
    return std::nullopt;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

ProgramModule parse_module_unchecked(std::string_view text, const std::string& file) {
  return Parser(Lexer(text, file).run()).parse_module();
}

ProgramModule parse_module(std::string_view text, const std::string& file) {
  ProgramModule m = parse_module_unchecked(text, file);
  ir::require_valid(m);
  return m;
}

TypeShape parse_shape(std::string_view text) {
  return Parser(Lexer(text, "<shape>").run()).parse_shape_only();
}

}  // namespace safeir::text
