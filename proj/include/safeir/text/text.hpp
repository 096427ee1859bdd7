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

// Line-oriented textual form of ProgramModule (`.sir` files).
//
//   module demo
//   mode safeffi
//   extern c_helper nofree
//   global @counter : i32 :raw = 0
//
//   fn get(%p: &{i32, i32} :safe) -> i32 extern_visible {
//   entry:
//     %f = gep %p, 4 : &i32
//     %v = load i32, %f
//     ret %v
//   }
//
// Pointer kinds are written as `:safe`, `:raw` or `:noptr` suffixes and
// default to the kind implied by the shape when omitted. Checks print as
// `check %p, N` (per-access) and `ensure %p, N !cast` (boundary checks).

#ifndef SAFEIR_TEXT_TEXT_HPP_
#define SAFEIR_TEXT_TEXT_HPP_

#include <string>
#include <string_view>

#include "safeir/ir/errors.hpp"
#include "safeir/ir/module.hpp"

namespace safeir::text {

class ParseError : public Error {
 public:
  ParseError(const ir::SourceLocation& loc, const std::string& msg);
  const ir::SourceLocation& location() const { return loc_; }

 private:
  ir::SourceLocation loc_;
};

/// Parses and validates. Throws ParseError on syntax errors and
/// ValidationError when the parsed module is ill-formed.
ir::ProgramModule parse_module(std::string_view text,
                               const std::string& file = "<input>");

/// Syntax-only parse; the result may fail validate_module.
ir::ProgramModule parse_module_unchecked(std::string_view text,
                                         const std::string& file = "<input>");

ir::TypeShape parse_shape(std::string_view text);

std::string print_module(const ir::ProgramModule& m);
std::string print_function(const ir::FunctionDef& f);
std::string print_instruction(const ir::FunctionDef& f, const ir::Instruction& inst);

}  // namespace safeir::text

#endif  // SAFEIR_TEXT_TEXT_HPP_
