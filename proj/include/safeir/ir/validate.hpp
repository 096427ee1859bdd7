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

#ifndef SAFEIR_IR_VALIDATE_HPP_
#define SAFEIR_IR_VALIDATE_HPP_

#include <string>
#include <vector>

#include "safeir/ir/module.hpp"

namespace safeir::ir {

struct Diagnostic {
  std::string function;  // empty for module-level problems
  std::string block;
  InstId inst = kNoInst;
  SourceLocation loc;
  std::string message;

  std::string to_string() const;
};

/// Checks shape, SSA, CFG, attribute and pointer-kind invariants. The
/// result is empty iff the module is well-formed.
std::vector<Diagnostic> validate_module(const ProgramModule& m);

/// Throws ValidationError listing every diagnostic when the module is not
/// well-formed.
void require_valid(const ProgramModule& m);

}  // namespace safeir::ir

#endif  // SAFEIR_IR_VALIDATE_HPP_
