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

#ifndef SAFEIR_IR_CHECK_SITE_HPP_
#define SAFEIR_IR_CHECK_SITE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "safeir/ir/module.hpp"

namespace safeir::ir {

/// A dynamic check planned by an instrumentation pass. `anchor` is the id
/// of the instruction the check protects in the uninstrumented function;
/// DEREF, HEAP and CAST checks run before it, LOAD and RETURN checks after
/// it, PARAM checks at function entry.
struct CheckSite {
  CheckKind kind = CheckKind::kDeref;
  InstId anchor = kNoInst;
  ValueId value = kNoValue;
  std::uint64_t size = 0;
  std::string origin;  // name of the pass that planned the site

  friend bool operator==(const CheckSite&, const CheckSite&) = default;
};

/// Materializes sites as check pseudo-instructions and renumbers `f`.
/// Throws ValidationError for a site of size 0 or with an unknown anchor.
void insert_checks(FunctionDef& f, const std::vector<CheckSite>& sites);

}  // namespace safeir::ir

#endif  // SAFEIR_IR_CHECK_SITE_HPP_
