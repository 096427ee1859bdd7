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

#ifndef SAFEIR_TESTS_SUPPORT_FIXTURES_HPP_
#define SAFEIR_TESTS_SUPPORT_FIXTURES_HPP_

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "safeir/text/text.hpp"

namespace safeir::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(SAFEIR_FIXTURE_DIR) + "/" + name;
}

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name));
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ir::ProgramModule load_fixture(const std::string& name) {
  return text::parse_module(read_fixture(name), name);
}

}  // namespace safeir::testing

#endif  // SAFEIR_TESTS_SUPPORT_FIXTURES_HPP_
