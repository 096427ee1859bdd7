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

#ifndef SAFEIR_IR_ERRORS_HPP_
#define SAFEIR_IR_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace safeir {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed shapes or modules that fail validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Raised by analyses that cannot classify a value.
class AnalysisError : public Error {
 public:
  using Error::Error;
};

}  // namespace safeir

#endif  // SAFEIR_IR_ERRORS_HPP_
