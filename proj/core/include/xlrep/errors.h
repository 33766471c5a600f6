// Copyright 2026 The xlrep Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef XLREP_ERRORS_H_
#define XLREP_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xlrep {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a precondition or a type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed input text. Carries the 1-based line number (0 if unknown).
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string &message)
      : ValidationError(line > 0 ? "line " + std::to_string(line) + ": " +
                                       message
                                 : message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Numerical procedure failed (divergence, non-finite values).
class NumericalError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// File system failure: cannot open, read or write.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace xlrep

#endif  // XLREP_ERRORS_H_
