// Copyright 2026 The protonpipe developers
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

#pragma once

#include <stdexcept>
#include <string>

namespace protonpipe {

/// Process exit codes used by the CLI. Exceptions map onto these.
enum class ExitCode : int {
  Ok = 0,
  Validation = 2,
  Resource = 3,
  Stage = 4,
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual ExitCode exit_code() const { return ExitCode::Validation; }
};

/// Malformed input, broken invariant, or bad argument.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Operand shapes (qubit counts, matrix dimensions) do not match.
class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Text input could not be parsed; message carries the line number.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : ValidationError(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Requested symmetry sector is empty or inconsistent.
class SectorError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A matrix is too ill-conditioned for the requested transformation.
class ConditioningError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Circuit routing is impossible on the given coupling map.
class RoutingError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Required data (e.g. a path endpoint) is missing from a result set.
class DataError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A configured size limit (dense matrices, density operators) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::Resource; }
};

/// A pipeline stage failed; downstream stages are skipped.
class StageError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::Stage; }
};

}  // namespace protonpipe
