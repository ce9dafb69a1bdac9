// Copyright 2026 The vground Authors.
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

#ifndef VGROUND_UTIL_ERROR_H_
#define VGROUND_UTIL_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vground {

// Process exit codes used by the command-line tool. Every library error
// carries one so the CLI can map exceptions without inspecting messages.
enum class ErrorCode : int {
  kUsage = 1,
  kData = 2,
  kNumerical = 3,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Bad flags, unknown subcommands, malformed option values.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what)
      : Error(ErrorCode::kUsage, what) {}
};

// Invalid inputs: malformed files, violated preconditions, bad configs.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what)
      : Error(ErrorCode::kData, what) {}
};

// Configuration that would silently produce nothing or is self-inconsistent.
class ConfigError : public DataError {
 public:
  explicit ConfigError(const std::string& what)
      : DataError("config: " + what) {}
};

// Line-oriented text format errors. line is 1-based.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Non-finite losses or gradients during training / gradient checking.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorCode::kNumerical, what) {}
};

}  // namespace vground

#endif  // VGROUND_UTIL_ERROR_H_
