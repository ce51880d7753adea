// Copyright 2026 The rtdbias Authors.
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

#ifndef RTDBIAS_ERROR_H_
#define RTDBIAS_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rtdbias {

enum class ErrorCode {
  kInvalidArgument,
  kParseError,
  kIoError,
  kFailedPrecondition,
};

// Stable machine-readable name, e.g. "parse_error".
std::string_view ErrorCodeName(ErrorCode code);

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Malformed input record. `line` is 1-based; `field` may be empty when the
// whole record is unreadable.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& detail);

  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

[[noreturn]] void ThrowInvalidArgument(const std::string& message);
[[noreturn]] void ThrowFailedPrecondition(const std::string& message);
[[noreturn]] void ThrowIoError(const std::string& message);

}  // namespace rtdbias

#endif  // RTDBIAS_ERROR_H_
