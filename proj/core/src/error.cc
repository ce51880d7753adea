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

#include "rtdbias/error.h"

#include <utility>

namespace rtdbias {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kParseError:
      return "parse_error";
    case ErrorCode::kIoError:
      return "io_error";
    case ErrorCode::kFailedPrecondition:
      return "failed_precondition";
  }
  return "unknown";
}

ParseError::ParseError(std::size_t line, std::string field,
                       const std::string& detail)
    : Error(ErrorCode::kParseError,
            "line " + std::to_string(line) +
                (field.empty() ? std::string() : ", field '" + field + "'") +
                ": " + detail),
      line_(line),
      field_(std::move(field)) {}

void ThrowInvalidArgument(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

void ThrowFailedPrecondition(const std::string& message) {
  throw Error(ErrorCode::kFailedPrecondition, message);
}

void ThrowIoError(const std::string& message) {
  throw Error(ErrorCode::kIoError, message);
}

}  // namespace rtdbias
