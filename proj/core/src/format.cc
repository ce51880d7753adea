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

#include "rtdbias/format.h"

#include <charconv>
#include <cmath>
#include <cstddef>
#include <utility>

#include "rtdbias/error.h"

namespace rtdbias::fmt {

std::string Number(double value) {
  if (std::isnan(value)) return "NA";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string CsvField(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string Join(const std::vector<std::string>& fields, char sep) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.push_back(sep);
    out += fields[i];
  }
  return out;
}

std::vector<CsvRecord> ParseCsv(std::string_view content) {
  std::vector<CsvRecord> records;
  std::size_t line = 1;
  std::size_t pos = 0;
  const std::size_t n = content.size();
  while (pos < n) {
    CsvRecord record;
    record.line = line;
    std::string field;
    bool record_done = false;
    while (!record_done) {
      field.clear();
      if (pos < n && content[pos] == '"') {
        ++pos;
        bool closed = false;
        while (pos < n) {
          const char c = content[pos++];
          if (c == '"') {
            if (pos < n && content[pos] == '"') {
              field.push_back('"');
              ++pos;
            } else {
              closed = true;
              break;
            }
          } else {
            if (c == '\n') ++line;
            field.push_back(c);
          }
        }
        if (!closed) {
          throw ParseError(record.line, "", "unterminated quoted field");
        }
        // Anything between the closing quote and the delimiter is kept.
        while (pos < n && content[pos] != ',' && content[pos] != '\n' &&
               content[pos] != '\r') {
          field.push_back(content[pos++]);
        }
      } else {
        while (pos < n && content[pos] != ',' && content[pos] != '\n' &&
               content[pos] != '\r') {
          field.push_back(content[pos++]);
        }
      }
      record.fields.push_back(field);
      if (pos >= n) {
        record_done = true;
      } else if (content[pos] == ',') {
        ++pos;
      } else {
        if (content[pos] == '\r') ++pos;
        if (pos < n && content[pos] == '\n') ++pos;
        ++line;
        record_done = true;
      }
    }
    // Blank lines are not records.
    if (!(record.fields.size() == 1 && record.fields[0].empty())) {
      records.push_back(std::move(record));
    }
  }
  return records;
}

}  // namespace rtdbias::fmt
