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

#ifndef RTDBIAS_FORMAT_H_
#define RTDBIAS_FORMAT_H_

#include <string>
#include <string_view>
#include <vector>

// Deterministic text formatting for the TSV/CSV writers.
namespace rtdbias::fmt {

// Shortest decimal representation that round-trips the double. NaN is
// written as "NA", infinities as "inf"/"-inf".
std::string Number(double value);

// Quotes a CSV field when it contains a comma, quote, CR or LF.
std::string CsvField(std::string_view field);

// Joins already-escaped fields with `sep`.
std::string Join(const std::vector<std::string>& fields, char sep);

// Parses RFC 4180 CSV. Each record carries the 1-based line on which it
// starts. Throws ParseError on an unterminated quoted field.
struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
};
std::vector<CsvRecord> ParseCsv(std::string_view content);

}  // namespace rtdbias::fmt

#endif  // RTDBIAS_FORMAT_H_
