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

#ifndef RTDBIAS_TEXT_H_
#define RTDBIAS_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers shared by the corpus, tokenizer and trimming code.
namespace rtdbias::text {

// Unicode NFC normalization. Invalid UTF-8 sequences are replaced with
// U+FFFD.
std::string NormalizeNfc(std::string_view utf8);

// Simple (one-to-one) per-code-point lowercase mapping.
std::string Lowercase(std::string_view utf8);

// A token located in its source text: bytes [begin, end) of the original,
// plus the lowercased token string.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string lowered;
};

// Tokens are maximal runs of letters (Unicode general category L*). With
// `keep_internal_apostrophes`, an apostrophe (' or U+2019) flanked by letters
// on both sides stays inside the token.
std::vector<TokenSpan> FindTokens(std::string_view utf8,
                                  bool keep_internal_apostrophes);

// Replaces every run of Unicode whitespace with one ASCII space and trims
// both ends.
std::string CollapseWhitespace(std::string_view utf8);

// Splits into code points, each returned as its UTF-8 encoding.
std::vector<std::string> CodePoints(std::string_view utf8);

}  // namespace rtdbias::text

#endif  // RTDBIAS_TEXT_H_
