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

#include "rtdbias/text.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <cstdint>

#include "rtdbias/error.h"

namespace rtdbias::text {
namespace {

constexpr UChar32 kReplacement = 0xFFFD;

// Decodes the code point at `pos`, advancing it. Invalid bytes decode as a
// negative value and consume one byte.
UChar32 NextCodePoint(std::string_view s, std::size_t& pos) {
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(s.data());
  const auto length = static_cast<std::int32_t>(s.size());
  auto i = static_cast<std::int32_t>(pos);
  UChar32 c;
  U8_NEXT(bytes, i, length, c);
  pos = static_cast<std::size_t>(i);
  return c;
}

void AppendCodePoint(std::string& out, UChar32 c) {
  if (c < 0) c = kReplacement;
  std::uint8_t buffer[U8_MAX_LENGTH];
  std::int32_t length = 0;
  U8_APPEND_UNSAFE(buffer, length, c);
  out.append(reinterpret_cast<const char*>(buffer),
             static_cast<std::size_t>(length));
}

bool IsLetter(UChar32 c) { return c >= 0 && u_isalpha(c); }

bool IsApostrophe(UChar32 c) { return c == U'\'' || c == 0x2019; }

}  // namespace

std::string NormalizeNfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kFailedPrecondition,
                std::string("ICU NFC normalizer unavailable: ") +
                    u_errorName(status));
  }
  const icu::UnicodeString source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<std::int32_t>(utf8.size())));
  if (nfc->isNormalized(source, status) && U_SUCCESS(status)) {
    std::string out;
    source.toUTF8String(out);
    return out;
  }
  status = U_ZERO_ERROR;
  const icu::UnicodeString normalized = nfc->normalize(source, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kFailedPrecondition,
                std::string("NFC normalization failed: ") +
                    u_errorName(status));
  }
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::string Lowercase(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());
  std::size_t pos = 0;
  while (pos < utf8.size()) {
    const unsigned char byte = static_cast<unsigned char>(utf8[pos]);
    if (byte < 0x80) {
      out.push_back(static_cast<char>(
          byte >= 'A' && byte <= 'Z' ? byte - 'A' + 'a' : byte));
      ++pos;
      continue;
    }
    const UChar32 c = NextCodePoint(utf8, pos);
    AppendCodePoint(out, c < 0 ? c : u_tolower(c));
  }
  return out;
}

std::vector<TokenSpan> FindTokens(std::string_view utf8,
                                  bool keep_internal_apostrophes) {
  std::vector<TokenSpan> tokens;
  std::size_t pos = 0;
  bool in_token = false;
  TokenSpan current;
  while (pos < utf8.size()) {
    const std::size_t start = pos;
    const UChar32 c = NextCodePoint(utf8, pos);
    if (IsLetter(c)) {
      if (!in_token) {
        in_token = true;
        current = TokenSpan{start, start, {}};
      }
      AppendCodePoint(current.lowered, u_tolower(c));
      current.end = pos;
      continue;
    }
    if (in_token && keep_internal_apostrophes && IsApostrophe(c) &&
        pos < utf8.size()) {
      std::size_t peek = pos;
      if (IsLetter(NextCodePoint(utf8, peek))) {
        current.lowered.append(utf8.substr(start, pos - start));
        current.end = pos;
        continue;
      }
    }
    if (in_token) {
      tokens.push_back(std::move(current));
      in_token = false;
    }
  }
  if (in_token) tokens.push_back(std::move(current));
  return tokens;
}

std::string CollapseWhitespace(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());
  bool pending_space = false;
  std::size_t pos = 0;
  while (pos < utf8.size()) {
    const std::size_t start = pos;
    const UChar32 c = NextCodePoint(utf8, pos);
    if (c >= 0 && u_isUWhiteSpace(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.append(utf8.substr(start, pos - start));
  }
  return out;
}

std::vector<std::string> CodePoints(std::string_view utf8) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < utf8.size()) {
    const std::size_t start = pos;
    NextCodePoint(utf8, pos);
    out.emplace_back(utf8.substr(start, pos - start));
  }
  return out;
}

}  // namespace rtdbias::text
