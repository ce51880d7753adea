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

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "rtdbias/error.h"
#include "rtdbias/format.h"
#include "rtdbias/ranking.h"
#include "rtdbias/text.h"

namespace rtdbias {
namespace {

TEST(TextTest, FindTokensLowercasesLetterRuns) {
  const auto tokens = text::FindTokens("He's 42-year-old", false);
  std::vector<std::string> words;
  for (const auto& t : tokens) words.push_back(t.lowered);
  EXPECT_EQ(words, (std::vector<std::string>{"he", "s", "year", "old"}));
  EXPECT_EQ(tokens[0].begin, 0u);
  EXPECT_EQ(tokens[0].end, 2u);
}

TEST(TextTest, InternalApostrophes) {
  std::vector<std::string> words;
  for (const auto& t : text::FindTokens("don't 'quote' it\xe2\x80\x99s", true)) {
    words.push_back(t.lowered);
  }
  EXPECT_EQ(words, (std::vector<std::string>{"don't", "quote", "it\xe2\x80\x99s"}));
}

TEST(TextTest, UnicodeLetters) {
  const auto tokens = text::FindTokens("\xc3\x89T\xc3\x89 na\xc3\xafve", false);
  ASSERT_EQ(tokens.size(), 2u);
  EXPECT_EQ(tokens[0].lowered, "\xc3\xa9t\xc3\xa9");
}

TEST(TextTest, CollapseWhitespace) {
  EXPECT_EQ(text::CollapseWhitespace("  a \t\n b  "), "a b");
  EXPECT_EQ(text::CollapseWhitespace(""), "");
}

TEST(RankingTest, AverageTies) {
  const std::vector<double> v{5, 5, 2};
  EXPECT_EQ(FractionalRanksDescending(v), (std::vector<double>{1.5, 1.5, 3}));
  const std::vector<double> all_equal{1, 1, 1, 1};
  EXPECT_EQ(FractionalRanksDescending(all_equal), (std::vector<double>(4, 2.5)));
  EXPECT_TRUE(FractionalRanksDescending({}).empty());
}

TEST(FormatTest, NumberRoundTrips) {
  EXPECT_EQ(fmt::Number(0.1), "0.1");
  EXPECT_EQ(fmt::Number(3), "3");
  EXPECT_EQ(fmt::Number(std::nan("")), "NA");
  const double x = 1.0 / 3.0;
  EXPECT_EQ(std::stod(fmt::Number(x)), x);
}

TEST(FormatTest, CsvQuoting) {
  EXPECT_EQ(fmt::CsvField("plain"), "plain");
  EXPECT_EQ(fmt::CsvField("a,b"), "\"a,b\"");
  EXPECT_EQ(fmt::CsvField("say \"x\""), "\"say \"\"x\"\"\"");
}

TEST(FormatTest, ParseCsvTracksLines) {
  const auto records = fmt::ParseCsv("a,b\n\"multi\nline\",c\nd,e\n");
  ASSERT_EQ(records.size(), 3u);
  EXPECT_EQ(records[1].fields[0], "multi\nline");
  EXPECT_EQ(records[2].line, 4u);
  EXPECT_THROW(fmt::ParseCsv("\"open"), ParseError);
}

TEST(ErrorTest, CodeNames) {
  EXPECT_EQ(ErrorCodeName(ErrorCode::kParseError), "parse_error");
  EXPECT_EQ(ErrorCodeName(ErrorCode::kInvalidArgument), "invalid_argument");
  const ParseError e(3, "text", "bad");
  EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
}

}  // namespace
}  // namespace rtdbias
