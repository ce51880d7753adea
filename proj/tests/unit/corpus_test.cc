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

#include "rtdbias/corpus.h"

#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "rtdbias/error.h"

namespace rtdbias {
namespace {

Document Doc(std::string id, std::string text, ClassLabel label,
             std::optional<std::string> group = std::nullopt,
             std::optional<std::string> type = std::nullopt) {
  Document d;
  d.id = std::move(id);
  d.text = std::move(text);
  d.class_label = label;
  d.group_id = std::move(group);
  d.doc_type = std::move(type);
  return d;
}

TEST(IngestTest, JsonlTwoRecords) {
  std::istringstream in(
      R"({"id":"1","text":"hello","class_label":"A","task_labels":["x"]})"
      "\n"
      R"({"id":"2","text":"world","class_label":"B"})"
      "\n");
  const Corpus c = IngestJsonl(in);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.class_count(ClassLabel::kA), 1u);
  EXPECT_EQ(c.class_count(ClassLabel::kB), 1u);
  EXPECT_EQ(c[0].id, "1");
  EXPECT_TRUE(c[0].HasTaskLabel("x"));
  EXPECT_TRUE(c[1].task_labels.empty());
}

TEST(IngestTest, EmptyFileGivesEmptyCorpus) {
  std::istringstream in("");
  EXPECT_TRUE(IngestJsonl(in).empty());
  std::istringstream csv("");
  EXPECT_TRUE(IngestCsv(csv).empty());
}

TEST(IngestTest, MissingClassLabelNamesLineAndField) {
  std::istringstream in(
      R"({"id":"1","text":"a","class_label":"A"})"
      "\n"
      R"({"id":"2","text":"b"})"
      "\n");
  try {
    IngestJsonl(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.field(), "class_label");
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
  }
}

TEST(IngestTest, RejectsDuplicateIds) {
  std::istringstream in(
      R"({"id":"1","text":"a","class_label":"A"})"
      "\n"
      R"({"id":"1","text":"b","class_label":"B"})"
      "\n");
  EXPECT_THROW(IngestJsonl(in), ParseError);
}

TEST(IngestTest, RejectsUnknownClassAndBadJson) {
  std::istringstream bad_class(R"({"id":"1","text":"a","class_label":"C"})");
  EXPECT_THROW(IngestJsonl(bad_class), ParseError);
  std::istringstream bad_json("{\"id\":");
  EXPECT_THROW(IngestJsonl(bad_json), ParseError);
}

TEST(IngestTest, CustomClassNames) {
  IngestOptions options;
  options.class_names = {"F", "M"};
  std::istringstream in(R"({"id":"1","text":"a","class_label":"M"})");
  const Corpus c = IngestJsonl(in, options);
  EXPECT_EQ(c[0].class_label, ClassLabel::kB);
  EXPECT_EQ(c.class_name(ClassLabel::kA), "F");
}

TEST(IngestTest, CsvSplitsTaskLabels) {
  std::istringstream in(
      "id,text,class_label,task_labels,group_id,doc_type\n"
      "1,\"hi, there\",A,x;y,g1,nursing\n"
      "2,bye,B,,,\n");
  const Corpus c = IngestCsv(in);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].text, "hi, there");
  EXPECT_EQ(c[0].task_labels, (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(c[0].group_id, "g1");
  EXPECT_FALSE(c[1].group_id.has_value());
}

TEST(IngestTest, NormalizesToNfc) {
  // "e" followed by a combining acute accent.
  std::istringstream in(
      "{\"id\":\"1\",\"text\":\"cafe\xcc\x81\",\"class_label\":\"A\"}");
  EXPECT_EQ(IngestJsonl(in)[0].text, "caf\xc3\xa9");
}

TEST(IngestTest, JsonlRoundTripIsByteIdentical) {
  Document d = Doc("a1", "She said \"hi\"\tthere", ClassLabel::kA, "g", "nursing");
  d.task_labels = {"428", "401"};
  const Corpus c({d, Doc("b2", "caf\xc3\xa9", ClassLabel::kB)});
  std::ostringstream first;
  EmitJsonl(c, first);
  std::istringstream in(first.str());
  const Corpus back = IngestJsonl(in);
  EXPECT_EQ(back, c);
  std::ostringstream second;
  EmitJsonl(back, second);
  EXPECT_EQ(first.str(), second.str());
}

TEST(IngestTest, CsvRoundTrip) {
  Document d = Doc("a1", "line one\nline \"two\"", ClassLabel::kA, "g");
  d.task_labels = {"x", "y"};
  const Corpus c({d, Doc("b2", "plain", ClassLabel::kB)});
  std::ostringstream out;
  EmitCsv(c, out);
  std::istringstream in(out.str());
  EXPECT_EQ(IngestCsv(in), c);
}

TEST(CorpusTest, CountsMatchDocuments) {
  const Corpus c({Doc("1", "", ClassLabel::kA), Doc("2", "", ClassLabel::kA),
                  Doc("3", "", ClassLabel::kB)});
  EXPECT_EQ(c.class_count(ClassLabel::kA), 2u);
  EXPECT_EQ(c.class_count(ClassLabel::kB), 1u);
  EXPECT_THROW(Corpus({Doc("", "", ClassLabel::kA)}), Error);
}

TEST(PreprocessTest, AllFlagsOnWorkedExample) {
  EXPECT_EQ(PreprocessText("weight 80 kg on 01/02/2010", PreprocessConfig::AllFlags()),
            "weight kg on");
}

TEST(PreprocessTest, RangeRemovedWithoutLowercase) {
  PreprocessConfig cfg;
  cfg.remove_ranges = true;
  EXPECT_EQ(PreprocessText("BP 120-130", cfg), "BP");
}

TEST(PreprocessTest, AllFlagsOffIsIdentity) {
  const std::string text = "  Weight 80 kg,  on 01/02/2010 ";
  EXPECT_EQ(PreprocessText(text, PreprocessConfig{}), text);
}

TEST(PreprocessTest, DatePatterns) {
  PreprocessConfig cfg;
  cfg.remove_dates = true;
  EXPECT_EQ(PreprocessText("seen 2010-02-01 and March 3, 2011 today", cfg),
            "seen and today");
}

TEST(PreprocessTest, DecimalNumbers) {
  PreprocessConfig cfg;
  cfg.remove_numbers = true;
  EXPECT_EQ(PreprocessText("temp 37.5 c", cfg), "temp c");
}

TEST(PreprocessTest, AbbreviationsAreWholeWord) {
  PreprocessConfig cfg;
  cfg.lowercase = true;
  cfg.abbreviation_map = {{"pt", "patient"}, {"hx", "history"}};
  EXPECT_EQ(PreprocessText("Pt has HX of pts", cfg), "patient has history of pts");
}

TEST(PreprocessTest, StripChars) {
  PreprocessConfig cfg;
  cfg.strip_chars = {"*", "#"};
  EXPECT_EQ(PreprocessText("a*b #c", cfg), "ab c");
}

TEST(PreprocessTest, IdempotentAndLabelPreserving) {
  PreprocessConfig cfg = PreprocessConfig::AllFlags();
  cfg.abbreviation_map = {{"pt", "patient"}};
  cfg.strip_chars = {":"};
  Document d = Doc("1", "Pt: 5-10 mg on 1/2/2020, BP 120", ClassLabel::kB);
  d.task_labels = {"x"};
  const Corpus c({d});
  const Corpus once = Preprocess(c, cfg);
  EXPECT_EQ(Preprocess(once, cfg), once);
  EXPECT_EQ(once[0].class_label, ClassLabel::kB);
  EXPECT_EQ(once[0].task_labels, d.task_labels);
  EXPECT_EQ(once[0].text, "patient mg on , bp");
}

TEST(PreprocessTest, LoadsKeyValueConfig) {
  std::istringstream in(
      "# rules\n"
      "remove_numbers = true\n"
      "lowercase=true\n"
      "strip_chars = *#\n"
      "abbrev.pt = patient\n");
  const PreprocessConfig cfg = LoadPreprocessConfig(in);
  EXPECT_TRUE(cfg.remove_numbers);
  EXPECT_FALSE(cfg.remove_dates);
  EXPECT_TRUE(cfg.lowercase);
  EXPECT_EQ(cfg.strip_chars.size(), 2u);
  EXPECT_EQ(cfg.abbreviation_map.at("pt"), "patient");
}

TEST(PreprocessTest, ConfigErrors) {
  std::istringstream unknown("remove_everything = true\n");
  EXPECT_THROW(LoadPreprocessConfig(unknown), ParseError);
  std::istringstream bad_bool("lowercase = maybe\n");
  EXPECT_THROW(LoadPreprocessConfig(bad_bool), ParseError);
  std::istringstream empty_key("abbrev. = x\n");
  EXPECT_THROW(LoadPreprocessConfig(empty_key), ParseError);
}

TEST(FilterTest, MinDocsPerGroup) {
  const Corpus c({Doc("1", "", ClassLabel::kA, "g1"), Doc("2", "", ClassLabel::kA, "g1"),
                  Doc("3", "", ClassLabel::kB, "g1"), Doc("4", "", ClassLabel::kB, "g2")});
  const Corpus out = Filter(c, std::nullopt, 3);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out.class_count(ClassLabel::kB), 1u);
}

TEST(FilterTest, DocTypes) {
  const Corpus c({Doc("1", "", ClassLabel::kA, std::nullopt, "nursing"),
                  Doc("2", "", ClassLabel::kA, std::nullopt, "radiology"),
                  Doc("3", "", ClassLabel::kB)});
  const Corpus out = Filter(c, std::set<std::string>{"nursing"}, std::nullopt);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].id, "1");
}

TEST(FilterTest, NoFiltersIsIdentity) {
  const Corpus c({Doc("1", "x", ClassLabel::kA, "g"), Doc("2", "y", ClassLabel::kB)});
  EXPECT_EQ(Filter(c, std::nullopt, std::nullopt), c);
  EXPECT_THROW(Filter(c, std::nullopt, 0), Error);
}

}  // namespace
}  // namespace rtdbias
