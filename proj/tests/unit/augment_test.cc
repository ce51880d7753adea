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

#include "rtdbias/augment.h"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "rtdbias/error.h"
#include "rtdbias/harness.h"

namespace rtdbias {
namespace {

RankDistribution FromCounts(std::unordered_map<std::string, std::int64_t> counts) {
  return RankDistribution(1, std::move(counts));
}

DivergenceReport WorkedReport() {
  return ComputeRtd(FromCounts({{"apple", 3}, {"bee", 2}, {"cat", 1}}),
                    FromCounts({{"bee", 3}, {"apple", 2}, {"dog", 1}}));
}

Corpus OneDoc(const std::string& text) {
  Document d;
  d.id = "1";
  d.text = text;
  d.task_labels = {"x"};
  return Corpus({d});
}

TEST(LadderTest, LinearDeciles) {
  const auto ladder = ThresholdLadder(ThresholdSpacing::kLinear);
  ASSERT_EQ(ladder.size(), 9u);
  for (int i = 0; i < 9; ++i) EXPECT_NEAR(ladder[i], 0.1 * (i + 1), 1e-12);
}

TEST(LadderTest, LogarithmicIsGeometric) {
  const auto ladder = ThresholdLadder(ThresholdSpacing::kLogarithmic);
  ASSERT_EQ(ladder.size(), 9u);
  EXPECT_NEAR(ladder.front(), 0.01, 1e-12);
  EXPECT_NEAR(ladder.back(), 0.9, 1e-12);
  const double ratio = ladder[1] / ladder[0];
  for (std::size_t i = 2; i < ladder.size(); ++i) {
    EXPECT_NEAR(ladder[i] / ladder[i - 1], ratio, 1e-9);
  }
}

TEST(LadderTest, SpacingNames) {
  EXPECT_EQ(ParseThresholdSpacing("linear"), ThresholdSpacing::kLinear);
  EXPECT_EQ(ParseThresholdSpacing("logarithmic"), ThresholdSpacing::kLogarithmic);
  EXPECT_THROW(ParseThresholdSpacing("cubic"), Error);
}

TEST(PlanTest, WorkedExampleHalf) {
  const std::vector<double> levels{0.5};
  const TrimPlan plan = PlanTrim(WorkedReport(), levels);
  EXPECT_EQ(plan.term_sets[0], (std::vector<std::string>{"apple"}));
}

TEST(PlanTest, FullShareSelectsEverything) {
  const std::vector<double> levels{1.0};
  EXPECT_EQ(PlanTrim(WorkedReport(), levels).term_sets[0].size(), 4u);
}

TEST(PlanTest, DecilesNested) {
  const auto ladder = ThresholdLadder(ThresholdSpacing::kLinear);
  const TrimPlan plan = PlanTrim(WorkedReport(), ladder);
  ASSERT_EQ(plan.term_sets.size(), 9u);
  for (std::size_t i = 1; i < plan.term_sets.size(); ++i) {
    const auto& small = plan.term_sets[i - 1];
    const auto& big = plan.term_sets[i];
    EXPECT_TRUE(std::equal(small.begin(), small.end(), big.begin()));
  }
}

TEST(PlanTest, Errors) {
  const std::vector<double> unordered{0.5, 0.2};
  EXPECT_THROW(PlanTrim(WorkedReport(), unordered), Error);
  const std::vector<double> out_of_range{0.0};
  EXPECT_THROW(PlanTrim(WorkedReport(), out_of_range), Error);
  const std::vector<double> ok{0.5};
  EXPECT_THROW(PlanTrim(DivergenceReport{}, ok), Error);
}

TEST(PlanTest, ShareCovering) {
  const DivergenceReport r = WorkedReport();
  const std::vector<std::string> cat{"cat"};
  EXPECT_DOUBLE_EQ(ShareCovering(r, cat), r.cumulative_share[2]);
  const std::vector<std::string> unknown{"zebra"};
  EXPECT_THROW(ShareCovering(r, unknown), Error);
}

TEST(StripTest, RemovesWholeTokens) {
  const std::vector<std::string> she{"she"};
  const TrimmedCorpus t = ApplyTrim(OneDoc("she was seen"), she, {});
  EXPECT_EQ(t.corpus[0].text, "was seen");
  EXPECT_EQ(t.length_stats.max, 2u);
  EXPECT_EQ(t.removed_terms, 1u);
}

TEST(StripTest, AllOccurrencesAndNoSubstrings) {
  const std::vector<std::string> he{"he"};
  EXPECT_EQ(ApplyTrim(OneDoc("he said he left"), he, {}).corpus[0].text, "said left");
  EXPECT_EQ(ApplyTrim(OneDoc("the hen, He!"), he, {}).corpus[0].text, "the hen, !");
}

TEST(StripTest, EmptyTermsIsIdentity) {
  const Corpus c = OneDoc("  keep   this ");
  EXPECT_EQ(ApplyTrim(c, {}, {}).corpus, c);
}

TEST(StripTest, PreservesLabels) {
  const std::vector<std::string> terms{"a"};
  const TrimmedCorpus t = ApplyTrim(OneDoc("a b"), terms, {});
  EXPECT_EQ(t.corpus[0].task_labels, std::vector<std::string>{"x"});
  EXPECT_EQ(t.corpus[0].class_label, ClassLabel::kA);
}

TEST(StripTest, RejectsHigherOrder) {
  TokenizerConfig cfg;
  cfg.n = 2;
  const std::vector<std::string> terms{"a"};
  EXPECT_THROW(ApplyTrim(OneDoc("a b"), terms, cfg), Error);
}

TEST(StripTest, OrderIndependent) {
  std::mt19937_64 rng(4);
  const std::string text = "alpha beta gamma alpha delta beta epsilon gamma zeta";
  std::vector<std::string> terms{"alpha", "gamma", "zeta"};
  std::vector<std::string> sorted = terms;
  std::sort(sorted.begin(), sorted.end());
  const std::string one_pass = StripTerms(text, sorted, false);
  for (int trial = 0; trial < 6; ++trial) {
    std::shuffle(terms.begin(), terms.end(), rng);
    std::string staged = text;
    for (const auto& t : terms) staged = StripTerms(staged, {t}, false);
    EXPECT_EQ(staged, one_pass);
  }
  EXPECT_EQ(one_pass, "beta delta beta epsilon");
}

TEST(LengthTest, Stats) {
  const std::vector<std::size_t> lengths{1, 2, 3, 4, 10};
  const LengthStats s = ComputeLengthStats(lengths);
  EXPECT_DOUBLE_EQ(s.mean, 4.0);
  EXPECT_DOUBLE_EQ(s.median, 3.0);
  EXPECT_EQ(s.min, 1u);
  EXPECT_EQ(s.max, 10u);
  ASSERT_EQ(s.deciles.size(), 9u);
  EXPECT_DOUBLE_EQ(s.deciles[4], 3.0);
  EXPECT_EQ(s.histogram.at(10), 1u);
  EXPECT_EQ(ComputeLengthStats({}).documents, 0u);
}

TEST(LengthTest, ReportMonotone) {
  SyntheticSpec spec;
  spec.n_docs = 200;
  spec.class_terms = PlantedTerms("qcls", 6);
  spec.task_terms = PlantedTerms("qtsk", 4);
  const Corpus c = GenerateSyntheticCorpus(spec);
  const DivergenceReport r = ComputeRtd(BuildDistribution(c, ClassLabel::kA, {}),
                                        BuildDistribution(c, ClassLabel::kB, {}));
  const auto ladder = ThresholdLadder(ThresholdSpacing::kLinear);
  const auto report = LengthReport(PlanTrim(r, ladder), c, {});
  ASSERT_EQ(report.size(), 10u);
  EXPECT_EQ(report[0].level, 0.0);
  EXPECT_EQ(report[0].stats.mean, ComputeLengthStats(DocumentLengths(c, {})).mean);
  for (std::size_t i = 1; i < report.size(); ++i) {
    EXPECT_LE(report[i].stats.mean, report[i - 1].stats.mean);
    EXPECT_GE(report[i].removed_terms, report[i - 1].removed_terms);
  }
  std::ostringstream summary;
  WriteLengthSummaryCsv(report, summary);
  const std::string csv = summary.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
}

TEST(LengthTest, FileStems) {
  EXPECT_EQ(LevelFileStem(0.3), "trimmed_0.30");
  EXPECT_EQ(LevelFileStem(0.01), "trimmed_0.01");
  EXPECT_EQ(LevelFileStem(0.0178), "trimmed_0.0178");
}

}  // namespace
}  // namespace rtdbias
