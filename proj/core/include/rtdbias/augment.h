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

#ifndef RTDBIAS_AUGMENT_H_
#define RTDBIAS_AUGMENT_H_

#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rtdbias/corpus.h"
#include "rtdbias/divergence.h"
#include "rtdbias/ngrams.h"

namespace rtdbias {

enum class ThresholdSpacing { kLinear, kLogarithmic };

ThresholdSpacing ParseThresholdSpacing(std::string_view name);
std::string_view ThresholdSpacingName(ThresholdSpacing spacing);

// Linear: 0.1, 0.2, ..., 0.9 (count = 9), i.e. i/(count+1).
// Logarithmic: `count` values geometrically spaced from 0.01 to 0.9.
std::vector<double> ThresholdLadder(ThresholdSpacing spacing,
                                    std::size_t count = 9);

// Nested removal sets, one per threshold. term_sets[i] holds every n-gram
// whose cumulative divergence share is <= thresholds[i], in contribution
// order.
struct TrimPlan {
  std::vector<double> thresholds;
  std::vector<std::vector<std::string>> term_sets;
  ThresholdSpacing spacing = ThresholdSpacing::kLinear;
};

// Throws InvalidArgument unless thresholds lie in (0, 1] and strictly
// increase, or when the report is empty.
TrimPlan PlanTrim(const DivergenceReport& report,
                  std::span<const double> thresholds,
                  ThresholdSpacing spacing = ThresholdSpacing::kLinear);

// Smallest cumulative share whose term set contains every one of `terms`.
// Throws InvalidArgument if any term is missing from the report.
double ShareCovering(const DivergenceReport& report,
                     std::span<const std::string> terms);

struct LengthStats {
  std::size_t documents = 0;
  double mean = 0.0;
  double median = 0.0;
  // 10th, 20th, ..., 90th percentiles (linear interpolation).
  std::vector<double> deciles;
  std::size_t min = 0;
  std::size_t max = 0;
  // Token count -> number of documents with exactly that length.
  std::map<std::size_t, std::size_t> histogram;
};

LengthStats ComputeLengthStats(std::span<const std::size_t> lengths);

// Token counts (unigrams, tokenizer-aligned) per document.
std::vector<std::size_t> DocumentLengths(const Corpus& corpus,
                                         const TokenizerConfig& cfg);

struct TrimmedCorpus {
  double level = 0.0;
  Corpus corpus;
  std::size_t removed_terms = 0;
  LengthStats length_stats;
};

// Replaces every whole-token occurrence of the given 1-grams with a space
// and collapses whitespace in documents that changed. Labels are untouched.
// Throws InvalidArgument if cfg.n != 1.
TrimmedCorpus ApplyTrim(const Corpus& corpus,
                        std::span<const std::string> terms,
                        const TokenizerConfig& cfg, double level = 0.0);

// Strips one document's text; exposed for the trimming-order properties.
std::string StripTerms(std::string_view text,
                       const std::vector<std::string>& sorted_terms,
                       bool keep_internal_apostrophes);

struct LevelLengths {
  double level = 0.0;
  std::size_t removed_terms = 0;
  LengthStats stats;
};

// Level 0 (the untouched corpus) followed by one entry per plan threshold.
std::vector<LevelLengths> LengthReport(const TrimPlan& plan,
                                       const Corpus& corpus,
                                       const TokenizerConfig& cfg);

// "length,documents" rows for one level.
void WriteLengthHistogramCsv(const LengthStats& stats, std::ostream& out);

// One row per level: level, removed_terms, documents, mean, median, min,
// max, p10..p90.
void WriteLengthSummaryCsv(std::span<const LevelLengths> levels,
                           std::ostream& out);

// "trimmed_0.30" style stem for a level.
std::string LevelFileStem(double level);

}  // namespace rtdbias

#endif  // RTDBIAS_AUGMENT_H_
