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
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_set>
#include <utility>

#include "rtdbias/error.h"
#include "rtdbias/format.h"
#include "rtdbias/text.h"

namespace rtdbias {
namespace {

void ValidateThresholds(std::span<const double> thresholds) {
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double b = thresholds[i];
    if (!(b > 0.0 && b <= 1.0)) {
      ThrowInvalidArgument("trim thresholds must lie in (0, 1], got " +
                           fmt::Number(b));
    }
    if (i > 0 && !(b > thresholds[i - 1])) {
      ThrowInvalidArgument("trim thresholds must be strictly increasing");
    }
  }
}

double Percentile(const std::vector<std::size_t>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double position = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(position));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = position - static_cast<double>(lo);
  return static_cast<double>(sorted[lo]) * (1.0 - frac) +
         static_cast<double>(sorted[hi]) * frac;
}

}  // namespace

ThresholdSpacing ParseThresholdSpacing(std::string_view name) {
  if (name == "linear") return ThresholdSpacing::kLinear;
  if (name == "log" || name == "logarithmic") {
    return ThresholdSpacing::kLogarithmic;
  }
  ThrowInvalidArgument("unknown threshold spacing '" + std::string(name) + "'");
}

std::string_view ThresholdSpacingName(ThresholdSpacing spacing) {
  return spacing == ThresholdSpacing::kLinear ? "linear" : "logarithmic";
}

std::vector<double> ThresholdLadder(ThresholdSpacing spacing,
                                    std::size_t count) {
  if (count == 0) return {};
  std::vector<double> ladder(count);
  if (spacing == ThresholdSpacing::kLinear) {
    for (std::size_t i = 0; i < count; ++i) {
      // Rounded so that the deciles print as 0.1, 0.2, ... exactly.
      ladder[i] = std::round(static_cast<double>(i + 1) /
                             static_cast<double>(count + 1) * 1e12) / 1e12;
    }
    return ladder;
  }
  constexpr double kLow = 0.01;
  constexpr double kHigh = 0.9;
  if (count == 1) return {kHigh};
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    ladder[i] = kLow * std::pow(kHigh / kLow, t);
  }
  ladder.back() = kHigh;
  return ladder;
}

TrimPlan PlanTrim(const DivergenceReport& report,
                  std::span<const double> thresholds,
                  ThresholdSpacing spacing) {
  if (report.contributions.empty()) {
    ThrowInvalidArgument("cannot plan a trim from an empty divergence report");
  }
  ValidateThresholds(thresholds);
  TrimPlan plan;
  plan.spacing = spacing;
  plan.thresholds.assign(thresholds.begin(), thresholds.end());
  const std::vector<double>& share = report.cumulative_share;
  for (const double b : thresholds) {
    // Shares are nondecreasing, so the selection is a prefix.
    const auto end = std::upper_bound(share.begin(), share.end(), b);
    const auto count = static_cast<std::size_t>(end - share.begin());
    std::vector<std::string> terms;
    terms.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      terms.push_back(report.contributions[i].ngram);
    }
    plan.term_sets.push_back(std::move(terms));
  }
  return plan;
}

double ShareCovering(const DivergenceReport& report,
                     std::span<const std::string> terms) {
  const std::unordered_set<std::string_view> wanted(terms.begin(), terms.end());
  double covering = 0.0;
  std::size_t found = 0;
  for (std::size_t i = 0; i < report.contributions.size(); ++i) {
    if (wanted.contains(report.contributions[i].ngram)) {
      covering = std::max(covering, report.cumulative_share[i]);
      ++found;
    }
  }
  if (found != wanted.size()) {
    ThrowInvalidArgument("some terms do not occur in the divergence report");
  }
  return covering;
}

LengthStats ComputeLengthStats(std::span<const std::size_t> lengths) {
  LengthStats stats;
  stats.documents = lengths.size();
  if (lengths.empty()) {
    stats.deciles.assign(9, 0.0);
    return stats;
  }
  std::vector<std::size_t> sorted(lengths.begin(), lengths.end());
  std::sort(sorted.begin(), sorted.end());
  const double sum = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  stats.mean = sum / static_cast<double>(sorted.size());
  stats.median = Percentile(sorted, 0.5);
  for (int d = 1; d <= 9; ++d) stats.deciles.push_back(Percentile(sorted, d / 10.0));
  stats.min = sorted.front();
  stats.max = sorted.back();
  for (const std::size_t len : sorted) ++stats.histogram[len];
  return stats;
}

std::vector<std::size_t> DocumentLengths(const Corpus& corpus,
                                         const TokenizerConfig& cfg) {
  std::vector<std::size_t> lengths;
  lengths.reserve(corpus.size());
  for (const Document& doc : corpus.documents()) {
    lengths.push_back(
        text::FindTokens(doc.text, cfg.keep_internal_apostrophes).size());
  }
  return lengths;
}

std::string StripTerms(std::string_view input,
                       const std::vector<std::string>& sorted_terms,
                       bool keep_internal_apostrophes) {
  const std::vector<text::TokenSpan> spans =
      text::FindTokens(input, keep_internal_apostrophes);
  std::string out;
  std::size_t copied = 0;
  bool changed = false;
  for (const auto& span : spans) {
    if (!std::binary_search(sorted_terms.begin(), sorted_terms.end(),
                            span.lowered)) {
      continue;
    }
    if (!changed) out.reserve(input.size());
    out.append(input.substr(copied, span.begin - copied));
    out.push_back(' ');
    copied = span.end;
    changed = true;
  }
  if (!changed) return std::string(input);
  out.append(input.substr(copied));
  return text::CollapseWhitespace(out);
}

TrimmedCorpus ApplyTrim(const Corpus& corpus,
                        std::span<const std::string> terms,
                        const TokenizerConfig& cfg, double level) {
  if (cfg.n != 1) {
    ThrowInvalidArgument("trimming removes 1-grams only; tokenizer n must be 1");
  }
  std::vector<std::string> sorted(terms.begin(), terms.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  TrimmedCorpus trimmed;
  trimmed.level = level;
  trimmed.removed_terms = sorted.size();
  std::vector<Document> documents = corpus.documents();
  if (!sorted.empty()) {
    for (Document& doc : documents) {
      doc.text = StripTerms(doc.text, sorted, cfg.keep_internal_apostrophes);
    }
  }
  trimmed.corpus = corpus.WithDocuments(std::move(documents));
  const std::vector<std::size_t> lengths = DocumentLengths(trimmed.corpus, cfg);
  trimmed.length_stats = ComputeLengthStats(lengths);
  return trimmed;
}

std::vector<LevelLengths> LengthReport(const TrimPlan& plan,
                                       const Corpus& corpus,
                                       const TokenizerConfig& cfg) {
  std::vector<LevelLengths> levels;
  const std::vector<std::size_t> base = DocumentLengths(corpus, cfg);
  levels.push_back(LevelLengths{0.0, 0, ComputeLengthStats(base)});
  for (std::size_t i = 0; i < plan.thresholds.size(); ++i) {
    TrimmedCorpus trimmed =
        ApplyTrim(corpus, plan.term_sets[i], cfg, plan.thresholds[i]);
    levels.push_back(LevelLengths{plan.thresholds[i], trimmed.removed_terms,
                                  std::move(trimmed.length_stats)});
  }
  return levels;
}

void WriteLengthHistogramCsv(const LengthStats& stats, std::ostream& out) {
  out << "length,documents\n";
  for (const auto& [length, count] : stats.histogram) {
    out << length << ',' << count << '\n';
  }
}

void WriteLengthSummaryCsv(std::span<const LevelLengths> levels,
                           std::ostream& out) {
  out << "level,removed_terms,documents,mean,median,min,max,"
         "p10,p20,p30,p40,p50,p60,p70,p80,p90\n";
  for (const LevelLengths& l : levels) {
    out << fmt::Number(l.level) << ',' << l.removed_terms << ','
        << l.stats.documents << ',' << fmt::Number(l.stats.mean) << ','
        << fmt::Number(l.stats.median) << ',' << l.stats.min << ','
        << l.stats.max;
    for (const double d : l.stats.deciles) out << ',' << fmt::Number(d);
    out << '\n';
  }
}

std::string LevelFileStem(double level) {
  char buffer[48];
  const bool two_places = std::abs(std::round(level * 100.0) / 100.0 - level) < 1e-9;
  std::snprintf(buffer, sizeof(buffer), two_places ? "trimmed_%.2f" : "trimmed_%.4f",
                level);
  return buffer;
}

}  // namespace rtdbias
