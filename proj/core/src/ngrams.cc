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

#include "rtdbias/ngrams.h"

#include <algorithm>
#include <utility>

#include "rtdbias/error.h"
#include "rtdbias/format.h"
#include "rtdbias/ranking.h"
#include "rtdbias/text.h"

namespace rtdbias {

void TokenizerConfig::Validate() const {
  if (n < 1 || n > 3) {
    ThrowInvalidArgument("n-gram order must be 1, 2 or 3, got " +
                         std::to_string(n));
  }
}

std::vector<std::string> Tokenize(std::string_view text,
                                  const TokenizerConfig& cfg) {
  cfg.Validate();
  std::vector<text::TokenSpan> spans =
      text::FindTokens(text, cfg.keep_internal_apostrophes);
  std::vector<std::string> out;
  if (cfg.n == 1) {
    out.reserve(spans.size());
    for (auto& span : spans) out.push_back(std::move(span.lowered));
    return out;
  }
  const auto n = static_cast<std::size_t>(cfg.n);
  if (spans.size() < n) return out;
  out.reserve(spans.size() - n + 1);
  for (std::size_t i = 0; i + n <= spans.size(); ++i) {
    std::string gram = spans[i].lowered;
    for (std::size_t j = 1; j < n; ++j) {
      gram.push_back(' ');
      gram += spans[i + j].lowered;
    }
    out.push_back(std::move(gram));
  }
  return out;
}

NgramCounter::NgramCounter(TokenizerConfig cfg) : cfg_(cfg) { cfg_.Validate(); }

void NgramCounter::Add(std::string_view text) {
  for (std::string& gram : Tokenize(text, cfg_)) ++counts_[std::move(gram)];
}

void NgramCounter::Merge(const NgramCounter& other) {
  if (other.cfg_.n != cfg_.n) {
    ThrowInvalidArgument("cannot merge counters of different n-gram order");
  }
  for (const auto& [gram, count] : other.counts_) counts_[gram] += count;
}

RankDistribution::RankDistribution(
    int n, std::unordered_map<std::string, std::int64_t> counts)
    : n_(n) {
  entries_.reserve(counts.size());
  for (auto& [gram, count] : counts) {
    if (count <= 0) {
      ThrowInvalidArgument("n-gram '" + gram + "' has non-positive count");
    }
    total_count_ += count;
    entries_.push_back(Entry{gram, count, 0.0});
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.ngram < b.ngram;
            });
  std::vector<double> values;
  values.reserve(entries_.size());
  for (const Entry& e : entries_) values.push_back(static_cast<double>(e.count));
  const std::vector<double> ranks = FractionalRanksDescending(values);
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    entries_[i].rank = ranks[i];
    index_.emplace(entries_[i].ngram, i);
  }
}

std::optional<std::size_t> RankDistribution::find(std::string_view ngram) const {
  const auto it = index_.find(std::string(ngram));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool RankDistribution::contains(std::string_view ngram) const {
  return find(ngram).has_value();
}

std::int64_t RankDistribution::count(std::string_view ngram) const {
  const auto i = find(ngram);
  return i ? entries_[*i].count : 0;
}

std::optional<double> RankDistribution::rank(std::string_view ngram) const {
  const auto i = find(ngram);
  if (!i) return std::nullopt;
  return entries_[*i].rank;
}

RankDistribution BuildDistribution(const NgramCounter& counter) {
  return RankDistribution(counter.config().n, counter.counts());
}

RankDistribution BuildDistribution(const Corpus& corpus, ClassLabel label,
                                   const TokenizerConfig& cfg) {
  if (corpus.class_count(label) == 0) {
    ThrowFailedPrecondition("corpus has no documents of class '" +
                            corpus.class_name(label) + "'");
  }
  NgramCounter counter(cfg);
  for (const Document& doc : corpus.documents()) {
    if (doc.class_label == label) counter.Add(doc.text);
  }
  return BuildDistribution(counter);
}

UnionRanks UnionWithExclusiveRanks(const RankDistribution& d1,
                                   const RankDistribution& d2) {
  if (d1.n() != d2.n()) {
    ThrowInvalidArgument("rank distributions have different n-gram orders (" +
                         std::to_string(d1.n()) + " vs " +
                         std::to_string(d2.n()) + ")");
  }
  UnionRanks u;
  const std::size_t capacity = d1.distinct_count() + d2.distinct_count();
  u.types.reserve(capacity);
  for (const auto& e : d1.entries()) {
    u.types.push_back(e.ngram);
    u.rank1.push_back(e.rank);
    u.count1.push_back(e.count);
    if (const auto j = d2.find(e.ngram)) {
      u.rank2.push_back(d2.entries()[*j].rank);
      u.count2.push_back(d2.entries()[*j].count);
    } else {
      u.rank2.push_back(0.0);  // filled below
      u.count2.push_back(0);
      ++u.absent_from_2;
    }
  }
  for (const auto& e : d2.entries()) {
    if (d1.contains(e.ngram)) continue;
    u.types.push_back(e.ngram);
    u.rank1.push_back(0.0);
    u.count1.push_back(0);
    u.rank2.push_back(e.rank);
    u.count2.push_back(e.count);
    ++u.absent_from_1;
  }
  const double absent_rank1 =
      static_cast<double>(d1.distinct_count()) +
      0.5 * (static_cast<double>(u.absent_from_1) + 1.0);
  const double absent_rank2 =
      static_cast<double>(d2.distinct_count()) +
      0.5 * (static_cast<double>(u.absent_from_2) + 1.0);
  for (std::size_t i = 0; i < u.types.size(); ++i) {
    if (u.count1[i] == 0) u.rank1[i] = absent_rank1;
    if (u.count2[i] == 0) u.rank2[i] = absent_rank2;
  }
  return u;
}

void WriteRankTsv(const RankDistribution& dist, std::ostream& out) {
  out << "ngram\tcount\trank\n";
  for (const auto& e : dist.entries()) {
    out << e.ngram << '\t' << e.count << '\t' << fmt::Number(e.rank) << '\n';
  }
}

}  // namespace rtdbias
