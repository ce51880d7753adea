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

#ifndef RTDBIAS_NGRAMS_H_
#define RTDBIAS_NGRAMS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rtdbias/corpus.h"

namespace rtdbias {

struct TokenizerConfig {
  int n = 1;  // 1, 2 or 3
  bool keep_internal_apostrophes = false;

  void Validate() const;
};

// Lowercased letter-run tokens of `text` joined into n-grams (consecutive
// windows of n tokens separated by single spaces).
std::vector<std::string> Tokenize(std::string_view text,
                                  const TokenizerConfig& cfg);

// Accumulates n-gram counts. Merging is associative and commutative, so
// counting can be sharded over documents.
class NgramCounter {
 public:
  explicit NgramCounter(TokenizerConfig cfg);

  void Add(std::string_view text);
  void Merge(const NgramCounter& other);

  const TokenizerConfig& config() const { return cfg_; }
  const std::unordered_map<std::string, std::int64_t>& counts() const {
    return counts_;
  }

 private:
  TokenizerConfig cfg_;
  std::unordered_map<std::string, std::int64_t> counts_;
};

// Counts of every n-gram in one system with fractional tie ranks: the most
// frequent n-gram has rank 1 and tied counts share the mean of the rank
// positions they span.
class RankDistribution {
 public:
  struct Entry {
    std::string ngram;
    std::int64_t count = 0;
    double rank = 0.0;
  };

  RankDistribution() = default;
  // Counts must be positive.
  RankDistribution(int n, std::unordered_map<std::string, std::int64_t> counts);

  int n() const { return n_; }
  // Sorted by rank ascending, ties by n-gram.
  const std::vector<Entry>& entries() const { return entries_; }
  std::int64_t total_count() const { return total_count_; }
  std::size_t distinct_count() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  bool contains(std::string_view ngram) const;
  // 0 when absent.
  std::int64_t count(std::string_view ngram) const;
  std::optional<double> rank(std::string_view ngram) const;
  // Index into entries(), if present.
  std::optional<std::size_t> find(std::string_view ngram) const;

 private:
  int n_ = 1;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::int64_t total_count_ = 0;
};

RankDistribution BuildDistribution(const NgramCounter& counter);

// Distribution over all documents of `label`. Throws FailedPrecondition when
// the corpus has no document of that class.
RankDistribution BuildDistribution(const Corpus& corpus, ClassLabel label,
                                   const TokenizerConfig& cfg);

// Ranks of every type in the union of two systems. Types absent from system
// s all share the tied rank distinct_count(s) + (A_s + 1) / 2, where A_s is
// the number of union types missing from s; that is, they occupy the rank
// positions after the last observed type.
struct UnionRanks {
  // First the types of system 1 in rank order, then types only in system 2
  // in their system-2 rank order.
  std::vector<std::string> types;
  std::vector<double> rank1;
  std::vector<double> rank2;
  std::vector<std::int64_t> count1;  // 0 when absent from system 1
  std::vector<std::int64_t> count2;
  std::size_t absent_from_1 = 0;
  std::size_t absent_from_2 = 0;
};

UnionRanks UnionWithExclusiveRanks(const RankDistribution& d1,
                                   const RankDistribution& d2);

// TSV with header "ngram\tcount\trank", sorted by rank ascending.
void WriteRankTsv(const RankDistribution& dist, std::ostream& out);

}  // namespace rtdbias

#endif  // RTDBIAS_NGRAMS_H_
