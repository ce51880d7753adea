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

#ifndef RTDBIAS_METADIVERGENCE_H_
#define RTDBIAS_METADIVERGENCE_H_

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rtdbias/divergence.h"
#include "rtdbias/embedbias.h"

namespace rtdbias {

enum class BiasSource { kEmbedding, kEmpirical };

// Terms ranked by how strongly they separate the two classes under one
// measure: rank 1 is the most biased term; exactly tied contributions share
// their mean rank.
struct BiasRankList {
  BiasSource source = BiasSource::kEmpirical;
  // Term order follows descending contribution.
  std::vector<std::string> terms;
  std::vector<double> deltas;
  std::vector<double> ranks;
  // Per-class empirical frequency ranks, when the list came from corpus
  // counts.
  std::optional<std::vector<double>> class_rank_a;
  std::optional<std::vector<double>> class_rank_b;

  std::optional<std::size_t> find(std::string_view term) const;
};

// Applies the rank-turbulence term to each scored term's (rank_a, rank_b)
// similarity ranks and ranks terms by the result, largest first. Throws
// InvalidArgument on empty scores.
BiasRankList EmbeddingBiasRanks(const BiasScores& scores,
                                const DivergenceConfig& cfg = {});

// Ranks the report's per-type contributions. Throws InvalidArgument on an
// empty report.
BiasRankList EmpiricalBiasRanks(const DivergenceReport& report);

struct MetaRow {
  std::string term;
  double embedding_rtd_rank = 0.0;
  double empirical_rtd_rank = 0.0;
  double delta = 0.0;
  double rtd2_rank = 0.0;
  // Empirical frequency rank in each class; NaN when unavailable.
  double class_rank_a = 0.0;
  double class_rank_b = 0.0;
};

struct MetaReport {
  double alpha = 1.0 / 3.0;
  double total = 0.0;
  // Descending delta (ties by term).
  std::vector<MetaRow> rows;
  std::size_t only_in_first = 0;
  std::size_t only_in_second = 0;
};

// Rank-turbulence divergence between two bias rankings, restricted to the
// terms they share. Each list keeps the ranks it was given over its own full
// domain; terms outside the intersection are dropped (and counted) without
// re-ranking the rest. Either list may be the embedding one; the MetaRow
// columns are filled by source. Throws FailedPrecondition on an empty
// intersection.
MetaReport RtdSquared(const BiasRankList& first, const BiasRankList& second,
                      const DivergenceConfig& cfg = {});

// Columns: term, embedding_rtd_rank, empirical_rtd_rank, rtd2_rank,
// class_a_rank, class_b_rank, delta.
void WriteMetaTsv(const MetaReport& report, std::ostream& out);

}  // namespace rtdbias

#endif  // RTDBIAS_METADIVERGENCE_H_
