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

#ifndef RTDBIAS_DIVERGENCE_H_
#define RTDBIAS_DIVERGENCE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rtdbias/ngrams.h"

namespace rtdbias {

struct DivergenceConfig {
  double alpha = 1.0 / 3.0;

  void Validate() const;
};

// Contribution of one element with ranks r1, r2:
//   (alpha+1)/alpha * |r1^-alpha - r2^-alpha|^(1/(alpha+1)).
double RankTurbulenceTerm(double rank1, double rank2, double alpha);

// Element-wise RankTurbulenceTerm over aligned rank vectors.
std::vector<double> RankTurbulenceTerms(std::span<const double> rank1,
                                        std::span<const double> rank2,
                                        double alpha);

// Corpus balance statistics, indexed by system (0 = first, 1 = second).
struct Balances {
  // Share of all n-gram tokens that fall in system s.
  std::array<double, 2> share_counts{0.0, 0.0};
  // Share of union types observed in system s.
  std::array<double, 2> share_types_seen{0.0, 0.0};
  // Share of system s's types that are absent from the other system.
  std::array<double, 2> share_exclusive{0.0, 0.0};
};

// Throws InvalidArgument when the orders differ or both are empty.
Balances ComputeBalances(const RankDistribution& d1,
                         const RankDistribution& d2);

struct Contribution {
  std::string ngram;
  double delta = 0.0;
  double rank1 = 0.0;
  double rank2 = 0.0;
  std::int64_t count1 = 0;
  std::int64_t count2 = 0;

  bool only_in_1() const { return count2 == 0; }
  bool only_in_2() const { return count1 == 0; }
};

struct DivergenceReport {
  double alpha = 1.0 / 3.0;
  double total = 0.0;
  // Descending delta; ties by descending combined count, then n-gram.
  std::vector<Contribution> contributions;
  // Running share of `total` along `contributions`; exactly 1 at the end
  // when total > 0, all zeros when total == 0.
  std::vector<double> cumulative_share;
  Balances balances;
};

// Rank-turbulence divergence between the two systems over their union, with
// absent types ranked per UnionWithExclusiveRanks. Throws InvalidArgument on
// mismatched orders or an empty distribution.
DivergenceReport ComputeRtd(const RankDistribution& d1,
                            const RankDistribution& d2,
                            const DivergenceConfig& cfg = {});

// TSV columns: ngram, delta, cumulative_share, rank_1, rank_2.
void WriteDivergenceTsv(const DivergenceReport& report, std::ostream& out);

struct AllotaxonographOptions {
  int bins = 20;
  std::size_t top_n = 50;
};

// Plot data for an allotaxonograph: log-binned rank-rank histogram over all
// union types, the top contributions with exclusivity markers, and the
// balance bars.
nlohmann::ordered_json ExportAllotaxonograph(
    const DivergenceReport& report, const RankDistribution& d1,
    const RankDistribution& d2, const AllotaxonographOptions& options = {});

}  // namespace rtdbias

#endif  // RTDBIAS_DIVERGENCE_H_
