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

#include "rtdbias/divergence.h"

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "rtdbias/error.h"
#include "testing/oracles.h"

namespace rtdbias {
namespace {

RankDistribution FromCounts(const testing::CountMap& counts) {
  return RankDistribution(1, {counts.begin(), counts.end()});
}

const testing::CountMap kFirst{{"apple", 3}, {"bee", 2}, {"cat", 1}};
const testing::CountMap kSecond{{"bee", 3}, {"apple", 2}, {"dog", 1}};

TEST(RtdTest, WorkedFourTypeExample) {
  const DivergenceReport r = ComputeRtd(FromCounts(kFirst), FromCounts(kSecond));
  // 2 * (4/3) * (1 - 2^(-1/3))^(3/4) + 2 * (4/3) * (3^(-1/3) - 4^(-1/3))^(3/4)
  EXPECT_NEAR(r.total, 3.45964749405184, 1e-12);
  ASSERT_EQ(r.contributions.size(), 4u);
  EXPECT_EQ(r.contributions[0].ngram, "apple");
  EXPECT_EQ(r.contributions[1].ngram, "bee");
  EXPECT_EQ(r.contributions[2].ngram, "cat");
  EXPECT_EQ(r.contributions[3].ngram, "dog");
  EXPECT_NEAR(r.contributions[0].delta, 1.2244289288043462, 1e-12);
  EXPECT_NEAR(r.contributions[2].delta, 0.5053948182215738, 1e-12);
  EXPECT_NEAR(r.cumulative_share[0], 0.354, 1e-3);
  EXPECT_NEAR(r.cumulative_share[1], 0.708, 1e-3);
  EXPECT_NEAR(r.cumulative_share[2], 0.854, 1e-3);
  EXPECT_EQ(r.cumulative_share[3], 1.0);
  EXPECT_TRUE(r.contributions[2].only_in_1());
  EXPECT_TRUE(r.contributions[3].only_in_2());
}

TEST(RtdTest, MatchesOracle) {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = testing::RandomCounts(rng, 50, 0.5, 8);
    const auto b = testing::RandomCounts(rng, 50, 0.5, 8);
    if (a.empty() || b.empty()) continue;
    const auto oracle = testing::DirectRtd(a, b, 1.0 / 3.0);
    const DivergenceReport r = ComputeRtd(FromCounts(a), FromCounts(b));
    EXPECT_NEAR(r.total, oracle.total, 1e-12);
    ASSERT_EQ(r.contributions.size(), oracle.delta.size());
    for (const Contribution& c : r.contributions) {
      EXPECT_NEAR(c.delta, oracle.delta.at(c.ngram), 1e-12);
    }
  }
}

TEST(RtdTest, IdenticalDistributionsGiveZero) {
  const DivergenceReport r = ComputeRtd(FromCounts(kFirst), FromCounts(kFirst));
  EXPECT_EQ(r.total, 0.0);
  for (const Contribution& c : r.contributions) EXPECT_EQ(c.delta, 0.0);
  for (double s : r.cumulative_share) EXPECT_EQ(s, 0.0);
}

TEST(RtdTest, SymmetricUnderSwap) {
  std::mt19937_64 rng(3);
  const auto a = testing::RandomCounts(rng, 40, 0.6, 5);
  const auto b = testing::RandomCounts(rng, 40, 0.6, 5);
  const DivergenceReport ab = ComputeRtd(FromCounts(a), FromCounts(b));
  const DivergenceReport ba = ComputeRtd(FromCounts(b), FromCounts(a));
  EXPECT_NEAR(ab.total, ba.total, 1e-12);
  std::map<std::string, double> forward;
  for (const auto& c : ab.contributions) forward[c.ngram] = c.delta;
  for (const auto& c : ba.contributions) EXPECT_EQ(forward.at(c.ngram), c.delta);
}

TEST(RtdTest, ReportInvariants) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = testing::RandomCounts(rng, 80, 0.5, 10);
    const auto b = testing::RandomCounts(rng, 80, 0.5, 10);
    if (a.empty() || b.empty()) continue;
    const DivergenceReport r = ComputeRtd(FromCounts(a), FromCounts(b));
    double sum = 0;
    for (std::size_t i = 0; i < r.contributions.size(); ++i) {
      EXPECT_GE(r.contributions[i].delta, 0.0);
      sum += r.contributions[i].delta;
      if (i > 0) {
        EXPECT_GE(r.contributions[i - 1].delta, r.contributions[i].delta);
        EXPECT_LE(r.cumulative_share[i - 1], r.cumulative_share[i]);
      }
    }
    EXPECT_NEAR(sum, r.total, 1e-9 * r.total);
    if (r.total > 0) EXPECT_EQ(r.cumulative_share.back(), 1.0);
    for (int s = 0; s < 2; ++s) {
      EXPECT_GE(r.balances.share_counts[s], 0.0);
      EXPECT_LE(r.balances.share_exclusive[s], 1.0);
    }
  }
}

TEST(RtdTest, AlphaContinuity) {
  std::mt19937_64 rng(13);
  const auto a = testing::RandomCounts(rng, 30, 0.7, 4);
  const auto b = testing::RandomCounts(rng, 30, 0.7, 4);
  const double lo = ComputeRtd(FromCounts(a), FromCounts(b), {1.0 / 3.0 - 1e-6}).total;
  const double hi = ComputeRtd(FromCounts(a), FromCounts(b), {1.0 / 3.0 + 1e-6}).total;
  EXPECT_LT(std::fabs(hi - lo) / lo, 1e-3);
}

TEST(RtdTest, Errors) {
  EXPECT_THROW(ComputeRtd(RankDistribution(), FromCounts(kFirst)), Error);
  EXPECT_THROW(ComputeRtd(FromCounts(kFirst), FromCounts(kSecond), {0.0}), Error);
  EXPECT_THROW(ComputeRtd(RankDistribution(1, {{"a", 1}}), RankDistribution(2, {{"a b", 1}})),
               Error);
}

TEST(RtdTest, TermFormula) {
  // Equal ranks contribute nothing; the term is symmetric in its ranks.
  EXPECT_EQ(RankTurbulenceTerm(3, 3, 0.5), 0.0);
  EXPECT_EQ(RankTurbulenceTerm(1, 4, 0.5), RankTurbulenceTerm(4, 1, 0.5));
  EXPECT_NEAR(RankTurbulenceTerm(1, 4, 1.0), 2 * std::sqrt(0.75), 1e-15);
}

TEST(BalancesTest, WorkedExample) {
  const Balances b = ComputeBalances(FromCounts(kFirst), FromCounts(kSecond));
  EXPECT_DOUBLE_EQ(b.share_types_seen[0], 0.75);
  EXPECT_DOUBLE_EQ(b.share_exclusive[0], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(b.share_counts[0], 0.5);
}

TEST(BalancesTest, CountShares) {
  const Balances b = ComputeBalances(FromCounts({{"a", 43}}), FromCounts({{"a", 57}}));
  EXPECT_DOUBLE_EQ(b.share_counts[0], 0.43);
  EXPECT_EQ(b.share_exclusive[0], 0.0);
  EXPECT_EQ(b.share_exclusive[1], 0.0);
}

TEST(AllotaxonographTest, HistogramConservesTypes) {
  const RankDistribution d1 = FromCounts(kFirst);
  const RankDistribution d2 = FromCounts(kSecond);
  const DivergenceReport r = ComputeRtd(d1, d2);
  const auto doc = ExportAllotaxonograph(r, d1, d2, {2, 10});
  std::int64_t cells = 0;
  for (const auto& row : doc["histogram"]["counts"]) {
    for (const auto& v : row) cells += v.get<std::int64_t>();
  }
  EXPECT_EQ(cells, 4);
  const auto& top = doc["top_contributions"];
  ASSERT_EQ(top.size(), 4u);
  for (std::size_t i = 1; i < top.size(); ++i) {
    EXPECT_GE(top[i - 1]["delta"].get<double>(), top[i]["delta"].get<double>());
  }
  EXPECT_EQ(top[2]["ngram"], "cat");
  EXPECT_EQ(top[2]["exclusive_to"], 1);
  EXPECT_TRUE(top[0]["exclusive_to"].is_null());
  EXPECT_TRUE(doc.contains("balances"));
  EXPECT_THROW(ExportAllotaxonograph(r, d1, d2, {0, 10}), Error);
}

TEST(DivergenceTsvTest, Columns) {
  std::ostringstream out;
  WriteDivergenceTsv(ComputeRtd(FromCounts(kFirst), FromCounts(kSecond)), out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "ngram\tdelta\tcumulative_share\trank_1\trank_2");
}

}  // namespace
}  // namespace rtdbias
