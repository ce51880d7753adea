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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rtdbias/error.h"
#include "rtdbias/format.h"

namespace rtdbias {

void DivergenceConfig::Validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    ThrowInvalidArgument("alpha must be a positive finite number");
  }
}

double RankTurbulenceTerm(double rank1, double rank2, double alpha) {
  const double gap = std::abs(std::pow(rank1, -alpha) - std::pow(rank2, -alpha));
  return (alpha + 1.0) / alpha * std::pow(gap, 1.0 / (alpha + 1.0));
}

std::vector<double> RankTurbulenceTerms(std::span<const double> rank1,
                                        std::span<const double> rank2,
                                        double alpha) {
  if (rank1.size() != rank2.size()) {
    ThrowInvalidArgument("rank vectors differ in length");
  }
  std::vector<double> out(rank1.size());
  for (std::size_t i = 0; i < rank1.size(); ++i) {
    out[i] = RankTurbulenceTerm(rank1[i], rank2[i], alpha);
  }
  return out;
}

Balances ComputeBalances(const RankDistribution& d1,
                         const RankDistribution& d2) {
  if (d1.n() != d2.n()) {
    ThrowInvalidArgument("rank distributions have different n-gram orders");
  }
  if (d1.empty() && d2.empty()) {
    ThrowInvalidArgument("both distributions are empty");
  }
  std::size_t shared = 0;
  for (const auto& e : d1.entries()) {
    if (d2.contains(e.ngram)) ++shared;
  }
  const double distinct[2] = {static_cast<double>(d1.distinct_count()),
                              static_cast<double>(d2.distinct_count())};
  const double union_size = distinct[0] + distinct[1] - static_cast<double>(shared);
  const double totals[2] = {static_cast<double>(d1.total_count()),
                            static_cast<double>(d2.total_count())};
  Balances b;
  for (int s = 0; s < 2; ++s) {
    b.share_counts[s] = totals[s] / (totals[0] + totals[1]);
    b.share_types_seen[s] = distinct[s] / union_size;
    b.share_exclusive[s] =
        distinct[s] > 0 ? (distinct[s] - static_cast<double>(shared)) / distinct[s]
                        : 0.0;
  }
  return b;
}

DivergenceReport ComputeRtd(const RankDistribution& d1,
                            const RankDistribution& d2,
                            const DivergenceConfig& cfg) {
  cfg.Validate();
  if (d1.empty() || d2.empty()) {
    ThrowInvalidArgument("rank-turbulence divergence needs two non-empty "
                         "distributions");
  }
  const UnionRanks u = UnionWithExclusiveRanks(d1, d2);
  const std::vector<double> deltas =
      RankTurbulenceTerms(u.rank1, u.rank2, cfg.alpha);

  DivergenceReport report;
  report.alpha = cfg.alpha;
  report.balances = ComputeBalances(d1, d2);
  report.contributions.reserve(u.types.size());
  for (std::size_t i = 0; i < u.types.size(); ++i) {
    report.contributions.push_back(Contribution{
        u.types[i], deltas[i], u.rank1[i], u.rank2[i], u.count1[i], u.count2[i]});
  }
  std::sort(report.contributions.begin(), report.contributions.end(),
            [](const Contribution& a, const Contribution& b) {
              if (a.delta != b.delta) return a.delta > b.delta;
              const std::int64_t ca = a.count1 + a.count2;
              const std::int64_t cb = b.count1 + b.count2;
              if (ca != cb) return ca > cb;
              return a.ngram < b.ngram;
            });

  // Summing in sorted order keeps the running share bounded by the total.
  double running = 0.0;
  std::vector<double> partial;
  partial.reserve(report.contributions.size());
  for (const Contribution& c : report.contributions) {
    running += c.delta;
    partial.push_back(running);
  }
  report.total = running;
  report.cumulative_share.resize(partial.size(), 0.0);
  if (report.total > 0.0) {
    for (std::size_t i = 0; i < partial.size(); ++i) {
      report.cumulative_share[i] = std::min(1.0, partial[i] / report.total);
    }
    report.cumulative_share.back() = 1.0;
  }
  return report;
}

void WriteDivergenceTsv(const DivergenceReport& report, std::ostream& out) {
  out << "ngram\tdelta\tcumulative_share\trank_1\trank_2\n";
  for (std::size_t i = 0; i < report.contributions.size(); ++i) {
    const Contribution& c = report.contributions[i];
    out << c.ngram << '\t' << fmt::Number(c.delta) << '\t'
        << fmt::Number(report.cumulative_share[i]) << '\t'
        << fmt::Number(c.rank1) << '\t' << fmt::Number(c.rank2) << '\n';
  }
}

nlohmann::ordered_json ExportAllotaxonograph(
    const DivergenceReport& report, const RankDistribution& d1,
    const RankDistribution& d2, const AllotaxonographOptions& options) {
  if (options.bins < 1) ThrowInvalidArgument("bins must be >= 1");
  const auto bins = static_cast<std::size_t>(options.bins);

  double max_rank = 1.0;
  for (const Contribution& c : report.contributions) {
    max_rank = std::max({max_rank, c.rank1, c.rank2});
  }
  const double log_max = std::log10(max_rank);
  // Bin b covers ranks [10^(b*w), 10^((b+1)*w)); the last bin is closed.
  auto bin_of = [&](double rank) -> std::size_t {
    if (log_max <= 0.0) return 0;
    const double position = std::log10(rank) / log_max * static_cast<double>(bins);
    return std::min(bins - 1, static_cast<std::size_t>(std::max(0.0, position)));
  };
  std::vector<std::vector<std::int64_t>> counts(bins,
                                                std::vector<std::int64_t>(bins, 0));
  for (const Contribution& c : report.contributions) {
    ++counts[bin_of(c.rank1)][bin_of(c.rank2)];
  }
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (std::size_t b = 0; b <= bins; ++b) {
    edges.push_back(std::pow(10.0, log_max * static_cast<double>(b) /
                                       static_cast<double>(bins)));
  }

  nlohmann::ordered_json top = nlohmann::ordered_json::array();
  const std::size_t limit = std::min(options.top_n, report.contributions.size());
  for (std::size_t i = 0; i < limit; ++i) {
    const Contribution& c = report.contributions[i];
    nlohmann::ordered_json row;
    row["ngram"] = c.ngram;
    row["delta"] = c.delta;
    row["share_of_total"] = report.total > 0.0 ? c.delta / report.total : 0.0;
    row["rank_1"] = c.rank1;
    row["rank_2"] = c.rank2;
    row["count_1"] = c.count1;
    row["count_2"] = c.count2;
    // Which system the term leans towards: the one where it ranks higher.
    row["leans_to"] = c.rank1 < c.rank2 ? 1 : (c.rank2 < c.rank1 ? 2 : 0);
    row["exclusive_to"] = c.only_in_1() ? nlohmann::ordered_json(1)
                          : c.only_in_2() ? nlohmann::ordered_json(2)
                                          : nlohmann::ordered_json(nullptr);
    top.push_back(std::move(row));
  }

  const Balances& b = report.balances;
  nlohmann::ordered_json doc;
  doc["alpha"] = report.alpha;
  doc["total"] = report.total;
  doc["n"] = d1.n();
  doc["distinct"] = {d1.distinct_count(), d2.distinct_count()};
  doc["total_counts"] = {d1.total_count(), d2.total_count()};
  doc["histogram"] = {{"bins", bins},
                      {"max_rank", max_rank},
                      {"rank_edges", edges},
                      {"counts", counts}};
  doc["top_contributions"] = std::move(top);
  doc["balances"] = {
      {"share_counts", {b.share_counts[0], b.share_counts[1]}},
      {"share_types_seen", {b.share_types_seen[0], b.share_types_seen[1]}},
      {"share_exclusive", {b.share_exclusive[0], b.share_exclusive[1]}}};
  return doc;
}

}  // namespace rtdbias
