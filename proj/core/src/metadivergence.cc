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

#include "rtdbias/metadivergence.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "rtdbias/error.h"
#include "rtdbias/format.h"
#include "rtdbias/ranking.h"

namespace rtdbias {
namespace {

// Orders (term, delta) pairs by descending delta, then term, and attaches
// fractional ranks.
BiasRankList RankByDelta(BiasSource source, std::vector<std::string> terms,
                         std::vector<double> deltas,
                         const std::vector<std::size_t>& tie_order) {
  std::vector<std::size_t> order(terms.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (deltas[a] != deltas[b]) return deltas[a] > deltas[b];
    return tie_order[a] < tie_order[b];
  });
  BiasRankList list;
  list.source = source;
  list.terms.reserve(terms.size());
  list.deltas.reserve(terms.size());
  for (const std::size_t i : order) {
    list.terms.push_back(std::move(terms[i]));
    list.deltas.push_back(deltas[i]);
  }
  list.ranks = FractionalRanksDescending(list.deltas);
  return list;
}

}  // namespace

std::optional<std::size_t> BiasRankList::find(std::string_view term) const {
  const auto it = std::find(terms.begin(), terms.end(), term);
  if (it == terms.end()) return std::nullopt;
  return static_cast<std::size_t>(it - terms.begin());
}

BiasRankList EmbeddingBiasRanks(const BiasScores& scores,
                                const DivergenceConfig& cfg) {
  cfg.Validate();
  if (scores.terms.empty()) ThrowInvalidArgument("no bias scores to rank");
  std::vector<std::string> terms;
  std::vector<double> deltas;
  terms.reserve(scores.terms.size());
  deltas.reserve(scores.terms.size());
  for (const TermBias& t : scores.terms) {
    terms.push_back(t.term);
    deltas.push_back(RankTurbulenceTerm(t.rank_a, t.rank_b, cfg.alpha));
  }
  // Ties fall back to the term itself.
  std::vector<std::size_t> tie(terms.size());
  std::iota(tie.begin(), tie.end(), std::size_t{0});
  std::sort(tie.begin(), tie.end(),
            [&](std::size_t a, std::size_t b) { return terms[a] < terms[b]; });
  std::vector<std::size_t> position(terms.size());
  for (std::size_t i = 0; i < tie.size(); ++i) position[tie[i]] = i;
  return RankByDelta(BiasSource::kEmbedding, std::move(terms), std::move(deltas),
                     position);
}

BiasRankList EmpiricalBiasRanks(const DivergenceReport& report) {
  if (report.contributions.empty()) {
    ThrowInvalidArgument("empty divergence report");
  }
  // Contributions are already in the report's deterministic order.
  BiasRankList list;
  list.source = BiasSource::kEmpirical;
  std::vector<double> class_a, class_b;
  for (const Contribution& c : report.contributions) {
    list.terms.push_back(c.ngram);
    list.deltas.push_back(c.delta);
    class_a.push_back(c.rank1);
    class_b.push_back(c.rank2);
  }
  list.ranks = FractionalRanksDescending(list.deltas);
  list.class_rank_a = std::move(class_a);
  list.class_rank_b = std::move(class_b);
  return list;
}

MetaReport RtdSquared(const BiasRankList& first, const BiasRankList& second,
                      const DivergenceConfig& cfg) {
  cfg.Validate();
  std::unordered_map<std::string_view, std::size_t> second_index;
  second_index.reserve(second.terms.size());
  for (std::size_t i = 0; i < second.terms.size(); ++i) {
    second_index.emplace(second.terms[i], i);
  }
  const BiasRankList* class_source =
      first.class_rank_a ? &first : (second.class_rank_a ? &second : nullptr);

  MetaReport report;
  report.alpha = cfg.alpha;
  std::size_t shared = 0;
  for (std::size_t i = 0; i < first.terms.size(); ++i) {
    const auto it = second_index.find(first.terms[i]);
    if (it == second_index.end()) {
      ++report.only_in_first;
      continue;
    }
    ++shared;
    const std::size_t j = it->second;
    MetaRow row;
    row.term = first.terms[i];
    const double r_first = first.ranks[i];
    const double r_second = second.ranks[j];
    row.delta = RankTurbulenceTerm(r_first, r_second, cfg.alpha);
    const bool first_is_embedding = first.source == BiasSource::kEmbedding;
    row.embedding_rtd_rank = first_is_embedding ? r_first : r_second;
    row.empirical_rtd_rank = first_is_embedding ? r_second : r_first;
    row.class_rank_a = std::nan("");
    row.class_rank_b = std::nan("");
    if (class_source != nullptr) {
      const std::size_t k = class_source == &first ? i : j;
      row.class_rank_a = (*class_source->class_rank_a)[k];
      row.class_rank_b = (*class_source->class_rank_b)[k];
    }
    report.rows.push_back(std::move(row));
  }
  report.only_in_second = second.terms.size() - shared;
  if (report.rows.empty()) {
    ThrowFailedPrecondition("the two bias rankings share no terms");
  }
  std::sort(report.rows.begin(), report.rows.end(),
            [](const MetaRow& a, const MetaRow& b) {
              if (a.delta != b.delta) return a.delta > b.delta;
              return a.term < b.term;
            });
  std::vector<double> deltas;
  deltas.reserve(report.rows.size());
  for (const MetaRow& row : report.rows) {
    deltas.push_back(row.delta);
    report.total += row.delta;
  }
  const std::vector<double> ranks = FractionalRanksDescending(deltas);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    report.rows[i].rtd2_rank = ranks[i];
  }
  return report;
}

void WriteMetaTsv(const MetaReport& report, std::ostream& out) {
  out << "term\tembedding_rtd_rank\tempirical_rtd_rank\trtd2_rank\t"
         "class_a_rank\tclass_b_rank\tdelta\n";
  for (const MetaRow& row : report.rows) {
    out << row.term << '\t' << fmt::Number(row.embedding_rtd_rank) << '\t'
        << fmt::Number(row.empirical_rtd_rank) << '\t'
        << fmt::Number(row.rtd2_rank) << '\t' << fmt::Number(row.class_rank_a)
        << '\t' << fmt::Number(row.class_rank_b) << '\t'
        << fmt::Number(row.delta) << '\n';
  }
}

}  // namespace rtdbias
