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

#include "rtdbias/embedbias.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "rtdbias/error.h"
#include "rtdbias/format.h"
#include "rtdbias/ranking.h"

namespace rtdbias {
namespace {

std::vector<std::string_view> SplitWhitespace(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) {
      ++pos;
    }
    const std::size_t start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) {
      ++pos;
    }
    if (pos > start) fields.push_back(line.substr(start, pos - start));
  }
  return fields;
}

bool ParseDouble(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto result = std::from_chars(s.data(), s.data() + s.size(), out);
  return result.ec == std::errc() && result.ptr == s.data() + s.size();
}

bool IsUnsignedInteger(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return c >= '0' && c <= '9';
  });
}

}  // namespace

VectorTable::VectorTable(std::size_t dim) : dim_(dim) {
  if (dim == 0) ThrowInvalidArgument("vector dimension must be positive");
}

void VectorTable::Set(const std::string& term, std::vector<double> vector) {
  if (vector.size() != dim_) {
    ThrowInvalidArgument("vector for '" + term + "' has dimension " +
                         std::to_string(vector.size()) + ", expected " +
                         std::to_string(dim_));
  }
  for (const double v : vector) {
    if (!std::isfinite(v)) {
      ThrowInvalidArgument("vector for '" + term + "' has a non-finite component");
    }
  }
  auto [it, inserted] = vectors_.insert_or_assign(term, std::move(vector));
  if (inserted) terms_.push_back(term);
}

const std::vector<double>* VectorTable::Find(std::string_view term) const {
  const auto it = vectors_.find(std::string(term));
  return it == vectors_.end() ? nullptr : &it->second;
}

VectorTable LoadVectors(std::istream& in,
                        std::optional<std::size_t> expected_dim) {
  std::optional<VectorTable> table;
  std::size_t duplicates = 0;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::vector<std::string_view> fields = SplitWhitespace(line);
    if (fields.empty()) continue;
    if (!seen_content) {
      seen_content = true;
      if (fields.size() == 2 && IsUnsignedInteger(fields[0]) &&
          IsUnsignedInteger(fields[1])) {
        continue;  // word2vec header
      }
    }
    const std::size_t dim = fields.size() - 1;
    if (dim == 0) throw ParseError(line_no, std::string(fields[0]), "no components");
    if (!table) {
      if (expected_dim && *expected_dim != dim) {
        throw ParseError(line_no, std::string(fields[0]),
                         "dimension " + std::to_string(dim) + ", expected " +
                             std::to_string(*expected_dim));
      }
      table.emplace(dim);
    } else if (dim != table->dim()) {
      throw ParseError(line_no, std::string(fields[0]),
                       "dimension " + std::to_string(dim) +
                           " differs from earlier lines (" +
                           std::to_string(table->dim()) + ")");
    }
    std::vector<double> vector(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      if (!ParseDouble(fields[i + 1], vector[i]) || !std::isfinite(vector[i])) {
        throw ParseError(line_no, std::string(fields[0]),
                         "component " + std::to_string(i + 1) +
                             " is not a finite number: '" +
                             std::string(fields[i + 1]) + "'");
      }
    }
    const std::string term(fields[0]);
    if (table->Find(term) != nullptr) ++duplicates;
    table->Set(term, std::move(vector));
  }
  if (!table) {
    throw ParseError(line_no, "", "no vectors found; dimension undeterminable");
  }
  table->set_duplicate_count(duplicates);
  return std::move(*table);
}

VectorTable LoadVectors(const std::filesystem::path& path,
                        std::optional<std::size_t> expected_dim) {
  std::ifstream in(path);
  if (!in) ThrowIoError("cannot open '" + path.string() + "'");
  return LoadVectors(in, expected_dim);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double Norm(std::span<const double> v) { return std::sqrt(Dot(v, v)); }

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) ThrowInvalidArgument("vector dimensions differ");
  const double na = Norm(a);
  const double nb = Norm(b);
  if (na == 0.0 || nb == 0.0) return std::nan("");
  return std::clamp(Dot(a, b) / (na * nb), -1.0, 1.0);
}

Centroid ComputeCentroid(const VectorTable& table,
                         std::span<const std::string> terms) {
  Centroid c;
  c.vector.assign(table.dim(), 0.0);
  for (const std::string& term : terms) {
    const std::vector<double>* v = table.Find(term);
    if (v == nullptr) {
      ++c.missing;
      continue;
    }
    for (std::size_t i = 0; i < v->size(); ++i) c.vector[i] += (*v)[i];
    ++c.used;
  }
  if (c.used == 0) {
    ThrowFailedPrecondition("none of the centroid terms has a vector");
  }
  for (double& x : c.vector) x /= static_cast<double>(c.used);
  return c;
}

void ClusterSpec::Validate() const {
  if (cluster_a_terms.empty() || cluster_b_terms.empty()) {
    ThrowInvalidArgument("both term clusters must be non-empty");
  }
  const std::unordered_set<std::string> a(cluster_a_terms.begin(),
                                          cluster_a_terms.end());
  for (const std::string& term : cluster_b_terms) {
    if (a.contains(term)) {
      ThrowInvalidArgument("term '" + term + "' appears in both clusters");
    }
  }
}

ClusterSpec ClusterSpec::DefaultGendered() {
  return ClusterSpec{
      {"her", "she", "woman", "female", "ms", "mrs", "herself", "girl", "lady"},
      {"his", "he", "man", "male", "mr", "him", "himself", "boy", "gentleman"}};
}

BiasScores ScoreBias(const VectorTable& table,
                     std::span<const std::string> corpus_terms,
                     const ClusterSpec& clusters) {
  clusters.Validate();
  const Centroid a = ComputeCentroid(table, clusters.cluster_a_terms);
  const Centroid b = ComputeCentroid(table, clusters.cluster_b_terms);
  if (Norm(a.vector) == 0.0 || Norm(b.vector) == 0.0) {
    ThrowFailedPrecondition("a cluster centroid has zero norm");
  }
  BiasScores scores;
  scores.centroid_a_missing = a.missing;
  scores.centroid_b_missing = b.missing;
  std::unordered_set<std::string_view> seen;
  for (const std::string& term : corpus_terms) {
    if (!seen.insert(term).second) continue;
    const std::vector<double>* v = table.Find(term);
    if (v == nullptr) {
      ++scores.missing_from_table;
      continue;
    }
    if (Norm(*v) == 0.0) {
      ++scores.zero_norm;
      continue;
    }
    TermBias t;
    t.term = term;
    t.sim_a = CosineSimilarity(*v, a.vector);
    t.sim_b = CosineSimilarity(*v, b.vector);
    t.max_sim = std::max(t.sim_a, t.sim_b);
    t.diff = t.sim_a - t.sim_b;
    scores.terms.push_back(std::move(t));
  }
  if (scores.terms.empty()) {
    ThrowFailedPrecondition("no corpus term has a usable vector");
  }
  std::vector<double> sims_a, sims_b;
  sims_a.reserve(scores.terms.size());
  sims_b.reserve(scores.terms.size());
  for (const TermBias& t : scores.terms) {
    sims_a.push_back(t.sim_a);
    sims_b.push_back(t.sim_b);
  }
  const std::vector<double> ranks_a = FractionalRanksDescending(sims_a);
  const std::vector<double> ranks_b = FractionalRanksDescending(sims_b);
  for (std::size_t i = 0; i < scores.terms.size(); ++i) {
    scores.terms[i].rank_a = ranks_a[i];
    scores.terms[i].rank_b = ranks_b[i];
  }
  return scores;
}

void WriteBiasTsv(const BiasScores& scores, std::ostream& out) {
  out << "term\tsim_a\tsim_b\tmax_sim\tdiff\trank_a\trank_b\n";
  for (const TermBias& t : scores.terms) {
    out << t.term << '\t' << fmt::Number(t.sim_a) << '\t'
        << fmt::Number(t.sim_b) << '\t' << fmt::Number(t.max_sim) << '\t'
        << fmt::Number(t.diff) << '\t' << fmt::Number(t.rank_a) << '\t'
        << fmt::Number(t.rank_b) << '\n';
  }
}

void WriteBiasHistogramCsv(
    const BiasScores& scores,
    const std::unordered_map<std::string, double>& weights, int bins,
    std::ostream& out) {
  if (bins < 1) ThrowInvalidArgument("bins must be >= 1");
  const auto n = static_cast<std::size_t>(bins);
  auto histogram = [&](double lo, double hi, auto value_of) {
    std::vector<double> w(n, 0.0);
    for (const TermBias& t : scores.terms) {
      const auto it = weights.find(t.term);
      if (it == weights.end()) continue;
      const double position = (value_of(t) - lo) / (hi - lo) * static_cast<double>(n);
      const auto bin = std::min(
          n - 1, static_cast<std::size_t>(std::max(0.0, std::floor(position))));
      w[bin] += it->second;
    }
    return w;
  };
  out << "quantity,bin_lo,bin_hi,weight\n";
  auto emit = [&](const char* name, double lo, double hi,
                  const std::vector<double>& w) {
    const double width = (hi - lo) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      out << name << ',' << fmt::Number(lo + width * static_cast<double>(i)) << ','
          << fmt::Number(lo + width * static_cast<double>(i + 1)) << ','
          << fmt::Number(w[i]) << '\n';
    }
  };
  emit("max_sim", -1.0, 1.0,
       histogram(-1.0, 1.0, [](const TermBias& t) { return t.max_sim; }));
  emit("diff", -2.0, 2.0,
       histogram(-2.0, 2.0, [](const TermBias& t) { return t.diff; }));
}

}  // namespace rtdbias
