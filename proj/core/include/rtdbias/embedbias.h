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

#ifndef RTDBIAS_EMBEDBIAS_H_
#define RTDBIAS_EMBEDBIAS_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rtdbias {

// Precomputed word vectors, one per term, all of the same dimension.
class VectorTable {
 public:
  VectorTable() = default;
  explicit VectorTable(std::size_t dim);

  // Inserts or replaces. Throws InvalidArgument on a dimension mismatch or a
  // non-finite component.
  void Set(const std::string& term, std::vector<double> vector);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return terms_.size(); }
  // Insertion order of first appearance.
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<double>* Find(std::string_view term) const;

  // Number of lines whose term had already been loaded (last one wins).
  std::size_t duplicate_count() const { return duplicates_; }
  void set_duplicate_count(std::size_t n) { duplicates_ = n; }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
  std::size_t duplicates_ = 0;
};

// Plain-text vectors, one "term v1 ... vd" line per term, whitespace
// separated. A leading word2vec-style "<count> <dim>" header line is skipped.
// Throws ParseError (with line number) on inconsistent dimensions,
// non-numeric or non-finite components, and on an input with no vectors.
VectorTable LoadVectors(std::istream& in,
                        std::optional<std::size_t> expected_dim = std::nullopt);
VectorTable LoadVectors(const std::filesystem::path& path,
                        std::optional<std::size_t> expected_dim = std::nullopt);

double Dot(std::span<const double> a, std::span<const double> b);
double Norm(std::span<const double> v);
// Cosine similarity; NaN when either vector has zero norm.
double CosineSimilarity(std::span<const double> a, std::span<const double> b);

struct Centroid {
  std::vector<double> vector;
  std::size_t used = 0;
  std::size_t missing = 0;
};

// Componentwise mean of the vectors of `terms` found in the table. Throws
// FailedPrecondition when none are present.
Centroid ComputeCentroid(const VectorTable& table,
                         std::span<const std::string> terms);

struct ClusterSpec {
  std::vector<std::string> cluster_a_terms;
  std::vector<std::string> cluster_b_terms;

  // Throws InvalidArgument if a cluster is empty or they overlap.
  void Validate() const;

  // The nine manually paired gendered terms (female side as cluster A).
  static ClusterSpec DefaultGendered();
};

struct TermBias {
  std::string term;
  double sim_a = 0.0;
  double sim_b = 0.0;
  double max_sim = 0.0;
  double diff = 0.0;  // sim_a - sim_b
  double rank_a = 0.0;  // fractional rank of sim_a, descending
  double rank_b = 0.0;
};

struct BiasScores {
  // In the order of the scored corpus terms.
  std::vector<TermBias> terms;
  std::size_t missing_from_table = 0;
  std::size_t zero_norm = 0;
  std::size_t centroid_a_missing = 0;
  std::size_t centroid_b_missing = 0;
};

// Cosine similarity of every corpus term's vector to the two cluster
// centroids. Terms without a vector, or with a zero vector, are skipped and
// counted. Throws FailedPrecondition when no corpus term can be scored or a
// centroid has zero norm.
BiasScores ScoreBias(const VectorTable& table,
                     std::span<const std::string> corpus_terms,
                     const ClusterSpec& clusters);

// TSV columns: term, sim_a, sim_b, max_sim, diff, rank_a, rank_b.
void WriteBiasTsv(const BiasScores& scores, std::ostream& out);

// Histograms of max_sim over [-1, 1] and diff over [-2, 2], each with `bins`
// equal-width bins, weighted by each term's corpus count (terms missing from
// `weights` count as weight 0). Columns: quantity, bin_lo, bin_hi, weight.
void WriteBiasHistogramCsv(
    const BiasScores& scores,
    const std::unordered_map<std::string, double>& weights, int bins,
    std::ostream& out);

}  // namespace rtdbias

#endif  // RTDBIAS_EMBEDBIAS_H_
