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

#ifndef RTDBIAS_CLASSIFY_H_
#define RTDBIAS_CLASSIFY_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rtdbias/corpus.h"
#include "rtdbias/embedbias.h"
#include "rtdbias/ngrams.h"

// Evaluation classifiers and metrics. Binary labels are 0/1 with 1 the
// positive class; when classifying the protected attribute, class A is
// encoded as 1.
namespace rtdbias {

// (column, value) pairs sorted by column.
using SparseVector = std::vector<std::pair<std::uint32_t, double>>;

class TfidfModel {
 public:
  TfidfModel() = default;
  TfidfModel(TokenizerConfig tokenizer, std::vector<std::string> vocabulary,
             std::vector<double> idf, bool sublinear);

  // L2-normalized count x idf vector; n-grams outside the vocabulary are
  // dropped. A document with no known n-gram maps to the zero vector.
  SparseVector Transform(std::string_view text) const;

  std::size_t dim() const { return vocabulary_.size(); }
  const TokenizerConfig& tokenizer() const { return tokenizer_; }
  // Column order (lexicographic).
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const std::vector<double>& idf() const { return idf_; }
  bool sublinear() const { return sublinear_; }
  std::optional<std::uint32_t> column(std::string_view term) const;

 private:
  TokenizerConfig tokenizer_;
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<double> idf_;
  bool sublinear_ = false;
};

// Smoothed idf: ln((1 + N) / (1 + df)) + 1. With `sublinear`, term counts
// become 1 + ln(count). Throws InvalidArgument on an empty training set and
// FailedPrecondition when the vocabulary would be empty.
TfidfModel FitTfidf(std::span<const std::string> train_texts,
                    const TokenizerConfig& cfg, bool sublinear = false);
TfidfModel FitTfidf(const Corpus& train, const TokenizerConfig& cfg,
                    bool sublinear = false);

struct LogisticOptions {
  double l2_lambda = 1.0;
  double tolerance = 1e-6;
  int max_iter = 1000;
  std::uint64_t seed = 0;
};

struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;
  double l2_lambda = 1.0;
  bool converged = false;
  double final_gradient_norm = 0.0;
  int iterations = 0;
  // Objective value at the start and after every accepted step.
  std::vector<double> objective_trace;

  double Score(const SparseVector& x) const;
  double PredictProbability(const SparseVector& x) const;
};

// Mean logistic loss + (lambda/2)|w|^2 (bias unpenalized).
double LogisticObjective(const LogisticModel& model,
                         std::span<const SparseVector> x,
                         std::span<const int> y);

// Full-batch gradient descent with Barzilai-Borwein trial steps and Armijo
// backtracking, from a small seeded random start. Stops once the gradient
// norm drops below the tolerance or after max_iter steps. Throws
// InvalidArgument unless both labels occur.
LogisticModel FitLogistic(std::span<const SparseVector> x, std::size_t dim,
                          std::span<const int> y,
                          const LogisticOptions& options = {});

// Versioned JSON with vocabulary, idf, weights, bias and hyperparameters.
nlohmann::ordered_json SaveModelJson(const TfidfModel& tfidf,
                                     const LogisticModel& model);
std::pair<TfidfModel, LogisticModel> LoadModelJson(
    const nlohmann::json& document);

// Mean of the vectors of the document's tokens found in the table;
// nullopt when none are.
std::optional<std::vector<double>> MeanPool(const VectorTable& table,
                                            std::string_view text,
                                            const TokenizerConfig& cfg);

// Fraction of label-1 votes among the k training vectors closest to `query`
// by cosine distance (distance ties resolved by training order). Zero
// vectors are treated as maximally distant.
double NearestNeighborScore(std::span<const std::vector<double>> train,
                            std::span<const int> labels,
                            std::span<const double> query, std::size_t k);

// Majority label of NearestNeighborScore; a split vote goes to label 1.
int NearestNeighborPredict(std::span<const std::vector<double>> train,
                           std::span<const int> labels,
                           std::span<const double> query, std::size_t k);

struct AggregationParams {
  double c = 2.0;
  std::size_t chunk_size = 512;

  void Validate() const;
};

// (p_max + p_mean * n / c) / (1 + n / c). Throws InvalidArgument unless
// 0 <= p_mean <= p_max <= 1 and n >= 1.
double AggregateChunkProbability(double p_max, double p_mean, std::size_t n,
                                 const AggregationParams& params);

// Splits the document's tokens into chunk_size-token subsequences, scores
// each one and aggregates. An empty document is scored as a single empty
// chunk.
double ChunkedProbability(const TfidfModel& tfidf, const LogisticModel& model,
                          std::string_view text,
                          const AggregationParams& params);

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
};

ConfusionCounts Confusion(std::span<const int> predicted,
                          std::span<const int> truth);

// Matthews correlation coefficient; 0 whenever a marginal is empty. Throws
// InvalidArgument when every count is zero.
double Mcc(const ConfusionCounts& counts);

struct RocCurve {
  // (false-positive rate, true-positive rate) from (0,0) to (1,1), one point
  // per distinct score.
  std::vector<std::pair<double, double>> points;
  double auc = 0.0;
};

// Sweeps every distinct score as a threshold (tied scores enter together);
// AUC by the trapezoid rule. Throws InvalidArgument unless both labels
// occur.
RocCurve RocAuc(std::span<const double> scores, std::span<const int> labels);

struct EvalReport {
  std::string task;
  double trim_level = 0.0;
  ConfusionCounts counts;
  double mcc = 0.0;
  RocCurve roc;
  double auc = 0.0;
};

EvalReport Evaluate(std::string task, double trim_level,
                    std::span<const double> probabilities,
                    std::span<const int> truth, double threshold = 0.5);

// Header for WriteEvalCsvRow.
void WriteEvalCsvHeader(std::ostream& out);
// task, trim_level, tp, fp, tn, fn, mcc, auc.
void WriteEvalCsvRow(const EvalReport& report, std::ostream& out);

}  // namespace rtdbias

#endif  // RTDBIAS_CLASSIFY_H_
