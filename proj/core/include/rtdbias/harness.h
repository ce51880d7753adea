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

#ifndef RTDBIAS_HARNESS_H_
#define RTDBIAS_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rtdbias/augment.h"
#include "rtdbias/classify.h"
#include "rtdbias/corpus.h"
#include "rtdbias/divergence.h"
#include "rtdbias/ngrams.h"

namespace rtdbias {

enum class TaskKind { kClassLabel, kTaskLabel };

struct TaskSpec {
  std::string name;
  TaskKind kind = TaskKind::kClassLabel;
  // The task label marking positives (kTaskLabel only).
  std::string label;
};

struct SplitConfig {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  bool stratified = true;
};

struct NegativeSamplingConfig {
  double ratio = 1.0;  // negatives drawn per positive
  std::uint64_t seed = 0;
};

enum class ClassifierKind { kTfidfLogistic, kNearestNeighbor };

struct ClassifierConfig {
  ClassifierKind kind = ClassifierKind::kTfidfLogistic;
  LogisticOptions logistic;
  bool sublinear = false;
  double threshold = 0.5;
  // Chunked scoring of long documents (logistic classifier only).
  std::optional<AggregationParams> aggregation;
  // Nearest-neighbor classifier over mean-pooled word vectors.
  std::size_t k = 5;
  std::filesystem::path vectors;
};

struct ExperimentConfig {
  std::vector<TaskSpec> tasks;
  std::vector<double> trim_levels;
  ThresholdSpacing spacing = ThresholdSpacing::kLinear;
  SplitConfig split;
  NegativeSamplingConfig negative_sampling;
  double alpha = 1.0 / 3.0;
  TokenizerConfig tokenizer;
  ClassifierConfig classifier;

  void Validate() const;

  // Missing keys keep their defaults. "trim_levels" may be an explicit list
  // or {"spacing": "linear"|"logarithmic", "count": k}.
  static ExperimentConfig FromJson(const nlohmann::json& doc);
  nlohmann::ordered_json ToJson() const;

  // Derives the split, sampling and classifier seeds from one base seed.
  void SetSeed(std::uint64_t seed);
};

// Index sets into the labeled examples.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Seeded split. When stratified, each label contributes
// round(train_fraction * count) examples to train; both halves keep the
// input order.
Split SplitExamples(std::span<const int> labels, const SplitConfig& cfg);

// Documents and 0/1 labels for one task, as indices into the corpus.
struct TaskSample {
  std::vector<std::size_t> documents;
  std::vector<int> labels;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  // Negatives requested beyond what the pool could supply.
  std::size_t negative_shortfall = 0;
};

// Class tasks use every document (class A = 1). Label tasks take every
// document carrying the label plus round(ratio * positives) seeded draws,
// without replacement, from the documents lacking it; fewer when the pool
// is smaller.
TaskSample SampleTask(const Corpus& corpus, const TaskSpec& task,
                      const NegativeSamplingConfig& cfg);

struct TaskSummary {
  std::string task;
  double baseline_mcc = 0.0;
  // Level 0 first, then one entry per trim level.
  std::vector<double> mcc_per_level;
  // (baseline - final) / baseline; absent when baseline <= 0.
  std::optional<double> relative_loss;
  // Share of positive examples that belong to class A.
  double class_a_proportion = 0.0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t negative_shortfall = 0;
  // Nearest-neighbor runs only: documents with no in-table token.
  std::size_t excluded_documents = 0;
};

struct SkippedTask {
  std::string task;
  std::string reason;
};

struct SweepResult {
  DivergenceReport divergence;
  TrimPlan plan;
  std::vector<LevelLengths> lengths;
  // Task-major, level 0 first within each task.
  std::vector<EvalReport> evaluations;
  std::vector<TaskSummary> summary;
  std::vector<SkippedTask> skipped;
  RankDistribution class_a;
  RankDistribution class_b;
};

// One divergence report and trim plan from the class labels, then a
// train/evaluate cell per (task, level). Tasks that end up with a single
// class are skipped with a reason.
SweepResult RunSweep(const ExperimentConfig& cfg, const Corpus& corpus);

// Writes eval.csv, roc.csv, degradation.csv, lengths.csv, skipped.csv,
// trim_plan.tsv, divergence.tsv and allotaxonograph.json into `out_dir`
// (created if needed).
void WriteSweepOutputs(const SweepResult& result,
                       const std::filesystem::path& out_dir);

// degradation.csv rows.
void WriteDegradationCsv(std::span<const TaskSummary> summary, std::ostream& out);

// Parameters for a synthetic two-class corpus whose class signal lives only
// in `class_terms` and whose task signal lives only in `task_terms`.
struct SyntheticSpec {
  std::size_t n_docs = 400;
  // First half (rounded up) is emitted by class A documents, the rest by
  // class B documents.
  std::vector<std::string> class_terms;
  // Emitted by documents carrying `task_label`, independent of class.
  std::vector<std::string> task_terms;
  std::size_t vocab_size = 2000;
  std::uint64_t seed = 0;
  std::size_t min_length = 60;
  std::size_t max_length = 120;
  double class_term_rate = 0.08;
  double task_term_rate = 0.08;
  double task_prevalence = 0.5;
  double zipf_exponent = 1.0;
  std::string task_label = "task";
};

// `count` distinct letter-only terms "<prefix>a", "<prefix>b", ...,
// "<prefix>ba", ...
std::vector<std::string> PlantedTerms(const std::string& prefix,
                                      std::size_t count);

// Background word for a Zipf rank (0-based); never contains 'q' or 'x'.
std::string BackgroundWord(std::size_t index);

// Seeded and deterministic. Throws InvalidArgument when planted sets overlap
// each other or the background vocabulary.
Corpus GenerateSyntheticCorpus(const SyntheticSpec& spec);

}  // namespace rtdbias

#endif  // RTDBIAS_HARNESS_H_
