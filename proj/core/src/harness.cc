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

#include "rtdbias/harness.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <utility>

#include "rng.h"
#include "rtdbias/error.h"
#include "rtdbias/format.h"

namespace rtdbias {
namespace {

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) ThrowIoError("cannot write '" + path.string() + "'");
  return out;
}

TaskKind ParseTaskKind(const std::string& name) {
  if (name == "class_label") return TaskKind::kClassLabel;
  if (name == "task_label") return TaskKind::kTaskLabel;
  ThrowInvalidArgument("unknown task kind '" + name + "'");
}

ClassifierKind ParseClassifierKind(const std::string& name) {
  if (name == "tfidf_logistic") return ClassifierKind::kTfidfLogistic;
  if (name == "nearest_neighbor") return ClassifierKind::kNearestNeighbor;
  ThrowInvalidArgument("unknown classifier kind '" + name + "'");
}

// Scores for the test examples of one (task, level) cell.
struct CellScores {
  std::vector<double> probabilities;
  std::vector<int> truth;
};

CellScores ScoreLogistic(const ClassifierConfig& cfg,
                         const TokenizerConfig& tokenizer,
                         const Corpus& corpus, const TaskSample& sample,
                         const Split& split) {
  std::vector<std::string> train_texts;
  std::vector<int> train_labels;
  for (const std::size_t i : split.train) {
    train_texts.push_back(corpus[sample.documents[i]].text);
    train_labels.push_back(sample.labels[i]);
  }
  CellScores cell;
  // Heavy trimming can empty every training document.
  bool has_vocabulary = false;
  for (const std::string& text : train_texts) {
    if (!Tokenize(text, tokenizer).empty()) {
      has_vocabulary = true;
      break;
    }
  }
  if (!has_vocabulary) {
    const double prior =
        static_cast<double>(std::count(train_labels.begin(), train_labels.end(), 1)) /
        static_cast<double>(train_labels.size());
    for (const std::size_t i : split.test) {
      cell.probabilities.push_back(prior);
      cell.truth.push_back(sample.labels[i]);
    }
    return cell;
  }
  const TfidfModel tfidf = FitTfidf(train_texts, tokenizer, cfg.sublinear);
  std::vector<SparseVector> x;
  x.reserve(train_texts.size());
  for (const std::string& text : train_texts) x.push_back(tfidf.Transform(text));
  const LogisticModel model = FitLogistic(x, tfidf.dim(), train_labels, cfg.logistic);
  for (const std::size_t i : split.test) {
    const std::string& text = corpus[sample.documents[i]].text;
    cell.probabilities.push_back(
        cfg.aggregation ? ChunkedProbability(tfidf, model, text, *cfg.aggregation)
                        : model.PredictProbability(tfidf.Transform(text)));
    cell.truth.push_back(sample.labels[i]);
  }
  return cell;
}

CellScores ScoreNearestNeighbor(const ClassifierConfig& cfg,
                                const TokenizerConfig& tokenizer,
                                const VectorTable& table, const Corpus& corpus,
                                const TaskSample& sample, const Split& split,
                                std::size_t* excluded) {
  std::vector<std::vector<double>> train;
  std::vector<int> train_labels;
  for (const std::size_t i : split.train) {
    auto pooled = MeanPool(table, corpus[sample.documents[i]].text, tokenizer);
    if (!pooled) {
      ++*excluded;
      continue;
    }
    train.push_back(std::move(*pooled));
    train_labels.push_back(sample.labels[i]);
  }
  CellScores cell;
  for (const std::size_t i : split.test) {
    auto pooled = MeanPool(table, corpus[sample.documents[i]].text, tokenizer);
    if (!pooled) {
      ++*excluded;
      continue;
    }
    if (train.empty()) {
      cell.probabilities.push_back(0.5);
    } else {
      cell.probabilities.push_back(NearestNeighborScore(
          train, train_labels, *pooled, std::min(cfg.k, train.size())));
    }
    cell.truth.push_back(sample.labels[i]);
  }
  return cell;
}

EvalReport EvaluateCell(const std::string& task, double level,
                        const CellScores& cell, double threshold) {
  const auto positives = std::count(cell.truth.begin(), cell.truth.end(), 1);
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(cell.truth.size())) {
    ThrowFailedPrecondition("task '" + task +
                            "' has a single class in its test split");
  }
  return Evaluate(task, level, cell.probabilities, cell.truth, threshold);
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (!(split.train_fraction > 0.0 && split.train_fraction < 1.0)) {
    ThrowInvalidArgument("train_fraction must lie in (0, 1)");
  }
  if (!(negative_sampling.ratio > 0.0)) {
    ThrowInvalidArgument("negative sampling ratio must be positive");
  }
  DivergenceConfig{alpha}.Validate();
  tokenizer.Validate();
  for (std::size_t i = 0; i < trim_levels.size(); ++i) {
    if (!(trim_levels[i] > 0.0 && trim_levels[i] <= 1.0) ||
        (i > 0 && !(trim_levels[i] > trim_levels[i - 1]))) {
      ThrowInvalidArgument("trim levels must be strictly increasing in (0, 1]");
    }
  }
  for (const TaskSpec& task : tasks) {
    if (task.name.empty()) ThrowInvalidArgument("task names must be non-empty");
    if (task.kind == TaskKind::kTaskLabel && task.label.empty()) {
      ThrowInvalidArgument("task '" + task.name + "' needs a label");
    }
  }
  if (classifier.kind == ClassifierKind::kNearestNeighbor) {
    if (classifier.vectors.empty()) {
      ThrowInvalidArgument("the nearest-neighbor classifier needs a vectors file");
    }
    if (classifier.k < 1) ThrowInvalidArgument("k must be >= 1");
  }
  if (classifier.aggregation) classifier.aggregation->Validate();
}

void ExperimentConfig::SetSeed(std::uint64_t seed) {
  split.seed = seed;
  negative_sampling.seed = seed + 1;
  classifier.logistic.seed = seed + 2;
}

ExperimentConfig ExperimentConfig::FromJson(const nlohmann::json& doc) {
  ExperimentConfig cfg;
  try {
    if (doc.contains("tasks")) {
      for (const auto& t : doc.at("tasks")) {
        TaskSpec task;
        task.name = t.at("name").get<std::string>();
        task.kind = ParseTaskKind(t.value("kind", std::string("class_label")));
        task.label = t.value("label", std::string());
        cfg.tasks.push_back(std::move(task));
      }
    }
    if (doc.contains("trim_levels")) {
      const auto& levels = doc.at("trim_levels");
      if (levels.is_array()) {
        cfg.trim_levels = levels.get<std::vector<double>>();
      } else {
        cfg.spacing = ParseThresholdSpacing(levels.value("spacing", std::string("linear")));
        cfg.trim_levels =
            ThresholdLadder(cfg.spacing, levels.value("count", std::size_t{9}));
      }
    }
    if (doc.contains("split")) {
      const auto& s = doc.at("split");
      cfg.split.train_fraction = s.value("train_fraction", cfg.split.train_fraction);
      cfg.split.seed = s.value("seed", cfg.split.seed);
      cfg.split.stratified = s.value("stratified", cfg.split.stratified);
    }
    if (doc.contains("negative_sampling")) {
      const auto& s = doc.at("negative_sampling");
      cfg.negative_sampling.ratio = s.value("ratio", cfg.negative_sampling.ratio);
      cfg.negative_sampling.seed = s.value("seed", cfg.negative_sampling.seed);
    }
    cfg.alpha = doc.value("alpha", cfg.alpha);
    if (doc.contains("tokenizer")) {
      const auto& t = doc.at("tokenizer");
      cfg.tokenizer.n = t.value("n", cfg.tokenizer.n);
      cfg.tokenizer.keep_internal_apostrophes =
          t.value("keep_internal_apostrophes", cfg.tokenizer.keep_internal_apostrophes);
    }
    if (doc.contains("classifier")) {
      const auto& c = doc.at("classifier");
      ClassifierConfig& k = cfg.classifier;
      k.kind = ParseClassifierKind(c.value("kind", std::string("tfidf_logistic")));
      k.logistic.l2_lambda = c.value("l2_lambda", k.logistic.l2_lambda);
      k.logistic.tolerance = c.value("tolerance", k.logistic.tolerance);
      k.logistic.max_iter = c.value("max_iter", k.logistic.max_iter);
      k.logistic.seed = c.value("seed", k.logistic.seed);
      k.sublinear = c.value("sublinear", k.sublinear);
      k.threshold = c.value("threshold", k.threshold);
      k.k = c.value("k", k.k);
      k.vectors = c.value("vectors", std::string());
      if (c.contains("aggregation")) {
        AggregationParams params;
        params.c = c.at("aggregation").value("c", params.c);
        params.chunk_size = c.at("aggregation").value("chunk_size", params.chunk_size);
        k.aggregation = params;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    ThrowInvalidArgument(std::string("malformed experiment config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

nlohmann::ordered_json ExperimentConfig::ToJson() const {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json task_list = nlohmann::ordered_json::array();
  for (const TaskSpec& t : tasks) {
    nlohmann::ordered_json entry;
    entry["name"] = t.name;
    entry["kind"] = t.kind == TaskKind::kClassLabel ? "class_label" : "task_label";
    if (t.kind == TaskKind::kTaskLabel) entry["label"] = t.label;
    task_list.push_back(std::move(entry));
  }
  doc["tasks"] = std::move(task_list);
  doc["trim_levels"] = trim_levels;
  doc["split"] = {{"train_fraction", split.train_fraction},
                  {"seed", split.seed},
                  {"stratified", split.stratified}};
  doc["negative_sampling"] = {{"ratio", negative_sampling.ratio},
                              {"seed", negative_sampling.seed}};
  doc["alpha"] = alpha;
  doc["tokenizer"] = {{"n", tokenizer.n},
                      {"keep_internal_apostrophes", tokenizer.keep_internal_apostrophes}};
  nlohmann::ordered_json c;
  c["kind"] = classifier.kind == ClassifierKind::kTfidfLogistic ? "tfidf_logistic"
                                                                 : "nearest_neighbor";
  c["l2_lambda"] = classifier.logistic.l2_lambda;
  c["tolerance"] = classifier.logistic.tolerance;
  c["max_iter"] = classifier.logistic.max_iter;
  c["seed"] = classifier.logistic.seed;
  c["sublinear"] = classifier.sublinear;
  c["threshold"] = classifier.threshold;
  c["k"] = classifier.k;
  if (!classifier.vectors.empty()) c["vectors"] = classifier.vectors.string();
  if (classifier.aggregation) {
    c["aggregation"] = {{"c", classifier.aggregation->c},
                        {"chunk_size", classifier.aggregation->chunk_size}};
  }
  doc["classifier"] = std::move(c);
  return doc;
}

Split SplitExamples(std::span<const int> labels, const SplitConfig& cfg) {
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
    ThrowInvalidArgument("train_fraction must lie in (0, 1)");
  }
  internal::Rng rng(cfg.seed);
  std::vector<bool> in_train(labels.size(), false);
  auto take = [&](std::vector<std::size_t> pool) {
    rng.Shuffle(pool);
    const auto count = static_cast<std::size_t>(
        std::llround(cfg.train_fraction * static_cast<double>(pool.size())));
    for (std::size_t i = 0; i < count; ++i) in_train[pool[i]] = true;
  };
  if (cfg.stratified) {
    for (const int label : {0, 1}) {
      std::vector<std::size_t> pool;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) pool.push_back(i);
      }
      take(std::move(pool));
    }
  } else {
    std::vector<std::size_t> pool(labels.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    take(std::move(pool));
  }
  Split split;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (in_train[i] ? split.train : split.test).push_back(i);
  }
  return split;
}

TaskSample SampleTask(const Corpus& corpus, const TaskSpec& task,
                      const NegativeSamplingConfig& cfg) {
  TaskSample sample;
  if (task.kind == TaskKind::kClassLabel) {
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const int label = corpus[i].class_label == ClassLabel::kA ? 1 : 0;
      sample.documents.push_back(i);
      sample.labels.push_back(label);
      (label == 1 ? sample.positives : sample.negatives) += 1;
    }
    return sample;
  }
  std::vector<std::size_t> pool;
  std::vector<bool> chosen(corpus.size(), false);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].HasTaskLabel(task.label)) {
      chosen[i] = true;
      ++sample.positives;
    } else {
      pool.push_back(i);
    }
  }
  const auto wanted = static_cast<std::size_t>(
      std::llround(cfg.ratio * static_cast<double>(sample.positives)));
  internal::Rng rng(cfg.seed);
  rng.Shuffle(pool);
  sample.negatives = std::min(wanted, pool.size());
  sample.negative_shortfall = wanted - sample.negatives;
  for (std::size_t i = 0; i < sample.negatives; ++i) chosen[pool[i]] = true;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!chosen[i]) continue;
    sample.documents.push_back(i);
    sample.labels.push_back(corpus[i].HasTaskLabel(task.label) ? 1 : 0);
  }
  return sample;
}

SweepResult RunSweep(const ExperimentConfig& cfg, const Corpus& corpus) {
  cfg.Validate();
  SweepResult result;
  TokenizerConfig unigram = cfg.tokenizer;
  unigram.n = 1;
  result.class_a = BuildDistribution(corpus, ClassLabel::kA, unigram);
  result.class_b = BuildDistribution(corpus, ClassLabel::kB, unigram);
  result.divergence =
      ComputeRtd(result.class_a, result.class_b, DivergenceConfig{cfg.alpha});
  result.plan = PlanTrim(result.divergence, cfg.trim_levels, cfg.spacing);

  std::vector<Corpus> levels{corpus};
  std::vector<double> level_values{0.0};
  for (std::size_t i = 0; i < result.plan.thresholds.size(); ++i) {
    levels.push_back(
        ApplyTrim(corpus, result.plan.term_sets[i], unigram, result.plan.thresholds[i])
            .corpus);
    level_values.push_back(result.plan.thresholds[i]);
  }
  result.lengths.push_back(
      LevelLengths{0.0, 0, ComputeLengthStats(DocumentLengths(corpus, unigram))});
  for (std::size_t i = 1; i < levels.size(); ++i) {
    result.lengths.push_back(
        LevelLengths{level_values[i], result.plan.term_sets[i - 1].size(),
                     ComputeLengthStats(DocumentLengths(levels[i], unigram))});
  }

  std::optional<VectorTable> table;
  if (cfg.classifier.kind == ClassifierKind::kNearestNeighbor) {
    table = LoadVectors(cfg.classifier.vectors);
  }

  for (const TaskSpec& task : cfg.tasks) {
    const TaskSample sample = SampleTask(corpus, task, cfg.negative_sampling);
    if (sample.positives == 0 || sample.negatives == 0) {
      result.skipped.push_back(
          {task.name, sample.positives == 0 ? "no positive examples"
                                            : "no negative examples"});
      continue;
    }
    const Split split = SplitExamples(sample.labels, cfg.split);
    auto has_both = [&](const std::vector<std::size_t>& part) {
      bool pos = false, neg = false;
      for (const std::size_t i : part) (sample.labels[i] == 1 ? pos : neg) = true;
      return pos && neg;
    };
    if (!has_both(split.train) || !has_both(split.test)) {
      result.skipped.push_back({task.name, "a split half has a single class"});
      continue;
    }

    TaskSummary summary;
    summary.task = task.name;
    summary.positives = sample.positives;
    summary.negatives = sample.negatives;
    summary.negative_shortfall = sample.negative_shortfall;
    std::size_t class_a_positives = 0;
    for (std::size_t i = 0; i < sample.documents.size(); ++i) {
      if (sample.labels[i] == 1 &&
          corpus[sample.documents[i]].class_label == ClassLabel::kA) {
        ++class_a_positives;
      }
    }
    summary.class_a_proportion = static_cast<double>(class_a_positives) /
                                 static_cast<double>(sample.positives);

    std::vector<EvalReport> task_reports;
    try {
      for (std::size_t l = 0; l < levels.size(); ++l) {
        std::size_t excluded = 0;
        const CellScores cell =
            cfg.classifier.kind == ClassifierKind::kTfidfLogistic
                ? ScoreLogistic(cfg.classifier, cfg.tokenizer, levels[l], sample, split)
                : ScoreNearestNeighbor(cfg.classifier, cfg.tokenizer, *table,
                                       levels[l], sample, split, &excluded);
        if (l == 0) summary.excluded_documents = excluded;
        task_reports.push_back(
            EvaluateCell(task.name, level_values[l], cell, cfg.classifier.threshold));
        summary.mcc_per_level.push_back(task_reports.back().mcc);
      }
    } catch (const Error& e) {
      result.skipped.push_back({task.name, e.what()});
      continue;
    }
    summary.baseline_mcc = summary.mcc_per_level.front();
    if (summary.baseline_mcc > 0.0) {
      summary.relative_loss =
          (summary.baseline_mcc - summary.mcc_per_level.back()) / summary.baseline_mcc;
    }
    for (EvalReport& r : task_reports) result.evaluations.push_back(std::move(r));
    result.summary.push_back(std::move(summary));
  }
  return result;
}

void WriteDegradationCsv(std::span<const TaskSummary> summary, std::ostream& out) {
  out << "task,level_index,mcc,baseline_mcc,relative_loss,class_a_proportion,"
         "positives,negatives,negative_shortfall,excluded_documents\n";
  for (const TaskSummary& s : summary) {
    for (std::size_t l = 0; l < s.mcc_per_level.size(); ++l) {
      out << fmt::CsvField(s.task) << ',' << l << ','
          << fmt::Number(s.mcc_per_level[l]) << ',' << fmt::Number(s.baseline_mcc)
          << ',' << (s.relative_loss ? fmt::Number(*s.relative_loss) : "NA") << ','
          << fmt::Number(s.class_a_proportion) << ',' << s.positives << ','
          << s.negatives << ',' << s.negative_shortfall << ','
          << s.excluded_documents << '\n';
    }
  }
}

void WriteSweepOutputs(const SweepResult& result,
                       const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out = OpenOutput(out_dir / "eval.csv");
    WriteEvalCsvHeader(out);
    for (const EvalReport& r : result.evaluations) WriteEvalCsvRow(r, out);
  }
  {
    std::ofstream out = OpenOutput(out_dir / "roc.csv");
    out << "task,trim_level,fpr,tpr\n";
    for (const EvalReport& r : result.evaluations) {
      for (const auto& [fpr, tpr] : r.roc.points) {
        out << fmt::CsvField(r.task) << ',' << fmt::Number(r.trim_level) << ','
            << fmt::Number(fpr) << ',' << fmt::Number(tpr) << '\n';
      }
    }
  }
  {
    std::ofstream out = OpenOutput(out_dir / "degradation.csv");
    WriteDegradationCsv(result.summary, out);
  }
  {
    std::ofstream out = OpenOutput(out_dir / "lengths.csv");
    WriteLengthSummaryCsv(result.lengths, out);
  }
  {
    std::ofstream out = OpenOutput(out_dir / "skipped.csv");
    out << "task,reason\n";
    for (const SkippedTask& s : result.skipped) {
      out << fmt::CsvField(s.task) << ',' << fmt::CsvField(s.reason) << '\n';
    }
  }
  {
    std::ofstream out = OpenOutput(out_dir / "trim_plan.tsv");
    out << "threshold\tterm_count\tterms\n";
    for (std::size_t i = 0; i < result.plan.thresholds.size(); ++i) {
      std::string terms;
      for (const std::string& t : result.plan.term_sets[i]) {
        if (!terms.empty()) terms.push_back(' ');
        terms += t;
      }
      out << fmt::Number(result.plan.thresholds[i]) << '\t'
          << result.plan.term_sets[i].size() << '\t' << terms << '\n';
    }
  }
  {
    std::ofstream out = OpenOutput(out_dir / "divergence.tsv");
    WriteDivergenceTsv(result.divergence, out);
  }
  {
    std::ofstream out = OpenOutput(out_dir / "allotaxonograph.json");
    out << ExportAllotaxonograph(result.divergence, result.class_a, result.class_b)
               .dump(2)
        << '\n';
  }
}

}  // namespace rtdbias
