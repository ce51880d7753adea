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

#include "rtdbias/classify.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <unordered_set>

#include "rtdbias/error.h"
#include "rtdbias/format.h"
#include "rtdbias/text.h"

namespace rtdbias {
namespace {

constexpr int kModelFormatVersion = 1;

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double SparseDot(const SparseVector& x, const std::vector<double>& w) {
  double sum = 0.0;
  for (const auto& [col, value] : x) sum += value * w[col];
  return sum;
}

// Objective and gradient at (w, b). gradient has dim + 1 entries, the last
// for the bias.
double ObjectiveAndGradient(std::span<const SparseVector> x,
                            std::span<const int> y,
                            const std::vector<double>& w, double b,
                            double lambda, std::vector<double>* gradient) {
  const double inv_n = 1.0 / static_cast<double>(x.size());
  double loss = 0.0;
  if (gradient != nullptr) gradient->assign(w.size() + 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = SparseDot(x[i], w) + b;
    // -log p(y|z) = softplus(z) - y z
    loss += Softplus(z) - (y[i] == 1 ? z : 0.0);
    if (gradient != nullptr) {
      const double residual = (Sigmoid(z) - static_cast<double>(y[i])) * inv_n;
      for (const auto& [col, value] : x[i]) (*gradient)[col] += residual * value;
      gradient->back() += residual;
    }
  }
  double penalty = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    penalty += w[j] * w[j];
    if (gradient != nullptr) (*gradient)[j] += lambda * w[j];
  }
  return loss * inv_n + 0.5 * lambda * penalty;
}

double Norm2(const std::vector<double>& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

void ValidateBinary(std::span<const int> y) {
  for (const int label : y) {
    if (label != 0 && label != 1) ThrowInvalidArgument("labels must be 0 or 1");
  }
}

}  // namespace

TfidfModel::TfidfModel(TokenizerConfig tokenizer,
                       std::vector<std::string> vocabulary,
                       std::vector<double> idf, bool sublinear)
    : tokenizer_(tokenizer),
      vocabulary_(std::move(vocabulary)),
      idf_(std::move(idf)),
      sublinear_(sublinear) {
  tokenizer_.Validate();
  if (vocabulary_.size() != idf_.size()) {
    ThrowInvalidArgument("vocabulary and idf sizes differ");
  }
  index_.reserve(vocabulary_.size());
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    if (!index_.emplace(vocabulary_[i], static_cast<std::uint32_t>(i)).second) {
      ThrowInvalidArgument("duplicate vocabulary term '" + vocabulary_[i] + "'");
    }
    if (!(idf_[i] > 0.0) || !std::isfinite(idf_[i])) {
      ThrowInvalidArgument("idf values must be positive and finite");
    }
  }
}

std::optional<std::uint32_t> TfidfModel::column(std::string_view term) const {
  const auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SparseVector TfidfModel::Transform(std::string_view text) const {
  std::map<std::uint32_t, double> counts;
  for (const std::string& gram : Tokenize(text, tokenizer_)) {
    if (const auto col = column(gram)) counts[*col] += 1.0;
  }
  SparseVector out;
  out.reserve(counts.size());
  double sq = 0.0;
  for (const auto& [col, count] : counts) {
    const double tf = sublinear_ ? 1.0 + std::log(count) : count;
    const double value = tf * idf_[col];
    out.emplace_back(col, value);
    sq += value * value;
  }
  if (sq > 0.0) {
    const double inv = 1.0 / std::sqrt(sq);
    for (auto& entry : out) entry.second *= inv;
  }
  return out;
}

TfidfModel FitTfidf(std::span<const std::string> train_texts,
                    const TokenizerConfig& cfg, bool sublinear) {
  cfg.Validate();
  if (train_texts.empty()) ThrowInvalidArgument("empty training set");
  std::map<std::string, std::int64_t> document_frequency;
  for (const std::string& text : train_texts) {
    std::vector<std::string> grams = Tokenize(text, cfg);
    std::sort(grams.begin(), grams.end());
    grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
    for (std::string& gram : grams) ++document_frequency[std::move(gram)];
  }
  if (document_frequency.empty()) {
    ThrowFailedPrecondition("training documents contain no n-grams");
  }
  const double n = static_cast<double>(train_texts.size());
  std::vector<std::string> vocabulary;
  std::vector<double> idf;
  vocabulary.reserve(document_frequency.size());
  idf.reserve(document_frequency.size());
  for (const auto& [gram, df] : document_frequency) {
    vocabulary.push_back(gram);
    idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(df))) + 1.0);
  }
  return TfidfModel(cfg, std::move(vocabulary), std::move(idf), sublinear);
}

TfidfModel FitTfidf(const Corpus& train, const TokenizerConfig& cfg,
                    bool sublinear) {
  std::vector<std::string> texts;
  texts.reserve(train.size());
  for (const Document& doc : train.documents()) texts.push_back(doc.text);
  return FitTfidf(texts, cfg, sublinear);
}

double LogisticModel::Score(const SparseVector& x) const {
  return SparseDot(x, weights) + bias;
}

double LogisticModel::PredictProbability(const SparseVector& x) const {
  return Sigmoid(Score(x));
}

double LogisticObjective(const LogisticModel& model,
                         std::span<const SparseVector> x,
                         std::span<const int> y) {
  return ObjectiveAndGradient(x, y, model.weights, model.bias, model.l2_lambda,
                              nullptr);
}

LogisticModel FitLogistic(std::span<const SparseVector> x, std::size_t dim,
                          std::span<const int> y,
                          const LogisticOptions& options) {
  if (x.size() != y.size()) ThrowInvalidArgument("features and labels differ in length");
  if (x.empty()) ThrowInvalidArgument("empty training set");
  ValidateBinary(y);
  const auto positives = std::count(y.begin(), y.end(), 1);
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(y.size())) {
    ThrowInvalidArgument("logistic regression needs both labels in training data");
  }
  if (!(options.l2_lambda > 0.0)) ThrowInvalidArgument("l2_lambda must be positive");
  if (options.max_iter < 0) ThrowInvalidArgument("max_iter must be non-negative");
  for (const SparseVector& row : x) {
    for (const auto& entry : row) {
      if (entry.first >= dim) ThrowInvalidArgument("feature column out of range");
    }
  }

  LogisticModel model;
  model.l2_lambda = options.l2_lambda;
  model.weights.resize(dim);
  std::mt19937_64 rng(options.seed);
  for (double& w : model.weights) {
    // Uniform in [-0.01, 0.01) from the top 53 bits.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    w = 0.02 * u - 0.01;
  }
  // Start the unpenalized bias at the log-odds of the class prior.
  const double prior = static_cast<double>(positives) / static_cast<double>(y.size());
  model.bias = std::log(prior / (1.0 - prior));

  const double lambda = options.l2_lambda;
  std::vector<double> gradient;
  double objective =
      ObjectiveAndGradient(x, y, model.weights, model.bias, lambda, &gradient);
  model.objective_trace.push_back(objective);
  double gradient_norm = Norm2(gradient);

  std::vector<double> trial_w(dim);
  std::vector<double> trial_gradient;
  std::vector<double> previous_gradient;
  double step = 1.0;
  std::vector<double> displacement(dim + 1, 0.0);
  int iter = 0;
  while (gradient_norm >= options.tolerance && iter < options.max_iter) {
    ++iter;
    // Backtracking from the current trial step.
    constexpr double kArmijo = 1e-4;
    double trial_objective = 0.0;
    double trial_b = 0.0;
    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      for (std::size_t j = 0; j < dim; ++j) {
        trial_w[j] = model.weights[j] - step * gradient[j];
      }
      trial_b = model.bias - step * gradient.back();
      trial_objective = ObjectiveAndGradient(x, y, trial_w, trial_b, lambda,
                                             &trial_gradient);
      if (trial_objective <=
          objective - kArmijo * step * gradient_norm * gradient_norm) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no decrease representable at this precision

    for (std::size_t j = 0; j < dim; ++j) {
      displacement[j] = trial_w[j] - model.weights[j];
    }
    displacement.back() = trial_b - model.bias;
    double ss = 0.0;
    double sy = 0.0;
    for (std::size_t j = 0; j <= dim; ++j) {
      ss += displacement[j] * displacement[j];
      sy += displacement[j] * (trial_gradient[j] - gradient[j]);
    }
    model.weights.swap(trial_w);
    model.bias = trial_b;
    gradient.swap(trial_gradient);
    objective = trial_objective;
    gradient_norm = Norm2(gradient);
    model.objective_trace.push_back(objective);
    // Barzilai-Borwein step for the next trial; the objective is strongly
    // convex so sy > 0 away from numerical noise.
    step = sy > 0.0 ? std::clamp(ss / sy, 1e-10, 1e10) : std::min(step * 2.0, 1e10);
  }
  model.iterations = iter;
  model.final_gradient_norm = gradient_norm;
  model.converged = gradient_norm < options.tolerance;
  return model;
}

nlohmann::ordered_json SaveModelJson(const TfidfModel& tfidf,
                                     const LogisticModel& model) {
  nlohmann::ordered_json doc;
  doc["format"] = "rtdbias.tfidf_logistic";
  doc["version"] = kModelFormatVersion;
  doc["tokenizer"] = {
      {"n", tfidf.tokenizer().n},
      {"keep_internal_apostrophes", tfidf.tokenizer().keep_internal_apostrophes}};
  doc["sublinear"] = tfidf.sublinear();
  doc["vocabulary"] = tfidf.vocabulary();
  doc["idf"] = tfidf.idf();
  doc["weights"] = model.weights;
  doc["bias"] = model.bias;
  doc["l2_lambda"] = model.l2_lambda;
  doc["converged"] = model.converged;
  doc["final_gradient_norm"] = model.final_gradient_norm;
  doc["iterations"] = model.iterations;
  return doc;
}

std::pair<TfidfModel, LogisticModel> LoadModelJson(
    const nlohmann::json& doc) {
  try {
    if (doc.at("format").get<std::string>() != "rtdbias.tfidf_logistic") {
      ThrowInvalidArgument("not a tfidf_logistic model document");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      ThrowInvalidArgument("unsupported model version " + std::to_string(version));
    }
    TokenizerConfig tokenizer;
    tokenizer.n = doc.at("tokenizer").at("n").get<int>();
    tokenizer.keep_internal_apostrophes =
        doc.at("tokenizer").at("keep_internal_apostrophes").get<bool>();
    TfidfModel tfidf(tokenizer, doc.at("vocabulary").get<std::vector<std::string>>(),
                     doc.at("idf").get<std::vector<double>>(),
                     doc.at("sublinear").get<bool>());
    LogisticModel model;
    model.weights = doc.at("weights").get<std::vector<double>>();
    model.bias = doc.at("bias").get<double>();
    model.l2_lambda = doc.at("l2_lambda").get<double>();
    model.converged = doc.at("converged").get<bool>();
    model.final_gradient_norm = doc.at("final_gradient_norm").get<double>();
    model.iterations = doc.at("iterations").get<int>();
    if (model.weights.size() != tfidf.dim()) {
      ThrowInvalidArgument("weights do not match the vocabulary size");
    }
    return {std::move(tfidf), std::move(model)};
  } catch (const nlohmann::json::exception& e) {
    ThrowInvalidArgument(std::string("malformed model document: ") + e.what());
  }
}

std::optional<std::vector<double>> MeanPool(const VectorTable& table,
                                            std::string_view text,
                                            const TokenizerConfig& cfg) {
  std::vector<double> sum(table.dim(), 0.0);
  std::size_t used = 0;
  for (const std::string& token : Tokenize(text, cfg)) {
    const std::vector<double>* v = table.Find(token);
    if (v == nullptr) continue;
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*v)[i];
    ++used;
  }
  if (used == 0) return std::nullopt;
  for (double& x : sum) x /= static_cast<double>(used);
  return sum;
}

double NearestNeighborScore(std::span<const std::vector<double>> train,
                            std::span<const int> labels,
                            std::span<const double> query, std::size_t k) {
  if (train.empty()) ThrowInvalidArgument("empty training set");
  if (train.size() != labels.size()) {
    ThrowInvalidArgument("training vectors and labels differ in length");
  }
  if (k < 1 || k > train.size()) {
    ThrowInvalidArgument("k must lie in [1, training size]");
  }
  ValidateBinary(labels);
  std::vector<std::pair<double, std::size_t>> distances;
  distances.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    const double sim = CosineSimilarity(train[i], query);
    const double distance = std::isnan(sim) ? 2.0 : 1.0 - sim;
    distances.emplace_back(distance, i);
  }
  std::partial_sort(distances.begin(),
                    distances.begin() + static_cast<std::ptrdiff_t>(k),
                    distances.end());
  std::size_t ones = 0;
  for (std::size_t i = 0; i < k; ++i) ones += labels[distances[i].second] == 1;
  return static_cast<double>(ones) / static_cast<double>(k);
}

int NearestNeighborPredict(std::span<const std::vector<double>> train,
                           std::span<const int> labels,
                           std::span<const double> query, std::size_t k) {
  return NearestNeighborScore(train, labels, query, k) >= 0.5 ? 1 : 0;
}

void AggregationParams::Validate() const {
  if (!(c > 0.0)) ThrowInvalidArgument("aggregation parameter c must be positive");
  if (chunk_size == 0) ThrowInvalidArgument("chunk_size must be positive");
}

double AggregateChunkProbability(double p_max, double p_mean, std::size_t n,
                                 const AggregationParams& params) {
  params.Validate();
  if (!(0.0 <= p_mean && p_mean <= p_max && p_max <= 1.0)) {
    ThrowInvalidArgument("need 0 <= p_mean <= p_max <= 1");
  }
  if (n < 1) ThrowInvalidArgument("need at least one subsequence");
  const double weight = static_cast<double>(n) / params.c;
  const double p = (p_max + p_mean * weight) / (1.0 + weight);
  // Rounding can leave the convex combination a hair outside its ends.
  return std::clamp(p, p_mean, p_max);
}

double ChunkedProbability(const TfidfModel& tfidf, const LogisticModel& model,
                          std::string_view text,
                          const AggregationParams& params) {
  params.Validate();
  const std::vector<text::TokenSpan> spans =
      text::FindTokens(text, tfidf.tokenizer().keep_internal_apostrophes);
  std::vector<double> probabilities;
  for (std::size_t start = 0; start < spans.size(); start += params.chunk_size) {
    const std::size_t end = std::min(spans.size(), start + params.chunk_size);
    std::string chunk;
    for (std::size_t i = start; i < end; ++i) {
      if (i > start) chunk.push_back(' ');
      chunk += spans[i].lowered;
    }
    probabilities.push_back(model.PredictProbability(tfidf.Transform(chunk)));
  }
  if (probabilities.empty()) {
    probabilities.push_back(model.PredictProbability(SparseVector{}));
  }
  const double p_max = *std::max_element(probabilities.begin(), probabilities.end());
  const double p_mean =
      std::accumulate(probabilities.begin(), probabilities.end(), 0.0) /
      static_cast<double>(probabilities.size());
  return AggregateChunkProbability(p_max, std::min(p_mean, p_max),
                                   probabilities.size(), params);
}

ConfusionCounts Confusion(std::span<const int> predicted,
                          std::span<const int> truth) {
  if (predicted.size() != truth.size()) {
    ThrowInvalidArgument("prediction and truth lengths differ");
  }
  ValidateBinary(predicted);
  ValidateBinary(truth);
  ConfusionCounts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == 1) {
      predicted[i] == 1 ? ++c.tp : ++c.fn;
    } else {
      predicted[i] == 1 ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

double Mcc(const ConfusionCounts& counts) {
  if (counts.tp < 0 || counts.fp < 0 || counts.tn < 0 || counts.fn < 0) {
    ThrowInvalidArgument("confusion counts must be non-negative");
  }
  if (counts.total() == 0) ThrowInvalidArgument("all confusion counts are zero");
  const auto tp = static_cast<double>(counts.tp);
  const auto fp = static_cast<double>(counts.fp);
  const auto tn = static_cast<double>(counts.tn);
  const auto fn = static_cast<double>(counts.fn);
  const double denominator = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denominator == 0.0) return 0.0;
  return std::clamp((tp * tn - fp * fn) / std::sqrt(denominator), -1.0, 1.0);
}

RocCurve RocAuc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    ThrowInvalidArgument("scores and labels differ in length");
  }
  ValidateBinary(labels);
  const auto positives = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  const double negatives = static_cast<double>(labels.size()) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    ThrowInvalidArgument("ROC needs both labels present");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  RocCurve roc;
  roc.points.emplace_back(0.0, 0.0);
  double tp = 0.0;
  double fp = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    while (i < order.size() && scores[order[i]] == threshold) {
      labels[order[i]] == 1 ? tp += 1.0 : fp += 1.0;
      ++i;
    }
    const auto& [prev_fpr, prev_tpr] = roc.points.back();
    const double fpr = fp / negatives;
    const double tpr = tp / positives;
    roc.auc += (fpr - prev_fpr) * (tpr + prev_tpr) * 0.5;
    roc.points.emplace_back(fpr, tpr);
  }
  return roc;
}

EvalReport Evaluate(std::string task, double trim_level,
                    std::span<const double> probabilities,
                    std::span<const int> truth, double threshold) {
  std::vector<int> predicted;
  predicted.reserve(probabilities.size());
  for (const double p : probabilities) predicted.push_back(p >= threshold ? 1 : 0);
  EvalReport report;
  report.task = std::move(task);
  report.trim_level = trim_level;
  report.counts = Confusion(predicted, truth);
  report.mcc = Mcc(report.counts);
  report.roc = RocAuc(probabilities, truth);
  report.auc = report.roc.auc;
  return report;
}

void WriteEvalCsvHeader(std::ostream& out) {
  out << "task,trim_level,tp,fp,tn,fn,mcc,auc\n";
}

void WriteEvalCsvRow(const EvalReport& report, std::ostream& out) {
  out << fmt::CsvField(report.task) << ',' << fmt::Number(report.trim_level)
      << ',' << report.counts.tp << ',' << report.counts.fp << ','
      << report.counts.tn << ',' << report.counts.fn << ','
      << fmt::Number(report.mcc) << ',' << fmt::Number(report.auc) << '\n';
}

}  // namespace rtdbias
