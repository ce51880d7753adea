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

// rtdbias: measure and trim class-conditional lexical bias in a two-class
// corpus.
//
//   rtdbias synth --n-docs 2000 --out-dir out
//   rtdbias rtd --input out/synthetic.jsonl --out-dir out
//   rtdbias sweep --config sweep.json --input out/synthetic.jsonl --out-dir out
//
// Failures print {"error": {"code": ..., "message": ...}} on stderr and exit
// nonzero.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rtdbias/augment.h"
#include "rtdbias/classify.h"
#include "rtdbias/corpus.h"
#include "rtdbias/divergence.h"
#include "rtdbias/embedbias.h"
#include "rtdbias/error.h"
#include "rtdbias/format.h"
#include "rtdbias/harness.h"
#include "rtdbias/metadivergence.h"
#include "rtdbias/ngrams.h"

namespace rtdbias {
namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::string out_dir = ".";
};

struct CorpusInput {
  std::string path;
  std::string format;  // empty: by extension
  std::vector<std::string> class_names;

  void Register(CLI::App* cmd) {
    cmd->add_option("-i,--input", path, "Corpus file (JSONL or CSV)")->required();
    cmd->add_option("--format", format, "jsonl or csv (default: by extension)")
        ->check(CLI::IsMember({"jsonl", "csv"}));
    cmd->add_option("--class-names", class_names,
                    "Labels used for class A and class B (default: A B)")
        ->expected(2);
  }

  Corpus Load() const {
    IngestOptions options;
    if (class_names.size() == 2) options.class_names = {class_names[0], class_names[1]};
    const CorpusFormat f =
        !format.empty() ? ParseCorpusFormat(format)
        : fs::path(path).extension() == ".csv" ? CorpusFormat::kCsv
                                               : CorpusFormat::kJsonl;
    return Ingest(path, f, options);
  }
};

std::ofstream OpenOutput(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) ThrowIoError("cannot write '" + path.string() + "'");
  return out;
}

ExperimentConfig LoadExperimentConfig(const GlobalOptions& global) {
  ExperimentConfig cfg;
  if (!global.config.empty()) {
    std::ifstream in(global.config);
    if (!in) ThrowIoError("cannot open config '" + global.config + "'");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kParseError,
                  "config '" + global.config + "': " + e.what());
    }
    cfg = ExperimentConfig::FromJson(doc);
  }
  if (global.seed) cfg.SetSeed(*global.seed);
  if (global.alpha) cfg.alpha = *global.alpha;
  cfg.Validate();
  return cfg;
}

ClusterSpec LoadClusters(const std::string& path) {
  if (path.empty()) return ClusterSpec::DefaultGendered();
  std::ifstream in(path);
  if (!in) ThrowIoError("cannot open clusters '" + path + "'");
  try {
    const nlohmann::json doc = nlohmann::json::parse(in);
    ClusterSpec spec{doc.at("cluster_a").get<std::vector<std::string>>(),
                     doc.at("cluster_b").get<std::vector<std::string>>()};
    spec.Validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, "clusters '" + path + "': " + e.what());
  }
}

void PrintJson(const nlohmann::ordered_json& doc) { std::cout << doc.dump(2) << '\n'; }

nlohmann::ordered_json CorpusSummary(const Corpus& corpus) {
  nlohmann::ordered_json doc;
  doc["documents"] = corpus.size();
  doc["class_counts"] = {{corpus.class_name(ClassLabel::kA), corpus.class_count(ClassLabel::kA)},
                         {corpus.class_name(ClassLabel::kB), corpus.class_count(ClassLabel::kB)}};
  return doc;
}

std::vector<double> ParseLevels(const std::string& csv) {
  std::vector<double> levels;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      levels.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      ThrowInvalidArgument("bad trim level '" + item + "'");
    }
  }
  return levels;
}

// Reads eval.csv back for `report`.
struct EvalRow {
  std::string task;
  std::string level;
  std::string mcc;
  std::string auc;
};

std::vector<EvalRow> ReadEvalCsv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowIoError("cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto records = fmt::ParseCsv(buffer.str());
  if (records.empty() || records[0].fields.size() != 8 ||
      records[0].fields[0] != "task") {
    throw ParseError(1, "", "'" + path.string() + "' is not an eval.csv file");
  }
  std::vector<EvalRow> rows;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i].fields;
    if (f.size() != 8) throw ParseError(records[i].line, "", "expected 8 columns");
    rows.push_back({f[0], f[1], f[6], f[7]});
  }
  return rows;
}

}  // namespace

int Main(int argc, char** argv) {
  CLI::App app{"Rank-turbulence divergence bias measurement and trimming"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions global;
  app.add_option("--config", global.config, "Experiment config (JSON)");
  app.add_option("--seed", global.seed, "Base seed for every random draw");
  app.add_option("--alpha", global.alpha, "Rank-turbulence alpha (default 1/3)");
  app.add_option("--out-dir", global.out_dir, "Output directory");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate a corpus and write canonical JSONL");
  CorpusInput ingest_in;
  ingest_in.Register(ingest);
  std::string ingest_output = "corpus.jsonl";
  ingest->add_option("-o,--output", ingest_output, "File name inside --out-dir");
  ingest->callback([&] {
    const Corpus corpus = ingest_in.Load();
    const fs::path out = fs::path(global.out_dir) / ingest_output;
    std::ofstream file = OpenOutput(out);
    EmitJsonl(corpus, file);
    PrintJson(CorpusSummary(corpus));
  });

  // preprocess
  auto* preprocess = app.add_subcommand("preprocess", "Normalize text and filter documents");
  CorpusInput pre_in;
  pre_in.Register(preprocess);
  std::string rules;
  bool all_flags = false;
  std::vector<std::string> doc_types;
  std::optional<std::size_t> min_docs;
  std::string pre_output = "preprocessed.jsonl";
  preprocess->add_option("--rules", rules, "Key-value preprocessing config");
  preprocess->add_flag("--all", all_flags,
                       "Remove numbers, ranges and dates and lowercase");
  preprocess->add_option("--doc-type", doc_types, "Keep only these document types");
  preprocess->add_option("--min-docs-per-group", min_docs,
                         "Keep groups with at least this many documents");
  preprocess->add_option("-o,--output", pre_output, "File name inside --out-dir");
  preprocess->callback([&] {
    PreprocessConfig cfg = rules.empty() ? PreprocessConfig{} : LoadPreprocessConfig(rules);
    if (all_flags) {
      cfg.remove_numbers = cfg.remove_ranges = cfg.remove_dates = cfg.lowercase = true;
    }
    std::optional<std::set<std::string>> types;
    if (!doc_types.empty()) types.emplace(doc_types.begin(), doc_types.end());
    const Corpus corpus = Preprocess(Filter(pre_in.Load(), types, min_docs), cfg);
    std::ofstream file = OpenOutput(fs::path(global.out_dir) / pre_output);
    EmitJsonl(corpus, file);
    PrintJson(CorpusSummary(corpus));
  });

  // rank
  auto* rank = app.add_subcommand("rank", "Per-class n-gram rank tables");
  CorpusInput rank_in;
  rank_in.Register(rank);
  TokenizerConfig rank_tok;
  rank->add_option("--n", rank_tok.n, "n-gram order (1-3)");
  rank->add_flag("--apostrophes", rank_tok.keep_internal_apostrophes,
                 "Keep internal apostrophes inside tokens");
  rank->callback([&] {
    const Corpus corpus = rank_in.Load();
    nlohmann::ordered_json summary;
    for (const ClassLabel label : {ClassLabel::kA, ClassLabel::kB}) {
      const RankDistribution dist = BuildDistribution(corpus, label, rank_tok);
      const std::string name = "rank_" + corpus.class_name(label) + ".tsv";
      std::ofstream file = OpenOutput(fs::path(global.out_dir) / name);
      WriteRankTsv(dist, file);
      summary[corpus.class_name(label)] = {{"file", name},
                                           {"total_count", dist.total_count()},
                                           {"distinct_count", dist.distinct_count()}};
    }
    PrintJson(summary);
  });

  // rtd
  auto* rtd = app.add_subcommand("rtd", "Rank-turbulence divergence between the classes");
  CorpusInput rtd_in;
  rtd_in.Register(rtd);
  TokenizerConfig rtd_tok;
  AllotaxonographOptions allotax;
  rtd->add_option("--n", rtd_tok.n, "n-gram order (1-3)");
  rtd->add_flag("--apostrophes", rtd_tok.keep_internal_apostrophes,
                "Keep internal apostrophes inside tokens");
  rtd->add_option("--bins", allotax.bins, "Histogram bins per axis");
  rtd->add_option("--top", allotax.top_n, "Rows in the top-contribution table");
  rtd->callback([&] {
    const ExperimentConfig cfg = LoadExperimentConfig(global);
    const Corpus corpus = rtd_in.Load();
    const RankDistribution a = BuildDistribution(corpus, ClassLabel::kA, rtd_tok);
    const RankDistribution b = BuildDistribution(corpus, ClassLabel::kB, rtd_tok);
    const DivergenceReport report = ComputeRtd(a, b, DivergenceConfig{cfg.alpha});
    {
      std::ofstream file = OpenOutput(fs::path(global.out_dir) / "divergence.tsv");
      WriteDivergenceTsv(report, file);
    }
    {
      std::ofstream file = OpenOutput(fs::path(global.out_dir) / "allotaxonograph.json");
      file << ExportAllotaxonograph(report, a, b, allotax).dump(2) << '\n';
    }
    nlohmann::ordered_json summary;
    summary["alpha"] = report.alpha;
    summary["total"] = report.total;
    summary["types"] = report.contributions.size();
    summary["balances"] = ExportAllotaxonograph(report, a, b, {1, 0})["balances"];
    PrintJson(summary);
  });

  // trim
  auto* trim = app.add_subcommand("trim", "Remove the most divergent 1-grams at each level");
  CorpusInput trim_in;
  trim_in.Register(trim);
  std::string levels_csv;
  std::string spacing_name = "linear";
  std::size_t ladder_count = 9;
  bool trim_apostrophes = false;
  trim->add_option("--levels", levels_csv, "Comma-separated thresholds in (0,1]");
  trim->add_option("--spacing", spacing_name, "linear or logarithmic ladder")
      ->check(CLI::IsMember({"linear", "log", "logarithmic"}));
  trim->add_option("--count", ladder_count, "Ladder size");
  trim->add_flag("--apostrophes", trim_apostrophes,
                 "Keep internal apostrophes inside tokens");
  trim->callback([&] {
    ExperimentConfig cfg = LoadExperimentConfig(global);
    const Corpus corpus = trim_in.Load();
    TokenizerConfig tok;
    tok.keep_internal_apostrophes = trim_apostrophes;
    const ThresholdSpacing spacing = ParseThresholdSpacing(spacing_name);
    std::vector<double> levels = !levels_csv.empty() ? ParseLevels(levels_csv)
                                 : !cfg.trim_levels.empty()
                                     ? cfg.trim_levels
                                     : ThresholdLadder(spacing, ladder_count);
    const DivergenceReport report =
        ComputeRtd(BuildDistribution(corpus, ClassLabel::kA, tok),
                   BuildDistribution(corpus, ClassLabel::kB, tok),
                   DivergenceConfig{cfg.alpha});
    const TrimPlan plan = PlanTrim(report, levels, spacing);
    const fs::path out_dir = global.out_dir;
    std::vector<LevelLengths> lengths;
    lengths.push_back(
        LevelLengths{0.0, 0, ComputeLengthStats(DocumentLengths(corpus, tok))});
    nlohmann::ordered_json written = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < plan.thresholds.size(); ++i) {
      const TrimmedCorpus trimmed =
          ApplyTrim(corpus, plan.term_sets[i], tok, plan.thresholds[i]);
      const std::string stem = LevelFileStem(plan.thresholds[i]);
      {
        std::ofstream file = OpenOutput(out_dir / (stem + ".jsonl"));
        EmitJsonl(trimmed.corpus, file);
      }
      {
        std::ofstream file = OpenOutput(out_dir / ("lengths_" + stem.substr(8) + ".csv"));
        WriteLengthHistogramCsv(trimmed.length_stats, file);
      }
      lengths.push_back(
          LevelLengths{trimmed.level, trimmed.removed_terms, trimmed.length_stats});
      written.push_back({{"level", trimmed.level},
                         {"file", stem + ".jsonl"},
                         {"removed_terms", trimmed.removed_terms},
                         {"mean_length", trimmed.length_stats.mean}});
    }
    {
      std::ofstream file = OpenOutput(out_dir / "lengths_summary.csv");
      WriteLengthSummaryCsv(lengths, file);
    }
    PrintJson({{"levels", written}});
  });

  // embed-bias
  auto* embed = app.add_subcommand("embed-bias", "Embedding-space bias of corpus 1-grams");
  CorpusInput embed_in;
  embed_in.Register(embed);
  std::string vectors_path;
  std::string clusters_path;
  int hist_bins = 20;
  embed->add_option("--vectors", vectors_path, "Word vectors (term v1 ... vd)")->required();
  embed->add_option("--clusters", clusters_path,
                    "JSON {\"cluster_a\": [...], \"cluster_b\": [...]}");
  embed->add_option("--bins", hist_bins, "Histogram bins");
  embed->callback([&] {
    const Corpus corpus = embed_in.Load();
    const VectorTable table = LoadVectors(vectors_path);
    NgramCounter counter(TokenizerConfig{});
    for (const Document& doc : corpus.documents()) counter.Add(doc.text);
    const RankDistribution all = BuildDistribution(counter);
    std::vector<std::string> terms;
    std::unordered_map<std::string, double> weights;
    for (const auto& e : all.entries()) {
      terms.push_back(e.ngram);
      weights[e.ngram] = static_cast<double>(e.count);
    }
    const BiasScores scores = ScoreBias(table, terms, LoadClusters(clusters_path));
    {
      std::ofstream file = OpenOutput(fs::path(global.out_dir) / "bias.tsv");
      WriteBiasTsv(scores, file);
    }
    {
      std::ofstream file = OpenOutput(fs::path(global.out_dir) / "bias_histogram.csv");
      WriteBiasHistogramCsv(scores, weights, hist_bins, file);
    }
    PrintJson({{"scored", scores.terms.size()},
               {"missing_from_table", scores.missing_from_table},
               {"zero_norm", scores.zero_norm},
               {"duplicate_vectors", table.duplicate_count()}});
  });

  // rtd2
  auto* rtd2 = app.add_subcommand("rtd2", "Divergence between embedding and empirical bias ranks");
  CorpusInput rtd2_in;
  rtd2_in.Register(rtd2);
  std::string rtd2_vectors;
  std::string rtd2_clusters;
  rtd2->add_option("--vectors", rtd2_vectors, "Word vectors (term v1 ... vd)")->required();
  rtd2->add_option("--clusters", rtd2_clusters,
                   "JSON {\"cluster_a\": [...], \"cluster_b\": [...]}");
  rtd2->callback([&] {
    const ExperimentConfig cfg = LoadExperimentConfig(global);
    const DivergenceConfig div{cfg.alpha};
    const Corpus corpus = rtd2_in.Load();
    const RankDistribution a = BuildDistribution(corpus, ClassLabel::kA, {});
    const RankDistribution b = BuildDistribution(corpus, ClassLabel::kB, {});
    const DivergenceReport report = ComputeRtd(a, b, div);
    std::vector<std::string> terms;
    for (const Contribution& c : report.contributions) terms.push_back(c.ngram);
    const VectorTable table = LoadVectors(rtd2_vectors);
    const BiasScores scores = ScoreBias(table, terms, LoadClusters(rtd2_clusters));
    const MetaReport meta =
        RtdSquared(EmbeddingBiasRanks(scores, div), EmpiricalBiasRanks(report), div);
    std::ofstream file = OpenOutput(fs::path(global.out_dir) / "rtd2.tsv");
    WriteMetaTsv(meta, file);
    PrintJson({{"shared_terms", meta.rows.size()},
               {"embedding_only", meta.only_in_first},
               {"empirical_only", meta.only_in_second},
               {"total", meta.total}});
  });

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic two-class corpus");
  SyntheticSpec spec;
  std::size_t class_term_count = 10;
  std::size_t task_term_count = 10;
  std::string synth_output = "synthetic.jsonl";
  synth->add_option("--n-docs", spec.n_docs, "Number of documents");
  synth->add_option("--class-terms", class_term_count, "Planted class terms");
  synth->add_option("--task-terms", task_term_count, "Planted task terms");
  synth->add_option("--vocab-size", spec.vocab_size, "Background vocabulary size");
  synth->add_option("--task-label", spec.task_label, "Task label name");
  synth->add_option("--min-length", spec.min_length, "Shortest document (tokens)");
  synth->add_option("--max-length", spec.max_length, "Longest document (tokens)");
  synth->add_option("--class-rate", spec.class_term_rate, "Class term rate per token");
  synth->add_option("--task-rate", spec.task_term_rate, "Task term rate per token");
  synth->add_option("-o,--output", synth_output, "File name inside --out-dir");
  synth->callback([&] {
    spec.seed = global.seed.value_or(0);
    spec.class_terms = PlantedTerms("qcls", class_term_count);
    spec.task_terms = PlantedTerms("qtsk", task_term_count);
    const Corpus corpus = GenerateSyntheticCorpus(spec);
    std::ofstream file = OpenOutput(fs::path(global.out_dir) / synth_output);
    EmitJsonl(corpus, file);
    nlohmann::ordered_json summary = CorpusSummary(corpus);
    summary["class_terms"] = spec.class_terms;
    summary["task_terms"] = spec.task_terms;
    PrintJson(summary);
  });

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Classifier degradation across trim levels");
  CorpusInput sweep_in;
  sweep_in.Register(sweep);
  sweep->callback([&] {
    ExperimentConfig cfg = LoadExperimentConfig(global);
    if (cfg.tasks.empty()) {
      cfg.tasks.push_back({"class", TaskKind::kClassLabel, ""});
    }
    const SweepResult result = RunSweep(cfg, sweep_in.Load());
    WriteSweepOutputs(result, global.out_dir);
    nlohmann::ordered_json summary = nlohmann::ordered_json::array();
    for (const TaskSummary& s : result.summary) {
      summary.push_back({{"task", s.task},
                         {"baseline_mcc", s.baseline_mcc},
                         {"mcc_per_level", s.mcc_per_level},
                         {"relative_loss", s.relative_loss
                                               ? nlohmann::ordered_json(*s.relative_loss)
                                               : nlohmann::ordered_json(nullptr)}});
    }
    PrintJson({{"evaluations", result.evaluations.size()},
               {"skipped", result.skipped.size()},
               {"summary", summary}});
  });

  // report
  auto* report = app.add_subcommand("report", "Print the MCC/AUC table of a sweep");
  report->callback([&] {
    const std::vector<EvalRow> rows = ReadEvalCsv(fs::path(global.out_dir) / "eval.csv");
    std::cout << std::left << std::setw(20) << "task" << std::setw(12) << "level"
              << std::setw(24) << "mcc" << "auc\n";
    for (const EvalRow& r : rows) {
      std::cout << std::setw(20) << r.task << std::setw(12) << r.level << std::setw(24)
                << r.mcc << r.auc << '\n';
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    nlohmann::ordered_json error;
    error["error"] = {{"code", "usage"}, {"message", e.what()}};
    std::cerr << error.dump() << '\n';
    return 2;
  } catch (const Error& e) {
    nlohmann::ordered_json error;
    error["error"] = {{"code", ErrorCodeName(e.code())}, {"message", e.what()}};
    std::cerr << error.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    nlohmann::ordered_json error;
    error["error"] = {{"code", "internal"}, {"message", e.what()}};
    std::cerr << error.dump() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace rtdbias

int main(int argc, char** argv) { return rtdbias::Main(argc, argv); }
