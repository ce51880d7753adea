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

#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "rtdbias/augment.h"
#include "rtdbias/divergence.h"
#include "rtdbias/harness.h"
#include "rtdbias/ngrams.h"

namespace rtdbias {
namespace {

Corpus SyntheticCorpus(std::size_t docs) {
  SyntheticSpec spec;
  spec.n_docs = docs;
  spec.class_terms = PlantedTerms("qcls", 10);
  spec.task_terms = PlantedTerms("qtsk", 10);
  return GenerateSyntheticCorpus(spec);
}

void BM_Tokenize(benchmark::State& state) {
  const Corpus corpus = SyntheticCorpus(200);
  TokenizerConfig cfg;
  cfg.n = static_cast<int>(state.range(0));
  std::size_t bytes = 0;
  for (const Document& d : corpus.documents()) bytes += d.text.size();
  for (auto _ : state) {
    for (const Document& d : corpus.documents()) {
      benchmark::DoNotOptimize(Tokenize(d.text, cfg));
    }
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * bytes));
}
BENCHMARK(BM_Tokenize)->Arg(1)->Arg(2)->Arg(3);

void BM_BuildDistribution(benchmark::State& state) {
  const Corpus corpus = SyntheticCorpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(BuildDistribution(corpus, ClassLabel::kA, {}));
  }
}
BENCHMARK(BM_BuildDistribution)->Arg(500)->Arg(5000);

void BM_Rtd(benchmark::State& state) {
  const Corpus corpus = SyntheticCorpus(static_cast<std::size_t>(state.range(0)));
  const RankDistribution a = BuildDistribution(corpus, ClassLabel::kA, {});
  const RankDistribution b = BuildDistribution(corpus, ClassLabel::kB, {});
  for (auto _ : state) benchmark::DoNotOptimize(ComputeRtd(a, b));
  state.counters["types"] = static_cast<double>(a.distinct_count() + b.distinct_count());
}
BENCHMARK(BM_Rtd)->Arg(500)->Arg(5000);

void BM_ApplyTrim(benchmark::State& state) {
  const Corpus corpus = SyntheticCorpus(2000);
  const DivergenceReport report =
      ComputeRtd(BuildDistribution(corpus, ClassLabel::kA, {}),
                 BuildDistribution(corpus, ClassLabel::kB, {}));
  const std::vector<double> level{state.range(0) / 10.0};
  const TrimPlan plan = PlanTrim(report, level);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ApplyTrim(corpus, plan.term_sets[0], {}));
  }
  state.counters["terms"] = static_cast<double>(plan.term_sets[0].size());
}
BENCHMARK(BM_ApplyTrim)->Arg(1)->Arg(5)->Arg(9);

}  // namespace
}  // namespace rtdbias

BENCHMARK_MAIN();
