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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <unordered_set>
#include <vector>

#include "rng.h"
#include "rtdbias/error.h"
#include "rtdbias/harness.h"

namespace rtdbias {
namespace {

constexpr std::string_view kConsonants = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";

}  // namespace

std::vector<std::string> PlantedTerms(const std::string& prefix,
                                      std::size_t count) {
  std::vector<std::string> terms;
  terms.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Base-26 digits without leading zeros: a..z, ba, bb, ...
    std::string suffix;
    std::size_t v = i;
    do {
      suffix.insert(suffix.begin(), static_cast<char>('a' + v % 26));
      v /= 26;
    } while (v > 0);
    terms.push_back(prefix + suffix);
  }
  return terms;
}

std::string BackgroundWord(std::size_t index) {
  const std::size_t base = kConsonants.size() * kVowels.size();
  std::string word;
  std::size_t v = index;
  for (int s = 0; s < 3; ++s) {
    const std::size_t syllable = v % base;
    v /= base;
    word.push_back(kConsonants[syllable / kVowels.size()]);
    word.push_back(kVowels[syllable % kVowels.size()]);
  }
  while (v > 0) {  // beyond 70^3 words
    const std::size_t syllable = v % base;
    v /= base;
    word.push_back(kConsonants[syllable / kVowels.size()]);
    word.push_back(kVowels[syllable % kVowels.size()]);
  }
  return word;
}

Corpus GenerateSyntheticCorpus(const SyntheticSpec& spec) {
  if (spec.vocab_size == 0) ThrowInvalidArgument("vocab_size must be positive");
  if (spec.min_length == 0 || spec.min_length > spec.max_length) {
    ThrowInvalidArgument("need 0 < min_length <= max_length");
  }
  for (const double rate : {spec.class_term_rate, spec.task_term_rate,
                            spec.task_prevalence}) {
    if (!(rate >= 0.0 && rate <= 1.0)) {
      ThrowInvalidArgument("rates and prevalence must lie in [0, 1]");
    }
  }
  if (spec.class_term_rate + spec.task_term_rate > 1.0) {
    ThrowInvalidArgument("class_term_rate + task_term_rate must not exceed 1");
  }
  if (!(spec.zipf_exponent >= 0.0)) ThrowInvalidArgument("zipf_exponent must be >= 0");

  std::vector<std::string> background;
  background.reserve(spec.vocab_size);
  std::unordered_set<std::string> background_set;
  for (std::size_t i = 0; i < spec.vocab_size; ++i) {
    background.push_back(BackgroundWord(i));
    background_set.insert(background.back());
  }
  std::unordered_set<std::string> planted;
  for (const auto* terms : {&spec.class_terms, &spec.task_terms}) {
    for (const std::string& term : *terms) {
      if (term.empty()) ThrowInvalidArgument("planted terms must be non-empty");
      if (!planted.insert(term).second) {
        ThrowInvalidArgument("planted term '" + term + "' is listed twice");
      }
      if (background_set.contains(term)) {
        ThrowInvalidArgument("planted term '" + term +
                             "' collides with the background vocabulary");
      }
    }
  }

  std::vector<double> cumulative(spec.vocab_size);
  double total = 0.0;
  for (std::size_t r = 0; r < spec.vocab_size; ++r) {
    total += std::pow(static_cast<double>(r + 1), -spec.zipf_exponent);
    cumulative[r] = total;
  }

  const std::size_t half = (spec.class_terms.size() + 1) / 2;
  const std::vector<std::string> a_terms(spec.class_terms.begin(),
                                         spec.class_terms.begin() + half);
  const std::vector<std::string> b_terms(spec.class_terms.begin() + half,
                                         spec.class_terms.end());

  internal::Rng rng(spec.seed);
  const int width = static_cast<int>(std::to_string(spec.n_docs).size());
  std::vector<Document> documents;
  documents.reserve(spec.n_docs);
  for (std::size_t d = 0; d < spec.n_docs; ++d) {
    Document doc;
    char id[32];
    std::snprintf(id, sizeof(id), "syn%0*zu", width, d);
    doc.id = id;
    doc.class_label = rng.Bernoulli(0.5) ? ClassLabel::kA : ClassLabel::kB;
    const bool positive = rng.Bernoulli(spec.task_prevalence);
    if (positive) doc.task_labels.push_back(spec.task_label);
    const std::vector<std::string>& class_terms =
        doc.class_label == ClassLabel::kA ? a_terms : b_terms;

    const std::size_t length =
        spec.min_length +
        static_cast<std::size_t>(rng.Below(spec.max_length - spec.min_length + 1));
    for (std::size_t t = 0; t < length; ++t) {
      const double u = rng.Uniform();
      const std::string* word;
      if (u < spec.class_term_rate && !class_terms.empty()) {
        word = &class_terms[rng.Below(class_terms.size())];
      } else if (positive && u >= spec.class_term_rate &&
                 u < spec.class_term_rate + spec.task_term_rate &&
                 !spec.task_terms.empty()) {
        word = &spec.task_terms[rng.Below(spec.task_terms.size())];
      } else {
        const double target = rng.Uniform() * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
        const auto r = std::min<std::size_t>(
            static_cast<std::size_t>(it - cumulative.begin()), spec.vocab_size - 1);
        word = &background[r];
      }
      if (t > 0) doc.text.push_back(' ');
      doc.text += *word;
    }
    documents.push_back(std::move(doc));
  }
  return Corpus(std::move(documents));
}

}  // namespace rtdbias
