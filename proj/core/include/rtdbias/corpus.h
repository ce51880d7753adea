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

#ifndef RTDBIAS_CORPUS_H_
#define RTDBIAS_CORPUS_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rtdbias {

// The protected attribute splitting the corpus into two classes.
enum class ClassLabel { kA = 0, kB = 1 };

constexpr std::size_t ClassIndex(ClassLabel label) {
  return static_cast<std::size_t>(label);
}
constexpr ClassLabel OtherClass(ClassLabel label) {
  return label == ClassLabel::kA ? ClassLabel::kB : ClassLabel::kA;
}

struct Document {
  std::string id;
  std::string text;
  ClassLabel class_label = ClassLabel::kA;
  // Auxiliary labels such as diagnosis codes, in input order.
  std::vector<std::string> task_labels;
  std::optional<std::string> group_id;
  std::optional<std::string> doc_type;

  bool HasTaskLabel(std::string_view label) const;

  friend bool operator==(const Document&, const Document&) = default;
};

// An immutable, ordered collection of labeled documents. Document ids are
// unique; construction throws otherwise.
class Corpus {
 public:
  // Names written for class A and class B in the external formats.
  using ClassNames = std::array<std::string, 2>;
  static ClassNames DefaultClassNames() { return {"A", "B"}; }

  Corpus() : Corpus(std::vector<Document>{}) {}
  explicit Corpus(std::vector<Document> documents,
                  ClassNames class_names = DefaultClassNames());

  const std::vector<Document>& documents() const { return documents_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }
  const Document& operator[](std::size_t i) const { return documents_[i]; }

  std::size_t class_count(ClassLabel label) const {
    return class_counts_[ClassIndex(label)];
  }
  const ClassNames& class_names() const { return class_names_; }
  const std::string& class_name(ClassLabel label) const {
    return class_names_[ClassIndex(label)];
  }

  // Same class names, different documents.
  Corpus WithDocuments(std::vector<Document> documents) const {
    return Corpus(std::move(documents), class_names_);
  }

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::vector<Document> documents_;
  std::array<std::size_t, 2> class_counts_{0, 0};
  ClassNames class_names_;
};

enum class CorpusFormat { kJsonl, kCsv };

// Parses "jsonl" or "csv".
CorpusFormat ParseCorpusFormat(std::string_view name);

struct IngestOptions {
  Corpus::ClassNames class_names = Corpus::DefaultClassNames();
};

// Reads one Document per record, preserving input order. Text is NFC
// normalized. Malformed records throw ParseError naming the line and field;
// duplicate ids also throw ParseError.
Corpus Ingest(const std::filesystem::path& path, CorpusFormat format,
              const IngestOptions& options = {});
Corpus IngestJsonl(std::istream& in, const IngestOptions& options = {});
Corpus IngestCsv(std::istream& in, const IngestOptions& options = {});

// Canonical JSONL: keys in the order id, text, class_label, task_labels,
// group_id, doc_type; absent optional fields are omitted.
void EmitJsonl(const Corpus& corpus, std::ostream& out);
void EmitJsonl(const Corpus& corpus, const std::filesystem::path& path);
void EmitCsv(const Corpus& corpus, std::ostream& out);

struct PreprocessConfig {
  bool remove_numbers = false;
  bool remove_ranges = false;
  bool remove_dates = false;
  // Whole-word replacements, applied after case folding (keys are folded
  // too when `lowercase` is set).
  std::map<std::string, std::string> abbreviation_map;
  // Code points (UTF-8 encoded) deleted from the text.
  std::set<std::string> strip_chars;
  bool lowercase = false;

  // Every flag on, nothing else configured.
  static PreprocessConfig AllFlags();
};

// Reads `key = value` lines; '#' starts a comment. Recognized keys:
// remove_numbers, remove_ranges, remove_dates, lowercase (true/false),
// strip_chars (the characters to remove, taken literally) and
// abbrev.<short> = <expansion>.
PreprocessConfig LoadPreprocessConfig(std::istream& in);
PreprocessConfig LoadPreprocessConfig(const std::filesystem::path& path);

// Normalizes one string. Dates, ranges and numbers are each replaced by a
// single space and whitespace is then collapsed, so the result has no
// leading, trailing or doubled spaces whenever any rule fired.
std::string PreprocessText(std::string_view text, const PreprocessConfig& cfg);

// Applies PreprocessText to every document; labels are untouched.
Corpus Preprocess(const Corpus& corpus, const PreprocessConfig& cfg);

// Keeps documents whose doc_type is in `doc_types` (when given) and whose
// group has at least `min_docs_per_group` documents in the input (when
// given; documents without a group_id count as singleton groups).
Corpus Filter(const Corpus& corpus,
              const std::optional<std::set<std::string>>& doc_types,
              std::optional<std::size_t> min_docs_per_group);

}  // namespace rtdbias

#endif  // RTDBIAS_CORPUS_H_
