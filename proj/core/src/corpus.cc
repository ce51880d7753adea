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

#include "rtdbias/corpus.h"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include <nlohmann/json.hpp>

#include "rtdbias/error.h"
#include "rtdbias/format.h"
#include "rtdbias/text.h"

namespace rtdbias {
namespace {

constexpr std::array<std::string_view, 6> kColumns = {
    "id", "text", "class_label", "task_labels", "group_id", "doc_type"};

ClassLabel ParseClassLabel(std::string_view value,
                           const Corpus::ClassNames& names, std::size_t line) {
  if (value == names[0]) return ClassLabel::kA;
  if (value == names[1]) return ClassLabel::kB;
  throw ParseError(line, "class_label",
                   "expected '" + names[0] + "' or '" + names[1] +
                       "', got '" + std::string(value) + "'");
}

std::ifstream OpenInput(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowIoError("cannot open '" + path.string() + "'");
  return in;
}

std::string ReadAll(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> SplitSemicolons(std::string_view s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t next = s.find(';', start);
    out.emplace_back(s.substr(start, next - start));
    if (next == std::string_view::npos) break;
    start = next + 1;
  }
  return out;
}

bool IsAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
         c == '\v';
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && IsAsciiSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsAsciiSpace(s.back())) s.remove_suffix(1);
  return s;
}

bool ParseBool(std::string_view value, std::size_t line,
               const std::string& key) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") {
    return true;
  }
  if (value == "false" || value == "0" || value == "no" || value == "off") {
    return false;
  }
  throw ParseError(line, key, "expected a boolean, got '" +
                                  std::string(value) + "'");
}

// Word characters for abbreviation boundaries: ASCII alphanumerics and any
// non-ASCII byte.
bool IsWordByte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') ||
         (u >= 'A' && u <= 'Z');
}

std::string ExpandAbbreviations(
    std::string_view s, const std::vector<std::pair<std::string, std::string>>&
                            longest_first) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    const bool at_boundary = pos == 0 || !IsWordByte(s[pos - 1]);
    bool replaced = false;
    if (at_boundary) {
      for (const auto& [key, value] : longest_first) {
        if (s.compare(pos, key.size(), key) != 0) continue;
        const std::size_t end = pos + key.size();
        if (end < s.size() && IsWordByte(s[end])) continue;
        out += value;
        pos = end;
        replaced = true;
        break;
      }
    }
    if (!replaced) out.push_back(s[pos++]);
  }
  return out;
}

const std::regex& DatePattern() {
  static const std::regex pattern(
      R"(\b(\d{1,2}/\d{1,2}/\d{4}|\d{4}-\d{1,2}-\d{1,2}|)"
      R"((jan(uary)?|feb(ruary)?|mar(ch)?|apr(il)?|may|june?|july?|aug(ust)?|)"
      R"(sep(t(ember)?)?|oct(ober)?|nov(ember)?|dec(ember)?)\.?\s+\d{1,2},?\s+\d{4})\b)",
      std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
  return pattern;
}

const std::regex& RangePattern() {
  static const std::regex pattern(R"(\d+(\.\d+)?\s*-\s*\d+(\.\d+)?)",
                                  std::regex::ECMAScript |
                                      std::regex::optimize);
  return pattern;
}

const std::regex& NumberPattern() {
  static const std::regex pattern(R"(\d+(\.\d+)?)", std::regex::ECMAScript |
                                                        std::regex::optimize);
  return pattern;
}

bool HasAsciiDigit(std::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

bool Document::HasTaskLabel(std::string_view label) const {
  return std::find(task_labels.begin(), task_labels.end(), label) !=
         task_labels.end();
}

Corpus::Corpus(std::vector<Document> documents, ClassNames class_names)
    : documents_(std::move(documents)), class_names_(std::move(class_names)) {
  if (class_names_[0].empty() || class_names_[1].empty() ||
      class_names_[0] == class_names_[1]) {
    ThrowInvalidArgument("class names must be non-empty and distinct");
  }
  std::unordered_set<std::string_view> seen;
  seen.reserve(documents_.size());
  for (const Document& doc : documents_) {
    if (doc.id.empty()) ThrowInvalidArgument("document id must be non-empty");
    if (!seen.insert(doc.id).second) {
      ThrowInvalidArgument("duplicate document id '" + doc.id + "'");
    }
    ++class_counts_[ClassIndex(doc.class_label)];
  }
}

CorpusFormat ParseCorpusFormat(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::kJsonl;
  if (name == "csv") return CorpusFormat::kCsv;
  ThrowInvalidArgument("unknown corpus format '" + std::string(name) +
                       "' (expected jsonl or csv)");
}

Corpus Ingest(const std::filesystem::path& path, CorpusFormat format,
              const IngestOptions& options) {
  std::ifstream in = OpenInput(path);
  return format == CorpusFormat::kJsonl ? IngestJsonl(in, options)
                                        : IngestCsv(in, options);
}

Corpus IngestJsonl(std::istream& in, const IngestOptions& options) {
  std::vector<Document> documents;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_no, "", std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object()) {
      throw ParseError(line_no, "", "record is not a JSON object");
    }
    auto required_string = [&](const char* key) {
      const auto it = record.find(key);
      if (it == record.end() || it->is_null()) {
        throw ParseError(line_no, key, "missing");
      }
      if (!it->is_string()) throw ParseError(line_no, key, "not a string");
      return it->get<std::string>();
    };
    auto optional_string = [&](const char* key) -> std::optional<std::string> {
      const auto it = record.find(key);
      if (it == record.end() || it->is_null()) return std::nullopt;
      if (!it->is_string()) throw ParseError(line_no, key, "not a string");
      return it->get<std::string>();
    };

    Document doc;
    doc.id = required_string("id");
    if (doc.id.empty()) throw ParseError(line_no, "id", "empty");
    doc.text = text::NormalizeNfc(required_string("text"));
    doc.class_label = ParseClassLabel(required_string("class_label"),
                                      options.class_names, line_no);
    if (const auto it = record.find("task_labels");
        it != record.end() && !it->is_null()) {
      if (!it->is_array()) throw ParseError(line_no, "task_labels", "not an array");
      for (const auto& label : *it) {
        if (!label.is_string()) {
          throw ParseError(line_no, "task_labels", "element is not a string");
        }
        doc.task_labels.push_back(label.get<std::string>());
      }
    }
    doc.group_id = optional_string("group_id");
    doc.doc_type = optional_string("doc_type");
    if (!ids.insert(doc.id).second) {
      throw ParseError(line_no, "id", "duplicate id '" + doc.id + "'");
    }
    documents.push_back(std::move(doc));
  }
  return Corpus(std::move(documents), options.class_names);
}

Corpus IngestCsv(std::istream& in, const IngestOptions& options) {
  const std::vector<fmt::CsvRecord> records = fmt::ParseCsv(ReadAll(in));
  if (records.empty()) return Corpus({}, options.class_names);

  std::unordered_map<std::string, std::size_t> column;
  const fmt::CsvRecord& header = records.front();
  for (std::size_t i = 0; i < header.fields.size(); ++i) {
    column.emplace(std::string(Trim(header.fields[i])), i);
  }
  for (const char* required : {"id", "text", "class_label"}) {
    if (!column.contains(required)) {
      throw ParseError(header.line, required, "missing column in header");
    }
  }

  std::vector<Document> documents;
  std::unordered_set<std::string> ids;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const fmt::CsvRecord& record = records[r];
    auto field = [&](std::string_view name) -> std::optional<std::string> {
      const auto it = column.find(std::string(name));
      if (it == column.end()) return std::nullopt;
      if (it->second >= record.fields.size()) {
        throw ParseError(record.line, std::string(name), "missing");
      }
      return record.fields[it->second];
    };
    auto non_empty = [](std::optional<std::string> v) {
      return v && !v->empty() ? v : std::nullopt;
    };

    Document doc;
    doc.id = *field("id");
    if (doc.id.empty()) throw ParseError(record.line, "id", "empty");
    doc.text = text::NormalizeNfc(*field("text"));
    const std::string label = *field("class_label");
    if (label.empty()) throw ParseError(record.line, "class_label", "missing");
    doc.class_label = ParseClassLabel(label, options.class_names, record.line);
    if (const auto labels = field("task_labels")) {
      doc.task_labels = SplitSemicolons(*labels);
    }
    doc.group_id = non_empty(field("group_id"));
    doc.doc_type = non_empty(field("doc_type"));
    if (!ids.insert(doc.id).second) {
      throw ParseError(record.line, "id", "duplicate id '" + doc.id + "'");
    }
    documents.push_back(std::move(doc));
  }
  return Corpus(std::move(documents), options.class_names);
}

void EmitJsonl(const Corpus& corpus, std::ostream& out) {
  for (const Document& doc : corpus.documents()) {
    nlohmann::ordered_json record;
    record["id"] = doc.id;
    record["text"] = doc.text;
    record["class_label"] = corpus.class_name(doc.class_label);
    record["task_labels"] = doc.task_labels;
    if (doc.group_id) record["group_id"] = *doc.group_id;
    if (doc.doc_type) record["doc_type"] = *doc.doc_type;
    out << record.dump() << '\n';
  }
}

void EmitJsonl(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) ThrowIoError("cannot write '" + path.string() + "'");
  EmitJsonl(corpus, out);
}

void EmitCsv(const Corpus& corpus, std::ostream& out) {
  out << "id,text,class_label,task_labels,group_id,doc_type\n";
  for (const Document& doc : corpus.documents()) {
    std::string labels;
    for (std::size_t i = 0; i < doc.task_labels.size(); ++i) {
      if (i > 0) labels.push_back(';');
      labels += doc.task_labels[i];
    }
    out << fmt::Join({fmt::CsvField(doc.id), fmt::CsvField(doc.text),
                      fmt::CsvField(corpus.class_name(doc.class_label)),
                      fmt::CsvField(labels),
                      fmt::CsvField(doc.group_id.value_or("")),
                      fmt::CsvField(doc.doc_type.value_or(""))},
                     ',')
        << '\n';
  }
}

PreprocessConfig PreprocessConfig::AllFlags() {
  PreprocessConfig cfg;
  cfg.remove_numbers = true;
  cfg.remove_ranges = true;
  cfg.remove_dates = true;
  cfg.lowercase = true;
  return cfg;
}

PreprocessConfig LoadPreprocessConfig(std::istream& in) {
  PreprocessConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (Trim(view).empty() || Trim(view).front() == '#') continue;
    const std::size_t eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(line_no, "", "expected 'key = value'");
    }
    const std::string key(Trim(view.substr(0, eq)));
    std::string_view raw_value = view.substr(eq + 1);
    if (!raw_value.empty() && raw_value.front() == ' ') raw_value.remove_prefix(1);
    const std::string_view value = Trim(raw_value);
    if (key == "remove_numbers") {
      cfg.remove_numbers = ParseBool(value, line_no, key);
    } else if (key == "remove_ranges") {
      cfg.remove_ranges = ParseBool(value, line_no, key);
    } else if (key == "remove_dates") {
      cfg.remove_dates = ParseBool(value, line_no, key);
    } else if (key == "lowercase") {
      cfg.lowercase = ParseBool(value, line_no, key);
    } else if (key == "strip_chars") {
      for (std::string& cp : text::CodePoints(value)) {
        cfg.strip_chars.insert(std::move(cp));
      }
    } else if (key.starts_with("abbrev.")) {
      const std::string abbreviation = key.substr(7);
      if (abbreviation.empty()) {
        throw ParseError(line_no, key, "empty abbreviation");
      }
      cfg.abbreviation_map[abbreviation] = std::string(value);
    } else {
      throw ParseError(line_no, key, "unknown key");
    }
  }
  return cfg;
}

PreprocessConfig LoadPreprocessConfig(const std::filesystem::path& path) {
  std::ifstream in = OpenInput(path);
  return LoadPreprocessConfig(in);
}

std::string PreprocessText(std::string_view input,
                           const PreprocessConfig& cfg) {
  const bool rewrites = cfg.remove_numbers || cfg.remove_ranges ||
                        cfg.remove_dates || !cfg.abbreviation_map.empty() ||
                        !cfg.strip_chars.empty();
  std::string s = cfg.lowercase ? text::Lowercase(input) : std::string(input);
  if (!rewrites) return s;

  if (!cfg.abbreviation_map.empty()) {
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& [key, value] : cfg.abbreviation_map) {
      if (key.empty()) ThrowInvalidArgument("abbreviation keys must be non-empty");
      entries.emplace_back(cfg.lowercase ? text::Lowercase(key) : key, value);
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) {
                       return a.first.size() > b.first.size();
                     });
    s = ExpandAbbreviations(s, entries);
    if (cfg.lowercase) s = text::Lowercase(s);
  }
  if (!cfg.strip_chars.empty()) {
    std::string kept;
    kept.reserve(s.size());
    for (std::string& cp : text::CodePoints(s)) {
      if (!cfg.strip_chars.contains(cp)) kept += cp;
    }
    s = std::move(kept);
  }
  if (HasAsciiDigit(s)) {
    if (cfg.remove_dates) s = std::regex_replace(s, DatePattern(), " ");
    if (cfg.remove_ranges) s = std::regex_replace(s, RangePattern(), " ");
    if (cfg.remove_numbers) s = std::regex_replace(s, NumberPattern(), " ");
  }
  return text::CollapseWhitespace(s);
}

Corpus Preprocess(const Corpus& corpus, const PreprocessConfig& cfg) {
  std::vector<Document> documents = corpus.documents();
  for (Document& doc : documents) doc.text = PreprocessText(doc.text, cfg);
  return corpus.WithDocuments(std::move(documents));
}

Corpus Filter(const Corpus& corpus,
              const std::optional<std::set<std::string>>& doc_types,
              std::optional<std::size_t> min_docs_per_group) {
  if (min_docs_per_group && *min_docs_per_group < 1) {
    ThrowInvalidArgument("min_docs_per_group must be >= 1");
  }
  if (!doc_types && !min_docs_per_group) return corpus;

  std::unordered_map<std::string, std::size_t> group_sizes;
  if (min_docs_per_group) {
    for (const Document& doc : corpus.documents()) {
      if (doc.group_id) ++group_sizes[*doc.group_id];
    }
  }
  std::vector<Document> kept;
  for (const Document& doc : corpus.documents()) {
    if (doc_types && (!doc.doc_type || !doc_types->contains(*doc.doc_type))) {
      continue;
    }
    if (min_docs_per_group) {
      const std::size_t size = doc.group_id ? group_sizes[*doc.group_id] : 1;
      if (size < *min_docs_per_group) continue;
    }
    kept.push_back(doc);
  }
  return corpus.WithDocuments(std::move(kept));
}

}  // namespace rtdbias
