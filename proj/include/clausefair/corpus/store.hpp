// Copyright 2026 The Clausefair Authors.
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

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "clausefair/corpus/document.hpp"
#include "clausefair/corpus/split.hpp"
#include "clausefair/labeled_example.hpp"

namespace clausefair::corpus {

enum class ExportFormat { JsonLines, Csv };

// One row of an exported dataset: a sentence joined with its label, if any.
// Synthetic examples have no backing sentence and carry empty doc_id and
// section_path.
struct DatasetRecord {
  std::string sentence_id;
  std::string doc_id;
  std::string section_path;
  int position = 0;
  std::string text;
  std::optional<LabeledExample> example;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

// File-backed sentence store rooted at a directory. Every mutation is
// appended to a JSON-lines journal and flushed to disk before returning.
// Writers are serialized; readers may run concurrently.
//
//   <root>/documents.jsonl   ContractDocument per line
//   <root>/sentences.jsonl   Sentence per line
//   <root>/labels.jsonl      LabeledExample per line
//   <root>/split.json        latest DatasetSplit
class DatasetStore {
 public:
  explicit DatasetStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  void put_document(const ContractDocument& doc);
  std::optional<ContractDocument> get_document(const std::string& doc_id) const;

  // Idempotent for an identical sentence; throws Error(Conflict) when the id
  // is already bound to different content.
  void put_sentence(const Sentence& sentence);
  std::optional<Sentence> get_sentence(const std::string& sentence_id) const;
  std::vector<Sentence> sentences() const;

  // Same conflict rule as put_sentence, keyed by sentence_id. An empty `text`
  // is filled from the stored sentence first.
  void put_label(const LabeledExample& example);
  std::optional<LabeledExample> get_label(const std::string& sentence_id) const;
  std::vector<LabeledExample> labels() const;

  void put_split(const DatasetSplit& split);
  std::optional<DatasetSplit> split() const;

  // Labeled examples minus anything whose sentence is redacted.
  std::vector<LabeledExample> labeled_examples() const;

  // Non-redacted sentences joined with labels, plus synthetic examples,
  // ordered by sentence_id. When `bucket` is given only members of that split
  // bucket are returned.
  std::vector<DatasetRecord> records(std::optional<Bucket> bucket = {}) const;

  // Writes the dataset. JSON-lines rows carry the full sentence and example
  // fields; CSV uses the columns
  // sentence_id,doc_id,section_path,text,label,provenance.
  void export_to(const std::filesystem::path& file, ExportFormat format,
                 std::optional<Bucket> bucket = {}) const;
  // Reads a JSON-lines export into this store.
  void import_from(const std::filesystem::path& file);

 private:
  void load();
  void put_sentence_locked(const Sentence& sentence);
  void put_label_locked(const LabeledExample& example);

  std::filesystem::path root_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, ContractDocument> documents_;
  std::map<std::string, Sentence> sentences_;
  std::map<std::string, LabeledExample> labels_;
  std::optional<DatasetSplit> split_;
};

void to_json(nlohmann::json& j, const DatasetRecord& r);
void from_json(const nlohmann::json& j, DatasetRecord& r);

// CSV field quoting per RFC 4180.
std::string csv_escape(std::string_view field);

}  // namespace clausefair::corpus
