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

#include "clausefair/corpus/store.hpp"

#include <mutex>

#include "clausefair/error.hpp"
#include "clausefair/util.hpp"

namespace clausefair::corpus {

namespace fs = std::filesystem;

namespace {

constexpr const char* kDocuments = "documents.jsonl";
constexpr const char* kSentences = "sentences.jsonl";
constexpr const char* kLabels = "labels.jsonl";
constexpr const char* kSplit = "split.json";

}  // namespace

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

DatasetStore::DatasetStore(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_);
  load();
}

void DatasetStore::load() {
  for (const auto& j : read_json_lines(root_ / kDocuments)) {
    auto doc = j.get<ContractDocument>();
    documents_[doc.doc_id] = std::move(doc);
  }
  for (const auto& j : read_json_lines(root_ / kSentences)) {
    auto s = j.get<Sentence>();
    sentences_[s.sentence_id] = std::move(s);
  }
  for (const auto& j : read_json_lines(root_ / kLabels)) {
    auto e = j.get<LabeledExample>();
    labels_[e.sentence_id] = std::move(e);
  }
  if (fs::exists(root_ / kSplit)) {
    split_ = nlohmann::json::parse(read_file(root_ / kSplit)).get<DatasetSplit>();
  }
}

void DatasetStore::put_document(const ContractDocument& doc) {
  std::unique_lock lock(mutex_);
  if (auto it = documents_.find(doc.doc_id); it != documents_.end()) {
    if (it->second == doc) return;
    throw Error(ErrorCode::Conflict, "document '" + doc.doc_id + "' already stored with different content");
  }
  append_json_line(root_ / kDocuments, doc);
  documents_[doc.doc_id] = doc;
}

std::optional<ContractDocument> DatasetStore::get_document(const std::string& doc_id) const {
  std::shared_lock lock(mutex_);
  if (auto it = documents_.find(doc_id); it != documents_.end()) return it->second;
  return std::nullopt;
}

void DatasetStore::put_sentence(const Sentence& sentence) {
  std::unique_lock lock(mutex_);
  put_sentence_locked(sentence);
}

void DatasetStore::put_sentence_locked(const Sentence& sentence) {
  if (auto it = sentences_.find(sentence.sentence_id); it != sentences_.end()) {
    if (it->second == sentence) return;
    throw Error(ErrorCode::Conflict,
                "sentence '" + sentence.sentence_id + "' already stored with different content");
  }
  append_json_line(root_ / kSentences, sentence);
  sentences_[sentence.sentence_id] = sentence;
}

std::optional<Sentence> DatasetStore::get_sentence(const std::string& sentence_id) const {
  std::shared_lock lock(mutex_);
  if (auto it = sentences_.find(sentence_id); it != sentences_.end()) return it->second;
  return std::nullopt;
}

std::vector<Sentence> DatasetStore::sentences() const {
  std::shared_lock lock(mutex_);
  std::vector<Sentence> out;
  out.reserve(sentences_.size());
  for (const auto& [id, s] : sentences_) out.push_back(s);
  return out;
}

void DatasetStore::put_label(const LabeledExample& example) {
  std::unique_lock lock(mutex_);
  put_label_locked(example);
}

void DatasetStore::put_label_locked(const LabeledExample& incoming) {
  LabeledExample example = incoming;
  if (example.text.empty()) {
    if (auto s = sentences_.find(example.sentence_id); s != sentences_.end()) {
      example.text = s->second.text;
    }
  }
  if (auto it = labels_.find(example.sentence_id); it != labels_.end()) {
    if (it->second == example) return;
    throw Error(ErrorCode::Conflict,
                "label for '" + example.sentence_id + "' already stored with different content");
  }
  append_json_line(root_ / kLabels, example);
  labels_[example.sentence_id] = example;
}

std::optional<LabeledExample> DatasetStore::get_label(const std::string& sentence_id) const {
  std::shared_lock lock(mutex_);
  if (auto it = labels_.find(sentence_id); it != labels_.end()) return it->second;
  return std::nullopt;
}

std::vector<LabeledExample> DatasetStore::labels() const {
  std::shared_lock lock(mutex_);
  std::vector<LabeledExample> out;
  for (const auto& [id, e] : labels_) out.push_back(e);
  return out;
}

void DatasetStore::put_split(const DatasetSplit& split) {
  std::unique_lock lock(mutex_);
  write_file_atomic(root_ / kSplit, nlohmann::json(split).dump(1));
  split_ = split;
}

std::optional<DatasetSplit> DatasetStore::split() const {
  std::shared_lock lock(mutex_);
  return split_;
}

std::vector<LabeledExample> DatasetStore::labeled_examples() const {
  std::shared_lock lock(mutex_);
  std::vector<LabeledExample> out;
  for (const auto& [id, e] : labels_) {
    auto it = sentences_.find(id);
    if (it != sentences_.end() && it->second.redacted) continue;
    out.push_back(e);
  }
  return out;
}

std::vector<DatasetRecord> DatasetStore::records(std::optional<Bucket> bucket) const {
  std::shared_lock lock(mutex_);
  const std::set<std::string>* members =
      bucket && split_ ? &split_->bucket(*bucket) : nullptr;
  static const std::set<std::string> kEmpty;
  if (bucket && !split_) members = &kEmpty;

  std::map<std::string, DatasetRecord> rows;
  for (const auto& [id, s] : sentences_) {
    if (s.redacted) continue;
    if (members && !members->contains(id)) continue;
    DatasetRecord r{s.sentence_id, s.doc_id, s.section_path, s.position, s.text, std::nullopt};
    if (auto it = labels_.find(id); it != labels_.end()) r.example = it->second;
    rows.emplace(id, std::move(r));
  }
  for (const auto& [id, e] : labels_) {
    if (sentences_.contains(id)) continue;
    if (members && !members->contains(id)) continue;
    rows.emplace(id, DatasetRecord{id, "", "", 0, e.text, e});
  }
  std::vector<DatasetRecord> out;
  out.reserve(rows.size());
  for (auto& [id, r] : rows) out.push_back(std::move(r));
  return out;
}

void DatasetStore::export_to(const fs::path& file, ExportFormat format,
                             std::optional<Bucket> bucket) const {
  const auto rows = records(bucket);
  std::string out;
  if (format == ExportFormat::Csv) {
    out = "sentence_id,doc_id,section_path,text,label,provenance\n";
    for (const auto& r : rows) {
      out += csv_escape(r.sentence_id) + ',' + csv_escape(r.doc_id) + ',' +
             csv_escape(r.section_path) + ',' + csv_escape(r.text) + ',';
      if (r.example) {
        out += std::string(to_string(r.example->label)) + ',' +
               std::string(to_string(r.example->provenance));
      } else {
        out += ',';
      }
      out += '\n';
    }
  } else {
    for (const auto& r : rows) {
      out += nlohmann::json(r).dump();
      out += '\n';
    }
  }
  write_file_atomic(file, out);
}

void DatasetStore::import_from(const fs::path& file) {
  const auto lines = read_json_lines(file);
  std::unique_lock lock(mutex_);
  for (const auto& j : lines) {
    const auto r = j.get<DatasetRecord>();
    if (!r.doc_id.empty()) {
      put_sentence_locked(Sentence{r.sentence_id, r.doc_id, r.section_path, r.position, r.text, false});
    }
    if (r.example) put_label_locked(*r.example);
  }
}

void to_json(nlohmann::json& j, const DatasetRecord& r) {
  j = nlohmann::json{{"sentence_id", r.sentence_id}, {"doc_id", r.doc_id},
                     {"section_path", r.section_path}, {"position", r.position},
                     {"text", r.text}};
  if (r.example) {
    nlohmann::json e = *r.example;
    e.erase("sentence_id");
    e.erase("text");
    j.update(e);
  }
}

void from_json(const nlohmann::json& j, DatasetRecord& r) {
  r.sentence_id = j.at("sentence_id").get<std::string>();
  r.doc_id = j.value("doc_id", std::string{});
  r.section_path = j.value("section_path", std::string{});
  r.position = j.value("position", 0);
  r.text = j.at("text").get<std::string>();
  r.example.reset();
  if (j.contains("label")) {
    nlohmann::json e = j;
    r.example = e.get<LabeledExample>();
  }
}

}  // namespace clausefair::corpus
