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

#include "clausefair/annotation/annotation.hpp"

#include <set>

#include "clausefair/corpus/store.hpp"
#include "clausefair/error.hpp"
#include "clausefair/util.hpp"

namespace clausefair::annotation {

namespace {
constexpr const char* kAnnotationsFile = "annotations.jsonl";
constexpr const char* kAdjudicationsFile = "adjudications.jsonl";
}  // namespace

AssignmentMap assign_batch(std::span<const std::string> sentence_ids,
                           std::span<const std::string> annotator_pool) {
  AssignmentMap out;
  if (sentence_ids.empty()) return out;
  const std::set<std::string> distinct(annotator_pool.begin(), annotator_pool.end());
  if (distinct.size() != annotator_pool.size()) {
    throw Error(ErrorCode::ConfigError, "annotator pool contains duplicates");
  }
  if (annotator_pool.size() < 3) {
    throw Error(ErrorCode::PoolTooSmall,
                "need at least 3 annotators, got " + std::to_string(annotator_pool.size()));
  }
  const std::size_t m = annotator_pool.size();
  for (std::size_t i = 0; i < sentence_ids.size(); ++i) {
    out[sentence_ids[i]] = {annotator_pool[(2 * i) % m], annotator_pool[(2 * i + 1) % m]};
  }
  return out;
}

std::variant<LabeledExample, AdjudicationRequired> resolve(
    const std::string& sentence_id, std::span<const Annotation> annotations) {
  std::vector<const Annotation*> mine;
  for (const auto& a : annotations) {
    if (a.sentence_id == sentence_id) mine.push_back(&a);
  }
  if (mine.size() != 2 || mine[0]->annotator_id == mine[1]->annotator_id) {
    throw Error(ErrorCode::MissingAnnotations,
                "sentence '" + sentence_id + "' needs two primary annotations, has " +
                    std::to_string(mine.size()));
  }
  if (mine[0]->label == mine[1]->label) {
    LabeledExample e;
    e.sentence_id = sentence_id;
    e.label = mine[0]->label;
    e.provenance = Provenance::HumanAgreed;
    return e;
  }
  return AdjudicationRequired{sentence_id,
                              {mine[0]->label, mine[1]->label},
                              {mine[0]->annotator_id, mine[1]->annotator_id}};
}

std::string_view to_string(SubmitStatus status) {
  switch (status) {
    case SubmitStatus::Recorded: return "recorded";
    case SubmitStatus::Agreed: return "agreed";
    case SubmitStatus::AdjudicationRequired: return "adjudication_required";
  }
  return "recorded";
}

AnnotationBook::AnnotationBook(std::filesystem::path journal_dir)
    : journal_dir_(std::move(journal_dir)) {
  std::filesystem::create_directories(*journal_dir_);
  std::lock_guard lock(mutex_);
  for (const auto& j : read_json_lines(*journal_dir_ / kAnnotationsFile)) {
    submit_locked(j.get<Annotation>(), false);
  }
  for (const auto& j : read_json_lines(*journal_dir_ / kAdjudicationsFile)) {
    adjudicate_locked(j.get<AdjudicationRecord>(), false);
  }
}

SubmitOutcome AnnotationBook::submit(const Annotation& annotation) {
  std::lock_guard lock(mutex_);
  return submit_locked(annotation, true);
}

SubmitOutcome AnnotationBook::submit_locked(const Annotation& annotation, bool journal) {
  auto& list = by_sentence_[annotation.sentence_id];
  for (const auto& a : list) {
    if (a.annotator_id == annotation.annotator_id) {
      throw Error(ErrorCode::DuplicateAnnotation,
                  "annotator '" + annotation.annotator_id + "' already labeled '" +
                      annotation.sentence_id + "'");
    }
  }
  if (list.size() >= 2) {
    throw Error(ErrorCode::Conflict,
                "sentence '" + annotation.sentence_id + "' already has two primary annotations");
  }
  if (journal && journal_dir_) append_json_line(*journal_dir_ / kAnnotationsFile, annotation);
  list.push_back(annotation);

  SubmitOutcome outcome;
  if (list.size() < 2) return outcome;
  auto resolved = resolve(annotation.sentence_id, list);
  if (auto* example = std::get_if<LabeledExample>(&resolved)) {
    finalized_[example->sentence_id] = *example;
    outcome.status = SubmitStatus::Agreed;
    outcome.example = *example;
  } else {
    auto& required = std::get<AdjudicationRequired>(resolved);
    pending_[required.sentence_id] = required;
    outcome.status = SubmitStatus::AdjudicationRequired;
  }
  return outcome;
}

LabeledExample AnnotationBook::adjudicate(const std::string& sentence_id,
                                          const std::string& adjudicator_id, Label final_label,
                                          const std::string& timestamp) {
  std::lock_guard lock(mutex_);
  AdjudicationRecord record;
  record.sentence_id = sentence_id;
  record.adjudicator_id = adjudicator_id;
  record.final_label = final_label;
  record.timestamp = timestamp;
  return adjudicate_locked(record, true);
}

LabeledExample AnnotationBook::adjudicate_locked(const AdjudicationRecord& request, bool journal) {
  auto it = pending_.find(request.sentence_id);
  if (it == pending_.end()) {
    throw Error(ErrorCode::NotPending,
                "sentence '" + request.sentence_id + "' has no pending adjudication");
  }
  const auto& required = it->second;
  if (request.adjudicator_id == required.annotators.first ||
      request.adjudicator_id == required.annotators.second) {
    throw Error(ErrorCode::SelfAdjudication,
                "'" + request.adjudicator_id + "' is a primary annotator of '" +
                    request.sentence_id + "'");
  }
  AdjudicationRecord record = request;
  record.first_two_labels = required.labels;
  record.primary_annotators = required.annotators;
  if (journal && journal_dir_) append_json_line(*journal_dir_ / kAdjudicationsFile, record);

  LabeledExample example;
  example.sentence_id = record.sentence_id;
  example.label = record.final_label;
  example.provenance = Provenance::Adjudicated;
  finalized_[example.sentence_id] = example;
  closed_[record.sentence_id] = record;
  pending_.erase(it);
  return example;
}

std::vector<AdjudicationRequired> AnnotationBook::pending() const {
  std::lock_guard lock(mutex_);
  std::vector<AdjudicationRequired> out;
  for (const auto& [id, p] : pending_) out.push_back(p);
  return out;
}

std::vector<AdjudicationRecord> AnnotationBook::closed() const {
  std::lock_guard lock(mutex_);
  std::vector<AdjudicationRecord> out;
  for (const auto& [id, r] : closed_) out.push_back(r);
  return out;
}

std::size_t AnnotationBook::pending_count() const {
  std::lock_guard lock(mutex_);
  return pending_.size();
}

std::vector<Annotation> AnnotationBook::annotations() const {
  std::lock_guard lock(mutex_);
  std::vector<Annotation> out;
  for (const auto& [id, list] : by_sentence_) out.insert(out.end(), list.begin(), list.end());
  return out;
}

std::vector<Annotation> AnnotationBook::annotations_for(const std::string& sentence_id) const {
  std::lock_guard lock(mutex_);
  if (auto it = by_sentence_.find(sentence_id); it != by_sentence_.end()) return it->second;
  return {};
}

std::vector<LabeledExample> AnnotationBook::finalized() const {
  std::lock_guard lock(mutex_);
  std::vector<LabeledExample> out;
  for (const auto& [id, e] : finalized_) out.push_back(e);
  return out;
}

std::vector<std::pair<Label, Label>> AnnotationBook::primary_pairs() const {
  std::lock_guard lock(mutex_);
  std::vector<std::pair<Label, Label>> out;
  for (const auto& [id, list] : by_sentence_) {
    if (list.size() == 2) out.emplace_back(list[0].label, list[1].label);
  }
  return out;
}

std::string annotations_csv(std::span<const Annotation> annotations) {
  using corpus::csv_escape;
  std::string out = "sentence_id,annotator_id,label,timestamp\n";
  for (const auto& a : annotations) {
    out += csv_escape(a.sentence_id) + ',' + csv_escape(a.annotator_id) + ',' +
           std::string(to_string(a.label)) + ',' + csv_escape(a.timestamp) + '\n';
  }
  return out;
}

std::string adjudications_csv(std::span<const AdjudicationRecord> records) {
  using corpus::csv_escape;
  std::string out = "sentence_id,adjudicator_id,label,timestamp,first_label,second_label\n";
  for (const auto& r : records) {
    out += csv_escape(r.sentence_id) + ',' + csv_escape(r.adjudicator_id) + ',' +
           std::string(to_string(r.final_label)) + ',' + csv_escape(r.timestamp) + ',' +
           std::string(to_string(r.first_two_labels.first)) + ',' +
           std::string(to_string(r.first_two_labels.second)) + '\n';
  }
  return out;
}

void to_json(nlohmann::json& j, const Annotation& a) {
  j = nlohmann::json{{"sentence_id", a.sentence_id}, {"annotator_id", a.annotator_id},
                     {"label", to_string(a.label)}, {"timestamp", a.timestamp},
                     {"guideline_trace", a.guideline_trace}};
}

void from_json(const nlohmann::json& j, Annotation& a) {
  a.sentence_id = j.at("sentence_id").get<std::string>();
  a.annotator_id = j.at("annotator_id").get<std::string>();
  a.label = label_from_string(j.at("label").get<std::string>());
  a.timestamp = j.value("timestamp", std::string{});
  a.guideline_trace = j.value("guideline_trace", std::vector<std::string>{});
}

void to_json(nlohmann::json& j, const AdjudicationRecord& r) {
  j = nlohmann::json{
      {"sentence_id", r.sentence_id},
      {"first_two_labels",
       {to_string(r.first_two_labels.first), to_string(r.first_two_labels.second)}},
      {"primary_annotators", {r.primary_annotators.first, r.primary_annotators.second}},
      {"adjudicator_id", r.adjudicator_id},
      {"final_label", to_string(r.final_label)},
      {"timestamp", r.timestamp}};
}

void from_json(const nlohmann::json& j, AdjudicationRecord& r) {
  r.sentence_id = j.at("sentence_id").get<std::string>();
  r.adjudicator_id = j.at("adjudicator_id").get<std::string>();
  r.final_label = label_from_string(j.at("final_label").get<std::string>());
  r.timestamp = j.value("timestamp", std::string{});
  if (j.contains("first_two_labels")) {
    const auto& l = j.at("first_two_labels");
    r.first_two_labels = {label_from_string(l.at(0).get<std::string>()),
                          label_from_string(l.at(1).get<std::string>())};
  }
  if (j.contains("primary_annotators")) {
    const auto& p = j.at("primary_annotators");
    r.primary_annotators = {p.at(0).get<std::string>(), p.at(1).get<std::string>()};
  }
}

void to_json(nlohmann::json& j, const AdjudicationRequired& r) {
  j = nlohmann::json{{"sentence_id", r.sentence_id},
                     {"labels", {to_string(r.labels.first), to_string(r.labels.second)}},
                     {"annotators", {r.annotators.first, r.annotators.second}},
                     {"status", "pending"}};
}

}  // namespace clausefair::annotation
