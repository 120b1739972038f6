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

#include <array>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "clausefair/label.hpp"
#include "clausefair/labeled_example.hpp"

namespace clausefair::annotation {

struct Annotation {
  std::string sentence_id;
  std::string annotator_id;
  Label label = Label::Fair;
  std::string timestamp;
  std::vector<std::string> guideline_trace;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct AdjudicationRecord {
  std::string sentence_id;
  std::pair<Label, Label> first_two_labels;
  std::pair<std::string, std::string> primary_annotators;
  std::string adjudicator_id;
  Label final_label = Label::Fair;
  std::string timestamp;

  friend bool operator==(const AdjudicationRecord&, const AdjudicationRecord&) = default;
};

// Signal that two primary annotators disagreed and a third must decide.
struct AdjudicationRequired {
  std::string sentence_id;
  std::pair<Label, Label> labels;
  std::pair<std::string, std::string> annotators;

  friend bool operator==(const AdjudicationRequired&, const AdjudicationRequired&) = default;
};

// sentence_id -> its two primary annotators.
using AssignmentMap = std::map<std::string, std::array<std::string, 2>>;

// Deals annotator slots round-robin: sentence i gets pool[2i mod m] and
// pool[(2i+1) mod m]. With m >= 2 the pair is always distinct and every
// annotator's load is within one of every other's.
//
// Throws Error(PoolTooSmall) for fewer than three annotators (two primaries
// plus an adjudicator in reserve) unless `sentence_ids` is empty.
AssignmentMap assign_batch(std::span<const std::string> sentence_ids,
                           std::span<const std::string> annotator_pool);

// Agreement yields a HumanAgreed example; disagreement yields
// AdjudicationRequired. Throws Error(MissingAnnotations) unless exactly two
// annotations for `sentence_id` from distinct annotators are present.
std::variant<LabeledExample, AdjudicationRequired> resolve(
    const std::string& sentence_id, std::span<const Annotation> annotations);

enum class SubmitStatus { Recorded, Agreed, AdjudicationRequired };
std::string_view to_string(SubmitStatus status);

struct SubmitOutcome {
  SubmitStatus status = SubmitStatus::Recorded;
  std::optional<LabeledExample> example;
};

// Annotation ledger and adjudication queue. Operations are linearizable: the
// book is guarded by one mutex, so of two racing adjudications of the same
// sentence exactly one succeeds and the other sees NotPending.
//
// When constructed with a directory the book replays
// <dir>/annotations.jsonl and <dir>/adjudications.jsonl and appends every
// accepted mutation to them before returning.
class AnnotationBook {
 public:
  AnnotationBook() = default;
  explicit AnnotationBook(std::filesystem::path journal_dir);

  // Throws DuplicateAnnotation for a second annotation by the same annotator
  // and Conflict for a third annotator on the same sentence.
  SubmitOutcome submit(const Annotation& annotation);

  // Throws NotPending when the sentence has no open adjudication and
  // SelfAdjudication when the adjudicator is one of its primaries.
  LabeledExample adjudicate(const std::string& sentence_id, const std::string& adjudicator_id,
                            Label final_label, const std::string& timestamp);

  std::vector<AdjudicationRequired> pending() const;
  std::vector<AdjudicationRecord> closed() const;
  std::size_t pending_count() const;
  std::vector<Annotation> annotations() const;
  std::vector<Annotation> annotations_for(const std::string& sentence_id) const;
  // One example per sentence that is final (agreed or adjudicated).
  std::vector<LabeledExample> finalized() const;
  // The primary label pairs of every doubly-annotated sentence, in
  // sentence_id order.
  std::vector<std::pair<Label, Label>> primary_pairs() const;

 private:
  SubmitOutcome submit_locked(const Annotation& annotation, bool journal);
  LabeledExample adjudicate_locked(const AdjudicationRecord& record, bool journal);

  std::optional<std::filesystem::path> journal_dir_;
  mutable std::mutex mutex_;
  std::map<std::string, std::vector<Annotation>> by_sentence_;
  std::map<std::string, AdjudicationRequired> pending_;
  std::map<std::string, AdjudicationRecord> closed_;
  std::map<std::string, LabeledExample> finalized_;
};

// CSV with header sentence_id,annotator_id,label,timestamp; adjudications use
// sentence_id,adjudicator_id,label,timestamp plus the two primary labels.
std::string annotations_csv(std::span<const Annotation> annotations);
std::string adjudications_csv(std::span<const AdjudicationRecord> records);

void to_json(nlohmann::json& j, const Annotation& a);
void from_json(const nlohmann::json& j, Annotation& a);
void to_json(nlohmann::json& j, const AdjudicationRecord& r);
void from_json(const nlohmann::json& j, AdjudicationRecord& r);
void to_json(nlohmann::json& j, const AdjudicationRequired& r);

}  // namespace clausefair::annotation
