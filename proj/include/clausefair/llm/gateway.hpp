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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "clausefair/label.hpp"
#include "clausefair/labeled_example.hpp"
#include "clausefair/llm/client.hpp"
#include "clausefair/llm/prompt.hpp"

namespace clausefair::llm {

// Finds the label a response commits to. The phrases "potentially unfair",
// "clearly unfair" and the standalone word "fair" are searched
// case-insensitively; "fair" inside the two longer phrases (or inside words
// such as "unfair") does not count. The last occurrence wins, since
// reasoning restates candidate labels before concluding.
//
// Throws Error(ParseError) if no phrase occurs.
Label parse_label(std::string_view response);

struct PromptedClassification {
  Label label = Label::Fair;
  // The full response for CoT templates; empty for Direct ones.
  std::string rationale;
};

// Renders `tmpl` for `sentence`, sends it with `settings`, and parses the
// label. Throws Error(InvalidTemplate) for Augment templates, ParseError for
// unmappable responses and TransportError from the client.
PromptedClassification classify_prompted(LlmClient& client, const PromptTemplate& tmpl,
                                         std::string_view sentence,
                                         const RequestSettings& settings = {});

// Accepts a JSON array of strings, a numbered or bulleted list, or the
// bracketed form "[Sentence 1., Sentence 2., ...]", optionally introduced by
// "<List of Sentences>:". Throws Error(ParseError) when no list is found.
std::vector<std::string> parse_sentence_list(std::string_view response);

enum class CandidateStatus { Pending, Verified, Dropped };
std::string_view to_string(CandidateStatus status);

struct Candidate {
  std::string text;
  CandidateStatus status = CandidateStatus::Pending;
  std::vector<std::string> accepted_by;
  std::string rejected_by;

  bool verified() const { return status == CandidateStatus::Verified; }
};

struct AugmentationBatch {
  std::string batch_id;
  std::string template_id;
  Scenario scenario = Scenario::UnilateralTermination;
  std::vector<Candidate> candidates;
  // Items the service returned and how many dedup removed.
  std::size_t returned = 0;
  std::size_t duplicates_removed = 0;

  std::size_t count(CandidateStatus status) const;
};

// Requests `n` sentences from an Augment template, keeps at most the first n
// of the returned list, and removes (case- and whitespace-insensitively)
// sentences already in `existing` or earlier in the same list. All survivors
// start unverified. An empty `batch_id` derives one from the template id and
// the response.
AugmentationBatch generate_candidates(LlmClient& client, const PromptTemplate& tmpl, int n,
                                      std::span<const std::string> existing = {},
                                      std::string batch_id = {},
                                      const RequestSettings& settings = {});

// Records one reviewer's decision. A candidate becomes Verified once two
// distinct reviewers accept it and is Dropped on the first rejection.
// Throws DuplicateReview when the reviewer already reviewed this candidate,
// InvalidState when it is already decided, and NotFound for a bad index.
AugmentationBatch review_candidate(AugmentationBatch batch, std::size_t index,
                                   const std::string& reviewer_id, bool accept);

// Verified candidates as Synthetic, verified ClearlyUnfair examples with ids
// "syn/<batch_id>/<index>".
std::vector<LabeledExample> to_synthetic_examples(const AugmentationBatch& batch);

void to_json(nlohmann::json& j, const Candidate& c);
void from_json(const nlohmann::json& j, Candidate& c);
void to_json(nlohmann::json& j, const AugmentationBatch& b);
void from_json(const nlohmann::json& j, AugmentationBatch& b);

}  // namespace clausefair::llm
