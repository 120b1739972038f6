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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "clausefair/label.hpp"

namespace clausefair::annotation {

// Yes/no questions from the annotation guidelines, in evaluation order.
enum class GuidelineRule {
  NeitherRightNorObligation,    // -> Fair
  AppliesEquallyToBothParties,  // -> Fair
  DetailsDecidedLater,          // obligation details settled later by consultation -> Fair
  RightWithAmbiguousCondition,  // -> PotentiallyUnfair (gated)
  RightWithoutBoundaries,       // -> PotentiallyUnfair (gated)
  AmbiguousMaterialObligation,  // -> PotentiallyUnfair (gated)
  ClearImbalance,               // -> ClearlyUnfair
  AmbiguityCausesNonCompliance, // gate for the three ambiguity rules
};

std::string_view to_string(GuidelineRule rule);
std::optional<GuidelineRule> guideline_rule_from_string(std::string_view id);

using ChecklistAnswers = std::map<GuidelineRule, bool>;

struct ChecklistOutcome {
  Label label = Label::Fair;
  // Ids of the rules that answered "yes" on the decision path; the last
  // entry decided the label. "default_fair" when nothing fired.
  std::vector<std::string> trace;
};

// First-match-wins walk over the guideline rules. An ambiguity rule that
// fires is confirmed by AmbiguityCausesNonCompliance: "no" downgrades the
// sentence to Fair, since ambiguity that touches no material right or
// obligation is not unfair. A sentence on which no rule fires is Fair.
//
// Only questions actually reached must be answered; a reached question with
// no answer throws Error(IncompleteAnswers) naming it.
ChecklistOutcome guideline_checklist(std::string_view sentence_text,
                                     const ChecklistAnswers& answers);

// {"clear_imbalance": true, ...}; unknown keys throw Error(ConfigError).
ChecklistAnswers checklist_answers_from_json(const nlohmann::json& j);

}  // namespace clausefair::annotation
