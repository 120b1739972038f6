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

#include "clausefair/annotation/checklist.hpp"

#include <array>

#include "clausefair/error.hpp"

namespace clausefair::annotation {

namespace {

struct RuleName {
  GuidelineRule rule;
  std::string_view id;
};

constexpr std::array<RuleName, 8> kRuleNames = {{
    {GuidelineRule::NeitherRightNorObligation, "neither_right_nor_obligation"},
    {GuidelineRule::AppliesEquallyToBothParties, "applies_equally_to_both_parties"},
    {GuidelineRule::DetailsDecidedLater, "details_decided_later"},
    {GuidelineRule::RightWithAmbiguousCondition, "right_with_ambiguous_condition"},
    {GuidelineRule::RightWithoutBoundaries, "right_without_boundaries"},
    {GuidelineRule::AmbiguousMaterialObligation, "ambiguous_material_obligation"},
    {GuidelineRule::ClearImbalance, "clear_imbalance"},
    {GuidelineRule::AmbiguityCausesNonCompliance, "ambiguity_causes_non_compliance"},
}};

struct Step {
  GuidelineRule rule;
  Label outcome;
  bool gated;
};

constexpr std::array<Step, 7> kDecisionOrder = {{
    {GuidelineRule::NeitherRightNorObligation, Label::Fair, false},
    {GuidelineRule::AppliesEquallyToBothParties, Label::Fair, false},
    {GuidelineRule::DetailsDecidedLater, Label::Fair, false},
    {GuidelineRule::RightWithAmbiguousCondition, Label::PotentiallyUnfair, true},
    {GuidelineRule::RightWithoutBoundaries, Label::PotentiallyUnfair, true},
    {GuidelineRule::AmbiguousMaterialObligation, Label::PotentiallyUnfair, true},
    {GuidelineRule::ClearImbalance, Label::ClearlyUnfair, false},
}};

bool answer(const ChecklistAnswers& answers, GuidelineRule rule) {
  auto it = answers.find(rule);
  if (it == answers.end()) {
    throw Error(ErrorCode::IncompleteAnswers,
                "checklist question '" + std::string(to_string(rule)) + "' is unanswered");
  }
  return it->second;
}

}  // namespace

std::string_view to_string(GuidelineRule rule) {
  for (const auto& r : kRuleNames) {
    if (r.rule == rule) return r.id;
  }
  return "unknown";
}

std::optional<GuidelineRule> guideline_rule_from_string(std::string_view id) {
  for (const auto& r : kRuleNames) {
    if (r.id == id) return r.rule;
  }
  return std::nullopt;
}

ChecklistOutcome guideline_checklist(std::string_view /*sentence_text*/,
                                     const ChecklistAnswers& answers) {
  ChecklistOutcome out;
  for (const auto& step : kDecisionOrder) {
    if (!answer(answers, step.rule)) continue;
    out.trace.emplace_back(to_string(step.rule));
    out.label = step.outcome;
    if (step.gated && !answer(answers, GuidelineRule::AmbiguityCausesNonCompliance)) {
      out.trace.emplace_back("ambiguity_immaterial");
      out.label = Label::Fair;
    }
    return out;
  }
  out.trace.emplace_back("default_fair");
  out.label = Label::Fair;
  return out;
}

ChecklistAnswers checklist_answers_from_json(const nlohmann::json& j) {
  ChecklistAnswers out;
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "checklist answers must be an object");
  for (const auto& [key, value] : j.items()) {
    auto rule = guideline_rule_from_string(key);
    if (!rule) throw Error(ErrorCode::ConfigError, "unknown checklist question '" + key + "'");
    if (!value.is_boolean()) {
      throw Error(ErrorCode::ConfigError, "checklist answer '" + key + "' must be true or false");
    }
    out[*rule] = value.get<bool>();
  }
  return out;
}

}  // namespace clausefair::annotation
