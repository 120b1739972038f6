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

#include "clausefair/label.hpp"

#include "clausefair/error.hpp"
#include "clausefair/labeled_example.hpp"
#include "clausefair/util.hpp"

namespace clausefair {

std::string_view to_string(Label label) {
  switch (label) {
    case Label::Fair: return "fair";
    case Label::PotentiallyUnfair: return "potentially_unfair";
    case Label::ClearlyUnfair: return "clearly_unfair";
  }
  return "fair";
}

std::string_view display_name(Label label) {
  switch (label) {
    case Label::Fair: return "Fair";
    case Label::PotentiallyUnfair: return "Potentially Unfair";
    case Label::ClearlyUnfair: return "Clearly Unfair";
  }
  return "Fair";
}

std::optional<Label> parse_label_name(std::string_view text) {
  std::string key = to_lower(trim(text));
  for (char& c : key) {
    if (c == ' ' || c == '-') c = '_';
  }
  if (key == "fair" || key == "f" || key == "0") return Label::Fair;
  if (key == "potentially_unfair" || key == "p" || key == "1") {
    return Label::PotentiallyUnfair;
  }
  if (key == "clearly_unfair" || key == "c" || key == "2") {
    return Label::ClearlyUnfair;
  }
  return std::nullopt;
}

Label label_from_string(std::string_view text) {
  if (auto label = parse_label_name(text)) return *label;
  throw Error(ErrorCode::ConfigError, "unknown label '" + std::string(text) + "'");
}

std::string_view to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::HumanAgreed: return "human_agreed";
    case Provenance::Adjudicated: return "adjudicated";
    case Provenance::Pseudo: return "pseudo";
    case Provenance::Synthetic: return "synthetic";
  }
  return "human_agreed";
}

Provenance provenance_from_string(std::string_view text) {
  const std::string key = to_lower(trim(text));
  if (key == "human_agreed") return Provenance::HumanAgreed;
  if (key == "adjudicated") return Provenance::Adjudicated;
  if (key == "pseudo") return Provenance::Pseudo;
  if (key == "synthetic") return Provenance::Synthetic;
  throw Error(ErrorCode::ConfigError, "unknown provenance '" + std::string(text) + "'");
}

void to_json(nlohmann::json& j, const LabeledExample& e) {
  j = nlohmann::json{{"sentence_id", e.sentence_id},
                     {"text", e.text},
                     {"label", to_string(e.label)},
                     {"provenance", to_string(e.provenance)}};
  if (e.confidence) j["confidence"] = *e.confidence;
  if (e.iteration) j["iteration"] = *e.iteration;
  if (e.provenance == Provenance::Synthetic) j["verified"] = e.verified;
}

void from_json(const nlohmann::json& j, LabeledExample& e) {
  e.sentence_id = j.at("sentence_id").get<std::string>();
  e.text = j.value("text", std::string{});
  e.label = label_from_string(j.at("label").get<std::string>());
  e.provenance = provenance_from_string(j.value("provenance", std::string("human_agreed")));
  e.confidence.reset();
  e.iteration.reset();
  if (j.contains("confidence")) e.confidence = j.at("confidence").get<double>();
  if (j.contains("iteration")) e.iteration = j.at("iteration").get<int>();
  e.verified = j.value("verified", false);
}

}  // namespace clausefair
