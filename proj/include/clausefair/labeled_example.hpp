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

#include <optional>
#include <string>

#include <json.hpp>

#include "clausefair/label.hpp"

namespace clausefair {

// A sentence with its final label and where that label came from.
//
// `text` travels with the example so that synthetic sentences, which never
// live in a contract document, can be trained on like any other.
struct LabeledExample {
  std::string sentence_id;
  std::string text;
  Label label = Label::Fair;
  Provenance provenance = Provenance::HumanAgreed;
  // Pseudo only: model confidence when accepted and the iteration that
  // accepted it.
  std::optional<double> confidence;
  std::optional<int> iteration;
  // Synthetic only: set once augmentation review has verified the sentence.
  bool verified = false;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

void to_json(nlohmann::json& j, const LabeledExample& e);
void from_json(const nlohmann::json& j, LabeledExample& e);

}  // namespace clausefair
