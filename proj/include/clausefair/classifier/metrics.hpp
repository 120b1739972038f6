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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "clausefair/classifier/distribution.hpp"
#include "clausefair/label.hpp"

namespace clausefair::classifier {

// Rows index gold labels, columns predicted labels.
using ConfusionMatrix = Eigen::Matrix<long, static_cast<int>(kNumLabels), static_cast<int>(kNumLabels)>;

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long support = 0;    // gold count
  long predicted = 0;  // predicted count
  // precision, recall or F1 hit a zero denominator and was reported as 0.
  bool zero_division = false;
};

struct MetricsReport {
  std::array<ClassMetrics, kNumLabels> per_class{};
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  long total = 0;
  long correct = 0;
  // Predictions that produced no label (e.g. unparseable LLM output). They
  // count toward the total and toward their gold class's support.
  long unlabeled = 0;
  ConfusionMatrix confusion = ConfusionMatrix::Zero();
  // One line per degenerate condition, e.g. a class absent from gold and
  // predictions alike.
  std::vector<std::string> notes;

  const ClassMetrics& operator[](Label l) const { return per_class[index_of(l)]; }
};

// One-vs-rest precision/recall/F1 per class, unweighted macro means, and
// exact-match accuracy. Zero denominators yield 0 and are recorded in notes.
//
// Throws Error(LengthMismatch) if the spans differ in length and
// Error(EmptyInput) if they are empty.
MetricsReport evaluate(std::span<const Label> predicted, std::span<const Label> gold);
MetricsReport evaluate(std::span<const Prediction> predictions, std::span<const Label> gold);
MetricsReport evaluate(std::span<const std::optional<Label>> predicted,
                       std::span<const Label> gold);

void to_json(nlohmann::json& j, const ClassMetrics& m);
void from_json(const nlohmann::json& j, ClassMetrics& m);
void to_json(nlohmann::json& j, const MetricsReport& r);
void from_json(const nlohmann::json& j, MetricsReport& r);

}  // namespace clausefair::classifier
