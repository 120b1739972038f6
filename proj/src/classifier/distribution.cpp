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

#include "clausefair/classifier/distribution.hpp"

#include <cmath>

#include "clausefair/error.hpp"

namespace clausefair::classifier {

ClassDistribution::ClassDistribution(const LabelVector<double>& p) : p_(p) {
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (!std::isfinite(p(k)) || p(k) < 0.0 || p(k) > 1.0) {
      throw Error(ErrorCode::InvalidDistribution, "probabilities must lie in [0, 1]");
    }
  }
  if (std::abs(p.sum() - 1.0) > 1e-6) {
    throw Error(ErrorCode::InvalidDistribution, "probabilities must sum to 1");
  }
}

ClassDistribution ClassDistribution::normalized(const LabelVector<double>& weights) {
  const double total = weights.sum();
  if (!(total > 0.0) || (weights.array() < 0.0).any()) {
    throw Error(ErrorCode::InvalidDistribution, "weights must be non-negative with a positive sum");
  }
  return ClassDistribution(weights / total);
}

Label decode(const ClassDistribution& distribution) {
  return argmax_severe(distribution.vector());
}

Prediction make_prediction(std::string sentence_id, const ClassDistribution& distribution) {
  Prediction p;
  p.sentence_id = std::move(sentence_id);
  p.distribution = distribution;
  p.predicted = decode(distribution);
  p.confidence = distribution[p.predicted];
  return p;
}

void to_json(nlohmann::json& j, const ClassDistribution& d) {
  j = nlohmann::json::object();
  for (Label l : kAllLabels) j[std::string(to_string(l))] = d[l];
}

void from_json(const nlohmann::json& j, ClassDistribution& d) {
  LabelVector<double> p;
  for (Label l : kAllLabels) {
    p(static_cast<Eigen::Index>(index_of(l))) = j.at(std::string(to_string(l))).get<double>();
  }
  d = ClassDistribution(p);
}

void to_json(nlohmann::json& j, const Prediction& p) {
  j = nlohmann::json{{"sentence_id", p.sentence_id},
                     {"distribution", p.distribution},
                     {"predicted", to_string(p.predicted)},
                     {"confidence", p.confidence}};
}

void from_json(const nlohmann::json& j, Prediction& p) {
  p = make_prediction(j.at("sentence_id").get<std::string>(),
                      j.at("distribution").get<ClassDistribution>());
}

}  // namespace clausefair::classifier
