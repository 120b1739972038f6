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

#include <string>

#include <Eigen/Core>
#include <json.hpp>

#include "clausefair/label.hpp"

namespace clausefair::classifier {

template <typename Scalar>
using LabelVector = Eigen::Matrix<Scalar, static_cast<int>(kNumLabels), 1>;

// Numerically stable softmax over a label-indexed vector of logits.
template <typename Derived>
LabelVector<typename Derived::Scalar> softmax(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  LabelVector<Scalar> e = (logits.array() - logits.maxCoeff()).exp().matrix();
  return e / e.sum();
}

// Argmax over a label-indexed vector, exact ties resolved toward the more
// severe label.
template <typename Derived>
Label argmax_severe(const Eigen::MatrixBase<Derived>& v) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < kNumLabels; ++k) {
    if (v(static_cast<Eigen::Index>(k)) >= v(static_cast<Eigen::Index>(best))) best = k;
  }
  return label_at(best);
}

// A probability vector over the three labels: non-negative components that
// sum to 1 within 1e-6.
class ClassDistribution {
 public:
  ClassDistribution() : p_(LabelVector<double>::Constant(1.0 / kNumLabels)) {}
  // Throws Error(InvalidDistribution) if `p` is not a valid distribution.
  explicit ClassDistribution(const LabelVector<double>& p);
  ClassDistribution(double fair, double potentially_unfair, double clearly_unfair)
      : ClassDistribution(LabelVector<double>(fair, potentially_unfair, clearly_unfair)) {}

  // Rescales non-negative weights to sum to 1.
  static ClassDistribution normalized(const LabelVector<double>& weights);

  double operator[](Label l) const { return p_(static_cast<Eigen::Index>(index_of(l))); }
  const LabelVector<double>& vector() const { return p_; }

  friend bool operator==(const ClassDistribution& a, const ClassDistribution& b) {
    return a.p_ == b.p_;
  }

 private:
  LabelVector<double> p_;
};

// Argmax label; ties go to the more severe label.
Label decode(const ClassDistribution& distribution);

struct Prediction {
  std::string sentence_id;
  ClassDistribution distribution;
  Label predicted = Label::Fair;
  double confidence = 0.0;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

// predicted = decode(distribution); confidence = its probability.
Prediction make_prediction(std::string sentence_id, const ClassDistribution& distribution);

void to_json(nlohmann::json& j, const ClassDistribution& d);
void from_json(const nlohmann::json& j, ClassDistribution& d);
void to_json(nlohmann::json& j, const Prediction& p);
void from_json(const nlohmann::json& j, Prediction& p);

}  // namespace clausefair::classifier
