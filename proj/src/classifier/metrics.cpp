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

#include "clausefair/classifier/metrics.hpp"

#include "clausefair/error.hpp"

namespace clausefair::classifier {

namespace {

using LabelCounts = Eigen::Matrix<long, static_cast<int>(kNumLabels), 1>;

// `missing` counts, per gold class, predictions that carried no label. They
// belong to the total and to gold support but to no confusion column.
MetricsReport summarize(const ConfusionMatrix& confusion, const LabelCounts& missing) {
  MetricsReport r;
  r.confusion = confusion;
  r.unlabeled = missing.sum();
  r.total = confusion.sum() + r.unlabeled;
  r.correct = confusion.trace();
  r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.total);

  const LabelCounts gold_counts = confusion.rowwise().sum() + missing;
  const auto predicted_counts = confusion.colwise().sum();
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    const auto k = static_cast<Eigen::Index>(c);
    ClassMetrics& m = r.per_class[c];
    const long tp = confusion(k, k);
    m.predicted = predicted_counts(k);
    m.support = gold_counts(k);
    const std::string name(display_name(label_at(c)));
    if (m.predicted > 0) {
      m.precision = static_cast<double>(tp) / static_cast<double>(m.predicted);
    } else {
      m.zero_division = true;
      r.notes.push_back(name + ": no predictions, precision reported as 0");
    }
    if (m.support > 0) {
      m.recall = static_cast<double>(tp) / static_cast<double>(m.support);
    } else {
      m.zero_division = true;
      r.notes.push_back(name + ": no gold examples, recall reported as 0");
    }
    if (m.precision + m.recall > 0.0) {
      m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    } else {
      m.zero_division = true;
      if (m.support == 0 && m.predicted == 0) {
        r.notes.push_back(name + ": absent from gold and predictions, F1 reported as 0");
      }
    }
  }
  for (const auto& m : r.per_class) {
    r.macro_precision += m.precision;
    r.macro_recall += m.recall;
    r.macro_f1 += m.f1;
  }
  r.macro_precision /= static_cast<double>(kNumLabels);
  r.macro_recall /= static_cast<double>(kNumLabels);
  r.macro_f1 /= static_cast<double>(kNumLabels);
  if (r.unlabeled > 0) {
    r.notes.push_back(std::to_string(r.unlabeled) + " predictions carried no label");
  }
  return r;
}

void check_sizes(std::size_t predicted, std::size_t gold) {
  if (predicted != gold) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(predicted) + " predictions vs " +
                                               std::to_string(gold) + " gold labels");
  }
  if (gold == 0) throw Error(ErrorCode::EmptyInput, "nothing to evaluate");
}

}  // namespace

MetricsReport evaluate(std::span<const std::optional<Label>> predicted,
                       std::span<const Label> gold) {
  check_sizes(predicted.size(), gold.size());
  ConfusionMatrix confusion = ConfusionMatrix::Zero();
  LabelCounts missing = LabelCounts::Zero();
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto g = static_cast<Eigen::Index>(index_of(gold[i]));
    if (predicted[i]) {
      confusion(g, static_cast<Eigen::Index>(index_of(*predicted[i])))++;
    } else {
      missing(g)++;
    }
  }
  return summarize(confusion, missing);
}

MetricsReport evaluate(std::span<const Label> predicted, std::span<const Label> gold) {
  check_sizes(predicted.size(), gold.size());
  ConfusionMatrix confusion = ConfusionMatrix::Zero();
  for (std::size_t i = 0; i < gold.size(); ++i) {
    confusion(static_cast<Eigen::Index>(index_of(gold[i])),
              static_cast<Eigen::Index>(index_of(predicted[i])))++;
  }
  return summarize(confusion, LabelCounts::Zero());
}

MetricsReport evaluate(std::span<const Prediction> predictions, std::span<const Label> gold) {
  std::vector<Label> labels;
  labels.reserve(predictions.size());
  for (const auto& p : predictions) labels.push_back(p.predicted);
  return evaluate(std::span<const Label>(labels), gold);
}

void to_json(nlohmann::json& j, const ClassMetrics& m) {
  j = nlohmann::json{{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1},
                     {"support", m.support},     {"predicted", m.predicted},
                     {"zero_division", m.zero_division}};
}

void from_json(const nlohmann::json& j, ClassMetrics& m) {
  m.precision = j.at("precision").get<double>();
  m.recall = j.at("recall").get<double>();
  m.f1 = j.at("f1").get<double>();
  m.support = j.at("support").get<long>();
  m.predicted = j.value("predicted", 0L);
  m.zero_division = j.value("zero_division", false);
}

void to_json(nlohmann::json& j, const MetricsReport& r) {
  nlohmann::json classes = nlohmann::json::object();
  for (Label l : kAllLabels) classes[std::string(to_string(l))] = r[l];
  nlohmann::json confusion = nlohmann::json::array();
  for (Eigen::Index g = 0; g < r.confusion.rows(); ++g) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index p = 0; p < r.confusion.cols(); ++p) row.push_back(r.confusion(g, p));
    confusion.push_back(row);
  }
  j = nlohmann::json{{"classes", classes},
                     {"macro", {{"precision", r.macro_precision},
                                {"recall", r.macro_recall},
                                {"f1", r.macro_f1}}},
                     {"accuracy", r.accuracy},
                     {"total", r.total},
                     {"correct", r.correct},
                     {"unlabeled", r.unlabeled},
                     {"confusion", confusion},
                     {"notes", r.notes}};
}

void from_json(const nlohmann::json& j, MetricsReport& r) {
  for (Label l : kAllLabels) {
    r.per_class[index_of(l)] = j.at("classes").at(std::string(to_string(l))).get<ClassMetrics>();
  }
  r.macro_precision = j.at("macro").at("precision").get<double>();
  r.macro_recall = j.at("macro").at("recall").get<double>();
  r.macro_f1 = j.at("macro").at("f1").get<double>();
  r.accuracy = j.at("accuracy").get<double>();
  r.total = j.at("total").get<long>();
  r.correct = j.at("correct").get<long>();
  r.unlabeled = j.value("unlabeled", 0L);
  r.confusion = ConfusionMatrix::Zero();
  if (j.contains("confusion")) {
    const auto& c = j.at("confusion");
    for (Eigen::Index g = 0; g < r.confusion.rows(); ++g) {
      for (Eigen::Index p = 0; p < r.confusion.cols(); ++p) {
        r.confusion(g, p) = c.at(static_cast<std::size_t>(g)).at(static_cast<std::size_t>(p)).get<long>();
      }
    }
  }
  r.notes = j.value("notes", std::vector<std::string>{});
}

}  // namespace clausefair::classifier
