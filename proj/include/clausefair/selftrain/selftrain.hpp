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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "clausefair/classifier/backend.hpp"
#include "clausefair/classifier/metrics.hpp"
#include "clausefair/labeled_example.hpp"

namespace clausefair::selftrain {

using classifier::ClassifierBackend;
using classifier::MetricsReport;
using classifier::Prediction;
using classifier::TextItem;
using classifier::TrainConfig;

// Per-class confidence thresholds. A prediction is accepted as a pseudo-label
// only if its confidence strictly exceeds the threshold of its predicted
// class.
struct ThresholdConfig {
  std::array<double, kNumLabels> tau = {0.85, 0.75, 0.65};

  double operator[](Label l) const { return tau[index_of(l)]; }
  // Throws Error(InvalidThreshold) unless every threshold is in (0, 1).
  void validate() const;

  friend bool operator==(const ThresholdConfig&, const ThresholdConfig&) = default;
};

enum class MonitorSplit { Validation, Test };
std::string_view to_string(MonitorSplit split);
MonitorSplit monitor_split_from_string(std::string_view text);

struct StoppingPolicy {
  // Consecutive non-improving iterations tolerated before stopping.
  int patience = 1;
  MonitorSplit monitor = MonitorSplit::Validation;
  int max_iterations = 10;

  void validate() const;

  friend bool operator==(const StoppingPolicy&, const StoppingPolicy&) = default;
};

struct SelfTrainOptions {
  // Return earlier pseudo-labels to the unlabeled pool each round so they are
  // re-predicted, instead of freezing them once accepted.
  bool refresh_pseudo_labels = false;
};

inline constexpr int kHistogramBins = 10;
// confidence_histogram[c][b]: predictions of class c whose confidence falls in
// [b/10, (b+1)/10), the last bin closed.
using ConfidenceHistogram = std::array<std::array<long, kHistogramBins>, kNumLabels>;

struct IterationRecord {
  int iteration = 0;             // 1-based
  std::size_t labeled_size = 0;  // pool the model of this iteration was fit on
  std::size_t unlabeled_size = 0;  // pool it then predicted on
  std::size_t accepted = 0;
  std::array<std::size_t, kNumLabels> accepted_per_class{};
  MetricsReport metrics;  // on the monitored split
  bool improved = false;
  ConfidenceHistogram confidence_histogram{};
};

struct InjectionEvent {
  std::size_t count = 0;
  std::array<std::size_t, kNumLabels> per_class{};
  std::size_t labeled_size_after = 0;
};

struct SelfTrainState {
  int iteration = 0;
  std::vector<LabeledExample> labeled_pool;
  std::vector<TextItem> unlabeled_pool;
  std::vector<IterationRecord> history;
  std::vector<InjectionEvent> injections;
  int best_iteration = 0;

  std::array<std::size_t, kNumLabels> class_counts() const;
};

// Throws Error(Conflict) if a sentence id appears in both pools or twice in
// one.
SelfTrainState make_state(std::vector<LabeledExample> labeled, std::vector<TextItem> unlabeled);

struct FilterResult {
  std::vector<Prediction> accepted;
  std::vector<Prediction> rejected;
};

// accepted = { p : p.confidence > tau[p.predicted] }, input order preserved
// in both outputs.
FilterResult filter_by_confidence(std::span<const Prediction> predictions,
                                  const ThresholdConfig& tau);

// Appends verified synthetic examples to the labeled pool before the first
// iteration and records the injection. Throws Error(UnverifiedSynthetic) if
// any example is not a verified Synthetic one (nothing is injected then) and
// Error(InvalidState) once iterations have started.
SelfTrainState inject_synthetic(SelfTrainState state, std::span<const LabeledExample> examples);

struct MonitorSets {
  std::vector<LabeledExample> validation;
  std::vector<LabeledExample> test;
};

struct SelfTrainResult {
  std::unique_ptr<ClassifierBackend> model;  // best by monitored accuracy
  SelfTrainState state;
};

// Teacher-student loop. Each iteration fits a fresh copy of `prototype` (or
// warm-starts from the previous model when cfg.warm_start) on the labeled
// pool, scores it on the monitored split, predicts the unlabeled pool and
// moves accepted predictions into the labeled pool as Pseudo examples. The
// student of one iteration is the teacher of the next.
//
// Stops when the monitored accuracy has not improved for `patience`
// consecutive iterations, at max_iterations, or after an iteration that
// started with an empty unlabeled pool. Ties in accuracy keep the earlier
// model.
SelfTrainResult self_train(const ClassifierBackend& prototype, SelfTrainState state,
                           const MonitorSets& monitor, const ThresholdConfig& tau,
                           const StoppingPolicy& stopping, const TrainConfig& cfg,
                           const SelfTrainOptions& options = {});

// One JSON object per iteration, suitable for plotting the progression.
nlohmann::json history_record(const IterationRecord& record);
void write_history(const std::filesystem::path& file, std::span<const IterationRecord> history);

void to_json(nlohmann::json& j, const ThresholdConfig& t);
void from_json(const nlohmann::json& j, ThresholdConfig& t);
void to_json(nlohmann::json& j, const StoppingPolicy& s);
void from_json(const nlohmann::json& j, StoppingPolicy& s);
void to_json(nlohmann::json& j, const InjectionEvent& e);

}  // namespace clausefair::selftrain
