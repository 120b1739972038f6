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

#include "clausefair/selftrain/selftrain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "clausefair/error.hpp"
#include "clausefair/util.hpp"

namespace clausefair::selftrain {

namespace {

std::vector<Label> gold_of(std::span<const LabeledExample> examples) {
  std::vector<Label> out;
  out.reserve(examples.size());
  for (const auto& e : examples) out.push_back(e.label);
  return out;
}

std::vector<TextItem> items_of(std::span<const LabeledExample> examples) {
  std::vector<TextItem> out;
  out.reserve(examples.size());
  for (const auto& e : examples) out.push_back({e.sentence_id, e.text});
  return out;
}

nlohmann::json per_class_json(const std::array<std::size_t, kNumLabels>& counts) {
  nlohmann::json j = nlohmann::json::object();
  for (Label l : kAllLabels) j[std::string(to_string(l))] = counts[index_of(l)];
  return j;
}

}  // namespace

void ThresholdConfig::validate() const {
  for (double t : tau) {
    if (!(t > 0.0 && t < 1.0)) {
      throw Error(ErrorCode::InvalidThreshold, "confidence thresholds must lie in (0, 1)");
    }
  }
}

std::string_view to_string(MonitorSplit split) {
  return split == MonitorSplit::Test ? "test" : "validation";
}

MonitorSplit monitor_split_from_string(std::string_view text) {
  const std::string key = to_lower(text);
  if (key == "validation") return MonitorSplit::Validation;
  if (key == "test") return MonitorSplit::Test;
  throw Error(ErrorCode::ConfigError, "monitor split must be 'validation' or 'test'");
}

void StoppingPolicy::validate() const {
  if (patience < 1) throw Error(ErrorCode::ConfigError, "patience must be at least 1");
  if (max_iterations < 1) throw Error(ErrorCode::ConfigError, "max_iterations must be at least 1");
}

std::array<std::size_t, kNumLabels> SelfTrainState::class_counts() const {
  std::array<std::size_t, kNumLabels> counts{};
  for (const auto& e : labeled_pool) ++counts[index_of(e.label)];
  return counts;
}

SelfTrainState make_state(std::vector<LabeledExample> labeled, std::vector<TextItem> unlabeled) {
  std::set<std::string> ids;
  for (const auto& e : labeled) {
    if (!ids.insert(e.sentence_id).second) {
      throw Error(ErrorCode::Conflict, "duplicate sentence '" + e.sentence_id + "' in labeled pool");
    }
  }
  for (const auto& u : unlabeled) {
    if (!ids.insert(u.sentence_id).second) {
      throw Error(ErrorCode::Conflict,
                  "sentence '" + u.sentence_id + "' is both labeled and unlabeled, or repeated");
    }
  }
  SelfTrainState state;
  state.labeled_pool = std::move(labeled);
  state.unlabeled_pool = std::move(unlabeled);
  return state;
}

FilterResult filter_by_confidence(std::span<const Prediction> predictions,
                                  const ThresholdConfig& tau) {
  FilterResult out;
  for (const auto& p : predictions) {
    if (p.confidence > tau[p.predicted]) {
      out.accepted.push_back(p);
    } else {
      out.rejected.push_back(p);
    }
  }
  return out;
}

SelfTrainState inject_synthetic(SelfTrainState state, std::span<const LabeledExample> examples) {
  if (examples.empty()) return state;
  if (state.iteration > 0) {
    throw Error(ErrorCode::InvalidState, "synthetic data must be injected before iteration 1");
  }
  std::set<std::string> ids;
  for (const auto& e : state.labeled_pool) ids.insert(e.sentence_id);
  for (const auto& u : state.unlabeled_pool) ids.insert(u.sentence_id);
  for (const auto& e : examples) {
    if (e.provenance != Provenance::Synthetic || !e.verified) {
      throw Error(ErrorCode::UnverifiedSynthetic,
                  "'" + e.sentence_id + "' is not a verified synthetic example");
    }
    if (!ids.insert(e.sentence_id).second) {
      throw Error(ErrorCode::Conflict, "synthetic id '" + e.sentence_id + "' already in a pool");
    }
  }
  InjectionEvent event;
  event.count = examples.size();
  for (const auto& e : examples) {
    ++event.per_class[index_of(e.label)];
    state.labeled_pool.push_back(e);
  }
  event.labeled_size_after = state.labeled_pool.size();
  state.injections.push_back(event);
  return state;
}

SelfTrainResult self_train(const ClassifierBackend& prototype, SelfTrainState state,
                           const MonitorSets& monitor, const ThresholdConfig& tau,
                           const StoppingPolicy& stopping, const TrainConfig& cfg,
                           const SelfTrainOptions& options) {
  tau.validate();
  stopping.validate();
  cfg.validate();
  const auto& monitor_set =
      stopping.monitor == MonitorSplit::Test ? monitor.test : monitor.validation;
  if (monitor_set.empty()) {
    throw Error(ErrorCode::EmptyInput,
                "monitored split '" + std::string(to_string(stopping.monitor)) + "' is empty");
  }
  const auto monitor_items = items_of(monitor_set);
  const auto monitor_gold = gold_of(monitor_set);

  // Refresh mode re-predicts every pseudo-labeled sentence each round.
  std::vector<LabeledExample> base_pool;
  std::vector<TextItem> all_unlabeled;
  if (options.refresh_pseudo_labels) {
    base_pool = state.labeled_pool;
    all_unlabeled = state.unlabeled_pool;
  }

  std::unique_ptr<ClassifierBackend> best;
  std::unique_ptr<ClassifierBackend> previous;
  double best_accuracy = -1.0;
  int stale = 0;

  while (true) {
    const int iteration = state.iteration + 1;
    std::unique_ptr<ClassifierBackend> model =
        cfg.warm_start && previous ? previous->clone() : prototype.clone();
    classifier::fit(*model, state.labeled_pool, cfg);

    IterationRecord record;
    record.iteration = iteration;
    record.labeled_size = state.labeled_pool.size();
    record.unlabeled_size = state.unlabeled_pool.size();
    const auto monitor_predictions = classifier::predict(*model, monitor_items);
    record.metrics = classifier::evaluate(std::span<const Prediction>(monitor_predictions),
                                          monitor_gold);
    record.improved = record.metrics.accuracy > best_accuracy;
    if (record.improved) {
      best_accuracy = record.metrics.accuracy;
      best = model->clone();
      state.best_iteration = iteration;
      stale = 0;
    } else {
      ++stale;
    }

    const bool pool_was_empty = state.unlabeled_pool.empty();
    if (!pool_was_empty) {
      const auto predictions = classifier::predict(*model, state.unlabeled_pool);
      for (const auto& p : predictions) {
        const int bin = std::min(kHistogramBins - 1,
                                 static_cast<int>(std::floor(p.confidence * kHistogramBins)));
        ++record.confidence_histogram[index_of(p.predicted)][static_cast<std::size_t>(bin)];
      }
      auto filtered = filter_by_confidence(predictions, tau);

      std::map<std::string, const TextItem*> by_id;
      for (const auto& u : state.unlabeled_pool) by_id[u.sentence_id] = &u;
      std::vector<LabeledExample> accepted;
      for (const auto& p : filtered.accepted) {
        LabeledExample e;
        e.sentence_id = p.sentence_id;
        e.text = by_id.at(p.sentence_id)->text;
        e.label = p.predicted;
        e.provenance = Provenance::Pseudo;
        e.confidence = p.confidence;
        e.iteration = iteration;
        ++record.accepted_per_class[index_of(e.label)];
        accepted.push_back(std::move(e));
      }
      record.accepted = accepted.size();

      if (options.refresh_pseudo_labels) {
        state.labeled_pool = base_pool;
        state.labeled_pool.insert(state.labeled_pool.end(), accepted.begin(), accepted.end());
        std::set<std::string> taken;
        for (const auto& e : accepted) taken.insert(e.sentence_id);
        state.unlabeled_pool.clear();
        for (const auto& u : all_unlabeled) {
          if (!taken.contains(u.sentence_id)) state.unlabeled_pool.push_back(u);
        }
      } else {
        state.labeled_pool.insert(state.labeled_pool.end(), accepted.begin(), accepted.end());
        std::vector<TextItem> remaining;
        remaining.reserve(filtered.rejected.size());
        for (const auto& p : filtered.rejected) remaining.push_back(*by_id.at(p.sentence_id));
        state.unlabeled_pool = std::move(remaining);
      }
    }

    state.history.push_back(std::move(record));
    state.iteration = iteration;
    previous = std::move(model);

    if (pool_was_empty || stale >= stopping.patience || iteration >= stopping.max_iterations) {
      break;
    }
  }
  return SelfTrainResult{std::move(best), std::move(state)};
}

nlohmann::json history_record(const IterationRecord& r) {
  nlohmann::json histogram = nlohmann::json::object();
  for (Label l : kAllLabels) histogram[std::string(to_string(l))] = r.confidence_histogram[index_of(l)];
  return nlohmann::json{{"iteration", r.iteration},
                        {"labeled_size", r.labeled_size},
                        {"unlabeled_size", r.unlabeled_size},
                        {"accepted", r.accepted},
                        {"accepted_per_class", per_class_json(r.accepted_per_class)},
                        {"monitored_accuracy", r.metrics.accuracy},
                        {"improved", r.improved},
                        {"metrics", r.metrics},
                        {"confidence_histogram", histogram}};
}

void write_history(const std::filesystem::path& file, std::span<const IterationRecord> history) {
  std::vector<nlohmann::json> lines;
  for (const auto& r : history) lines.push_back(history_record(r));
  write_json_lines(file, lines);
}

void to_json(nlohmann::json& j, const ThresholdConfig& t) {
  j = nlohmann::json::object();
  for (Label l : kAllLabels) j[std::string(to_string(l))] = t[l];
}

void from_json(const nlohmann::json& j, ThresholdConfig& t) {
  for (Label l : kAllLabels) {
    t.tau[index_of(l)] = j.at(std::string(to_string(l))).get<double>();
  }
}

void to_json(nlohmann::json& j, const StoppingPolicy& s) {
  j = nlohmann::json{{"patience", s.patience},
                     {"monitor_split", to_string(s.monitor)},
                     {"max_iterations", s.max_iterations}};
}

void from_json(const nlohmann::json& j, StoppingPolicy& s) {
  s.patience = j.value("patience", s.patience);
  if (j.contains("monitor_split")) {
    s.monitor = monitor_split_from_string(j.at("monitor_split").get<std::string>());
  }
  s.max_iterations = j.value("max_iterations", s.max_iterations);
}

void to_json(nlohmann::json& j, const InjectionEvent& e) {
  j = nlohmann::json{{"count", e.count},
                     {"per_class", per_class_json(e.per_class)},
                     {"labeled_size_after", e.labeled_size_after}};
}

}  // namespace clausefair::selftrain
