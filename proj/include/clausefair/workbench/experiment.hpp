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

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "clausefair/classifier/backend.hpp"
#include "clausefair/classifier/metrics.hpp"
#include "clausefair/corpus/split.hpp"
#include "clausefair/llm/client.hpp"
#include "clausefair/selftrain/selftrain.hpp"

namespace clausefair::workbench {

enum class Technique {
  Vanilla,
  DataAugmentation,
  DataAugmentationSelfTrain,
  DirectPrompt,
  CoTPrompt,
};

std::string_view to_string(Technique t);     // "data_augmentation_self_train"
std::string_view display_name(Technique t);  // "Data Augmentation + Self-Training"
Technique technique_from_string(std::string_view text);
bool is_prompting(Technique t);

struct DatasetPaths {
  std::filesystem::path labeled;                   // JSONL of labeled examples
  std::optional<std::filesystem::path> unlabeled;  // JSONL of {sentence_id, text}
  std::optional<std::filesystem::path> synthetic;  // JSONL of verified synthetic examples
  std::optional<std::filesystem::path> split;      // precomputed split; else stratified
};

struct ExperimentConfig {
  std::string name;
  Technique technique = Technique::Vanilla;
  // Shown in the report's Model column. Defaults to the backend id, or to
  // "llm" for prompting techniques.
  std::string model;
  std::string backend{classifier::kSoftmaxHashedBackend};
  nlohmann::json backend_options = nlohmann::json::object();
  classifier::TrainConfig train = classifier::TrainConfig::reference();
  // Self-training only.
  std::optional<selftrain::ThresholdConfig> thresholds;
  std::optional<selftrain::StoppingPolicy> stopping;
  selftrain::SelfTrainOptions self_train;
  corpus::SplitConfig split;
  DatasetPaths data;
  // Prompting only: a client spec for llm::make_client and a prompt asset.
  std::optional<nlohmann::json> llm;
  std::optional<std::filesystem::path> prompt;
  llm::RequestSettings request;
  std::uint64_t seed = 0;
};

// Validates a config document. Relative paths resolve against `base_dir`.
// Violations throw Error(ConfigError) whose message starts with the JSON
// pointer of the offending field, e.g. "/train/epochs: expected an integer".
ExperimentConfig parse_experiment_config(const nlohmann::json& doc,
                                         const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& file);

// Canonical form: every field explicit, keys sorted, paths as resolved.
nlohmann::json canonical_json(const ExperimentConfig& cfg);
// 16 hex digits of FNV-1a over the canonical JSON.
std::string config_hash(const ExperimentConfig& cfg);

struct RunArtifacts {
  std::string model;        // checkpoint, trainable techniques
  std::string history;      // self-training history JSONL
  std::string predictions;  // per-sentence predictions JSONL
};

struct RunRecord {
  std::string name;
  Technique technique = Technique::Vanilla;
  std::string model;
  std::string config_hash;
  std::string started_at;
  std::string finished_at;
  classifier::MetricsReport metrics;  // on the test split
  RunArtifacts artifacts;
  // Training pool class counts before and after synthetic injection.
  std::array<std::size_t, kNumLabels> train_counts{};
  std::array<std::size_t, kNumLabels> train_counts_after{};
  int iterations = 0;
  int best_iteration = 0;
};

struct RunOptions {
  // Replaces the client built from the config's "llm" spec.
  std::shared_ptr<llm::LlmClient> client;
  // Called with short stage names ("split", "train", "iteration 3", ...).
  std::function<void(const std::string&)> progress;
};

// Runs the experiment end to end and persists under `store_root`:
// runs/<name>.json, models/<name>.json, history/<name>.jsonl and
// predictions/<name>.jsonl. Module errors are rethrown with the experiment
// name prefixed and their code unchanged.
RunRecord run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& store_root,
                         const RunOptions& options = {});

std::optional<RunRecord> load_run(const std::filesystem::path& store_root, const std::string& name);
std::vector<RunRecord> load_runs(const std::filesystem::path& store_root);

void to_json(nlohmann::json& j, const RunRecord& r);
void from_json(const nlohmann::json& j, RunRecord& r);

}  // namespace clausefair::workbench
