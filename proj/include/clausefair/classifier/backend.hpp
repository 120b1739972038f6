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

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "clausefair/classifier/distribution.hpp"
#include "clausefair/labeled_example.hpp"

namespace clausefair::classifier {

// Training hyperparameters. A default-constructed config carries the values
// used to fine-tune the transformer classifier (batch 16, learning rate in
// [1e-6, 5e-6], 12 epochs, 200 warmup steps, weight decay 0.08, dropout in
// [0.2, 0.45], 256 tokens). Those learning rates are far too small for the
// reference backend, which has its own defaults in reference().
struct TrainConfig {
  int batch_size = 16;
  double learning_rate = 5e-6;
  int epochs = 12;
  int warmup_steps = 200;
  double weight_decay = 0.08;
  double dropout = 0.2;
  int max_sequence_length = 256;
  std::uint64_t seed = 0;
  // Keep the current weights instead of re-initializing before fit.
  bool warm_start = false;

  static TrainConfig reference();
  // Throws Error(ConfigError) for non-positive sizes or out-of-range rates.
  void validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// A sentence to classify.
struct TextItem {
  std::string sentence_id;
  std::string text;
};

// Contract every classifier implementation honors. predict_distribution is
// const and safe to call concurrently on a trained model; fit mutates.
class ClassifierBackend {
 public:
  virtual ~ClassifierBackend() = default;

  virtual std::string_view id() const = 0;
  virtual bool trained() const = 0;
  virtual void fit(std::span<const LabeledExample> examples, const TrainConfig& cfg) = 0;
  virtual std::vector<ClassDistribution> predict_distribution(
      std::span<const std::string> texts) const = 0;
  virtual std::unique_ptr<ClassifierBackend> clone() const = 0;
  // Self-describing checkpoint: backend id, config, feature space, weights.
  virtual nlohmann::json checkpoint() const = 0;
};

// Backend ids understood by make_backend and load_checkpoint.
inline constexpr std::string_view kSoftmaxHashedBackend = "softmax-hashed";
inline constexpr std::string_view kSoftmaxHashedF32Backend = "softmax-hashed-f32";

// `options` may carry a "features" object (see FeatureSpec).
std::unique_ptr<ClassifierBackend> make_backend(std::string_view id,
                                                const nlohmann::json& options = {});
std::unique_ptr<ClassifierBackend> load_checkpoint(const nlohmann::json& checkpoint);
std::unique_ptr<ClassifierBackend> load_checkpoint(const std::filesystem::path& file);
void save_checkpoint(const ClassifierBackend& model, const std::filesystem::path& file);

// Training defaults appropriate for `backend_id`.
TrainConfig default_train_config(std::string_view backend_id);

// Validates the training set, then trains. Throws Error(EmptyTrainingSet) for
// no examples and Error(MissingClass) unless all three labels occur.
void fit(ClassifierBackend& backend, std::span<const LabeledExample> examples,
         const TrainConfig& cfg);

// One prediction per item, order-aligned. Throws Error(InvalidState) if the
// model was never trained.
std::vector<Prediction> predict(const ClassifierBackend& model, std::span<const TextItem> items);

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

}  // namespace clausefair::classifier
