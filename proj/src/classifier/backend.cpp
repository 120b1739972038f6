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

#include "clausefair/classifier/backend.hpp"

#include <array>

#include "clausefair/classifier/softmax_regression.hpp"
#include "clausefair/error.hpp"
#include "clausefair/util.hpp"

namespace clausefair::classifier {

namespace {

constexpr std::string_view kCheckpointFormat = "clausefair.checkpoint";
constexpr int kCheckpointVersion = 1;

template <typename Scalar>
std::unique_ptr<ClassifierBackend> restore(const nlohmann::json& j) {
  auto features = j.at("features").get<FeatureSpec>();
  auto backend = std::make_unique<SoftmaxHashedBackend<Scalar>>(features);
  auto& model = backend->model();
  const auto bias = j.at("bias").get<std::vector<double>>();
  if (bias.size() != kNumLabels) throw Error(ErrorCode::InvalidCheckpoint, "bias must have 3 entries");
  for (std::size_t k = 0; k < kNumLabels; ++k) {
    model.bias()(static_cast<Eigen::Index>(k)) = static_cast<Scalar>(bias[k]);
  }
  for (const auto& col : j.at("columns")) {
    const auto index = col.at(0).get<Eigen::Index>();
    if (index < 0 || index >= model.dimension()) {
      throw Error(ErrorCode::InvalidCheckpoint, "weight column out of range");
    }
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      model.weights()(static_cast<Eigen::Index>(k), index) =
          static_cast<Scalar>(col.at(k + 1).get<double>());
    }
  }
  backend->mark_trained(j.at("config").get<TrainConfig>());
  return backend;
}

}  // namespace

TrainConfig TrainConfig::reference() {
  TrainConfig c;
  c.batch_size = 16;
  c.learning_rate = 2.0;
  c.epochs = 40;
  c.warmup_steps = 0;
  c.weight_decay = 1e-4;
  c.dropout = 0.0;
  c.max_sequence_length = 256;
  return c;
}

void TrainConfig::validate() const {
  if (batch_size <= 0) throw Error(ErrorCode::ConfigError, "batch_size must be positive");
  if (!(learning_rate > 0.0)) throw Error(ErrorCode::ConfigError, "learning_rate must be positive");
  if (epochs <= 0) throw Error(ErrorCode::ConfigError, "epochs must be positive");
  if (warmup_steps < 0) throw Error(ErrorCode::ConfigError, "warmup_steps must be non-negative");
  if (!(weight_decay >= 0.0)) throw Error(ErrorCode::ConfigError, "weight_decay must be non-negative");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw Error(ErrorCode::ConfigError, "dropout must be in [0, 1)");
  if (max_sequence_length <= 0) {
    throw Error(ErrorCode::ConfigError, "max_sequence_length must be positive");
  }
}

template <typename Scalar>
nlohmann::json SoftmaxHashedBackend<Scalar>::checkpoint() const {
  nlohmann::json columns = nlohmann::json::array();
  const auto& w = model_.weights();
  for (Eigen::Index c = 0; c < w.cols(); ++c) {
    if (w.col(c).isZero(0)) continue;
    nlohmann::json col = nlohmann::json::array({c});
    for (Eigen::Index k = 0; k < w.rows(); ++k) col.push_back(static_cast<double>(w(k, c)));
    columns.push_back(std::move(col));
  }
  std::vector<double> bias;
  for (Eigen::Index k = 0; k < model_.bias().size(); ++k) {
    bias.push_back(static_cast<double>(model_.bias()(k)));
  }
  return nlohmann::json{{"format", kCheckpointFormat},
                        {"version", kCheckpointVersion},
                        {"backend", id()},
                        {"scalar", std::is_same_v<Scalar, float> ? "float32" : "float64"},
                        {"config", config_},
                        {"features", features_},
                        {"labels", {"fair", "potentially_unfair", "clearly_unfair"}},
                        {"bias", bias},
                        {"columns", columns}};
}

template class SoftmaxHashedBackend<double>;
template class SoftmaxHashedBackend<float>;

std::unique_ptr<ClassifierBackend> make_backend(std::string_view id, const nlohmann::json& options) {
  FeatureSpec features;
  if (options.is_object() && options.contains("features")) {
    features = options.at("features").get<FeatureSpec>();
  }
  if (id == kSoftmaxHashedBackend) return std::make_unique<SoftmaxHashedBackend<double>>(features);
  if (id == kSoftmaxHashedF32Backend) return std::make_unique<SoftmaxHashedBackend<float>>(features);
  throw Error(ErrorCode::UnknownBackend, "unknown classifier backend '" + std::string(id) + "'");
}

std::unique_ptr<ClassifierBackend> load_checkpoint(const nlohmann::json& j) {
  try {
    if (j.value("format", std::string{}) != kCheckpointFormat) {
      throw Error(ErrorCode::InvalidCheckpoint, "not a clausefair checkpoint");
    }
    if (j.at("version").get<int>() != kCheckpointVersion) {
      throw Error(ErrorCode::InvalidCheckpoint, "unsupported checkpoint version");
    }
    const auto id = j.at("backend").get<std::string>();
    if (id == kSoftmaxHashedBackend) return restore<double>(j);
    if (id == kSoftmaxHashedF32Backend) return restore<float>(j);
    throw Error(ErrorCode::UnknownBackend, "unknown classifier backend '" + id + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidCheckpoint, e.what());
  }
}

std::unique_ptr<ClassifierBackend> load_checkpoint(const std::filesystem::path& file) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(file));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidCheckpoint, file.string() + ": " + e.what());
  }
  return load_checkpoint(j);
}

void save_checkpoint(const ClassifierBackend& model, const std::filesystem::path& file) {
  write_file_atomic(file, model.checkpoint().dump() + "\n");
}

TrainConfig default_train_config(std::string_view backend_id) {
  if (backend_id == kSoftmaxHashedBackend || backend_id == kSoftmaxHashedF32Backend) {
    return TrainConfig::reference();
  }
  return TrainConfig{};
}

void fit(ClassifierBackend& backend, std::span<const LabeledExample> examples,
         const TrainConfig& cfg) {
  if (examples.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no training examples");
  std::array<std::size_t, kNumLabels> counts{};
  for (const auto& e : examples) ++counts[index_of(e.label)];
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    if (counts[c] == 0) {
      throw Error(ErrorCode::MissingClass, "training set has no '" +
                                               std::string(to_string(label_at(c))) + "' examples");
    }
  }
  backend.fit(examples, cfg);
}

std::vector<Prediction> predict(const ClassifierBackend& model, std::span<const TextItem> items) {
  if (!model.trained()) throw Error(ErrorCode::InvalidState, "model has not been trained");
  std::vector<std::string> texts;
  texts.reserve(items.size());
  for (const auto& item : items) texts.push_back(item.text);
  const auto distributions = model.predict_distribution(texts);
  std::vector<Prediction> out;
  out.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    out.push_back(make_prediction(items[i].sentence_id, distributions[i]));
  }
  return out;
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"batch_size", c.batch_size},
                     {"learning_rate", c.learning_rate},
                     {"epochs", c.epochs},
                     {"warmup_steps", c.warmup_steps},
                     {"weight_decay", c.weight_decay},
                     {"dropout", c.dropout},
                     {"max_sequence_length", c.max_sequence_length},
                     {"seed", c.seed},
                     {"warm_start", c.warm_start}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  c.batch_size = j.value("batch_size", c.batch_size);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.epochs = j.value("epochs", c.epochs);
  c.warmup_steps = j.value("warmup_steps", c.warmup_steps);
  c.weight_decay = j.value("weight_decay", c.weight_decay);
  c.dropout = j.value("dropout", c.dropout);
  c.max_sequence_length = j.value("max_sequence_length", c.max_sequence_length);
  c.seed = j.value("seed", c.seed);
  c.warm_start = j.value("warm_start", c.warm_start);
}

}  // namespace clausefair::classifier
