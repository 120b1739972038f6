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

#include <algorithm>
#include <memory>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "clausefair/classifier/backend.hpp"
#include "clausefair/classifier/distribution.hpp"
#include "clausefair/classifier/features.hpp"
#include "clausefair/util.hpp"

namespace clausefair::classifier {

// Multinomial logistic regression over sparse inputs.
template <typename Scalar>
class SoftmaxRegression {
 public:
  using Weights = Eigen::Matrix<Scalar, static_cast<int>(kNumLabels), Eigen::Dynamic>;
  using Bias = LabelVector<Scalar>;
  using Input = Eigen::SparseVector<Scalar>;

  SoftmaxRegression() = default;
  explicit SoftmaxRegression(Eigen::Index dimension)
      : weights_(Weights::Zero(kNumLabels, dimension)), bias_(Bias::Zero()) {}

  Eigen::Index dimension() const { return weights_.cols(); }
  const Weights& weights() const { return weights_; }
  Weights& weights() { return weights_; }
  const Bias& bias() const { return bias_; }
  Bias& bias() { return bias_; }

  Bias logits(const Input& x) const { return weights_ * x + bias_; }
  Bias probabilities(const Input& x) const { return softmax(logits(x)); }

  // One mini-batch gradient step on the mean cross-entropy, with decoupled
  // weight decay on the weights (not the bias). Returns the batch loss.
  Scalar step(std::span<const Input* const> inputs, std::span<const Label> targets,
              Scalar learning_rate, Scalar weight_decay) {
    const Scalar scale = learning_rate / static_cast<Scalar>(inputs.size());
    Scalar loss = 0;
    // Gradients are taken at the pre-step weights.
    std::vector<Bias> residuals(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      Bias p = probabilities(*inputs[i]);
      const auto t = static_cast<Eigen::Index>(index_of(targets[i]));
      loss -= std::log(std::max(p(t), std::numeric_limits<Scalar>::min()));
      p(t) -= Scalar(1);
      residuals[i] = p;
    }
    if (weight_decay > Scalar(0)) weights_ *= (Scalar(1) - learning_rate * weight_decay);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      for (typename Input::InnerIterator it(*inputs[i]); it; ++it) {
        weights_.col(it.index()).noalias() -= (scale * it.value()) * residuals[i];
      }
      bias_.noalias() -= scale * residuals[i];
    }
    return loss / static_cast<Scalar>(inputs.size());
  }

 private:
  Weights weights_;
  Bias bias_ = Bias::Zero();
};

// Reference backend: softmax regression over hashed n-gram features, trained
// by shuffled mini-batch gradient descent with linear learning-rate warmup
// and inverted feature dropout. Weights start at zero, so a fit is a pure
// function of (examples, config).
template <typename Scalar>
class SoftmaxHashedBackend final : public ClassifierBackend {
 public:
  explicit SoftmaxHashedBackend(FeatureSpec features = {})
      : features_(features), model_(features.dimension()) {
    features_.validate();
  }

  std::string_view id() const override {
    if constexpr (std::is_same_v<Scalar, float>) {
      return kSoftmaxHashedF32Backend;
    } else {
      return kSoftmaxHashedBackend;
    }
  }

  bool trained() const override { return trained_; }
  const FeatureSpec& features() const { return features_; }
  const TrainConfig& config() const { return config_; }
  const SoftmaxRegression<Scalar>& model() const { return model_; }
  SoftmaxRegression<Scalar>& model() { return model_; }
  void mark_trained(const TrainConfig& cfg) {
    config_ = cfg;
    trained_ = true;
  }

  void fit(std::span<const LabeledExample> examples, const TrainConfig& cfg) override {
    cfg.validate();
    if (!(cfg.warm_start && trained_)) model_ = SoftmaxRegression<Scalar>(features_.dimension());

    std::vector<typename SoftmaxRegression<Scalar>::Input> inputs;
    std::vector<Label> targets;
    inputs.reserve(examples.size());
    for (const auto& e : examples) {
      inputs.push_back(featurize<Scalar>(e.text, features_, cfg.max_sequence_length));
      targets.push_back(e.label);
    }

    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> order(inputs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto batch = static_cast<std::size_t>(cfg.batch_size);
    std::vector<typename SoftmaxRegression<Scalar>::Input> dropped(batch);
    std::vector<const typename SoftmaxRegression<Scalar>::Input*> batch_inputs;
    std::vector<Label> batch_targets;
    long step = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      seeded_shuffle(order, rng);
      for (std::size_t begin = 0; begin < order.size(); begin += batch) {
        const std::size_t end = std::min(order.size(), begin + batch);
        batch_inputs.clear();
        batch_targets.clear();
        for (std::size_t k = begin; k < end; ++k) {
          const auto& x = inputs[order[k]];
          if (cfg.dropout > 0.0) {
            dropped[k - begin] = apply_dropout(x, cfg.dropout, rng);
            batch_inputs.push_back(&dropped[k - begin]);
          } else {
            batch_inputs.push_back(&x);
          }
          batch_targets.push_back(targets[order[k]]);
        }
        double lr = cfg.learning_rate;
        if (cfg.warmup_steps > 0 && step < cfg.warmup_steps) {
          lr *= static_cast<double>(step + 1) / static_cast<double>(cfg.warmup_steps);
        }
        model_.step(batch_inputs, batch_targets, static_cast<Scalar>(lr),
                    static_cast<Scalar>(cfg.weight_decay));
        ++step;
      }
    }
    mark_trained(cfg);
  }

  std::vector<ClassDistribution> predict_distribution(
      std::span<const std::string> texts) const override {
    std::vector<ClassDistribution> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
      const auto x = featurize<Scalar>(text, features_, config_.max_sequence_length);
      out.push_back(ClassDistribution::normalized(model_.probabilities(x).template cast<double>()));
    }
    return out;
  }

  std::unique_ptr<ClassifierBackend> clone() const override {
    return std::make_unique<SoftmaxHashedBackend>(*this);
  }

  nlohmann::json checkpoint() const override;

 private:
  static typename SoftmaxRegression<Scalar>::Input apply_dropout(
      const typename SoftmaxRegression<Scalar>::Input& x, double rate, std::mt19937_64& rng) {
    typename SoftmaxRegression<Scalar>::Input out(x.size());
    const Scalar keep_scale = static_cast<Scalar>(1.0 / (1.0 - rate));
    // 53-bit uniform draw from the raw generator output.
    constexpr double kInv = 1.0 / 9007199254740992.0;
    for (typename SoftmaxRegression<Scalar>::Input::InnerIterator it(x); it; ++it) {
      if (static_cast<double>(rng() >> 11) * kInv >= rate) {
        out.insert(it.index()) = it.value() * keep_scale;
      }
    }
    return out;
  }

  FeatureSpec features_;
  SoftmaxRegression<Scalar> model_;
  TrainConfig config_ = TrainConfig::reference();
  bool trained_ = false;
};

extern template class SoftmaxHashedBackend<double>;
extern template class SoftmaxHashedBackend<float>;

}  // namespace clausefair::classifier
