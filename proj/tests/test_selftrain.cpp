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

#include <doctest.h>

#include <random>

#include "clausefair/error.hpp"
#include "clausefair/selftrain/selftrain.hpp"
#include "support/fixture_data.hpp"
#include "support/invariants.hpp"
#include "support/temp_dir.hpp"

using namespace clausefair;
using namespace clausefair::selftrain;
using namespace clausefair::testing;
using classifier::ClassDistribution;
using classifier::make_prediction;

namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

Prediction pred(const std::string& id, double f, double p, double c) {
  return make_prediction(id, ClassDistribution(f, p, c));
}

struct SelftrainFixture {
  std::vector<LabeledExample> labeled = load_examples(fixture_dir() / "selftrain/labeled.jsonl");
  std::vector<TextItem> unlabeled = load_items(fixture_dir() / "selftrain/unlabeled.jsonl");
  MonitorSets monitor{load_examples(fixture_dir() / "selftrain/validation.jsonl"),
                      load_examples(fixture_dir() / "selftrain/test.jsonl")};
};

}  // namespace

TEST_CASE("filter threshold is strict") {
  const ThresholdConfig tau{{0.85, 0.85, 0.85}};
  const std::vector<Prediction> ps{pred("a", 0.90, 0.05, 0.05), pred("b", 0.85, 0.10, 0.05)};
  const auto r = filter_by_confidence(ps, tau);
  REQUIRE(r.accepted.size() == 1);
  CHECK(r.accepted[0].sentence_id == "a");
  REQUIRE(r.rejected.size() == 1);
  CHECK(r.rejected[0].sentence_id == "b");
}

TEST_CASE("filter partitions a mixed batch and keeps order") {
  const ThresholdConfig tau{{0.85, 0.75, 0.65}};
  const std::vector<Prediction> ps{pred("1", 0.9, 0.05, 0.05), pred("2", 0.2, 0.75, 0.05),
                                   pred("3", 0.1, 0.2, 0.7), pred("4", 0.5, 0.3, 0.2),
                                   pred("5", 0.0, 0.2, 0.8)};
  const auto r = filter_by_confidence(ps, tau);
  std::vector<std::string> acc, rej;
  for (const auto& p : r.accepted) acc.push_back(p.sentence_id);
  for (const auto& p : r.rejected) rej.push_back(p.sentence_id);
  CHECK(acc == std::vector<std::string>{"1", "3", "5"});
  CHECK(rej == std::vector<std::string>{"2", "4"});
}

TEST_CASE("filter matches the set definition on random batches") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    ThresholdConfig tau{{0.05 + 0.9 * u(rng), 0.05 + 0.9 * u(rng), 0.05 + 0.9 * u(rng)}};
    std::vector<Prediction> ps;
    const std::size_t n = rng() % 40;
    for (std::size_t i = 0; i < n; ++i) {
      // Some predictions sit exactly on a threshold.
      if (i % 7 == 0) {
        const Label l = label_at(rng() % 3);
        classifier::LabelVector<double> v = classifier::LabelVector<double>::Constant((1 - tau[l]) / 2);
        v(Eigen::Index(index_of(l))) = tau[l];
        ps.push_back(make_prediction(std::to_string(i), ClassDistribution::normalized(v)));
      } else {
        ps.push_back(make_prediction(std::to_string(i), ClassDistribution::normalized({u(rng), u(rng), u(rng)})));
      }
    }
    const auto r = filter_by_confidence(ps, tau);
    std::vector<Prediction> want_acc, want_rej;
    for (const auto& p : ps) (p.confidence > tau[p.predicted] ? want_acc : want_rej).push_back(p);
    CHECK(r.accepted == want_acc);
    CHECK(r.rejected == want_rej);
  }
}

TEST_CASE("threshold and stopping validation") {
  CHECK(code_of([] { ThresholdConfig{{0.0, 0.5, 0.5}}.validate(); }) == ErrorCode::InvalidThreshold);
  CHECK(code_of([] { ThresholdConfig{{1.0, 0.5, 0.5}}.validate(); }) == ErrorCode::InvalidThreshold);
  CHECK(code_of([] { StoppingPolicy{0, MonitorSplit::Validation, 10}.validate(); }) == ErrorCode::ConfigError);
}

TEST_CASE("injecting the augmentation fixture rebalances the minority class") {
  const auto pool = load_examples(fixture_dir() / "augment/pool.jsonl");
  const auto synthetic = load_examples(fixture_dir() / "augment/synthetic.jsonl");
  REQUIRE(synthetic.size() == 145);
  auto state = make_state(pool, {});
  CHECK(state.class_counts() == std::array<std::size_t, 3>{401, 165, 34});
  state = inject_synthetic(std::move(state), synthetic);
  CHECK(state.class_counts() == std::array<std::size_t, 3>{401, 165, 179});
  REQUIRE(state.injections.size() == 1);
  CHECK(state.injections[0].count == 145);
  CHECK(state.injections[0].labeled_size_after == 745);
}

TEST_CASE("unverified or non-synthetic examples cannot be injected") {
  auto state = make_state(load_examples(fixture_dir() / "augment/pool.jsonl"), {});
  auto syn = load_examples(fixture_dir() / "augment/synthetic.jsonl");
  syn[3].verified = false;
  CHECK(code_of([&] { inject_synthetic(state, syn); }) == ErrorCode::UnverifiedSynthetic);
  auto human = syn[0];
  human.provenance = Provenance::HumanAgreed;
  CHECK(code_of([&] { inject_synthetic(state, std::span(&human, 1)); }) == ErrorCode::UnverifiedSynthetic);
  const auto before = state.labeled_pool;
  state = inject_synthetic(std::move(state), {});
  CHECK(state.labeled_pool == before);
  CHECK(state.injections.empty());
}

TEST_CASE("empty unlabeled pool runs one iteration and returns the teacher") {
  SelftrainFixture fx;
  const auto proto = classifier::make_backend(classifier::kSoftmaxHashedBackend);
  const auto cfg = TrainConfig::reference();
  auto result = self_train(*proto, make_state(fx.labeled, {}), fx.monitor, {}, {}, cfg);
  CHECK(result.state.iteration == 1);
  CHECK(result.state.history.size() == 1);
  CHECK(result.state.best_iteration == 1);
  auto teacher = classifier::make_backend(classifier::kSoftmaxHashedBackend);
  classifier::fit(*teacher, fx.labeled, cfg);
  const auto probe = items_of(fx.monitor.test);
  CHECK(classifier::predict(*result.model, probe) == classifier::predict(*teacher, probe));
}

TEST_CASE("unreachable thresholds accept nothing and stop at patience") {
  SelftrainFixture fx;
  const auto proto = classifier::make_backend(classifier::kSoftmaxHashedBackend);
  auto weak = TrainConfig::reference();
  weak.epochs = 1;
  weak.learning_rate = 0.1;
  const ThresholdConfig tau{{0.999, 0.999, 0.999}};
  const StoppingPolicy stopping{1, MonitorSplit::Validation, 10};
  const auto initial = make_state(fx.labeled, fx.unlabeled);
  auto result = self_train(*proto, initial, fx.monitor, tau, stopping, weak);
  REQUIRE(!result.state.history.empty());
  CHECK(result.state.history[0].accepted == 0);
  CHECK(result.state.iteration == 2);
  CHECK(result.state.labeled_pool == fx.labeled);
  CHECK(selftrain_violations(initial, result.state, tau, stopping).empty());
}

TEST_CASE("self-training improves on the separable fixture") {
  SelftrainFixture fx;
  const auto proto = classifier::make_backend(classifier::kSoftmaxHashedBackend);
  const ThresholdConfig tau;
  const StoppingPolicy stopping;
  const auto initial = make_state(fx.labeled, fx.unlabeled);
  auto result = self_train(*proto, initial, fx.monitor, tau, stopping, TrainConfig::reference());
  const auto& h = result.state.history;
  REQUIRE(h.size() >= 2);
  const double first = h.front().metrics.accuracy;
  const double best = h[std::size_t(result.state.best_iteration - 1)].metrics.accuracy;
  CHECK(best >= first + 0.05);
  for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i].labeled_size > h[i - 1].labeled_size);
  const auto violations = selftrain_violations(initial, result.state, tau, stopping);
  for (const auto& v : violations) MESSAGE(v);
  CHECK(violations.empty());

  // Replay.
  auto again = self_train(*proto, initial, fx.monitor, tau, stopping, TrainConfig::reference());
  REQUIRE(again.state.history.size() == h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    CHECK(history_record(again.state.history[i]) == history_record(h[i]));
  }
  CHECK(again.state.labeled_pool == result.state.labeled_pool);
}

TEST_CASE("max iterations caps the loop") {
  SelftrainFixture fx;
  const auto proto = classifier::make_backend(classifier::kSoftmaxHashedBackend);
  const StoppingPolicy stopping{5, MonitorSplit::Test, 2};
  const auto initial = make_state(fx.labeled, fx.unlabeled);
  auto result = self_train(*proto, initial, fx.monitor, {}, stopping, TrainConfig::reference());
  CHECK(result.state.iteration == 2);
  CHECK(selftrain_violations(initial, result.state, {}, stopping).empty());
}

TEST_CASE("refresh mode re-predicts earlier pseudo labels") {
  SelftrainFixture fx;
  const auto proto = classifier::make_backend(classifier::kSoftmaxHashedBackend);
  const auto initial = make_state(fx.labeled, fx.unlabeled);
  auto result = self_train(*proto, initial, fx.monitor, {}, {1, MonitorSplit::Validation, 3},
                           TrainConfig::reference(), SelfTrainOptions{true});
  for (const auto& r : result.state.history) {
    CHECK(r.labeled_size + r.unlabeled_size == fx.labeled.size() + fx.unlabeled.size());
  }
  for (const auto& e : result.state.labeled_pool) {
    if (e.provenance == Provenance::Pseudo) CHECK(*e.iteration == result.state.iteration);
  }
}

TEST_CASE("make_state rejects overlapping pools") {
  SelftrainFixture fx;
  std::vector<TextItem> clash{{fx.labeled[0].sentence_id, "x"}};
  CHECK(code_of([&] { make_state(fx.labeled, clash); }) == ErrorCode::Conflict);
}

TEST_CASE("history file has one line per iteration") {
  SelftrainFixture fx;
  const auto proto = classifier::make_backend(classifier::kSoftmaxHashedBackend);
  auto result = self_train(*proto, make_state(fx.labeled, fx.unlabeled), fx.monitor, {},
                           {1, MonitorSplit::Validation, 2}, TrainConfig::reference());
  TempDir dir("hist");
  write_history(dir / "h.jsonl", result.state.history);
  const auto lines = read_json_lines(dir / "h.jsonl");
  CHECK(lines.size() == result.state.history.size());
  CHECK(lines[0].contains("accepted"));
}
