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

#include "clausefair/error.hpp"
#include "clausefair/workbench/experiment.hpp"
#include "clausefair/workbench/report.hpp"
#include "support/fixture_data.hpp"
#include "support/temp_dir.hpp"

using namespace clausefair;
using namespace clausefair::workbench;
using namespace clausefair::testing;

namespace {

const std::filesystem::path kConfigs = fixture_dir() / "experiment/configs";

std::string error_text(const auto& fn, ErrorCode want) {
  try {
    fn();
  } catch (const Error& e) {
    CHECK(e.code() == want);
    return e.what();
  }
  FAIL("expected an Error");
  return {};
}

nlohmann::json vanilla_doc() {
  return nlohmann::json::parse(read_file(kConfigs / "vanilla.json"));
}

ExperimentConfig from_doc(const nlohmann::json& doc) { return parse_experiment_config(doc, kConfigs); }

std::string run_bytes(const std::filesystem::path& store, const RunRecord& r) {
  auto j = nlohmann::json::parse(read_file(store / "runs" / (r.name + ".json")));
  j.erase("started_at");
  j.erase("finished_at");
  j.erase("artifacts");
  std::string out = j.dump() + "\n" + read_file(r.artifacts.predictions);
  if (!r.artifacts.model.empty()) out += read_file(r.artifacts.model);
  if (!r.artifacts.history.empty()) out += read_file(r.artifacts.history);
  return out;
}

}  // namespace

TEST_CASE("config errors carry a precise path") {
  auto doc = vanilla_doc();
  doc["train"] = {{"epochs", "many"}};
  CHECK(error_text([&] { from_doc(doc); }, ErrorCode::ConfigError).find("/train/epochs") != std::string::npos);

  doc = vanilla_doc();
  doc["surprise"] = 1;
  CHECK(error_text([&] { from_doc(doc); }, ErrorCode::ConfigError).find("/surprise") != std::string::npos);

  doc = vanilla_doc();
  doc["technique"] = "magic";
  CHECK(error_text([&] { from_doc(doc); }, ErrorCode::ConfigError).find("/technique") != std::string::npos);

  doc = vanilla_doc();
  doc["thresholds"] = {{"fair", 0.9}, {"potentially_unfair", 0.9}, {"clearly_unfair", 0.9}};
  CHECK(error_text([&] { from_doc(doc); }, ErrorCode::ConfigError).find("/thresholds") != std::string::npos);

  doc = vanilla_doc();
  doc["train"] = {{"seed", 3}};
  CHECK(error_text([&] { from_doc(doc); }, ErrorCode::ConfigError).find("/train/seed") != std::string::npos);

  doc = vanilla_doc();
  doc["name"] = "../escape";
  CHECK(error_text([&] { from_doc(doc); }, ErrorCode::ConfigError).find("/name") != std::string::npos);

  doc = vanilla_doc();
  doc["data"].erase("labeled");
  CHECK(error_text([&] { from_doc(doc); }, ErrorCode::ConfigError).find("/data/labeled") != std::string::npos);

  auto prompt = nlohmann::json::parse(read_file(kConfigs / "cot_prompt.json"));
  prompt["backend"] = "softmax-hashed";
  CHECK(error_text([&] { from_doc(prompt); }, ErrorCode::ConfigError).find("/backend") != std::string::npos);
  prompt.erase("backend");
  prompt.erase("llm");
  CHECK(error_text([&] { from_doc(prompt); }, ErrorCode::ConfigError).find("/llm") != std::string::npos);
}

TEST_CASE("config hash follows content and seed") {
  const auto a = from_doc(vanilla_doc());
  CHECK(config_hash(a) == config_hash(from_doc(vanilla_doc())));
  CHECK(config_hash(a).size() == 16);
  auto doc = vanilla_doc();
  doc["seed"] = 8;
  const auto b = from_doc(doc);
  CHECK(config_hash(a) != config_hash(b));
  CHECK(b.train.seed == 8);
  CHECK(b.split.seed == 8);
}

TEST_CASE("all five techniques run on the fixtures and rerun identically") {
  TempDir store("wb"), again("wb2");
  std::vector<RunRecord> records;
  for (const auto* name : {"vanilla", "data_augmentation", "data_augmentation_self_train", "direct_prompt", "cot_prompt"}) {
    CAPTURE(name);
    const auto cfg = load_experiment_config(kConfigs / (std::string(name) + ".json"));
    const auto rec = run_experiment(cfg, store.path());
    CHECK(rec.metrics.total == 360);
    CHECK(rec.config_hash == config_hash(cfg));
    CHECK(load_run(store.path(), name).has_value());
    const auto rerun = run_experiment(cfg, again.path());
    CHECK(run_bytes(store.path(), rec) == run_bytes(again.path(), rerun));
    records.push_back(rec);
  }
  CHECK(records[1].train_counts_after[2] == records[1].train_counts[2] + 145);
  CHECK(records[2].iterations >= 1);
  CHECK(records[3].metrics.unlabeled > 0);
  CHECK(records[4].metrics.accuracy > records[3].metrics.accuracy);
  CHECK(load_runs(store.path()).size() == 5);

  const auto table = report(records);
  const auto text = render_text(table);
  CHECK(text.find("Model") != std::string::npos);
  CHECK(text.find("Data Augmentation + Self-Training") != std::string::npos);
  CHECK(table.values.size() == 5);
}

TEST_CASE("self-training without unlabeled data matches plain augmentation") {
  TempDir store("wb");
  write_file_atomic(store / "empty.jsonl", "");
  auto doc = nlohmann::json::parse(read_file(kConfigs / "data_augmentation_self_train.json"));
  doc["data"]["unlabeled"] = (store / "empty.jsonl").string();
  const auto st = run_experiment(from_doc(doc), store.path());
  const auto da = run_experiment(load_experiment_config(kConfigs / "data_augmentation.json"), store.path());
  CHECK(st.iterations == 1);
  CHECK(nlohmann::json(st.metrics) == nlohmann::json(da.metrics));
  CHECK(read_file(st.artifacts.predictions) == read_file(da.artifacts.predictions));
}

TEST_CASE("experiment errors name the experiment") {
  TempDir store("wb");
  auto doc = vanilla_doc();
  doc["data"]["labeled"] = "../missing.jsonl";
  const auto what = error_text([&] { run_experiment(from_doc(doc), store.path()); }, ErrorCode::NotFound);
  CHECK(what.find("experiment 'vanilla'") != std::string::npos);
}

TEST_CASE("report layout") {
  RunRecord r;
  r.name = "run";
  r.model = "softmax-hashed";
  r.technique = Technique::Vanilla;
  r.metrics.accuracy = 0.956;
  for (auto& c : r.metrics.per_class) c.f1 = 0.5;
  r.metrics.macro_f1 = 0.5;

  auto table = report(std::vector{r});
  CHECK(table.columns == std::vector<std::string>{"Model", "Technique", "Fair F1", "Potentially Unfair F1",
                                                  "Clearly Unfair F1", "Macro F1", "Accuracy"});
  const auto text = render_text(table);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);  // header, rule, row
  CHECK(text.find("95.6") != std::string::npos);

  table = report(std::vector{r, r, r});
  CHECK(table.names == std::vector<std::string>{"run", "run#2", "run#3"});

  table = report(std::vector{r}, true);
  CHECK(table.values.at(0).size() == 12);
  CHECK(table.columns.size() == 14);
  const auto j = to_json(table);
  CHECK(j.at("rows").size() == 1);
  CHECK(j.at("extended") == true);
}
