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

#include "clausefair/workbench/experiment.hpp"

#include <array>
#include <initializer_list>
#include <map>
#include <regex>
#include <set>
#include <utility>

#include "clausefair/error.hpp"
#include "clausefair/llm/gateway.hpp"
#include "clausefair/llm/prompt.hpp"
#include "clausefair/util.hpp"

namespace clausefair::workbench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<std::tuple<Technique, std::string_view, std::string_view>, 5> kTechniques{{
    {Technique::Vanilla, "vanilla", "Vanilla"},
    {Technique::DataAugmentation, "data_augmentation", "Data Augmentation"},
    {Technique::DataAugmentationSelfTrain, "data_augmentation_self_train",
     "Data Augmentation + Self-Training"},
    {Technique::DirectPrompt, "direct_prompt", "Direct Prompt"},
    {Technique::CoTPrompt, "cot_prompt", "CoT Prompt"},
}};

// Cursor into the config document that knows its JSON pointer.
class Node {
 public:
  Node(const json& j, std::string ptr) : j_(j), ptr_(std::move(ptr)) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ConfigError, (ptr_.empty() ? "/" : ptr_) + ": " + msg);
  }
  const std::string& ptr() const { return ptr_; }
  const json& raw() const { return j_; }

  void require_object() const {
    if (!j_.is_object()) fail("expected an object");
  }
  bool has(const std::string& key) const { return j_.contains(key); }
  Node at(const std::string& key) const {
    if (!j_.contains(key)) Node(j_, ptr_ + "/" + key).fail("required field is missing");
    return Node(j_.at(key), ptr_ + "/" + key);
  }
  std::optional<Node> opt(const std::string& key) const {
    if (!j_.contains(key)) return std::nullopt;
    return Node(j_.at(key), ptr_ + "/" + key);
  }
  void only(std::initializer_list<std::string_view> allowed) const {
    for (const auto& [key, _] : j_.items()) {
      bool ok = false;
      for (auto a : allowed) ok = ok || a == key;
      if (!ok) Node(j_, ptr_ + "/" + key).fail("unknown field");
    }
  }
  void forbid(const std::string& key, std::string_view why) const {
    if (j_.contains(key)) Node(j_, ptr_ + "/" + key).fail(std::string(why));
  }

  std::string str() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  double number() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }
  int integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    const auto v = j_.get<long long>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) fail("integer out of range");
    return static_cast<int>(v);
  }
  std::uint64_t u64() const {
    if (!j_.is_number_unsigned() && !(j_.is_number_integer() && j_.get<long long>() >= 0)) {
      fail("expected a non-negative integer");
    }
    return j_.get<std::uint64_t>();
  }
  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }

 private:
  const json& j_;
  std::string ptr_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.lexically_normal();
}

classifier::TrainConfig parse_train(const Node& n, classifier::TrainConfig c) {
  n.require_object();
  n.forbid("seed", "set the top-level seed instead");
  n.only({"batch_size", "learning_rate", "epochs", "warmup_steps", "weight_decay", "dropout",
          "max_sequence_length", "warm_start"});
  if (auto v = n.opt("batch_size")) c.batch_size = v->integer();
  if (auto v = n.opt("learning_rate")) c.learning_rate = v->number();
  if (auto v = n.opt("epochs")) c.epochs = v->integer();
  if (auto v = n.opt("warmup_steps")) c.warmup_steps = v->integer();
  if (auto v = n.opt("weight_decay")) c.weight_decay = v->number();
  if (auto v = n.opt("dropout")) c.dropout = v->number();
  if (auto v = n.opt("max_sequence_length")) c.max_sequence_length = v->integer();
  if (auto v = n.opt("warm_start")) c.warm_start = v->boolean();
  try {
    c.validate();
  } catch (const Error& e) {
    n.fail(e.detail());
  }
  return c;
}

selftrain::ThresholdConfig parse_thresholds(const Node& n) {
  n.require_object();
  n.only({"fair", "potentially_unfair", "clearly_unfair"});
  selftrain::ThresholdConfig t;
  for (Label l : kAllLabels) t.tau[index_of(l)] = n.at(std::string(to_string(l))).number();
  try {
    t.validate();
  } catch (const Error& e) {
    n.fail(e.detail());
  }
  return t;
}

selftrain::StoppingPolicy parse_stopping(const Node& n) {
  n.require_object();
  n.only({"patience", "monitor_split", "max_iterations"});
  selftrain::StoppingPolicy s;
  if (auto v = n.opt("patience")) s.patience = v->integer();
  if (auto v = n.opt("max_iterations")) s.max_iterations = v->integer();
  if (auto v = n.opt("monitor_split")) {
    try {
      s.monitor = selftrain::monitor_split_from_string(v->str());
    } catch (const Error& e) {
      v->fail(e.detail());
    }
  }
  try {
    s.validate();
  } catch (const Error& e) {
    n.fail(e.detail());
  }
  return s;
}

json parse_llm(const Node& n, const fs::path& base) {
  n.require_object();
  n.only({"script", "url", "api_key_env", "timeout_s", "max_retries", "retry_base_ms"});
  json out = json::object();
  if (n.has("script") == n.has("url")) n.fail("give exactly one of 'script' or 'url'");
  if (auto v = n.opt("script")) out["script"] = resolve(base, v->str()).string();
  if (auto v = n.opt("url")) out["url"] = v->str();
  if (auto v = n.opt("api_key_env")) out["api_key_env"] = v->str();
  if (auto v = n.opt("timeout_s")) out["timeout_s"] = v->integer();
  if (auto v = n.opt("max_retries")) {
    if (v->integer() < 0) v->fail("must be non-negative");
    out["max_retries"] = v->integer();
  }
  if (auto v = n.opt("retry_base_ms")) {
    if (v->integer() < 0) v->fail("must be non-negative");
    out["retry_base_ms"] = v->integer();
  }
  return out;
}

std::vector<LabeledExample> read_examples(const fs::path& file, std::string_view what) {
  if (!fs::exists(file)) throw Error(ErrorCode::NotFound, std::string(what) + " dataset not found: " + file.string());
  std::vector<LabeledExample> out;
  for (const auto& j : read_json_lines(file)) out.push_back(j.get<LabeledExample>());
  return out;
}

std::vector<classifier::TextItem> read_unlabeled(const fs::path& file) {
  if (!fs::exists(file)) throw Error(ErrorCode::NotFound, "unlabeled dataset not found: " + file.string());
  std::vector<classifier::TextItem> out;
  for (const auto& j : read_json_lines(file)) {
    out.push_back({j.at("sentence_id").get<std::string>(), j.at("text").get<std::string>()});
  }
  return out;
}

std::array<std::size_t, kNumLabels> count_labels(std::span<const LabeledExample> examples) {
  std::array<std::size_t, kNumLabels> c{};
  for (const auto& e : examples) ++c[index_of(e.label)];
  return c;
}

json counts_json(const std::array<std::size_t, kNumLabels>& c) {
  json j = json::object();
  for (Label l : kAllLabels) j[std::string(to_string(l))] = c[index_of(l)];
  return j;
}

std::array<std::size_t, kNumLabels> counts_from_json(const json& j) {
  std::array<std::size_t, kNumLabels> c{};
  for (Label l : kAllLabels) c[index_of(l)] = j.value(std::string(to_string(l)), std::size_t{0});
  return c;
}

std::vector<LabeledExample> pick(std::span<const LabeledExample> all, const std::set<std::string>& ids) {
  std::vector<LabeledExample> out;
  for (const auto& e : all) {
    if (ids.count(e.sentence_id) != 0) out.push_back(e);
  }
  return out;
}

RunRecord execute(const ExperimentConfig& cfg, const fs::path& root, const RunOptions& options) {
  auto progress = [&](const std::string& stage) {
    if (options.progress) options.progress(stage);
  };
  RunRecord rec;
  rec.name = cfg.name;
  rec.technique = cfg.technique;
  rec.model = cfg.model;
  rec.config_hash = config_hash(cfg);
  rec.started_at = utc_timestamp();

  progress("load");
  const auto labeled = read_examples(cfg.data.labeled, "labeled");
  corpus::DatasetSplit split;
  if (cfg.data.split) {
    split = json::parse(read_file(*cfg.data.split)).get<corpus::DatasetSplit>();
  } else {
    progress("split");
    split = corpus::stratified_split(labeled, cfg.split);
  }
  const auto train = pick(labeled, split.train);
  const auto validation = pick(labeled, split.validation);
  const auto test = pick(labeled, split.test);
  if (test.empty()) throw Error(ErrorCode::EmptyInput, "test split is empty");
  rec.train_counts = count_labels(train);
  rec.train_counts_after = rec.train_counts;

  std::vector<Label> gold;
  std::vector<classifier::TextItem> items;
  for (const auto& e : test) {
    gold.push_back(e.label);
    items.push_back({e.sentence_id, e.text});
  }

  const fs::path predictions_file = root / "predictions" / (cfg.name + ".jsonl");
  std::vector<json> prediction_lines;

  if (is_prompting(cfg.technique)) {
    std::shared_ptr<llm::LlmClient> client = options.client ? options.client : llm::make_client(*cfg.llm);
    const auto tmpl = llm::load_template(*cfg.prompt);
    const auto wanted = cfg.technique == Technique::CoTPrompt ? llm::PromptKind::CoT : llm::PromptKind::Direct;
    if (tmpl.kind != wanted) {
      throw Error(ErrorCode::InvalidTemplate, cfg.prompt->string() + " is a " + std::string(llm::to_string(tmpl.kind)) +
                                                  " template, expected " + std::string(llm::to_string(wanted)));
    }
    progress("prompt");
    std::vector<std::optional<Label>> predicted;
    for (std::size_t i = 0; i < items.size(); ++i) {
      json line{{"sentence_id", items[i].sentence_id}, {"gold", to_string(gold[i])}};
      try {
        auto r = llm::classify_prompted(*client, tmpl, items[i].text, cfg.request);
        predicted.emplace_back(r.label);
        line["predicted"] = to_string(r.label);
        if (!r.rationale.empty()) line["rationale"] = r.rationale;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ParseError) throw;
        predicted.emplace_back(std::nullopt);
        line["predicted"] = nullptr;
        line["error"] = e.detail();
      }
      prediction_lines.push_back(std::move(line));
    }
    rec.metrics = classifier::evaluate(predicted, gold);
  } else {
    auto model = classifier::make_backend(cfg.backend, cfg.backend_options);
    if (cfg.technique == Technique::Vanilla) {
      progress("train");
      classifier::fit(*model, train, cfg.train);
      rec.iterations = 1;
      rec.best_iteration = 1;
    } else {
      std::vector<classifier::TextItem> unlabeled;
      if (cfg.technique == Technique::DataAugmentationSelfTrain) unlabeled = read_unlabeled(*cfg.data.unlabeled);
      auto state = selftrain::make_state(train, std::move(unlabeled));
      progress("inject");
      const auto synthetic = read_examples(*cfg.data.synthetic, "synthetic");
      state = selftrain::inject_synthetic(std::move(state), synthetic);
      rec.train_counts_after = state.class_counts();
      if (cfg.technique == Technique::DataAugmentation) {
        progress("train");
        classifier::fit(*model, state.labeled_pool, cfg.train);
        rec.iterations = 1;
        rec.best_iteration = 1;
      } else {
        progress("self-train");
        auto result = selftrain::self_train(*model, std::move(state), {validation, test}, *cfg.thresholds,
                                            *cfg.stopping, cfg.train, cfg.self_train);
        model = std::move(result.model);
        rec.iterations = result.state.iteration;
        rec.best_iteration = result.state.best_iteration;
        const fs::path history = root / "history" / (cfg.name + ".jsonl");
        selftrain::write_history(history, result.state.history);
        rec.artifacts.history = history.string();
      }
    }
    progress("evaluate");
    const auto predictions = classifier::predict(*model, items);
    for (std::size_t i = 0; i < predictions.size(); ++i) {
      json line = predictions[i];
      line["gold"] = to_string(gold[i]);
      prediction_lines.push_back(std::move(line));
    }
    rec.metrics = classifier::evaluate(predictions, gold);
    const fs::path checkpoint = root / "models" / (cfg.name + ".json");
    classifier::save_checkpoint(*model, checkpoint);
    rec.artifacts.model = checkpoint.string();
  }

  write_json_lines(predictions_file, prediction_lines);
  rec.artifacts.predictions = predictions_file.string();
  rec.finished_at = utc_timestamp();
  write_file_atomic(root / "runs" / (cfg.name + ".json"), json(rec).dump(2) + "\n");
  append_json_line(root / "runs" / "history.jsonl",
                   json{{"name", rec.name}, {"config_hash", rec.config_hash}, {"finished_at", rec.finished_at},
                        {"accuracy", rec.metrics.accuracy}, {"macro_f1", rec.metrics.macro_f1}});
  progress("done");
  return rec;
}

}  // namespace

std::string_view to_string(Technique t) {
  for (const auto& [k, id, _] : kTechniques) {
    if (k == t) return id;
  }
  return "vanilla";
}

std::string_view display_name(Technique t) {
  for (const auto& [k, _, name] : kTechniques) {
    if (k == t) return name;
  }
  return "Vanilla";
}

Technique technique_from_string(std::string_view text) {
  for (const auto& [k, id, _] : kTechniques) {
    if (id == text) return k;
  }
  throw Error(ErrorCode::ConfigError, "unknown technique: " + std::string(text));
}

bool is_prompting(Technique t) { return t == Technique::DirectPrompt || t == Technique::CoTPrompt; }

ExperimentConfig parse_experiment_config(const json& doc, const fs::path& base_dir) {
  const Node root(doc, "");
  root.require_object();
  root.only({"name", "technique", "model", "backend", "backend_options", "train", "thresholds", "stopping",
             "self_train", "split", "data", "llm", "prompt", "request", "seed"});
  ExperimentConfig cfg;

  const Node name = root.at("name");
  cfg.name = name.str();
  static const std::regex name_re(R"([A-Za-z0-9_][A-Za-z0-9._-]*)");
  if (!std::regex_match(cfg.name, name_re)) name.fail("use letters, digits, '.', '_' or '-'");

  const Node technique = root.at("technique");
  try {
    cfg.technique = technique_from_string(technique.str());
  } catch (const Error& e) {
    technique.fail(e.detail());
  }
  const bool prompting = is_prompting(cfg.technique);
  const bool self_training = cfg.technique == Technique::DataAugmentationSelfTrain;
  const bool augmenting = cfg.technique == Technique::DataAugmentation || self_training;

  if (auto v = root.opt("seed")) cfg.seed = v->u64();

  if (prompting) {
    for (const char* key : {"backend", "backend_options", "train"}) root.forbid(key, "not used by prompting techniques");
    cfg.model = "llm";
    cfg.llm = parse_llm(root.at("llm"), base_dir);
    cfg.prompt = resolve(base_dir, root.at("prompt").str());
    if (auto r = root.opt("request")) {
      r->require_object();
      r->only({"temperature", "max_tokens"});
      if (auto v = r->opt("temperature")) cfg.request.temperature = v->number();
      if (auto v = r->opt("max_tokens")) {
        cfg.request.max_tokens = v->integer();
        if (cfg.request.max_tokens <= 0) v->fail("must be positive");
      }
    }
  } else {
    for (const char* key : {"llm", "prompt", "request"}) root.forbid(key, "only used by prompting techniques");
    if (auto v = root.opt("backend")) cfg.backend = v->str();
    if (auto v = root.opt("backend_options")) {
      v->require_object();
      cfg.backend_options = v->raw();
    }
    try {
      classifier::make_backend(cfg.backend, cfg.backend_options);
    } catch (const Error& e) {
      (root.has("backend_options") && e.code() != ErrorCode::UnknownBackend ? root.at("backend_options")
                                                                               : Node(doc, "/backend"))
          .fail(e.detail());
    }
    cfg.train = classifier::default_train_config(cfg.backend);
    if (auto v = root.opt("train")) cfg.train = parse_train(*v, cfg.train);
    cfg.model = cfg.backend;
  }
  cfg.train.seed = cfg.seed;
  if (auto v = root.opt("model")) cfg.model = v->str();

  if (self_training) {
    cfg.thresholds = parse_thresholds(root.at("thresholds"));
    cfg.stopping = parse_stopping(root.at("stopping"));
    if (auto s = root.opt("self_train")) {
      s->require_object();
      s->only({"refresh_pseudo_labels"});
      if (auto v = s->opt("refresh_pseudo_labels")) cfg.self_train.refresh_pseudo_labels = v->boolean();
    }
  } else {
    for (const char* key : {"thresholds", "stopping", "self_train"}) {
      root.forbid(key, "only used by data_augmentation_self_train");
    }
  }

  if (auto s = root.opt("split")) {
    s->require_object();
    s->only({"ratios"});
    if (auto r = s->opt("ratios")) {
      if (!r->raw().is_array() || r->raw().size() != corpus::kNumBuckets) r->fail("expected three numbers");
      for (std::size_t i = 0; i < corpus::kNumBuckets; ++i) {
        cfg.split.ratios[i] = Node(r->raw()[i], r->ptr() + "/" + std::to_string(i)).number();
      }
      try {
        cfg.split.validate();
      } catch (const Error& e) {
        r->fail(e.detail());
      }
    }
  }
  cfg.split.seed = cfg.seed;

  const Node data = root.at("data");
  data.require_object();
  data.only({"labeled", "unlabeled", "synthetic", "split"});
  cfg.data.labeled = resolve(base_dir, data.at("labeled").str());
  if (auto v = data.opt("split")) cfg.data.split = resolve(base_dir, v->str());
  if (self_training) {
    cfg.data.unlabeled = resolve(base_dir, data.at("unlabeled").str());
  } else {
    data.forbid("unlabeled", "only used by data_augmentation_self_train");
  }
  if (augmenting) {
    cfg.data.synthetic = resolve(base_dir, data.at("synthetic").str());
  } else {
    data.forbid("synthetic", "only used by data augmentation techniques");
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const fs::path& file) {
  if (!fs::exists(file)) throw Error(ErrorCode::NotFound, "config not found: " + file.string());
  json doc;
  try {
    doc = json::parse(read_file(file));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, file.string() + ": " + e.what());
  }
  return parse_experiment_config(doc, file.parent_path());
}

json canonical_json(const ExperimentConfig& cfg) {
  json j{{"name", cfg.name},
         {"technique", to_string(cfg.technique)},
         {"model", cfg.model},
         {"split", {{"ratios", cfg.split.ratios}}},
         {"seed", cfg.seed}};
  json data{{"labeled", cfg.data.labeled.string()}};
  if (cfg.data.unlabeled) data["unlabeled"] = cfg.data.unlabeled->string();
  if (cfg.data.synthetic) data["synthetic"] = cfg.data.synthetic->string();
  if (cfg.data.split) data["split"] = cfg.data.split->string();
  j["data"] = std::move(data);
  if (is_prompting(cfg.technique)) {
    j["llm"] = cfg.llm.value_or(json::object());
    j["prompt"] = cfg.prompt ? cfg.prompt->string() : std::string();
    j["request"] = {{"temperature", cfg.request.temperature}, {"max_tokens", cfg.request.max_tokens}};
  } else {
    j["backend"] = cfg.backend;
    j["backend_options"] = cfg.backend_options;
    json train = cfg.train;
    train.erase("seed");
    j["train"] = std::move(train);
  }
  if (cfg.thresholds) j["thresholds"] = *cfg.thresholds;
  if (cfg.stopping) j["stopping"] = *cfg.stopping;
  if (cfg.technique == Technique::DataAugmentationSelfTrain) {
    j["self_train"] = {{"refresh_pseudo_labels", cfg.self_train.refresh_pseudo_labels}};
  }
  return j;
}

std::string config_hash(const ExperimentConfig& cfg) { return hex64(fnv1a64(canonical_json(cfg).dump())); }

RunRecord run_experiment(const ExperimentConfig& cfg, const fs::path& store_root, const RunOptions& options) {
  try {
    return execute(cfg, store_root, options);
  } catch (const Error& e) {
    throw Error(e.code(), "experiment '" + cfg.name + "': " + e.detail());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, "experiment '" + cfg.name + "': " + e.what());
  }
}

std::optional<RunRecord> load_run(const fs::path& store_root, const std::string& name) {
  const fs::path file = store_root / "runs" / (name + ".json");
  if (!fs::exists(file)) return std::nullopt;
  return json::parse(read_file(file)).get<RunRecord>();
}

std::vector<RunRecord> load_runs(const fs::path& store_root) {
  std::vector<RunRecord> out;
  const fs::path dir = store_root / "runs";
  if (!fs::is_directory(dir)) return out;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) out.push_back(json::parse(read_file(f)).get<RunRecord>());
  return out;
}

void to_json(json& j, const RunRecord& r) {
  j = json{{"name", r.name},
           {"technique", to_string(r.technique)},
           {"model", r.model},
           {"config_hash", r.config_hash},
           {"started_at", r.started_at},
           {"finished_at", r.finished_at},
           {"metrics", r.metrics},
           {"artifacts", {{"model", r.artifacts.model},
                          {"history", r.artifacts.history},
                          {"predictions", r.artifacts.predictions}}},
           {"train_counts", counts_json(r.train_counts)},
           {"train_counts_after", counts_json(r.train_counts_after)},
           {"iterations", r.iterations},
           {"best_iteration", r.best_iteration}};
}

void from_json(const json& j, RunRecord& r) {
  r.name = j.at("name").get<std::string>();
  r.technique = technique_from_string(j.at("technique").get<std::string>());
  r.model = j.value("model", std::string{});
  r.config_hash = j.value("config_hash", std::string{});
  r.started_at = j.value("started_at", std::string{});
  r.finished_at = j.value("finished_at", std::string{});
  r.metrics = j.at("metrics").get<classifier::MetricsReport>();
  if (j.contains("artifacts")) {
    const auto& a = j.at("artifacts");
    r.artifacts.model = a.value("model", std::string{});
    r.artifacts.history = a.value("history", std::string{});
    r.artifacts.predictions = a.value("predictions", std::string{});
  }
  if (j.contains("train_counts")) r.train_counts = counts_from_json(j.at("train_counts"));
  if (j.contains("train_counts_after")) r.train_counts_after = counts_from_json(j.at("train_counts_after"));
  r.iterations = j.value("iterations", 0);
  r.best_iteration = j.value("best_iteration", 0);
}

}  // namespace clausefair::workbench
