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

// Command-line front end over a store directory.

#include <csignal>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "clausefair/annotation/annotation.hpp"
#include "clausefair/annotation/checklist.hpp"
#include "clausefair/annotation/kappa.hpp"
#include "clausefair/classifier/backend.hpp"
#include "clausefair/classifier/metrics.hpp"
#include "clausefair/corpus/document.hpp"
#include "clausefair/corpus/sentences.hpp"
#include "clausefair/corpus/split.hpp"
#include "clausefair/corpus/store.hpp"
#include "clausefair/error.hpp"
#include "clausefair/llm/gateway.hpp"
#include "clausefair/llm/prompt.hpp"
#include "clausefair/util.hpp"
#include "clausefair/workbench/experiment.hpp"
#include "clausefair/workbench/report.hpp"
#include "clausefair/workbench/service.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace clausefair;

namespace {

struct Globals {
  fs::path store = "clausefair-store";
  std::optional<std::uint64_t> seed;
  fs::path config;
  fs::path prompts = fs::path(CLAUSEFAIR_ASSET_DIR) / "prompts";
  std::string llm_script;
  std::string llm_url;
};

std::shared_ptr<llm::LlmClient> client_from(const Globals& g) {
  if (!g.llm_script.empty()) return llm::make_client(json{{"script", g.llm_script}});
  if (!g.llm_url.empty()) return llm::make_client(json{{"url", g.llm_url}});
  throw Error(ErrorCode::ConfigError, "pass --llm-script or --llm-url");
}

workbench::ExperimentConfig experiment_config(const Globals& g) {
  if (g.config.empty()) throw Error(ErrorCode::ConfigError, "--config is required");
  json doc;
  try {
    doc = json::parse(read_file(g.config));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, g.config.string() + ": " + e.what());
  }
  if (g.seed) doc["seed"] = *g.seed;
  return workbench::parse_experiment_config(doc, g.config.parent_path());
}

void print_run(const workbench::RunRecord& r) {
  const std::vector<workbench::RunRecord> one{r};
  std::cout << workbench::render_text(workbench::report(one));
  std::cout << "config hash " << r.config_hash << ", iterations " << r.iterations << ", best " << r.best_iteration
            << "\n";
}

llm::PromptTemplate find_template(const Globals& g, const std::string& id_or_path) {
  if (fs::is_regular_file(id_or_path)) return llm::load_template(id_or_path);
  for (auto& t : llm::load_template_dir(g.prompts)) {
    if (t.template_id == id_or_path) return t;
  }
  throw Error(ErrorCode::NotFound, "no prompt template '" + id_or_path + "' in " + g.prompts.string());
}

fs::path batch_file(const Globals& g, const std::string& id) { return g.store / "augment" / (id + ".json"); }

workbench::Service* g_service = nullptr;

void on_signal(int) {
  if (g_service != nullptr) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contract sentence fairness workbench"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed_value = 0;
  app.add_option("--store", g.store, "Store directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed_value, "Seed for splits and training");
  app.add_option("--config", g.config, "Experiment or service config file");
  app.add_option("--prompts", g.prompts, "Prompt asset directory")->capture_default_str();
  app.add_option("--llm-script", g.llm_script, "Scripted LLM replies (JSONL)");
  app.add_option("--llm-url", g.llm_url, "LLM completion endpoint");

  std::vector<fs::path> html_files;
  std::string doc_id;
  auto* ingest = app.add_subcommand("ingest", "Ingest HTML contracts and extract sentences");
  ingest->add_option("files", html_files, "HTML files")->required()->check(CLI::ExistingFile);
  ingest->add_option("--doc-id", doc_id, "Document id (single file only; default: file stem)");

  std::vector<double> ratios{0.5, 0.2, 0.3};
  auto* split = app.add_subcommand("split", "Stratified split of the labeled sentences");
  split->add_option("--ratios", ratios, "Train, validation and test ratios")->expected(3)->delimiter(',');

  std::vector<std::string> annotators;
  auto* assign = app.add_subcommand("assign", "Assign unlabeled sentences to annotator pairs");
  assign->add_option("--annotators", annotators, "Annotator ids")->required()->delimiter(',');

  std::string sentence_id, annotator_id, label_name, checklist_arg;
  auto* annotate = app.add_subcommand("annotate", "Record one annotation");
  annotate->add_option("--sentence", sentence_id)->required();
  annotate->add_option("--annotator", annotator_id)->required();
  annotate->add_option("--label", label_name, "fair | potentially_unfair | clearly_unfair");
  annotate->add_option("--checklist", checklist_arg, "Guideline answers as JSON, or @file");

  auto* adjudicate = app.add_subcommand("adjudicate", "List or resolve disagreements");
  adjudicate->add_option("--sentence", sentence_id);
  adjudicate->add_option("--adjudicator", annotator_id);
  adjudicate->add_option("--label", label_name);

  app.add_subcommand("kappa", "Inter-annotator agreement of the primary labels");

  std::string template_arg;
  int count = 25;
  std::string batch_id;
  auto* augment = app.add_subcommand("augment", "Generate synthetic clearly unfair candidates");
  augment->add_option("--template", template_arg, "Template id or asset path")->required();
  augment->add_option("-n", count, "Sentences to request")->capture_default_str();
  augment->add_option("--batch-id", batch_id);

  std::size_t index = 0;
  bool accept = false;
  bool reject = false;
  auto* review = app.add_subcommand("review", "Review one augmentation candidate");
  review->add_option("--batch", batch_id)->required();
  review->add_option("--index", index)->required();
  review->add_option("--reviewer", annotator_id)->required();
  auto* accept_flag = review->add_flag("--accept", accept);
  review->add_flag("--reject", reject)->excludes(accept_flag);

  auto* train = app.add_subcommand("train", "Run a vanilla or data augmentation experiment");
  auto* selftrain = app.add_subcommand("selftrain", "Run a data augmentation + self-training experiment");

  std::string model_name;
  std::vector<std::string> sentences;
  auto* classify = app.add_subcommand("classify", "Classify sentences with a trained model");
  classify->add_option("--model", model_name, "Run name whose checkpoint to use")->required();
  classify->add_option("sentences", sentences)->required();

  auto* prompt_classify = app.add_subcommand("prompt-classify", "Classify by prompting an LLM");
  prompt_classify->add_option("--template", template_arg, "Template id or asset path (single sentence mode)");
  prompt_classify->add_option("sentences", sentences);

  fs::path data_file;
  auto* eval = app.add_subcommand("eval", "Evaluate a trained model on a labeled JSONL file");
  eval->add_option("--model", model_name)->required();
  eval->add_option("--data", data_file)->required()->check(CLI::ExistingFile);

  bool extended = false;
  bool as_json = false;
  std::vector<std::string> run_names;
  auto* report = app.add_subcommand("report", "Results table over stored runs");
  report->add_flag("--extended", extended, "Per-class precision and recall");
  report->add_flag("--json", as_json);
  report->add_option("runs", run_names, "Run names (default: all)");

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Start the HTTP service");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : static_cast<int>(ExitCode::Usage);
  }
  if (seed_opt->count() > 0) g.seed = seed_value;

  try {
    if (ingest->parsed()) {
      if (!doc_id.empty() && html_files.size() != 1) throw Error(ErrorCode::ConfigError, "--doc-id needs exactly one file");
      corpus::DatasetStore store(g.store);
      for (const auto& f : html_files) {
        const auto doc = corpus::ingest_html(read_file(f), doc_id.empty() ? f.stem().string() : doc_id);
        const auto extracted = corpus::extract_sentences(doc);
        store.put_document(doc);
        std::size_t redacted = 0;
        for (const auto& s : extracted) {
          store.put_sentence(s);
          redacted += s.redacted ? 1 : 0;
        }
        std::cout << doc.doc_id << ": " << extracted.size() - redacted << " sentences, " << redacted << " redacted\n";
      }
    } else if (split->parsed()) {
      corpus::DatasetStore store(g.store);
      corpus::SplitConfig cfg;
      std::copy(ratios.begin(), ratios.end(), cfg.ratios.begin());
      cfg.seed = g.seed.value_or(0);
      cfg.validate();
      const auto examples = store.labeled_examples();
      const auto s = corpus::stratified_split(examples, cfg);
      store.put_split(s);
      std::cout << "train " << s.train.size() << ", validation " << s.validation.size() << ", test " << s.test.size()
                << "\n";
    } else if (assign->parsed()) {
      corpus::DatasetStore store(g.store);
      std::vector<std::string> ids;
      for (const auto& s : store.sentences()) {
        if (!s.redacted && !store.get_label(s.sentence_id)) ids.push_back(s.sentence_id);
      }
      json out = json::object();
      for (const auto& [id, pair] : annotation::assign_batch(ids, annotators)) out[id] = pair;
      std::cout << out.dump(2) << "\n";
    } else if (annotate->parsed()) {
      corpus::DatasetStore store(g.store);
      annotation::AnnotationBook book(g.store / "annotation");
      const auto sentence = store.get_sentence(sentence_id);
      if (!sentence) throw Error(ErrorCode::NotFound, "no sentence '" + sentence_id + "'");
      annotation::Annotation a{sentence_id, annotator_id, Label::Fair, utc_timestamp(), {}};
      if (!checklist_arg.empty()) {
        const std::string text = checklist_arg.front() == '@' ? read_file(checklist_arg.substr(1)) : checklist_arg;
        const auto outcome =
            annotation::guideline_checklist(sentence->text, annotation::checklist_answers_from_json(json::parse(text)));
        a.label = outcome.label;
        a.guideline_trace = outcome.trace;
      }
      if (!label_name.empty()) {
        a.label = label_from_string(label_name);
      } else if (checklist_arg.empty()) {
        throw Error(ErrorCode::ConfigError, "pass --label or --checklist");
      }
      const auto outcome = book.submit(a);
      if (outcome.example) store.put_label(*outcome.example);
      std::cout << annotation::to_string(outcome.status) << " (" << to_string(a.label) << ")\n";
    } else if (adjudicate->parsed()) {
      corpus::DatasetStore store(g.store);
      annotation::AnnotationBook book(g.store / "annotation");
      if (sentence_id.empty()) {
        for (const auto& p : book.pending()) std::cout << json(p).dump() << "\n";
      } else {
        if (annotator_id.empty() || label_name.empty()) {
          throw Error(ErrorCode::ConfigError, "--adjudicator and --label are required to resolve");
        }
        const auto e = book.adjudicate(sentence_id, annotator_id, label_from_string(label_name), utc_timestamp());
        store.put_label(e);
        std::cout << "adjudicated " << sentence_id << " as " << to_string(e.label) << "\n";
      }
    } else if (app.got_subcommand("kappa")) {
      annotation::AnnotationBook book(g.store / "annotation");
      const auto pairs = book.primary_pairs();
      std::cout << "kappa " << annotation::cohen_kappa(pairs) << " over " << pairs.size() << " sentences\n";
    } else if (augment->parsed()) {
      corpus::DatasetStore store(g.store);
      const auto tmpl = find_template(g, template_arg);
      std::vector<std::string> existing;
      for (const auto& e : store.labels()) existing.push_back(e.text);
      if (fs::is_directory(g.store / "augment")) {
        for (const auto& entry : fs::directory_iterator(g.store / "augment")) {
          for (const auto& c : json::parse(read_file(entry.path())).get<llm::AugmentationBatch>().candidates) {
            existing.push_back(c.text);
          }
        }
      }
      auto client = client_from(g);
      const auto batch = llm::generate_candidates(*client, tmpl, count, existing, batch_id);
      if (fs::exists(batch_file(g, batch.batch_id))) {
        throw Error(ErrorCode::Conflict, "batch '" + batch.batch_id + "' already exists");
      }
      write_file_atomic(batch_file(g, batch.batch_id), json(batch).dump(1) + "\n");
      std::cout << batch.batch_id << ": " << batch.candidates.size() << " candidates (" << batch.returned
                << " returned, " << batch.duplicates_removed << " duplicates removed)\n";
    } else if (review->parsed()) {
      if (!accept && !reject) throw Error(ErrorCode::ConfigError, "pass --accept or --reject");
      corpus::DatasetStore store(g.store);
      const auto file = batch_file(g, batch_id);
      if (!fs::exists(file)) throw Error(ErrorCode::NotFound, "no augmentation batch '" + batch_id + "'");
      auto batch = llm::review_candidate(json::parse(read_file(file)).get<llm::AugmentationBatch>(), index,
                                         annotator_id, accept);
      write_file_atomic(file, json(batch).dump(1) + "\n");
      const auto& c = batch.candidates[index];
      if (c.verified()) {
        for (const auto& e : llm::to_synthetic_examples(batch)) {
          if (e.sentence_id == "syn/" + batch.batch_id + "/" + std::to_string(index)) store.put_label(e);
        }
      }
      std::cout << "candidate " << index << ": " << llm::to_string(c.status) << "\n";
    } else if (train->parsed() || selftrain->parsed()) {
      const auto cfg = experiment_config(g);
      const bool want_self = selftrain->parsed();
      if (workbench::is_prompting(cfg.technique) ||
          (cfg.technique == workbench::Technique::DataAugmentationSelfTrain) != want_self) {
        throw Error(ErrorCode::ConfigError, "technique '" + std::string(workbench::to_string(cfg.technique)) +
                                                "' does not belong to this verb");
      }
      print_run(workbench::run_experiment(cfg, g.store));
    } else if (classify->parsed()) {
      const fs::path file = g.store / "models" / (model_name + ".json");
      if (!fs::exists(file)) throw Error(ErrorCode::NotFound, "no model '" + model_name + "'");
      const auto model = classifier::load_checkpoint(file);
      std::vector<classifier::TextItem> items;
      for (std::size_t i = 0; i < sentences.size(); ++i) items.push_back({std::to_string(i), sentences[i]});
      for (const auto& p : classifier::predict(*model, items)) {
        std::cout << to_string(p.predicted) << "\t" << p.confidence << "\t" << sentences[std::stoul(p.sentence_id)]
                  << "\n";
      }
    } else if (prompt_classify->parsed()) {
      if (!g.config.empty()) {
        const auto cfg = experiment_config(g);
        if (!workbench::is_prompting(cfg.technique)) {
          throw Error(ErrorCode::ConfigError, "prompt-classify needs a direct_prompt or cot_prompt config");
        }
        print_run(workbench::run_experiment(cfg, g.store));
      } else {
        if (template_arg.empty() || sentences.empty()) {
          throw Error(ErrorCode::ConfigError, "pass --config, or --template with sentences");
        }
        const auto tmpl = find_template(g, template_arg);
        auto client = client_from(g);
        for (const auto& s : sentences) {
          const auto r = llm::classify_prompted(*client, tmpl, s);
          std::cout << to_string(r.label) << "\t" << s << "\n";
          if (!r.rationale.empty()) std::cout << "  " << r.rationale << "\n";
        }
      }
    } else if (eval->parsed()) {
      const fs::path file = g.store / "models" / (model_name + ".json");
      if (!fs::exists(file)) throw Error(ErrorCode::NotFound, "no model '" + model_name + "'");
      const auto model = classifier::load_checkpoint(file);
      std::vector<classifier::TextItem> items;
      std::vector<Label> gold;
      for (const auto& j : read_json_lines(data_file)) {
        const auto e = j.get<LabeledExample>();
        items.push_back({e.sentence_id, e.text});
        gold.push_back(e.label);
      }
      std::cout << json(classifier::evaluate(classifier::predict(*model, items), gold)).dump(2) << "\n";
    } else if (report->parsed()) {
      auto runs = workbench::load_runs(g.store);
      if (!run_names.empty()) {
        std::vector<workbench::RunRecord> picked;
        for (const auto& name : run_names) {
          auto it = std::find_if(runs.begin(), runs.end(), [&](const auto& r) { return r.name == name; });
          if (it == runs.end()) throw Error(ErrorCode::NotFound, "no run '" + name + "'");
          picked.push_back(*it);
        }
        runs = std::move(picked);
      }
      if (runs.empty()) throw Error(ErrorCode::EmptyInput, "no runs in " + g.store.string());
      const auto table = workbench::report(runs, extended);
      std::cout << (as_json ? to_json(table).dump(2) + "\n" : workbench::render_text(table));
    } else if (serve->parsed()) {
      workbench::ServiceConfig cfg;
      cfg.store = g.store;
      cfg.host = host;
      cfg.port = port;
      cfg.prompt_dir = g.prompts;
      if (!g.llm_script.empty()) cfg.llm = json{{"script", g.llm_script}};
      if (!g.llm_url.empty()) cfg.llm = json{{"url", g.llm_url}};
      workbench::Service service(cfg);
      const int bound = service.bind();
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on http://" << host << ":" << bound << "\n" << std::flush;
      service.serve();
      g_service = nullptr;
    }
  } catch (const Error& e) {
    std::cerr << "clausefair: " << e.what() << "\n";
    return static_cast<int>(exit_code_for(e.code()));
  } catch (const json::exception& e) {
    std::cerr << "clausefair: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Data);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "clausefair: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Data);
  }
  return 0;
}
