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

#include "clausefair/workbench/service.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "clausefair/annotation/annotation.hpp"
#include "clausefair/annotation/checklist.hpp"
#include "clausefair/annotation/kappa.hpp"
#include "clausefair/classifier/backend.hpp"
#include "clausefair/corpus/document.hpp"
#include "clausefair/corpus/sentences.hpp"
#include "clausefair/corpus/store.hpp"
#include "clausefair/llm/gateway.hpp"
#include "clausefair/llm/prompt.hpp"
#include "clausefair/util.hpp"
#include "clausefair/workbench/experiment.hpp"

// After Eigen: <resolv.h> defines a macro named _res.
#include <httplib.h>

namespace clausefair::workbench {

namespace fs = std::filesystem;
using nlohmann::json;

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound:
    case ErrorCode::NotPending:
      return 404;
    case ErrorCode::Conflict:
    case ErrorCode::DuplicateAnnotation:
    case ErrorCode::DuplicateReview:
    case ErrorCode::SelfAdjudication:
    case ErrorCode::InvalidState:
      return 409;
    default:
      break;
  }
  switch (exit_code_for(code)) {
    case ExitCode::Usage: return 400;
    case ExitCode::External: return 502;
    default: return 422;
  }
}

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
  send_json(res, status, json{{"error", code}, {"message", message}});
}

json body_of(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json j = json::parse(req.body);
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "request body must be a JSON object");
  return j;
}

// (doc_id, section, clause, position) for reading order.
std::tuple<std::string, int, int, int> reading_key(const corpus::DatasetRecord& r) {
  int s = 0;
  int c = 0;
  if (const auto slash = r.section_path.find('/'); slash != std::string::npos) {
    s = std::atoi(r.section_path.substr(0, slash).c_str());
    c = std::atoi(r.section_path.substr(slash + 1).c_str());
  }
  return {r.doc_id, s, c, r.position};
}

struct BatchSlot {
  std::mutex mutex;
  llm::AugmentationBatch batch;
};

struct JobStatus {
  std::string state = "idle";  // idle | running | succeeded | failed
  std::string name;
  std::string stage;
  std::string error;
  std::string started_at;
  std::string finished_at;
};

}  // namespace

struct Service::Impl {
  explicit Impl(ServiceConfig c)
      : config(std::move(c)), store(config.store), book(config.store / "annotation") {
    fs::create_directories(config.store / "augment");
    for (const auto& entry : fs::directory_iterator(config.store / "augment")) {
      if (entry.path().extension() != ".json") continue;
      auto slot = std::make_shared<BatchSlot>();
      slot->batch = json::parse(read_file(entry.path())).get<llm::AugmentationBatch>();
      batches[slot->batch.batch_id] = std::move(slot);
    }
    routes();
  }

  ~Impl() {
    server.stop();
    if (worker.joinable()) worker.join();
  }

  template <typename F>
  auto guarded(F f) {
    return [f = std::move(f)](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const Error& e) {
        send_error(res, http_status_for(e.code()), to_string(e.code()), e.detail());
      } catch (const json::exception& e) {
        send_error(res, 400, "BadRequest", e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "Internal", e.what());
      }
    };
  }

  void routes();

  std::shared_ptr<llm::LlmClient> client() {
    std::lock_guard lock(client_mutex);
    if (!llm_client) {
      if (config.client) {
        llm_client = config.client;
      } else if (config.llm) {
        llm_client = llm::make_client(*config.llm);
      } else {
        throw Error(ErrorCode::ConfigError, "the service was started without an llm client");
      }
    }
    return llm_client;
  }

  std::shared_ptr<BatchSlot> batch(const std::string& id) {
    std::lock_guard lock(batches_mutex);
    auto it = batches.find(id);
    if (it == batches.end()) throw Error(ErrorCode::NotFound, "no augmentation batch '" + id + "'");
    return it->second;
  }

  void persist(const llm::AugmentationBatch& b) {
    write_file_atomic(config.store / "augment" / (b.batch_id + ".json"), json(b).dump(1) + "\n");
  }

  std::shared_ptr<const classifier::ClassifierBackend> model(const std::string& name) {
    const fs::path file = config.store / "models" / (name + ".json");
    if (!fs::exists(file)) throw Error(ErrorCode::NotFound, "no model '" + name + "'");
    const auto stamp = fs::last_write_time(file);
    std::lock_guard lock(models_mutex);
    auto& entry = models[name];
    if (!entry.second || entry.first != stamp) {
      entry = {stamp, std::shared_ptr<const classifier::ClassifierBackend>(classifier::load_checkpoint(file))};
    }
    return entry.second;
  }

  ServiceConfig config;
  corpus::DatasetStore store;
  annotation::AnnotationBook book;
  httplib::Server server;

  std::mutex client_mutex;
  std::shared_ptr<llm::LlmClient> llm_client;

  std::mutex batches_mutex;
  std::map<std::string, std::shared_ptr<BatchSlot>> batches;

  std::mutex models_mutex;
  std::map<std::string, std::pair<fs::file_time_type, std::shared_ptr<const classifier::ClassifierBackend>>> models;

  std::mutex job_mutex;
  JobStatus job;
  std::thread worker;
};

void Service::Impl::routes() {
  server.Post("/documents", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const json body = body_of(req);
    const auto doc = corpus::ingest_html(body.at("html").get<std::string>(), body.at("doc_id").get<std::string>());
    const auto sentences = corpus::extract_sentences(doc);
    store.put_document(doc);
    std::size_t redacted = 0;
    for (const auto& s : sentences) {
      store.put_sentence(s);
      redacted += s.redacted ? 1 : 0;
    }
    send_json(res, 201, json{{"doc_id", doc.doc_id},
                             {"sentence_count", sentences.size() - redacted},
                             {"redacted_count", redacted}});
  }));

  server.Get("/sentences", guarded([this](const httplib::Request& req, httplib::Response& res) {
    std::optional<corpus::Bucket> bucket;
    if (req.has_param("split")) {
      try {
        bucket = corpus::bucket_from_string(req.get_param_value("split"));
      } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, e.detail());
      }
    }
    auto rows = store.records(bucket);
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return reading_key(a) < reading_key(b); });
    json out = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      json j = rows[i];
      json context = json::object();
      const bool in_doc = !rows[i].doc_id.empty();
      if (in_doc && i > 0 && rows[i - 1].doc_id == rows[i].doc_id) context["previous"] = rows[i - 1].text;
      if (in_doc && i + 1 < rows.size() && rows[i + 1].doc_id == rows[i].doc_id) context["next"] = rows[i + 1].text;
      j["context"] = std::move(context);
      out.push_back(std::move(j));
    }
    send_json(res, 200, out);
  }));

  server.Post("/annotations", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const json body = body_of(req);
    annotation::Annotation a;
    a.sentence_id = body.at("sentence_id").get<std::string>();
    a.annotator_id = body.at("annotator_id").get<std::string>();
    a.timestamp = body.value("timestamp", utc_timestamp());
    const auto sentence = store.get_sentence(a.sentence_id);
    if (!sentence) throw Error(ErrorCode::NotFound, "no sentence '" + a.sentence_id + "'");
    if (body.contains("checklist")) {
      const auto outcome = annotation::guideline_checklist(sentence->text,
                                                           annotation::checklist_answers_from_json(body.at("checklist")));
      a.label = outcome.label;
      a.guideline_trace = outcome.trace;
    }
    if (body.contains("label")) {
      a.label = label_from_string(body.at("label").get<std::string>());
    } else if (!body.contains("checklist")) {
      throw Error(ErrorCode::ConfigError, "give a 'label' or a 'checklist'");
    }
    const auto outcome = book.submit(a);
    json out{{"status", annotation::to_string(outcome.status)}, {"label", to_string(a.label)},
             {"guideline_trace", a.guideline_trace}};
    if (outcome.example) {
      store.put_label(*outcome.example);
      out["example"] = *outcome.example;
    }
    send_json(res, 201, out);
  }));

  server.Get("/adjudications", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const std::string status = req.has_param("status") ? req.get_param_value("status") : "pending";
    json out = json::array();
    if (status == "pending") {
      for (const auto& p : book.pending()) {
        json j = p;
        if (auto s = store.get_sentence(p.sentence_id)) j["text"] = s->text;
        out.push_back(std::move(j));
      }
    } else if (status == "closed") {
      for (const auto& c : book.closed()) out.push_back(c);
    } else {
      throw Error(ErrorCode::ConfigError, "status must be 'pending' or 'closed'");
    }
    send_json(res, 200, out);
  }));

  server.Post(R"(/adjudications/(.+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const json body = body_of(req);
    const std::string id = req.matches[1];
    const auto example = book.adjudicate(id, body.at("adjudicator_id").get<std::string>(),
                                         label_from_string(body.at("label").get<std::string>()),
                                         body.value("timestamp", utc_timestamp()));
    store.put_label(example);
    send_json(res, 200, json{{"example", example}, {"pending", book.pending_count()}});
  }));

  server.Get("/metrics/kappa", guarded([this](const httplib::Request&, httplib::Response& res) {
    const auto pairs = book.primary_pairs();
    send_json(res, 200, json{{"kappa", annotation::cohen_kappa(pairs)}, {"pairs", pairs.size()}});
  }));

  server.Post("/augment/batches", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const json body = body_of(req);
    const std::string template_id = body.at("template_id").get<std::string>();
    const int n = body.value("n", 25);
    std::optional<llm::PromptTemplate> tmpl;
    for (auto& t : llm::load_template_dir(config.prompt_dir)) {
      if (t.template_id == template_id) tmpl = std::move(t);
    }
    if (!tmpl) throw Error(ErrorCode::NotFound, "no prompt template '" + template_id + "'");
    std::vector<std::string> existing;
    for (const auto& e : store.labels()) existing.push_back(e.text);
    {
      std::lock_guard lock(batches_mutex);
      for (const auto& [id, slot] : batches) {
        std::lock_guard slot_lock(slot->mutex);
        for (const auto& c : slot->batch.candidates) existing.push_back(c.text);
      }
    }
    auto batch = llm::generate_candidates(*client(), *tmpl, n, existing, body.value("batch_id", std::string{}));
    auto slot = std::make_shared<BatchSlot>();
    slot->batch = batch;
    {
      std::lock_guard lock(batches_mutex);
      if (batches.count(batch.batch_id) != 0) {
        throw Error(ErrorCode::Conflict, "batch '" + batch.batch_id + "' already exists");
      }
      persist(batch);
      batches[batch.batch_id] = slot;
    }
    send_json(res, 201, batch);
  }));

  server.Get(R"(/augment/batches/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    auto slot = batch(req.matches[1]);
    std::lock_guard lock(slot->mutex);
    send_json(res, 200, slot->batch);
  }));

  server.Post(R"(/augment/batches/([^/]+)/review)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const json body = body_of(req);
    auto slot = batch(req.matches[1]);
    std::lock_guard lock(slot->mutex);
    const auto index = body.at("index").get<std::size_t>();
    auto updated = llm::review_candidate(slot->batch, index, body.at("reviewer_id").get<std::string>(),
                                         body.at("accept").get<bool>());
    persist(updated);
    slot->batch = std::move(updated);
    if (slot->batch.candidates[index].verified()) {
      for (const auto& e : llm::to_synthetic_examples(slot->batch)) {
        if (e.sentence_id == "syn/" + slot->batch.batch_id + "/" + std::to_string(index)) store.put_label(e);
      }
    }
    send_json(res, 200, slot->batch);
  }));

  server.Post("/experiments", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const auto cfg = parse_experiment_config(body_of(req), config.store);
    std::lock_guard lock(job_mutex);
    if (job.state == "running") {
      throw Error(ErrorCode::Conflict, "experiment '" + job.name + "' is still running");
    }
    if (worker.joinable()) worker.join();
    job = JobStatus{"running", cfg.name, "queued", "", utc_timestamp(), ""};
    RunOptions options;
    if (is_prompting(cfg.technique) && config.client) options.client = config.client;
    options.progress = [this](const std::string& stage) {
      std::lock_guard l(job_mutex);
      job.stage = stage;
    };
    worker = std::thread([this, cfg, options] {
      std::string error;
      try {
        run_experiment(cfg, config.store, options);
      } catch (const std::exception& e) {
        error = e.what();
      }
      std::lock_guard l(job_mutex);
      job.state = error.empty() ? "succeeded" : "failed";
      job.error = error;
      job.finished_at = utc_timestamp();
    });
    send_json(res, 202, json{{"name", cfg.name}, {"config_hash", config_hash(cfg)}, {"status", "running"}});
  }));

  server.Get(R"(/experiments/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const std::string name = req.matches[1];
    {
      std::lock_guard lock(job_mutex);
      if (job.name == name && job.state == "running") {
        send_json(res, 200, json{{"name", name}, {"status", "running"}, {"stage", job.stage}});
        return;
      }
    }
    const auto run = load_run(config.store, name);
    if (!run) throw Error(ErrorCode::NotFound, "no experiment '" + name + "'");
    json out = *run;
    out["status"] = "finished";
    send_json(res, 200, out);
  }));

  server.Post("/classify", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const json body = body_of(req);
    const auto m = model(body.at("model").get<std::string>());
    std::vector<classifier::TextItem> items;
    const bool single = body.contains("sentence");
    if (single) {
      items.push_back({"input/0", body.at("sentence").get<std::string>()});
    } else {
      const auto texts = body.at("sentences").get<std::vector<std::string>>();
      for (std::size_t i = 0; i < texts.size(); ++i) items.push_back({"input/" + std::to_string(i), texts[i]});
    }
    if (items.empty()) throw Error(ErrorCode::EmptyInput, "no sentences to classify");
    json out = json::array();
    for (const auto& p : classifier::predict(*m, items)) {
      out.push_back(json{{"label", to_string(p.predicted)}, {"distribution", p.distribution}, {"confidence", p.confidence}});
    }
    send_json(res, 200, single ? out[0] : out);
  }));

  server.Get("/train/status", guarded([this](const httplib::Request&, httplib::Response& res) {
    std::lock_guard lock(job_mutex);
    json out{{"state", job.state}, {"name", job.name}, {"stage", job.stage}};
    if (!job.error.empty()) out["error"] = job.error;
    if (!job.started_at.empty()) out["started_at"] = job.started_at;
    if (!job.finished_at.empty()) out["finished_at"] = job.finished_at;
    send_json(res, 200, out);
  }));
}

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Service::~Service() = default;

int Service::bind() {
  const auto& c = impl_->config;
  int port = c.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(c.host);
    if (port < 0) throw Error(ErrorCode::Io, "cannot bind " + c.host);
  } else if (!impl_->server.bind_to_port(c.host, port)) {
    throw Error(ErrorCode::Io, "cannot bind " + c.host + ":" + std::to_string(port) +
                                   "; is another process using the port?");
  }
  return port;
}

void Service::serve() { impl_->server.listen_after_bind(); }

void Service::stop() { impl_->server.stop(); }

}  // namespace clausefair::workbench
