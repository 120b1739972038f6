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
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "clausefair/error.hpp"
#include "clausefair/llm/client.hpp"

namespace clausefair::workbench {

struct ServiceConfig {
  std::filesystem::path store;
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 binds any free port
  std::filesystem::path prompt_dir;
  // Client spec for augmentation requests (see llm::make_client).
  std::optional<nlohmann::json> llm;
  // Overrides `llm`; used by tests.
  std::shared_ptr<llm::LlmClient> client;
};

// HTTP status for an error code: 400 usage, 404 missing, 409 conflicts,
// 422 data errors, 502 external service failures.
int http_status_for(ErrorCode code);

// JSON API over one store directory. Every mutation is flushed to disk before
// the response is sent, so a restarted service sees the same state.
//
//   POST /documents                      {"doc_id", "html"}
//   GET  /sentences?split=train|validation|test
//   POST /annotations                    {"sentence_id", "annotator_id", "label" | "checklist"}
//   GET  /adjudications?status=pending|closed
//   POST /adjudications/{sentence_id}    {"adjudicator_id", "label"}
//   GET  /metrics/kappa
//   POST /augment/batches                {"template_id", "n", "batch_id"}
//   GET  /augment/batches/{id}
//   POST /augment/batches/{id}/review    {"index", "reviewer_id", "accept"}
//   POST /experiments                    experiment config document
//   GET  /experiments/{name}
//   POST /classify                       {"model", "sentence" | "sentences"}
//   GET  /train/status
//
// Experiments run on a background worker, one at a time.
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds the listening socket and returns the port; throws Error(Io) when
  // the address is unavailable.
  int bind();
  // Serves until stop(). Call bind() first.
  void serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace clausefair::workbench
