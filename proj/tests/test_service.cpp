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

#include <chrono>
#include <thread>

#include "clausefair/llm/client.hpp"
#include "clausefair/workbench/service.hpp"
#include "support/fixture_data.hpp"
#include "support/temp_dir.hpp"

#include <httplib.h>

using namespace clausefair;
using namespace clausefair::workbench;
using namespace clausefair::testing;
using nlohmann::json;

namespace {

constexpr const char* kHtml =
    "<html><body><h2>Payment</h2><p>Buyer shall pay net 30. Supplier shall deliver monthly.</p>"
    "<p>Fees are set forth in Exhibit [***] hereto.</p>"
    "<h2>Termination</h2><p>Provider may terminate this agreement at any time without notice.</p></body></html>";

class Running {
 public:
  explicit Running(ServiceConfig cfg) : service_(std::move(cfg)) {
    port_ = service_.bind();
    thread_ = std::thread([this] { service_.serve(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    client_->set_read_timeout(30, 0);
    for (int i = 0; i < 100 && !client_->Get("/train/status"); ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
  }
  ~Running() {
    service_.stop();
    thread_.join();
  }

  std::pair<int, json> get(const std::string& path) { return unpack(client_->Get(path)); }
  std::pair<int, json> post(const std::string& path, const json& body) {
    return unpack(client_->Post(path, body.dump(), "application/json"));
  }
  std::pair<int, json> post_raw(const std::string& path, const std::string& body) {
    return unpack(client_->Post(path, body, "application/json"));
  }

 private:
  static std::pair<int, json> unpack(const httplib::Result& r) {
    REQUIRE(r);
    return {r->status, r->body.empty() ? json() : json::parse(r->body)};
  }

  Service service_;
  int port_ = 0;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
};

ServiceConfig config_for(const std::filesystem::path& store) {
  ServiceConfig cfg;
  cfg.store = store;
  cfg.port = 0;
  cfg.prompt_dir = asset_dir() / "prompts";
  cfg.client = llm::ScriptedClient::from_file(fixture_dir() / "augment/script.jsonl");
  return cfg;
}

json wait_for(Running& svc, const std::string& name) {
  for (int i = 0; i < 600; ++i) {
    auto [status, body] = svc.get("/train/status");
    if (body.value("name", "") == name && body.value("state", "") != "running") return body;
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  FAIL("experiment did not finish");
  return {};
}

}  // namespace

TEST_CASE("status mapping") {
  CHECK(http_status_for(ErrorCode::NotFound) == 404);
  CHECK(http_status_for(ErrorCode::NotPending) == 404);
  CHECK(http_status_for(ErrorCode::DuplicateAnnotation) == 409);
  CHECK(http_status_for(ErrorCode::SelfAdjudication) == 409);
  CHECK(http_status_for(ErrorCode::ConfigError) == 400);
  CHECK(http_status_for(ErrorCode::TransportError) == 502);
  CHECK(http_status_for(ErrorCode::EmptyDocument) == 422);
}

TEST_CASE("documents, annotations and adjudication over http") {
  TempDir dir("svc");
  std::string disputed;
  {
    Running svc(config_for(dir.path()));
    auto [status, body] = svc.post("/documents", {{"doc_id", "msa"}, {"html", kHtml}});
    CHECK(status == 201);
    CHECK(body.at("sentence_count") == 3);
    CHECK(body.at("redacted_count") == 1);

    std::tie(status, body) = svc.post("/documents", {{"doc_id", "empty"}, {"html", "<html></html>"}});
    CHECK(status == 422);
    CHECK(body.contains("error"));
    std::tie(status, body) = svc.post_raw("/documents", "{not json");
    CHECK(status == 400);

    std::tie(status, body) = svc.get("/sentences");
    REQUIRE(body.size() == 3);
    CHECK(body[0].at("context").contains("next"));
    const std::string s0 = body[0].at("sentence_id"), s1 = body[1].at("sentence_id");
    disputed = s1;

    svc.post("/annotations", {{"sentence_id", s0}, {"annotator_id", "a"}, {"label", "fair"}});
    std::tie(status, body) = svc.post("/annotations", {{"sentence_id", s0}, {"annotator_id", "b"}, {"label", "fair"}});
    CHECK(status == 201);
    CHECK(body.at("status") == "agreed");
    std::tie(status, body) = svc.post("/annotations", {{"sentence_id", s0}, {"annotator_id", "b"}, {"label", "fair"}});
    CHECK(status == 409);

    svc.post("/annotations", {{"sentence_id", s1}, {"annotator_id", "a"}, {"label", "fair"}});
    std::tie(status, body) = svc.post("/annotations", {{"sentence_id", s1}, {"annotator_id", "b"},
                                                       {"checklist", {{"neither_right_nor_obligation", false},
                                                                      {"applies_equally_to_both_parties", false},
                                                                      {"details_decided_later", false},
                                                                      {"right_with_ambiguous_condition", false},
                                                                      {"right_without_boundaries", false},
                                                                      {"ambiguous_material_obligation", false},
                                                                      {"clear_imbalance", true},
                                                                      {"ambiguity_causes_non_compliance", false}}}});
    CHECK(status == 201);
    CHECK(body.at("label") == "clearly_unfair");
    CHECK(body.at("status") == "adjudication_required");

    std::tie(status, body) = svc.get("/adjudications?status=pending");
    CHECK(body.size() == 1);
    std::tie(status, body) = svc.get("/metrics/kappa");
    CHECK(status == 200);
    CHECK(body.contains("kappa"));

    std::tie(status, body) = svc.post("/adjudications/" + s1, {{"adjudicator_id", "a"}, {"label", "clearly_unfair"}});
    CHECK(status == 409);
    std::tie(status, body) = svc.post("/annotations", {{"sentence_id", s1}, {"annotator_id", "c"}});
    CHECK(status == 400);
  }
  // Restart: everything is still there.
  Running svc(config_for(dir.path()));
  auto [status, body] = svc.get("/adjudications?status=pending");
  REQUIRE(body.size() == 1);
  std::tie(status, body) = svc.post("/adjudications/" + disputed, {{"adjudicator_id", "c"}, {"label", "clearly_unfair"}});
  CHECK(status == 200);
  CHECK(body.at("pending") == 0);
  std::tie(status, body) = svc.get("/adjudications?status=closed");
  CHECK(body.size() == 1);
  std::tie(status, body) = svc.post("/adjudications/" + disputed, {{"adjudicator_id", "c"}, {"label", "fair"}});
  CHECK(status == 404);
  std::tie(status, body) = svc.get("/sentences");
  CHECK(body.size() == 3);
}

TEST_CASE("augmentation batches over http") {
  TempDir dir("svc");
  Running svc(config_for(dir.path()));
  auto [status, body] = svc.post("/augment/batches", {{"template_id", "augment-unilateral-termination"}, {"n", 25}, {"batch_id", "b1"}});
  REQUIRE(status == 201);
  CHECK(body.at("candidates").size() == 25);
  std::tie(status, body) = svc.post("/augment/batches/b1/review", {{"index", 0}, {"reviewer_id", "r1"}, {"accept", true}});
  CHECK(status == 200);
  std::tie(status, body) = svc.post("/augment/batches/b1/review", {{"index", 0}, {"reviewer_id", "r1"}, {"accept", true}});
  CHECK(status == 409);
  std::tie(status, body) = svc.post("/augment/batches/b1/review", {{"index", 0}, {"reviewer_id", "r2"}, {"accept", true}});
  CHECK(body.at("candidates")[0].at("status") == "verified");
  std::tie(status, body) = svc.get("/augment/batches/b1");
  CHECK(body.at("verified") == 1);
  std::tie(status, body) = svc.get("/augment/batches/nope");
  CHECK(status == 404);
  std::tie(status, body) = svc.post("/augment/batches", {{"template_id", "missing"}});
  CHECK(status == 404);
}

TEST_CASE("experiments and classification over http") {
  TempDir dir("svc");
  Running svc(config_for(dir.path()));
  const json cfg{{"name", "svc-vanilla"},
                 {"technique", "vanilla"},
                 {"seed", 7},
                 {"data", {{"labeled", (fixture_dir() / "experiment/labeled.jsonl").string()}}}};
  auto [status, body] = svc.post("/experiments", cfg);
  CHECK(status == 202);
  const auto done = wait_for(svc, "svc-vanilla");
  CHECK(done.at("state") == "succeeded");
  std::tie(status, body) = svc.get("/experiments/svc-vanilla");
  CHECK(status == 200);
  CHECK(body.at("metrics").at("accuracy").get<double>() > 0.5);

  std::tie(status, body) = svc.post("/classify", {{"model", "svc-vanilla"},
                                                  {"sentence", "Provider may terminate this agreement at any time."}});
  CHECK(status == 200);
  CHECK(body.contains("label"));
  CHECK(body.at("distribution").size() == 3);
  CHECK(body.at("confidence").get<double>() > 0.0);
  std::tie(status, body) = svc.post("/classify", {{"model", "svc-vanilla"}, {"sentences", {"One.", "Two."}}});
  CHECK(body.size() == 2);
  std::tie(status, body) = svc.post("/classify", {{"model", "nope"}, {"sentence", "x"}});
  CHECK(status == 404);
  std::tie(status, body) = svc.post("/experiments", {{"name", "bad"}, {"technique", "vanilla"}});
  CHECK(status == 400);
  std::tie(status, body) = svc.get("/experiments/unknown");
  CHECK(status == 404);
}
