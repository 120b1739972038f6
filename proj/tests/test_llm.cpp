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

#include <atomic>
#include <cstdlib>
#include <thread>

#include "clausefair/error.hpp"
#include "clausefair/llm/client.hpp"
#include "clausefair/llm/gateway.hpp"
#include "clausefair/llm/prompt.hpp"
#include "support/fixture_data.hpp"
#include "support/temp_dir.hpp"

#include <httplib.h>

using namespace clausefair;
using namespace clausefair::llm;
using namespace clausefair::testing;

namespace {

constexpr const char* kProbe =
    "The vendor should implement appropriate measures to ensure a level of security "
    "commensurate to the risk.";

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

PromptTemplate asset(const std::string& name) { return load_template(asset_dir() / "prompts" / (name + ".txt")); }

ScriptedClient::Rule reply(std::string text) {
  ScriptedClient::Rule r;
  r.response = std::move(text);
  return r;
}

std::string list_of(int n, int offset = 0) {
  std::string out = "<List of Sentences>: [";
  for (int i = 0; i < n; ++i) {
    if (i) out += ", ";
    out += "Provider may terminate service number " + std::to_string(i + offset) + " at any time.";
  }
  return out + "]";
}

}  // namespace

TEST_CASE("rendered prompts match the golden files") {
  CHECK(render(asset("direct"), std::string_view(kProbe)) == read_file(golden_dir() / "direct.golden"));
  CHECK(render(asset("cot"), std::string_view(kProbe)) == read_file(golden_dir() / "cot.golden"));
  CHECK(render(asset("augment_unilateral_termination")) ==
        read_file(golden_dir() / "augment_unilateral_termination.golden"));
}

TEST_CASE("rendered prompts keep section structure") {
  const auto cot = render(asset("cot"), std::string_view(kProbe));
  CHECK(cot.find("reason step by step and classify") != std::string::npos);
  std::size_t at = 0;
  for (const char* section : {"System Behavior: ", "Context: ", "Example 1: ", "Task: ", "Input Sentence: "}) {
    const auto pos = cot.find(section, at);
    REQUIRE(pos != std::string::npos);
    at = pos;
  }
  const auto aug = render(asset("augment_unilateral_termination"));
  CHECK(aug.find("terminate this agreement without prior notice") != std::string::npos);
  CHECK(aug.find("generate 25 unique contractual sentences") != std::string::npos);
  CHECK(aug.find("Output Format should be as follows: ") != std::string::npos);
  CHECK(render(asset("cot"), std::string_view(kProbe)) == cot);
}

TEST_CASE("render input rules") {
  CHECK(code_of([] { render(asset("direct")); }) == ErrorCode::MissingInput);
  CHECK(code_of([] { render(asset("augment_unilateral_termination"), std::string_view("x")); }) ==
        ErrorCode::InvalidTemplate);
}

TEST_CASE("template assets load, validate and round trip") {
  const auto all = load_template_dir(asset_dir() / "prompts");
  CHECK(all.size() == 8);
  std::set<Scenario> scenarios;
  for (const auto& t : all) {
    CHECK_NOTHROW(t.validate());
    CHECK(parse_template(serialize_template(t)) == t);
    if (t.kind == PromptKind::Augment) scenarios.insert(*t.scenario);
  }
  CHECK(scenarios.size() == kNumScenarios);
  CHECK(code_of([] { parse_template("no front matter"); }) == ErrorCode::InvalidTemplate);
}

TEST_CASE("parse_label") {
  CHECK(parse_label("...is potentially unfair.") == Label::PotentiallyUnfair);
  CHECK(parse_label("not clearly unfair; it is fair") == Label::Fair);
  CHECK(parse_label("Therefore, the sentence is Clearly Unfair.") == Label::ClearlyUnfair);
  CHECK(parse_label("Answer: FAIR") == Label::Fair);
  CHECK(code_of([] { parse_label("the clause is UNFAIR"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_label("cannot determine"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_label("the terms are unfairly drafted"); }) == ErrorCode::ParseError);
  for (Label l : kAllLabels) {
    const std::string phrase(display_name(l));
    CHECK(parse_label("The sentence is " + phrase + ".") == l);
    CHECK(parse_label(to_lower(phrase)) == l);
  }
}

TEST_CASE("classify_prompted sends deterministic requests") {
  ScriptedClient client({reply("Answer: Potentially Unfair"),
                         reply("The clause lets one side terminate at will. It is not fair to the "
                               "customer. Therefore, the sentence is Clearly Unfair."),
                         reply("cannot determine")});
  const auto direct = classify_prompted(client, asset("direct"), kProbe);
  CHECK(direct.label == Label::PotentiallyUnfair);
  const auto cot = classify_prompted(client, asset("cot"), kProbe);
  CHECK(cot.label == Label::ClearlyUnfair);
  CHECK(cot.rationale.find("terminate at will") != std::string::npos);
  CHECK(code_of([&] { classify_prompted(client, asset("direct"), kProbe); }) == ErrorCode::ParseError);
  const auto reqs = client.requests();
  REQUIRE(reqs.size() == 3);
  for (const auto& r : reqs) {
    CHECK(r.settings.temperature == 0.0);
    CHECK(r.settings.max_tokens == RequestSettings{}.max_tokens);
  }
  CHECK(reqs[0].prompt == render(asset("direct"), std::string_view(kProbe)));
  CHECK(code_of([&] { classify_prompted(client, asset("augment_unilateral_termination"), kProbe); }) ==
        ErrorCode::InvalidTemplate);
}

TEST_CASE("scripted client keyed rules and exhaustion") {
  ScriptedClient::Rule keyed;
  keyed.input = "Alpha.";
  keyed.response = "Answer: Fair";
  ScriptedClient client({keyed, reply("Answer: Clearly Unfair")});
  const auto t = asset("direct");
  CHECK(classify_prompted(client, t, "Alpha.").label == Label::Fair);
  CHECK(classify_prompted(client, t, "Alpha.").label == Label::Fair);
  CHECK(classify_prompted(client, t, "Beta.").label == Label::ClearlyUnfair);
  CHECK(code_of([&] { classify_prompted(client, t, "Beta."); }) == ErrorCode::TransportError);
}

TEST_CASE("retrying client retries transport failures only") {
  ScriptedClient::Rule fail;
  fail.transport_error = "connection reset";
  std::vector<std::chrono::milliseconds> sleeps;
  auto sleeper = [&](std::chrono::milliseconds d) { sleeps.push_back(d); };

  auto flaky = std::make_shared<ScriptedClient>(std::vector{fail, fail, reply("Answer: Fair")});
  RetryingClient ok(flaky, 2, std::chrono::milliseconds(100), sleeper);
  CHECK(classify_prompted(ok, asset("direct"), kProbe).label == Label::Fair);
  CHECK(flaky->requests().size() == 3);
  CHECK(sleeps == std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(100), std::chrono::milliseconds(200)});

  sleeps.clear();
  auto dead = std::make_shared<ScriptedClient>(std::vector{fail, fail, fail, reply("Answer: Fair")});
  RetryingClient gives_up(dead, 2, std::chrono::milliseconds(1), sleeper);
  CHECK(code_of([&] { classify_prompted(gives_up, asset("direct"), kProbe); }) == ErrorCode::TransportError);
  CHECK(dead->requests().size() == 3);

  auto garbled = std::make_shared<ScriptedClient>(std::vector{reply("no idea"), reply("Answer: Fair")});
  RetryingClient no_retry(garbled, 2, std::chrono::milliseconds(1), sleeper);
  CHECK(code_of([&] { classify_prompted(no_retry, asset("direct"), kProbe); }) == ErrorCode::ParseError);
  CHECK(garbled->requests().size() == 1);
}

TEST_CASE("http client talks to a completion endpoint") {
  httplib::Server server;
  std::atomic<int> calls{0};
  std::string seen_auth;
  nlohmann::json seen_body;
  server.Post("/v1/complete", [&](const httplib::Request& req, httplib::Response& res) {
    ++calls;
    seen_auth = req.get_header_value("Authorization");
    seen_body = nlohmann::json::parse(req.body);
    if (calls == 1) {
      res.status = 503;
      return;
    }
    res.set_content(R"({"choices":[{"text":"Answer: Clearly Unfair"}]})", "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  ::setenv("CLAUSEFAIR_TEST_KEY", "sekret", 1);
  auto client = make_client({{"url", "http://127.0.0.1:" + std::to_string(port) + "/v1/complete"},
                             {"api_key_env", "CLAUSEFAIR_TEST_KEY"},
                             {"timeout_s", 5},
                             {"retry_base_ms", 1}});
  const auto out = classify_prompted(*client, asset("direct"), kProbe);
  server.stop();
  t.join();
  CHECK(out.label == Label::ClearlyUnfair);
  CHECK(calls == 2);
  CHECK(seen_auth == "Bearer sekret");
  CHECK(seen_body.at("temperature") == 0.0);
  CHECK(seen_body.at("prompt").get<std::string>().find("Input Sentence: ") != std::string::npos);

  CHECK(code_of([] { HttpClient({"https://example.invalid/x"}); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { make_client({{"nothing", 1}}); }) == ErrorCode::ConfigError);
}

TEST_CASE("http client surfaces a dead endpoint as a transport error") {
  HttpClient client({"http://127.0.0.1:1/complete", "CLAUSEFAIR_TEST_UNSET", std::chrono::seconds(2)});
  CHECK(code_of([&] { client.complete("x", {}); }) == ErrorCode::TransportError);
}

TEST_CASE("sentence list formats") {
  CHECK(parse_sentence_list(R"(["One.", "Two!"])") == std::vector<std::string>{"One.", "Two!"});
  CHECK(parse_sentence_list("<List of Sentences>: [Alpha may end this, at will., Beta shall pay.]") ==
        std::vector<std::string>{"Alpha may end this, at will.", "Beta shall pay."});
  CHECK(parse_sentence_list("1. First one.\n2) Second one.\n- Third one.") ==
        std::vector<std::string>{"First one.", "Second one.", "Third one."});
  CHECK(code_of([] { parse_sentence_list("I am sorry, I cannot help with that."); }) == ErrorCode::ParseError);
}

TEST_CASE("generate_candidates parses, truncates and deduplicates") {
  const auto tmpl = asset("augment_unilateral_termination");
  ScriptedClient client({reply(list_of(25)), reply(list_of(25)), reply("Here are some thoughts about contracts.")});
  const auto batch = generate_candidates(client, tmpl, 25);
  CHECK(batch.candidates.size() == 25);
  for (const auto& c : batch.candidates) CHECK(c.status == CandidateStatus::Pending);
  CHECK(batch.template_id == tmpl.template_id);
  CHECK(batch.scenario == Scenario::UnilateralTermination);

  const std::vector<std::string> existing{"  PROVIDER may terminate service number 7   at any time."};
  const auto deduped = generate_candidates(client, tmpl, 25, existing, "b2");
  CHECK(deduped.candidates.size() == 24);
  CHECK(deduped.duplicates_removed == 1);
  CHECK(deduped.batch_id == "b2");
  CHECK(code_of([&] { generate_candidates(client, tmpl, 25); }) == ErrorCode::ParseError);
  CHECK(client.requests().at(0).prompt.find("generate 25 unique") != std::string::npos);
  CHECK(code_of([&] { generate_candidates(client, asset("direct"), 5); }) == ErrorCode::InvalidTemplate);
}

TEST_CASE("candidate review rules") {
  ScriptedClient client({reply(list_of(3))});
  auto batch = generate_candidates(client, asset("augment_unilateral_termination"), 3, {}, "b");
  batch = review_candidate(batch, 0, "r1", true);
  CHECK(batch.candidates[0].status == CandidateStatus::Pending);
  batch = review_candidate(batch, 0, "r2", true);
  CHECK(batch.candidates[0].verified());
  batch = review_candidate(batch, 1, "r1", true);
  batch = review_candidate(batch, 1, "r2", false);
  CHECK(batch.candidates[1].status == CandidateStatus::Dropped);
  batch = review_candidate(batch, 2, "r1", true);
  CHECK(code_of([&] { review_candidate(batch, 2, "r1", true); }) == ErrorCode::DuplicateReview);
  CHECK(code_of([&] { review_candidate(batch, 1, "r3", true); }) == ErrorCode::InvalidState);
  CHECK(code_of([&] { review_candidate(batch, 9, "r3", true); }) == ErrorCode::NotFound);

  const auto syn = to_synthetic_examples(batch);
  REQUIRE(syn.size() == 1);
  CHECK(syn[0].sentence_id == "syn/b/0");
  CHECK(syn[0].label == Label::ClearlyUnfair);
  CHECK(syn[0].provenance == Provenance::Synthetic);
  CHECK(syn[0].verified);
}
