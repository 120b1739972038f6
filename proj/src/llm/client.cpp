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

#include "clausefair/llm/client.hpp"

#include <cstdlib>
#include <thread>
#include <utility>

#include <httplib.h>

#include "clausefair/error.hpp"
#include "clausefair/util.hpp"

namespace clausefair::llm {

namespace {

// Text after the last "Input Sentence: " up to the end of that line.
std::optional<std::string> input_sentence(const std::string& prompt) {
  constexpr std::string_view marker = "Input Sentence: ";
  const auto pos = prompt.rfind(marker);
  if (pos == std::string::npos) return std::nullopt;
  const auto start = pos + marker.size();
  auto end = prompt.find('\n', start);
  if (end == std::string::npos) end = prompt.size();
  return prompt.substr(start, end - start);
}

ScriptedClient::Rule rule_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "script rule must be an object");
  ScriptedClient::Rule r;
  if (j.contains("input")) r.input = j.at("input").get<std::string>();
  if (j.contains("contains")) r.contains = j.at("contains").get<std::string>();
  if (j.contains("transport_error")) r.transport_error = j.at("transport_error").get<std::string>();
  if (j.contains("response")) {
    r.response = j.at("response").get<std::string>();
  } else if (!r.transport_error) {
    throw Error(ErrorCode::ParseError, "script rule needs 'response' or 'transport_error'");
  }
  return r;
}

}  // namespace

ScriptedClient::ScriptedClient(std::vector<Rule> rules) {
  for (auto& r : rules) {
    if (r.input || r.contains) {
      keyed_.push_back(std::move(r));
    } else {
      queue_.push_back(std::move(r));
    }
  }
}

std::unique_ptr<ScriptedClient> ScriptedClient::from_file(const std::filesystem::path& file) {
  if (!std::filesystem::exists(file)) throw Error(ErrorCode::NotFound, "script not found: " + file.string());
  std::vector<Rule> rules;
  for (const auto& j : read_json_lines(file)) rules.push_back(rule_from_json(j));
  return std::make_unique<ScriptedClient>(std::move(rules));
}

std::string ScriptedClient::complete(const std::string& prompt, const RequestSettings& settings) {
  std::lock_guard lock(mutex_);
  requests_.push_back({prompt, settings});
  const auto input = input_sentence(prompt);
  const Rule* hit = nullptr;
  for (const auto& r : keyed_) {
    if (r.input && (!input || *input != *r.input)) continue;
    if (r.contains && prompt.find(*r.contains) == std::string::npos) continue;
    hit = &r;
    break;
  }
  Rule queued;
  if (hit == nullptr) {
    if (queue_.empty()) throw Error(ErrorCode::TransportError, "scripted client has no response for this prompt");
    queued = std::move(queue_.front());
    queue_.pop_front();
    hit = &queued;
  }
  if (hit->transport_error) throw Error(ErrorCode::TransportError, *hit->transport_error);
  return hit->response;
}

std::vector<LlmRequest> ScriptedClient::requests() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

HttpClient::HttpClient(Options options) : options_(std::move(options)) {
  const auto scheme_end = options_.url.find("://");
  if (scheme_end == std::string::npos || options_.url.substr(0, scheme_end) != "http") {
    throw Error(ErrorCode::ConfigError, "llm url must be http://host[:port]/path, got: " + options_.url);
  }
  const auto path_start = options_.url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    scheme_host_ = options_.url;
    path_ = "/";
  } else {
    scheme_host_ = options_.url.substr(0, path_start);
    path_ = options_.url.substr(path_start);
  }
}

std::string HttpClient::complete(const std::string& prompt, const RequestSettings& settings) {
  httplib::Client cli(scheme_host_);
  cli.set_connection_timeout(options_.timeout);
  cli.set_read_timeout(options_.timeout);
  cli.set_write_timeout(options_.timeout);
  httplib::Headers headers;
  if (!options_.api_key_env.empty()) {
    if (const char* key = std::getenv(options_.api_key_env.c_str()); key != nullptr && *key != '\0') {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }
  const nlohmann::json body{
      {"prompt", prompt}, {"temperature", settings.temperature}, {"max_tokens", settings.max_tokens}};
  auto res = cli.Post(path_, headers, body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::TransportError,
                "request to " + scheme_host_ + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(ErrorCode::TransportError, "llm service answered HTTP " + std::to_string(res->status));
  }
  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::TransportError, std::string("llm service sent invalid JSON: ") + e.what());
  }
  if (reply.contains("text") && reply["text"].is_string()) return reply["text"].get<std::string>();
  if (reply.contains("response") && reply["response"].is_string()) return reply["response"].get<std::string>();
  if (reply.contains("choices") && reply["choices"].is_array() && !reply["choices"].empty()) {
    const auto& c = reply["choices"][0];
    if (c.contains("text") && c["text"].is_string()) return c["text"].get<std::string>();
  }
  throw Error(ErrorCode::TransportError, "llm reply carries no completion text");
}

RetryingClient::RetryingClient(std::shared_ptr<LlmClient> inner, int max_retries,
                               std::chrono::milliseconds base_delay, Sleeper sleeper)
    : inner_(std::move(inner)),
      max_retries_(max_retries),
      base_delay_(base_delay),
      sleeper_(sleeper ? std::move(sleeper) : [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {}

std::string RetryingClient::complete(const std::string& prompt, const RequestSettings& settings) {
  for (int attempt = 0;; ++attempt) {
    try {
      return inner_->complete(prompt, settings);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TransportError || attempt >= max_retries_) throw;
    }
    sleeper_(base_delay_ * (1LL << attempt));
  }
}

std::shared_ptr<LlmClient> make_client(const nlohmann::json& spec) {
  std::shared_ptr<LlmClient> inner;
  if (spec.contains("script")) {
    inner = ScriptedClient::from_file(spec.at("script").get<std::string>());
  } else if (spec.contains("url")) {
    HttpClient::Options opts;
    opts.url = spec.at("url").get<std::string>();
    if (spec.contains("api_key_env")) opts.api_key_env = spec.at("api_key_env").get<std::string>();
    if (spec.contains("timeout_s")) opts.timeout = std::chrono::seconds(spec.at("timeout_s").get<int>());
    inner = std::make_shared<HttpClient>(std::move(opts));
  } else {
    throw Error(ErrorCode::ConfigError, "llm client needs 'script' or 'url'");
  }
  const int retries = spec.value("max_retries", 2);
  const auto delay = std::chrono::milliseconds(spec.value("retry_base_ms", 500));
  return std::make_shared<RetryingClient>(std::move(inner), retries, delay);
}

}  // namespace clausefair::llm
