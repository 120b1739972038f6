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

#include <chrono>
#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace clausefair::llm {

// Sampling settings attached to every request. Temperature 0 makes the
// services deterministic; the context limit is 1024 tokens.
struct RequestSettings {
  double temperature = 0.0;
  int max_tokens = 1024;

  friend bool operator==(const RequestSettings&, const RequestSettings&) = default;
};

struct LlmRequest {
  std::string prompt;
  RequestSettings settings;
};

// Text completion service. Implementations must be safe for concurrent
// calls and throw Error(TransportError) when the service cannot answer.
class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string complete(const std::string& prompt, const RequestSettings& settings) = 0;
};

// Test double driven by a script. Each rule is one of
//
//   {"input": "<sentence>", "response": "..."}   prompt's input sentence equals
//   {"contains": "<text>", "response": "..."}    prompt contains the text
//   {"response": "..."}                          next unkeyed reply, in order
//   {"transport_error": "..."}                   next unkeyed reply fails
//
// Keyed rules are tried first, in script order, and may match any number of
// times. Unkeyed rules are consumed once each. With nothing left to answer
// the client throws TransportError. Every request is recorded.
class ScriptedClient final : public LlmClient {
 public:
  struct Rule {
    std::optional<std::string> input;
    std::optional<std::string> contains;
    std::string response;
    std::optional<std::string> transport_error;
  };

  explicit ScriptedClient(std::vector<Rule> rules);
  // One JSON rule per line.
  static std::unique_ptr<ScriptedClient> from_file(const std::filesystem::path& file);

  std::string complete(const std::string& prompt, const RequestSettings& settings) override;

  std::vector<LlmRequest> requests() const;

 private:
  std::vector<Rule> keyed_;
  std::deque<Rule> queue_;
  mutable std::mutex mutex_;
  std::vector<LlmRequest> requests_;
};

// JSON-over-HTTP adapter. Sends {"prompt", "temperature", "max_tokens"} to
// `url` and reads the completion from "text", "response" or
// "choices[0].text". When the environment variable named by
// `api_key_env` is set its value is sent as a bearer token.
class HttpClient final : public LlmClient {
 public:
  struct Options {
    std::string url;
    std::string api_key_env = "CLAUSEFAIR_LLM_API_KEY";
    std::chrono::seconds timeout{60};
  };

  explicit HttpClient(Options options);

  std::string complete(const std::string& prompt, const RequestSettings& settings) override;

 private:
  Options options_;
  std::string scheme_host_;
  std::string path_;
};

// Retries TransportError up to `max_retries` times, sleeping
// base_delay * 2^attempt between tries. Other errors pass straight through.
class RetryingClient final : public LlmClient {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  RetryingClient(std::shared_ptr<LlmClient> inner, int max_retries = 2,
                 std::chrono::milliseconds base_delay = std::chrono::milliseconds(500),
                 Sleeper sleeper = {});

  std::string complete(const std::string& prompt, const RequestSettings& settings) override;

 private:
  std::shared_ptr<LlmClient> inner_;
  int max_retries_;
  std::chrono::milliseconds base_delay_;
  Sleeper sleeper_;
};

// Builds a client from {"script": path} or {"url": ..., "api_key_env": ...},
// wrapped in the default retry policy.
std::shared_ptr<LlmClient> make_client(const nlohmann::json& spec);

}  // namespace clausefair::llm
