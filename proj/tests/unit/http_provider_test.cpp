// Copyright 2026 The Tiers Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "tiers/bench.hpp"
#include "tiers/http_provider.hpp"

namespace tiers {
namespace {

using nlohmann::json;

// Local HTTP server on an ephemeral port, stopped on destruction.
class LocalServer {
 public:
  LocalServer() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }
  httplib::Server& server() { return server_; }
  std::string origin() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

struct Captured {
  std::mutex mutex;
  std::string path;
  json body;
  httplib::Headers headers;
  int hits = 0;
};

CompletionRequest request() {
  return {"model-x", "prompt text", 0.2, 128, "cfg-1", 0};
}

TEST(HttpProvider, OpenAiWireFormat) {
  LocalServer local;
  Captured seen;
  local.server().Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(seen.mutex);
    seen.body = json::parse(req.body);
    seen.headers = req.headers;
    res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"Yes."}}]})",
                    "application/json");
  });
  HttpProvider p("openai", local.origin(), "sk-test");
  EXPECT_EQ(p.complete(request()), "Yes.");
  EXPECT_EQ(seen.body["model"], "model-x");
  EXPECT_EQ(seen.body["messages"][0]["content"], "prompt text");
  EXPECT_EQ(seen.body["max_tokens"], 128);
  EXPECT_DOUBLE_EQ(seen.body["temperature"].get<double>(), 0.2);
  EXPECT_EQ(seen.headers.find("Authorization")->second, "Bearer sk-test");
}

TEST(HttpProvider, AnthropicWireFormat) {
  LocalServer local;
  Captured seen;
  local.server().Post("/v1/messages", [&](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(seen.mutex);
    seen.body = json::parse(req.body);
    seen.headers = req.headers;
    res.set_content(R"({"content":[{"type":"text","text":"No"}]})", "application/json");
  });
  HttpProvider p("anthropic", local.origin(), "ak");
  CompletionRequest r = request();
  r.max_output_tokens.reset();
  EXPECT_EQ(p.complete(r), "No");
  EXPECT_EQ(seen.body["max_tokens"], kUncappedAnthropicTokens);
  EXPECT_EQ(seen.headers.find("x-api-key")->second, "ak");
  EXPECT_EQ(seen.headers.find("anthropic-version")->second, "2023-06-01");
}

TEST(HttpProvider, GeminiWireFormat) {
  LocalServer local;
  Captured seen;
  local.server().Post(R"(/v1beta/models/(.+):generateContent)",
                      [&](const httplib::Request& req, httplib::Response& res) {
                        std::lock_guard lock(seen.mutex);
                        seen.path = req.path;
                        seen.body = json::parse(req.body);
                        res.set_content(
                            R"({"candidates":[{"content":{"parts":[{"text":"Yes"}]}}]})",
                            "application/json");
                      });
  HttpProvider p("gemini", local.origin(), "gk");
  EXPECT_EQ(p.complete(request()), "Yes");
  EXPECT_EQ(seen.path, "/v1beta/models/model-x:generateContent");
  EXPECT_EQ(seen.body["contents"][0]["parts"][0]["text"], "prompt text");
  EXPECT_EQ(seen.body["generationConfig"]["maxOutputTokens"], 128);
}

TEST(HttpProvider, StatusClassification) {
  LocalServer local;
  std::atomic<int> status{429};
  local.server().Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    res.status = status.load();
    res.set_content("{}", "application/json");
  });
  HttpProvider p("openai", local.origin(), "k");
  for (int s : {408, 429, 500, 503}) {
    status = s;
    EXPECT_THROW(p.complete(request()), TransientError) << s;
  }
  status = 401;
  try {
    p.complete(request());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
  status = 200;
  try {
    p.complete(request());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSchema);
  }
}

TEST(HttpProvider, UnreachableHostIsTransient) {
  int port = 0;
  {
    LocalServer closed;
    port = std::stoi(closed.origin().substr(closed.origin().rfind(':') + 1));
  }
  HttpProvider p("openai", "http://127.0.0.1:" + std::to_string(port), "k", std::chrono::seconds(2));
  EXPECT_THROW(p.complete(request()), TransientError);
}

TEST(HttpProvider, EndpointPrefix) {
  EXPECT_EQ(split_endpoint("https://api.example.com/proxy/").second, "/proxy");
  EXPECT_EQ(split_endpoint("http://localhost:8080").first, "http://localhost:8080");
  EXPECT_THROW(split_endpoint("localhost"), Error);
  EXPECT_EQ(default_endpoint("mistral"), "https://api.mistral.ai");
  EXPECT_THROW(default_endpoint("nowhere"), Error);
}

TEST(HttpProvider, RateLimitedRunRetriesThenRecords) {
  LocalServer local;
  std::atomic<int> hits{0};
  local.server().Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    if (hits++ < 2) {
      res.status = 429;
      return;
    }
    res.set_content(R"({"choices":[{"message":{"content":"Yes"}}]})", "application/json");
  });
  ::setenv("OPENAI_API_KEY", "sk-local", 1);
  ModelSpec m;
  m.model_id = "gpt-local";
  m.provider = "openai";
  m.endpoint = local.origin();
  m.trials = 1;
  Sentence s;
  s.id = "cfg-0";
  s.tokens = {"the", "dogs", "sleep"};
  s.provenance.grammar_id = "cfg";
  const auto dir = std::filesystem::temp_directory_path() /
                   ("tiers_http_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  TrialStore store(dir);
  BenchOptions options;
  int sleeps = 0;
  options.sleep = [&](std::chrono::milliseconds) { ++sleeps; };
  const auto summary =
      run_bench({m}, {s}, store, [](const ModelSpec& spec) { return make_provider(spec, 0); }, options);
  ::unsetenv("OPENAI_API_KEY");
  EXPECT_EQ(hits.load(), 3);
  EXPECT_EQ(sleeps, 2);
  EXPECT_EQ(summary.completed, 1u);
  const auto records = store.load();
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].accepted, true);
  EXPECT_EQ(records[0].attempts, 3);
  std::filesystem::remove_all(dir);
}

TEST(MakeProvider, MockEndpoints) {
  ModelSpec m;
  m.model_id = "m";
  m.provider = "mock";
  m.endpoint = "mock://0.0";
  EXPECT_EQ(make_provider(m, 1)->complete(request()), "No");
  m.endpoint = "http://x";
  EXPECT_THROW(make_provider(m, 1), Error);
  m.endpoint = "mock://abc";
  EXPECT_THROW(make_provider(m, 1), Error);
}

}  // namespace
}  // namespace tiers
