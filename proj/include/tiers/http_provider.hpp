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

#ifndef TIERS_HTTP_PROVIDER_HPP_
#define TIERS_HTTP_PROVIDER_HPP_

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "httplib.h"
#include "json.hpp"
#include "tiers/error.hpp"
#include "tiers/provider.hpp"
#include "tiers/trial.hpp"

namespace tiers {

enum class WireFormat { kOpenAi, kAnthropic, kGemini };

inline WireFormat wire_format_for(std::string_view provider) {
  if (provider == "anthropic") return WireFormat::kAnthropic;
  if (provider == "gemini") return WireFormat::kGemini;
  return WireFormat::kOpenAi;
}

inline std::string default_endpoint(std::string_view provider) {
  if (provider == "openai") return "https://api.openai.com";
  if (provider == "anthropic") return "https://api.anthropic.com";
  if (provider == "gemini") return "https://generativelanguage.googleapis.com";
  if (provider == "mistral") return "https://api.mistral.ai";
  if (provider == "deepseek") return "https://api.deepseek.com";
  if (provider == "together") return "https://api.together.xyz";
  throw Error(ErrorKind::kValidation, "no default endpoint for '" + std::string(provider) + "'");
}

// Splits "scheme://host[:port][/prefix]" into origin and path prefix.
inline std::pair<std::string, std::string> split_endpoint(std::string_view url) {
  const std::size_t scheme = url.find("://");
  if (scheme == std::string_view::npos) {
    throw Error(ErrorKind::kValidation, "endpoint '" + std::string(url) + "' has no scheme");
  }
  const std::size_t slash = url.find('/', scheme + 3);
  if (slash == std::string_view::npos) return {std::string(url), {}};
  std::string prefix(url.substr(slash));
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {std::string(url.substr(0, slash)), prefix};
}

// Anthropic requires an output cap; uncapped requests use this one.
inline constexpr int kUncappedAnthropicTokens = 16384;

// One adapter for every HTTP provider; wire formats differ per provider.
class HttpProvider : public Provider {
 public:
  HttpProvider(std::string provider, std::string endpoint, std::string api_key,
               std::chrono::seconds timeout = std::chrono::seconds(120))
      : format_(wire_format_for(provider)),
        api_key_(std::move(api_key)),
        timeout_(timeout) {
    std::tie(origin_, prefix_) =
        split_endpoint(endpoint.empty() ? default_endpoint(provider) : endpoint);
  }

  std::string complete(const CompletionRequest& request) override {
    httplib::Client client(origin_);
    client.set_connection_timeout(std::chrono::seconds(10));
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    httplib::Headers headers;
    std::string path;
    nlohmann::json body;
    switch (format_) {
      case WireFormat::kOpenAi:
        path = prefix_ + "/v1/chat/completions";
        headers.emplace("Authorization", "Bearer " + api_key_);
        body = {{"model", request.model},
                {"messages", {{{"role", "user"}, {"content", request.prompt}}}},
                {"temperature", request.temperature}};
        if (request.max_output_tokens) body["max_tokens"] = *request.max_output_tokens;
        break;
      case WireFormat::kAnthropic:
        path = prefix_ + "/v1/messages";
        headers.emplace("x-api-key", api_key_);
        headers.emplace("anthropic-version", "2023-06-01");
        body = {{"model", request.model},
                {"max_tokens", request.max_output_tokens.value_or(kUncappedAnthropicTokens)},
                {"temperature", request.temperature},
                {"messages", {{{"role", "user"}, {"content", request.prompt}}}}};
        break;
      case WireFormat::kGemini:
        path = prefix_ + "/v1beta/models/" + request.model + ":generateContent";
        headers.emplace("x-goog-api-key", api_key_);
        body = {{"contents", {{{"role", "user"}, {"parts", {{{"text", request.prompt}}}}}}},
                {"generationConfig", {{"temperature", request.temperature}}}};
        if (request.max_output_tokens) {
          body["generationConfig"]["maxOutputTokens"] = *request.max_output_tokens;
        }
        break;
    }
    const auto response = client.Post(path, headers, body.dump(), "application/json");
    if (!response) {
      throw TransientError("request to " + origin_ + " failed: " + httplib::to_string(response.error()));
    }
    const int status = response->status;
    if (status == 408 || status == 429 || status >= 500) {
      throw TransientError("HTTP " + std::to_string(status) + " from " + origin_);
    }
    if (status < 200 || status >= 300) {
      throw Error(ErrorKind::kIo, "HTTP " + std::to_string(status) + " from " + origin_ + ": " +
                                      response->body.substr(0, 200));
    }
    return extract_text(response->body);
  }

 private:
  std::string extract_text(const std::string& text) const {
    try {
      const nlohmann::json j = nlohmann::json::parse(text);
      switch (format_) {
        case WireFormat::kOpenAi:
          return j.at("choices").at(0).at("message").at("content").get<std::string>();
        case WireFormat::kAnthropic: {
          std::string out;
          for (const auto& block : j.at("content")) {
            if (block.value("type", std::string()) == "text") out += block.at("text").get<std::string>();
          }
          return out;
        }
        case WireFormat::kGemini: {
          std::string out;
          for (const auto& part : j.at("candidates").at(0).at("content").at("parts")) {
            out += part.value("text", std::string());
          }
          return out;
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kSchema, std::string("malformed provider reply: ") + e.what());
    }
    return {};
  }

  WireFormat format_;
  std::string api_key_;
  std::chrono::seconds timeout_;
  std::string origin_;
  std::string prefix_;
};

// Builds the provider for a model.
inline std::shared_ptr<Provider> make_provider(const ModelSpec& model, std::uint64_t seed) {
  if (model.provider == "mock") return make_mock_provider(model, seed);
  return std::make_shared<HttpProvider>(model.provider, model.endpoint,
                                        read_credential(model.provider));
}

}  // namespace tiers

#endif  // TIERS_HTTP_PROVIDER_HPP_
