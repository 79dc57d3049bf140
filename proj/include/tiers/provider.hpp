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

#ifndef TIERS_PROVIDER_HPP_
#define TIERS_PROVIDER_HPP_

#include <cstdint>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tiers/error.hpp"
#include "tiers/rng.hpp"
#include "tiers/trial.hpp"

namespace tiers {

struct CompletionRequest {
  std::string model;
  std::string prompt;
  double temperature = 0.2;
  std::optional<int> max_output_tokens;
  std::string sentence_id;
  int trial_index = 0;
};

// Failure worth retrying (timeouts, rate limits, 5xx).
class TransientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Provider {
 public:
  virtual ~Provider() = default;
  // Returns the reply text. Throws TransientError for retryable failures
  // and Error for permanent ones. Must be safe to call concurrently.
  virtual std::string complete(const CompletionRequest& request) = 0;
};

// Credential variable per provider; "mock" needs none.
inline const std::map<std::string, std::string, std::less<>>& credential_variables() {
  static const std::map<std::string, std::string, std::less<>> vars = {
      {"anthropic", "ANTHROPIC_API_KEY"}, {"deepseek", "DEEPSEEK_API_KEY"},
      {"gemini", "GEMINI_API_KEY"},       {"mistral", "MISTRAL_API_KEY"},
      {"openai", "OPENAI_API_KEY"},       {"together", "TOGETHER_API_KEY"},
  };
  return vars;
}

inline std::optional<std::string> credential_variable(std::string_view provider) {
  if (provider == "mock") return std::nullopt;
  const auto& vars = credential_variables();
  const auto it = vars.find(provider);
  if (it == vars.end()) {
    throw Error(ErrorKind::kValidation, "unknown provider '" + std::string(provider) + "'");
  }
  return it->second;
}

inline std::string read_credential(std::string_view provider) {
  const auto var = credential_variable(provider);
  if (!var) return {};
  const char* value = std::getenv(var->c_str());
  if (value == nullptr || *value == '\0') {
    throw Error(ErrorKind::kCredential, "environment variable " + *var + " is not set");
  }
  return value;
}

// Fails before any request if a model's credential variable is unset.
inline void check_credentials(const std::vector<ModelSpec>& models) {
  std::string missing;
  for (const ModelSpec& m : models) {
    const auto var = credential_variable(m.provider);
    if (!var) continue;
    const char* value = std::getenv(var->c_str());
    if ((value == nullptr || *value == '\0') && missing.find(*var) == std::string::npos) {
      missing += (missing.empty() ? "" : ", ") + *var;
    }
  }
  if (!missing.empty()) {
    throw Error(ErrorKind::kCredential, "missing environment variables: " + missing);
  }
}

inline std::uint64_t fnv1a(std::string_view text, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Answers "Yes" with probability p, as a pure function of
// (seed, model, sentence, trial).
class MockProvider : public Provider {
 public:
  MockProvider(std::uint64_t seed, double p) : seed_(seed), p_(p) {
    if (!(p >= 0 && p <= 1)) throw Error(ErrorKind::kValidation, "mock probability outside [0, 1]");
  }

  std::string complete(const CompletionRequest& request) override {
    std::uint64_t h = fnv1a(request.model);
    h = fnv1a(std::string_view("\x1f", 1), h);
    h = fnv1a(request.sentence_id, h);
    Rng rng(mix_seed(seed_ ^ mix_seed(h ^ static_cast<std::uint64_t>(request.trial_index))));
    return rng.uniform01() < p_ ? "Yes" : "No";
  }

 private:
  std::uint64_t seed_;
  double p_;
};

// Mock endpoints read "mock://<p>"; an empty endpoint means p = 1.
inline std::shared_ptr<Provider> make_mock_provider(const ModelSpec& model, std::uint64_t seed) {
  double p = 1.0;
  if (!model.endpoint.empty()) {
    constexpr std::string_view kScheme = "mock://";
    if (model.endpoint.rfind(kScheme, 0) != 0) {
      throw Error(ErrorKind::kValidation, model.model_id + ": mock endpoint must be mock://<p>");
    }
    try {
      p = std::stod(model.endpoint.substr(kScheme.size()));
    } catch (const std::exception&) {
      throw Error(ErrorKind::kValidation, model.model_id + ": bad mock probability");
    }
  }
  return std::make_shared<MockProvider>(seed, p);
}

}  // namespace tiers

#endif  // TIERS_PROVIDER_HPP_
