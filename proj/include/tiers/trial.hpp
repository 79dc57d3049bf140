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

#ifndef TIERS_TRIAL_HPP_
#define TIERS_TRIAL_HPP_

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <optional>
#include <string>
#include <tuple>

#include "json.hpp"
#include "tiers/error.hpp"

namespace tiers {

struct ModelSpec {
  std::string model_id;
  std::string provider;
  std::string endpoint;  // empty selects the provider default
  double temperature = 0.2;
  std::optional<int> max_output_tokens = 128;  // nullopt leaves output uncapped
  int trials = 100;

  void validate() const {
    if (model_id.empty()) throw Error(ErrorKind::kValidation, "model id is empty");
    if (provider.empty()) throw Error(ErrorKind::kValidation, model_id + ": provider is empty");
    if (!(temperature >= 0)) throw Error(ErrorKind::kValidation, model_id + ": temperature < 0");
    if (trials < 1) throw Error(ErrorKind::kValidation, model_id + ": trials < 1");
    if (max_output_tokens && *max_output_tokens < 1) {
      throw Error(ErrorKind::kValidation, model_id + ": max_output_tokens < 1");
    }
  }
};

// Config keys: id, provider, endpoint, temperature, max_output_tokens
// (null or "reasoning": true for uncapped output), trials.
inline ModelSpec model_spec_from_json(const nlohmann::json& j) {
  try {
    ModelSpec m;
    m.model_id = j.at("id").get<std::string>();
    m.provider = j.at("provider").get<std::string>();
    m.endpoint = j.value("endpoint", std::string());
    m.temperature = j.value("temperature", 0.2);
    if (j.value("reasoning", false)) {
      m.max_output_tokens.reset();
    } else if (j.contains("max_output_tokens")) {
      const auto& cap = j.at("max_output_tokens");
      if (cap.is_null()) {
        m.max_output_tokens.reset();
      } else {
        m.max_output_tokens = cap.get<int>();
      }
    }
    m.trials = j.value("trials", 100);
    m.validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kSchema, std::string("bad model entry: ") + e.what());
  }
}

struct TrialKey {
  std::string model_id;
  std::string sentence_id;
  int trial_index = 0;

  friend auto operator<=>(const TrialKey&, const TrialKey&) = default;
};

struct TrialRecord {
  std::string model_id;
  std::string sentence_id;
  std::string grammar_id;
  int trial_index = 0;
  std::string raw_response;
  std::optional<bool> accepted;  // nullopt when the reply was unparseable
  int attempts = 1;
  std::string timestamp;  // UTC, ISO 8601
  double latency_ms = 0;

  TrialKey key() const { return {model_id, sentence_id, trial_index}; }
};

// Trial that exhausted its retries or failed permanently.
struct TrialFailure {
  std::string model_id;
  std::string sentence_id;
  std::string grammar_id;
  int trial_index = 0;
  std::string error;
  int attempts = 0;
  std::string timestamp;
};

inline std::string utc_timestamp(std::chrono::system_clock::time_point t =
                                     std::chrono::system_clock::now()) {
  const std::time_t seconds = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&seconds, &tm);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()) % 1000;
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buffer, static_cast<int>(ms.count()));
  return out;
}

inline nlohmann::json to_json(const TrialRecord& r) {
  return {{"model", r.model_id},
          {"sentence_id", r.sentence_id},
          {"grammar", r.grammar_id},
          {"trial", r.trial_index},
          {"raw", r.raw_response},
          {"accepted", r.accepted ? nlohmann::json(*r.accepted) : nlohmann::json(nullptr)},
          {"attempts", r.attempts},
          {"timestamp", r.timestamp},
          {"latency_ms", r.latency_ms}};
}

inline TrialRecord trial_record_from_json(const nlohmann::json& j) {
  TrialRecord r;
  r.model_id = j.at("model").get<std::string>();
  r.sentence_id = j.at("sentence_id").get<std::string>();
  r.grammar_id = j.at("grammar").get<std::string>();
  r.trial_index = j.at("trial").get<int>();
  r.raw_response = j.value("raw", std::string());
  if (j.contains("accepted") && !j.at("accepted").is_null()) r.accepted = j.at("accepted").get<bool>();
  r.attempts = j.value("attempts", 1);
  r.timestamp = j.value("timestamp", std::string());
  r.latency_ms = j.value("latency_ms", 0.0);
  return r;
}

inline nlohmann::json to_json(const TrialFailure& f) {
  return {{"model", f.model_id}, {"sentence_id", f.sentence_id}, {"grammar", f.grammar_id},
          {"trial", f.trial_index}, {"error", f.error},          {"attempts", f.attempts},
          {"timestamp", f.timestamp}};
}

}  // namespace tiers

#endif  // TIERS_TRIAL_HPP_
