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

#ifndef TIERS_BENCH_HPP_
#define TIERS_BENCH_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "tiers/bundled.hpp"
#include "tiers/error.hpp"
#include "tiers/generator.hpp"
#include "tiers/prompt.hpp"
#include "tiers/provider.hpp"
#include "tiers/sentence_io.hpp"
#include "tiers/trial.hpp"
#include "tiers/trial_store.hpp"

namespace tiers {

struct RetryPolicy {
  int max_retries = 4;
  std::chrono::milliseconds base_delay{250};
  std::chrono::milliseconds max_delay{8000};

  // Delay before retry number `retry` (0-based): base * 2^retry, capped.
  std::chrono::milliseconds delay(int retry) const {
    auto d = base_delay;
    for (int i = 0; i < retry && d < max_delay; ++i) d *= 2;
    return std::min(d, max_delay);
  }
};

struct BenchOptions {
  std::size_t per_provider_limit = 4;
  RetryPolicy retry;
  std::function<void(std::chrono::milliseconds)> sleep = [](std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
  };
  std::function<void(const std::string&)> log;
};

struct RunSummary {
  std::size_t planned = 0;      // trials in the full plan
  std::size_t skipped = 0;      // already in the store
  std::size_t completed = 0;    // recorded in this run
  std::size_t unparseable = 0;  // recorded with no Yes/No answer
  std::size_t failed = 0;       // retries exhausted or permanent error
  std::size_t requests = 0;
  std::size_t retries = 0;
  std::vector<TrialRecord> records;  // this run's records, sorted by key
};

using ProviderFactory = std::function<std::shared_ptr<Provider>(const ModelSpec&)>;

namespace detail {

struct BenchTask {
  const ModelSpec* model;
  const Sentence* sentence;
  const std::string* prompt;
  Provider* provider;
  int trial;
};

class BenchRun {
 public:
  BenchRun(TrialStore& store, const BenchOptions& options, RunSummary& summary)
      : store_(store), options_(options), summary_(summary) {}

  void run_group(const std::vector<BenchTask>& tasks) {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    const std::size_t n = std::min(std::max<std::size_t>(options_.per_provider_limit, 1), tasks.size());
    for (std::size_t w = 0; w < n; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size() && !abort_; i = next++) run_task(tasks[i]);
      });
    }
  }

  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  void log(const std::string& line) {
    if (!options_.log) return;
    std::lock_guard lock(mutex_);
    options_.log(line);
  }

  void fail(const std::exception_ptr& e) {
    std::lock_guard lock(mutex_);
    if (!error_) error_ = e;
    abort_ = true;
  }

  void run_task(const BenchTask& t) {
    const CompletionRequest request{t.model->model_id, *t.prompt, t.model->temperature,
                                    t.model->max_output_tokens, t.sentence->id, t.trial};
    std::string error;
    int attempts = 0;
    for (int retry = 0;; ++retry) {
      ++attempts;
      {
        std::lock_guard lock(mutex_);
        ++summary_.requests;
      }
      const auto started = std::chrono::steady_clock::now();
      try {
        std::string raw = t.provider->complete(request);
        TrialRecord record;
        record.model_id = t.model->model_id;
        record.sentence_id = t.sentence->id;
        record.grammar_id = t.sentence->provenance.grammar_id;
        record.trial_index = t.trial;
        record.accepted = parse_response(raw);
        record.raw_response = std::move(raw);
        record.attempts = attempts;
        record.timestamp = utc_timestamp();
        record.latency_ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - started)
                                .count();
        commit(record);
        return;
      } catch (const TransientError& e) {
        error = e.what();
        if (retry >= options_.retry.max_retries) break;
        log(t.model->model_id + " " + t.sentence->id + " trial " + std::to_string(t.trial) +
            ": " + error + "; retry " + std::to_string(retry + 1));
        {
          std::lock_guard lock(mutex_);
          ++summary_.retries;
        }
        options_.sleep(options_.retry.delay(retry));
        if (abort_) return;
      } catch (const std::exception& e) {
        error = e.what();
        break;
      }
    }
    record_failure(t, error, attempts);
  }

  void commit(const TrialRecord& record) {
    try {
      store_.append(record);
    } catch (...) {
      fail(std::current_exception());
      return;
    }
    std::lock_guard lock(mutex_);
    ++summary_.completed;
    if (!record.accepted) ++summary_.unparseable;
    summary_.records.push_back(record);
  }

  void record_failure(const BenchTask& t, const std::string& error, int attempts) {
    log(t.model->model_id + " " + t.sentence->id + " trial " + std::to_string(t.trial) +
        " failed: " + error);
    try {
      store_.append_failure({t.model->model_id, t.sentence->id, t.sentence->provenance.grammar_id,
                             t.trial, error, attempts, utc_timestamp()});
    } catch (...) {
      fail(std::current_exception());
      return;
    }
    std::lock_guard lock(mutex_);
    ++summary_.failed;
  }

  TrialStore& store_;
  const BenchOptions& options_;
  RunSummary& summary_;
  std::mutex mutex_;
  std::atomic<bool> abort_{false};
  std::exception_ptr error_;
};

}  // namespace detail

// Runs every (model, sentence, trial) not yet in `store`. Credentials are
// checked before any provider is built. Providers run concurrently, each
// with at most options.per_provider_limit requests in flight. A store
// write failure stops the run and is rethrown once workers finish.
inline RunSummary run_bench(const std::vector<ModelSpec>& models,
                            const std::vector<Sentence>& sentences, TrialStore& store,
                            const ProviderFactory& factory, const BenchOptions& options = {}) {
  if (models.empty()) throw Error(ErrorKind::kPrecondition, "no models configured");
  if (sentences.empty()) throw Error(ErrorKind::kPrecondition, "no sentences supplied");
  std::set<std::string> ids;
  for (const ModelSpec& m : models) {
    m.validate();
    if (!ids.insert(m.model_id).second) {
      throw Error(ErrorKind::kValidation, "duplicate model id " + m.model_id);
    }
  }
  ids.clear();
  for (const Sentence& s : sentences) {
    if (s.provenance.grammar_id.empty()) {
      throw Error(ErrorKind::kPrecondition, "sentence " + s.id + " has no grammar id");
    }
    if (s.id.empty() || !ids.insert(s.id).second) {
      throw Error(ErrorKind::kPrecondition, "sentence ids must be unique and non-empty");
    }
  }
  check_credentials(models);

  std::vector<std::string> prompts;
  prompts.reserve(sentences.size());
  for (const Sentence& s : sentences) prompts.push_back(build_prompt(s.tokens));
  std::vector<std::shared_ptr<Provider>> providers;
  for (const ModelSpec& m : models) providers.push_back(factory(m));

  RunSummary summary;
  const std::set<TrialKey> done = store.completed_keys();
  std::map<std::string, std::vector<detail::BenchTask>> groups;
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (std::size_t s = 0; s < sentences.size(); ++s) {
      for (int trial = 0; trial < models[m].trials; ++trial) {
        ++summary.planned;
        if (done.count({models[m].model_id, sentences[s].id, trial})) {
          ++summary.skipped;
          continue;
        }
        groups[models[m].provider].push_back(
            {&models[m], &sentences[s], &prompts[s], providers[m].get(), trial});
      }
    }
  }

  detail::BenchRun run(store, options, summary);
  {
    std::vector<std::jthread> group_threads;
    for (const auto& [provider, tasks] : groups) {
      group_threads.emplace_back([&run, &tasks = tasks] { run.run_group(tasks); });
    }
  }
  std::sort(summary.records.begin(), summary.records.end(),
            [](const TrialRecord& a, const TrialRecord& b) { return a.key() < b.key(); });
  run.rethrow();
  return summary;
}

struct BenchConfig {
  std::uint64_t seed = 0;
  std::filesystem::path store;
  std::filesystem::path out;
  std::map<std::string, std::filesystem::path> sentences;  // grammar id -> file
  std::vector<ModelSpec> models;
  BenchOptions options;
};

// Relative paths resolve against the config file's directory.
inline BenchConfig load_bench_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kSchema, path.string() + ": " + e.what());
  }
  const auto base = path.parent_path();
  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };
  BenchConfig cfg;
  try {
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.store = resolve(j.at("store").get<std::string>());
    cfg.out = resolve(j.value("out", j.at("store").get<std::string>()));
    for (const auto& [gid, file] : j.at("sentences").items()) {
      cfg.sentences[gid] = resolve(file.get<std::string>());
    }
    for (const auto& m : j.at("models")) cfg.models.push_back(model_spec_from_json(m));
    cfg.options.per_provider_limit = j.value("concurrency", std::size_t{4});
    if (j.contains("retry")) {
      const auto& r = j.at("retry");
      cfg.options.retry.max_retries = r.value("max_retries", cfg.options.retry.max_retries);
      cfg.options.retry.base_delay = std::chrono::milliseconds(
          r.value("base_delay_ms", static_cast<long long>(cfg.options.retry.base_delay.count())));
      cfg.options.retry.max_delay = std::chrono::milliseconds(
          r.value("max_delay_ms", static_cast<long long>(cfg.options.retry.max_delay.count())));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kSchema, path.string() + ": " + e.what());
  }
  if (cfg.options.per_provider_limit == 0) {
    throw Error(ErrorKind::kValidation, "concurrency must be at least 1");
  }
  return cfg;
}

// Reads each grammar's sentence file with that grammar's bundled lexicon.
inline std::vector<Sentence> load_bench_sentences(
    const std::map<std::string, std::filesystem::path>& files) {
  std::vector<Sentence> out;
  for (const char* gid : {"cfg", "ixg", "csg"}) {
    const auto it = files.find(gid);
    if (it == files.end()) continue;
    for (Sentence& s : read_sentences_file(it->second.string(), bundled_grammar(gid), false)) {
      if (s.provenance.grammar_id.empty()) s.provenance.grammar_id = gid;
      out.push_back(std::move(s));
    }
  }
  for (const auto& [gid, file] : files) {
    if (gid != "cfg" && gid != "ixg" && gid != "csg") {
      throw Error(ErrorKind::kValidation, "unknown grammar id '" + gid + "' in sentences");
    }
  }
  return out;
}

}  // namespace tiers

#endif  // TIERS_BENCH_HPP_
