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

#ifndef TIERS_TRIAL_STORE_HPP_
#define TIERS_TRIAL_STORE_HPP_

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "tiers/error.hpp"
#include "tiers/trial.hpp"

namespace tiers {

// Append-only JSON-lines log of trials (trials.jsonl) and failures
// (failures.jsonl) in one directory. Appends are serialized.
class TrialStore {
 public:
  explicit TrialStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(ErrorKind::kStore, "cannot create " + dir_.string() + ": " + ec.message());
  }

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path trials_path() const { return dir_ / "trials.jsonl"; }
  std::filesystem::path failures_path() const { return dir_ / "failures.jsonl"; }

  // Test hook: appends after the first `n` succeed fail with a store error.
  void fail_after(std::size_t n) {
    std::lock_guard lock(mutex_);
    fail_after_ = n;
  }

  void append(const TrialRecord& record) {
    std::lock_guard lock(mutex_);
    if (appended_ >= fail_after_) throw Error(ErrorKind::kStore, "injected write failure");
    write_line(trials_, trials_path(), to_json(record).dump());
    ++appended_;
  }

  void append_failure(const TrialFailure& failure) {
    std::lock_guard lock(mutex_);
    write_line(failures_, failures_path(), to_json(failure).dump());
  }

  // Records in file order. A torn final line from an interrupted write is
  // ignored; corruption elsewhere is an error.
  std::vector<TrialRecord> load() const {
    std::lock_guard lock(mutex_);
    std::vector<TrialRecord> out;
    std::ifstream in(trials_path());
    if (!in) return out;
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
      if (!line.empty()) lines.push_back(std::move(line));
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
      try {
        out.push_back(trial_record_from_json(nlohmann::json::parse(lines[i])));
      } catch (const nlohmann::json::exception& e) {
        if (i + 1 == lines.size()) break;
        throw Error(ErrorKind::kStore, trials_path().string() + " line " + std::to_string(i + 1) +
                                           ": " + e.what());
      }
    }
    return out;
  }

  std::size_t failure_count() const {
    std::lock_guard lock(mutex_);
    std::ifstream in(failures_path());
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) n += line.empty() ? 0 : 1;
    return n;
  }

  std::set<TrialKey> completed_keys() const {
    std::set<TrialKey> keys;
    for (const TrialRecord& r : load()) keys.insert(r.key());
    return keys;
  }

 private:
  static void write_line(std::ofstream& out, const std::filesystem::path& path,
                         const std::string& line) {
    if (!out.is_open()) {
      out.open(path, std::ios::app | std::ios::binary);
      if (!out) throw Error(ErrorKind::kStore, "cannot open " + path.string());
    }
    const std::string text = line + '\n';
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::kStore, "write to " + path.string() + " failed");
  }

  std::filesystem::path dir_;
  mutable std::mutex mutex_;
  std::ofstream trials_;
  std::ofstream failures_;
  std::size_t appended_ = 0;
  std::size_t fail_after_ = std::numeric_limits<std::size_t>::max();
};

}  // namespace tiers

#endif  // TIERS_TRIAL_STORE_HPP_
