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

#ifndef TIERS_STATS_HPP_
#define TIERS_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tiers/error.hpp"
#include "tiers/trial.hpp"
#include "tiers/trial_store.hpp"

namespace tiers {

struct MeanError {
  double mean = 0;
  double std_error = 0;
  std::size_t n = 0;
};

// Mean and sample standard error (n - 1 denominator). Values are summed in
// sorted order so any permutation gives the same bits.
inline MeanError mean_error(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorKind::kNoData, "empty group");
  std::sort(values.begin(), values.end());
  MeanError out;
  out.n = values.size();
  if (values.front() == values.back()) {
    out.mean = values.front();
    return out;
  }
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(out.n);
  double ss = 0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.std_error = std::sqrt(ss / static_cast<double>(out.n - 1)) / std::sqrt(static_cast<double>(out.n));
  return out;
}

// Fraction accepted among parseable records.
inline double per_sentence_rate(const std::vector<TrialRecord>& records) {
  std::size_t parseable = 0;
  std::size_t accepted = 0;
  for (const TrialRecord& r : records) {
    if (!r.accepted) continue;
    ++parseable;
    accepted += *r.accepted ? 1 : 0;
  }
  if (parseable == 0) throw Error(ErrorKind::kNoData, "no parseable records");
  return static_cast<double>(accepted) / static_cast<double>(parseable);
}

// One row of stats.csv (group = grammar) or stats_per_question.csv
// (group = sentence id).
struct AcceptanceStat {
  std::string model_id;
  std::string group;
  std::string grammar_id;
  double mean = 0;
  double std_error = 0;
  std::size_t n = 0;  // sentences for grammar rows, trials for question rows
  std::size_t n_trials = 0;
  std::size_t n_unparseable = 0;
};

inline AcceptanceStat aggregate(std::string model_id, std::string grammar_id,
                                const std::vector<double>& rates) {
  const MeanError me = mean_error(rates);
  AcceptanceStat s;
  s.model_id = std::move(model_id);
  s.group = grammar_id;
  s.grammar_id = std::move(grammar_id);
  s.mean = me.mean;
  s.std_error = me.std_error;
  s.n = me.n;
  return s;
}

inline std::string format3(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3f", v);
  // Avoid "-0.000".
  return std::string(buffer) == "-0.000" ? "0.000" : buffer;
}

inline std::string csv_field(std::string_view v) {
  if (v.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(v);
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::vector<std::string> parse_csv_line(std::string_view line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  return out;
}

inline int grammar_rank(std::string_view id) {
  if (id == "cfg") return 0;
  if (id == "ixg") return 1;
  if (id == "csg") return 2;
  return 3;
}

struct GrammarOrder {
  bool operator()(const std::string& a, const std::string& b) const {
    const int ra = grammar_rank(a);
    const int rb = grammar_rank(b);
    return ra != rb ? ra < rb : a < b;
  }
};

struct StatsTables {
  std::vector<AcceptanceStat> grammar_rows;
  std::vector<AcceptanceStat> question_rows;
  std::string stats_csv;
  std::string per_question_csv;
  std::string markdown;
};

inline constexpr std::string_view kStatsHeader =
    "model,grammar,mean,stderr,n_sentences,n_trials,n_unparseable";
inline constexpr std::string_view kPerQuestionHeader =
    "model,sentence_id,grammar,mean,stderr,n_trials,n_unparseable";

inline std::string stats_csv(const std::vector<AcceptanceStat>& rows) {
  std::string out = std::string(kStatsHeader) + "\n";
  for (const AcceptanceStat& s : rows) {
    out += csv_field(s.model_id) + "," + csv_field(s.grammar_id) + "," + format3(s.mean) + "," +
           format3(s.std_error) + "," + std::to_string(s.n) + "," + std::to_string(s.n_trials) +
           "," + std::to_string(s.n_unparseable) + "\n";
  }
  return out;
}

inline std::string per_question_csv(const std::vector<AcceptanceStat>& rows) {
  std::string out = std::string(kPerQuestionHeader) + "\n";
  for (const AcceptanceStat& s : rows) {
    out += csv_field(s.model_id) + "," + csv_field(s.group) + "," + csv_field(s.grammar_id) + "," +
           format3(s.mean) + "," + format3(s.std_error) + "," + std::to_string(s.n_trials) + "," +
           std::to_string(s.n_unparseable) + "\n";
  }
  return out;
}

inline std::string tier_label(std::string_view grammar_id) {
  if (grammar_id == "cfg") return "CFG";
  if (grammar_id == "ixg") return "IXG";
  if (grammar_id == "csg") return "CSG";
  return std::string(grammar_id);
}

inline std::string format2(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", v);
  return buffer;
}

// Rows are grammar tiers, columns are models.
inline std::string markdown_report(const std::vector<AcceptanceStat>& rows) {
  std::set<std::string> models;
  std::set<std::string, GrammarOrder> grammars;
  std::map<std::pair<std::string, std::string>, const AcceptanceStat*> cell;
  for (const AcceptanceStat& s : rows) {
    models.insert(s.model_id);
    grammars.insert(s.grammar_id);
    cell[{s.grammar_id, s.model_id}] = &s;
  }
  std::string out = "# Sentence acceptance by grammar tier\n\n";
  out += "Cells show mean acceptance ± standard error. Each sentence's rate is the fraction of "
         "parseable trials answered Yes; the standard error is the sample standard deviation of "
         "the per-sentence rates divided by the square root of the sentence count. Unparseable "
         "replies and failed trials are excluded and counted in stats.csv.\n\n";
  out += "| Grammar |";
  for (const auto& m : models) out += " " + m + " |";
  out += "\n|---|";
  for (std::size_t i = 0; i < models.size(); ++i) out += "---|";
  out += "\n";
  for (const auto& g : grammars) {
    out += "| " + tier_label(g) + " |";
    for (const auto& m : models) {
      const auto it = cell.find({g, m});
      out += it == cell.end() ? " n/a |"
                              : " " + format2(it->second->mean) + " ± " +
                                    format2(it->second->std_error) + " |";
    }
    out += "\n";
  }
  return out;
}

// Aggregates a snapshot of trial records. Duplicate keys keep the first.
inline StatsTables emit_tables(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw Error(ErrorKind::kNoData, "no trial records");
  struct Question {
    std::string grammar;
    std::vector<double> values;
    std::size_t unparseable = 0;
  };
  std::set<TrialKey> seen;
  std::map<std::pair<std::string, std::string>, Question> questions;
  for (const TrialRecord& r : records) {
    if (!seen.insert(r.key()).second) continue;
    Question& q = questions[{r.model_id, r.sentence_id}];
    q.grammar = r.grammar_id;
    if (r.accepted) {
      q.values.push_back(*r.accepted ? 1.0 : 0.0);
    } else {
      ++q.unparseable;
    }
  }
  StatsTables t;
  struct Group {
    std::vector<double> rates;
    std::size_t trials = 0;
    std::size_t unparseable = 0;
  };
  std::map<std::string, std::map<std::string, Group, GrammarOrder>> groups;
  for (const auto& [key, q] : questions) {
    Group& g = groups[key.first][q.grammar];
    g.unparseable += q.unparseable;
    if (q.values.empty()) continue;
    const MeanError me = mean_error(q.values);
    AcceptanceStat row;
    row.model_id = key.first;
    row.group = key.second;
    row.grammar_id = q.grammar;
    row.mean = me.mean;
    row.std_error = me.std_error;
    row.n = me.n;
    row.n_trials = me.n;
    row.n_unparseable = q.unparseable;
    t.question_rows.push_back(row);
    g.rates.push_back(me.mean);
    g.trials += me.n;
  }
  for (const auto& [model, by_grammar] : groups) {
    for (const auto& [grammar, g] : by_grammar) {
      if (g.rates.empty()) continue;
      AcceptanceStat row = aggregate(model, grammar, g.rates);
      row.n_trials = g.trials;
      row.n_unparseable = g.unparseable;
      t.grammar_rows.push_back(row);
    }
  }
  if (t.grammar_rows.empty()) throw Error(ErrorKind::kNoData, "no parseable trial records");
  t.stats_csv = stats_csv(t.grammar_rows);
  t.per_question_csv = per_question_csv(t.question_rows);
  t.markdown = markdown_report(t.grammar_rows);
  return t;
}

inline StatsTables emit_tables(const TrialStore& store) {
  return emit_tables(store.load());
}

// Writes stats.csv, stats_per_question.csv and report.md into `dir`.
inline void write_tables(const StatsTables& t, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, text] : {std::pair<const char*, const std::string*>{"stats.csv", &t.stats_csv},
                                   {"stats_per_question.csv", &t.per_question_csv},
                                   {"report.md", &t.markdown}}) {
    std::ofstream out(dir / name, std::ios::binary);
    out << *text;
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + (dir / name).string());
  }
}

inline std::vector<std::vector<std::string>> read_csv_rows(std::string_view text,
                                                           std::string_view header) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || parse_csv_line(line) != parse_csv_line(header)) {
    throw Error(ErrorKind::kSchema, "unexpected CSV header");
  }
  const std::size_t columns = parse_csv_line(header).size();
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = parse_csv_line(line);
    if (row.size() != columns) throw Error(ErrorKind::kSchema, "bad CSV row: " + line);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<AcceptanceStat> parse_stats_csv(std::string_view text) {
  std::vector<AcceptanceStat> out;
  for (const auto& r : read_csv_rows(text, kStatsHeader)) {
    AcceptanceStat s;
    s.model_id = r[0];
    s.group = s.grammar_id = r[1];
    s.mean = std::stod(r[2]);
    s.std_error = std::stod(r[3]);
    s.n = std::stoul(r[4]);
    s.n_trials = std::stoul(r[5]);
    s.n_unparseable = std::stoul(r[6]);
    out.push_back(s);
  }
  return out;
}

inline std::vector<AcceptanceStat> parse_per_question_csv(std::string_view text) {
  std::vector<AcceptanceStat> out;
  for (const auto& r : read_csv_rows(text, kPerQuestionHeader)) {
    AcceptanceStat s;
    s.model_id = r[0];
    s.group = r[1];
    s.grammar_id = r[2];
    s.mean = std::stod(r[3]);
    s.std_error = std::stod(r[4]);
    s.n = s.n_trials = std::stoul(r[5]);
    s.n_unparseable = std::stoul(r[6]);
    out.push_back(s);
  }
  return out;
}

// Grammar rows rebuilt from per-question rows. Each rate is recovered
// exactly as round(mean * n_trials) / n_trials, valid below 1000 trials.
inline std::vector<AcceptanceStat> reaggregate(const std::vector<AcceptanceStat>& questions) {
  struct Group {
    std::vector<double> rates;
    std::size_t trials = 0;
    std::size_t unparseable = 0;
  };
  std::map<std::string, std::map<std::string, Group, GrammarOrder>> groups;
  for (const AcceptanceStat& q : questions) {
    const double trials = static_cast<double>(q.n_trials);
    Group& g = groups[q.model_id][q.grammar_id];
    g.rates.push_back(std::round(q.mean * trials) / trials);
    g.trials += q.n_trials;
    g.unparseable += q.n_unparseable;
  }
  std::vector<AcceptanceStat> out;
  for (const auto& [model, by_grammar] : groups) {
    for (const auto& [grammar, g] : by_grammar) {
      AcceptanceStat row = aggregate(model, grammar, g.rates);
      row.n_trials = g.trials;
      row.n_unparseable = g.unparseable;
      out.push_back(row);
    }
  }
  return out;
}

}  // namespace tiers

#endif  // TIERS_STATS_HPP_
