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

#ifndef TIERS_SENTENCE_IO_HPP_
#define TIERS_SENTENCE_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tiers/error.hpp"
#include "tiers/generator.hpp"
#include "tiers/grammar.hpp"
#include "tiers/text.hpp"
#include "tiers/trace.hpp"

namespace tiers {

using Json = nlohmann::json;

inline Json trace_to_json(const Grammar& g, const DerivationTrace& trace) {
  Json steps = Json::array();
  for (const TraceStep& step : trace.steps) {
    steps.push_back({{"pos", step.position},
                     {"lhs", g.to_names(step.lhs)},
                     {"rhs", g.to_names(step.rhs)},
                     {"alt", step.alternative},
                     {"forced", step.forced},
                     {"part", step.part},
                     {"note", step.note}});
  }
  return steps;
}

inline DerivationTrace trace_from_json(const Grammar& g, const Json& steps) {
  DerivationTrace trace;
  for (const Json& j : steps) {
    TraceStep step;
    step.position = j.at("pos").get<std::size_t>();
    step.lhs = g.to_ids(j.at("lhs").get<std::vector<std::string>>());
    step.rhs = g.to_ids(j.at("rhs").get<std::vector<std::string>>());
    step.alternative = j.value("alt", -1);
    step.forced = j.value("forced", false);
    step.part = j.value("part", -1);
    step.note = j.value("note", std::string());
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

inline Json sentence_to_json(const Grammar& g, const Sentence& s) {
  return {{"id", s.id},
          {"grammar", s.provenance.grammar_id},
          {"text", render_sentence(s.tokens)},
          {"tokens", s.tokens},
          {"seed", s.provenance.seed},
          {"trace", trace_to_json(g, s.provenance.trace)}};
}

// Tokens come from "tokens" when present, otherwise from "text". The trace
// is read only when `with_trace` is set.
inline Sentence sentence_from_json(const Grammar& g, const Json& j, bool with_trace = true) {
  if (!j.is_object()) throw Error(ErrorKind::kSchema, "sentence record is not an object");
  try {
    Sentence s;
    s.id = j.value("id", std::string());
    if (j.contains("tokens")) {
      s.tokens = j.at("tokens").get<std::vector<std::string>>();
    } else {
      s.tokens = tokenize(j.at("text").get<std::string>());
    }
    s.provenance.grammar_id = j.value("grammar", g.id());
    s.provenance.seed = j.value("seed", std::uint64_t{0});
    if (with_trace && j.contains("trace")) s.provenance.trace = trace_from_json(g, j.at("trace"));
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kSchema, std::string("bad sentence record: ") + e.what());
  }
}

inline void write_jsonl(std::ostream& out, const Grammar& g, const std::vector<Sentence>& sentences) {
  for (const Sentence& s : sentences) out << sentence_to_json(g, s).dump() << '\n';
}

inline void write_plain(std::ostream& out, const std::vector<Sentence>& sentences) {
  for (const Sentence& s : sentences) out << render_sentence(s.tokens) << '\n';
}

// Reads JSON lines or plain text (one sentence per line). Blank lines and
// lines starting with '#' are skipped. Plain lines get ids "<grammar>-<line>".
inline std::vector<Sentence> read_sentences(std::istream& in, const Grammar& g,
                                            bool with_trace = true) {
  std::vector<Sentence> out;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (text.front() == '{') {
      Json j;
      try {
        j = Json::parse(text);
      } catch (const Json::exception& e) {
        throw Error(ErrorKind::kSchema, "line " + std::to_string(number) + ": " + e.what());
      }
      try {
        out.push_back(sentence_from_json(g, j, with_trace));
      } catch (const Error& e) {
        throw Error(e.kind(), "line " + std::to_string(number) + ": " + e.detail());
      }
    } else {
      Sentence s;
      s.id = g.id() + "-" + std::to_string(number);
      s.tokens = tokenize(text);
      s.provenance.grammar_id = g.id();
      out.push_back(std::move(s));
    }
  }
  return out;
}

inline std::vector<Sentence> read_sentences_file(const std::string& path, const Grammar& g,
                                                 bool with_trace = true) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  return read_sentences(in, g, with_trace);
}

}  // namespace tiers

#endif  // TIERS_SENTENCE_IO_HPP_
