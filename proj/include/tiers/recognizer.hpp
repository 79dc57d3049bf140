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

#ifndef TIERS_RECOGNIZER_HPP_
#define TIERS_RECOGNIZER_HPP_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tiers/bundled.hpp"
#include "tiers/csg_search.hpp"
#include "tiers/earley.hpp"
#include "tiers/error.hpp"
#include "tiers/grammar.hpp"
#include "tiers/parse_result.hpp"
#include "tiers/text.hpp"
#include "tiers/trace.hpp"

namespace tiers {

// Number index carried by a symbol name ("sg", "pl") or empty.
inline std::string_view index_of(std::string_view name) {
  if (ends_with(name, "_sg")) return "sg";
  if (ends_with(name, "_pl")) return "pl";
  return {};
}

// Notes how each step treats the number index: "push" introduces it on an
// unindexed lhs, "copy" threads it to indexed nonterminals, "pop" consumes
// it at indexed lexical classes.
inline void annotate_indices(const Grammar& g, DerivationTrace& trace) {
  for (TraceStep& step : trace.steps) {
    const std::string_view own = index_of(g.name(step.lhs.front()));
    std::set<std::string> pushed;
    bool copied = false;
    bool popped = false;
    for (SymbolId s : step.rhs) {
      const std::string_view idx = index_of(g.name(s));
      if (idx.empty()) continue;
      if (own.empty()) {
        pushed.insert(std::string(idx));
      } else if (idx == own) {
        (g.is_lexical(s) ? popped : copied) = true;
      }
    }
    std::string note;
    for (const auto& idx : pushed) note += (note.empty() ? "" : " ") + std::string("push ") + idx;
    if (copied) note += (note.empty() ? "" : " ") + std::string("copy ") + std::string(own);
    if (popped) note += (note.empty() ? "" : " ") + std::string("pop ") + std::string(own);
    step.note = std::move(note);
  }
}

inline void require_tier(const Grammar& g, Tier tier) {
  if (g.tier() != tier) {
    throw Error(ErrorKind::kPrecondition, "grammar " + g.id() + " is " +
                                              std::string(to_string(g.tier())) + ", expected " +
                                              std::string(to_string(tier)));
  }
}

inline ParseResult recognize_cfg(const Grammar& g, const std::vector<std::string>& tokens) {
  require_tier(g, Tier::kCfg);
  return EarleyRecognizer(g).recognize(tokens);
}

inline ParseResult recognize_ixg(const Grammar& g, const std::vector<std::string>& tokens) {
  require_tier(g, Tier::kIxg);
  ParseResult result = EarleyRecognizer(g).recognize(tokens);
  if (result.trace) annotate_indices(g, *result.trace);
  return result;
}

inline ParseResult recognize_csg(const Grammar& g, const std::vector<std::string>& tokens,
                                 const SearchBudget& budget) {
  require_tier(g, Tier::kCsg);
  return CsgRecognizer(g).recognize(tokens, budget);
}

inline ParseResult recognize_csg(const Grammar& g, const std::vector<std::string>& tokens) {
  return recognize_csg(g, tokens, SearchBudget::for_grammar(g));
}

// Dispatches on the grammar's tier.
inline ParseResult recognize(const Grammar& g, const std::vector<std::string>& tokens) {
  switch (g.tier()) {
    case Tier::kCfg: return recognize_cfg(g, tokens);
    case Tier::kIxg: return recognize_ixg(g, tokens);
    case Tier::kCsg: return recognize_csg(g, tokens);
  }
  return {};
}

// Reusable recognizer bound to one grammar, for batch use.
class Recognizer {
 public:
  explicit Recognizer(const Grammar& g)
      : g_(g), earley_(g), csg_(g), budget_(SearchBudget::for_grammar(g)) {}

  const Grammar& grammar() const { return g_; }
  const SearchBudget& budget() const { return budget_; }

  ParseResult operator()(const std::vector<std::string>& tokens) const {
    if (g_.tier() == Tier::kCsg) return csg_.recognize(tokens, budget_);
    ParseResult result = earley_.recognize(tokens);
    if (result.trace && g_.tier() == Tier::kIxg) annotate_indices(g_, *result.trace);
    return result;
  }

 private:
  const Grammar& g_;
  EarleyRecognizer earley_;
  CsgRecognizer csg_;
  SearchBudget budget_;
};

struct Classification {
  std::set<std::string> accepting;
  std::set<std::string> unknown;
};

// Shared recognizer for a bundled grammar id ("cfg", "ixg", "csg").
inline const Recognizer& bundled_recognizer(std::string_view id) {
  static const Recognizer cfg(bundled_grammar("cfg"));
  static const Recognizer ixg(bundled_grammar("ixg"));
  static const Recognizer csg(bundled_grammar("csg"));
  if (id == "cfg") return cfg;
  if (id == "ixg") return ixg;
  if (id == "csg") return csg;
  throw Error(ErrorKind::kUnknownSymbol, "no bundled grammar '" + std::string(id) + "'");
}

inline Classification classify(const std::vector<std::string>& tokens) {
  Classification out;
  for (std::string_view id : {"cfg", "ixg", "csg"}) {
    const Recognizer& r = bundled_recognizer(id);
    const ParseResult result = r(tokens);
    if (result.verdict == Verdict::kAccept) out.accepting.insert(r.grammar().id());
    if (result.verdict == Verdict::kUnknown) out.unknown.insert(r.grammar().id());
  }
  return out;
}

}  // namespace tiers

#endif  // TIERS_RECOGNIZER_HPP_
