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

#ifndef TIERS_PARSE_RESULT_HPP_
#define TIERS_PARSE_RESULT_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tiers/grammar.hpp"
#include "tiers/trace.hpp"

namespace tiers {

enum class Verdict { kAccept, kReject, kUnknown };

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kAccept: return "accept";
    case Verdict::kReject: return "reject";
    case Verdict::kUnknown: return "unknown";
  }
  return "?";
}

struct SearchCost {
  std::size_t nodes_explored = 0;
  std::size_t max_frontier = 0;
  double elapsed_ms = 0.0;
};

struct ParseResult {
  Verdict verdict = Verdict::kReject;
  std::optional<DerivationTrace> trace;  // present iff accepted
  SearchCost cost;
  std::string diagnostic;
};

// Lexical-class options per token; empty options mark an unknown word.
inline std::vector<SymbolString> token_classes(const Grammar& g,
                                               const std::vector<std::string>& tokens) {
  std::vector<SymbolString> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(g.classes_of(t));
  return out;
}

inline std::string unknown_word_diagnostic(const std::vector<std::string>& tokens,
                                           const std::vector<SymbolString>& classes) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (classes[i].empty()) {
      return "token " + std::to_string(i) + " '" + tokens[i] + "' is in no lexical class";
    }
  }
  return {};
}

// True iff replaying `trace` yields a class string matching `tokens`.
inline bool trace_matches(const Grammar& g, const DerivationTrace& trace,
                          const std::vector<std::string>& tokens) {
  SymbolString form;
  try {
    form = replay(g, trace);
  } catch (const Error&) {
    return false;
  }
  if (form.size() != tokens.size()) return false;
  for (std::size_t i = 0; i < form.size(); ++i) {
    const auto options = g.classes_of(tokens[i]);
    bool hit = false;
    for (SymbolId c : options) hit = hit || c == form[i];
    if (!hit) return false;
  }
  return true;
}

}  // namespace tiers

#endif  // TIERS_PARSE_RESULT_HPP_
