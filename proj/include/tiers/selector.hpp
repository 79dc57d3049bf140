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

#ifndef TIERS_SELECTOR_HPP_
#define TIERS_SELECTOR_HPP_

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tiers/bundled.hpp"
#include "tiers/error.hpp"
#include "tiers/generator.hpp"
#include "tiers/grammar.hpp"
#include "tiers/parse_result.hpp"
#include "tiers/recognizer.hpp"
#include "tiers/text.hpp"
#include "tiers/trace.hpp"

namespace tiers {

inline constexpr std::size_t kMinSelectedWords = 10;
inline constexpr std::size_t kMaxSelectedWords = 21;

// Rule identifiers reported by select().
namespace rule {
inline constexpr std::string_view kLength = "length";
inline constexpr std::string_view kDerivation = "derivation";
inline constexpr std::string_view kAgreement = "agreement";
inline constexpr std::string_view kNesting = "nesting";
inline constexpr std::string_view kPronoun = "pronoun";
inline constexpr std::string_view kCrossSerial = "cross-serial";
}  // namespace rule

struct SelectionReport {
  bool kept = false;
  std::vector<std::string> reasons;
  std::vector<std::string> repaired;  // "a->an@<position>"
};

// True when the indefinite article before `word` is "an". Vowel letters
// with a consonant sound (uni, use, eu, one) keep "a".
inline bool takes_an(std::string_view word) {
  const std::string w = ascii_lower(word);
  if (w.empty() || std::string_view("aeiou").find(w[0]) == std::string_view::npos) return false;
  for (std::string_view prefix : {"uni", "use", "eu", "one"}) {
    if (starts_with(w, prefix)) return false;
  }
  return true;
}

// Rewrites "a" to "an" in place; returns the repaired positions.
inline std::vector<std::size_t> repair_articles(std::vector<std::string>& tokens) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (ascii_lower(tokens[i]) == "a" && takes_an(tokens[i + 1])) {
      tokens[i] = tokens[i] == "A" ? "An" : "an";
      out.push_back(i);
    }
  }
  return out;
}

namespace detail {

inline bool name_starts(const Grammar& g, SymbolId s, std::string_view prefix) {
  return starts_with(g.name(s), prefix);
}

// Number of the subject noun phrase: any "and" makes it plural, otherwise
// the last disjunct decides. Juxtaposed nouns without a conjunction have
// no number.
inline std::string subject_number(const Grammar& g, const DerivationTree& tree,
                                  const std::vector<std::string>& tokens, const TreeNode& np) {
  std::size_t nouns = 0;
  std::size_t conjunctions = 0;
  bool plural_conj = false;
  std::string last;
  for (std::size_t i = np.begin; i < np.end; ++i) {
    const SymbolId s = tree.node(tree.leaves()[i]).symbol;
    if (name_starts(g, s, "N_") || name_starts(g, s, "ProperNoun")) {
      ++nouns;
      last = std::string(index_of(g.name(s)));
    } else if (g.name(s) == "Conj") {
      ++conjunctions;
      plural_conj = plural_conj || ascii_lower(tokens[i]) == "and";
    }
  }
  if (nouns == 0 || conjunctions + 1 != nouns) return {};
  return plural_conj ? "pl" : last;
}

inline bool cfg_agreement(const Grammar& g, const DerivationTree& tree,
                          const std::vector<std::string>& tokens) {
  const TreeNode* subject = nullptr;
  for (std::size_t child : tree.node(tree.root()).children) {
    if (name_starts(g, tree.node(child).symbol, "NP")) {
      subject = &tree.node(child);
      break;
    }
  }
  if (subject == nullptr || subject->begin == TreeNode::kNone) return false;
  const std::string number = subject_number(g, tree, tokens, *subject);
  if (number.empty()) return false;
  std::size_t verbs = 0;
  for (std::size_t leaf : tree.leaves()) {
    const SymbolId s = tree.node(leaf).symbol;
    if (!name_starts(g, s, "V_")) continue;
    ++verbs;
    if (index_of(g.name(s)) != number) return false;
  }
  return verbs > 0;
}

inline bool ixg_nested(const Grammar& g, const DerivationTree& tree) {
  for (const TreeNode& node : tree.nodes()) {
    if (!name_starts(g, node.symbol, "RC")) continue;
    for (std::size_t up = node.parent; up != TreeNode::kNone; up = tree.node(up).parent) {
      if (name_starts(g, tree.node(up).symbol, "RC")) return true;
    }
  }
  return false;
}

// After a proper noun the relative pronoun is "who".
inline bool ixg_pronouns(const Grammar& g, const DerivationTree& tree,
                         const std::vector<std::string>& tokens) {
  const auto& leaves = tree.leaves();
  for (std::size_t i = 1; i < leaves.size(); ++i) {
    if (g.name(tree.node(leaves[i]).symbol) != "RelPronoun") continue;
    const bool proper = name_starts(g, tree.node(leaves[i - 1]).symbol, "ProperNoun");
    if (proper && ascii_lower(tokens[i]) != "who") return false;
  }
  return true;
}

inline bool csg_cross_serial(const DerivationTrace& trace, const std::vector<std::string>& tokens) {
  bool context_step = false;
  for (const TraceStep& step : trace.steps) context_step = context_step || step.lhs.size() > 1;
  if (!context_step) return false;
  for (std::string_view other : {"cfg", "ixg"}) {
    if (bundled_recognizer(other)(tokens).verdict == Verdict::kAccept) return false;
  }
  return true;
}

}  // namespace detail

// Repairs articles, then applies the length filter and the tier filter of
// `g`. A sentence without a matching trace is parsed with `g` first.
inline std::pair<Sentence, SelectionReport> select(const Grammar& g, Sentence s) {
  SelectionReport report;
  for (std::size_t i : repair_articles(s.tokens)) {
    report.repaired.push_back("a->an@" + std::to_string(i));
  }
  if (s.tokens.size() < kMinSelectedWords || s.tokens.size() > kMaxSelectedWords) {
    report.reasons.emplace_back(rule::kLength);
    return {std::move(s), std::move(report)};
  }
  if (!trace_matches(g, s.provenance.trace, s.tokens)) {
    ParseResult parsed = recognize(g, s.tokens);
    if (parsed.verdict != Verdict::kAccept) {
      report.reasons.emplace_back(rule::kDerivation);
      return {std::move(s), std::move(report)};
    }
    s.provenance.trace = std::move(*parsed.trace);
    if (s.provenance.grammar_id.empty()) s.provenance.grammar_id = g.id();
  }
  const DerivationTree tree = DerivationTree::build(g, s.provenance.trace);
  switch (g.tier()) {
    case Tier::kCfg:
      if (!detail::cfg_agreement(g, tree, s.tokens)) report.reasons.emplace_back(rule::kAgreement);
      break;
    case Tier::kIxg:
      if (!detail::ixg_nested(g, tree)) report.reasons.emplace_back(rule::kNesting);
      if (!detail::ixg_pronouns(g, tree, s.tokens)) report.reasons.emplace_back(rule::kPronoun);
      break;
    case Tier::kCsg:
      if (!detail::csg_cross_serial(s.provenance.trace, s.tokens)) {
        report.reasons.emplace_back(rule::kCrossSerial);
      }
      break;
  }
  report.kept = report.reasons.empty();
  return {std::move(s), std::move(report)};
}

inline std::pair<Sentence, SelectionReport> select(Sentence s, Tier tier) {
  return select(bundled_grammar(tier), std::move(s));
}

struct BatchOptions {
  std::size_t max_attempts = 200'000;
};

struct BatchResult {
  std::vector<Sentence> sentences;
  std::size_t attempts = 0;
};

// Generates with seeds cfg.seed, cfg.seed + 1, ... until `want` distinct
// sentences are kept.
inline BatchResult batch_select(const Grammar& g, const GenConfig& cfg, std::size_t want,
                                const BatchOptions& options = {}) {
  if (want == 0) throw Error(ErrorKind::kPrecondition, "want must be at least 1");
  BatchResult result;
  std::set<std::vector<std::string>> seen;
  while (result.sentences.size() < want) {
    if (result.attempts >= options.max_attempts) {
      throw Error(ErrorKind::kExhaustion,
                  "kept " + std::to_string(result.sentences.size()) + " of " +
                      std::to_string(want) + " after " + std::to_string(result.attempts) +
                      " attempts");
    }
    GenConfig attempt = cfg;
    attempt.seed = cfg.seed + result.attempts++;
    Sentence candidate;
    try {
      candidate = generate(g, attempt);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kGenerationOverflow) continue;
      throw;
    }
    auto [sentence, report] = select(g, std::move(candidate));
    if (report.kept && seen.insert(sentence.tokens).second) {
      result.sentences.push_back(std::move(sentence));
    }
  }
  return result;
}

}  // namespace tiers

#endif  // TIERS_SELECTOR_HPP_
