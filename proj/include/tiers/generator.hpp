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

#ifndef TIERS_GENERATOR_HPP_
#define TIERS_GENERATOR_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tiers/error.hpp"
#include "tiers/forced.hpp"
#include "tiers/grammar.hpp"
#include "tiers/rng.hpp"
#include "tiers/trace.hpp"

namespace tiers {

struct GenConfig {
  std::uint64_t seed = 0;
  int max_expansion_per_symbol = 10;
  int max_recursion_depth = 100000;
  std::string grammar_id;
  std::size_t max_form_length = 500;

  // Caps used when generating candidates for selection.
  static GenConfig for_selection(Tier tier, std::uint64_t seed) {
    GenConfig cfg;
    cfg.seed = seed;
    if (tier == Tier::kCsg) {
      cfg.max_recursion_depth = 10;
      cfg.max_expansion_per_symbol = 20;
    }
    return cfg;
  }
};

struct Provenance {
  std::string grammar_id;
  std::uint64_t seed = 0;
  DerivationTrace trace;
};

struct Sentence {
  std::string id;
  std::vector<std::string> tokens;
  Provenance provenance;
};

// CFG runs share expansion counters across the start expansion's parts;
// IXG and CSG runs reset them for every part.
constexpr bool shares_counters(Tier tier) { return tier == Tier::kCfg; }

inline std::vector<std::string> lexicalize(const Grammar& g, const SymbolString& symbols,
                                           Rng& rng) {
  std::vector<std::string> tokens;
  tokens.reserve(symbols.size());
  for (SymbolId id : symbols) {
    if (!g.is_lexical(id)) {
      throw Error(ErrorKind::kInternal, "nonterminal " + g.name(id) + " left after expansion");
    }
    const auto& words = g.lexicon().classes()[g.lexical_class(id)].words;
    if (words.empty()) {
      throw Error(ErrorKind::kPrecondition, "lexical class " + g.name(id) + " is empty");
    }
    tokens.push_back(words[rng.index(words.size())]);
  }
  return tokens;
}

namespace detail {

class Derivation {
 public:
  Derivation(const Grammar& g, const GenConfig& cfg)
      : g_(g), cfg_(cfg), rng_(cfg.seed), strategy_(strategy_for(g.tier())) {
    if (cfg.max_expansion_per_symbol < 1 || cfg.max_recursion_depth < 1) {
      throw Error(ErrorKind::kPrecondition, "generation caps must be at least 1");
    }
  }

  Sentence run() {
    form_ = {g_.start()};
    choose(0, {g_.start()});
    if (form_.size() > 1) {
      if (const Production* p = g_.production_for(form_); p && !generator_alts(*p).empty()) {
        choose(0, form_);
      }
    }
    std::size_t position = 0;
    const std::size_t parts = form_.size();
    for (std::size_t k = 0; k < parts; ++k) {
      part_ = static_cast<int>(k);
      if (!shares_counters(g_.tier())) counts_.clear();
      std::size_t length = expand(position, 1, 0);
      if (has_nonterminal(position, length)) length = force(position, length);
      position += length;
    }
    part_ = -1;
    Sentence s;
    s.tokens = lexicalize(g_, form_, rng_);
    s.provenance = {cfg_.grammar_id.empty() ? g_.id() : cfg_.grammar_id, cfg_.seed,
                    std::move(trace_)};
    s.id = s.provenance.grammar_id + "-" + std::to_string(cfg_.seed);
    return s;
  }

 private:
  static std::vector<std::size_t> generator_alts(const Production& p) {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < p.alternatives.size(); ++a) {
      if (!p.alternatives[a].forced_only) out.push_back(a);
    }
    return out;
  }

  // Uniform rewrite of form_[at, at + lhs.size()) by a declared alternative.
  std::size_t choose(std::size_t at, SymbolString lhs) {
    const Production* p = g_.production_for(lhs);
    if (!p) throw Error(ErrorKind::kUnknownLhs, "no production for " + g_.name(lhs[0]));
    const auto alts = generator_alts(*p);
    const std::size_t pick = alts[rng_.index(alts.size())];
    const SymbolString& rhs = p->alternatives[pick].symbols;
    record(at, std::move(lhs), rhs, static_cast<int>(pick), false);
    return rhs.size();
  }

  void record(std::size_t at, SymbolString lhs, const SymbolString& rhs, int alt, bool forced) {
    TraceStep step{at, std::move(lhs), rhs, alt, forced, part_, {}};
    apply_step(g_, form_, step);
    trace_.steps.push_back(std::move(step));
    if (form_.size() > cfg_.max_form_length) {
      throw Error(ErrorKind::kGenerationOverflow,
                  "sentential form exceeded " + std::to_string(cfg_.max_form_length) + " symbols");
    }
  }

  bool has_nonterminal(std::size_t begin, std::size_t length) const {
    for (std::size_t i = begin; i < begin + length; ++i) {
      if (!g_.is_lexical(form_[i])) return true;
    }
    return false;
  }

  // Forced expansion of the window form_[begin, begin + length).
  std::size_t force(std::size_t begin, std::size_t length) {
    const SymbolString window(form_.begin() + begin, form_.begin() + begin + length);
    ForcedOutcome outcome = forced_expand(g_, strategy_, window, rng_);
    for (TraceStep& step : outcome.steps) {
      step.position += begin;
      step.part = part_;
      record(step.position, step.lhs, step.rhs, -1, true);
    }
    return outcome.symbols.size();
  }

  // Expands the window form_[begin, begin + length) produced by one call of
  // the reference recursion at `depth`; returns the window's new length.
  std::size_t expand(std::size_t begin, std::size_t length, int depth) {
    std::size_t i = 0;
    while (i < length) {
      const SymbolId sym = form_[begin + i];
      if (g_.is_lexical(sym)) {
        ++i;
        continue;
      }
      int& count = counts_[sym.value];
      if (count < cfg_.max_expansion_per_symbol && depth < cfg_.max_recursion_depth) {
        ++count;
        const std::size_t width = choose(begin + i, {sym});
        length = length + width - 1;
        // Only positions [i, i + width) of the updated window are revisited
        // here; later siblings fall to the enclosing loop.
        for (std::size_t j = i; j < i + width && j < length; ++j) {
          if (!g_.is_lexical(form_[begin + j])) {
            const std::size_t grown = expand(begin + j, 1, depth + 1);
            length = length + grown - 1;
          }
        }
        i += width;
      } else {
        return force(begin, length);
      }
    }
    return length;
  }

  const Grammar& g_;
  GenConfig cfg_;
  Rng rng_;
  ForcedStrategy strategy_;
  SymbolString form_;
  DerivationTrace trace_;
  std::unordered_map<std::uint32_t, int> counts_;
  int part_ = -1;
};

}  // namespace detail

inline Sentence generate(const Grammar& g, const GenConfig& cfg) {
  return detail::Derivation(g, cfg).run();
}

// Pre-lexical symbol string a sentence was generated from.
inline SymbolString class_string(const Grammar& g, const Sentence& s) {
  return replay(g, s.provenance.trace);
}

}  // namespace tiers

#endif  // TIERS_GENERATOR_HPP_
