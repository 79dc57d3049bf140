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

#ifndef TIERS_FORCED_HPP_
#define TIERS_FORCED_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "tiers/error.hpp"
#include "tiers/grammar.hpp"
#include "tiers/rng.hpp"
#include "tiers/trace.hpp"

namespace tiers {

// Shortest agreement-preserving rewrites to lexical classes, one table per
// grammar family. Thresholds and draw order follow the reference generator.
enum class ForcedStrategy { kContextFree, kIndexed, kContextSensitive };

constexpr ForcedStrategy strategy_for(Tier tier) {
  switch (tier) {
    case Tier::kCfg: return ForcedStrategy::kContextFree;
    case Tier::kIxg: return ForcedStrategy::kIndexed;
    case Tier::kCsg: return ForcedStrategy::kContextSensitive;
  }
  return ForcedStrategy::kContextFree;
}

struct ForcedOutcome {
  SymbolString symbols;
  std::vector<TraceStep> steps;  // positions relative to the input window
};

namespace detail {

using Names = std::vector<std::string>;

class ForcedExpander {
 public:
  ForcedExpander(const Grammar& g, ForcedStrategy strategy, Rng& rng)
      : g_(g), strategy_(strategy), rng_(rng) {}

  ForcedOutcome run(const SymbolString& window) {
    form_ = g_.to_names(window);
    for (int pass = 0; !all_lexical(); ++pass) {
      if (pass > 64) throw Error(ErrorKind::kInternal, "forced expansion does not converge");
      std::size_t i = 0;
      while (i < form_.size()) {
        if (lexical(form_[i])) {
          ++i;
          continue;
        }
        i = rewrite(i);
      }
    }
    ForcedOutcome out;
    out.symbols = g_.to_ids(form_);
    out.steps = std::move(steps_);
    return out;
  }

 private:
  bool lexical(const std::string& name) const {
    auto id = g_.find(name);
    return id && g_.is_lexical(*id);
  }

  bool all_lexical() const {
    for (const auto& s : form_) {
      if (!lexical(s)) return false;
    }
    return true;
  }

  bool at(std::size_t i, const char* name) const { return i < form_.size() && form_[i] == name; }

  // Replaces `count` symbols at `i` with `rhs`; returns the index past it.
  std::size_t put(std::size_t i, std::size_t count, const Names& rhs) {
    TraceStep step;
    step.position = i;
    step.lhs = g_.to_ids(Names(form_.begin() + i, form_.begin() + i + count));
    step.rhs = g_.to_ids(rhs);
    step.forced = true;
    steps_.push_back(std::move(step));
    form_.erase(form_.begin() + i, form_.begin() + i + count);
    form_.insert(form_.begin() + i, rhs.begin(), rhs.end());
    return i + rhs.size();
  }

  [[noreturn]] void unknown(const std::string& sym) const {
    throw Error(ErrorKind::kUnknownSymbol, "no forced mapping for " + sym);
  }

  std::size_t rewrite(std::size_t i) {
    switch (strategy_) {
      case ForcedStrategy::kContextFree: return rewrite_cf(i);
      case ForcedStrategy::kIndexed: return rewrite_ix(i);
      case ForcedStrategy::kContextSensitive: return rewrite_cs(i);
    }
    return i + 1;
  }

  Names np_sg_draw() {
    if (rng_.uniform01() < 0.67) {
      if (rng_.uniform01() < 0.5) return {"Det_sg", "Adj", "N_sg"};
      return {"Det_sg", "N_sg"};
    }
    return {"ProperNoun_sg"};
  }

  Names np_pl_draw() {
    if (rng_.uniform01() < 0.5) return {"Det_pl", "Adj", "N_pl"};
    return {"Det_pl", "N_pl"};
  }

  Names np_draw() {
    const double e = rng_.uniform01();
    const double e2 = rng_.uniform01();
    if (e < 0.75) {
      if (e2 < 0.5) return {"Det_sg", "N_sg"};
      return {"Det_pl", "N_pl"};
    }
    return {"ProperNoun_sg"};
  }

  std::size_t rewrite_cf(std::size_t i) {
    const std::string sym = form_[i];
    if (sym == "NP") return put(i, 1, np_draw());
    if (sym == "VP") return put(i, 1, {rng_.uniform01() < 0.5 ? "V_sg" : "V_pl"});
    if (sym == "NP_sg" || sym == "NP_conj_sg") return put(i, 1, np_sg_draw());
    if (sym == "VP_sg") return put(i, 1, {"V_sg"});
    if (sym == "VP_conj_sg") return put(i, 1, {"Conj", "V_sg"});
    if (sym == "PP") return put(i, 1, {"P", "Det_sg", "N_sg"});
    if (sym == "PP_conj") return put(i, 1, {"Conj", "P", "Det_sg", "N_sg"});
    if (sym == "NP_pl" || sym == "NP_conj_pl") return put(i, 1, np_pl_draw());
    if (sym == "VP_pl") return put(i, 1, {"V_pl"});
    if (sym == "VP_conj_pl") return put(i, 1, {"Conj", "V_pl"});
    unknown(sym);
  }

  // (*) a determiner already on the left keeps only the noun, in its number.
  Names guard_determiner(std::size_t i, Names drawn) const {
    if (i == 0) return drawn;
    if (form_[i - 1] == "Det_sg") return {"N_sg"};
    if (form_[i - 1] == "Det_pl") return {"N_pl"};
    return drawn;
  }

  // (**) after a noun phrase, a following verb phrase (an Adv may sit in
  // between) is rewritten right away in the noun phrase's number.
  void look_ahead(std::size_t last, const char* vp, const char* verb) {
    std::size_t k = last + 1;
    if (at(k, "Adv")) ++k;
    if (at(k, vp) || at(k, "VP")) put(k, 1, {verb});
  }

  std::size_t rewrite_ix(std::size_t i) {
    const std::string sym = form_[i];
    if (sym == "NP") return put(i, 1, guard_determiner(i, np_draw()));
    if (sym == "VP") return put(i, 1, {rng_.uniform01() < 0.5 ? "V_sg" : "V_pl"});
    if (sym == "NP_sg" || sym == "NP_conj_sg") {
      const std::size_t end = put(i, 1, guard_determiner(i, np_sg_draw()));
      look_ahead(end - 1, "VP_sg", "V_sg");
      return end;
    }
    if (sym == "NP_pl" || sym == "NP_conj_pl") {
      const std::size_t end = put(i, 1, guard_determiner(i, np_pl_draw()));
      look_ahead(end - 1, "VP_pl", "V_pl");
      return end;
    }
    if (sym == "VP_sg") return put(i, 1, {"V_sg"});
    if (sym == "VP_conj_sg") return put(i, 1, {"Conj", "V_sg"});
    if (sym == "PP") return put(i, 1, {"P", "Det_sg", "N_sg"});
    if (sym == "PP_conj") return put(i, 1, {"Conj", "P", "Det_sg", "N_sg"});
    if (sym == "RC_sg") return put(i, 1, {"RelPronoun", "V_sg"});
    if (sym == "VP_pl") return put(i, 1, {"V_pl"});
    if (sym == "VP_conj_pl") return put(i, 1, {"Conj", "V_pl"});
    if (sym == "RC_pl") return put(i, 1, {"RelPronoun", "V_pl"});
    unknown(sym);
  }

  std::size_t rewrite_cs(std::size_t i) {
    const std::string sym = form_[i];
    if (sym == "NP_sequence" && at(i + 1, "VP_placeholder")) {
      const double e = rng_.uniform01();
      rng_.uniform01();  // the reference draws epsilon2 twice on this branch
      const double e2 = rng_.uniform01();
      if (e < 0.5) {
        return put(i, 2, e2 < 0.5 ? Names{"NP_sg", "NP_sg", "VP_sg"}
                                  : Names{"NP_sg", "NP_pl", "VP_sg"});
      }
      return put(i, 2, e2 < 0.5 ? Names{"NP_pl", "NP_sg", "VP_pl"}
                                : Names{"NP_pl", "NP_pl", "VP_pl"});
    }
    if (sym == "NP_sequence") {
      for (const auto& [vp, verb] : {std::pair{"VP_sg", "V_sg"}, std::pair{"VP_pl", "V_pl"}}) {
        if (at(i + 1, vp)) {
          if (i + 2 < form_.size()) {
            put(i + 1, 1, {verb});
          } else {
            put(i + 1, 1, {"Adv", verb});
          }
          break;
        }
      }
      if (rng_.uniform01() <= 0.5) {
        if (rng_.uniform01() < 0.67) {
          if (rng_.uniform01() < 0.5) return put(i, 1, {"Det_sg", "Adj", "N_sg"});
          return put(i, 1, {"Det_sg", "N_sg"});
        }
        return put(i, 1, {"ProperNoun_sg"});
      }
      if (i > 0 && form_[i - 1] == "N_pl") return put(i, 1, {"Det_pl", "N_pl"});
      return put(i, 1, {"Det_sg", "N_sg"});
    }
    if (sym == "NP" || sym == "NP_sg") {
      const double e = rng_.uniform01();
      if (e < 0.67) {
        if (rng_.uniform01() < 0.5) return put(i, 1, {"Det_sg", "Adj", "N_sg"});
        return put(i, 1, {"Det_sg", "N_sg"});
      }
      return put(i, 1, {"ProperNoun_sg"});
    }
    if (sym == "VP_sequence" || sym == "VP_sg") {
      rng_.uniform01();
      return put(i, 1, {"V_sg"});
    }
    if (sym == "RC_sg") {
      rng_.uniform01();
      return put(i, 1, {"RelPronoun", "V_sg"});
    }
    if (sym == "VP_pl") {
      if (rng_.uniform01() < 0.5) return put(i, 1, {"Adv", "V_pl"});
      return put(i, 1, {"V_pl"});
    }
    if (sym == "NP_pl") return put(i, 1, np_pl_draw());
    if (sym == "RC_pl") return put(i, 1, {"RelPronoun", "V_pl"});
    if (sym == "PP_conj") {
      if (rng_.uniform01() < 0.5) return put(i, 1, {"Conj", "P", "Det_pl", "N_pl"});
      return put(i, 1, {"Conj", "P", "Det_sg", "N_sg"});
    }
    if (sym == "PP") {
      if (rng_.uniform01() < 0.5) return put(i, 1, {"P", "Det_pl", "N_pl"});
      return put(i, 1, {"P", "Det_sg", "N_sg"});
    }
    unknown(sym);
  }

  const Grammar& g_;
  ForcedStrategy strategy_;
  Rng& rng_;
  Names form_;
  std::vector<TraceStep> steps_;
};

}  // namespace detail

// Rewrites every nonterminal of `symbols` to lexical classes.
inline ForcedOutcome forced_expand(const Grammar& g, ForcedStrategy strategy,
                                   const SymbolString& symbols, Rng& rng) {
  return detail::ForcedExpander(g, strategy, rng).run(symbols);
}

}  // namespace tiers

#endif  // TIERS_FORCED_HPP_
