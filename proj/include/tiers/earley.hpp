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

#ifndef TIERS_EARLEY_HPP_
#define TIERS_EARLEY_HPP_

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "tiers/error.hpp"
#include "tiers/grammar.hpp"
#include "tiers/parse_result.hpp"
#include "tiers/trace.hpp"

namespace tiers {

// Earley chart recognizer over the single-symbol rules of a grammar, with
// Aycock-Horspool handling of nullable symbols and leftmost-derivation
// extraction from the completed items.
class EarleyRecognizer {
 public:
  explicit EarleyRecognizer(const Grammar& g) : g_(g) {
    const auto& rules = g.rules();
    by_lhs_.assign(g.symbols().size(), {});
    for (std::size_t p = 0; p < rules.size(); ++p) {
      if (rules[p].lhs.size() != 1) continue;
      for (std::size_t a = 0; a < rules[p].alternatives.size(); ++a) {
        by_lhs_[rules[p].lhs[0].value].push_back(flat_.size());
        flat_.push_back({rules[p].lhs[0], &rules[p].alternatives[a].symbols, p, a,
                         rules[p].alternatives[a].forced_only});
      }
    }
    nullable_.assign(g.symbols().size(), false);
    for (bool changed = true; changed;) {
      changed = false;
      for (const FlatRule& r : flat_) {
        if (nullable_[r.lhs.value]) continue;
        if (std::all_of(r.rhs->begin(), r.rhs->end(),
                        [&](SymbolId s) { return nullable_[s.value]; })) {
          nullable_[r.lhs.value] = changed = true;
        }
      }
    }
  }

  ParseResult recognize(const std::vector<std::string>& tokens) const {
    const auto started = std::chrono::steady_clock::now();
    ParseResult result;
    const auto classes = token_classes(g_, tokens);
    result.diagnostic = unknown_word_diagnostic(tokens, classes);
    if (tokens.empty()) {
      result.diagnostic = "empty input";
    } else if (result.diagnostic.empty()) {
      Chart chart = fill(classes, result.cost);
      const std::size_t n = tokens.size();
      if (chart.has_symbol(g_.start(), 0, n)) {
        result.verdict = Verdict::kAccept;
        result.trace = extract(chart, classes);
      }
    }
    result.cost.elapsed_ms = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
    return result;
  }

 private:
  struct FlatRule {
    SymbolId lhs;
    const SymbolString* rhs;
    std::size_t production;
    std::size_t alternative;
    bool forced;
  };

  struct Item {
    std::uint32_t rule;
    std::uint32_t dot;
    std::uint32_t origin;
  };

  static std::uint64_t key(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return (a << 42) ^ (b << 21) ^ c;
  }

  struct Chart {
    std::unordered_set<std::uint64_t> rule_spans;    // (rule, begin, end)
    std::unordered_set<std::uint64_t> symbol_spans;  // (symbol, begin, end)

    bool has_rule(std::size_t r, std::size_t b, std::size_t e) const {
      return rule_spans.count(key(r, b, e)) > 0;
    }
    bool has_symbol(SymbolId s, std::size_t b, std::size_t e) const {
      return symbol_spans.count(key(s.value, b, e)) > 0;
    }
  };

  Chart fill(const std::vector<SymbolString>& classes, SearchCost& cost) const {
    const std::size_t n = classes.size();
    std::vector<std::vector<Item>> sets(n + 1);
    std::vector<std::unordered_set<std::uint64_t>> seen(n + 1);
    Chart chart;
    const auto add = [&](std::size_t k, Item item) {
      if (seen[k].insert(key(item.rule, item.dot, item.origin)).second) {
        sets[k].push_back(item);
      }
    };
    for (std::size_t r : by_lhs_[g_.start().value]) {
      add(0, {static_cast<std::uint32_t>(r), 0, 0});
    }
    for (std::size_t k = 0; k <= n; ++k) {
      for (std::size_t idx = 0; idx < sets[k].size(); ++idx) {
        const Item item = sets[k][idx];
        const FlatRule& rule = flat_[item.rule];
        if (item.dot < rule.rhs->size()) {
          const SymbolId next = (*rule.rhs)[item.dot];
          if (g_.is_lexical(next)) {
            if (k < n && std::find(classes[k].begin(), classes[k].end(), next) !=
                             classes[k].end()) {
              add(k + 1, {item.rule, item.dot + 1, item.origin});
            }
            continue;
          }
          for (std::size_t r : by_lhs_[next.value]) {
            add(k, {static_cast<std::uint32_t>(r), 0, static_cast<std::uint32_t>(k)});
          }
          if (nullable_[next.value]) add(k, {item.rule, item.dot + 1, item.origin});
          continue;
        }
        chart.rule_spans.insert(key(item.rule, item.origin, k));
        chart.symbol_spans.insert(key(rule.lhs.value, item.origin, k));
        for (std::size_t w = 0; w < sets[item.origin].size(); ++w) {
          const Item waiting = sets[item.origin][w];
          const FlatRule& wr = flat_[waiting.rule];
          if (waiting.dot < wr.rhs->size() && (*wr.rhs)[waiting.dot] == rule.lhs) {
            add(k, {waiting.rule, waiting.dot + 1, waiting.origin});
          }
        }
      }
      cost.nodes_explored += sets[k].size();
      cost.max_frontier = std::max(cost.max_frontier, sets[k].size());
    }
    return chart;
  }

  struct Extractor {
    const EarleyRecognizer& self;
    const Chart& chart;
    const std::vector<SymbolString>& classes;
    std::vector<std::uint64_t> active;
    DerivationTrace trace;

    bool on_stack(SymbolId s, std::size_t b, std::size_t e) const {
      return std::find(active.begin(), active.end(), key(s.value, b, e)) != active.end();
    }

    // Finds boundaries for rhs[k..] covering [pos, end).
    bool split(const SymbolString& rhs, std::size_t k, std::size_t pos, std::size_t end,
               std::vector<std::size_t>& cuts) const {
      if (k == rhs.size()) return pos == end;
      const SymbolId s = rhs[k];
      if (self.g_.is_lexical(s)) {
        if (pos >= end) return false;
        const auto& options = classes[pos];
        if (std::find(options.begin(), options.end(), s) == options.end()) return false;
        cuts.push_back(pos + 1);
        if (split(rhs, k + 1, pos + 1, end, cuts)) return true;
        cuts.pop_back();
        return false;
      }
      for (std::size_t q = pos; q <= end; ++q) {
        if (!chart.has_symbol(s, pos, q) || on_stack(s, pos, q)) continue;
        cuts.push_back(q);
        if (split(rhs, k + 1, q, end, cuts)) return true;
        cuts.pop_back();
      }
      return false;
    }

    bool derive(SymbolId sym, std::size_t begin, std::size_t end) {
      active.push_back(key(sym.value, begin, end));
      for (std::size_t r : self.by_lhs_[sym.value]) {
        if (!chart.has_rule(r, begin, end)) continue;
        const FlatRule& rule = self.flat_[r];
        std::vector<std::size_t> cuts;
        if (!split(*rule.rhs, 0, begin, end, cuts)) continue;
        const std::size_t mark = trace.steps.size();
        trace.steps.push_back({begin, {sym}, *rule.rhs, static_cast<int>(rule.alternative),
                               rule.forced, -1, {}});
        bool ok = true;
        std::size_t pos = begin;
        for (std::size_t k = 0; k < rule.rhs->size() && ok; ++k) {
          const SymbolId child = (*rule.rhs)[k];
          if (!self.g_.is_lexical(child)) ok = derive(child, pos, cuts[k]);
          pos = cuts[k];
        }
        if (ok) {
          active.pop_back();
          return true;
        }
        trace.steps.resize(mark);
      }
      active.pop_back();
      return false;
    }
  };

  DerivationTrace extract(const Chart& chart, const std::vector<SymbolString>& classes) const {
    Extractor ex{*this, chart, classes, {}, {}};
    if (!ex.derive(g_.start(), 0, classes.size())) {
      throw Error(ErrorKind::kInternal, "chart accepted but no derivation was extracted");
    }
    return std::move(ex.trace);
  }

  const Grammar& g_;
  std::vector<FlatRule> flat_;
  std::vector<std::vector<std::size_t>> by_lhs_;
  std::vector<bool> nullable_;
};

}  // namespace tiers

#endif  // TIERS_EARLEY_HPP_
