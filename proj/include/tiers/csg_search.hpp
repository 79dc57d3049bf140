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

#ifndef TIERS_CSG_SEARCH_HPP_
#define TIERS_CSG_SEARCH_HPP_

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

#include "tiers/error.hpp"
#include "tiers/grammar.hpp"
#include "tiers/parse_result.hpp"
#include "tiers/trace.hpp"

namespace tiers {

inline constexpr std::size_t kMaxErasureCap = 8;

// Per-symbol lower bound on yield length. Symbols on a context-rule lhs are
// lowered until every context rule respects the bound.
inline std::vector<std::size_t> min_yields(const Grammar& g) {
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 4;
  const std::size_t n = g.symbols().size();
  std::vector<std::size_t> my(n, kInf);
  for (std::size_t i = 0; i < n; ++i) {
    if (g.is_lexical(SymbolId{static_cast<std::uint32_t>(i)})) my[i] = 1;
  }
  const auto sum = [&](const SymbolString& s) {
    std::size_t total = 0;
    for (SymbolId id : s) total = std::min(kInf, total + my[id.value]);
    return total;
  };
  for (bool outer = true; outer;) {
    outer = false;
    for (bool changed = true; changed;) {
      changed = false;
      for (const Production& p : g.rules()) {
        if (p.lhs.size() != 1) continue;
        for (const auto& alt : p.alternatives) {
          const std::size_t s = sum(alt.symbols);
          if (s < my[p.lhs[0].value]) {
            my[p.lhs[0].value] = s;
            changed = true;
          }
        }
      }
    }
    for (const Production& p : g.rules()) {
      if (p.lhs.size() < 2) continue;
      for (const auto& alt : p.alternatives) {
        if (sum(p.lhs) <= sum(alt.symbols)) continue;
        for (SymbolId id : p.lhs) {
          if (my[id.value] != 0) {
            my[id.value] = 0;
            outer = true;
          }
        }
      }
    }
  }
  return my;
}

// Upper bound on how many erasable symbols a sentential form can hold,
// capped at kMaxErasureCap.
inline std::size_t max_erasures(const Grammar& g) {
  const std::size_t n = g.symbols().size();
  std::vector<std::size_t> e(n, 0);
  const auto& erasable = g.erasable();
  for (SymbolId id : erasable) e[id.value] = 1;
  const auto sum = [&](const SymbolString& s) {
    std::size_t total = 0;
    for (SymbolId id : s) total += e[id.value];
    return std::min(total, kMaxErasureCap);
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const Production& p : g.rules()) {
      for (const auto& alt : p.alternatives) {
        const std::size_t s = sum(alt.symbols);
        for (SymbolId id : p.lhs) {
          if (s > e[id.value]) {
            e[id.value] = s;
            changed = true;
          }
        }
      }
    }
  }
  return e[g.start().value];
}

struct SearchBudget {
  std::size_t max_nodes = 5'000'000;
  std::size_t max_erasures = 0;

  static SearchBudget for_grammar(const Grammar& g, std::size_t nodes = 5'000'000) {
    return {nodes, tiers::max_erasures(g)};
  }
};

// Breadth-first derivation search over sentential forms, always rewriting
// at the leftmost nonterminal (context rules match when their lhs starts
// there). Forms are pruned on terminal-prefix mismatch, on minimum yield,
// and on length beyond |tokens| + max_erasures.
class CsgRecognizer {
 public:
  explicit CsgRecognizer(const Grammar& g) : g_(g), min_yield_(min_yields(g)) {
    for (std::size_t p = 0; p < g.rules().size(); ++p) {
      const auto& lhs = g.rules()[p].lhs;
      if (lhs.size() > 1) context_.push_back(p);
    }
  }

  ParseResult recognize(const std::vector<std::string>& tokens, const SearchBudget& budget) const {
    const auto started = std::chrono::steady_clock::now();
    ParseResult result;
    const auto classes = token_classes(g_, tokens);
    result.diagnostic = unknown_word_diagnostic(tokens, classes);
    if (tokens.empty()) {
      result.diagnostic = "empty input";
    } else if (result.diagnostic.empty()) {
      search(classes, budget, result);
    }
    result.cost.elapsed_ms = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
    return result;
  }

 private:
  struct Node {
    std::uint32_t parent;
    std::uint32_t production;
    std::uint16_t alternative;
    std::uint16_t position;
  };

  static std::string encode(const SymbolString& form) {
    std::string out(form.size() * 2, '\0');
    for (std::size_t i = 0; i < form.size(); ++i) {
      out[2 * i] = static_cast<char>(form[i].value & 0xff);
      out[2 * i + 1] = static_cast<char>(form[i].value >> 8);
    }
    return out;
  }

  static SymbolString decode(const std::string& text) {
    SymbolString out(text.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i].value = static_cast<unsigned char>(text[2 * i]) |
                     (static_cast<std::uint32_t>(static_cast<unsigned char>(text[2 * i + 1])) << 8);
    }
    return out;
  }

  static bool matches(const SymbolString& options, SymbolId s) {
    return std::find(options.begin(), options.end(), s) != options.end();
  }

  void search(const std::vector<SymbolString>& classes, const SearchBudget& budget,
              ParseResult& result) const {
    const std::size_t n = classes.size();
    const std::size_t length_bound = n + budget.max_erasures;
    std::vector<Node> nodes;
    std::deque<std::pair<std::string, std::uint32_t>> frontier;
    std::unordered_set<std::string> visited;
    bool bound_pruned = false;

    const SymbolString start{g_.start()};
    nodes.push_back({std::numeric_limits<std::uint32_t>::max(), 0, 0, 0});
    visited.insert(encode(start));
    frontier.emplace_back(encode(start), 0);
    result.cost.nodes_explored = 1;

    while (!frontier.empty()) {
      result.cost.max_frontier = std::max(result.cost.max_frontier, frontier.size());
      auto [code, node_id] = std::move(frontier.front());
      frontier.pop_front();
      const SymbolString form = decode(code);
      std::size_t p = 0;
      while (p < form.size() && g_.is_lexical(form[p])) ++p;
      if (p == form.size()) continue;

      const auto try_child = [&](SymbolString child, std::size_t production,
                                 std::size_t alternative) -> bool {
        std::size_t q = p;
        while (q < child.size() && g_.is_lexical(child[q])) {
          if (q >= n || !matches(classes[q], child[q])) return false;
          ++q;
        }
        std::size_t floor = 0;
        for (SymbolId s : child) floor += min_yield_[s.value];
        if (floor > n) return false;
        if (q == child.size() && q != n) return false;
        if (child.size() > length_bound) {
          bound_pruned = true;
          return false;
        }
        std::string key = encode(child);
        if (!visited.insert(key).second) return false;
        if (nodes.size() >= budget.max_nodes) {
          result.verdict = Verdict::kUnknown;
          result.diagnostic = "node budget exhausted";
          return true;
        }
        nodes.push_back({node_id, static_cast<std::uint32_t>(production),
                         static_cast<std::uint16_t>(alternative), static_cast<std::uint16_t>(p)});
        ++result.cost.nodes_explored;
        if (q == child.size()) {
          result.verdict = Verdict::kAccept;
          result.trace = trace_to(nodes, static_cast<std::uint32_t>(nodes.size() - 1));
          return true;
        }
        frontier.emplace_back(std::move(key), static_cast<std::uint32_t>(nodes.size() - 1));
        return false;
      };

      const auto expand_with = [&](std::size_t production) -> bool {
        const Production& rule = g_.rules()[production];
        for (std::size_t a = 0; a < rule.alternatives.size(); ++a) {
          SymbolString child(form.begin(), form.begin() + p);
          child.insert(child.end(), rule.alternatives[a].symbols.begin(),
                       rule.alternatives[a].symbols.end());
          child.insert(child.end(), form.begin() + p + rule.lhs.size(), form.end());
          if (try_child(std::move(child), production, a)) return true;
        }
        return false;
      };

      for (std::size_t cp : context_) {
        const auto& lhs = g_.rules()[cp].lhs;
        if (p + lhs.size() <= form.size() &&
            std::equal(lhs.begin(), lhs.end(), form.begin() + p)) {
          if (expand_with(cp)) return;
        }
      }
      for (std::size_t production : g_.productions_of(form[p])) {
        if (expand_with(production)) return;
      }
    }
    result.verdict = bound_pruned ? Verdict::kUnknown : Verdict::kReject;
    if (bound_pruned) result.diagnostic = "erasure bound pruned forms";
  }

  DerivationTrace trace_to(const std::vector<Node>& nodes, std::uint32_t leaf) const {
    std::vector<std::uint32_t> path;
    for (std::uint32_t id = leaf; id != 0; id = nodes[id].parent) path.push_back(id);
    std::reverse(path.begin(), path.end());
    DerivationTrace trace;
    for (std::uint32_t id : path) {
      const Node& node = nodes[id];
      const Production& rule = g_.rules()[node.production];
      const Alternative& alt = rule.alternatives[node.alternative];
      trace.steps.push_back({node.position, rule.lhs, alt.symbols,
                             static_cast<int>(node.alternative), alt.forced_only, -1, {}});
    }
    return trace;
  }

  const Grammar& g_;
  std::vector<std::size_t> min_yield_;
  std::vector<std::size_t> context_;
};

}  // namespace tiers

#endif  // TIERS_CSG_SEARCH_HPP_
