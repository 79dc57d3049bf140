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

#ifndef TIERS_ORACLE_HPP_
#define TIERS_ORACLE_HPP_

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "tiers/csg_search.hpp"
#include "tiers/error.hpp"
#include "tiers/grammar.hpp"
#include "tiers/parse_result.hpp"

namespace tiers {

// Every lexical-class string of length <= cap derivable from the start
// symbol, enumerated without reference to the recognizers.
//
// Symbols that cannot reach a context-rule lhs get their slices bottom-up
// by semi-naive fixed point over their context-free rules. The remaining
// symbols are handled by an any-position search over sentential forms in
// which the context-free symbols are atoms.
class LanguageSlice {
 public:
  using Code = std::uint64_t;

  LanguageSlice(const Grammar& g, std::size_t cap, std::size_t node_limit = 30'000'000)
      : g_(g), cap_(cap), node_limit_(node_limit) {
    if (cap == 0 || cap > 15) throw Error(ErrorKind::kCapTooLarge, "length cap must be 1..15");
    for (std::size_t i = 0; i < g.symbols().size(); ++i) {
      if (g.is_lexical(SymbolId{static_cast<std::uint32_t>(i)})) {
        code_of_.push_back(static_cast<std::uint32_t>(lexical_.size() + 1));
        lexical_.push_back(SymbolId{static_cast<std::uint32_t>(i)});
      } else {
        code_of_.push_back(0);
      }
    }
    bits_ = static_cast<std::size_t>(std::bit_width(lexical_.size()));
    if (bits_ * cap + 4 > 64) {
      throw Error(ErrorKind::kCapTooLarge, "length cap too large for the class inventory");
    }
    mark_tainted();
    build_context_free();
    build_start();
  }

  std::size_t cap() const { return cap_; }
  // False when the form-length bound cut the search short.
  bool complete() const { return complete_; }
  std::size_t size() const { return language_.size(); }

  bool contains(const SymbolString& classes) const {
    if (classes.size() > cap_) return false;
    Code code = classes.size();
    for (std::size_t i = 0; i < classes.size(); ++i) {
      const std::uint32_t c = code_of_[classes[i].value];
      if (c == 0) return false;
      code |= static_cast<Code>(c) << (4 + bits_ * i);
    }
    return language_.count(code) > 0;
  }

  // Accepts iff some class assignment of `tokens` is in the language.
  bool accepts(const std::vector<std::string>& tokens) const {
    if (tokens.empty() || tokens.size() > cap_) return false;
    const auto options = token_classes(g_, tokens);
    SymbolString pick(tokens.size());
    const std::function<bool(std::size_t)> walk = [&](std::size_t k) {
      if (k == tokens.size()) return contains(pick);
      for (SymbolId c : options[k]) {
        pick[k] = c;
        if (walk(k + 1)) return true;
      }
      return false;
    };
    return walk(0);
  }

  std::vector<SymbolString> members() const {
    std::vector<SymbolString> out;
    out.reserve(language_.size());
    for (Code code : language_) out.push_back(decode(code));
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  static std::size_t length_of(Code c) { return static_cast<std::size_t>(c & 0xf); }

  Code concat(Code a, Code b) const {
    const std::size_t la = length_of(a);
    return (la + length_of(b)) | ((a >> 4) << 4) | (((b >> 4) << (bits_ * la)) << 4);
  }

  SymbolString decode(Code code) const {
    SymbolString out;
    const std::size_t n = length_of(code);
    const Code mask = (Code{1} << bits_) - 1;
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(lexical_[((code >> (4 + bits_ * i)) & mask) - 1]);
    }
    return out;
  }

  void count(std::size_t more) {
    nodes_ += more;
    if (nodes_ > node_limit_) {
      throw Error(ErrorKind::kCapTooLarge, "enumeration exceeded the node limit");
    }
  }

  void mark_tainted() {
    const std::size_t n = g_.symbols().size();
    tainted_.assign(n, false);
    for (const Production& p : g_.rules()) {
      if (p.lhs.size() > 1) {
        for (SymbolId s : p.lhs) tainted_[s.value] = true;
      }
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (const Production& p : g_.rules()) {
        if (p.lhs.size() != 1 || tainted_[p.lhs[0].value]) continue;
        for (const auto& alt : p.alternatives) {
          if (std::any_of(alt.symbols.begin(), alt.symbols.end(),
                          [&](SymbolId s) { return tainted_[s.value]; })) {
            tainted_[p.lhs[0].value] = changed = true;
            break;
          }
        }
      }
    }
  }

  // store_[symbol][length] holds codes in insertion order; old_/full_ mark
  // the boundaries of the previous and current rounds.
  void build_context_free() {
    const std::size_t n = g_.symbols().size();
    store_.assign(n, std::vector<std::vector<Code>>(cap_ + 1));
    seen_.assign(n, {});
    old_.assign(n, std::vector<std::size_t>(cap_ + 1, 0));
    full_ = old_;
    for (SymbolId s : lexical_) {
      const Code code = 1 | (static_cast<Code>(code_of_[s.value]) << 4);
      store_[s.value][1].push_back(code);
      seen_[s.value].insert(code);
      full_[s.value][1] = 1;
    }
    struct Pending {
      std::uint32_t symbol;
      Code code;
    };
    for (bool grew = true; grew;) {
      std::vector<Pending> pending;
      for (const Production& p : g_.rules()) {
        if (p.lhs.size() != 1 || tainted_[p.lhs[0].value]) continue;
        const std::uint32_t lhs = p.lhs[0].value;
        for (const auto& alt : p.alternatives) {
          const auto& rhs = alt.symbols;
          if (rhs.empty()) {
            if (seen_[lhs].insert(0).second) pending.push_back({lhs, 0});
            continue;
          }
          for (std::size_t k = 0; k < rhs.size(); ++k) {
            product(rhs, k, 0, 0, [&](Code code) {
              if (seen_[lhs].insert(code).second) pending.push_back({lhs, code});
            });
          }
        }
      }
      count(pending.size());
      old_ = full_;
      for (const Pending& item : pending) {
        store_[item.symbol][length_of(item.code)].push_back(item.code);
      }
      for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t l = 0; l <= cap_; ++l) full_[s][l] = store_[s][l].size();
      }
      grew = !pending.empty();
    }
  }

  // Combinations of rhs where position `delta` draws from last round's new
  // codes, earlier positions from older codes and later ones from all.
  template <typename Sink>
  void product(const SymbolString& rhs, std::size_t delta, std::size_t k, Code acc, Sink&& sink) {
    if (k == rhs.size()) {
      sink(acc);
      return;
    }
    const std::uint32_t s = rhs[k].value;
    const std::size_t used = length_of(acc);
    for (std::size_t l = 0; l + used <= cap_; ++l) {
      const auto& bucket = store_[s][l];
      std::size_t lo = 0;
      std::size_t hi = full_[s][l];
      if (k < delta) hi = old_[s][l];
      if (k == delta) lo = old_[s][l];
      for (std::size_t i = lo; i < hi; ++i) {
        product(rhs, delta, k + 1, k == 0 && acc == 0 ? bucket[i] : concat(acc, bucket[i]), sink);
      }
    }
  }

  void build_start() {
    const SymbolId start = g_.start();
    if (!tainted_[start.value]) {
      for (const auto& bucket : store_[start.value]) language_.insert(bucket.begin(), bucket.end());
      return;
    }
    const auto floor = min_yields(g_);
    const std::size_t length_bound = cap_ + max_erasures(g_);
    std::deque<SymbolString> queue{{start}};
    std::unordered_set<std::string> visited{key(queue.front())};
    while (!queue.empty()) {
      SymbolString form = std::move(queue.front());
      queue.pop_front();
      bool any_tainted = false;
      for (std::size_t pos = 0; pos < form.size(); ++pos) {
        if (!tainted_[form[pos].value]) continue;
        any_tainted = true;
        for (const Production& p : g_.rules()) {
          if (pos + p.lhs.size() > form.size() ||
              !std::equal(p.lhs.begin(), p.lhs.end(), form.begin() + pos)) {
            continue;
          }
          for (const auto& alt : p.alternatives) {
            SymbolString child(form.begin(), form.begin() + pos);
            child.insert(child.end(), alt.symbols.begin(), alt.symbols.end());
            child.insert(child.end(), form.begin() + pos + p.lhs.size(), form.end());
            std::size_t need = 0;
            for (SymbolId s : child) need += floor[s.value];
            if (need > cap_) continue;
            if (child.size() > length_bound) {
              complete_ = false;
              continue;
            }
            if (visited.insert(key(child)).second) {
              count(1);
              queue.push_back(std::move(child));
            }
          }
        }
      }
      if (!any_tainted) concatenate(form, 0, 0);
    }
  }

  void concatenate(const SymbolString& form, std::size_t k, Code acc) {
    if (k == form.size()) {
      language_.insert(acc);
      return;
    }
    const std::uint32_t s = form[k].value;
    for (std::size_t l = 0; l + length_of(acc) <= cap_; ++l) {
      for (Code code : store_[s][l]) concatenate(form, k + 1, concat(acc, code));
    }
    count(1);
  }

  static std::string key(const SymbolString& form) {
    std::string out;
    for (SymbolId s : form) {
      out.push_back(static_cast<char>(s.value & 0xff));
      out.push_back(static_cast<char>(s.value >> 8));
    }
    return out;
  }

  const Grammar& g_;
  std::size_t cap_;
  std::size_t node_limit_;
  std::size_t nodes_ = 0;
  std::size_t bits_ = 0;
  bool complete_ = true;
  std::vector<SymbolId> lexical_;
  std::vector<std::uint32_t> code_of_;
  std::vector<bool> tainted_;
  std::vector<std::vector<std::vector<Code>>> store_;
  std::vector<std::unordered_set<Code>> seen_;
  std::vector<std::vector<std::size_t>> old_;
  std::vector<std::vector<std::size_t>> full_;
  std::unordered_set<Code> language_;
};

inline Verdict brute_force_membership(const Grammar& g, const std::vector<std::string>& tokens,
                                      std::size_t length_cap) {
  if (tokens.size() > length_cap) {
    throw Error(ErrorKind::kPrecondition, "input longer than the length cap");
  }
  const LanguageSlice slice(g, length_cap);
  return slice.accepts(tokens) ? Verdict::kAccept : Verdict::kReject;
}

// Class strings of length <= cap reached by rewriting any nonterminal at
// any position, pruned only by minimum yield; practical for small caps.
// Cross-checks LanguageSlice.
inline std::set<SymbolString> naive_language(const Grammar& g, std::size_t cap,
                                                      std::size_t node_limit = 5'000'000) {
  const auto floor = min_yields(g);
  const auto key = [](const SymbolString& form) {
    std::string out;
    for (SymbolId s : form) {
      out.push_back(static_cast<char>(s.value & 0xff));
      out.push_back(static_cast<char>(s.value >> 8));
    }
    return out;
  };
  std::set<SymbolString> out;
  std::deque<SymbolString> queue{{g.start()}};
  std::unordered_set<std::string> visited{key(queue.front())};
  while (!queue.empty()) {
    SymbolString form = std::move(queue.front());
    queue.pop_front();
    bool terminal = true;
    for (std::size_t pos = 0; pos < form.size(); ++pos) {
      if (g.is_lexical(form[pos])) continue;
      terminal = false;
      for (const Production& p : g.rules()) {
        if (pos + p.lhs.size() > form.size() ||
            !std::equal(p.lhs.begin(), p.lhs.end(), form.begin() + pos)) {
          continue;
        }
        for (const auto& alt : p.alternatives) {
          SymbolString child(form.begin(), form.begin() + pos);
          child.insert(child.end(), alt.symbols.begin(), alt.symbols.end());
          child.insert(child.end(), form.begin() + pos + p.lhs.size(), form.end());
          std::size_t need = 0;
          for (SymbolId s : child) need += floor[s.value];
          if (need > cap) continue;
          if (visited.insert(key(child)).second) {
            if (visited.size() > node_limit) {
              throw Error(ErrorKind::kCapTooLarge, "naive enumeration exceeded the node limit");
            }
            queue.push_back(std::move(child));
          }
        }
      }
    }
    if (terminal && !form.empty()) out.insert(form);
  }
  return out;
}

}  // namespace tiers

#endif  // TIERS_ORACLE_HPP_
