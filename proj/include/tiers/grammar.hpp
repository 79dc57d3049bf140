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

#ifndef TIERS_GRAMMAR_HPP_
#define TIERS_GRAMMAR_HPP_

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tiers/error.hpp"
#include "tiers/lexicon.hpp"
#include "tiers/text.hpp"

namespace tiers {

struct SymbolId {
  std::uint32_t value = 0;
  friend auto operator<=>(const SymbolId&, const SymbolId&) = default;
};

using SymbolString = std::vector<SymbolId>;

enum class SymbolKind { kNonterminal, kLexicalClass };

struct Symbol {
  std::string name;
  SymbolKind kind = SymbolKind::kNonterminal;
};

enum class Tier { kCfg, kIxg, kCsg };

constexpr std::string_view to_string(Tier tier) {
  switch (tier) {
    case Tier::kCfg: return "CFG";
    case Tier::kIxg: return "IXG";
    case Tier::kCsg: return "CSG";
  }
  return "?";
}

inline std::optional<Tier> parse_tier(std::string_view text) {
  const std::string lower = ascii_lower(text);
  if (lower == "cfg") return Tier::kCfg;
  if (lower == "ixg") return Tier::kIxg;
  if (lower == "csg") return Tier::kCsg;
  return std::nullopt;
}

// One right-hand side. Forced-only alternatives are accepted by recognizers
// but never drawn by the generator's uniform choice.
struct Alternative {
  SymbolString symbols;
  bool forced_only = false;
};

struct Production {
  SymbolString lhs;
  std::vector<Alternative> alternatives;
};

struct Diagnostic {
  std::string code;
  std::string symbol;
  std::string message;
  int production = -1;
  int alternative = -1;
};

class Grammar {
 public:
  const std::string& id() const { return id_; }
  Tier tier() const { return tier_; }
  SymbolId start() const { return start_; }
  const Lexicon& lexicon() const { return lexicon_; }
  const std::vector<Symbol>& symbols() const { return symbols_; }
  const std::vector<Production>& rules() const { return rules_; }
  const SymbolString& erasable() const { return erasable_; }

  const Symbol& symbol(SymbolId id) const { return symbols_.at(id.value); }
  const std::string& name(SymbolId id) const { return symbols_.at(id.value).name; }

  bool is_lexical(SymbolId id) const {
    return symbols_.at(id.value).kind == SymbolKind::kLexicalClass;
  }

  std::optional<SymbolId> find(std::string_view symbol_name) const {
    auto it = by_name_.find(std::string(symbol_name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  SymbolId at(std::string_view symbol_name) const {
    if (auto id = find(symbol_name)) return *id;
    throw Error(ErrorKind::kUnknownSymbol, "no symbol " + std::string(symbol_name) +
                                               " in grammar " + id_);
  }

  SymbolString to_ids(const std::vector<std::string>& names) const {
    SymbolString out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(at(n));
    return out;
  }

  std::vector<std::string> to_names(const SymbolString& ids) const {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (SymbolId id : ids) out.push_back(name(id));
    return out;
  }

  // Lexicon class index for a lexical-class symbol.
  std::size_t lexical_class(SymbolId id) const {
    auto index = lexicon_.class_index(name(id));
    if (!index) {
      throw Error(ErrorKind::kInternal, name(id) + " is not a lexical class");
    }
    return *index;
  }

  // Lexical-class symbols of this grammar matching `word`.
  SymbolString classes_of(std::string_view word) const {
    SymbolString out;
    for (std::size_t index : lexicon_.classes_of(word)) {
      if (auto id = find(lexicon_.classes()[index].name)) {
        if (is_lexical(*id)) out.push_back(*id);
      }
    }
    return out;
  }

  // Production whose lhs equals `lhs` exactly, or nullptr.
  const Production* production_for(const SymbolString& lhs) const {
    for (const Production& p : rules_) {
      if (p.lhs == lhs) return &p;
    }
    return nullptr;
  }

  // Productions with a single-symbol lhs, indexed by symbol.
  const std::vector<std::size_t>& productions_of(SymbolId id) const {
    static const std::vector<std::size_t> kNone;
    if (id.value >= single_lhs_.size()) return kNone;
    return single_lhs_[id.value];
  }

  bool has_context_rules() const {
    return std::any_of(rules_.begin(), rules_.end(),
                       [](const Production& p) { return p.lhs.size() > 1; });
  }

  // Document format:
  //
  //   grammar: ID            tier: CFG|IXG|CSG       start: S
  //   lexicon: NAME          erasable: SYM SYM ...   (optional)
  //   rules:
  //   LHS [LHS ...] -> SYM SYM | SYM | []
  //   forced:
  //   LHS -> ...             (recognition-only alternatives)
  //
  // `#` starts a comment. Symbols named like a lexicon class are lexical.
  static Grammar parse(std::string_view document, Lexicon lexicon) {
    Grammar g;
    g.lexicon_ = std::move(lexicon);
    enum class Section { kHeader, kRules, kForced } section = Section::kHeader;
    std::string start_name;
    std::vector<std::string> erasable_names;
    bool have_id = false;
    bool have_tier = false;

    std::istringstream in{std::string(document)};
    std::string raw;
    int line_number = 0;
    const auto fail = [&](const std::string& what) {
      throw Error(ErrorKind::kSchema,
                  "grammar line " + std::to_string(line_number) + ": " + what);
    };

    while (std::getline(in, raw)) {
      ++line_number;
      std::string_view line = raw;
      if (auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      line = trim(line);
      if (line.empty()) continue;
      if (line == "rules:") {
        section = Section::kRules;
        continue;
      }
      if (line == "forced:") {
        section = Section::kForced;
        continue;
      }
      const auto arrow = line.find("->");
      if (section == Section::kHeader) {
        const auto colon = line.find(':');
        if (colon == std::string_view::npos || arrow != std::string_view::npos) {
          fail("expected 'key: value' before the rules section");
        }
        const std::string key(trim(line.substr(0, colon)));
        const std::string value(trim(line.substr(colon + 1)));
        if (key == "grammar") {
          g.id_ = value;
          have_id = !value.empty();
        } else if (key == "tier") {
          auto tier = parse_tier(value);
          if (!tier) fail("unknown tier '" + value + "'");
          g.tier_ = *tier;
          have_tier = true;
        } else if (key == "start") {
          start_name = value;
        } else if (key == "lexicon") {
          g.lexicon_name_ = value;
        } else if (key == "erasable") {
          erasable_names = split_whitespace(value);
        } else {
          fail("unknown key '" + key + "'");
        }
        continue;
      }
      if (arrow == std::string_view::npos) fail("rule needs '->'");
      const auto lhs_names = split_whitespace(line.substr(0, arrow));
      if (lhs_names.empty()) fail("empty left-hand side");
      SymbolString lhs;
      for (const auto& n : lhs_names) {
        if (n == "[]") fail("[] on a left-hand side");
        lhs.push_back(g.intern(n));
      }
      std::vector<Alternative> alternatives;
      std::string_view rest = line.substr(arrow + 2);
      while (true) {
        const auto bar = rest.find('|');
        const auto piece = split_whitespace(rest.substr(0, bar));
        Alternative alt;
        alt.forced_only = section == Section::kForced;
        if (piece.empty()) fail("empty alternative (write [] for epsilon)");
        if (!(piece.size() == 1 && piece[0] == "[]")) {
          for (const auto& n : piece) {
            if (n == "[]") fail("[] must stand alone");
            alt.symbols.push_back(g.intern(n));
          }
        }
        alternatives.push_back(std::move(alt));
        if (bar == std::string_view::npos) break;
        rest = rest.substr(bar + 1);
      }
      Production* target = nullptr;
      for (Production& p : g.rules_) {
        if (p.lhs == lhs) target = &p;
      }
      if (!target) {
        g.rules_.push_back({lhs, {}});
        target = &g.rules_.back();
      }
      for (auto& alt : alternatives) target->alternatives.push_back(std::move(alt));
    }

    if (!have_id) fail("missing 'grammar:' key");
    if (!have_tier) fail("missing 'tier:' key");
    if (start_name.empty()) fail("missing 'start:' key");
    g.start_ = g.intern(start_name);
    for (const auto& n : erasable_names) g.erasable_.push_back(g.intern(n));
    g.index();
    return g;
  }

  static Grammar load_file(const std::string& path, Lexicon lexicon) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::kIo, "cannot read grammar " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), std::move(lexicon));
  }

  const std::string& lexicon_name() const { return lexicon_name_; }

 private:
  SymbolId intern(const std::string& symbol_name) {
    if (auto it = by_name_.find(symbol_name); it != by_name_.end()) return it->second;
    const SymbolId id{static_cast<std::uint32_t>(symbols_.size())};
    const bool lexical = lexicon_.class_index(symbol_name).has_value();
    symbols_.push_back({symbol_name, lexical ? SymbolKind::kLexicalClass
                                             : SymbolKind::kNonterminal});
    by_name_.emplace(symbol_name, id);
    return id;
  }

  void index() {
    single_lhs_.assign(symbols_.size(), {});
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      if (rules_[i].lhs.size() == 1) single_lhs_[rules_[i].lhs[0].value].push_back(i);
    }
  }

  std::string id_;
  Tier tier_ = Tier::kCfg;
  SymbolId start_;
  std::string lexicon_name_;
  Lexicon lexicon_;
  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> by_name_;
  std::vector<Production> rules_;
  SymbolString erasable_;
  std::vector<std::vector<std::size_t>> single_lhs_;
};

// One diagnostic per violated invariant; empty iff the grammar is well formed.
inline std::vector<Diagnostic> validate(const Grammar& g) {
  std::vector<Diagnostic> out;
  const auto& symbols = g.symbols();
  const std::size_t n = symbols.size();
  const auto& rules = g.rules();

  std::vector<bool> defined(n, false);
  for (const Production& p : rules) {
    if (p.lhs.size() == 1) defined[p.lhs[0].value] = true;
  }

  for (std::size_t i = 0; i < n; ++i) {
    const Symbol& s = symbols[i];
    if (s.kind == SymbolKind::kNonterminal && !defined[i]) {
      const bool is_start = i == g.start().value;
      out.push_back({is_start ? "start-missing" : "undefined", s.name,
                     is_start ? "start symbol " + s.name + " has no production"
                              : "symbol " + s.name + " is neither a rule nor a lexical class"});
    }
    if (s.kind == SymbolKind::kLexicalClass) {
      const auto& cls = g.lexicon().classes()[*g.lexicon().class_index(s.name)];
      if (cls.words.empty()) {
        out.push_back({"empty-class", s.name, "lexical class " + s.name + " has no words"});
      }
    }
  }

  for (std::size_t r = 0; r < rules.size(); ++r) {
    const Production& p = rules[r];
    if (p.lhs.size() > 1 && g.tier() != Tier::kCsg) {
      out.push_back({"context-rule", g.name(p.lhs[0]),
                     "multi-symbol left-hand side outside a CSG",
                     static_cast<int>(r)});
    }
    for (SymbolId id : p.lhs) {
      if (g.is_lexical(id)) {
        out.push_back({"lexical-lhs", g.name(id),
                       "lexical class " + g.name(id) + " used as a left-hand side",
                       static_cast<int>(r)});
      }
    }
    if (g.tier() != Tier::kCsg) continue;
    for (std::size_t a = 0; a < p.alternatives.size(); ++a) {
      const auto& rhs = p.alternatives[a].symbols;
      if (rhs.size() >= p.lhs.size()) continue;
      const bool whitelisted =
          p.lhs.size() == 1 &&
          std::find(g.erasable().begin(), g.erasable().end(), p.lhs[0]) !=
              g.erasable().end();
      if (!whitelisted) {
        out.push_back({"contraction", g.name(p.lhs[0]),
                       "rule for " + g.name(p.lhs[0]) +
                           " shrinks the sentential form and is not erasable",
                       static_cast<int>(r), static_cast<int>(a)});
      }
    }
  }

  for (SymbolId id : g.erasable()) {
    if (g.is_lexical(id) || !defined[id.value]) {
      out.push_back({"erasable", g.name(id),
                     "erasable entry " + g.name(id) + " is not a defined nonterminal"});
    }
  }

  // Reachability from the start symbol over every alternative.
  std::vector<bool> reached(n, false);
  reached[g.start().value] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (const Production& p : rules) {
      const bool live = std::any_of(p.lhs.begin(), p.lhs.end(),
                                    [&](SymbolId s) { return reached[s.value]; });
      if (!live) continue;
      for (const auto& alt : p.alternatives) {
        for (SymbolId s : alt.symbols) {
          if (!reached[s.value]) reached[s.value] = changed = true;
        }
      }
    }
  }

  // Productivity: a symbol is productive if a single-lhs rule derives a
  // string of productive symbols.
  std::vector<bool> productive(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    productive[i] = symbols[i].kind == SymbolKind::kLexicalClass;
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const Production& p : rules) {
      if (p.lhs.size() != 1 || productive[p.lhs[0].value]) continue;
      for (const auto& alt : p.alternatives) {
        if (std::all_of(alt.symbols.begin(), alt.symbols.end(),
                        [&](SymbolId s) { return productive[s.value]; })) {
          productive[p.lhs[0].value] = changed = true;
          break;
        }
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!reached[i]) {
      out.push_back({"unreachable", symbols[i].name,
                     symbols[i].name + " is not reachable from " + g.name(g.start())});
    }
    if (defined[i] && !productive[i]) {
      out.push_back({"unproductive", symbols[i].name,
                     symbols[i].name + " derives no terminal string"});
    }
  }
  return out;
}

// Parses and validates; throws a validation error naming the first
// offending symbol.
inline Grammar load_grammar(std::string_view document, Lexicon lexicon) {
  Grammar g = Grammar::parse(document, std::move(lexicon));
  auto diagnostics = validate(g);
  if (!diagnostics.empty()) {
    std::string message = "grammar " + g.id() + ":";
    for (const auto& d : diagnostics) message += " [" + d.code + " " + d.symbol + "] " + d.message + ";";
    throw Error(ErrorKind::kValidation, message);
  }
  return g;
}

// Generator-visible alternatives for `lhs`, in declaration order.
inline std::vector<SymbolString> expansions_of(const Grammar& g, const SymbolString& lhs) {
  const Production* p = g.production_for(lhs);
  if (!p) {
    std::string text;
    for (SymbolId id : lhs) text += (text.empty() ? "" : " ") + g.name(id);
    throw Error(ErrorKind::kUnknownLhs, "no production for (" + text + ")");
  }
  std::vector<SymbolString> out;
  for (const auto& alt : p->alternatives) {
    if (!alt.forced_only) out.push_back(alt.symbols);
  }
  return out;
}

inline std::vector<std::vector<std::string>> expansions_of(
    const Grammar& g, const std::vector<std::string>& lhs) {
  SymbolString ids;
  for (const auto& n : lhs) {
    auto id = g.find(n);
    if (!id) throw Error(ErrorKind::kUnknownLhs, "no production for (" + n + ")");
    ids.push_back(*id);
  }
  std::vector<std::vector<std::string>> out;
  for (const auto& alt : expansions_of(g, ids)) out.push_back(g.to_names(alt));
  return out;
}

}  // namespace tiers

template <>
struct std::hash<tiers::SymbolId> {
  std::size_t operator()(tiers::SymbolId id) const noexcept { return id.value; }
};

#endif  // TIERS_GRAMMAR_HPP_
