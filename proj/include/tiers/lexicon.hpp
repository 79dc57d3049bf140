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

#ifndef TIERS_LEXICON_HPP_
#define TIERS_LEXICON_HPP_

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tiers/error.hpp"
#include "tiers/text.hpp"

namespace tiers {

struct LexicalClass {
  std::string name;
  std::vector<std::string> words;
};

// Word lists keyed by lexical class. Lookup is ASCII case-insensitive and
// resolves aliases ("an" -> "a") before matching.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  const std::vector<LexicalClass>& classes() const { return classes_; }

  std::optional<std::size_t> class_index(std::string_view class_name) const {
    for (std::size_t i = 0; i < classes_.size(); ++i) {
      if (classes_[i].name == class_name) return i;
    }
    return std::nullopt;
  }

  void add_class(std::string class_name, std::vector<std::string> words) {
    if (class_index(class_name)) {
      throw Error(ErrorKind::kSchema, "duplicate lexical class " + class_name);
    }
    const std::size_t index = classes_.size();
    for (const std::string& word : words) {
      if (word.empty() || split_whitespace(word).size() != 1) {
        throw Error(ErrorKind::kSchema,
                    "bad word '" + word + "' in class " + class_name);
      }
      auto& slot = by_word_[ascii_lower(word)];
      if (slot.empty() || slot.back() != index) slot.push_back(index);
    }
    classes_.push_back({std::move(class_name), std::move(words)});
  }

  void add_alias(const std::string& alias, const std::string& target) {
    aliases_[ascii_lower(alias)] = ascii_lower(target);
  }

  const std::map<std::string, std::string>& aliases() const { return aliases_; }

  // Classes containing `word`, in declaration order.
  std::vector<std::size_t> classes_of(std::string_view word) const {
    std::string key = ascii_lower(word);
    if (auto alias = aliases_.find(key); alias != aliases_.end()) {
      key = alias->second;
    }
    auto it = by_word_.find(key);
    if (it == by_word_.end()) return {};
    return it->second;
  }

  bool contains(std::string_view word) const { return !classes_of(word).empty(); }

  // Document format: `lexicon: NAME`, `alias: WORD = TARGET`, and
  // `Class: word word ...` lines; `#` starts a comment.
  static Lexicon parse(std::string_view document) {
    Lexicon lexicon;
    std::istringstream in{std::string(document)};
    std::string raw;
    int line_number = 0;
    while (std::getline(in, raw)) {
      ++line_number;
      std::string_view line = raw;
      if (auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      line = trim(line);
      if (line.empty()) continue;
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) {
        throw Error(ErrorKind::kSchema, "lexicon line " +
                                            std::to_string(line_number) +
                                            ": expected 'Class: words'");
      }
      const std::string key(trim(line.substr(0, colon)));
      const std::string_view value = trim(line.substr(colon + 1));
      if (key.empty()) {
        throw Error(ErrorKind::kSchema,
                    "lexicon line " + std::to_string(line_number) + ": empty key");
      }
      if (key == "lexicon") {
        lexicon.name_ = std::string(value);
      } else if (key == "alias") {
        const auto eq = value.find('=');
        if (eq == std::string_view::npos) {
          throw Error(ErrorKind::kSchema, "lexicon line " +
                                              std::to_string(line_number) +
                                              ": alias needs 'word = target'");
        }
        lexicon.add_alias(std::string(trim(value.substr(0, eq))),
                          std::string(trim(value.substr(eq + 1))));
      } else {
        lexicon.add_class(key, split_whitespace(value));
      }
    }
    return lexicon;
  }

  static Lexicon load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::kIo, "cannot read lexicon " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
  }

 private:
  std::string name_;
  std::vector<LexicalClass> classes_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_word_;
  std::map<std::string, std::string> aliases_;
};

}  // namespace tiers

#endif  // TIERS_LEXICON_HPP_
