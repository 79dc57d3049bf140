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

#ifndef TIERS_PROMPT_HPP_
#define TIERS_PROMPT_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tiers/error.hpp"
#include "tiers/text.hpp"

namespace tiers {

inline constexpr std::string_view kPromptInstruction =
    "Disregarding any lack of punctuation or sensicality, please answer the following with "
    "only \"Yes\" or \"No\" : Is the sentence grammatically complete?";

inline constexpr std::string_view kHumanInstruction =
    "Disregarding any lack of punctuation or sensicality, please answer the following: Is the "
    "sentence grammatically complete?";

// Instruction line, newline, then the space-joined tokens.
inline std::string build_prompt(const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw Error(ErrorKind::kPrecondition, "prompt needs at least one token");
  std::string out(kPromptInstruction);
  out += '\n';
  out += join(tokens);
  return out;
}

// True for a leading "yes", false for a leading "no", nullopt otherwise.
// Case and punctuation around the first word are ignored.
inline std::optional<bool> parse_response(std::string_view raw) {
  for (const std::string& word : split_whitespace(ascii_lower(raw))) {
    std::size_t b = 0;
    std::size_t e = word.size();
    while (b < e && is_ascii_punct(word[b])) ++b;
    while (e > b && is_ascii_punct(word[e - 1])) --e;
    if (b == e) continue;
    const std::string_view first = std::string_view(word).substr(b, e - b);
    if (first == "yes") return true;
    if (first == "no") return false;
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace tiers

#endif  // TIERS_PROMPT_HPP_
