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

#ifndef TIERS_QUESTIONNAIRE_HPP_
#define TIERS_QUESTIONNAIRE_HPP_

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tiers/error.hpp"
#include "tiers/generator.hpp"
#include "tiers/prompt.hpp"
#include "tiers/rng.hpp"
#include "tiers/text.hpp"

namespace tiers {

inline constexpr std::size_t kQuestionsPerGrammar = 25;

struct Questionnaire {
  std::string form;  // printable form with the human instruction
  std::string key;   // CSV: position,sentence_id,grammar
};

// Orders the 75 sentences by a seeded shuffle.
inline Questionnaire export_questionnaire(const std::vector<Sentence>& sentences,
                                          std::uint64_t seed) {
  std::map<std::string, std::size_t> counts;
  for (const Sentence& s : sentences) ++counts[s.provenance.grammar_id];
  for (const char* id : {"cfg", "ixg", "csg"}) {
    if (counts[id] != kQuestionsPerGrammar) {
      throw Error(ErrorKind::kCountMismatch, std::string(id) + " has " +
                                                 std::to_string(counts[id]) + " sentences, need " +
                                                 std::to_string(kQuestionsPerGrammar));
    }
  }
  if (counts.size() != 3) throw Error(ErrorKind::kCountMismatch, "unexpected grammar ids");

  std::vector<std::size_t> order(sentences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(mix_seed(seed));
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

  Questionnaire q;
  q.form = std::string(kHumanInstruction) + "\n\n";
  q.key = "position,sentence_id,grammar\n";
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const Sentence& s = sentences[order[pos]];
    std::string text = join(s.tokens);
    if (!text.empty()) text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    q.form += std::to_string(pos + 1) + ". " + text + "\n   [ ] Yes   [ ] No\n\n";
    q.key += std::to_string(pos + 1) + "," + s.id + "," + s.provenance.grammar_id + "\n";
  }
  return q;
}

}  // namespace tiers

#endif  // TIERS_QUESTIONNAIRE_HPP_
