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

#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

#include "tiers/bundled.hpp"
#include "tiers/oracle.hpp"
#include "tiers/recognizer.hpp"
#include "tiers/rng.hpp"

namespace tiers {
namespace {

Grammar mini(const char* id) { return bundled_grammar(id, mini_lexicon()); }

TEST(Oracle, SingleDerivationGrammar) {
  const Lexicon lex = Lexicon::parse("lexicon: s\nDet_sg: the\nN_sg: dog\nV_sg: chases\nV_pl: chase\n");
  const Grammar g = load_grammar(
      "grammar: s\ntier: CFG\nstart: S\nlexicon: s\nrules:\nS -> Det_sg N_sg V_sg\n", lex);
  EXPECT_EQ(brute_force_membership(g, {"the", "dog", "chases"}, 3), Verdict::kAccept);
  EXPECT_EQ(brute_force_membership(g, {"the", "dog", "chase"}, 3), Verdict::kReject);
  EXPECT_THROW(brute_force_membership(g, {"the", "dog", "chases"}, 2), Error);
}

TEST(Oracle, SliceMatchesNaiveEnumeration) {
  for (const char* id : {"cfg", "ixg", "csg"}) {
    const Grammar g = mini(id);
    for (std::size_t cap : {3u, 4u, 5u}) {
      const LanguageSlice slice(g, cap);
      ASSERT_TRUE(slice.complete()) << id;
      const std::set<SymbolString> naive = naive_language(g, cap);
      const auto members = slice.members();
      EXPECT_EQ(std::set<SymbolString>(members.begin(), members.end()), naive) << id << " " << cap;
    }
  }
}

TEST(Oracle, SliceMembersAreRecognized) {
  for (const char* id : {"cfg", "ixg", "csg"}) {
    const Grammar g = mini(id);
    const Recognizer r(g);
    const LanguageSlice slice(g, 6);
    ASSERT_GT(slice.size(), 0u);
    Rng rng(11);
    for (const SymbolString& m : slice.members()) {
      std::vector<std::string> tokens;
      for (SymbolId c : m) {
        const auto& ws = g.lexicon().classes()[g.lexical_class(c)].words;
        tokens.push_back(ws[rng.index(ws.size())]);
      }
      ASSERT_EQ(r(tokens).verdict, Verdict::kAccept) << id;
    }
  }
}

TEST(Oracle, CapLimits) {
  EXPECT_THROW(LanguageSlice(mini("cfg"), 0), Error);
  EXPECT_THROW(LanguageSlice(mini("cfg"), 16), Error);
}

TEST(Oracle, RandomStringsAgreeWithRecognizers) {
  const std::vector<std::string> vocab = {"a", "the", "dog", "dogs", "Euclid", "quick", "sees",
                                          "see", "quickly", "with", "and", "who"};
  for (const char* id : {"cfg", "ixg", "csg"}) {
    const Grammar g = mini(id);
    const Recognizer r(g);
    const LanguageSlice slice(g, 6);
    Rng rng(5);
    for (int i = 0; i < 500; ++i) {
      std::vector<std::string> tokens(1 + rng.index(6));
      for (auto& t : tokens) t = vocab[rng.index(vocab.size())];
      const bool expected = slice.accepts(tokens);
      EXPECT_EQ(r(tokens).verdict, expected ? Verdict::kAccept : Verdict::kReject) << id;
    }
  }
}

}  // namespace
}  // namespace tiers
