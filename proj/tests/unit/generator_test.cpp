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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "tiers/bundled.hpp"
#include "tiers/forced.hpp"
#include "tiers/generator.hpp"
#include "tiers/recognizer.hpp"
#include "tiers/text.hpp"

namespace tiers {
namespace {

using Names = std::vector<std::string>;

Grammar tiny_grammar(const std::string& rules) {
  const Lexicon lex = Lexicon::parse(
      "lexicon: tiny\nDet_sg: the\nDet_pl: the\nN_sg: dog\nN_pl: dogs\nV_sg: chases\n"
      "V_pl: chase\n");
  return load_grammar("grammar: t\ntier: CFG\nstart: S\nlexicon: tiny\nrules:\n" + rules, lex);
}

TEST(Generator, SameConfigSameSentence) {
  for (const char* id : {"cfg", "ixg", "csg"}) {
    const Grammar& g = bundled_grammar(id);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const GenConfig cfg = GenConfig::for_selection(g.tier(), seed);
      const Sentence a = generate(g, cfg);
      const Sentence b = generate(g, cfg);
      EXPECT_EQ(a.tokens, b.tokens);
      EXPECT_EQ(a.provenance.trace, b.provenance.trace);
      EXPECT_EQ(a.id, b.id);
      EXPECT_EQ(a.provenance.seed, seed);
      EXPECT_EQ(a.provenance.grammar_id, id);
    }
  }
}

TEST(Generator, UniqueSentenceIndependentOfSeed) {
  const Grammar g = tiny_grammar("S -> NP V_sg\nNP -> Det_sg N_sg\n");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    EXPECT_EQ(generate(g, cfg).tokens, (Names{"the", "dog", "chases"}));
  }
}

TEST(Generator, TraceReplaysToClassString) {
  for (const char* id : {"cfg", "ixg", "csg"}) {
    const Grammar& g = bundled_grammar(id);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const Sentence s = generate(g, GenConfig::for_selection(g.tier(), seed));
      const SymbolString classes = class_string(g, s);
      ASSERT_EQ(classes.size(), s.tokens.size());
      for (std::size_t i = 0; i < classes.size(); ++i) {
        ASSERT_TRUE(g.is_lexical(classes[i]));
        const auto options = g.classes_of(s.tokens[i]);
        EXPECT_NE(std::find(options.begin(), options.end(), classes[i]), options.end());
      }
    }
  }
}

TEST(Generator, CfgRoundTripThroughRecognizer) {
  const Grammar& g = bundled_grammar("cfg");
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Sentence s = generate(g, GenConfig::for_selection(g.tier(), seed));
    ASSERT_EQ(recognize_cfg(g, s.tokens).verdict, Verdict::kAccept) << join(s.tokens);
  }
}

TEST(Generator, IxgAndCsgRoundTrip) {
  for (const char* id : {"ixg", "csg"}) {
    const Recognizer& r = bundled_recognizer(id);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Sentence s = generate(r.grammar(), GenConfig::for_selection(r.grammar().tier(), seed));
      if (s.tokens.size() > 21) continue;
      EXPECT_EQ(r(s.tokens).verdict, Verdict::kAccept) << id << ": " << join(s.tokens);
    }
  }
}

TEST(Generator, ExpansionCapForcesTheRest) {
  const Grammar& g = bundled_grammar("cfg");
  std::size_t forced = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.max_expansion_per_symbol = 1;
    const Sentence s = generate(g, cfg);
    std::map<std::string, int> declared;
    for (const TraceStep& step : s.provenance.trace.steps) {
      if (step.forced) {
        ++forced;
        EXPECT_EQ(step.alternative, -1);
        continue;
      }
      EXPECT_GE(step.alternative, 0);
      EXPECT_LE(++declared[g.name(step.lhs[0])], 1) << g.name(step.lhs[0]);
    }
    EXPECT_EQ(recognize_cfg(g, s.tokens).verdict, Verdict::kAccept) << join(s.tokens);
  }
  EXPECT_GT(forced, 0u);
}

TEST(Generator, RejectsBadCaps) {
  GenConfig cfg;
  cfg.max_expansion_per_symbol = 0;
  try {
    generate(bundled_grammar("cfg"), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPrecondition);
  }
}

TEST(Forced, CfgNounPhraseDraws) {
  const Grammar& g = bundled_grammar("cfg");
  const std::set<Names> allowed = {
      {"Det_sg", "Adj", "N_sg"}, {"Det_sg", "N_sg"}, {"ProperNoun_sg"}};
  std::set<Names> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const ForcedOutcome out =
        forced_expand(g, ForcedStrategy::kContextFree, g.to_ids({"NP_sg"}), rng);
    const Names names = g.to_names(out.symbols);
    EXPECT_TRUE(allowed.count(names)) << join(names);
    seen.insert(names);
    for (const TraceStep& step : out.steps) EXPECT_TRUE(step.forced);
  }
  EXPECT_TRUE(seen.count({"Det_sg", "Adj", "N_sg"}));
  EXPECT_EQ(seen.size(), allowed.size());
}

TEST(Forced, IxgSkipsDuplicateDeterminer) {
  const Grammar& g = bundled_grammar("ixg");
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const ForcedOutcome out =
        forced_expand(g, ForcedStrategy::kIndexed, g.to_ids({"Det_sg", "NP"}), rng);
    const Names names = g.to_names(out.symbols);
    ASSERT_EQ(names.size(), 2u) << join(names);
    EXPECT_EQ(names[0], "Det_sg");
    EXPECT_EQ(names[1], "N_sg");
  }
}

TEST(Forced, CsgRewritesFollowingVerbPhraseFirst) {
  const Grammar& g = bundled_grammar("csg");
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const ForcedOutcome out = forced_expand(g, ForcedStrategy::kContextSensitive,
                                            g.to_ids({"NP_sequence", "VP_sg", "VP_sequence"}), rng);
    ASSERT_FALSE(out.steps.empty());
    EXPECT_EQ(g.to_names(out.steps[0].lhs), (Names{"VP_sg"}));
    EXPECT_EQ(out.steps[0].position, 1u);
    EXPECT_EQ(g.to_names(out.steps[0].rhs), (Names{"V_sg"}));

    Rng rng2(seed);
    const ForcedOutcome end = forced_expand(g, ForcedStrategy::kContextSensitive,
                                            g.to_ids({"NP_sequence", "VP_sg"}), rng2);
    EXPECT_EQ(g.to_names(end.steps[0].lhs), (Names{"VP_sg"}));
    EXPECT_EQ(g.to_names(end.steps[0].rhs), (Names{"Adv", "V_sg"}));
  }
}

TEST(Forced, EveryStrategyReachesLexicalClasses) {
  for (const char* id : {"cfg", "ixg", "csg"}) {
    const Grammar& g = bundled_grammar(id);
    for (const Symbol& s : g.symbols()) {
      if (s.kind != SymbolKind::kNonterminal || s.name == "S") continue;
      if (s.name == "VP_placeholder") continue;
      Rng rng(3);
      const ForcedOutcome out = forced_expand(g, strategy_for(g.tier()), g.to_ids({s.name}), rng);
      for (SymbolId id2 : out.symbols) EXPECT_TRUE(g.is_lexical(id2)) << id << " " << s.name;
    }
  }
}

TEST(Lexicalize, SingletonClasses) {
  const Grammar g = tiny_grammar("S -> Det_pl N_pl V_pl\n");
  Rng rng(0);
  EXPECT_EQ(lexicalize(g, g.to_ids({"Det_pl", "N_pl", "V_pl"}), rng),
            (Names{"the", "dogs", "chase"}));
}

TEST(Lexicalize, EmptyClassIsAnError) {
  const Lexicon lex = Lexicon::parse("lexicon: e\nN_sg:\nV_sg: runs\n");
  const Grammar g =
      Grammar::parse("grammar: t\ntier: CFG\nstart: S\nlexicon: e\nrules:\nS -> N_sg V_sg\n", lex);
  Rng rng(0);
  EXPECT_THROW(lexicalize(g, g.to_ids({"N_sg"}), rng), Error);
  EXPECT_THROW(lexicalize(g, g.to_ids({"S"}), rng), Error);
}

TEST(Lexicalize, FixedSeedGolden) {
  const Grammar& g = bundled_grammar("cfg");
  Rng a(2024);
  Rng b(2024);
  const Names first = lexicalize(g, g.to_ids({"Det_sg", "N_sg"}), a);
  EXPECT_EQ(first, lexicalize(g, g.to_ids({"Det_sg", "N_sg"}), b));
  EXPECT_EQ(first, (Names{"the", "book"}));
}

}  // namespace
}  // namespace tiers
