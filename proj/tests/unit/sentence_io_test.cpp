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

#include <sstream>
#include <string>
#include <vector>

#include "tiers/bundled.hpp"
#include "tiers/sentence_io.hpp"
#include "tiers/selector.hpp"

namespace tiers {
namespace {

TEST(SentenceIo, JsonlRoundTrip) {
  for (const char* id : {"cfg", "ixg", "csg"}) {
    const Grammar& g = bundled_grammar(id);
    const auto batch = batch_select(g, GenConfig::for_selection(g.tier(), 9), 5);
    std::stringstream buffer;
    write_jsonl(buffer, g, batch.sentences);
    const auto back = read_sentences(buffer, g);
    ASSERT_EQ(back.size(), batch.sentences.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      EXPECT_EQ(back[i].id, batch.sentences[i].id);
      EXPECT_EQ(back[i].tokens, batch.sentences[i].tokens);
      EXPECT_EQ(back[i].provenance.grammar_id, id);
      EXPECT_EQ(back[i].provenance.seed, batch.sentences[i].provenance.seed);
      EXPECT_EQ(back[i].provenance.trace, batch.sentences[i].provenance.trace);
    }
  }
}

TEST(SentenceIo, PlainTextLines) {
  std::istringstream in("# comment\n\nThe dogs sleep.\nGauss sleeps\n");
  const auto s = read_sentences(in, bundled_grammar("cfg"));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].id, "cfg-3");
  EXPECT_EQ(s[0].tokens, (std::vector<std::string>{"The", "dogs", "sleep"}));
  EXPECT_EQ(s[1].provenance.grammar_id, "cfg");
}

TEST(SentenceIo, RenderedText) {
  Sentence s;
  s.tokens = {"the", "dogs", "sleep"};
  std::ostringstream out;
  write_plain(out, {s});
  EXPECT_EQ(out.str(), "The dogs sleep.\n");
}

TEST(SentenceIo, TextFallbackAndTraceSkipping) {
  std::istringstream in(
      R"({"id":"x","grammar":"csg","text":"A book the hat conjectures sleep.","trace":[{"pos":0,"lhs":["NP_sequence"],"rhs":["NP"]}]})"
      "\n");
  const auto s = read_sentences(in, bundled_grammar("cfg"), false);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].tokens.size(), 6u);
  EXPECT_EQ(s[0].provenance.grammar_id, "csg");
  EXPECT_TRUE(s[0].provenance.trace.steps.empty());
}

TEST(SentenceIo, MalformedRecordsAreSchemaErrors) {
  std::istringstream bad_json("{not json\n");
  try {
    read_sentences(bad_json, bundled_grammar("cfg"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSchema);
  }
  std::istringstream no_tokens(R"({"id":"x"})" "\n");
  EXPECT_THROW(read_sentences(no_tokens, bundled_grammar("cfg")), Error);
  std::istringstream foreign(
      R"({"id":"x","tokens":["a"],"trace":[{"pos":0,"lhs":["NP_sequence"],"rhs":["NP"]}]})"
      "\n");
  EXPECT_THROW(read_sentences(foreign, bundled_grammar("cfg")), Error);
  EXPECT_THROW(read_sentences_file("/nonexistent/file.jsonl", bundled_grammar("cfg")), Error);
}

}  // namespace
}  // namespace tiers
