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

#ifndef TIERS_BUNDLED_HPP_
#define TIERS_BUNDLED_HPP_

#include <string>
#include <string_view>

#include "tiers/bundled_documents.hpp"
#include "tiers/error.hpp"
#include "tiers/grammar.hpp"
#include "tiers/lexicon.hpp"

namespace tiers {

inline std::string_view bundled_document(std::string_view id) {
  if (id == "cfg") return documents::kCfgGrammar;
  if (id == "ixg") return documents::kIxgGrammar;
  if (id == "csg") return documents::kCsgGrammar;
  if (id == "english") return documents::kEnglishLexicon;
  if (id == "mini") return documents::kMiniLexicon;
  throw Error(ErrorKind::kPrecondition, "no bundled document " + std::string(id));
}

inline const Lexicon& english_lexicon() {
  static const Lexicon lexicon = Lexicon::parse(documents::kEnglishLexicon);
  return lexicon;
}

inline const Lexicon& mini_lexicon() {
  static const Lexicon lexicon = Lexicon::parse(documents::kMiniLexicon);
  return lexicon;
}

// Bundled grammar bound to `lexicon`.
inline Grammar bundled_grammar(std::string_view id, const Lexicon& lexicon) {
  if (id != "cfg" && id != "ixg" && id != "csg") {
    throw Error(ErrorKind::kPrecondition, "no bundled grammar " + std::string(id));
  }
  return load_grammar(bundled_document(id), lexicon);
}

inline const Grammar& bundled_grammar(std::string_view id) {
  static const Grammar cfg = bundled_grammar("cfg", english_lexicon());
  static const Grammar ixg = bundled_grammar("ixg", english_lexicon());
  static const Grammar csg = bundled_grammar("csg", english_lexicon());
  if (id == "cfg") return cfg;
  if (id == "ixg") return ixg;
  if (id == "csg") return csg;
  throw Error(ErrorKind::kPrecondition, "no bundled grammar " + std::string(id));
}

inline const Grammar& bundled_grammar(Tier tier) {
  switch (tier) {
    case Tier::kCfg: return bundled_grammar("cfg");
    case Tier::kIxg: return bundled_grammar("ixg");
    case Tier::kCsg: return bundled_grammar("csg");
  }
  return bundled_grammar("cfg");
}

}  // namespace tiers

#endif  // TIERS_BUNDLED_HPP_
