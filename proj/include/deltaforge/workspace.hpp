#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "assets.hpp"
#include "derivation.hpp"
#include "grammar.hpp"
#include "grammar_reader.hpp"

namespace deltaforge {

inline Grammar read_grammar_file(const std::filesystem::path& path) {
  return parse_grammar(detail::read_file(path), path.string());
}

/// Flattens `grammars` rooted at the first one. A DeltaCommon grammar that
/// is extended but not supplied is taken from the bundled assets.
inline FlatGrammar flatten_all(std::vector<Grammar> grammars) {
  if (grammars.empty()) throw GrammarError("no grammar given");
  bool have_common = false;
  bool need_common = false;
  for (const auto& g : grammars) {
    have_common = have_common || g.name == kDeltaCommon;
    for (const auto& e : g.extends) need_common = need_common || e == kDeltaCommon;
  }
  if (need_common && !have_common) grammars.push_back(delta_common_grammar());
  auto root = grammars.front().name;
  return flatten(grammars, root);
}

/// First concrete production of the root grammar: the default start symbol.
inline std::string default_start(const FlatGrammar& g) {
  for (const auto& p : g.productions)
    if (!p.is_interface() && g.origin.at(p.name) == g.root) return p.name;
  for (const auto& p : g.productions)
    if (!p.is_interface()) return p.name;
  throw GrammarError("grammar '" + g.root + "' has no concrete production", g.root);
}

}  // namespace deltaforge
