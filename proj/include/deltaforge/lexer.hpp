#pragma once

#include <algorithm>
#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "grammar.hpp"

namespace deltaforge {

struct Token {
  enum class Kind { identifier, punctuation };

  Kind kind = Kind::identifier;
  std::string text;
  int line = 1;
  int column = 1;

  friend bool operator==(const Token&, const Token&) = default;
};

inline const std::set<std::string>& default_punctuation() {
  static const std::set<std::string> set{"{", "}", "[", "]", "(", ")", ";", ":", ".", ",",
                                         "->", "!", "&&", "||", "?"};
  return set;
}

/// Punctuation for a grammar: the fixed set plus every terminal literal that
/// is not identifier-shaped. Identifier-shaped terminals stay keywords that
/// are matched contextually by the parser.
inline std::set<std::string> punctuation_for(const FlatGrammar& g) {
  auto set = default_punctuation();
  for (const auto& t : g.terminals())
    if (!is_identifier(t)) set.insert(t);
  return set;
}

/// Splits text into identifier and punctuation tokens; whitespace, `//` and
/// `/* */` comments are dropped. Punctuation uses maximal munch.
inline std::vector<Token> tokenize(std::string_view text,
                                   const std::set<std::string>& punctuation = default_punctuation()) {
  std::vector<Token> out;
  std::size_t longest = 0;
  for (const auto& p : punctuation) longest = std::max(longest, p.size());

  std::size_t i = 0;
  int line = 1;
  int col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < text.size()) {
    auto c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (text.substr(i, 2) == "//") {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (text.substr(i, 2) == "/*") {
      SourcePos start{line, col};
      auto end = text.find("*/", i + 2);
      if (end == std::string_view::npos) throw ParseError("unterminated comment", start);
      advance(end + 2 - i);
      continue;
    }
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      out.push_back({Token::Kind::identifier, std::string(text.substr(i, j - i)), line, col});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (std::size_t len = std::min(longest, text.size() - i); len > 0; --len) {
      std::string candidate(text.substr(i, len));
      if (punctuation.count(candidate)) {
        out.push_back({Token::Kind::punctuation, candidate, line, col});
        advance(len);
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw ParseError(std::string("illegal character '") + text[i] + "'", SourcePos{line, col});
    }
  }
  return out;
}

}  // namespace deltaforge
