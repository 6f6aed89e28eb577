#pragma once

#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "grammar.hpp"

namespace deltaforge {

namespace detail {

class GrammarReader {
public:
  GrammarReader(std::string_view text, std::string origin) : text_(text), origin_(std::move(origin)) {}

  Grammar read() {
    Grammar g;
    g.source = origin_;
    expect_word("grammar");
    g.name = identifier("grammar name");
    if (accept_word("extends")) {
      do {
        g.extends.push_back(identifier("grammar name"));
      } while (accept(","));
    }
    expect("{");
    std::set<std::string> names;
    while (!accept("}")) {
      auto pos = here();
      auto p = production();
      if (p.name == kNameToken) fail("'Name' is reserved for the builtin identifier token", pos);
      if (!names.insert(p.name).second) fail("duplicate production '" + p.name + "'", pos);
      g.productions.push_back(std::move(p));
    }
    skip_space();
    if (at_ < text_.size()) fail("unexpected text after grammar body");
    return g;
  }

private:
  Production production() {
    Production p;
    if (accept_word("interface")) {
      p.kind = ProductionKind::interface;
      p.name = identifier("interface name");
      expect(";");
      return p;
    }
    p.name = identifier("production name");
    if (accept_word("implements")) {
      do {
        p.implements.push_back(identifier("interface name"));
      } while (accept(","));
    }
    expect("=");
    p.rhs = alternative();
    expect(";");
    return p;
  }

  Rhs alternative() {
    std::vector<Rhs> branches;
    branches.push_back(sequence());
    while (accept("|")) branches.push_back(sequence());
    return Rhs::alternative(std::move(branches));
  }

  Rhs sequence() {
    std::vector<Rhs> items;
    while (true) {
      skip_space();
      char c = peek();
      if (c == '|' || c == ')' || c == ';' || c == '\0') break;
      items.push_back(item());
    }
    if (items.empty()) fail("expected a terminal, nonterminal or group");
    return Rhs::sequence(std::move(items));
  }

  Rhs item() {
    skip_space();
    char c = peek();
    if (c == '?' || c == '*' || c == '+') fail(std::string("cardinality '") + c + "' applied to nothing");
    Rhs atom;
    if (c == '"') {
      atom = Rhs::terminal(literal());
    } else if (c == '(') {
      ++at_;
      atom = alternative();
      expect(")");
    } else {
      auto first = identifier("nonterminal");
      if (accept(":")) {
        auto target = identifier("nonterminal after label");
        atom = Rhs::ref(std::move(target), std::move(first));
      } else {
        atom = Rhs::ref(std::move(first));
      }
    }
    while (true) {
      skip_space();
      char s = peek();
      Cardinality card;
      if (s == '?') card = Cardinality::optional;
      else if (s == '*') card = Cardinality::star;
      else if (s == '+') card = Cardinality::plus;
      else break;
      ++at_;
      atom = Rhs::group(std::move(atom), card);
    }
    return atom;
  }

  std::string literal() {
    auto pos = here();
    ++at_;
    std::string out;
    while (true) {
      if (at_ >= text_.size() || text_[at_] == '\n') fail("unterminated terminal literal", pos);
      char c = text_[at_++];
      if (c == '"') break;
      if (c == '\\') {
        if (at_ >= text_.size()) fail("unterminated terminal literal", pos);
        char e = text_[at_++];
        if (e != '"' && e != '\\') fail(std::string("unsupported escape '\\") + e + "'", pos);
        out += e;
        continue;
      }
      out += c;
    }
    if (out.empty()) fail("empty terminal literal", pos);
    return out;
  }

  std::string identifier(const char* what) {
    skip_space();
    std::size_t start = at_;
    while (at_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[at_])) || text_[at_] == '_')) ++at_;
    std::string id(text_.substr(start, at_ - start));
    if (!is_identifier(id)) {
      at_ = start;
      fail(std::string("expected ") + what);
    }
    return id;
  }

  bool accept_word(std::string_view w) {
    skip_space();
    if (text_.substr(at_, w.size()) != w) return false;
    std::size_t end = at_ + w.size();
    if (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
      return false;
    at_ = end;
    return true;
  }

  void expect_word(std::string_view w) {
    if (!accept_word(w)) fail("expected '" + std::string(w) + "'");
  }

  bool accept(std::string_view punct) {
    skip_space();
    if (text_.substr(at_, punct.size()) != punct) return false;
    at_ += punct.size();
    return true;
  }

  void expect(std::string_view punct) {
    if (!accept(punct)) fail("expected '" + std::string(punct) + "'");
  }

  char peek() const { return at_ < text_.size() ? text_[at_] : '\0'; }

  void skip_space() {
    while (at_ < text_.size()) {
      char c = text_[at_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++at_;
      } else if (text_.substr(at_, 2) == "//") {
        while (at_ < text_.size() && text_[at_] != '\n') ++at_;
      } else if (text_.substr(at_, 2) == "/*") {
        auto pos = here();
        auto end = text_.find("*/", at_ + 2);
        if (end == std::string_view::npos) fail("unterminated comment", pos);
        at_ = end + 2;
      } else {
        break;
      }
    }
  }

  SourcePos here() const {
    SourcePos pos{1, 1};
    for (std::size_t i = 0; i < at_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
    return pos;
  }

  [[noreturn]] void fail(const std::string& message) { fail(message, here()); }
  [[noreturn]] void fail(const std::string& message, SourcePos pos) { throw GrammarError(message, origin_, pos); }

  std::string_view text_;
  std::string origin_;
  std::size_t at_ = 0;
};

}  // namespace detail

/// Reads the `.dg` grammar format:
///
///   grammar Name (extends A, B)? { production* }
///   production := "interface" Name ";"
///               | Name ("implements" I, J)? "=" rhs ";"
///
/// rhs supports "literals", label:Target references, `|`, parentheses and
/// the ? * + suffixes.
inline Grammar parse_grammar(std::string_view text, std::string origin = "<input>") {
  return detail::GrammarReader(text, std::move(origin)).read();
}

}  // namespace deltaforge
