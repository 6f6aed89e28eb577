#pragma once

#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "grammar.hpp"
#include "lexer.hpp"
#include "node.hpp"

namespace deltaforge {

struct ParseOptions {
  /// Productions implementing one of these interfaces parse their referenced
  /// elements in relaxed mode (used for bracketed element identifiers).
  std::set<std::string> relaxed_interfaces{"ModelElementIdentifier"};
};

namespace detail {

/// Memoizing recursive-descent interpreter over a FlatGrammar. Inside one
/// production the rhs is matched with full backtracking (continuation
/// passing); a production call itself commits to its first full match, so
/// alternatives and interface implementors behave as PEG ordered choice.
class GrammarParser {
public:
  GrammarParser(const FlatGrammar& g, const std::vector<Token>& tokens, ParseOptions options)
      : g_(g), tokens_(tokens), options_(std::move(options)) {}

  Node parse(const std::string& start, bool relaxed) {
    if (!g_.has(start)) throw GrammarError("unknown start production '" + start + "'", g_.root);
    const auto& r = nonterminal(start, 0, relaxed);
    if (r.ok && r.end == tokens_.size()) return r.node;
    if (r.ok) note_failure(r.end, "end of input");
    throw error();
  }

private:
  using Trail = std::vector<std::pair<std::string, Node>>;
  using Cont = std::function<bool(std::size_t)>;

  struct Result {
    bool ok = false;
    std::size_t end = 0;
    Node node;
  };

  struct Key {
    const std::string* name;
    std::size_t pos;
    bool relaxed;
    bool operator==(const Key& o) const { return *name == *o.name && pos == o.pos && relaxed == o.relaxed; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<std::string>()(*k.name) ^ (k.pos * 0x9e3779b97f4a7c15ULL) ^ (k.relaxed ? 0x5bd1e995 : 0);
    }
  };

  struct Context {
    Trail& trail;
    bool relax_refs;
  };

  const Result& nonterminal(const std::string& name, std::size_t pos, bool relaxed) {
    const std::string* stable = &*names_.insert(name).first;
    Key key{stable, pos, relaxed};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    Result r;
    if (name == kNameToken) {
      if (pos < tokens_.size() && tokens_[pos].kind == Token::Kind::identifier) {
        r.ok = true;
        r.end = pos + 1;
        r.node = Node::token(tokens_[pos].text, span(pos, pos + 1));
      } else {
        note_failure(pos, "Name");
      }
      return memo_[key] = std::move(r);
    }

    const auto* p = g_.find(name);
    if (p->is_interface()) {
      for (const auto& impl : g_.implementors_of(name)) {
        const auto& sub = nonterminal(impl, pos, relaxed);
        if (sub.ok) {
          r = sub;
          break;
        }
      }
      return memo_[key] = std::move(r);
    }

    bool relax_refs = false;
    for (const auto& iface : p->implements) relax_refs = relax_refs || options_.relaxed_interfaces.count(iface);

    Trail trail;
    Context ctx{trail, relax_refs};
    std::size_t end = pos;
    r.ok = match(*p->rhs, pos, relaxed, ctx, [&](std::size_t e) {
      end = e;
      return true;
    });
    if (r.ok) {
      r.end = end;
      r.node.production = name;
      r.node.span = span(pos, end);
      for (const auto& info : g_.slots(name)) r.node.slots.push_back(Slot{info.key, info.card, {}});
      for (auto& [k, child] : trail) r.node.slot(k)->values.push_back(std::move(child));
    }
    return memo_[key] = std::move(r);
  }

  bool match(const Rhs& e, std::size_t pos, bool relax, Context& ctx, const Cont& k) {
    using K = Rhs::Kind;
    switch (e.kind) {
      case K::terminal:
        if (pos < tokens_.size() && token_matches(tokens_[pos], e.text)) return k(pos + 1);
        note_failure(pos, "\"" + e.text + "\"");
        return false;
      case K::nonterminal:
        return reference(e, pos, ctx, k);
      case K::sequence:
        return sequence(e.items, 0, pos, relax, ctx, k);
      case K::alternative:
        for (const auto& branch : e.items)
          if (match(branch, pos, relax, ctx, k)) return true;
        return false;
      case K::group:
        return group(e, pos, ctx, k);
    }
    return false;
  }

  bool reference(const Rhs& e, std::size_t pos, Context& ctx, const Cont& k) {
    bool relaxed = ctx.relax_refs && e.text != kNameToken;
    const auto& r = nonterminal(e.text, pos, relaxed);
    if (!r.ok) return false;
    ctx.trail.emplace_back(e.slot_key(), r.node);
    if (k(r.end)) return true;
    ctx.trail.pop_back();
    return false;
  }

  bool sequence(const std::vector<Rhs>& items, std::size_t i, std::size_t pos, bool relax, Context& ctx,
                const Cont& k) {
    if (i == items.size()) return k(pos);
    if (match(items[i], pos, false, ctx, [&](std::size_t p) { return sequence(items, i + 1, p, relax, ctx, k); }))
      return true;
    if (relax && skippable_tail(items, i)) return k(pos);
    return false;
  }

  // Relaxed fragments may stop before a trailing ";" or a trailing
  // optional/alternative suffix.
  static bool skippable_tail(const std::vector<Rhs>& items, std::size_t from) {
    for (std::size_t j = from; j < items.size(); ++j) {
      const auto& it = items[j];
      bool ok = (it.is_terminal() && it.text == ";") || it.kind == Rhs::Kind::alternative ||
                (it.kind == Rhs::Kind::group && it.card != Cardinality::plus);
      if (!ok) return false;
    }
    return true;
  }

  bool group(const Rhs& e, std::size_t pos, Context& ctx, const Cont& k) {
    const auto& body = e.body();
    switch (e.card) {
      case Cardinality::optional:
        return match(body, pos, false, ctx, k) || k(pos);
      case Cardinality::star:
        return body.is_ref() ? repeat_ref(body, pos, 0, ctx, k) : repeat(body, pos, ctx, k);
      case Cardinality::plus:
        if (body.is_ref()) return repeat_ref(body, pos, 1, ctx, k);
        return match(body, pos, false, ctx, [&](std::size_t p) { return repeat(body, p, ctx, k); });
      default:
        return match(body, pos, false, ctx, k);
    }
  }

  bool repeat(const Rhs& body, std::size_t pos, Context& ctx, const Cont& k) {
    if (match(body, pos, false, ctx, [&](std::size_t p) { return p != pos && repeat(body, p, ctx, k); }))
      return true;
    return k(pos);
  }

  // Iterative greedy repetition of a single reference, backing off one
  // element at a time; keeps the stack flat for long element lists.
  bool repeat_ref(const Rhs& ref, std::size_t pos, std::size_t at_least, Context& ctx, const Cont& k) {
    bool relaxed = ctx.relax_refs && ref.text != kNameToken;
    std::vector<std::size_t> ends{pos};
    std::size_t mark = ctx.trail.size();
    while (true) {
      const auto& r = nonterminal(ref.text, ends.back(), relaxed);
      if (!r.ok || r.end == ends.back()) break;
      ctx.trail.emplace_back(ref.slot_key(), r.node);
      ends.push_back(r.end);
    }
    for (std::size_t n = ends.size() - 1;; --n) {
      if (n < at_least) break;
      ctx.trail.resize(mark + n);
      if (k(ends[n])) return true;
      if (n == 0) break;
    }
    ctx.trail.resize(mark);
    return false;
  }

  static bool token_matches(const Token& t, const std::string& terminal) {
    if (is_identifier(terminal)) return t.kind == Token::Kind::identifier && t.text == terminal;
    return t.kind == Token::Kind::punctuation && t.text == terminal;
  }

  Span span(std::size_t begin, std::size_t end) const {
    Span s{begin, end, 0, 0};
    if (begin < tokens_.size()) {
      s.line = tokens_[begin].line;
      s.column = tokens_[begin].column;
    } else if (!tokens_.empty()) {
      s.line = tokens_.back().line;
      s.column = tokens_.back().column + static_cast<int>(tokens_.back().text.size());
    } else {
      s.line = s.column = 1;
    }
    return s;
  }

  void note_failure(std::size_t pos, std::string expected) {
    if (pos > farthest_) {
      farthest_ = pos;
      expected_.clear();
    }
    if (pos == farthest_) expected_.insert(std::move(expected));
  }

  ParseError error() const {
    auto where = span(farthest_, farthest_);
    std::string found = farthest_ < tokens_.size() ? "'" + tokens_[farthest_].text + "'" : "end of input";
    std::vector<std::string> expected(expected_.begin(), expected_.end());
    std::string message = "unexpected " + found;
    if (!expected.empty()) {
      message += ", expected one of:";
      for (const auto& e : expected) message += " " + e;
    }
    return ParseError(message, SourcePos{where.line, where.column}, expected);
  }

  const FlatGrammar& g_;
  const std::vector<Token>& tokens_;
  ParseOptions options_;
  std::set<std::string> names_;
  std::unordered_map<Key, Result, KeyHash> memo_;
  std::size_t farthest_ = 0;
  std::set<std::string> expected_;
};

}  // namespace detail

/// Parses `text` as one complete `start` under the grammar. The whole token
/// stream must be consumed; failures report the farthest position reached.
inline Node parse(const FlatGrammar& g, const std::string& start, std::string_view text,
                  const ParseOptions& options = {}) {
  auto tokens = tokenize(text, punctuation_for(g));
  return detail::GrammarParser(g, tokens, options).parse(start, false);
}

/// Parses a single instance of a production. With `relaxed_tail`, a trailing
/// ";" and trailing optional or alternative parts may be left out, as in the
/// bracketed `[Idle -> Call]` form.
inline Node parse_fragment(const FlatGrammar& g, const std::string& production, std::string_view text,
                           bool relaxed_tail, const ParseOptions& options = {}) {
  auto tokens = tokenize(text, punctuation_for(g));
  return detail::GrammarParser(g, tokens, options).parse(production, relaxed_tail);
}

}  // namespace deltaforge
