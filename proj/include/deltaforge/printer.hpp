#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "grammar.hpp"
#include "node.hpp"

namespace deltaforge {

namespace detail {

struct Piece {
  std::string text;
  bool starts_element = false;  // first token of a star/plus slot child
};

/// Walks a production's rhs against a node's slots and picks, at every
/// choice point, the first option that accounts for all slot values.
class TreePrinter {
public:
  explicit TreePrinter(const FlatGrammar& g) : g_(g) {}

  void print(const Node& n, std::vector<Piece>& out) {
    if (n.is_token()) {
      out.push_back({n.text});
      return;
    }
    const auto* p = g_.find(n.production);
    if (!p || !p->rhs) throw std::invalid_argument("cannot print node of unknown production '" + n.production + "'");
    State st{&n, std::vector<std::size_t>(n.slots.size(), 0), {}};
    bool ok = emit(*p->rhs, st, [&](State& done) {
      for (std::size_t i = 0; i < n.slots.size(); ++i)
        if (done.cursor[i] != n.slots[i].values.size()) return false;
      out.insert(out.end(), done.pieces.begin(), done.pieces.end());
      return true;
    });
    if (!ok) throw std::invalid_argument("node of '" + n.production + "' does not fit its production");
  }

private:
  struct State {
    const Node* node;
    std::vector<std::size_t> cursor;
    std::vector<Piece> pieces;
  };
  using Cont = std::function<bool(State&)>;

  static std::size_t consumed(const State& st) {
    std::size_t total = 0;
    for (auto c : st.cursor) total += c;
    return total;
  }

  static bool has_refs(const Rhs& e) {
    if (e.is_ref()) return true;
    for (const auto& c : e.items)
      if (has_refs(c)) return true;
    return false;
  }

  bool emit(const Rhs& e, State& st, const Cont& k) {
    using K = Rhs::Kind;
    switch (e.kind) {
      case K::terminal:
        st.pieces.push_back({e.text});
        return k(st);
      case K::nonterminal: {
        const auto& slots = st.node->slots;
        std::size_t i = 0;
        while (i < slots.size() && slots[i].key != e.slot_key()) ++i;
        if (i == slots.size() || st.cursor[i] >= slots[i].values.size()) return false;
        const auto& value = slots[i].values[st.cursor[i]];
        if (!g_.conforms(value.production, e.text) && e.text != kNameToken) return false;
        ++st.cursor[i];
        std::size_t first = st.pieces.size();
        print(value, st.pieces);
        if (is_multi(slots[i].card) && first < st.pieces.size()) st.pieces[first].starts_element = true;
        return k(st);
      }
      case K::sequence:
        return sequence(e.items, 0, st, k);
      case K::alternative: {
        // A branch that prints slot values wins over one that only fits
        // because its repetitions are empty, and a plain branch wins over an
        // empty one, so `x;` beats `x { }`.
        std::size_t before = consumed(st);
        for (const auto& b : e.items) {
          State copy = st;
          if (emit(b, copy, [&](State& next) { return consumed(next) > before && k(next); })) return true;
        }
        for (int pass = 0; pass < 2; ++pass)
          for (const auto& b : e.items) {
            if (has_refs(b) != (pass == 1)) continue;
            State copy = st;
            if (emit(b, copy, k)) return true;
          }
        return false;
      }
      case K::group:
        return group(e, st, k);
    }
    return false;
  }

  bool sequence(const std::vector<Rhs>& items, std::size_t i, State& st, const Cont& k) {
    if (i == items.size()) return k(st);
    return emit(items[i], st, [&](State& next) { return sequence(items, i + 1, next, k); });
  }

  bool group(const Rhs& e, State& st, const Cont& k) {
    const auto& body = e.body();
    if (!has_refs(body)) {
      if (e.card == Cardinality::plus) return emit(body, st, k);
      return k(st);
    }
    switch (e.card) {
      case Cardinality::optional: {
        State copy = st;
        std::size_t before = consumed(st);
        if (emit(body, copy, [&](State& next) { return consumed(next) > before && k(next); })) return true;
        return k(st);
      }
      case Cardinality::star:
        return repeat(body, st, k);
      case Cardinality::plus: {
        State copy = st;
        return emit(body, copy, [&](State& next) { return repeat(body, next, k); });
      }
      default:
        return emit(body, st, k);
    }
  }

  bool repeat(const Rhs& body, State& st, const Cont& k) {
    State copy = st;
    std::size_t before = consumed(st);
    if (emit(body, copy, [&](State& next) { return consumed(next) > before && repeat(body, next, k); }))
      return true;
    return k(st);
  }

  const FlatGrammar& g_;
};

inline bool glue_left(const std::string& t) {
  return t == ";" || t == "," || t == "." || t == "(" || t == ")" || t == "]";
}

inline bool glue_right(const std::string& t) { return t == "(" || t == "[" || t == "." || t == "!"; }

inline std::string layout(const std::vector<Piece>& pieces) {
  std::string out;
  int depth = 0;
  bool line_start = true;
  std::string prev;
  auto newline = [&] {
    if (!line_start) out += '\n';
    line_start = true;
  };
  auto write = [&](const std::string& t) {
    if (line_start) out.append(static_cast<std::size_t>(2 * depth), ' ');
    else if (!glue_left(t) && !glue_right(prev)) out += ' ';
    out += t;
    line_start = false;
    prev = t;
  };
  for (const auto& p : pieces) {
    if (p.text == "}") {
      if (depth > 0) --depth;
      newline();
      write(p.text);
      continue;
    }
    if (p.starts_element && depth > 0 && (prev == "{" || prev == ";" || prev == "}")) newline();
    write(p.text);
    if (p.text == "{") {
      ++depth;
      newline();
    }
  }
  if (!line_start) out += '\n';
  return out;
}

}  // namespace detail

/// Renders a tree in the concrete syntax of its grammar. Blocks opened by
/// "{" are indented by two spaces and each block element starts a line.
inline std::string pretty_print(const FlatGrammar& g, const Node& node) {
  std::vector<detail::Piece> pieces;
  detail::TreePrinter(g).print(node, pieces);
  return detail::layout(pieces);
}

/// Single-line rendering, used for fragments in messages.
inline std::string print_inline(const FlatGrammar& g, const Node& node) {
  std::vector<detail::Piece> pieces;
  detail::TreePrinter(g).print(node, pieces);
  std::string out;
  std::string prev;
  for (const auto& p : pieces) {
    if (!out.empty() && !detail::glue_left(p.text) && !detail::glue_right(prev)) out += ' ';
    out += p.text;
    prev = p.text;
  }
  return out;
}

}  // namespace deltaforge
