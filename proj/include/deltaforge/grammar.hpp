#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"

namespace deltaforge {

/// The only lexical nonterminal: an identifier token.
inline constexpr std::string_view kNameToken = "Name";

/// Marker in last_terminals() for derivations that end in a Name token.
inline constexpr std::string_view kNoTerminal = "<NONE>";

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = static_cast<unsigned char>(s.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_';
  });
}

enum class Cardinality { one, optional, star, plus };

inline bool is_multi(Cardinality c) { return c == Cardinality::star || c == Cardinality::plus; }

inline const char* suffix(Cardinality c) {
  switch (c) {
    case Cardinality::optional: return "?";
    case Cardinality::star: return "*";
    case Cardinality::plus: return "+";
    default: return "";
  }
}

inline const char* to_string(Cardinality c) {
  switch (c) {
    case Cardinality::one: return "one";
    case Cardinality::optional: return "optional";
    case Cardinality::star: return "star";
    default: return "plus";
  }
}

/// Right-hand side expression. Constructed through the factory functions,
/// which keep the tree in canonical form: no single-item sequences or
/// single-branch alternatives, nested sequences (alternatives) spliced into
/// their parent, and groups only where a cardinality other than one applies.
struct Rhs {
  enum class Kind { terminal, nonterminal, sequence, alternative, group };

  Kind kind = Kind::terminal;
  std::string text;   // terminal literal, or referenced nonterminal
  std::string label;  // nonterminal label; empty when unlabeled
  Cardinality card = Cardinality::one;
  std::vector<Rhs> items;  // sequence items, alternative branches, group body

  static Rhs terminal(std::string literal) {
    Rhs r;
    r.kind = Kind::terminal;
    r.text = std::move(literal);
    return r;
  }

  static Rhs ref(std::string target, std::string label = {}) {
    Rhs r;
    r.kind = Kind::nonterminal;
    r.text = std::move(target);
    r.label = std::move(label);
    return r;
  }

  static Rhs sequence(std::vector<Rhs> parts) { return splice(Kind::sequence, std::move(parts)); }
  static Rhs alternative(std::vector<Rhs> branches) { return splice(Kind::alternative, std::move(branches)); }

  static Rhs group(Rhs inner, Cardinality c) {
    if (c == Cardinality::one) return inner;
    Rhs r;
    r.kind = Kind::group;
    r.card = c;
    r.items.push_back(std::move(inner));
    return r;
  }

  bool is_terminal() const { return kind == Kind::terminal; }
  bool is_ref() const { return kind == Kind::nonterminal; }
  const Rhs& body() const { return items.front(); }

  /// Slot key a reference fills in a parse tree: its label, else its target.
  const std::string& slot_key() const { return label.empty() ? text : label; }

private:
  static Rhs splice(Kind kind, std::vector<Rhs> parts) {
    std::vector<Rhs> flat;
    for (auto& p : parts) {
      if (p.kind == kind) {
        for (auto& q : p.items) flat.push_back(std::move(q));
      } else {
        flat.push_back(std::move(p));
      }
    }
    if (flat.size() == 1) return std::move(flat.front());
    Rhs r;
    r.kind = kind;
    r.items = std::move(flat);
    return r;
  }
};

inline bool operator==(const Rhs& a, const Rhs& b) {
  return a.kind == b.kind && a.text == b.text && a.label == b.label && a.card == b.card && a.items == b.items;
}

enum class ProductionKind { interface, concrete };

struct Production {
  std::string name;
  ProductionKind kind = ProductionKind::concrete;
  std::vector<std::string> implements;
  std::optional<Rhs> rhs;  // absent for interfaces

  bool is_interface() const { return kind == ProductionKind::interface; }

  friend bool operator==(const Production&, const Production&) = default;
};

struct Grammar {
  std::string name;
  std::vector<std::string> extends;
  std::vector<Production> productions;
  std::string source;  // file path or label; not part of equality

  const Production* find(std::string_view n) const {
    auto it = std::find_if(productions.begin(), productions.end(), [&](const Production& p) { return p.name == n; });
    return it == productions.end() ? nullptr : &*it;
  }

  friend bool operator==(const Grammar& a, const Grammar& b) {
    return a.name == b.name && a.extends == b.extends && a.productions == b.productions;
  }
};

/// One distinct slot of a production: every reference sharing a key lands in
/// the same slot, and the cardinality summarises all of its occurrences.
struct SlotInfo {
  std::string key;
  std::string target;
  Cardinality card = Cardinality::one;
};

namespace detail {

struct Occurrence {
  int min = 0;
  int max = 0;  // 2 stands for "unbounded"
};

inline void collect_slots(const Rhs& e, std::vector<std::string>& order,
                          std::map<std::string, std::string>& targets, std::map<std::string, Occurrence>& out) {
  using K = Rhs::Kind;
  switch (e.kind) {
    case K::terminal:
      return;
    case K::nonterminal: {
      const auto& key = e.slot_key();
      if (!targets.count(key)) {
        order.push_back(key);
        targets[key] = e.text;
      }
      auto& o = out[key];
      o.min += 1;
      o.max = std::min(2, o.max + 1);
      return;
    }
    case K::sequence:
      for (const auto& item : e.items) {
        std::map<std::string, Occurrence> part;
        collect_slots(item, order, targets, part);
        for (auto& [k, o] : part) {
          auto& acc = out[k];
          acc.min += o.min;
          acc.max = std::min(2, acc.max + o.max);
        }
      }
      return;
    case K::alternative: {
      std::vector<std::map<std::string, Occurrence>> branches;
      std::set<std::string> keys;
      for (const auto& b : e.items) {
        branches.emplace_back();
        collect_slots(b, order, targets, branches.back());
        for (auto& [k, o] : branches.back()) keys.insert(k);
      }
      for (const auto& k : keys) {
        Occurrence merged{2, 0};
        for (auto& b : branches) {
          auto it = b.find(k);
          Occurrence o = it == b.end() ? Occurrence{} : it->second;
          merged.min = std::min(merged.min, o.min);
          merged.max = std::max(merged.max, o.max);
        }
        auto& acc = out[k];
        acc.min += merged.min;
        acc.max = std::min(2, acc.max + merged.max);
      }
      return;
    }
    case K::group: {
      std::map<std::string, Occurrence> inner;
      collect_slots(e.body(), order, targets, inner);
      for (auto& [k, o] : inner) {
        if (e.card != Cardinality::plus) o.min = 0;
        if (is_multi(e.card) && o.max > 0) o.max = 2;
        auto& acc = out[k];
        acc.min += o.min;
        acc.max = std::min(2, acc.max + o.max);
      }
      return;
    }
  }
}

}  // namespace detail

/// Distinct slots of a concrete production in first-occurrence order.
inline std::vector<SlotInfo> analyze_slots(const Production& p) {
  std::vector<SlotInfo> result;
  if (!p.rhs) return result;
  std::vector<std::string> order;
  std::map<std::string, std::string> targets;
  std::map<std::string, detail::Occurrence> occ;
  detail::collect_slots(*p.rhs, order, targets, occ);
  for (const auto& key : order) {
    auto o = occ[key];
    Cardinality c;
    if (o.max >= 2) c = o.min >= 1 ? Cardinality::plus : Cardinality::star;
    else c = o.min >= 1 ? Cardinality::one : Cardinality::optional;
    result.push_back({key, targets[key], c});
  }
  return result;
}

/// Every labeled reference in rhs order; repeated labels appear repeatedly.
inline std::vector<std::pair<std::string, std::string>> labeled_refs(const Production& p) {
  std::vector<std::pair<std::string, std::string>> out;
  auto walk = [&](auto&& self, const Rhs& e) -> void {
    if (e.is_ref()) {
      if (!e.label.empty()) out.emplace_back(e.label, e.text);
      return;
    }
    for (const auto& c : e.items) self(self, c);
  };
  if (p.rhs) walk(walk, *p.rhs);
  return out;
}

/// True when every complete derivation of the production carries a
/// mandatory `name:Name` (or `name:QualifiedModelElementName`) reference.
inline bool is_addressable_by_name(const Production& p) {
  if (p.is_interface() || !p.rhs) return false;
  auto must = [](auto&& self, const Rhs& e) -> bool {
    using K = Rhs::Kind;
    switch (e.kind) {
      case K::terminal: return false;
      case K::nonterminal:
        return e.label == "name" && (e.text == kNameToken || e.text == "QualifiedModelElementName");
      case K::sequence:
        return std::any_of(e.items.begin(), e.items.end(), [&](const Rhs& i) { return self(self, i); });
      case K::alternative:
        return std::all_of(e.items.begin(), e.items.end(), [&](const Rhs& i) { return self(self, i); });
      case K::group:
        return e.card == Cardinality::plus && self(self, e.body());
    }
    return false;
  };
  return must(must, *p.rhs);
}

/// A production table with an extends chain merged into it.
struct FlatGrammar {
  std::string root;
  std::vector<Production> productions;  // linearized, root grammar first
  std::map<std::string, std::vector<std::string>> implementors;
  std::map<std::string, std::string> origin;  // production -> defining grammar

  const Production* find(std::string_view n) const {
    auto it = index_.find(std::string(n));
    return it == index_.end() ? nullptr : &productions[it->second];
  }

  bool has(std::string_view n) const { return n == kNameToken || find(n) != nullptr; }

  bool is_interface(std::string_view n) const {
    const auto* p = find(n);
    return p && p->is_interface();
  }

  /// True when a node of `concrete` may fill a reference to `target`.
  bool conforms(std::string_view concrete, std::string_view target) const {
    if (concrete == target) return true;
    const auto* p = find(concrete);
    if (!p) return false;
    return std::find(p->implements.begin(), p->implements.end(), target) != p->implements.end();
  }

  const std::vector<std::string>& implementors_of(std::string_view iface) const {
    static const std::vector<std::string> none;
    auto it = implementors.find(std::string(iface));
    return it == implementors.end() ? none : it->second;
  }

  const std::vector<SlotInfo>& slots(std::string_view n) const {
    static const std::vector<SlotInfo> none;
    auto it = slots_.find(std::string(n));
    return it == slots_.end() ? none : it->second;
  }

  const SlotInfo* slot(std::string_view production, std::string_view key) const {
    for (const auto& s : slots(production))
      if (s.key == key) return &s;
    return nullptr;
  }

  /// Terminal literals used anywhere in the grammar.
  std::set<std::string> terminals() const {
    std::set<std::string> out;
    auto walk = [&](auto&& self, const Rhs& e) -> void {
      if (e.is_terminal()) out.insert(e.text);
      for (const auto& c : e.items) self(self, c);
    };
    for (const auto& p : productions)
      if (p.rhs) walk(walk, *p.rhs);
    return out;
  }

  void reindex() {
    index_.clear();
    slots_.clear();
    for (std::size_t i = 0; i < productions.size(); ++i) {
      index_[productions[i].name] = i;
      if (!productions[i].is_interface()) slots_[productions[i].name] = analyze_slots(productions[i]);
    }
  }

private:
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_map<std::string, std::vector<SlotInfo>> slots_;
};

namespace detail {

inline bool nullable(const Rhs& e, const std::map<std::string, bool>& table) {
  using K = Rhs::Kind;
  switch (e.kind) {
    case K::terminal: return false;
    case K::nonterminal: {
      auto it = table.find(e.text);
      return it != table.end() && it->second;
    }
    case K::sequence:
      return std::all_of(e.items.begin(), e.items.end(), [&](const Rhs& i) { return nullable(i, table); });
    case K::alternative:
      return std::any_of(e.items.begin(), e.items.end(), [&](const Rhs& i) { return nullable(i, table); });
    case K::group:
      return e.card != Cardinality::plus || nullable(e.body(), table);
  }
  return false;
}

inline std::map<std::string, bool> nullable_table(const FlatGrammar& g) {
  std::map<std::string, bool> table;
  for (const auto& p : g.productions) table[p.name] = false;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      if (table[p.name]) continue;
      bool n = false;
      if (p.is_interface()) {
        for (const auto& impl : g.implementors_of(p.name)) n = n || table[impl];
      } else {
        n = nullable(*p.rhs, table);
      }
      if (n) {
        table[p.name] = true;
        changed = true;
      }
    }
  }
  return table;
}

// Nonterminals reachable in leftmost position, i.e. after a nullable prefix.
inline void leftmost(const Rhs& e, const std::map<std::string, bool>& nulls, std::set<std::string>& out) {
  using K = Rhs::Kind;
  switch (e.kind) {
    case K::terminal: return;
    case K::nonterminal: out.insert(e.text); return;
    case K::sequence:
      for (const auto& i : e.items) {
        leftmost(i, nulls, out);
        if (!nullable(i, nulls)) return;
      }
      return;
    case K::alternative:
      for (const auto& i : e.items) leftmost(i, nulls, out);
      return;
    case K::group: leftmost(e.body(), nulls, out); return;
  }
}

inline void check_left_recursion(const FlatGrammar& g) {
  auto nulls = nullable_table(g);
  std::map<std::string, std::vector<std::string>> edges;
  for (const auto& p : g.productions) {
    std::set<std::string> firsts;
    if (p.is_interface()) {
      for (const auto& impl : g.implementors_of(p.name)) firsts.insert(impl);
    } else {
      leftmost(*p.rhs, nulls, firsts);
    }
    firsts.erase(std::string(kNameToken));
    edges[p.name].assign(firsts.begin(), firsts.end());
  }
  std::map<std::string, int> color;  // 0 new, 1 on stack, 2 done
  std::vector<std::string> stack;
  auto dfs = [&](auto&& self, const std::string& n) -> void {
    color[n] = 1;
    stack.push_back(n);
    for (const auto& m : edges[n]) {
      if (color[m] == 1) {
        auto start = std::find(stack.begin(), stack.end(), m);
        std::string cycle;
        for (auto it = start; it != stack.end(); ++it) cycle += *it + " -> ";
        throw GrammarError("left recursion detected: " + cycle + m, g.root);
      }
      if (color[m] == 0) self(self, m);
    }
    stack.pop_back();
    color[n] = 2;
  };
  for (const auto& p : g.productions)
    if (color[p.name] == 0) dfs(dfs, p.name);
}

inline void check_refs(const FlatGrammar& g) {
  auto walk = [&](auto&& self, const Rhs& e, const std::string& owner) -> void {
    if (e.is_ref() && !g.has(e.text))
      throw GrammarError("unresolved nonterminal '" + e.text + "' in production '" + owner + "'",
                         g.origin.count(owner) ? g.origin.at(owner) : g.root);
    for (const auto& c : e.items) self(self, c, owner);
  };
  for (const auto& p : g.productions) {
    if (p.rhs) walk(walk, *p.rhs, p.name);
    for (const auto& iface : p.implements) {
      const auto* target = g.find(iface);
      if (!target) throw GrammarError("'" + p.name + "' implements unknown interface '" + iface + "'", g.origin.at(p.name));
      if (!target->is_interface())
        throw GrammarError("'" + p.name + "' implements '" + iface + "', which is not an interface", g.origin.at(p.name));
    }
  }
}

}  // namespace detail

/// Merges the extends chain rooted at `root`. Grammars are linearized
/// depth-first in extends order; the first definition of a name wins, and
/// implementor lists accumulate in that same order.
inline FlatGrammar flatten(const std::vector<Grammar>& grammars, const std::string& root) {
  auto lookup = [&](const std::string& name) -> const Grammar& {
    for (const auto& g : grammars)
      if (g.name == name) return g;
    throw GrammarError("unresolved grammar '" + name + "'");
  };

  std::vector<const Grammar*> order;
  std::set<std::string> seen;
  auto visit = [&](auto&& self, const std::string& name) -> void {
    if (!seen.insert(name).second) return;
    const auto& g = lookup(name);
    order.push_back(&g);
    for (const auto& parent : g.extends) self(self, parent);
  };
  visit(visit, root);

  FlatGrammar flat;
  flat.root = root;
  std::map<std::string, std::size_t> position;
  for (const auto* g : order) {
    for (const auto& p : g->productions) {
      auto it = position.find(p.name);
      if (it == position.end()) {
        position[p.name] = flat.productions.size();
        flat.productions.push_back(p);
        flat.origin[p.name] = g->name;
        continue;
      }
      const auto& winner = flat.productions[it->second];
      if (winner.kind != p.kind)
        throw GrammarError("production '" + p.name + "' in '" + flat.origin[p.name] + "' overrides " +
                               (p.is_interface() ? "an interface" : "a concrete production") + " of '" + g->name +
                               "' with a different kind",
                           flat.origin[p.name]);
    }
  }

  for (const auto* g : order) {
    for (const auto& p : g->productions) {
      if (flat.origin[p.name] != g->name) continue;
      for (const auto& iface : p.implements) {
        auto& list = flat.implementors[iface];
        if (std::find(list.begin(), list.end(), p.name) == list.end()) list.push_back(p.name);
      }
    }
  }
  for (const auto& p : flat.productions)
    if (p.is_interface()) flat.implementors[p.name];

  flat.reindex();
  detail::check_refs(flat);
  detail::check_left_recursion(flat);
  return flat;
}

/// Terminals that can be the final token of a complete derivation of the
/// production; kNoTerminal marks derivations ending in a Name token.
inline std::set<std::string> last_terminals(const FlatGrammar& g, std::string_view production) {
  auto nulls = detail::nullable_table(g);
  std::map<std::string, std::set<std::string>> table;
  table[std::string(kNameToken)] = {std::string(kNoTerminal)};

  auto last = [&](auto&& self, const Rhs& e, std::set<std::string>& out) -> void {
    using K = Rhs::Kind;
    switch (e.kind) {
      case K::terminal: out.insert(e.text); return;
      case K::nonterminal: {
        const auto& t = table[e.text];
        out.insert(t.begin(), t.end());
        return;
      }
      case K::sequence:
        for (auto it = e.items.rbegin(); it != e.items.rend(); ++it) {
          self(self, *it, out);
          if (!detail::nullable(*it, nulls)) return;
        }
        return;
      case K::alternative:
        for (const auto& b : e.items) self(self, b, out);
        return;
      case K::group: self(self, e.body(), out); return;
    }
  };

  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      std::set<std::string> next;
      if (p.is_interface()) {
        for (const auto& impl : g.implementors_of(p.name)) {
          const auto& t = table[impl];
          next.insert(t.begin(), t.end());
        }
      } else {
        last(last, *p.rhs, next);
      }
      auto& cur = table[p.name];
      if (next.size() != cur.size()) {
        cur.insert(next.begin(), next.end());
        changed = true;
      }
    }
  }
  return table[std::string(production)];
}

}  // namespace deltaforge
