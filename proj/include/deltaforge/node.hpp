#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "grammar.hpp"

namespace deltaforge {

struct Span {
  std::size_t begin = 0;  // first token index
  std::size_t end = 0;    // one past the last token index
  int line = 0;
  int column = 0;
};

struct Node;

struct Slot {
  std::string key;
  Cardinality card = Cardinality::one;
  std::vector<Node> values;
};

/// Generic concrete-syntax tree node. Name tokens are leaves with
/// production "Name" and the token text; every other node carries one slot
/// per distinct key of its production, in grammar order, even when empty.
struct Node {
  std::string production;
  std::string text;
  std::vector<Slot> slots;
  Span span;

  bool is_token() const { return production == kNameToken; }

  const Slot* slot(std::string_view key) const {
    for (const auto& s : slots)
      if (s.key == key) return &s;
    return nullptr;
  }

  Slot* slot(std::string_view key) {
    for (auto& s : slots)
      if (s.key == key) return &s;
    return nullptr;
  }

  const Node* child(std::string_view key) const {
    const auto* s = slot(key);
    return s && !s->values.empty() ? &s->values.front() : nullptr;
  }

  static Node token(std::string text, Span span = {}) {
    Node n;
    n.production = std::string(kNameToken);
    n.text = std::move(text);
    n.span = span;
    return n;
  }
};

/// Text of the first Name token reachable through single children, e.g. the
/// token inside a QualifiedModelElementName.
inline const std::string* leaf_text(const Node& n) {
  if (n.is_token()) return &n.text;
  for (const auto& s : n.slots)
    for (const auto& v : s.values)
      if (const auto* t = leaf_text(v)) return t;
  return nullptr;
}

/// Name of an element whose production is addressable by name, else null.
inline const std::string* element_name(const Node& n, const FlatGrammar& g) {
  const auto* p = g.find(n.production);
  if (!p || !is_addressable_by_name(*p)) return nullptr;
  const auto* name = n.child("name");
  return name ? leaf_text(*name) : nullptr;
}

/// Structural equality ignoring spans. Slots whose key is listed compare as
/// multisets; all others compare positionally.
inline bool node_eq(const Node& a, const Node& b, const std::set<std::string>& unordered = {}) {
  if (a.production != b.production || a.text != b.text || a.slots.size() != b.slots.size()) return false;
  for (std::size_t i = 0; i < a.slots.size(); ++i) {
    const auto& sa = a.slots[i];
    const auto& sb = b.slots[i];
    if (sa.key != sb.key || sa.values.size() != sb.values.size()) return false;
    if (!unordered.count(sa.key)) {
      for (std::size_t k = 0; k < sa.values.size(); ++k)
        if (!node_eq(sa.values[k], sb.values[k], unordered)) return false;
      continue;
    }
    std::vector<bool> used(sb.values.size(), false);
    for (const auto& va : sa.values) {
      bool found = false;
      for (std::size_t k = 0; k < sb.values.size(); ++k) {
        if (!used[k] && node_eq(va, sb.values[k], unordered)) {
          used[k] = true;
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
  }
  return true;
}

inline nlohmann::json to_json_value(const Node& n) {
  using nlohmann::json;
  if (n.is_token()) return json{{"production", n.production}, {"text", n.text}};
  json slots = json::array();
  for (const auto& s : n.slots) {
    json value;
    if (is_multi(s.card)) {
      value = json::array();
      for (const auto& v : s.values) value.push_back(to_json_value(v));
    } else if (!s.values.empty()) {
      value = to_json_value(s.values.front());
    }
    slots.push_back(json::array({s.key, value}));
  }
  return json{{"production", n.production}, {"slots", slots}, {"span", json::array({n.span.begin, n.span.end})}};
}

/// Deterministic JSON dump; object keys are emitted in sorted order.
inline std::string to_json(const Node& n, int indent = -1) { return to_json_value(n).dump(indent); }

}  // namespace deltaforge
