#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "grammar.hpp"
#include "node.hpp"

namespace deltaforge {

/// A node opens a scope iff its production has a star/plus slot; the
/// elements of those slots are the scope's entries.
inline bool opens_scope(const Node& n, const FlatGrammar& g) {
  for (const auto& s : g.slots(n.production))
    if (is_multi(s.card)) return true;
  return false;
}

struct Scope {
  const Node* owner = nullptr;
  std::map<std::string, std::vector<const Node*>> names;
  std::map<std::string, std::vector<const Node*>> unnamed;  // production -> entries
  std::vector<std::string> duplicates;
  std::vector<Scope> children;

  const Node* lookup(const std::string& name) const {
    auto it = names.find(name);
    return it != names.end() && it->second.size() == 1 ? it->second.front() : nullptr;
  }
};

/// Scope tree mirroring a model; pointers refer into the model it was built
/// from and are valid while that model is unchanged.
struct SymbolTable {
  Scope root;

  /// Every duplicate as a "scope: name" string, in tree order.
  std::vector<std::string> duplicate_names() const {
    std::vector<std::string> out;
    auto walk = [&](auto&& self, const Scope& s, const std::string& path) -> void {
      for (const auto& d : s.duplicates) out.push_back(path + ": " + d);
      for (const auto& c : s.children) {
        std::string sub = path;
        auto found = std::find_if(s.names.begin(), s.names.end(), [&](const auto& kv) {
          return std::find(kv.second.begin(), kv.second.end(), c.owner) != kv.second.end();
        });
        if (found != s.names.end()) sub += "." + found->first;
        self(self, c, sub);
      }
    };
    walk(walk, root, "<root>");
    return out;
  }
};

namespace detail {

inline void fill_scope(Scope& scope, const Node& owner, const FlatGrammar& g) {
  scope.owner = &owner;
  for (const auto& slot : owner.slots) {
    if (!is_multi(slot.card)) continue;
    for (const auto& child : slot.values) {
      if (const auto* name = element_name(child, g)) {
        auto& list = scope.names[*name];
        list.push_back(&child);
        if (list.size() == 2) scope.duplicates.push_back(*name);
      } else if (!child.is_token()) {
        scope.unnamed[child.production].push_back(&child);
      }
      if (!child.is_token() && opens_scope(child, g)) {
        scope.children.emplace_back();
        fill_scope(scope.children.back(), child, g);
      }
    }
  }
}

}  // namespace detail

inline SymbolTable build_symbols(const Node& core, const FlatGrammar& g) {
  SymbolTable t;
  detail::fill_scope(t.root, core, g);
  return t;
}

/// One step of a model element path: a name, or the parsed content of a
/// bracketed element identifier.
struct PathSegment {
  std::string name;
  std::optional<Node> fragment;

  bool is_fragment() const { return fragment.has_value(); }
};

/// Splits a ModelElementIdentifierPath node into segments. Identifiers that
/// wrap a non-token element are fragments; the rest resolve by name.
inline std::vector<PathSegment> path_segments(const Node& path) {
  std::vector<PathSegment> out;
  const auto* parts = path.slot("parts");
  if (!parts) return out;
  for (const auto& mei : parts->values) {
    PathSegment seg;
    for (const auto& s : mei.slots) {
      for (const auto& v : s.values) {
        if (!v.is_token() && v.production != "QualifiedModelElementName" && !seg.fragment) seg.fragment = v;
      }
    }
    if (!seg.fragment) {
      const auto* t = leaf_text(mei);
      seg.name = t ? *t : std::string();
    }
    out.push_back(std::move(seg));
  }
  return out;
}

/// Fields present in the fragment must be equal; empty fields match anything.
inline bool fragment_matches(const Node& fragment, const Node& candidate) {
  if (fragment.production != candidate.production) return false;
  for (const auto& fs : fragment.slots) {
    if (fs.values.empty()) continue;
    const auto* cs = candidate.slot(fs.key);
    if (!cs || cs->values.size() != fs.values.size()) return false;
    for (std::size_t i = 0; i < fs.values.size(); ++i)
      if (!node_eq(fs.values[i], cs->values[i])) return false;
  }
  return true;
}

enum class ResolveStatus { ok, not_found, not_a_scope, ambiguous };

template <class N>
struct BasicLocation {
  N* node = nullptr;
  N* parent = nullptr;  // null for the document root
  std::size_t slot = 0;
  std::size_t index = 0;
};

template <class N>
struct Resolution {
  ResolveStatus status = ResolveStatus::not_found;
  BasicLocation<N> location;
  std::size_t segment = 0;  // index of the failing segment
};

using Location = BasicLocation<Node>;

namespace detail {

template <class N>
std::vector<BasicLocation<N>> scope_entries(N& scope, const FlatGrammar& g) {
  std::vector<BasicLocation<N>> out;
  for (std::size_t s = 0; s < scope.slots.size(); ++s) {
    auto& slot = scope.slots[s];
    if (!is_multi(slot.card)) continue;
    for (std::size_t i = 0; i < slot.values.size(); ++i) out.push_back({&slot.values[i], &scope, s, i});
  }
  (void)g;
  return out;
}

template <class N>
bool segment_matches(const PathSegment& seg, const Node& candidate, const FlatGrammar& g) {
  if (seg.is_fragment()) return fragment_matches(*seg.fragment, candidate);
  const auto* name = element_name(candidate, g);
  return name && *name == seg.name;
}

}  // namespace detail

/// Resolves segments left to right, each within the scope of the previous
/// result. With `document_level`, the first segment may also denote the
/// start node itself (the model root).
template <class N>
  requires std::is_same_v<std::remove_const_t<N>, Node>
Resolution<N> resolve_path(N& start, const std::vector<PathSegment>& path, const FlatGrammar& g,
                           bool document_level = false) {
  Resolution<N> r;
  if (path.empty()) return r;
  N* scope = &start;
  for (std::size_t i = 0; i < path.size(); ++i) {
    r.segment = i;
    if (i == 0 && document_level && detail::segment_matches<N>(path[0], start, g)) {
      r.location = {&start, nullptr, 0, 0};
      continue;
    }
    if (i > 0 && !opens_scope(*scope, g)) {
      r.status = ResolveStatus::not_a_scope;
      r.segment = i - 1;
      return r;
    }
    std::vector<BasicLocation<N>> hits;
    for (auto& entry : detail::scope_entries(*scope, g))
      if (!entry.node->is_token() && detail::segment_matches<N>(path[i], *entry.node, g)) hits.push_back(entry);
    if (hits.empty()) {
      r.status = ResolveStatus::not_found;
      return r;
    }
    if (hits.size() > 1) {
      r.status = ResolveStatus::ambiguous;
      return r;
    }
    r.location = hits.front();
    scope = hits.front().node;
  }
  r.status = ResolveStatus::ok;
  return r;
}

/// Symbol-table form: resolves from the table's root scope.
inline Resolution<const Node> resolve_path(const SymbolTable& table, const std::vector<PathSegment>& path,
                                           const FlatGrammar& g) {
  return resolve_path(*table.root.owner, path, g, true);
}

}  // namespace deltaforge
