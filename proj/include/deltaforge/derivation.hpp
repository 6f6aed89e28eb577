#pragma once

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "assets.hpp"
#include "error.hpp"
#include "grammar.hpp"
#include "grammar_reader.hpp"

namespace deltaforge {

inline constexpr std::string_view kDeltaCommon = "DeltaCommon";

struct ProvenanceEntry {
  std::string generated;  // produced nonterminal
  std::string rule;       // 1a, 1b, 2, 3, 4 or 5
  std::string source;     // production of the base language

  friend bool operator==(const ProvenanceEntry&, const ProvenanceEntry&) = default;
};

struct DerivedGrammar {
  Grammar grammar;
  std::vector<ProvenanceEntry> provenance;
};

inline Grammar delta_common_grammar() { return parse_grammar(load_builtin("delta-common.dg"), "delta-common.dg"); }

namespace detail {

inline std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

// Block statements end in "}", single statements in ";"; anything else gets
// a ";" appended in its delta operation.
inline bool needs_delimiter(const std::set<std::string>& last) {
  return std::any_of(last.begin(), last.end(), [](const std::string& t) { return t != ";" && t != "}"; });
}

}  // namespace detail

/// Derives the delta language for the productions defined directly in
/// `base_name`. Generated productions are grouped per source production in
/// declaration order: element identifier, scope identifier, the keyworded
/// per-label operations, then the plain operation.
inline DerivedGrammar derive(const FlatGrammar& base, const std::string& base_name,
                             const Grammar& common = delta_common_grammar()) {
  DerivedGrammar out;
  out.grammar.name = "Delta" + base_name;
  out.grammar.extends = {common.name, base_name};

  std::set<std::string> taken;
  for (const auto& p : base.productions) taken.insert(p.name);
  for (const auto& p : common.productions) {
    if (taken.count(p.name))
      throw DeriveError("production '" + p.name + "' of '" + base_name + "' clashes with " + common.name);
    taken.insert(p.name);
  }

  auto emit = [&](std::string name, std::string iface, Rhs rhs, const std::string& rule, const std::string& source) {
    if (!taken.insert(name).second)
      throw DeriveError("generated nonterminal '" + name + "' (rule " + rule + " for '" + source +
                        "') clashes with an existing name");
    out.grammar.productions.push_back(Production{name, ProductionKind::concrete, {std::move(iface)}, std::move(rhs)});
    out.provenance.push_back({std::move(name), rule, source});
  };

  auto operation = [&](std::string name, const std::string& keyword, const std::string& operand,
                       const std::string& source, const std::string& rule) {
    std::vector<Rhs> items{Rhs::ref("DeltaOperand")};
    if (!keyword.empty()) items.push_back(Rhs::terminal(keyword));
    items.push_back(Rhs::ref(operand));
    bool delimit = detail::needs_delimiter(last_terminals(base, operand));
    if (delimit) items.push_back(Rhs::terminal(";"));
    emit(name, "DeltaOperation", Rhs::sequence(std::move(items)), rule, source);
    if (delimit) out.provenance.push_back({std::move(name), "5", source});
  };

  for (const auto& p : base.productions) {
    if (p.is_interface()) continue;
    auto origin = base.origin.find(p.name);
    if (origin == base.origin.end() || origin->second != base_name) continue;
    const auto& n = p.name;

    if (is_addressable_by_name(p)) {
      out.provenance.push_back({"DefaultModelElementIdentifier", "1a", n});
    } else {
      emit(n + "Identifier", "ModelElementIdentifier",
           Rhs::sequence({Rhs::terminal("["), Rhs::ref(n), Rhs::terminal("]")}), "1b", n);
    }

    emit("Delta" + n + "ScopeIdentifier", "ScopeIdentifier", Rhs::terminal(n), "2", n);

    std::vector<std::string> labels;
    for (const auto& [label, target] : labeled_refs(p)) {
      if (std::find(labels.begin(), labels.end(), label) != labels.end()) continue;
      labels.push_back(label);
      operation("Delta" + n + detail::capitalize(label) + "Operation", label, target, n, "4");
    }

    operation("Delta" + n + "Operation", "", n, n, "3");
  }
  return out;
}

namespace detail {

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

enum class Precedence { top, item };

inline std::string render_rhs(const Rhs& e, Precedence ctx) {
  using K = Rhs::Kind;
  switch (e.kind) {
    case K::terminal: return quote(e.text);
    case K::nonterminal: return e.label.empty() ? e.text : e.label + ":" + e.text;
    case K::sequence: {
      std::string out;
      for (const auto& i : e.items) {
        if (!out.empty()) out += ' ';
        out += render_rhs(i, Precedence::item);
      }
      return out;
    }
    case K::alternative: {
      std::string out;
      for (const auto& b : e.items) {
        if (!out.empty()) out += " | ";
        out += render_rhs(b, Precedence::top);
      }
      return ctx == Precedence::item ? "(" + out + ")" : out;
    }
    case K::group: {
      const auto& body = e.body();
      bool atomic = body.is_terminal() || body.is_ref();
      auto inner = render_rhs(body, Precedence::top);
      return (atomic ? inner : "(" + inner + ")") + suffix(e.card);
    }
  }
  return {};
}

}  // namespace detail

/// Byte-stable rendering in the format read by parse_grammar, one
/// production per line.
inline std::string render_grammar(const Grammar& g) {
  std::ostringstream out;
  out << "grammar " << g.name;
  for (std::size_t i = 0; i < g.extends.size(); ++i) out << (i == 0 ? " extends " : ", ") << g.extends[i];
  out << " {\n";
  for (const auto& p : g.productions) {
    out << "  ";
    if (p.is_interface()) {
      out << "interface " << p.name << ";\n";
      continue;
    }
    out << p.name;
    for (std::size_t i = 0; i < p.implements.size(); ++i) out << (i == 0 ? " implements " : ", ") << p.implements[i];
    out << " = " << detail::render_rhs(*p.rhs, detail::Precedence::top) << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace deltaforge
