#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "checker.hpp"
#include "diagnostic.hpp"
#include "grammar.hpp"
#include "node.hpp"

namespace deltaforge {

/// Application order constraint: a boolean expression over delta names.
struct AocExpr {
  enum class Kind { atom, negation, conjunction, disjunction };

  Kind kind = Kind::atom;
  std::string delta;              // atom only
  std::vector<AocExpr> operands;  // in source order

  static AocExpr atom(std::string name) {
    AocExpr e;
    e.delta = std::move(name);
    return e;
  }

  static AocExpr make(Kind k, std::vector<AocExpr> ops) {
    if (k != Kind::negation && ops.size() == 1) return std::move(ops.front());
    AocExpr e;
    e.kind = k;
    e.operands = std::move(ops);
    return e;
  }

  /// `applied` holds the deltas applied before the constrained one.
  bool eval(const std::set<std::string>& applied) const {
    switch (kind) {
      case Kind::atom: return applied.count(delta) > 0;
      case Kind::negation: return !operands.front().eval(applied);
      case Kind::conjunction:
        for (const auto& o : operands)
          if (!o.eval(applied)) return false;
        return true;
      case Kind::disjunction:
        for (const auto& o : operands)
          if (o.eval(applied)) return true;
        return false;
    }
    return false;
  }

  void atoms(std::set<std::string>& out) const {
    if (kind == Kind::atom) out.insert(delta);
    for (const auto& o : operands) o.atoms(out);
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::atom: return delta;
      case Kind::negation: {
        const auto& o = operands.front();
        return "!" + (o.kind == Kind::atom || o.kind == Kind::negation ? o.to_string() : "(" + o.to_string() + ")");
      }
      case Kind::conjunction:
      case Kind::disjunction: {
        std::string out;
        for (const auto& o : operands) {
          if (!out.empty()) out += kind == Kind::conjunction ? " && " : " || ";
          bool wrap = kind == Kind::conjunction && o.kind == Kind::disjunction;
          out += wrap ? "(" + o.to_string() + ")" : o.to_string();
        }
        return out;
      }
    }
    return {};
  }
};

/// Builds an AocExpr from an ApplicationOrderConstraint (or any of its
/// sub-productions) parse tree.
inline AocExpr aoc_from_node(const Node& n) {
  if (n.production == "ApplicationOrderConstraint" || n.production == "AocConjunction") {
    const auto* list = n.slot(n.production == "AocConjunction" ? "factors" : "terms");
    std::vector<AocExpr> ops;
    if (list)
      for (const auto& v : list->values) ops.push_back(aoc_from_node(v));
    if (ops.empty()) throw std::invalid_argument("empty application order constraint");
    return AocExpr::make(n.production == "AocConjunction" ? AocExpr::Kind::conjunction : AocExpr::Kind::disjunction,
                         std::move(ops));
  }
  if (n.production == "AocNegation") return AocExpr::make(AocExpr::Kind::negation, {aoc_from_node(*n.child("operand"))});
  if (n.production == "AocGroup") return aoc_from_node(*n.child("inner"));
  if (n.production == "AocDeltaName") return AocExpr::atom(n.child("delta")->text);
  throw std::invalid_argument("'" + n.production + "' is not part of an application order constraint");
}

inline std::optional<AocExpr> delta_aoc(const Node& delta) {
  const auto* c = delta.child("ApplicationOrderConstraint");
  if (!c) return std::nullopt;
  return aoc_from_node(*c);
}

struct PlannedDelta {
  std::string name;
  Node delta;
  std::string file;
};

/// Deltas in the order they are to be applied.
struct ApplicationPlan {
  std::vector<PlannedDelta> deltas;

  void add(Node delta, std::string file = {}) {
    auto name = delta_name(delta);
    deltas.push_back({std::move(name), std::move(delta), std::move(file)});
  }
};

/// Checks every delta's constraint against the set of deltas placed before
/// it in the plan.
inline std::vector<Diagnostic> validate_order(const ApplicationPlan& plan) {
  std::vector<Diagnostic> out;
  std::set<std::string> known;
  for (const auto& d : plan.deltas) known.insert(d.name);

  auto make = [](const PlannedDelta& d, Severity sev, std::string message) {
    Diagnostic diag;
    diag.code = Code::AOC;
    diag.severity = sev;
    diag.message = std::move(message);
    diag.file = d.file;
    diag.line = d.delta.span.line;
    diag.column = d.delta.span.column;
    diag.subject = d.name;
    return diag;
  };

  std::set<std::string> applied;
  for (const auto& d : plan.deltas) {
    if (applied.count(d.name)) {
      out.push_back(make(d, Severity::error, "delta '" + d.name + "' appears more than once in the plan"));
      continue;
    }
    if (auto aoc = delta_aoc(d.delta)) {
      std::set<std::string> atoms;
      aoc->atoms(atoms);
      for (const auto& a : atoms)
        if (!known.count(a))
          out.push_back(make(d, Severity::warning, "delta '" + d.name + "' refers to unknown delta '" + a + "'"));
      if (!aoc->eval(applied))
        out.push_back(make(d, Severity::error,
                           "delta '" + d.name + "' requires 'after " + aoc->to_string() + "', which the order violates"));
    }
    applied.insert(d.name);
  }
  return out;
}

class ApplyError : public std::runtime_error {
public:
  ApplyError(std::string delta, std::vector<Diagnostic> diagnostics)
      : std::runtime_error("applying delta '" + delta + "' failed" +
                           (diagnostics.empty() ? std::string() : ": " + diagnostics.front().message)),
        delta_(std::move(delta)), diagnostics_(std::move(diagnostics)) {}

  const std::string& delta() const noexcept { return delta_; }
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
  std::string delta_;
  std::vector<Diagnostic> diagnostics_;
};

/// Produces the variant obtained by applying one delta to `core`, which is
/// left untouched. Operations run in textual order; added elements are
/// appended to their slot, and `set name` also renames the references that
/// resolve to the renamed element.
inline Node apply(const Node& core, const Node& delta, const FlatGrammar& base, const FlatGrammar& delta_grammar,
                  const std::string& file = {}) {
  Node variant = core;
  detail::DeltaEngine engine(base, delta_grammar, detail::EngineMode::apply, file);
  if (!engine.run(variant, delta)) throw ApplyError(delta_name(delta), std::move(engine.diagnostics));
  return variant;
}

inline Node apply_all(const Node& core, const ApplicationPlan& plan, const FlatGrammar& base,
                      const FlatGrammar& delta_grammar) {
  Node variant = core;
  for (const auto& d : plan.deltas) variant = apply(variant, d.delta, base, delta_grammar, d.file);
  return variant;
}

/// Order validation followed by the context conditions of every delta, each
/// against the state simulated from its predecessors.
inline std::vector<Diagnostic> check_plan(const Node& core, const ApplicationPlan& plan, const FlatGrammar& base,
                                          const FlatGrammar& delta_grammar, const std::string& core_file = {}) {
  auto out = validate_order(plan);
  auto dups = duplicate_warnings(core, base, core_file);
  out.insert(out.end(), dups.begin(), dups.end());
  Node state = core;
  for (const auto& d : plan.deltas) {
    Node next;
    auto diags = check_delta(state, d.delta, base, delta_grammar, d.file, &next);
    out.insert(out.end(), diags.begin(), diags.end());
    state = std::move(next);
  }
  return out;
}

}  // namespace deltaforge
