#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "diagnostic.hpp"
#include "grammar.hpp"
#include "node.hpp"
#include "printer.hpp"
#include "symbols.hpp"

namespace deltaforge {

enum class SlotStatus { ok, no_slot, ambiguous };

struct SlotMatch {
  SlotStatus status = SlotStatus::no_slot;
  SlotInfo slot;
};

/// The slot of `scope` that can hold an `operand` element. A label pins the
/// slot by key; otherwise the slot is found by target type and must be
/// unique.
inline SlotMatch slot_of(const FlatGrammar& g, std::string_view scope, std::string_view operand,
                         std::string_view label = {}) {
  SlotMatch m;
  std::vector<const SlotInfo*> hits;
  for (const auto& s : g.slots(scope)) {
    if (!label.empty() && s.key != label) continue;
    if (g.conforms(operand, s.target)) hits.push_back(&s);
  }
  if (hits.empty()) return m;
  if (hits.size() > 1) {
    m.status = SlotStatus::ambiguous;
    return m;
  }
  m.status = SlotStatus::ok;
  m.slot = *hits.front();
  return m;
}

/// Name of the delta in a parsed `Delta` node.
inline std::string delta_name(const Node& delta) {
  const auto* n = delta.child(kNameToken);
  return n ? n->text : std::string();
}

namespace detail {

enum class EngineMode { check, apply };

/// Executes the operations of one delta against a working tree. In check
/// mode every violation is reported under its context-condition code and
/// the offending operation is skipped; in apply mode the first violation is
/// reported as APPLY and aborts the run.
class DeltaEngine {
public:
  DeltaEngine(const FlatGrammar& base, const FlatGrammar& delta_grammar, EngineMode mode, std::string file)
      : base_(base), delta_(delta_grammar), mode_(mode), file_(std::move(file)) {}

  bool run(Node& doc, const Node& delta) {
    subject_ = delta_name(delta);
    if (const auto* elements = delta.slot("elements")) {
      for (const auto& element : elements->values) {
        if (aborted_) break;
        if (element.production == "DeltaModify") {
          modify(doc, nullptr, element);
        } else {
          report(Code::CC4, element, "'" + element.production + "' is not supported as a delta element");
        }
      }
    }
    return !aborted_;
  }

  std::vector<Diagnostic> diagnostics;

private:
  void report(Code code, const Node& at, const std::string& message, Severity severity = Severity::error) {
    Diagnostic d;
    d.severity = severity;
    d.file = file_;
    d.line = at.span.line;
    d.column = at.span.column;
    d.subject = subject_;
    if (mode_ == EngineMode::apply && severity == Severity::error) {
      d.code = Code::APPLY;
      d.message = std::string("[") + to_string(code) + "] " + message;
      aborted_ = true;
    } else {
      d.code = code;
      d.message = message;
    }
    diagnostics.push_back(std::move(d));
  }

  std::string describe(const std::vector<PathSegment>& path) const {
    std::string out;
    for (const auto& seg : path) {
      if (!out.empty()) out += ".";
      out += seg.is_fragment() ? "[" + print_inline(base_, *seg.fragment) + "]" : seg.name;
    }
    return out;
  }

  // Base-language production named by a scope identifier.
  std::string scope_target(const Node& id) const {
    const std::string& p = id.production;
    const std::string prefix = "Delta";
    const std::string tail = "ScopeIdentifier";
    if (p.size() > prefix.size() + tail.size() && p.compare(0, prefix.size(), prefix) == 0 &&
        p.compare(p.size() - tail.size(), tail.size(), tail) == 0) {
      auto n = p.substr(prefix.size(), p.size() - prefix.size() - tail.size());
      if (base_.find(n)) return n;
    }
    const auto* prod = delta_.find(p);
    if (prod && prod->rhs && prod->rhs->is_terminal() && base_.find(prod->rhs->text)) return prod->rhs->text;
    return {};
  }

  bool resolution_failed(const Resolution<Node>& r, const std::vector<PathSegment>& path, const Node& at,
                         Code missing) {
    switch (r.status) {
      case ResolveStatus::ok:
        return false;
      case ResolveStatus::not_found:
        report(missing, at, "no element '" + describe({path.begin(), path.begin() + r.segment + 1}) + "' exists");
        return true;
      case ResolveStatus::not_a_scope:
        report(Code::CC3, at,
               "invalid path '" + describe(path) + "': '" +
                   describe({path.begin(), path.begin() + r.segment + 1}) + "' does not contain elements");
        return true;
      case ResolveStatus::ambiguous:
        report(Code::CC1, at,
               "ambiguous reference '" + describe({path.begin(), path.begin() + r.segment + 1}) +
                   "': more than one element matches");
        return true;
    }
    return true;
  }

  void modify(Node& doc, Node* scope, const Node& m) {
    const auto* id = m.child("ScopeIdentifier");
    const auto* target_path = m.child("modelElement");
    if (!id || !target_path) {
      report(Code::CC3, m, "malformed modify statement");
      return;
    }
    auto path = path_segments(*target_path);
    auto r = scope ? resolve_path(*scope, path, base_, false) : resolve_path(doc, path, base_, true);
    if (resolution_failed(r, path, *target_path, Code::CC1)) return;

    Node* target = r.location.node;
    auto expected = scope_target(*id);
    if (expected.empty()) {
      report(Code::CC2, *id, "scope identifier '" + id->production + "' names no production of the base language");
      return;
    }
    if (!base_.conforms(target->production, expected)) {
      report(Code::CC2, *id,
             "'" + describe(path) + "' is a " + target->production + ", but the modify statement expects " + expected);
      return;
    }

    if (const auto* ops = m.slot("DeltaOperation")) {
      for (const auto& op : ops->values) {
        if (aborted_) return;
        operation(doc, *target, op);
      }
    }
  }

  void operation(Node& doc, Node& scope, const Node& op) {
    if (op.production == "DeltaModify") {
      modify(doc, &scope, op);
      return;
    }
    if (op.production == "DeltaRemoveOperation") {
      remove_path(scope, op);
      return;
    }

    auto shape = operation_shape(op);
    if (!shape) {
      report(Code::CC4, op, "'" + op.production + "' is not a recognised delta operation");
      return;
    }
    const Node& element = *shape->element;
    auto match = slot_of(base_, scope.production, element.production, shape->keyword);
    if (match.status != SlotStatus::ok) {
      std::string what = shape->keyword.empty() ? element.production : shape->keyword;
      report(Code::CC4, op,
             match.status == SlotStatus::ambiguous
                 ? "'" + what + "' fits more than one part of " + scope.production + "; use a labeled operation"
                 : "'" + what + "' is not part of " + scope.production);
      return;
    }
    Slot* slot = scope.slot(match.slot.key);
    if (!slot) {
      report(Code::CC4, op, "'" + match.slot.key + "' is not part of " + scope.production);
      return;
    }

    if (shape->operand == "add") {
      add(scope, *slot, element, op);
    } else if (shape->operand == "set") {
      set(doc, scope, *slot, element, op);
    } else if (shape->operand == "remove") {
      remove_element(*slot, element, op);
    } else {
      report(Code::CC5, op, "operand '" + shape->operand + "' is not supported");
    }
  }

  struct Shape {
    std::string operand;
    std::string keyword;
    const Node* element = nullptr;
  };

  // Expected form: DeltaOperand ("keyword")? Element (";")?
  std::optional<Shape> operation_shape(const Node& op) const {
    const auto* prod = delta_.find(op.production);
    if (!prod || !prod->rhs || prod->rhs->kind != Rhs::Kind::sequence) return std::nullopt;
    const auto& items = prod->rhs->items;
    if (items.empty() || !items[0].is_ref() || items[0].text != "DeltaOperand") return std::nullopt;
    Shape s;
    std::size_t i = 1;
    if (i < items.size() && items[i].is_terminal() && is_identifier(items[i].text)) s.keyword = items[i++].text;
    if (i >= items.size() || !items[i].is_ref()) return std::nullopt;
    s.element = op.child(items[i].slot_key());
    const auto* operand = op.child(items[0].slot_key());
    if (!s.element || !operand) return std::nullopt;
    if (operand->production == "DeltaAdd") s.operand = "add";
    else if (operand->production == "DeltaSet") s.operand = "set";
    else if (operand->production == "DeltaRemove") s.operand = "remove";
    else s.operand = operand->production;
    return s;
  }

  bool same_element(const Node& existing, const Node& element) const {
    const auto* a = element_name(element, base_);
    if (a) {
      const auto* b = element_name(existing, base_);
      return b && *a == *b;
    }
    return node_eq(existing, element);
  }

  void add(Node& scope, Slot& slot, const Node& element, const Node& op) {
    if (!is_multi(slot.card)) {
      report(Code::CC5, op,
             "'add' needs a collection, but '" + slot.key + "' of " + scope.production + " holds a single element; use 'set'");
      return;
    }
    for (const auto& existing : slot.values) {
      if (same_element(existing, element)) {
        const auto* name = element_name(element, base_);
        report(Code::CC6, op,
               element.production + " '" + (name ? *name : print_inline(base_, element)) + "' already exists in " +
                   scope.production);
        return;
      }
    }
    slot.values.push_back(element);
  }

  void set(Node& doc, Node& scope, Slot& slot, const Node& element, const Node& op) {
    if (is_multi(slot.card)) {
      report(Code::CC5, op,
             "'set' replaces a single element, but '" + slot.key + "' of " + scope.production + " is a collection; use 'add'");
      return;
    }
    if (slot.key == "name") {
      const auto* old_name = element_name(scope, base_);
      const auto* new_name = leaf_text(element);
      if (old_name && new_name && *old_name != *new_name) rename_references(doc, scope, *old_name, *new_name);
    }
    slot.values.assign(1, element);
  }

  void remove_element(Slot& slot, const Node& element, const Node& op) {
    if (slot.card == Cardinality::one) {
      report(Code::CC5, op, "'remove' cannot delete the mandatory '" + slot.key + "'");
      return;
    }
    std::vector<std::size_t> hits;
    const bool by_name = element_name(element, base_) != nullptr;
    for (std::size_t i = 0; i < slot.values.size(); ++i) {
      const auto& v = slot.values[i];
      if (by_name ? same_element(v, element) : fragment_matches(element, v)) hits.push_back(i);
    }
    if (hits.empty()) {
      report(Code::CC7, op, "cannot remove '" + print_inline(base_, element) + "': no such element");
      return;
    }
    if (hits.size() > 1) {
      report(Code::CC1, op, "ambiguous removal of '" + print_inline(base_, element) + "': more than one element matches");
      return;
    }
    slot.values.erase(slot.values.begin() + static_cast<std::ptrdiff_t>(hits.front()));
  }

  void remove_path(Node& scope, const Node& op) {
    const auto* target = op.child("target");
    if (!target) {
      report(Code::CC3, op, "malformed remove operation");
      return;
    }
    auto path = path_segments(*target);
    auto r = resolve_path(scope, path, base_, false);
    if (resolution_failed(r, path, *target, Code::CC7)) return;
    auto& loc = r.location;
    auto& slot = loc.parent->slots[loc.slot];
    if (slot.card == Cardinality::one) {
      report(Code::CC5, op, "'remove' cannot delete the mandatory '" + slot.key + "'");
      return;
    }
    slot.values.erase(slot.values.begin() + static_cast<std::ptrdiff_t>(loc.index));
  }

  // Rewrites Name tokens outside `name` slots that resolve to `renamed`:
  // first through the enclosing scopes, innermost first, then by a unique
  // match anywhere in the model.
  void rename_references(Node& doc, const Node& renamed, const std::string& old_name, const std::string& new_name) {
    std::vector<const Node*> everywhere;
    collect_named(doc, old_name, everywhere);

    std::vector<Node*> hits;
    std::vector<const Node*> chain;
    auto walk = [&](auto&& self, Node& n) -> void {
      bool scoped = opens_scope(n, base_);
      if (scoped) chain.push_back(&n);
      for (auto& slot : n.slots) {
        for (auto& v : slot.values) {
          if (v.is_token()) {
            if (slot.key != "name" && v.text == old_name && resolve_reference(old_name, chain, everywhere) == &renamed)
              hits.push_back(&v);
          } else {
            self(self, v);
          }
        }
      }
      if (scoped) chain.pop_back();
    };
    walk(walk, doc);
    for (auto* t : hits) t->text = new_name;
  }

  void collect_named(const Node& n, const std::string& name, std::vector<const Node*>& out) const {
    for (const auto& slot : n.slots) {
      if (!is_multi(slot.card)) continue;
      for (const auto& v : slot.values) {
        if (v.is_token()) continue;
        if (const auto* vn = element_name(v, base_); vn && *vn == name) out.push_back(&v);
        collect_named(v, name, out);
      }
    }
  }

  const Node* resolve_reference(const std::string& name, const std::vector<const Node*>& chain,
                                const std::vector<const Node*>& everywhere) const {
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      std::vector<const Node*> local;
      for (const auto& slot : (*it)->slots) {
        if (!is_multi(slot.card)) continue;
        for (const auto& v : slot.values)
          if (const auto* vn = element_name(v, base_); vn && *vn == name) local.push_back(&v);
      }
      if (local.size() == 1) return local.front();
      if (local.size() > 1) return nullptr;
    }
    return everywhere.size() == 1 ? everywhere.front() : nullptr;
  }

  const FlatGrammar& base_;
  const FlatGrammar& delta_;
  EngineMode mode_;
  std::string file_;
  std::string subject_;
  bool aborted_ = false;
};

}  // namespace detail

/// Model-level warnings: names declared twice in one scope.
inline std::vector<Diagnostic> duplicate_warnings(const Node& core, const FlatGrammar& base,
                                                  const std::string& file = {}) {
  std::vector<Diagnostic> out;
  for (const auto& d : build_symbols(core, base).duplicate_names()) {
    Diagnostic diag;
    diag.code = Code::CC1;
    diag.severity = Severity::warning;
    diag.message = "duplicate name " + d + "; references to it are ambiguous";
    diag.file = file;
    diag.line = core.span.line;
    diag.column = core.span.column;
    out.push_back(std::move(diag));
  }
  return out;
}

/// Evaluates the context conditions of a delta against a core model. Each
/// operation is checked against the state left by the operations before it;
/// the inputs are not modified. `post_state`, when given, receives that
/// simulated state.
inline std::vector<Diagnostic> check_delta(const Node& core, const Node& delta, const FlatGrammar& base,
                                           const FlatGrammar& delta_grammar, const std::string& file = {},
                                           Node* post_state = nullptr) {
  Node work = core;
  detail::DeltaEngine engine(base, delta_grammar, detail::EngineMode::check, file);
  engine.run(work, delta);
  if (post_state) *post_state = std::move(work);
  return std::move(engine.diagnostics);
}

}  // namespace deltaforge
