#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "deltaforge/deltaforge.hpp"

namespace deltaforge::cli {

enum ExitStatus : int { kSuccess = 0, kDiagnostics = 1, kUsage = 2, kInternal = 3 };

namespace detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Aborts the command with the collected diagnostics.
struct Reported {};

class Session {
public:
  Session(std::ostream& out, std::ostream& err, bool json) : out_(out), err_(err), json_(json) {}

  void emit(const Diagnostic& d) {
    out_ << (json_ ? format_json(d) : format_human(d)) << "\n";
    if (d.severity == Severity::error) failed_ = true;
  }

  void emit_all(const std::vector<Diagnostic>& ds) {
    for (const auto& d : ds) emit(d);
  }

  [[noreturn]] void fail(Code code, const std::string& file, const std::string& message, SourcePos pos = {}) {
    Diagnostic d;
    d.code = code;
    d.message = message;
    d.file = file;
    d.line = pos.line;
    d.column = pos.column;
    emit(d);
    throw Reported{};
  }

  std::string read(const std::string& path) {
    if (!std::filesystem::is_regular_file(path)) throw UsageError("cannot read '" + path + "'");
    return deltaforge::detail::read_file(path);
  }

  Grammar grammar(const std::string& path) {
    auto text = read(path);
    try {
      return parse_grammar(text, path);
    } catch (const GrammarError& e) {
      fail(Code::PARSE, path, e.message(), e.pos());
    }
  }

  FlatGrammar flat(std::vector<Grammar> grammars, Code code = Code::DERIVE) {
    try {
      return flatten_all(std::move(grammars));
    } catch (const GrammarError& e) {
      fail(code, e.origin(), e.message(), e.pos());
    }
  }

  Node model(const FlatGrammar& g, const std::string& start, const std::string& path) {
    auto text = read(path);
    try {
      return parse(g, start, text);
    } catch (const ParseError& e) {
      fail(Code::PARSE, path, e.message(), e.pos());
    }
  }

  bool failed() const { return failed_; }
  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }

private:
  std::ostream& out_;
  std::ostream& err_;
  bool json_;
  bool failed_ = false;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << content;
}

inline void outline(std::ostream& out, const Node& n, int depth, const std::string& key) {
  out << std::string(static_cast<std::size_t>(depth) * 2, ' ');
  if (!key.empty()) out << key << ": ";
  if (n.is_token()) {
    out << "Name \"" << n.text << "\"\n";
    return;
  }
  out << n.production << "\n";
  for (const auto& s : n.slots)
    for (const auto& v : s.values) outline(out, v, depth + 1, s.key);
}

struct ModelOptions {
  std::string grammar;
  std::string delta_grammar;
  std::string extend;
  std::string common;
  std::string core;
  std::string start;
  std::vector<std::string> deltas;
  std::string out;
  bool json = false;
};

struct Loaded {
  FlatGrammar base;
  FlatGrammar delta;
  Node core;
  ApplicationPlan plan;
};

inline Loaded load_models(Session& s, const ModelOptions& o) {
  for (const auto& p : {o.grammar, o.delta_grammar, o.core})
    if (!std::filesystem::is_regular_file(p)) throw UsageError("cannot read '" + p + "'");
  for (const auto& p : o.deltas)
    if (!std::filesystem::is_regular_file(p)) throw UsageError("cannot read '" + p + "'");

  auto base_grammar = s.grammar(o.grammar);
  std::vector<Grammar> chain;
  if (!o.extend.empty()) chain.push_back(s.grammar(o.extend));
  chain.push_back(s.grammar(o.delta_grammar));
  if (!o.common.empty()) chain.push_back(s.grammar(o.common));
  chain.push_back(base_grammar);

  Loaded l{s.flat({base_grammar}), s.flat(std::move(chain)), {}, {}};
  auto start = o.start.empty() ? default_start(l.base) : o.start;
  l.core = s.model(l.base, start, o.core);
  for (const auto& path : o.deltas) l.plan.add(s.model(l.delta, "Delta", path), path);
  return l;
}

inline int cmd_derive(Session& s, const std::string& grammar_path, const std::string& out_path,
               const std::string& common_path) {
  auto base = s.grammar(grammar_path);
  auto common = common_path.empty() ? delta_common_grammar() : s.grammar(common_path);
  auto flat = s.flat({base});
  DerivedGrammar derived;
  try {
    derived = derive(flat, base.name, common);
    flatten({derived.grammar, common, base}, derived.grammar.name);
  } catch (const DeriveError& e) {
    s.fail(Code::DERIVE, grammar_path, e.what());
  } catch (const GrammarError& e) {
    s.fail(Code::DERIVE, grammar_path, e.message());
  }
  write_file(out_path, render_grammar(derived.grammar));

  std::size_t width = 9;
  for (const auto& p : derived.provenance) width = std::max(width, p.generated.size());
  s.out() << std::left << std::setw(static_cast<int>(width + 2)) << "generated" << "rule  source\n";
  for (const auto& p : derived.provenance)
    s.out() << std::left << std::setw(static_cast<int>(width + 2)) << p.generated << std::setw(6) << p.rule
            << p.source << "\n";
  return kSuccess;
}

inline int cmd_check(Session& s, const ModelOptions& o) {
  auto l = load_models(s, o);
  s.emit_all(check_plan(l.core, l.plan, l.base, l.delta, o.core));
  return s.failed() ? kDiagnostics : kSuccess;
}

inline int cmd_apply(Session& s, const ModelOptions& o) {
  auto l = load_models(s, o);
  s.emit_all(check_plan(l.core, l.plan, l.base, l.delta, o.core));
  if (s.failed()) return kDiagnostics;
  try {
    auto variant = apply_all(l.core, l.plan, l.base, l.delta);
    write_file(o.out, pretty_print(l.base, variant));
  } catch (const ApplyError& e) {
    s.emit_all(e.diagnostics());
    return kDiagnostics;
  }
  return kSuccess;
}

inline int cmd_parse(Session& s, const std::vector<std::string>& grammars, const std::string& start,
              const std::string& input, bool json) {
  for (const auto& p : grammars)
    if (!std::filesystem::is_regular_file(p)) throw UsageError("cannot read '" + p + "'");
  if (!std::filesystem::is_regular_file(input)) throw UsageError("cannot read '" + input + "'");
  std::vector<Grammar> gs;
  for (const auto& p : grammars) gs.push_back(s.grammar(p));
  auto flat = s.flat(std::move(gs));
  auto node = s.model(flat, start.empty() ? default_start(flat) : start, input);
  if (json) s.out() << to_json(node, 2) << "\n";
  else outline(s.out(), node, 0, "");
  return kSuccess;
}

}  // namespace detail

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Derive delta languages from grammars, check deltas and generate variants."};
  app.require_subcommand(1);

  std::string grammar, out_path, common;
  auto* derive_cmd = app.add_subcommand("derive", "Derive the delta grammar of a base grammar");
  derive_cmd->add_option("--grammar", grammar, "Base grammar (.dg)")->required();
  derive_cmd->add_option("--out", out_path, "Output file for the derived grammar")->required();
  derive_cmd->add_option("--common", common, "Alternative common delta grammar");

  detail::ModelOptions check_opts;
  detail::ModelOptions apply_opts;
  auto model_flags = [](CLI::App* cmd, detail::ModelOptions& o) {
    cmd->add_option("--grammar", o.grammar, "Base grammar (.dg)")->required();
    cmd->add_option("--delta-grammar", o.delta_grammar, "Derived delta grammar (.dg)")->required();
    cmd->add_option("--extend", o.extend, "Grammar refining the delta grammar");
    cmd->add_option("--common", o.common, "Alternative common delta grammar");
    cmd->add_option("--core", o.core, "Core model")->required();
    cmd->add_option("--delta", o.deltas, "Delta files in application order")->required();
    cmd->add_option("--start", o.start, "Start production for the core model");
    cmd->add_flag("--json", o.json, "Print diagnostics as JSON lines");
  };
  auto* check_cmd = app.add_subcommand("check", "Check deltas against a core model");
  model_flags(check_cmd, check_opts);
  auto* apply_cmd = app.add_subcommand("apply", "Apply deltas to a core model and write the variant");
  model_flags(apply_cmd, apply_opts);
  apply_cmd->add_option("--out", apply_opts.out, "Output file for the variant")->required();

  std::vector<std::string> parse_grammars;
  std::string start, input;
  bool parse_json = false;
  auto* parse_cmd = app.add_subcommand("parse", "Parse a model and print its tree");
  parse_cmd->add_option("--grammar", parse_grammars, "Grammar files; the first is the root")->required();
  parse_cmd->add_option("--start", start, "Start production");
  parse_cmd->add_option("--input", input, "Model file")->required();
  parse_cmd->add_flag("--json", parse_json, "Print the tree as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  bool json = (check_cmd->parsed() && check_opts.json) || (apply_cmd->parsed() && apply_opts.json);
  detail::Session session(out, err, json);
  try {
    if (derive_cmd->parsed()) return detail::cmd_derive(session, grammar, out_path, common);
    if (check_cmd->parsed()) return detail::cmd_check(session, check_opts);
    if (apply_cmd->parsed()) return detail::cmd_apply(session, apply_opts);
    return detail::cmd_parse(session, parse_grammars, start, input, parse_json);
  } catch (const detail::Reported&) {
    return kDiagnostics;
  } catch (const detail::UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace deltaforge::cli
