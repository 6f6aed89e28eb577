#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

namespace deltaforge {

enum class Code { CC1, CC2, CC3, CC4, CC5, CC6, CC7, PARSE, DERIVE, AOC, APPLY };

enum class Severity { error, warning };

inline const char* to_string(Code c) {
  switch (c) {
    case Code::CC1: return "CC1";
    case Code::CC2: return "CC2";
    case Code::CC3: return "CC3";
    case Code::CC4: return "CC4";
    case Code::CC5: return "CC5";
    case Code::CC6: return "CC6";
    case Code::CC7: return "CC7";
    case Code::PARSE: return "PARSE";
    case Code::DERIVE: return "DERIVE";
    case Code::AOC: return "AOC";
    case Code::APPLY: return "APPLY";
  }
  return "?";
}

inline const char* to_string(Severity s) { return s == Severity::error ? "error" : "warning"; }

// CC1 referenced element exists, CC2 scope type agrees, CC3 path valid,
// CC4 operation fits its scope, CC5 operand fits the slot cardinality,
// CC6 added element is new, CC7 removed element exists.
struct Diagnostic {
  Code code = Code::PARSE;
  Severity severity = Severity::error;
  std::string message;
  std::string file;
  int line = 0;
  int column = 0;
  std::string subject;  // delta name or element path
};

inline bool has_errors(const std::vector<Diagnostic>& ds) {
  return std::any_of(ds.begin(), ds.end(), [](const Diagnostic& d) { return d.severity == Severity::error; });
}

/// `file:line:col CODE message`
inline std::string format_human(const Diagnostic& d) {
  std::string out = d.file.empty() ? "<input>" : d.file;
  out += ":" + std::to_string(d.line) + ":" + std::to_string(d.column) + " " + to_string(d.code);
  if (d.severity == Severity::warning) out += " warning:";
  return out + " " + d.message;
}

inline std::string format_json(const Diagnostic& d) {
  nlohmann::ordered_json j;
  j["code"] = to_string(d.code);
  j["severity"] = to_string(d.severity);
  j["message"] = d.message;
  j["file"] = d.file;
  j["line"] = d.line;
  j["column"] = d.column;
  return j.dump();
}

}  // namespace deltaforge
