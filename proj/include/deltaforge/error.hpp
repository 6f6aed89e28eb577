#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace deltaforge {

struct SourcePos {
  int line = 0;
  int column = 0;
};

/// Raised for malformed grammar text and for grammars that cannot be
/// flattened (unresolved names, left recursion, kind clashes).
class GrammarError : public std::runtime_error {
public:
  GrammarError(std::string message, std::string origin = {}, SourcePos pos = {})
      : std::runtime_error(format(message, origin, pos)),
        message_(std::move(message)), origin_(std::move(origin)), pos_(pos) {}

  const std::string& message() const noexcept { return message_; }
  const std::string& origin() const noexcept { return origin_; }
  SourcePos pos() const noexcept { return pos_; }

private:
  static std::string format(const std::string& message, const std::string& origin, SourcePos pos) {
    std::string out;
    if (!origin.empty()) out += origin + ":";
    if (pos.line > 0) out += std::to_string(pos.line) + ":" + std::to_string(pos.column) + ":";
    if (!out.empty()) out += " ";
    return out + message;
  }

  std::string message_;
  std::string origin_;
  SourcePos pos_;
};

/// Model text rejected by the lexer or the grammar-driven parser. Reports the
/// farthest position reached and the terminals expected there.
class ParseError : public std::runtime_error {
public:
  ParseError(std::string message, SourcePos pos, std::vector<std::string> expected = {})
      : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message),
        message_(std::move(message)), pos_(pos), expected_(std::move(expected)) {}

  const std::string& message() const noexcept { return message_; }
  SourcePos pos() const noexcept { return pos_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
  std::string message_;
  SourcePos pos_;
  std::vector<std::string> expected_;
};

class DeriveError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace deltaforge
