#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace deltaforge {

/// Grammar and model text shipped with the library.
struct BuiltinAsset {
  std::string_view id;
  std::string_view content;
};

namespace detail {

// Generated at configure time from the assets/ directory.
inline const std::vector<BuiltinAsset>& embedded_assets() {
  static const std::vector<BuiltinAsset> assets{
#include "deltaforge/builtin_assets.inc"
  };
  return assets;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline std::vector<std::string> builtin_ids() {
  std::vector<std::string> ids;
  for (const auto& a : detail::embedded_assets()) ids.emplace_back(a.id);
  return ids;
}

/// Returns the text of a bundled asset. When DELTAFORGE_ASSETS names a
/// directory holding a file of that id, the file wins over the copy compiled
/// into the library.
inline std::string load_builtin(std::string_view id) {
  const BuiltinAsset* found = nullptr;
  for (const auto& a : detail::embedded_assets())
    if (a.id == id) found = &a;
  if (!found) throw std::invalid_argument("unknown builtin asset '" + std::string(id) + "'");
  if (const char* dir = std::getenv("DELTAFORGE_ASSETS"); dir && *dir) {
    auto path = std::filesystem::path(dir) / std::string(id);
    if (std::filesystem::is_regular_file(path)) return detail::read_file(path);
  }
  return std::string(found->content);
}

}  // namespace deltaforge
