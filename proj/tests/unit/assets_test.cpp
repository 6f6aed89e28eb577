#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "deltaforge/deltaforge.hpp"

using namespace deltaforge;

TEST(Assets, BundledContent) {
  EXPECT_NE(load_builtin("telephone.sc").find("initial state Idle;"), std::string::npos);
  EXPECT_NE(load_builtin("voicemail.delta").find("set source Dialing;"), std::string::npos);
  EXPECT_NE(load_builtin("extended-delta-statechart.dg").find("= \"transition\";"), std::string::npos);
  EXPECT_NE(load_builtin("delta-common.dg").find("elements:DeltaElement*"), std::string::npos);
}

TEST(Assets, AllIdsPresent) {
  for (const auto* id : {"delta-common.dg", "statechart.dg", "delta-statechart.golden.dg",
                         "extended-delta-statechart.dg", "telephone.sc", "voicemail.delta", "telephone-voicemail.sc"})
    EXPECT_FALSE(load_builtin(id).empty()) << id;
}

TEST(Assets, UnknownId) { EXPECT_THROW(load_builtin("nope.dg"), std::invalid_argument); }

TEST(Assets, EmbeddedMatchesDisk) {
  for (const auto& id : builtin_ids())
    EXPECT_EQ(load_builtin(id), detail::read_file(std::filesystem::path(DELTAFORGE_SOURCE_ASSETS) / id)) << id;
}

TEST(Assets, EnvironmentOverride) {
  auto dir = std::filesystem::temp_directory_path() / "deltaforge-assets-test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "telephone.sc") << "statechart Other {}";
  setenv("DELTAFORGE_ASSETS", dir.c_str(), 1);
  auto overridden = load_builtin("telephone.sc");
  auto fallback = load_builtin("voicemail.delta");
  unsetenv("DELTAFORGE_ASSETS");
  EXPECT_EQ(overridden, "statechart Other {}");
  EXPECT_NE(fallback.find("delta Voicemail"), std::string::npos);
  std::filesystem::remove_all(dir);
}
