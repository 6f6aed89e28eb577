#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"
#include "support/workbench.hpp"

using namespace deltaforge;
using namespace deltaforge::testing;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("deltaforge-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    for (const auto* id : {"statechart.dg", "extended-delta-statechart.dg", "telephone.sc", "voicemail.delta",
                           "telephone-voicemail.sc", "delta-common.dg"})
      write(id, load_builtin(id));
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& content) const {
    std::ofstream(dir_ / name, std::ios::binary) << content;
  }

  std::string read(const std::string& name) const { return deltaforge::detail::read_file(dir_ / name); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "deltaforge");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str({});
    err_.str({});
    return cli::run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  int derive() { return run({"derive", "--grammar", path("statechart.dg"), "--out", path("delta-statechart.dg")}); }

  std::vector<std::string> model_args(const std::string& cmd, const std::vector<std::string>& deltas) {
    std::vector<std::string> a{cmd,        "--grammar", path("statechart.dg"), "--delta-grammar", path("delta-statechart.dg"),
                               "--extend", path("extended-delta-statechart.dg"), "--core", path("telephone.sc")};
    for (const auto& d : deltas) {
      a.push_back("--delta");
      a.push_back(path(d));
    }
    return a;
  }

  std::size_t lines_with(const std::string& needle) const {
    std::istringstream in(out_.str());
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) n += line.find(needle) != std::string::npos;
    return n;
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

}  // namespace

TEST_F(Cli, DeriveMatchesGolden) {
  EXPECT_EQ(derive(), 0);
  EXPECT_EQ(read("delta-statechart.dg"), load_builtin("delta-statechart.golden.dg"));
  EXPECT_NE(out_.str().find("TransitionIdentifier"), std::string::npos);
  EXPECT_NE(out_.str().find("1b"), std::string::npos);
}

TEST_F(Cli, DeriveLeftRecursiveGrammar) {
  write("lr.dg", "grammar LR { A = A \"x\" | \"y\"; }");
  EXPECT_EQ(run({"derive", "--grammar", path("lr.dg"), "--out", path("out.dg")}), 1);
  EXPECT_NE(out_.str().find("DERIVE"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("out.dg")));
}

TEST_F(Cli, DeriveMissingFile) {
  EXPECT_EQ(run({"derive", "--grammar", path("missing.dg"), "--out", path("out.dg")}), 2);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"derive"}), 2);
  EXPECT_EQ(run({"bogus"}), 2);
  EXPECT_EQ(run({"--help"}), 0);
}

TEST_F(Cli, CheckCaseStudy) {
  ASSERT_EQ(derive(), 0);
  EXPECT_EQ(run(model_args("check", {"voicemail.delta"})), 0) << out_.str();
  EXPECT_TRUE(out_.str().empty());
}

TEST_F(Cli, CheckDuplicateState) {
  ASSERT_EQ(derive(), 0);
  write("dup.delta", telephone_delta("add state Idle;"));
  EXPECT_EQ(run(model_args("check", {"dup.delta"})), 1);
  EXPECT_EQ(lines_with("CC6"), 1u);
  EXPECT_EQ(lines_with("CC"), 1u);
}

TEST_F(Cli, CheckCircularOrder) {
  ASSERT_EQ(derive(), 0);
  write("a.delta", "delta A after B { }");
  write("b.delta", "delta B after A { }");
  EXPECT_EQ(run(model_args("check", {"a.delta", "b.delta"})), 1);
  EXPECT_GE(lines_with("AOC"), 1u);
  EXPECT_EQ(run(model_args("check", {"b.delta", "a.delta"})), 1);
  EXPECT_GE(lines_with("AOC"), 1u);
}

TEST_F(Cli, CheckJsonLines) {
  ASSERT_EQ(derive(), 0);
  write("dup.delta", telephone_delta("add state Idle;"));
  auto args = model_args("check", {"dup.delta"});
  args.push_back("--json");
  EXPECT_EQ(run(args), 1);
  auto j = nlohmann::json::parse(out_.str());
  EXPECT_EQ(j["code"], "CC6");
  EXPECT_EQ(j["file"], path("dup.delta"));
  EXPECT_EQ(j["line"], 3);
}

TEST_F(Cli, CheckParseErrorInDelta) {
  ASSERT_EQ(derive(), 0);
  write("bad.delta", "delta B { modify statechart Telephone { add } }");
  EXPECT_EQ(run(model_args("check", {"bad.delta"})), 1);
  EXPECT_EQ(lines_with("PARSE"), 1u);
}

TEST_F(Cli, ApplyCaseStudy) {
  ASSERT_EQ(derive(), 0);
  auto args = model_args("apply", {"voicemail.delta"});
  args.insert(args.end(), {"--out", path("variant.sc")});
  EXPECT_EQ(run(args), 0) << out_.str();
  const auto& w = statecharts();
  EXPECT_TRUE(node_eq(w.core(read("variant.sc")), telephone_voicemail(), {"elements"}));
}

TEST_F(Cli, ApplyEmptyDelta) {
  ASSERT_EQ(derive(), 0);
  write("empty.delta", "delta Empty { }");
  auto args = model_args("apply", {"empty.delta"});
  args.insert(args.end(), {"--out", path("variant.sc")});
  EXPECT_EQ(run(args), 0);
  EXPECT_TRUE(node_eq(statecharts().core(read("variant.sc")), telephone()));
}

TEST_F(Cli, ApplyFailingDeltaWritesNothing) {
  ASSERT_EQ(derive(), 0);
  write("cc7.delta", telephone_delta("remove Nope;"));
  auto args = model_args("apply", {"cc7.delta"});
  args.insert(args.end(), {"--out", path("variant.sc")});
  EXPECT_EQ(run(args), 1);
  EXPECT_EQ(lines_with("CC7"), 1u);
  EXPECT_FALSE(fs::exists(path("variant.sc")));
}

TEST_F(Cli, ApplyMissingDelta) {
  ASSERT_EQ(derive(), 0);
  auto args = model_args("apply", {"missing.delta"});
  args.insert(args.end(), {"--out", path("variant.sc")});
  EXPECT_EQ(run(args), 2);
}

TEST_F(Cli, ParseJson) {
  EXPECT_EQ(run({"parse", "--grammar", path("statechart.dg"), "--input", path("telephone.sc"), "--json"}), 0);
  auto j = nlohmann::json::parse(out_.str());
  EXPECT_EQ(j["production"], "SCDefinition");
  EXPECT_EQ(j["slots"][1][0], "elements");
  EXPECT_EQ(j["slots"][1][1].size(), 5u);
}

TEST_F(Cli, ParseOutlineAndEmptyModel) {
  write("t.sc", "statechart T {}");
  EXPECT_EQ(run({"parse", "--grammar", path("statechart.dg"), "--input", path("t.sc")}), 0);
  EXPECT_EQ(out_.str(), "SCDefinition\n  name: Name \"T\"\n");
}

TEST_F(Cli, ParseTruncatedInput) {
  write("t.sc", "statechart T { state");
  EXPECT_EQ(run({"parse", "--grammar", path("statechart.dg"), "--input", path("t.sc")}), 1);
  EXPECT_NE(out_.str().find("PARSE"), std::string::npos);
  EXPECT_NE(out_.str().find("expected one of"), std::string::npos);
}

TEST_F(Cli, ParseDeltaWithGrammarChain) {
  ASSERT_EQ(derive(), 0);
  EXPECT_EQ(run({"parse", "--grammar", path("extended-delta-statechart.dg"), "--grammar", path("delta-statechart.dg"),
                 "--grammar", path("statechart.dg"), "--start", "Delta", "--input", path("voicemail.delta")}),
            0)
      << out_.str();
  EXPECT_EQ(out_.str().rfind("Delta\n", 0), 0u);
}
