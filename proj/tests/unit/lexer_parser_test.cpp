#include <gtest/gtest.h>

#include "deltaforge/deltaforge.hpp"
#include "support/workbench.hpp"

using namespace deltaforge;
using namespace deltaforge::testing;

namespace {

std::vector<std::string> texts(const std::vector<Token>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back((t.kind == Token::Kind::identifier ? "id " : "punct ") + t.text);
  return out;
}

FlatGrammar flat_of(const std::string& text) {
  auto g = parse_grammar(text);
  return flatten({g}, g.name);
}

}  // namespace

TEST(Lexer, TransitionHead) {
  EXPECT_EQ(texts(tokenize("Idle -> Call")), (std::vector<std::string>{"id Idle", "punct ->", "id Call"}));
}

TEST(Lexer, SkipsComments) {
  EXPECT_EQ(texts(tokenize("// c\nx")), (std::vector<std::string>{"id x"}));
}

TEST(Lexer, GuardAndCall) {
  EXPECT_EQ(texts(tokenize("[!isEngaged] numberDialed()")),
            (std::vector<std::string>{"punct [", "punct !", "id isEngaged", "punct ]", "id numberDialed", "punct (",
                                      "punct )"}));
}

TEST(Lexer, PositionsAndMaximalMunch) {
  auto ts = tokenize("a\n  ->b", punctuation_for(statecharts().base));
  ASSERT_EQ(ts.size(), 3u);
  EXPECT_EQ(ts[1].line, 2);
  EXPECT_EQ(ts[1].column, 3);
  EXPECT_EQ(ts[1].text, "->");
  EXPECT_THROW(tokenize("a @ b"), ParseError);
}

TEST(Lexer, GrammarSpecificPunctuation) {
  auto g = flat_of(R"(grammar P { A = "<=>" Name; })");
  EXPECT_EQ(texts(tokenize("<=> x", punctuation_for(g))), (std::vector<std::string>{"punct <=>", "id x"}));
}

TEST(Parser, Telephone) {
  auto n = telephone();
  EXPECT_EQ(n.production, "SCDefinition");
  EXPECT_EQ(n.child("name")->text, "Telephone");
  EXPECT_EQ(count_production(n, "elements", "State"), 2u);
  EXPECT_EQ(count_production(n, "elements", "Transition"), 3u);
}

TEST(Parser, VoicemailDelta) {
  auto d = voicemail();
  EXPECT_EQ(delta_name(d), "Voicemail");
  ASSERT_EQ(count_slot(d, "elements"), 1u);
  const auto& m = d.slot("elements")->values[0];
  EXPECT_EQ(m.production, "DeltaModify");
  EXPECT_EQ(count_slot(m, "DeltaOperation"), 6u);
}

TEST(Parser, EmptyStatechart) {
  auto n = statecharts().core("statechart T {}");
  EXPECT_EQ(n.child("name")->text, "T");
  ASSERT_NE(n.slot("elements"), nullptr);
  EXPECT_TRUE(n.slot("elements")->values.empty());
}

TEST(Parser, EverySlotPresentInGrammarOrder) {
  auto n = statecharts().core("statechart T { Idle -> Call; }");
  const auto& t = n.slot("elements")->values[0];
  ASSERT_EQ(t.slots.size(), 3u);
  EXPECT_EQ(t.slots[0].key, "source");
  EXPECT_EQ(t.slots[1].key, "target");
  EXPECT_EQ(t.slots[2].key, "TransitionBody");
  EXPECT_TRUE(t.slots[2].values.empty());
}

TEST(Parser, KeywordsAreContextual) {
  auto n = statecharts().core("statechart state { state statechart; }");
  EXPECT_EQ(n.child("name")->text, "state");
  EXPECT_EQ(n.slot("elements")->values[0].child("name")->text, "statechart");
}

TEST(ParseFragment, RelaxedTransition) {
  const auto& g = statecharts().base;
  auto t = parse_fragment(g, "Transition", "Idle -> Call", true);
  EXPECT_EQ(t.child("source")->text, "Idle");
  EXPECT_EQ(t.child("target")->text, "Call");
  EXPECT_EQ(t.child("TransitionBody"), nullptr);
  EXPECT_THROW(parse_fragment(g, "Transition", "Idle -> Call", false), ParseError);
}

TEST(ParseFragment, State) {
  auto s = parse_fragment(statecharts().base, "State", "state Dialing;", true);
  EXPECT_EQ(s.child("name")->text, "Dialing");
}

TEST(Parser, OrderedChoiceCommitsToFirstMatch) {
  auto g = flat_of(R"(grammar O {
    S = items:Item* ;
    interface Item;
    Short implements Item = "a" ;
    Long implements Item = "a" "b" ;
  })");
  auto n = parse(g, "S", "a a");
  EXPECT_EQ(count_production(n, "items", "Short"), 2u);
  EXPECT_THROW(parse(g, "S", "a b"), ParseError);
}

TEST(Parser, BacktracksInsideAProduction) {
  auto g = flat_of(R"(grammar B { S = ("x" Name)* "x" "end"; })");
  auto n = parse(g, "S", "x a x b x end");
  EXPECT_EQ(count_slot(n, "Name"), 2u);
}

TEST(Parser, FarthestFailureReported) {
  try {
    statecharts().core("statechart T {\n  Idle -> Call : hangUp( ;\n}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.pos().line, 2);
    EXPECT_EQ(e.pos().column, 26);
    EXPECT_NE(std::find(e.expected().begin(), e.expected().end(), "\")\""), e.expected().end())
        << e.what();
  }
}

TEST(Parser, TruncatedInputListsExpectedTerminals) {
  try {
    statecharts().core("statechart T { state A");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_FALSE(e.expected().empty());
    EXPECT_NE(std::string(e.what()).find("end of input"), std::string::npos) << e.what();
  }
}

TEST(Parser, UnknownStartProduction) {
  EXPECT_THROW(parse(statecharts().base, "Nope", "x"), GrammarError);
}
