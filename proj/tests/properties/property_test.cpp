#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "deltaforge/deltaforge.hpp"
#include "support/generators.hpp"
#include "support/workbench.hpp"

using namespace deltaforge;
using namespace deltaforge::testing;

namespace {

constexpr int kGrammars = 60;
constexpr int kModels = 150;

struct Derived {
  RandomGrammar source;
  Grammar base;
  FlatGrammar flat;
  DerivedGrammar derived;
};

Derived derive_random(Random& rnd, int i) {
  Derived d{random_grammar(rnd, i), {}, {}, {}};
  d.base = parse_grammar(d.source.text);
  d.flat = flatten({d.base}, d.base.name);
  d.derived = derive(d.flat, d.base.name);
  return d;
}

std::set<std::string> top_level_names(const Node& core) {
  std::set<std::string> out;
  for (const auto& e : core.slot("elements")->values)
    if (e.production == "State") out.insert(e.child("name")->text);
  return out;
}

std::string random_delta(Random& rnd, const Node& core) {
  std::vector<std::string> names{"Idle", "Busy", "Fresh", "Other", "Call"};
  for (const auto& n : top_level_names(core)) names.push_back(n);
  std::string body;
  int ops = rnd.between(0, 4);
  for (int i = 0; i < ops; ++i) {
    switch (rnd.between(0, 4)) {
      case 0: body += "add state " + rnd.pick(names) + ";\n"; break;
      case 1: body += "remove " + rnd.pick(names) + ";\n"; break;
      case 2: body += "modify state " + rnd.pick(names) + " { set name " + rnd.pick(names) + "; }\n"; break;
      case 3: body += "add " + rnd.pick(names) + " -> " + rnd.pick(names) + ": dial();\n"; break;
      default: body += "modify state " + rnd.pick(names) + " { add state " + rnd.pick(names) + "; }\n"; break;
    }
  }
  return "delta R { modify statechart " + core.child("name")->text + " {\n" + body + "} }";
}

}  // namespace

TEST(DerivationProperties, RandomGrammars) {
  Random rnd(20261014);
  const auto common = delta_common_grammar();
  std::set<std::string> common_names;
  for (const auto& p : common.productions) common_names.insert(p.name);

  for (int i = 0; i < kGrammars; ++i) {
    auto d = derive_random(rnd, i);
    SCOPED_TRACE(d.source.text);

    EXPECT_NO_THROW(flatten({d.derived.grammar, common, d.base}, d.derived.grammar.name));

    std::set<std::string> generated;
    for (const auto& p : d.derived.grammar.productions) {
      EXPECT_TRUE(generated.insert(p.name).second) << p.name;
      EXPECT_FALSE(d.flat.has(p.name)) << p.name;
      EXPECT_FALSE(common_names.count(p.name)) << p.name;
      EXPECT_EQ(p.implements.size(), 1u) << p.name;
      const auto& iface = p.implements.front();
      EXPECT_TRUE(iface == "ModelElementIdentifier" || iface == "ScopeIdentifier" || iface == "DeltaOperation");
    }

    for (const auto& n : d.source.concrete) {
      EXPECT_TRUE(generated.count("Delta" + n + "ScopeIdentifier")) << n;
      EXPECT_TRUE(generated.count("Delta" + n + "Operation")) << n;
      EXPECT_EQ(generated.count(n + "Identifier") == 1, d.source.named.count(n) == 0) << n;
      for (const auto& label : d.source.labels[n]) {
        auto cap = label;
        cap[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(cap[0])));
        EXPECT_TRUE(generated.count("Delta" + n + cap + "Operation")) << n << " " << label;
      }
    }
    for (const auto& n : d.source.interfaces) EXPECT_FALSE(generated.count("Delta" + n + "Operation"));

    auto text = render_grammar(d.derived.grammar);
    EXPECT_EQ(render_grammar(parse_grammar(text)), text);
    EXPECT_EQ(parse_grammar(render_grammar(d.base)), d.base);
    EXPECT_EQ(render_grammar(derive(d.flat, d.base.name).grammar), text);
  }
}

TEST(ModelProperties, PrintParseRoundTrip) {
  Random rnd(7);
  StatechartWriter writer(rnd);
  const auto& w = statecharts();
  for (int i = 0; i < kModels; ++i) {
    auto text = writer.model(i);
    SCOPED_TRACE(text);
    auto n = w.core(text);
    auto printed = pretty_print(w.base, n);
    auto again = w.core(printed);
    EXPECT_TRUE(node_eq(n, again));
    EXPECT_EQ(pretty_print(w.base, again), printed);
  }
}

TEST(ModelProperties, UnorderedComparisonIgnoresPermutation) {
  Random rnd(11);
  StatechartWriter writer(rnd);
  const auto& w = statecharts();
  std::mt19937 shuffle_rng(3);
  for (int i = 0; i < 50; ++i) {
    auto n = w.core(writer.model(i));
    auto shuffled = n;
    auto& values = shuffled.slot("elements")->values;
    std::shuffle(values.begin(), values.end(), shuffle_rng);
    EXPECT_TRUE(node_eq(n, shuffled, {"elements"}));
  }
}

TEST(DeltaProperties, EmptyDeltaAndPurity) {
  Random rnd(99);
  StatechartWriter writer(rnd);
  const auto& w = statecharts();
  auto empty = w.delta_model("delta E { }");
  for (int i = 0; i < kModels; ++i) {
    auto core = w.core(writer.model(i));
    auto copy = core;
    EXPECT_TRUE(node_eq(apply(core, empty, w.base, w.delta), core));
    auto delta = w.delta_model(random_delta(rnd, core));
    auto delta_copy = delta;
    check_delta(core, delta, w.base, w.delta);
    try {
      apply(core, delta, w.base, w.delta);
    } catch (const ApplyError&) {
    }
    EXPECT_TRUE(node_eq(core, copy));
    EXPECT_TRUE(node_eq(delta, delta_copy));
  }
}

TEST(DeltaProperties, CheckPredictsApply) {
  Random rnd(1234);
  StatechartWriter writer(rnd);
  const auto& w = statecharts();
  int clean = 0;
  for (int i = 0; i < kModels; ++i) {
    auto core = w.core(writer.model(i));
    auto text = random_delta(rnd, core);
    SCOPED_TRACE(text);
    auto delta = w.delta_model(text);
    bool errors = has_errors(check_delta(core, delta, w.base, w.delta));
    bool failed = false;
    try {
      apply(core, delta, w.base, w.delta);
    } catch (const ApplyError&) {
      failed = true;
    }
    EXPECT_EQ(errors, failed);
    clean += !errors;
  }
  EXPECT_GT(clean, kModels / 10);
}

TEST(DeltaProperties, AddTwiceAndRemoveTwice) {
  Random rnd(5);
  StatechartWriter writer(rnd);
  const auto& w = statecharts();
  for (int i = 0; i < 50; ++i) {
    auto core = w.core(writer.model(i));
    const auto& name = core.child("name")->text;
    auto added = w.delta_model("delta A { modify statechart " + name + " { add state Zz; } }");
    auto grown = apply(core, added, w.base, w.delta);
    auto again = check_delta(grown, added, w.base, w.delta);
    ASSERT_EQ(again.size(), 1u);
    EXPECT_EQ(again[0].code, Code::CC6);

    auto removed = w.delta_model("delta R { modify statechart " + name + " { remove Zz; } }");
    auto shrunk = apply(grown, removed, w.base, w.delta);
    EXPECT_TRUE(node_eq(shrunk, core));
    auto twice = check_delta(shrunk, removed, w.base, w.delta);
    ASSERT_EQ(twice.size(), 1u);
    EXPECT_EQ(twice[0].code, Code::CC7);
  }
}

TEST(AocProperties, RandomConstraintsOverAllOrders) {
  Random rnd(42);
  const std::vector<std::string> names{"A", "B", "C"};
  const auto& w = statecharts();
  for (int i = 0; i < 40; ++i) {
    auto aoc = random_aoc(rnd, names);
    std::map<std::string, std::string> texts{
        {"A", "delta A { }"}, {"B", "delta B { }"}, {"C", "delta C after " + aoc.text() + " { }"}};
    auto order = names;
    do {
      ApplicationPlan plan;
      for (const auto& n : order) plan.add(w.delta_model(texts[n]));
      std::set<std::string> before;
      for (const auto& n : order) {
        if (n == "C") break;
        before.insert(n);
      }
      EXPECT_EQ(has_errors(validate_order(plan)), !aoc.holds(before)) << aoc.text();
    } while (std::next_permutation(order.begin(), order.end()));
  }
}
