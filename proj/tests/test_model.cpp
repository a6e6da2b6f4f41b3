#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "sepnet/sepnet.hpp"
#include "support/oracles.hpp"

namespace sepnet {
namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(SEPNET_DATA_DIR) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(NetFormat, ParsesJohn) {
  auto net = parse_net(slurp("john.net"));
  EXPECT_EQ(net.name, "john");
  ASSERT_EQ(net.variables.size(), 3u);
  EXPECT_EQ(net.variables[0].var_class, VarClass::Scenario);
  EXPECT_EQ(net.variables[2].labels, (std::vector<std::string>{"c", "c̄"}));
  EXPECT_EQ(net.variables[2].parents, (std::vector<std::string>{"S", "T"}));
  const auto& p = net.cp_tables.at("P");
  ASSERT_EQ(p.size(), 4u);
  EXPECT_EQ(p[2].context, (std::vector<std::string>{"ā", "o"}));
  EXPECT_EQ(p[2].strata, (std::vector<Stratum>{{"c"}, {"c̄"}}));
  EXPECT_EQ(net.cp_tables.at("T")[0].context, std::vector<std::string>{});
}

TEST(NetFormat, ParsesSepNet) {
  auto net = parse_net(slurp("queue.net"));
  const auto* l = net.find("likelihood");
  ASSERT_NE(l, nullptr);
  EXPECT_EQ(l->var_class, VarClass::Evaluation);
  EXPECT_EQ(l->range, (Range{0, 100}));
  EXPECT_EQ(*l->buckets, (BucketBounds{25, 50, 75}));
  const auto& rows = net.cp_tables.at("judgment");
  EXPECT_EQ(rows[1].strata, (std::vector<Stratum>{{"yes", "no"}}));
  EXPECT_EQ(rows[2].annotation, 0.9);
  EXPECT_EQ(net.eval_functions.at("likelihood").find({"Bathroom"})->value, 40.0);
}

TEST(NetFormat, DataFilesRoundTrip) {
  for (const char* f : {"john.net", "john_ascii.net", "john_sep.net", "cyclic.net", "single.net", "queue.net"}) {
    SCOPED_TRACE(f);
    auto net = parse_net(slurp(f));
    auto text = serialize_net(net);
    EXPECT_EQ(parse_net(text), net);
    EXPECT_EQ(serialize_net(parse_net(text)), text);
  }
}

TEST(NetFormat, RandomNetsRoundTrip) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    oracle::NetGen g;
    g.scenario_vars = i % 3;
    g.allow_cycles = i % 4 == 0;
    auto net = oracle::random_net(rng, g);
    // The parser lists tied values in declaration order.
    for (auto& [name, rows] : net.cp_tables) {
      const auto* var = net.find(name);
      for (auto& st : rows)
        for (auto& s : st.strata)
          std::sort(s.begin(), s.end(), [&](const auto& a, const auto& b) { return *var->label_index(a) < *var->label_index(b); });
    }
    auto back = parse_net(serialize_net(net));
    EXPECT_TRUE(back == net) << serialize_net(net);
    EXPECT_EQ(serialize_net(back), serialize_net(net));
  }
}

TEST(NetFormat, ErrorsCarryPosition) {
  try {
    parse_net("net x\nvariables {\n  A : preference {a1 a2}\n}\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_GT(e.column(), 1u);
  }
  EXPECT_THROW(parse_net("variables { A : colour {x} }"), ParseError);
  EXPECT_THROW(parse_net("variables { A : preference {a, b} <- B }"), ParseError);
  EXPECT_THROW(parse_net("variables { A : preference {a, b} }\ncptables { A { : a > b > } }"), ParseError);
}

TEST(Validate, DataFiles) {
  EXPECT_TRUE(validate(parse_net(slurp("john.net"))).ok());
  EXPECT_TRUE(validate(parse_net(slurp("queue.net"))).ok());
  auto cyc = validate(parse_net(slurp("cyclic.net")));
  EXPECT_FALSE(cyc.ok());
  EXPECT_TRUE(cyc.has_violation("cycle"));
}

TEST(Validate, Findings) {
  auto check = [](const std::string& text, const char* code) {
    auto r = validate(parse_net(text));
    EXPECT_TRUE(r.has_violation(code) || r.has_note(code)) << code;
  };
  check("variables { A : preference {a, a} }", "duplicate-label");
  check("variables { A : preference {a, b} <- A }", "self-parent");
  check("variables { S : scenario {s} <- A\n A : preference {a, b} }", "scenario-parent");
  check("variables { A : preference {a, b} }\ncptables { A { : a > a } }", "value-in-two-strata");
  check("variables { A : preference {a, b} }\ncptables { A { : a > b\n : b > a } }", "duplicate-context");
  check("variables { A : preference {a, b, c} }\ncptables { A { : a > b } }", "uncovered-values");
  check("variables { A : preference {a, b} <- B\n B : preference {x, y} }\ncptables { A { x : a > b } }",
        "missing-statements");
  check("variables { E : evaluation [0, 10] }\nevalfunctions { E { : 11 } }", "ef-out-of-range");
  check("variables { E : evaluation [5, 1] }", "bad-range");
  check("variables { E : evaluation [0, 10]\n A : preference {a, b} <- E }", "missing-buckets");
  // The parser rejects unknown values, so build the document directly.
  auto net = parse_net("variables { A : preference {a, b} }\ncptables { A { : a > b } }");
  net.cp_tables.at("A")[0].strata[1] = {"c"};
  EXPECT_TRUE(validate(net).has_violation("unknown-value"));
  EXPECT_THROW(parse_net("variables { A : preference {a, b} }\ncptables { A { : a > c } }"), ParseError);
}

TEST(Model, OutcomesAndOrder) {
  auto net = parse_net(slurp("john_ascii.net"));
  auto all = enumerate_outcomes(net);
  EXPECT_EQ(all.size(), 8u);
  EXPECT_EQ(format_outcome(net, all.front()), "a,o,c");
  EXPECT_EQ(parse_outcome(net, "S=a_bar,T=o,P=c_bar"), parse_outcome(net, "a_bar,o,c_bar"));
  EXPECT_THROW(parse_outcome(net, "a,o"), InvalidOutcome);
  EXPECT_THROW(parse_outcome(net, "a,o,x"), InvalidOutcome);
  EXPECT_THROW(enumerate_outcomes(net, {}, 7), CapExceeded);
  auto order = topological_order(net);
  ASSERT_TRUE(order);
  EXPECT_EQ(order->back(), 2u);
  EXPECT_FALSE(topological_order(parse_net(slurp("cyclic.net"))));
}

TEST(Model, BucketBoundariesGoDown) {
  BucketBounds b{25, 50, 75};
  EXPECT_EQ(bucket_of(25, b), 0u);
  EXPECT_EQ(bucket_of(25.5, b), 1u);
  EXPECT_EQ(bucket_of(75, b), 2u);
  EXPECT_EQ(bucket_of(100, b), 3u);
}

}  // namespace
}  // namespace sepnet
