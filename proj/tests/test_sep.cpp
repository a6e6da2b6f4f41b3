#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include <gtest/gtest.h>

#include "sepnet/sepnet.hpp"
#include "support/oracles.hpp"

namespace sepnet {
namespace {

NetDocument load(const std::string& name) {
  std::ifstream in(std::string(SEPNET_DATA_DIR) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_net(ss.str());
}

TEST(Sep, JohnAsScenario) {
  auto net = load("john_sep.net");
  auto scenarios = all_scenarios(net);
  ASSERT_EQ(scenarios.size(), 4u);
  std::vector<std::string> got;
  for (const auto& s : scenarios) got.push_back(scenario_label(net, s) + ":" + sep_optimal(net, s).preferences.at("P"));
  EXPECT_EQ(got, (std::vector<std::string>{"S=a,T=o:c_bar", "S=a,T=o_bar:c_bar", "S=a_bar,T=o:c",
                                           "S=a_bar,T=o_bar:c_bar"}));
  auto g = sep_order(net, scenarios);
  ASSERT_EQ(g.components.size(), 4u);
  for (const auto& c : g.components) EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(g.edges.size(), 4u);
  EXPECT_EQ(g.component_labels[2], "S=a_bar,T=o");
}

TEST(Sep, ScenarioOrderAndDuplicates) {
  auto net = load("john_sep.net");
  std::vector<ScenarioAssignment> s{{{"S", "a_bar"}, {"T", "o"}}, {{"S", "a"}, {"T", "o"}}, {{"S", "a"}, {"T", "o"}}};
  auto g = sep_order(net, s);
  EXPECT_EQ(g.component_labels, (std::vector<std::string>{"S=a,T=o", "S=a_bar,T=o"}));
  EXPECT_THROW(sep_order(net, {{{"S", "a"}}}), InvalidOutcome);
  EXPECT_THROW(sep_optimal(net, {{"S", "a"}, {"T", "o"}, {"P", "c"}}), InvalidOutcome);
}

TEST(Sep, EvaluationFunctionAndProjection) {
  auto net = load("queue.net");
  EXPECT_EQ(apply_ef(net, {{"location", "Bathroom"}}).at("likelihood"), 40.0);
  auto p = project(net, {{"location", "Deli"}});
  EXPECT_TRUE(p.missing.empty());
  EXPECT_EQ(p.fixed_context.at("judgment"), (std::vector<std::string>{"Deli", "Q3"}));
  const auto& rows = p.net.cp_tables.at("judgment");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].context.empty());
  EXPECT_EQ(rows[0].strata, (std::vector<Stratum>{{"no"}, {"yes"}}));
  EXPECT_EQ(rows[0].annotation, 0.2);
}

TEST(Sep, QueueOptima) {
  auto net = load("queue.net");
  auto deli = sep_optimal(net, {{"location", "Deli"}});
  EXPECT_EQ(deli.evaluations.at("likelihood"), 62.0);
  EXPECT_EQ(deli.preferences.at("judgment"), "no");
  EXPECT_EQ(sep_optimal(net, {{"location", "Airport"}}).preferences.at("judgment"), "yes");
  try {
    sep_optimal(net, {{"location", "Bathroom"}});
    FAIL() << "expected AmbiguousTop";
  } catch (const AmbiguousTop& e) {
    EXPECT_EQ(e.variable(), "judgment");
    EXPECT_EQ(e.context(), (std::vector<std::string>{"Bathroom", "Q2"}));
    EXPECT_EQ(e.tied(), (std::vector<std::string>{"yes", "no"}));
  }
  EXPECT_EQ(sep_optimal(net, {{"location", "Bathroom"}}, {true}).preferences.at("judgment"), "yes");
  auto row = sep_record_row(net, deli);
  EXPECT_EQ(detail::join(sep_record_header(net), ","), "scenario.location,eval.likelihood,pref.judgment");
  EXPECT_EQ(detail::join(row, ","), "Deli,62,no");
  EXPECT_EQ(to_sep_outcome(net, to_outcome(net, deli)), deli);
}

TEST(Sep, MissingPieces) {
  auto net = load("queue.net");
  net.eval_functions.at("likelihood").table.pop_back();
  EXPECT_THROW(apply_ef(net, {{"location", "Airport"}}), MissingEfEntry);

  net = load("queue.net");
  net.eval_functions.at("likelihood").table[0].value = 10;
  auto p = project(net, {{"location", "Deli"}});
  ASSERT_EQ(p.missing.size(), 1u);
  EXPECT_EQ(p.missing[0].context, (std::vector<std::string>{"Deli", "Q1"}));
  EXPECT_THROW(sep_optimal(net, {{"location", "Deli"}}), AmbiguousTop);
}

TEST(Sep, OffEfOutcomesAreIsolated) {
  auto net = load("queue.net");
  SepOrderOptions opts;
  opts.include_off_ef = true;
  opts.grid["likelihood"] = {10, 62};
  auto g = sep_order(net, {{{"location", "Deli"}}}, opts);
  ASSERT_EQ(g.components.size(), 3u);
  EXPECT_EQ(g.components[0].size(), 2u);
  EXPECT_EQ(g.component_labels[1], "location=Deli off-ef");
  EXPECT_EQ(g.edges.size(), 1u);
  EXPECT_EQ(format_outcome(net, g.nodes[g.components[1][0]]).substr(0, 8), "Deli,10,");
  opts.cap = 3;
  EXPECT_THROW(sep_order(net, {{{"location", "Deli"}}}, opts), CapExceeded);
}

// Without evaluation variables a SEP-net is a CP-net with its scenario fixed.
TEST(SepProperty, AgreesWithFixedScenarioCpNet) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 150; ++trial) {
    oracle::NetGen gen;
    gen.scenario_vars = 1 + trial % 2;
    gen.p_missing_value = 0.0;
    auto net = oracle::random_net(rng, gen);
    auto scenarios = all_scenarios(net);
    auto g = sep_order(net, scenarios);
    auto whole = induced_preorder(net);
    ASSERT_EQ(g.components.size(), scenarios.size());
    std::set<std::tuple<Outcome, Outcome, bool>> a, b;
    for (const auto& e : g.edges) a.insert({g.nodes[e.from], g.nodes[e.to], e.kind == FlipKind::Worsening});
    for (const auto& e : whole.edges) b.insert({whole.nodes[e.from], whole.nodes[e.to], e.kind == FlipKind::Worsening});
    EXPECT_EQ(a, b) << serialize_net(net);
    for (const auto& s : scenarios) {
      std::optional<Outcome> cp;
      bool cp_tied = false;
      try {
        cp = optimal_outcome(net, s);
      } catch (const AmbiguousTop&) {
        cp_tied = true;
      }
      if (cp_tied) {
        EXPECT_THROW(sep_optimal(net, s), AmbiguousTop);
      } else {
        EXPECT_EQ(to_outcome(net, sep_optimal(net, s)), *cp);
      }
    }
  }
}

}  // namespace
}  // namespace sepnet
