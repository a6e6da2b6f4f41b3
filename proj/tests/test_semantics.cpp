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

using EdgeText = std::set<std::pair<std::string, std::string>>;

EdgeText edge_text(const NetDocument& net, const PreorderGraph& g, std::size_t component) {
  EdgeText out;
  for (const auto& e : g.edges)
    if (g.component_of(e.from) == component)
      out.insert({format_outcome(net, g.nodes[e.from]), format_outcome(net, g.nodes[e.to])});
  return out;
}

// John at the airport.

class John : public ::testing::Test {
 protected:
  NetDocument net = load("john_ascii.net");
  Outcome o(const char* text) { return parse_outcome(net, text); }
};

TEST_F(John, TwoComponentsOfFour) {
  auto g = induced_preorder(net);
  ASSERT_EQ(g.components.size(), 2u);
  EXPECT_EQ(g.component_labels, (std::vector<std::string>{"S=a", "S=a_bar"}));
  EXPECT_EQ(g.components[0].size(), 4u);
  EXPECT_EQ(g.components[1].size(), 4u);
  EXPECT_EQ(edge_text(net, g, 0), (EdgeText{{"a,o,c", "a,o_bar,c"},
                                            {"a,o,c_bar", "a,o_bar,c_bar"},
                                            {"a,o,c_bar", "a,o,c"},
                                            {"a,o_bar,c_bar", "a,o_bar,c"}}));
  EXPECT_EQ(edge_text(net, g, 1), (EdgeText{{"a_bar,o,c", "a_bar,o_bar,c"},
                                            {"a_bar,o,c", "a_bar,o,c_bar"},
                                            {"a_bar,o,c_bar", "a_bar,o_bar,c_bar"},
                                            {"a_bar,o_bar,c_bar", "a_bar,o_bar,c"}}));
}

TEST_F(John, Dominance) {
  auto r = dominates(net, o("a,o,c_bar"), o("a,o_bar,c"));
  EXPECT_EQ(r.relation, Relation::Dominates);
  ASSERT_EQ(r.witness.size(), 2u);
  EXPECT_EQ(r.witness.front().from, o("a,o,c_bar"));
  EXPECT_EQ(r.witness.back().to, o("a,o_bar,c"));
  EXPECT_EQ(dominates(net, o("a,o_bar,c"), o("a,o,c_bar")).relation, Relation::DominatedBy);
  EXPECT_EQ(dominates(net, o("a,o,c"), o("a,o_bar,c_bar")).relation, Relation::Incomparable);
  EXPECT_EQ(dominates(net, o("a,o,c"), o("a_bar,o,c")).relation, Relation::Incomparable);
  auto same = dominates(net, o("a,o,c"), o("a,o,c"));
  EXPECT_EQ(same.relation, Relation::Equivalent);
  EXPECT_TRUE(same.witness.empty());
}

TEST_F(John, Optimal) {
  EXPECT_EQ(optimal_outcome(net, {{"S", "a"}}), o("a,o,c_bar"));
  EXPECT_EQ(optimal_outcome(net, {{"S", "a_bar"}}), o("a_bar,o,c"));
  EXPECT_THROW(optimal_outcome(net, {}), InvalidOutcome);
  EXPECT_THROW(optimal_outcome(net, {{"S", "b"}}), InvalidOutcome);
}

TEST_F(John, FixingAScenarioKeepsOneComponent) {
  auto g = induced_preorder(net, {{"S", "a_bar"}});
  EXPECT_EQ(g.nodes.size(), 4u);
  EXPECT_EQ(g.components.size(), 1u);
  EXPECT_EQ(g.edges.size(), 4u);
}

TEST_F(John, WorseningFlips) {
  auto flips = worsening_flips(net, o("a_bar,o,c"));
  ASSERT_EQ(flips.size(), 2u);
  for (const auto& f : flips) EXPECT_EQ(f.kind, FlipKind::Worsening);
  EXPECT_TRUE(worsening_flips(net, o("a,o_bar,c")).empty());
}

TEST_F(John, Consistent) { EXPECT_TRUE(is_consistent(net).consistent); }

TEST(Semantics, UnicodeLabelsMatchAscii) {
  auto u = load("john.net");
  auto a = load("john_ascii.net");
  EXPECT_EQ(induced_preorder(u).edges, induced_preorder(a).edges);
  EXPECT_EQ(format_outcome(u, optimal_outcome(u, {{"S", "ā"}})), "ā,o,c");
}

TEST(Semantics, CycleWitness) {
  auto net = load("cyclic.net");
  auto r = is_consistent(net);
  ASSERT_FALSE(r.consistent);
  ASSERT_FALSE(r.cycle.empty());
  EXPECT_EQ(r.cycle.front().from, r.cycle.back().to);
  bool worsening = false;
  for (std::size_t i = 0; i < r.cycle.size(); ++i) {
    worsening = worsening || r.cycle[i].kind == FlipKind::Worsening;
    if (i + 1 < r.cycle.size()) EXPECT_EQ(r.cycle[i].to, r.cycle[i + 1].from);
  }
  EXPECT_TRUE(worsening);
  EXPECT_THROW(optimal_outcome(net, {}), CyclicDependency);
}

TEST(Semantics, TiesAndMissingStatements) {
  auto net = parse_net("variables { A : preference {a1, a2, a3}\n B : preference {b1, b2} <- A }\n"
                       "cptables { A { : a1 ~ a2 > a3 }\n B { a1 : b2 > b1 } }");
  EXPECT_THROW(optimal_outcome(net, {}), AmbiguousTop);
  EXPECT_EQ(format_outcome(net, optimal_outcome(net, {}, {true})), "a1,b2");
  auto r = dominates(net, parse_outcome(net, "a1,b1"), parse_outcome(net, "a2,b1"));
  EXPECT_EQ(r.relation, Relation::Equivalent);
  ASSERT_EQ(r.witness.size(), 1u);
  EXPECT_EQ(r.witness[0].kind, FlipKind::Indifferent);
  // No statement for B under a3 and nothing below a3: B never flips there.
  EXPECT_EQ(dominates(net, parse_outcome(net, "a3,b1"), parse_outcome(net, "a3,b2")).relation,
            Relation::Incomparable);
  // Under a2 the tie with a1 routes B's flip through a1.
  EXPECT_EQ(dominates(net, parse_outcome(net, "a2,b1"), parse_outcome(net, "a2,b2")).relation,
            Relation::DominatedBy);
  EXPECT_THROW(optimal_outcome(parse_net("variables { A : preference {x, y} }"), {}), AmbiguousTop);
}

TEST(Semantics, CapIsEnforced) {
  auto net = load("john_ascii.net");
  SearchOptions opts;
  opts.cap = 5;
  EXPECT_THROW(induced_preorder(net, {}, opts), CapExceeded);
  EXPECT_THROW(dominates(parse_net("variables { A : preference {a, b}\n B : preference {a, b}\n"
                                   "C : preference {a, b} }\n"
                                   "cptables { A { : a > b }\n B { : a > b }\n C { : a > b } }"),
                         Outcome{{std::size_t{0}, std::size_t{0}, std::size_t{0}}},
                         Outcome{{std::size_t{1}, std::size_t{1}, std::size_t{1}}}, 3),
               CapExceeded);
}

TEST(Semantics, EvaluationVariablesRejectedWhereUndefined) {
  auto net = load("queue.net");
  EXPECT_THROW(optimal_outcome(net, {{"location", "Deli"}}), InvalidOutcome);
}

// Properties against the brute-force flip graph.

Relation brute_relation(const oracle::BruteGraph& g, std::size_t a, std::size_t b) {
  bool ab = g.reach[a][b], ba = g.reach[b][a];
  if (ab && ba) return Relation::Equivalent;
  if (ab) return Relation::Dominates;
  if (ba) return Relation::DominatedBy;
  return Relation::Incomparable;
}

void expect_valid_chain(const oracle::BruteGraph& g, const std::vector<FlipEdge>& chain) {
  for (std::size_t i = 0; i < chain.size(); ++i) {
    auto u = g.index.at(oracle::labels_of(chain[i].from));
    auto v = g.index.at(oracle::labels_of(chain[i].to));
    bool found = false;
    for (auto [w, worse] : g.adjacency[u])
      found = found || (w == v && worse == (chain[i].kind == FlipKind::Worsening));
    EXPECT_TRUE(found);
    if (i + 1 < chain.size()) EXPECT_EQ(chain[i].to, chain[i + 1].from);
  }
}

TEST(SemanticsProperty, DominanceMatchesReachability) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    oracle::NetGen gen;
    gen.scenario_vars = trial % 2;
    auto net = oracle::random_net(rng, gen);
    auto g = oracle::brute_graph(net);
    std::uniform_int_distribution<std::size_t> any(0, g.outcomes.size() - 1);
    for (int k = 0; k < 20; ++k) {
      auto a = any(rng), b = any(rng);
      auto r = dominates(net, oracle::outcome_of(g.outcomes[a]), oracle::outcome_of(g.outcomes[b]));
      ASSERT_EQ(r.relation, brute_relation(g, a, b)) << serialize_net(net);
      expect_valid_chain(g, r.witness);
      if (r.relation == Relation::Dominates || (r.relation == Relation::Equivalent && a != b)) {
        ASSERT_FALSE(r.witness.empty());
        EXPECT_EQ(r.witness.front().from, oracle::outcome_of(g.outcomes[a]));
      }
      if (r.relation == Relation::DominatedBy) EXPECT_EQ(r.witness.front().from, oracle::outcome_of(g.outcomes[b]));
    }
  }
}

TEST(SemanticsProperty, WitnessIsShortest) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    auto net = oracle::random_net(rng);
    auto g = oracle::brute_graph(net);
    // Unweighted distances from outcome 0.
    std::vector<std::size_t> dist(g.outcomes.size(), SIZE_MAX);
    std::vector<std::size_t> queue{0};
    dist[0] = 0;
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (auto [v, w] : g.adjacency[queue[q]])
        if (dist[v] == SIZE_MAX) {
          dist[v] = dist[queue[q]] + 1;
          queue.push_back(v);
        }
    for (std::size_t b = 1; b < g.outcomes.size(); ++b) {
      auto r = dominates(net, oracle::outcome_of(g.outcomes[0]), oracle::outcome_of(g.outcomes[b]));
      if (r.relation == Relation::Dominates || r.relation == Relation::Equivalent) EXPECT_EQ(r.witness.size(), dist[b]);
    }
  }
}

TEST(SemanticsProperty, PreorderMatchesFlipGraph) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 150; ++trial) {
    oracle::NetGen gen;
    gen.scenario_vars = trial % 3;
    auto net = oracle::random_net(rng, gen);
    auto g = oracle::brute_graph(net);
    auto p = induced_preorder(net);
    ASSERT_EQ(p.nodes.size(), g.outcomes.size());
    std::set<std::tuple<std::size_t, std::size_t, bool>> got, want;
    for (const auto& e : p.edges)
      got.insert({g.index.at(oracle::labels_of(p.nodes[e.from])), g.index.at(oracle::labels_of(p.nodes[e.to])),
                  e.kind == FlipKind::Worsening});
    for (std::size_t u = 0; u < g.outcomes.size(); ++u)
      for (auto [v, w] : g.adjacency[u]) want.insert({u, v, w});
    ASSERT_EQ(got, want) << serialize_net(net);
    std::set<std::set<std::size_t>> comps;
    for (const auto& c : p.components) {
      std::set<std::size_t> s;
      for (auto n : c) s.insert(g.index.at(oracle::labels_of(p.nodes[n])));
      comps.insert(s);
    }
    EXPECT_EQ(comps, oracle::weak_components(g));
    // Nodes sorted, components ordered by smallest member.
    EXPECT_TRUE(std::is_sorted(p.nodes.begin(), p.nodes.end()));
    for (std::size_t c = 1; c < p.components.size(); ++c)
      EXPECT_LT(p.components[c - 1].front(), p.components[c].front());
  }
}

TEST(SemanticsProperty, ConsistencyMatchesCycleSearch) {
  std::mt19937_64 rng(14);
  int inconsistent = 0;
  for (int trial = 0; trial < 200; ++trial) {
    oracle::NetGen gen;
    gen.allow_cycles = true;
    gen.p_missing_row = 0.0;
    auto net = oracle::random_net(rng, gen);
    auto g = oracle::brute_graph(net);
    auto r = is_consistent(net);
    ASSERT_EQ(!r.consistent, oracle::brute_inconsistent(g)) << serialize_net(net);
    if (!r.consistent) {
      ++inconsistent;
      expect_valid_chain(g, r.cycle);
      EXPECT_EQ(r.cycle.front().from, r.cycle.back().to);
    }
  }
  EXPECT_GT(inconsistent, 10);
}

TEST(SemanticsProperty, AcyclicNetsAreConsistent) {
  std::mt19937_64 rng(15);
  oracle::NetGen gen;
  gen.p_tie = 0.0;
  for (int trial = 0; trial < 100; ++trial) EXPECT_TRUE(is_consistent(oracle::random_net(rng, gen)).consistent);
}

TEST(SemanticsProperty, TiesCanBreakConsistencyOfAcyclicNets) {
  auto net = parse_net("variables { A : preference {a1, a2}\n B : preference {b1, b2} <- A }\n"
                       "cptables { A { : a1 ~ a2 }\n B { a1 : b2 > b1\n a2 : b1 > b2 } }");
  auto r = is_consistent(net);
  EXPECT_FALSE(r.consistent);
  EXPECT_EQ(r.cycle.size(), 4u);
}

TEST(SemanticsProperty, OptimalIsTheUniqueUndominatedOutcome) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 200; ++trial) {
    oracle::NetGen gen;
    gen.scenario_vars = trial % 2;
    gen.p_missing_value = 0.0;
    gen.p_missing_row = 0.0;
    auto net = oracle::random_net(rng, gen);
    Assignment fixed;
    std::map<std::size_t, std::size_t> fixed_idx;
    for (std::size_t v = 0; v < gen.scenario_vars; ++v) {
      std::size_t l = oracle::pick(rng, 0, net.variables[v].labels.size() - 1);
      fixed[net.variables[v].name] = net.variables[v].labels[l];
      fixed_idx[v] = l;
    }
    auto g = oracle::brute_graph(net, fixed_idx);
    auto top = oracle::undominated(g);
    if (top.size() == 1) {
      EXPECT_EQ(optimal_outcome(net, fixed), oracle::outcome_of(g.outcomes[top[0]])) << serialize_net(net);
    } else {
      EXPECT_THROW(optimal_outcome(net, fixed), AmbiguousTop) << serialize_net(net);
      auto o = optimal_outcome(net, fixed, {true});
      EXPECT_NE(std::find(top.begin(), top.end(), g.index.at(oracle::labels_of(o))), top.end())
          << serialize_net(net) << format_outcome(net, o);
    }
  }
}

TEST(SemanticsProperty, TieBreakCanLandOnADominatedOutcomeWithoutAStatement) {
  // B has no statement under a1, so the tie-break keeps b1 although a1,b2 beats it.
  auto net = parse_net("variables { A : preference {a1, a2}\n B : preference {b1, b2} <- A }\n"
                       "cptables { A { : a1 ~ a2 }\n B { a2 : b2 > b1 } }");
  auto o = optimal_outcome(net, {}, {true});
  EXPECT_EQ(format_outcome(net, o), "a1,b1");
  EXPECT_EQ(dominates(net, parse_outcome(net, "a1,b2"), o).relation, Relation::Dominates);
}

TEST(GraphExport, JohnDot) {
  auto net = load("john_ascii.net");
  auto dot = to_dot(net, induced_preorder(net, {{"S", "a"}}));
  EXPECT_EQ(dot,
            "digraph \"S=a\" {\n"
            "  rankdir=TB;\n"
            "  n0 [label=\"a,o,c\"];\n"
            "  n1 [label=\"a,o,c_bar\"];\n"
            "  n2 [label=\"a,o_bar,c\"];\n"
            "  n3 [label=\"a,o_bar,c_bar\"];\n"
            "  n0 -> n2 [label=\"T\"];\n"
            "  n1 -> n3 [label=\"T\"];\n"
            "  n1 -> n0 [label=\"P\"];\n"
            "  n3 -> n2 [label=\"P\"];\n"
            "}\n");
}

TEST(GraphExport, IndifferentPairsOnce) {
  auto net = parse_net("variables { A : preference {x, y} }\ncptables { A { : x ~ y } }");
  auto g = induced_preorder(net);
  EXPECT_EQ(g.edges.size(), 2u);
  auto dot = to_dot(net, g);
  EXPECT_NE(dot.find("n0 -> n1 [label=\"A\", dir=both, style=dashed];"), std::string::npos) << dot;
  EXPECT_EQ(dot.find("n1 -> n0"), std::string::npos);
  EXPECT_EQ(to_edge_csv(net, g), "from,to,variable,kind\nx,y,A,indifferent\ny,x,A,indifferent\n");
}

TEST(GraphExport, JsonLines) {
  auto net = load("john_ascii.net");
  auto text = to_json_lines(net, induced_preorder(net));
  std::istringstream in(text);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("type"));
  }
  EXPECT_EQ(lines, 2u + 8u + 8u);
}

}  // namespace
}  // namespace sepnet
