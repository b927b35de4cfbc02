#include <gtest/gtest.h>

#include <set>

#include "tapf/flow.hpp"
#include "tapf/flow_paths.hpp"
#include "tapf/low_level.hpp"
#include "tapf/network.hpp"
#include "test_support.hpp"

using namespace tapf;

namespace {

using E = std::vector<std::pair<VertexId, VertexId>>;

Graph single_edge() { return Graph::from_edges(2, E{{0, 1}}); }

// Six-vertex example graph: a..f = 0..5 with edges a-c, b-c, c-d, d-e, d-f.
Graph two_teams_graph() { return Graph::from_edges(6, E{{0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}}); }

NetworkOptions unpruned() {
  NetworkOptions o;
  o.prune = false;
  return o;
}

}  // namespace

TEST(Network, CountsMatchClosedForms) {
  testutil::Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    Graph g = testutil::random_connected_graph(rng, testutil::uniform(rng, 2, 7), 0.3);
    for (int T = 0; T <= 6; ++T) {
      TimeExpandedNetwork net(g, T);
      const int V = g.vertex_count(), Ecount = g.edge_count();
      EXPECT_EQ(net.node_count(), V * (2 * T + 1) + 2 * Ecount * T);
      EXPECT_EQ(net.arc_count(), V * T + V * T + 5 * Ecount * T);
      // Direct count: distinct described nodes, arcs per kind.
      std::set<std::tuple<int, int, int>> seen;
      for (int n = 0; n < net.node_count(); ++n) {
        auto d = net.describe(n);
        seen.insert({static_cast<int>(d.kind), d.index, d.t});
      }
      EXPECT_EQ(static_cast<int>(seen.size()), net.node_count());
      int stay = 0, cap = 0, gadget = 0;
      for (const Arc& a : net.arcs()) {
        auto f = net.describe(a.from), t = net.describe(a.to);
        EXPECT_EQ(a.capacity, 1);
        if (f.kind == NodeKind::kOut && t.kind == NodeKind::kIn) {
          EXPECT_EQ(f.index, t.index);
          EXPECT_EQ(f.t + 1, t.t);
          ++stay;
        } else if (f.kind == NodeKind::kIn && t.kind == NodeKind::kOut) {
          EXPECT_EQ(f.index, t.index);
          EXPECT_EQ(f.t, t.t);
          EXPECT_GE(f.t, 1);
          ++cap;
        } else {
          ++gadget;
        }
      }
      EXPECT_EQ(stay, V * T);
      EXPECT_EQ(cap, V * T);
      EXPECT_EQ(gadget, 5 * Ecount * T);
    }
  }
}

TEST(Network, GadgetShape) {
  Graph g = single_edge();
  TimeExpandedNetwork net(g, 1);
  const int w = net.gadget_entry(0, 0), w2 = net.gadget_exit(0, 0);
  EXPECT_EQ(net.arc(net.gadget_arc(0, 0, kEntryFromU)).from, net.out_node(0, 0));
  EXPECT_EQ(net.arc(net.gadget_arc(0, 0, kEntryFromU)).to, w);
  EXPECT_EQ(net.arc(net.gadget_arc(0, 0, kEntryFromV)).from, net.out_node(1, 0));
  EXPECT_EQ(net.arc(net.gadget_arc(0, 0, kGadgetCore)).from, w);
  EXPECT_EQ(net.arc(net.gadget_arc(0, 0, kGadgetCore)).to, w2);
  // Both exits leave w' (the symmetric form).
  EXPECT_EQ(net.arc(net.gadget_arc(0, 0, kExitToU)).from, w2);
  EXPECT_EQ(net.arc(net.gadget_arc(0, 0, kExitToU)).to, net.in_node(0, 1));
  EXPECT_EQ(net.arc(net.gadget_arc(0, 0, kExitToV)).from, w2);
  EXPECT_EQ(net.arc(net.gadget_arc(0, 0, kExitToV)).to, net.in_node(1, 1));
}

TEST(Network, FunnelNodeAndArcs) {
  Graph g = Graph::from_edges(3, E{{0, 1}, {1, 2}});
  std::vector<VertexId> funnel{0, 2};
  TimeExpandedNetwork net(g, 2, funnel);
  EXPECT_EQ(net.node_count(), 3 * 5 + 2 * 2 * 2 + 1);
  EXPECT_EQ(net.arc_count(), 2 * 3 * 2 + 5 * 2 * 2 + 2 * 3);
  EXPECT_EQ(net.arc(net.funnel_arc(1, 2)).from, net.out_node(2, 2));
  EXPECT_EQ(net.arc(net.funnel_arc(1, 2)).to, net.funnel_node());
}

TEST(Network, SingleEdgeOneMove) {
  Graph g = single_edge();
  Team team{{0}, {1}, {}};
  auto net = build_network(g, team, 0, 1, {}, {});
  EXPECT_EQ(net.total_supply(), 1);
  EXPECT_EQ(net.total_demand(), 1);
  auto f = max_flow(net);
  EXPECT_EQ(f.value, 1);
  auto paths = extract_paths(net, f, team);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0], (Path{0, 1}));
}

TEST(Network, TwoTeamsTeamTwoAtHorizonThree) {
  Graph g = two_teams_graph();
  Team team{{0, 1}, {3, 4}, {}};
  auto net = build_network(g, team, 1, 3, {}, {});
  auto f = max_flow(net);
  EXPECT_EQ(f.value, 2);
  auto paths = extract_paths(net, f, team);
  TapfInstance solo;
  solo.graph = g;
  solo.teams = {team};
  EXPECT_TRUE(validate_solution(solo, Solution{{paths}}).empty());
  EXPECT_LE(team_cost_of(paths, {}), 3);
  // One step short is infeasible: vertex a is two moves from d and three from e.
  EXPECT_LT(max_flow(build_network(g, team, 1, 2, {}, {})).value, 2);
}

TEST(Network, VertexConstraintOnSingleEdge) {
  Graph g = single_edge();
  Team team{{0}, {1}, {}};
  std::vector<Constraint> cs{Constraint::vertex(0, 1, 1)};
  EXPECT_EQ(max_flow(build_network(g, team, 0, 1, cs, {})).value, 0);
  auto net = build_network(g, team, 0, 2, cs, {});
  auto f = max_flow(net);
  EXPECT_EQ(f.value, 1);
  EXPECT_EQ(extract_paths(net, f, team)[0], (Path{0, 0, 1}));
}

TEST(Network, ConstraintSurgeryRemovesTheRightArcs) {
  Graph g = single_edge();
  Team team{{0}, {1}, {}};
  std::vector<Constraint> cs{Constraint::vertex(0, 1, 1), Constraint::edge(0, 1, 0, 1)};
  auto net = build_network(g, team, 0, 3, cs, {}, unpruned());
  EXPECT_EQ(net.arc(net.capacity_arc(1, 1)).capacity, 0);
  EXPECT_EQ(net.arc(net.capacity_arc(0, 1)).capacity, 1);
  EXPECT_EQ(net.arc(net.gadget_arc(0, 1, kEntryFromV)).capacity, 0);
  EXPECT_EQ(net.arc(net.gadget_arc(0, 1, kExitToU)).capacity, 0);
  EXPECT_EQ(net.arc(net.gadget_arc(0, 1, kEntryFromU)).capacity, 1);
  EXPECT_EQ(net.arc(net.gadget_arc(0, 1, kExitToV)).capacity, 1);
  EXPECT_EQ(net.active_arc_count(), net.arc_count() - 3);
}

TEST(Network, VertexConstraintBeyondHorizonRemovesParkingDemand) {
  Graph g = single_edge();
  Team team{{0}, {1}, {}};
  std::vector<Constraint> cs{Constraint::vertex(0, 1, 5)};
  EXPECT_EQ(max_flow(build_network(g, team, 0, 2, cs, {})).value, 0);
  EXPECT_EQ(max_flow(build_network(g, team, 0, 5, cs, {})).value, 0);
  EXPECT_EQ(max_flow(build_network(g, team, 0, 6, cs, {})).value, 1);
}

TEST(Network, Errors) {
  Graph g = Graph::from_edges(3, E{{0, 1}, {1, 2}});
  Team team{{0}, {2}, {}};
  std::vector<Constraint> bad_edge{Constraint::edge(0, 0, 2, 0)};
  EXPECT_THROW(build_network(g, team, 0, 2, bad_edge, {}), std::invalid_argument);
  std::vector<Constraint> other_team{Constraint::vertex(1, 0, 1)};
  EXPECT_THROW(build_network(g, team, 0, 2, other_team, {}), std::invalid_argument);
  NetworkOptions capped;
  capped.max_horizon = 4;
  EXPECT_THROW(build_network(g, team, 0, 5, {}, {}, capped), std::out_of_range);
  EXPECT_NO_THROW(build_network(g, team, 0, 4, {}, {}, capped));
}

TEST(Network, BiasWeightsAccumulatePerOccupancy) {
  Graph g = Graph::from_edges(3, E{{0, 1}, {1, 2}});
  Team team{{0}, {2}, {}};
  Path p1{1, 2, 2}, p2{1, 1, 0}, p3{2, 1, 1};
  std::vector<const Path*> bias{&p1, &p2, &p3};
  auto net = build_network(g, team, 0, 2, {}, bias, unpruned());
  EXPECT_EQ(net.arc(net.capacity_arc(1, 1)).weight, 2);  // p2 and p3 at vertex 1 at t=1
  EXPECT_EQ(net.arc(net.capacity_arc(2, 1)).weight, 1);
  EXPECT_EQ(net.arc(net.capacity_arc(1, 2)).weight, 1);
  // p1 moves 1->2 at t=0: entering the {1,2} gadget from 2 is penalized.
  const int e12 = *g.edge_id(1, 2);
  EXPECT_EQ(net.arc(net.gadget_arc(e12, 0, kEntryFromV)).weight, 1);
  EXPECT_EQ(net.arc(net.gadget_arc(e12, 0, kEntryFromU)).weight, 1);  // p3 moves 2->1 at t=0
  // p2 moves 1->0 at t=1: entering {0,1} from 0 is penalized.
  const int e01 = *g.edge_id(0, 1);
  EXPECT_EQ(net.arc(net.gadget_arc(e01, 1, kEntryFromU)).weight, 1);
  EXPECT_EQ(net.arc(net.gadget_arc(e01, 1, kEntryFromV)).weight, 0);
  EXPECT_EQ(net.arc(net.stay_arc(0, 0)).weight, 0);
}

TEST(Network, PruningKeepsFeasibility) {
  testutil::Rng rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    Graph g = testutil::random_connected_graph(rng, testutil::uniform(rng, 3, 8), 0.25);
    auto inst = testutil::random_instance(rng, g, 1, testutil::uniform(rng, 1, 3));
    const Team& team = inst.teams[0];
    std::vector<Constraint> cs;
    for (int k = testutil::uniform(rng, 0, 3); k > 0; --k) {
      cs.push_back(Constraint::vertex(0, testutil::uniform(rng, 0, g.vertex_count() - 1),
                                      testutil::uniform(rng, 0, 4)));
    }
    for (int T = 0; T <= 5; ++T) {
      auto a = max_flow(build_network(inst.graph, team, 0, T, cs, {}));
      auto b = max_flow(build_network(inst.graph, team, 0, T, cs, {}, unpruned()));
      ASSERT_EQ(a.value, b.value) << "trial " << trial << " T=" << T;
    }
  }
}

TEST(Network, EncodeThenExtractRoundTrip) {
  testutil::Rng rng(17);
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    Graph g = testutil::random_connected_graph(rng, testutil::uniform(rng, 4, 9), 0.2);
    auto inst = testutil::random_instance(rng, g, 1, testutil::uniform(rng, 1, 3));
    const Team& team = inst.teams[0];
    LowLevelRequest req;
    TeamPlan plan = plan_team(inst.graph, team, req);
    ASSERT_EQ(plan.status, PlanStatus::kFound);
    auto net = build_network(inst.graph, team, 0, plan.horizon, {}, {}, unpruned());
    FlowResult f;
    f.arc_flow = encode_paths(net, team, plan.paths);
    f.supply_flow.assign(net.supplies().size(), 1);
    f.value = team.size();
    EXPECT_EQ(extract_paths(net, f, team), plan.paths);
    ++checked;
  }
  EXPECT_EQ(checked, 80);
}

TEST(Network, ExtractedPathsPassTeamValidation) {
  testutil::Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    Graph g = testutil::random_connected_graph(rng, testutil::uniform(rng, 3, 9), 0.3);
    auto inst = testutil::random_instance(rng, g, 1, testutil::uniform(rng, 1, 4));
    for (int T = 0; T <= 6; ++T) {
      auto net = build_network(inst.graph, inst.teams[0], 0, T, {}, {});
      auto f = min_cost_max_flow(net);
      if (f.value < inst.teams[0].size()) {
        EXPECT_THROW(extract_paths(net, f, inst.teams[0]), InfeasibleHorizon);
        continue;
      }
      auto paths = extract_paths(net, f, inst.teams[0]);
      ASSERT_TRUE(validate_solution(inst, Solution{{paths}}).empty()) << "trial " << trial;
      break;
    }
  }
}
