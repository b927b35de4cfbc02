#include <gtest/gtest.h>

#include "tapf/generators.hpp"
#include "tapf/text_format.hpp"
#include "test_support.hpp"

using namespace tapf;

TEST(TextFormat, ParsesGridInstance) {
  const char* text =
      "# small grid\n"
      "grid 3 2\n"
      ".@.\n"
      "...\n"
      "teams 2\n"
      "team 1: starts 0 targets 4\n"
      "team 2: starts 1 2 targets 3 0   # trailing comment\n";
  TapfInstance inst = parse_instance(text);
  EXPECT_EQ(inst.graph.vertex_count(), 5);
  ASSERT_EQ(inst.team_count(), 2);
  EXPECT_EQ(inst.teams[1].starts, (std::vector<VertexId>{1, 2}));
  EXPECT_EQ(inst.teams[1].targets, (std::vector<VertexId>{3, 0}));
  EXPECT_TRUE(validate_instance(inst).empty());
}

TEST(TextFormat, ParsesEdgeListAndFlags) {
  const char* text =
      "vertices 4\n"
      "edge 0 1\nedge 1 2\nedge 2 3\n"
      "teams 2\n"
      "team 1: starts 1 2 targets 0 flags: funnel_target\n"
      "team 2: starts 3 3 targets 1 2 3 flags: shared_start_spread | surplus_targets\n";
  TapfInstance inst = parse_instance(text);
  EXPECT_TRUE(inst.teams[0].flags.funnel_target);
  EXPECT_TRUE(inst.teams[1].flags.shared_start_spread);
  EXPECT_TRUE(inst.teams[1].flags.surplus_targets);
  EXPECT_TRUE(validate_instance(inst).empty());
}

TEST(TextFormat, RejectsMalformedInput) {
  EXPECT_THROW(parse_instance(""), ParseError);
  EXPECT_THROW(parse_instance("vertices 2\nedge 0 5\nteams 1\nteam 1: starts 0 targets 1\n"),
               ParseError);
  EXPECT_THROW(parse_instance("vertices 2\nedge 0 1\nteams 2\nteam 1: starts 0 targets 1\n"),
               ParseError);
  EXPECT_THROW(parse_instance("grid 2 1\n.x\nteams 1\nteam 1: starts 0 targets 1\n"), ParseError);
  EXPECT_THROW(parse_instance("vertices 2\nedge 0 1\nteams 1\nteam 1: starts 0 targets 1 flags: fly\n"),
               ParseError);
  try {
    parse_instance("vertices 2\nedge 0 1\nteams 1\nteam 1: starts zero targets 1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4);
  }
}

TEST(TextFormat, InstanceRoundTripIsIdentity) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    TapfInstance inst = testutil::oracle_suite_instance(seed);
    TapfInstance back = parse_instance(serialize_instance(inst));
    EXPECT_EQ(back.graph, inst.graph);
    EXPECT_EQ(back.teams, inst.teams);
    EXPECT_EQ(serialize_instance(back), serialize_instance(inst));
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    GridGenSpec spec;
    spec.width = 12;
    spec.height = 9;
    spec.seed = seed;
    TapfInstance g = gen_grid(spec);
    EXPECT_EQ(parse_instance(serialize_instance(g)).teams, g.teams);
    EXPECT_EQ(parse_instance(serialize_instance(g)).graph, g.graph);
    WarehouseGenSpec w;
    w.seed = seed;
    w.outgoing_units = 10;
    TapfInstance wh = gen_warehouse(w);
    TapfInstance wb = parse_instance(serialize_instance(wh));
    EXPECT_EQ(wb.teams, wh.teams);
    EXPECT_EQ(wb.graph, wh.graph);
  }
}

TEST(TextFormat, SolutionRoundTrip) {
  Solution sol{{{Path{0, 1, 2}}, {Path{5, 4, 3}, Path{kAbsent, 7, 7}}}};
  const std::string text = serialize_solution(sol);
  EXPECT_EQ(text, "agent 1.1: 0 1 2\nagent 2.1: 5 4 3\nagent 2.2: - 7 7\n");
  EXPECT_EQ(parse_solution(text).team_paths, sol.team_paths);
  EXPECT_THROW(parse_solution("agent 1.2: 0 1\n"), ParseError);
}
