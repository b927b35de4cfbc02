#include <gtest/gtest.h>

#include "tapf/solution.hpp"
#include "test_support.hpp"

using namespace tapf;

namespace {

using E = std::vector<std::pair<VertexId, VertexId>>;

bool has_code(const std::vector<Violation>& vs, const std::string& code) {
  for (const auto& v : vs) {
    if (v.code == code) return true;
  }
  return false;
}

bool has_collision_code(const std::vector<Violation>& vs) {
  return has_code(vs, "vertex collision") || has_code(vs, "edge collision");
}

// All sequences of `len` vertices out of n (not only walks).
std::vector<Path> all_sequences(int n, int len) {
  std::vector<Path> out;
  Path p(len, 0);
  while (true) {
    out.push_back(p);
    int k = len - 1;
    while (k >= 0 && p[k] == n - 1) p[k--] = 0;
    if (k < 0) break;
    ++p[k];
  }
  return out;
}

std::vector<Graph> tiny_graphs() {
  return {
      Graph::from_edges(3, E{{0, 1}, {1, 2}}),
      Graph::from_edges(3, E{{0, 1}, {1, 2}, {0, 2}}),
      Graph::from_edges(4, E{{0, 1}, {1, 2}, {2, 3}}),
      Graph::from_edges(4, E{{0, 1}, {1, 2}, {2, 3}, {0, 3}}),
      Graph::from_edges(4, E{{0, 1}, {0, 2}, {0, 3}}),
  };
}

}  // namespace

TEST(TeamCost, SettleTime) {
  EXPECT_EQ(team_cost(Path{3}, 3), 0);
  EXPECT_EQ(team_cost(Path{1, 3, 2, 3, 3}, 3), 3);
  EXPECT_THROW(team_cost(Path{1, 2}, 3), std::invalid_argument);
  TeamFlags funnel;
  funnel.funnel_target = true;
  EXPECT_EQ(agent_cost(Path{4, 5, kAbsent, kAbsent}, funnel), 1);
}

TEST(Makespan, IsMaxOverTeamsAndAgents) {
  TapfInstance inst;
  inst.graph = Graph::from_edges(4, E{{0, 1}, {1, 2}, {2, 3}});
  inst.teams = {Team{{0}, {1}, {}}, Team{{3, 2}, {3, 2}, {}}};
  Solution sol{{{Path{0, 1, 1}}, {Path{3, 3, 3}, Path{2, 2, 2}}}};
  EXPECT_TRUE(validate_solution(inst, sol).empty());
  EXPECT_EQ(makespan(inst, sol), 1);
  EXPECT_EQ(team_cost_of(sol.team_paths[1], {}), 0);
}

TEST(Constraint, ViolationReplay) {
  Path p{0, 1, 2, 2};
  EXPECT_TRUE(Constraint::vertex(0, 1, 1).violated_by(p));
  EXPECT_FALSE(Constraint::vertex(0, 1, 2).violated_by(p));
  EXPECT_TRUE(Constraint::vertex(0, 2, 7).violated_by(p));  // parked after the end
  EXPECT_TRUE(Constraint::edge(0, 1, 2, 1).violated_by(p));
  EXPECT_FALSE(Constraint::edge(0, 2, 1, 1).violated_by(p));
}

// validate_solution against a direct condition-by-condition checker on every
// pair of vertex sequences up to horizon 3 on graphs with at most 4 vertices.
TEST(ValidateSolution, MatchesDirectCheckerExhaustively) {
  long checked = 0;
  for (const Graph& g : tiny_graphs()) {
    const int n = g.vertex_count();
    std::vector<TapfInstance> instances;
    TapfInstance one_team;
    one_team.graph = g;
    one_team.teams = {Team{{0, 1}, {n - 1, n - 2}, {}}};
    instances.push_back(one_team);
    TapfInstance two_teams;
    two_teams.graph = g;
    two_teams.teams = {Team{{0}, {n - 1}, {}}, Team{{n - 1}, {0}, {}}};
    instances.push_back(two_teams);
    for (const TapfInstance& inst : instances) {
      for (int T = 0; T <= 3; ++T) {
        const auto seqs = all_sequences(n, T + 1);
        for (const Path& a : seqs) {
          for (const Path& b : seqs) {
            std::vector<std::vector<Path>> paths;
            if (inst.team_count() == 1) {
              paths = {{a, b}};
            } else {
              paths = {{a}, {b}};
            }
            const bool expected = testutil::satisfies_conditions(inst, paths);
            const bool got = validate_solution(inst, Solution{paths}).empty();
            ASSERT_EQ(got, expected) << "T=" << T;
            ++checked;
          }
        }
      }
    }
  }
  EXPECT_GT(checked, 100000);
}

// find_collisions is empty exactly when validate_solution reports no
// collision violation (two single-agent teams, so within-team checks never
// fire).
TEST(FindCollisions, AgreesWithValidateSolution) {
  for (const Graph& g : tiny_graphs()) {
    const int n = g.vertex_count();
    TapfInstance inst;
    inst.graph = g;
    inst.teams = {Team{{0}, {n - 1}, {}}, Team{{1}, {0}, {}}};
    for (int T = 0; T <= 3; ++T) {
      const auto seqs = all_sequences(n, T + 1);
      for (const Path& a : seqs) {
        for (const Path& b : seqs) {
          Solution sol{{{a}, {b}}};
          const auto report = find_collisions(sol, n);
          ASSERT_EQ(report.collisions.empty(), !has_collision_code(validate_solution(inst, sol)));
          if (!report.collisions.empty()) EXPECT_EQ(report.colliding_teams, 2);
        }
      }
    }
  }
}

TEST(FindCollisions, OrderAndKinds) {
  // Team 1 moves 0->1 while team 2 moves 1->0 at t=0 (swap); later both sit at 2.
  std::vector<Path> t1{Path{0, 1, 2}}, t2{Path{1, 0, 2}}, t3{Path{3, 3, 3}};
  Solution sol{{t1, t2, t3}};
  auto r = find_collisions(sol, 4);
  ASSERT_EQ(r.collisions.size(), 2u);
  EXPECT_EQ(r.collisions[0].kind, ConflictKind::kEdge);
  EXPECT_EQ(r.collisions[0].t, 0);
  EXPECT_EQ(r.collisions[0].team_a, 0);
  EXPECT_EQ(r.collisions[0].l1, 0);
  EXPECT_EQ(r.collisions[0].l2, 1);
  EXPECT_EQ(r.collisions[1].kind, ConflictKind::kVertex);
  EXPECT_EQ(r.collisions[1].t, 2);
  EXPECT_EQ(r.collisions[1].l1, 2);
  EXPECT_EQ(r.colliding_teams, 2);
}

TEST(FindCollisions, RotationAroundCycleIsLegal) {
  std::vector<std::vector<Path>> paths{{Path{0, 1}}, {Path{1, 2}}, {Path{2, 0}}};
  EXPECT_TRUE(find_collisions(Solution{paths}, 3).collisions.empty());
}

TEST(FindCollisions, SameTeamCollisionIsAnInternalError) {
  Solution sol{{{Path{0, 1}, Path{1, 0}}}};
  EXPECT_THROW(find_collisions(sol, 2), InternalError);
}

TEST(ValidateSolution, ReportsNamedViolations) {
  TapfInstance inst;
  inst.graph = Graph::from_edges(3, E{{0, 1}, {1, 2}});
  inst.teams = {Team{{0}, {2}, {}}, Team{{2}, {0}, {}}};
  EXPECT_TRUE(has_code(validate_solution(inst, Solution{{{Path{0, 1, 2}}, {Path{2, 1}}}}),
                       "ragged horizon"));
  EXPECT_TRUE(has_code(validate_solution(inst, Solution{{{Path{0, 2}}, {Path{2, 0}}}}),
                       "illegal move"));
  EXPECT_TRUE(has_code(validate_solution(inst, Solution{{{Path{1, 2}}, {Path{2, 0}}}}),
                       "wrong start"));
  EXPECT_TRUE(has_code(validate_solution(inst, Solution{{{Path{0, 1}}, {Path{2, 1}}}}),
                       "not at a team target"));
  TapfInstance pair;
  pair.graph = Graph::from_edges(2, E{{0, 1}});
  pair.teams = {Team{{0}, {1}, {}}, Team{{1}, {0}, {}}};
  EXPECT_TRUE(has_code(validate_solution(pair, Solution{{{Path{0, 1}}, {Path{1, 0}}}}),
                       "edge collision"));
  EXPECT_TRUE(has_code(validate_solution(inst, Solution{{{Path{0, 1, 2}}, {Path{2, 1, 0}}}}),
                       "vertex collision"));
}

TEST(ValidateSolution, FunnelAndSpreadRules) {
  TapfInstance inst;
  inst.graph = Graph::from_edges(4, E{{0, 1}, {1, 2}, {2, 3}});
  Team funnel{{1, 2}, {0}, {}};
  funnel.flags.funnel_target = true;
  Team spread{{3, 3}, {2, 3}, {}};
  spread.flags.shared_start_spread = true;
  inst.teams = {funnel, spread};
  // Team 1 agents enter vertex 0 at t=1 and t=2; team 2 agents appear at 3 at t=0 and t=1.
  Path a{1, 0, kAbsent, kAbsent, kAbsent};
  Path b{2, 1, 0, kAbsent, kAbsent};
  Path c{3, 2, 2, 2, 2};
  Path d{kAbsent, 3, 3, 3, 3};
  EXPECT_TRUE(validate_solution(inst, Solution{{{a, b}, {c, d}}}).empty());
  Path late{kAbsent, kAbsent, 3, 3, 3};
  EXPECT_TRUE(has_code(validate_solution(inst, Solution{{{a, b}, {c, late}}}), "wrong release time"));
  Path stays{2, 1, 0, 0, 0};
  EXPECT_TRUE(
      has_code(validate_solution(inst, Solution{{{a, stays}, {c, d}}}), "funnel agent not absorbed"));
}
