#ifndef TAPF_HIGH_LEVEL_HPP
#define TAPF_HIGH_LEVEL_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tapf/deadline.hpp"
#include "tapf/instance.hpp"
#include "tapf/low_level.hpp"
#include "tapf/solution.hpp"

namespace tapf {

enum class SolveOutcome { kSolution, kNoSolution, kTimeout, kHorizonCap };

inline const char* to_string(SolveOutcome o) {
  switch (o) {
    case SolveOutcome::kSolution: return "solution";
    case SolveOutcome::kNoSolution: return "no-solution";
    case SolveOutcome::kTimeout: return "timeout";
    case SolveOutcome::kHorizonCap: return "horizon-cap";
  }
  return "?";
}

struct SolveConfig {
  bool weighted = true;       // false: unweighted max-flow low level
  double time_limit = 0;      // seconds, <= 0 for none
  int max_horizon = -1;       // < 0: makespan_bound(instance)
  bool parallel_children = false;
  bool record_trace = false;
  LowLevelOptions low_level;
};

struct SolveStats {
  long nodes_generated = 0;
  long nodes_expanded = 0;
  long low_level_calls = 0;
  LowLevelStats flow;
  int root_key = 0;
  double wall_seconds = 0;
};

/// Instrumentation of one search, filled when SolveConfig::record_trace is set.
struct SearchTrace {
  std::vector<int> popped_keys;
  struct Child {
    int parent_key;
    int key;
    bool parent_violates_constraint;
    int team;
    int sibling_team;  // team constrained in the other child of the same collision
  };
  std::vector<Child> children;
};

struct SolveReport {
  SolveOutcome outcome = SolveOutcome::kNoSolution;
  std::optional<Solution> solution;
  int makespan = -1;
  SolveStats stats;
  SearchTrace trace;
};

/// Upper bound on the makespan of an optimal solution: min(|V|^3, number of
/// distinct joint placements - 1). An optimal solution never repeats a
/// placement of the agents (agents of one team being interchangeable), so it
/// takes fewer steps than there are placements.
inline int makespan_bound(const TapfInstance& inst) {
  const double n = inst.graph.vertex_count();
  double bound = n * n * n;
  bool plain = true;
  for (const Team& t : inst.teams) plain = plain && !t.flags.any();
  if (plain) {
    // log of n! / (n - A)! / prod K_i!
    const int agents = inst.agent_count();
    double log_placements = std::lgamma(n + 1) - std::lgamma(n - agents + 1);
    for (const Team& t : inst.teams) log_placements -= std::lgamma(t.size() + 1.0);
    if (log_placements < std::log(bound + 1)) {
      bound = std::min(bound, std::round(std::exp(log_placements)) - 1);
    }
  }
  return static_cast<int>(std::min<double>(bound, std::numeric_limits<int>::max() / 4));
}

namespace detail {

struct TeamPaths {
  std::vector<Path> paths;
  int cost = 0;
};

struct SearchNode {
  long id = 0;
  std::vector<Constraint> constraints;
  std::vector<std::shared_ptr<const TeamPaths>> teams;
  int key = 0;
  int colliding_teams = 0;
  std::optional<Collision> first_collision;
};

struct NodeOrder {
  bool operator()(const std::shared_ptr<SearchNode>& a, const std::shared_ptr<SearchNode>& b) const {
    // priority_queue pops the largest; invert for (key, colliding, id) ascending.
    if (a->key != b->key) return a->key > b->key;
    if (a->colliding_teams != b->colliding_teams) return a->colliding_teams > b->colliding_teams;
    return a->id > b->id;
  }
};

inline int node_makespan(const SearchNode& n) {
  int m = 0;
  for (const auto& t : n.teams) m = std::max(m, t->cost);
  return m;
}

inline void evaluate_collisions(SearchNode& node, int vertex_count) {
  std::vector<std::vector<const Path*>> ptrs(node.teams.size());
  for (std::size_t i = 0; i < node.teams.size(); ++i) {
    for (const Path& p : node.teams[i]->paths) ptrs[i].push_back(&p);
  }
  CollisionReport r = find_collisions(ptrs, vertex_count);
  node.colliding_teams = r.colliding_teams;
  node.first_collision.reset();
  if (!r.collisions.empty()) node.first_collision = r.collisions.front();
}

inline std::vector<const Path*> other_team_paths(const SearchNode& node, int team) {
  std::vector<const Path*> out;
  for (int i = 0; i < static_cast<int>(node.teams.size()); ++i) {
    if (i == team || !node.teams[i]) continue;
    for (const Path& p : node.teams[i]->paths) out.push_back(&p);
  }
  return out;
}

/// Pads or trims team paths to a common horizon, keeping the repeat-last
/// reading of each path.
inline Solution assemble_solution(const TapfInstance& inst, const SearchNode& node, int horizon) {
  Solution sol;
  for (int i = 0; i < inst.team_count(); ++i) {
    std::vector<Path> team;
    for (const Path& p : node.teams[i]->paths) {
      Path q(horizon + 1);
      for (int t = 0; t <= horizon; ++t) q[t] = position_at(p, t);
      team.push_back(std::move(q));
    }
    sol.team_paths.push_back(std::move(team));
  }
  return sol;
}

}  // namespace detail

/// Conflict-based search over teams with a flow-based low level. Returns an
/// optimal-makespan solution, or reports why none was produced.
inline SolveReport solve(const TapfInstance& inst, const SolveConfig& config = {}) {
  using detail::SearchNode;
  const auto started = std::chrono::steady_clock::now();
  const Deadline deadline = Deadline::after(config.time_limit);
  const Graph& g = inst.graph;
  const int bound = makespan_bound(inst);
  const int max_horizon = config.max_horizon < 0 ? bound : config.max_horizon;
  const bool cap_is_proof = max_horizon >= bound;

  SolveReport report;
  auto finish = [&](SolveOutcome outcome) {
    report.outcome = outcome;
    report.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
  };

  auto plan = [&](const SearchNode& node, int team, int start_horizon) {
    std::vector<Constraint> own;
    for (const Constraint& c : node.constraints) {
      if (c.team == team) own.push_back(c);
    }
    const auto bias = detail::other_team_paths(node, team);
    LowLevelRequest req;
    req.team_id = team;
    req.constraints = own;
    req.bias_paths = bias;
    req.start_horizon = start_horizon;
    req.max_horizon = max_horizon;
    req.weighted = config.weighted;
    return plan_team(g, inst.teams[team], req, config.low_level, deadline);
  };

  bool unproven_discard = false;
  try {
    auto root = std::make_shared<SearchNode>();
    root->teams.resize(inst.team_count());
    for (int i = 0; i < inst.team_count(); ++i) {
      ++report.stats.low_level_calls;
      TeamPlan p = plan(*root, i, 0);
      report.stats.flow += p.stats;
      if (p.status != PlanStatus::kFound) {
        const bool proven = p.status == PlanStatus::kInfeasible || cap_is_proof;
        return finish(proven ? SolveOutcome::kNoSolution : SolveOutcome::kHorizonCap);
      }
      root->teams[i] = std::make_shared<detail::TeamPaths>(
          detail::TeamPaths{std::move(p.paths), p.team_cost});
    }
    root->key = detail::node_makespan(*root);
    detail::evaluate_collisions(*root, g.vertex_count());
    report.stats.root_key = root->key;
    report.stats.nodes_generated = 1;

    std::priority_queue<std::shared_ptr<SearchNode>, std::vector<std::shared_ptr<SearchNode>>,
                        detail::NodeOrder>
        open;
    open.push(root);
    long next_id = 1;
    while (!open.empty()) {
      deadline.check();
      auto node = open.top();
      open.pop();
      if (config.record_trace) report.trace.popped_keys.push_back(node->key);
      if (!node->first_collision) {
        const int m = detail::node_makespan(*node);
        // Trim to the last step anybody still needs (a funnel agent absorbed
        // at m needs one more step to show it is gone).
        int h = m;
        for (int i = 0; i < inst.team_count(); ++i) {
          if (inst.teams[i].flags.funnel_target) h = std::max(h, node->teams[i]->cost + 1);
        }
        report.solution = detail::assemble_solution(inst, *node, h);
        report.makespan = m;
        return finish(SolveOutcome::kSolution);
      }
      ++report.stats.nodes_expanded;
      const Collision c = *node->first_collision;
      Constraint branch[2];
      if (c.kind == ConflictKind::kVertex) {
        branch[0] = Constraint::vertex(c.team_a, c.l1, c.t);
        branch[1] = Constraint::vertex(c.team_b, c.l1, c.t);
      } else {
        branch[0] = Constraint::edge(c.team_a, c.l1, c.l2, c.t);
        branch[1] = Constraint::edge(c.team_b, c.l2, c.l1, c.t);
      }

      std::shared_ptr<SearchNode> children[2];
      TeamPlan plans[2];
      for (int k = 0; k < 2; ++k) {
        children[k] = std::make_shared<SearchNode>();
        children[k]->constraints = node->constraints;
        children[k]->constraints.push_back(branch[k]);
        children[k]->teams = node->teams;
      }
      report.stats.low_level_calls += 2;
      if (config.parallel_children) {
        auto left = std::async(std::launch::async,
                               [&] { return plan(*children[0], branch[0].team, node->key); });
        plans[1] = plan(*children[1], branch[1].team, node->key);
        plans[0] = left.get();
      } else {
        for (int k = 0; k < 2; ++k) plans[k] = plan(*children[k], branch[k].team, node->key);
      }
      for (int k = 0; k < 2; ++k) {
        report.stats.flow += plans[k].stats;
        const int team = branch[k].team;
        if (plans[k].status != PlanStatus::kFound) {
          if (plans[k].status == PlanStatus::kHorizonCap && !cap_is_proof) unproven_discard = true;
          continue;
        }
        SearchNode& child = *children[k];
        child.teams[team] = std::make_shared<detail::TeamPaths>(
            detail::TeamPaths{std::move(plans[k].paths), plans[k].team_cost});
        child.key = std::max(detail::node_makespan(child), node->key);
        child.id = next_id++;
        detail::evaluate_collisions(child, g.vertex_count());
        if (config.record_trace) {
          bool violated = false;
          for (const Path& p : node->teams[team]->paths) violated |= branch[k].violated_by(p);
          report.trace.children.push_back(
              {node->key, child.key, violated, team, branch[1 - k].team});
        }
        ++report.stats.nodes_generated;
        open.push(children[k]);
      }
    }
  } catch (const TimeoutError&) {
    return finish(SolveOutcome::kTimeout);
  }
  return finish(unproven_discard ? SolveOutcome::kHorizonCap : SolveOutcome::kNoSolution);
}

/// Fixes a random assignment of agents to targets inside every team (seeded)
/// and solves the resulting instance of single-agent teams. The solution is
/// reported in the original team layout.
inline SolveReport solve_as_mapf(const TapfInstance& inst, std::uint64_t assignment_seed,
                                 const SolveConfig& config = {}) {
  TapfInstance mapf;
  mapf.graph = inst.graph;
  std::mt19937_64 rng(assignment_seed);
  for (const Team& team : inst.teams) {
    if (team.flags.any()) {
      throw std::invalid_argument("fixed assignment needs teams without relaxation flags");
    }
    std::vector<VertexId> targets = team.targets;
    std::shuffle(targets.begin(), targets.end(), rng);
    for (int j = 0; j < team.size(); ++j) mapf.teams.push_back(Team{{team.starts[j]}, {targets[j]}, {}});
  }
  SolveReport report = solve(mapf, config);
  if (report.solution) {
    Solution regrouped;
    std::size_t k = 0;
    for (const Team& team : inst.teams) {
      std::vector<Path> paths;
      for (int j = 0; j < team.size(); ++j) paths.push_back(report.solution->team_paths[k++][0]);
      regrouped.team_paths.push_back(std::move(paths));
    }
    report.solution = std::move(regrouped);
  }
  return report;
}

}  // namespace tapf

#endif  // TAPF_HIGH_LEVEL_HPP
