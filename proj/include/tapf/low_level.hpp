#ifndef TAPF_LOW_LEVEL_HPP
#define TAPF_LOW_LEVEL_HPP

#include <algorithm>
#include <limits>
#include <span>
#include <vector>

#include "tapf/deadline.hpp"
#include "tapf/flow.hpp"
#include "tapf/flow_paths.hpp"
#include "tapf/network.hpp"
#include "tapf/solution.hpp"

namespace tapf {

struct LowLevelRequest {
  int team_id = 0;
  std::span<const Constraint> constraints;  // this team's constraints only
  std::span<const Path* const> bias_paths;  // current paths of all other teams
  int start_horizon = 0;
  int max_horizon = std::numeric_limits<int>::max();
  bool weighted = true;  // min-cost max-flow with bias weights vs plain max-flow
};

struct LowLevelOptions {
  bool prune = true;
  /// Also run min-cost max-flow at every horizon tried and compare its value
  /// with plain max-flow on the same network (weights must not change
  /// feasibility).
  bool verify_bias_invariance = false;
  /// Number of failed horizons after which one solve at the proof horizon is
  /// tried, which settles infeasibility without walking every horizon.
  int proof_check_after = 4;
  /// The proof solve is skipped when its network would exceed this size.
  long proof_check_node_limit = 2'000'000;
};

struct LowLevelStats {
  long horizons = 0;  // horizons tried by the iterative deepening
  long flow_solves = 0;
  long augmentations = 0;
  long bias_checks = 0;
  long bias_mismatches = 0;

  LowLevelStats& operator+=(const LowLevelStats& o) {
    horizons += o.horizons;
    flow_solves += o.flow_solves;
    augmentations += o.augmentations;
    bias_checks += o.bias_checks;
    bias_mismatches += o.bias_mismatches;
    return *this;
  }
};

enum class PlanStatus {
  kFound,
  kInfeasible,  // no horizon admits a plan under these constraints
  kHorizonCap,  // nothing found up to the horizon bound
};

struct TeamPlan {
  PlanStatus status = PlanStatus::kInfeasible;
  std::vector<Path> paths;  // one per agent, horizon+1 entries (+1 for funnel teams)
  int team_cost = 0;
  int horizon = 0;
  LowLevelStats stats;
};

/// Horizon beyond which a team that has no plan will never have one: after
/// the last constraint and the last release, one agent at a time can be
/// walked to an unfilled target along a spanning tree, shifting the agents
/// in between, in fewer than |V| steps per agent.
inline int infeasibility_proof_horizon(const Graph& g, const Team& team,
                                       std::span<const Constraint> constraints) {
  int settle = 0;
  for (const Constraint& c : constraints) settle = std::max(settle, c.last_time());
  for (int r : team.release_times()) settle = std::max(settle, r);
  return settle + team.size() * g.vertex_count();
}

/// Lower bound on the team cost from hop distances alone, or -1 when some
/// agent can never reach a target.
inline int team_cost_lower_bound(const Graph& g, const Team& team) {
  const auto targets = team.target_set();
  const auto to_target = g.distances_from(targets);
  const auto release = team.release_times();
  int lb = 0;
  for (int j = 0; j < team.size(); ++j) {
    const int d = to_target[team.starts[j]];
    if (d == kUnreachable) return -1;
    lb = std::max(lb, release[j] + d);
  }
  if (!team.flags.funnel_target && !team.flags.surplus_targets) {
    const auto early = detail::earliest_presence(g, team);
    for (VertexId v : targets) {
      if (early[v] == std::numeric_limits<int>::max()) return -1;
      lb = std::max(lb, early[v]);
    }
  }
  return lb;
}

/// Plans collision-free paths for one team under its constraints: tries
/// T = start_horizon, start_horizon + 1, ... and returns the paths of the
/// first T whose network carries one unit per agent. Horizons below the
/// distance lower bound are skipped since no flow can exist there.
inline TeamPlan plan_team(const Graph& g, const Team& team, const LowLevelRequest& req,
                          const LowLevelOptions& options = {}, const Deadline& deadline = {}) {
  TeamPlan plan;
  const int lb = team_cost_lower_bound(g, team);
  if (lb < 0) {
    plan.status = PlanStatus::kInfeasible;
    return plan;
  }
  const int proof = infeasibility_proof_horizon(g, team, req.constraints);
  NetworkOptions net_opts;
  net_opts.prune = options.prune;
  const std::span<const Path* const> no_bias;

  auto feasible_at = [&](int T) {
    auto net = build_network(g, team, req.team_id, T, req.constraints, no_bias, net_opts);
    FlowResult f = max_flow(net, deadline);
    ++plan.stats.flow_solves;
    plan.stats.augmentations += f.augmentations;
    return f.value == team.size();
  };

  int failures = 0;
  for (int T = std::max(req.start_horizon, lb);; ++T) {
    if (T > proof) {
      plan.status = PlanStatus::kInfeasible;
      return plan;
    }
    if (T > req.max_horizon) {
      plan.status = PlanStatus::kHorizonCap;
      return plan;
    }
    deadline.check();
    ++plan.stats.horizons;
    const bool use_weights = req.weighted;
    auto net = build_network(g, team, req.team_id, T, req.constraints,
                             use_weights ? req.bias_paths : no_bias, net_opts);
    FlowResult f = max_flow(net, deadline);
    ++plan.stats.flow_solves;
    plan.stats.augmentations += f.augmentations;
    const bool feasible = f.value == team.size();
    if (use_weights && (feasible || options.verify_bias_invariance)) {
      FlowResult weighted = min_cost_max_flow(net, deadline);
      ++plan.stats.flow_solves;
      plan.stats.augmentations += weighted.augmentations;
      if (options.verify_bias_invariance) {
        ++plan.stats.bias_checks;
        if (weighted.value != f.value) ++plan.stats.bias_mismatches;
      }
      f = std::move(weighted);
    }
    if (feasible) {
      plan.paths = extract_paths(net, f, team);
      plan.horizon = T;
      plan.team_cost = team_cost_of(plan.paths, team.flags);
      plan.status = PlanStatus::kFound;
      return plan;
    }
    const long proof_nodes = static_cast<long>(g.vertex_count()) * (2L * proof + 1) +
                             2L * g.edge_count() * proof;
    if (++failures == options.proof_check_after && T < proof && proof <= req.max_horizon &&
        proof_nodes <= options.proof_check_node_limit) {
      if (!feasible_at(proof)) {
        plan.status = PlanStatus::kInfeasible;
        return plan;
      }
    }
  }
}

}  // namespace tapf

#endif  // TAPF_LOW_LEVEL_HPP
