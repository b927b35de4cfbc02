#ifndef TAPF_INSTANCE_HPP
#define TAPF_INSTANCE_HPP

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tapf/graph.hpp"

namespace tapf {

/// Relaxations of the one-start-per-agent / one-target-per-agent rules used
/// by warehouse instances.
struct TeamFlags {
  /// Agents listed with the same start vertex are released there one per time
  /// step (t = 0, 1, ...) instead of all being present at t = 0.
  bool shared_start_spread = false;
  /// Agents are absorbed at a target vertex on arrival (they leave the graph),
  /// so any number of agents may share the team's target vertices.
  bool funnel_target = false;
  /// The team may have more candidate targets than agents; each agent still
  /// ends at a distinct target.
  bool surplus_targets = false;

  bool any() const { return shared_start_spread || funnel_target || surplus_targets; }
  friend bool operator==(const TeamFlags&, const TeamFlags&) = default;
};

struct Team {
  std::vector<VertexId> starts;   // one per agent, in agent order
  std::vector<VertexId> targets;  // candidate target vertices
  TeamFlags flags;

  int size() const { return static_cast<int>(starts.size()); }

  /// Release time of every agent: 0 unless the team spreads a shared start,
  /// in which case the k-th agent listed at a vertex is released at t = k.
  std::vector<int> release_times() const {
    std::vector<int> release(starts.size(), 0);
    if (!flags.shared_start_spread) return release;
    std::map<VertexId, int> seen;
    for (std::size_t j = 0; j < starts.size(); ++j) release[j] = seen[starts[j]]++;
    return release;
  }

  /// Distinct target vertices in ascending order.
  std::vector<VertexId> target_set() const {
    std::vector<VertexId> out(targets);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  friend bool operator==(const Team&, const Team&) = default;
};

struct TapfInstance {
  Graph graph;
  std::vector<Team> teams;

  int team_count() const { return static_cast<int>(teams.size()); }
  int agent_count() const {
    int n = 0;
    for (const Team& t : teams) n += t.size();
    return n;
  }

  friend bool operator==(const TapfInstance&, const TapfInstance&) = default;
};

struct Violation {
  std::string code;    // short stable identifier, e.g. "duplicate target"
  std::string detail;  // human-readable location

  std::string to_string() const { return detail.empty() ? code : code + ": " + detail; }
};

/// Every invariant of the instance that does not hold. An empty result means
/// the instance is well formed.
inline std::vector<Violation> validate_instance(const TapfInstance& inst) {
  std::vector<Violation> out;
  const Graph& g = inst.graph;
  if (g.vertex_count() <= 0) out.push_back({"empty graph", ""});
  if (inst.teams.empty()) out.push_back({"no teams", ""});

  std::map<VertexId, int> start_owner;
  std::map<VertexId, int> target_owner;
  bool in_range = true;
  for (int i = 0; i < inst.team_count(); ++i) {
    const Team& team = inst.teams[i];
    const std::string tname = "team " + std::to_string(i + 1);
    if (team.starts.empty()) out.push_back({"empty team", tname});
    if (team.targets.empty()) out.push_back({"team without targets", tname});
    for (VertexId v : team.starts) {
      if (!g.contains(v)) {
        out.push_back({"vertex out of range", tname + " start " + std::to_string(v)});
        in_range = false;
        continue;
      }
      auto [it, fresh] = start_owner.emplace(v, i);
      if (!fresh && !(it->second == i && team.flags.shared_start_spread)) {
        out.push_back({"duplicate start", "vertex " + std::to_string(v)});
      }
    }
    std::set<VertexId> own_targets;
    for (VertexId v : team.targets) {
      if (!g.contains(v)) {
        out.push_back({"vertex out of range", tname + " target " + std::to_string(v)});
        in_range = false;
        continue;
      }
      if (!own_targets.insert(v).second) {
        if (!team.flags.funnel_target) {
          out.push_back({"duplicate target", "vertex " + std::to_string(v)});
        }
        continue;
      }
      auto [it, fresh] = target_owner.emplace(v, i);
      if (!fresh) out.push_back({"duplicate target", "vertex " + std::to_string(v)});
    }
    if (!team.flags.funnel_target) {
      const auto nt = team.targets.size();
      const auto ns = team.starts.size();
      bool ok = team.flags.surplus_targets ? nt >= ns : nt == ns;
      if (!ok) {
        out.push_back({"team cardinality mismatch", tname + ": " + std::to_string(ns) +
                                                        " starts, " + std::to_string(nt) +
                                                        " targets"});
      }
    }
  }
  if (!in_range) return out;

  const std::vector<int> comp = g.components();
  for (int i = 0; i < inst.team_count(); ++i) {
    const Team& team = inst.teams[i];
    for (VertexId s : team.starts) {
      for (VertexId t : team.targets) {
        if (comp[s] != comp[t]) {
          out.push_back({"unreachable target", "team " + std::to_string(i + 1) + " start " +
                                                   std::to_string(s) + " target " +
                                                   std::to_string(t)});
        }
      }
    }
  }
  return out;
}

}  // namespace tapf

#endif  // TAPF_INSTANCE_HPP
