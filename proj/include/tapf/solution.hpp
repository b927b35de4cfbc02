#ifndef TAPF_SOLUTION_HPP
#define TAPF_SOLUTION_HPP

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "tapf/instance.hpp"

namespace tapf {

/// Vertex per time step, t = 0 .. size()-1. Beyond its last entry a path is
/// read as repeating that entry forever.
using Path = std::vector<VertexId>;

inline VertexId position_at(const Path& path, int t) {
  if (path.empty()) return kAbsent;
  return path[std::min<std::size_t>(static_cast<std::size_t>(t), path.size() - 1)];
}

/// Paths grouped by team, agents in the instance's order.
struct Solution {
  std::vector<std::vector<Path>> team_paths;

  /// Largest path length minus one.
  int horizon() const {
    int h = 0;
    for (const auto& team : team_paths) {
      for (const Path& p : team) h = std::max(h, static_cast<int>(p.size()) - 1);
    }
    return h;
  }

  friend bool operator==(const Solution&, const Solution&) = default;
};

/// Thrown when a broken internal guarantee is detected (never a user error).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class ConflictKind : std::uint8_t { kVertex = 0, kEdge = 1 };

/// Prohibits every agent of `team` from being at `from` at time t (vertex
/// variant), or from moving `from` -> `to` between t and t+1 (edge variant).
struct Constraint {
  ConflictKind kind = ConflictKind::kVertex;
  int team = 0;
  VertexId from = 0;
  VertexId to = kAbsent;
  int t = 0;

  static Constraint vertex(int team, VertexId l, int t) {
    return {ConflictKind::kVertex, team, l, kAbsent, t};
  }
  static Constraint edge(int team, VertexId l1, VertexId l2, int t) {
    return {ConflictKind::kEdge, team, l1, l2, t};
  }

  /// Last time step the constraint talks about.
  int last_time() const { return kind == ConflictKind::kVertex ? t : t + 1; }

  bool violated_by(const Path& path) const {
    if (kind == ConflictKind::kVertex) return position_at(path, t) == from;
    return position_at(path, t) == from && position_at(path, t + 1) == to;
  }

  auto key() const { return std::tuple(t, team, kind, from, to); }
  friend bool operator==(const Constraint& a, const Constraint& b) { return a.key() == b.key(); }
  friend bool operator<(const Constraint& a, const Constraint& b) { return a.key() < b.key(); }
};

/// A collision between agents of two teams. For the edge variant, agents of
/// `team_a` move l1 -> l2 while agents of `team_b` move l2 -> l1.
struct Collision {
  ConflictKind kind = ConflictKind::kVertex;
  int team_a = 0;
  int team_b = 0;
  VertexId l1 = 0;
  VertexId l2 = kAbsent;
  int t = 0;
  int agent_a = 0;  // global agent indices, for diagnostics
  int agent_b = 0;

  auto order_key() const {
    return std::tuple(t, std::min(team_a, team_b), std::max(team_a, team_b), kind, l1, l2,
                      agent_a, agent_b);
  }
  friend bool operator<(const Collision& a, const Collision& b) {
    return a.order_key() < b.order_key();
  }
  friend bool operator==(const Collision& a, const Collision& b) {
    return a.order_key() == b.order_key();
  }

  std::string to_string() const {
    std::string s = kind == ConflictKind::kVertex ? "vertex collision" : "edge collision";
    s += " teams " + std::to_string(team_a + 1) + "," + std::to_string(team_b + 1);
    s += " at " + std::to_string(l1);
    if (kind == ConflictKind::kEdge) s += "-" + std::to_string(l2);
    s += " t=" + std::to_string(t);
    return s;
  }
};

/// Minimal T with path(t) == target for all t >= T.
inline int team_cost(const Path& path, VertexId target) {
  if (path.empty() || path.back() != target) {
    throw std::invalid_argument("path never settles at target " + std::to_string(target));
  }
  int t = static_cast<int>(path.size()) - 1;
  while (t > 0 && path[t - 1] == target) --t;
  return t;
}

/// Arrival cost of one agent: settle time for ordinary agents, absorption
/// time (last present step) for agents of a funnel team.
inline int agent_cost(const Path& path, const TeamFlags& flags) {
  if (path.empty()) throw std::invalid_argument("empty path");
  if (flags.funnel_target && path.back() == kAbsent) {
    int t = static_cast<int>(path.size()) - 1;
    while (t >= 0 && path[t] == kAbsent) --t;
    if (t < 0) throw std::invalid_argument("funnel agent never present");
    return t;
  }
  if (path.back() == kAbsent) throw std::invalid_argument("path ends off the graph");
  return team_cost(path, path.back());
}

inline int team_cost_of(const std::vector<Path>& paths, const TeamFlags& flags) {
  int c = 0;
  for (const Path& p : paths) c = std::max(c, agent_cost(p, flags));
  return c;
}

inline int makespan(const TapfInstance& inst, const Solution& sol) {
  int m = 0;
  for (int i = 0; i < inst.team_count(); ++i) {
    m = std::max(m, team_cost_of(sol.team_paths.at(i), inst.teams[i].flags));
  }
  return m;
}

namespace detail {

/// Calls on_vertex(a, b, v, t) / on_edge(a, b, t) for every pair of agents
/// a < b that collide. `paths[k]` belongs to agent k.
template <typename OnVertex, typename OnEdge>
void scan_collisions(const std::vector<const Path*>& paths, int vertex_count, int horizon,
                     OnVertex&& on_vertex, OnEdge&& on_edge) {
  const int n = static_cast<int>(paths.size());
  std::vector<int> head(vertex_count, -1);
  std::vector<int> next(n, -1);
  std::vector<VertexId> now(n), later(n);
  for (int t = 0; t <= horizon; ++t) {
    for (int a = 0; a < n; ++a) {
      now[a] = position_at(*paths[a], t);
      later[a] = position_at(*paths[a], t + 1);
    }
    for (int a = 0; a < n; ++a) {
      VertexId v = now[a];
      if (v == kAbsent) continue;
      for (int b = head[v]; b != -1; b = next[b]) on_vertex(b, a, v, t);
      next[a] = head[v];
      head[v] = a;
    }
    if (t < horizon) {
      for (int a = 0; a < n; ++a) {
        VertexId u = now[a], v = later[a];
        if (u == kAbsent || v == kAbsent || u == v) continue;
        for (int b = head[v]; b != -1; b = next[b]) {
          if (b > a && later[b] == u) on_edge(a, b, t);
        }
      }
    }
    for (int a = 0; a < n; ++a) {
      if (now[a] != kAbsent) head[now[a]] = -1;
    }
  }
}

}  // namespace detail

/// Inter-team collisions in deterministic order plus the number of distinct
/// teams taking part in at least one of them.
struct CollisionReport {
  std::vector<Collision> collisions;
  int colliding_teams = 0;
};

/// Collisions among paths given per team as pointer lists. Throws
/// InternalError on a collision between two agents of the same team.
inline CollisionReport find_collisions(const std::vector<std::vector<const Path*>>& team_paths,
                                       int vertex_count) {
  std::vector<const Path*> flat;
  std::vector<int> team_of;
  int horizon = 0;
  for (int i = 0; i < static_cast<int>(team_paths.size()); ++i) {
    for (const Path* p : team_paths[i]) {
      flat.push_back(p);
      team_of.push_back(i);
      horizon = std::max(horizon, static_cast<int>(p->size()) - 1);
    }
  }
  CollisionReport report;
  auto same_team = [&](int a, int b, int t) {
    throw InternalError("collision inside team " + std::to_string(team_of[a] + 1) +
                        " between agents " + std::to_string(a) + " and " +
                        std::to_string(b) + " at t=" + std::to_string(t));
  };
  detail::scan_collisions(
      flat, vertex_count, horizon,
      [&](int a, int b, VertexId v, int t) {
        if (team_of[a] == team_of[b]) same_team(a, b, t);
        if (team_of[a] > team_of[b]) std::swap(a, b);
        report.collisions.push_back(
            {ConflictKind::kVertex, team_of[a], team_of[b], v, kAbsent, t, a, b});
      },
      [&](int a, int b, int t) {
        if (team_of[a] == team_of[b]) same_team(a, b, t);
        if (team_of[a] > team_of[b]) std::swap(a, b);
        report.collisions.push_back({ConflictKind::kEdge, team_of[a], team_of[b],
                                     position_at(*flat[a], t), position_at(*flat[a], t + 1),
                                     t, a, b});
      });
  std::sort(report.collisions.begin(), report.collisions.end());
  std::set<int> teams;
  for (const Collision& c : report.collisions) {
    teams.insert(c.team_a);
    teams.insert(c.team_b);
  }
  report.colliding_teams = static_cast<int>(teams.size());
  return report;
}

inline CollisionReport find_collisions(const Solution& sol, int vertex_count) {
  std::vector<std::vector<const Path*>> ptrs(sol.team_paths.size());
  for (std::size_t i = 0; i < sol.team_paths.size(); ++i) {
    for (const Path& p : sol.team_paths[i]) ptrs[i].push_back(&p);
  }
  return find_collisions(ptrs, vertex_count);
}

/// Checks the five solution conditions: start vertices, arrival at distinct
/// targets of the agent's team, legal moves, no vertex collisions and no
/// edge (swap) collisions. Also checks the release/absorption rules of
/// flagged teams.
inline std::vector<Violation> validate_solution(const TapfInstance& inst, const Solution& sol) {
  std::vector<Violation> out;
  const Graph& g = inst.graph;
  if (static_cast<int>(sol.team_paths.size()) != inst.team_count()) {
    out.push_back({"team count mismatch", std::to_string(sol.team_paths.size()) + " vs " +
                                              std::to_string(inst.team_count())});
    return out;
  }
  std::size_t length = 0;
  for (int i = 0; i < inst.team_count(); ++i) {
    if (static_cast<int>(sol.team_paths[i].size()) != inst.teams[i].size()) {
      out.push_back({"agent count mismatch", "team " + std::to_string(i + 1)});
      return out;
    }
    for (const Path& p : sol.team_paths[i]) {
      if (p.empty()) {
        out.push_back({"empty path", "team " + std::to_string(i + 1)});
        return out;
      }
      if (length == 0) length = p.size();
      if (p.size() != length) {
        out.push_back({"ragged horizon", "team " + std::to_string(i + 1)});
        return out;
      }
      for (VertexId v : p) {
        if (v != kAbsent && !g.contains(v)) {
          out.push_back({"vertex out of range", std::to_string(v)});
          return out;
        }
      }
    }
  }

  for (int i = 0; i < inst.team_count(); ++i) {
    const Team& team = inst.teams[i];
    const auto release = team.release_times();
    const auto targets = team.target_set();
    std::set<VertexId> used_targets;
    for (int j = 0; j < team.size(); ++j) {
      const Path& p = sol.team_paths[i][j];
      const std::string who = "agent " + std::to_string(i + 1) + "." + std::to_string(j + 1);
      const int len = static_cast<int>(p.size());
      int first = 0;
      while (first < len && p[first] == kAbsent) ++first;
      int last = len - 1;
      while (last >= 0 && p[last] == kAbsent) --last;
      if (first == len) {
        out.push_back({"agent never present", who});
        continue;
      }
      // Condition 1.
      if (first != release[j]) {
        out.push_back({"wrong release time", who + " appears at t=" + std::to_string(first)});
      }
      if (p[first] != team.starts[j]) {
        out.push_back({"wrong start", who + " starts at " + std::to_string(p[first])});
      }
      // Condition 3 (plus: no gaps while on the graph).
      for (int t = first; t < last; ++t) {
        VertexId a = p[t], b = p[t + 1];
        if (b == kAbsent || a == kAbsent) {
          out.push_back({"gap in path", who + " t=" + std::to_string(t)});
          break;
        }
        if (a != b && !g.adjacent(a, b)) {
          out.push_back({"illegal move", who + " " + std::to_string(a) + "->" +
                                             std::to_string(b) + " t=" + std::to_string(t)});
        }
      }
      // Condition 2.
      const VertexId final_vertex = p[last];
      if (!std::binary_search(targets.begin(), targets.end(), final_vertex)) {
        out.push_back({"not at a team target", who + " ends at " + std::to_string(final_vertex)});
      }
      if (team.flags.funnel_target) {
        if (last == len - 1) out.push_back({"funnel agent not absorbed", who});
      } else {
        if (last != len - 1) out.push_back({"agent leaves the graph", who});
        if (!used_targets.insert(final_vertex).second) {
          out.push_back({"target assigned twice", who + " at " + std::to_string(final_vertex)});
        }
      }
    }
  }

  // Conditions 4 and 5, including agents of the same team.
  std::vector<const Path*> flat;
  std::vector<std::string> names;
  for (int i = 0; i < inst.team_count(); ++i) {
    for (int j = 0; j < inst.teams[i].size(); ++j) {
      flat.push_back(&sol.team_paths[i][j]);
      names.push_back(std::to_string(i + 1) + "." + std::to_string(j + 1));
    }
  }
  detail::scan_collisions(
      flat, g.vertex_count(), static_cast<int>(length) - 1,
      [&](int a, int b, VertexId v, int t) {
        out.push_back({"vertex collision", "agents " + names[a] + " " + names[b] + " at " +
                                               std::to_string(v) + " t=" + std::to_string(t)});
      },
      [&](int a, int b, int t) {
        out.push_back({"edge collision", "agents " + names[a] + " " + names[b] + " on " +
                                             std::to_string(position_at(*flat[a], t)) + "-" +
                                             std::to_string(position_at(*flat[a], t + 1)) +
                                             " t=" + std::to_string(t)});
      });
  return out;
}

}  // namespace tapf

#endif  // TAPF_SOLUTION_HPP
