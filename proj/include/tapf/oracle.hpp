#ifndef TAPF_ORACLE_HPP
#define TAPF_ORACLE_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "tapf/graph.hpp"
#include "tapf/instance.hpp"
#include "tapf/solution.hpp"

namespace tapf {

class OracleRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleLimits {
  int horizon_cap = -1;         // < 0: 4 * |V|
  long state_limit = 5'000'000;  // distinct joint states kept at once
};

enum class OracleStatus { kOptimal, kInfeasible, kCapReached };

struct OracleResult {
  OracleStatus status = OracleStatus::kInfeasible;
  int makespan = -1;
  long states = 0;
};

namespace detail {

// Positions are packed into one 64-bit word, offset by 2 so that the two
// off-graph markers below fit.
inline constexpr VertexId kUnreleased = -1;
inline constexpr VertexId kAbsorbed = -2;

class StatePacker {
 public:
  StatePacker(int vertex_count, int agents)
      : bits_(std::bit_width(static_cast<unsigned>(vertex_count + 2))), agents_(agents) {
    if (bits_ * agents_ > 64) throw OracleRefused("joint state does not fit the packed encoding");
  }
  std::uint64_t pack(std::span<const VertexId> pos) const {
    std::uint64_t key = 0;
    for (VertexId p : pos) key = (key << bits_) | static_cast<std::uint64_t>(p + 2);
    return key;
  }
  void unpack(std::uint64_t key, std::span<VertexId> pos) const {
    const std::uint64_t mask = (std::uint64_t{1} << bits_) - 1;
    for (int i = agents_ - 1; i >= 0; --i) {
      pos[i] = static_cast<VertexId>(key & mask) - 2;
      key >>= bits_;
    }
  }

 private:
  int bits_;
  int agents_;
};

/// Calls `emit` with every joint successor of `pos`: each agent stays, moves
/// along an edge, or (when allowed) leaves the graph from a funnel target;
/// agents due for release appear at their start. Successors respect vertex
/// distinctness and the no-swap rule. `allowed(agent, from, to)` filters
/// single moves (to may be kAbsorbed).
inline void for_each_successor(const Graph& g, std::span<const VertexId> pos,
                               std::span<const VertexId> release_vertex,
                               const std::function<bool(int, VertexId, VertexId)>& allowed,
                               const std::function<bool(int, VertexId)>& can_absorb,
                               const std::function<void(const std::vector<VertexId>&)>& emit) {
  const int n = static_cast<int>(pos.size());
  std::vector<VertexId> next(n);
  std::vector<char> taken(g.vertex_count(), 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      // No two agents swap along an edge.
      for (int a = 0; a < n; ++a) {
        if (pos[a] < 0 || next[a] < 0 || pos[a] == next[a]) continue;
        for (int b = a + 1; b < n; ++b) {
          if (pos[b] == next[a] && next[b] == pos[a]) return;
        }
      }
      emit(next);
      return;
    }
    auto place = [&](VertexId v) {
      if (v >= 0) {
        if (taken[v]) return;
        taken[v] = 1;
      }
      next[i] = v;
      rec(i + 1);
      if (v >= 0) taken[v] = 0;
    };
    const VertexId p = pos[i];
    if (p == kAbsorbed) {
      place(kAbsorbed);
    } else if (p == kUnreleased) {
      if (release_vertex[i] == kUnreleased) {
        place(kUnreleased);
      } else if (allowed(i, kUnreleased, release_vertex[i])) {
        place(release_vertex[i]);
      }
    } else {
      if (allowed(i, p, p)) place(p);
      for (VertexId w : g.neighbors(p)) {
        if (allowed(i, p, w)) place(w);
      }
      if (can_absorb(i, p)) place(kAbsorbed);
    }
  };
  rec(0);
}

inline void canonicalize(std::vector<VertexId>& pos, std::span<const int> team_begin) {
  for (std::size_t k = 0; k + 1 < team_begin.size(); ++k) {
    std::sort(pos.begin() + team_begin[k], pos.begin() + team_begin[k + 1]);
  }
}

inline bool team_at_goal(std::span<const VertexId> pos, const Team& team,
                         const std::vector<VertexId>& targets) {
  std::vector<VertexId> present;
  for (VertexId p : pos) {
    if (p == kAbsorbed) continue;
    if (p == kUnreleased) return false;
    if (!std::binary_search(targets.begin(), targets.end(), p)) return false;
    present.push_back(p);
  }
  if (team.flags.funnel_target || team.flags.surplus_targets) return true;
  return present.size() == targets.size();
}

}  // namespace detail

/// Minimal makespan by breadth-first search over joint placements. Agents of
/// one team are interchangeable, so placements are compared with each team's
/// positions sorted. Exhausting the reachable placements proves that no
/// solution exists at any horizon.
inline OracleResult optimal_makespan(const TapfInstance& inst, const OracleLimits& limits = {}) {
  const Graph& g = inst.graph;
  for (const Team& t : inst.teams) {
    if (t.flags.shared_start_spread || t.flags.funnel_target) {
      throw OracleRefused("oracle handles only teams without release or funnel semantics");
    }
  }
  const int cap = limits.horizon_cap < 0 ? 4 * g.vertex_count() : limits.horizon_cap;
  std::vector<int> team_begin{0};
  std::vector<VertexId> start;
  std::vector<std::vector<VertexId>> targets;
  for (const Team& t : inst.teams) {
    start.insert(start.end(), t.starts.begin(), t.starts.end());
    team_begin.push_back(static_cast<int>(start.size()));
    targets.push_back(t.target_set());
  }
  const int n = static_cast<int>(start.size());
  const detail::StatePacker packer(g.vertex_count(), n);

  auto at_goal = [&](const std::vector<VertexId>& pos) {
    for (int k = 0; k < inst.team_count(); ++k) {
      std::span<const VertexId> part(pos.data() + team_begin[k], team_begin[k + 1] - team_begin[k]);
      if (!detail::team_at_goal(part, inst.teams[k], targets[k])) return false;
    }
    return true;
  };

  OracleResult res;
  std::vector<VertexId> first = start;
  detail::canonicalize(first, team_begin);
  std::unordered_set<std::uint64_t> seen{packer.pack(first)};
  std::vector<std::uint64_t> frontier{packer.pack(first)};
  const std::vector<VertexId> no_release(n, detail::kUnreleased);
  auto any_move = [](int, VertexId, VertexId) { return true; };
  auto no_absorb = [](int, VertexId) { return false; };
  std::vector<VertexId> pos(n);
  for (int depth = 0;; ++depth) {
    for (std::uint64_t key : frontier) {
      packer.unpack(key, pos);
      if (at_goal(pos)) {
        res.status = OracleStatus::kOptimal;
        res.makespan = depth;
        res.states = static_cast<long>(seen.size());
        return res;
      }
    }
    if (frontier.empty()) {
      res.status = OracleStatus::kInfeasible;
      res.states = static_cast<long>(seen.size());
      return res;
    }
    if (depth == cap) {
      res.status = OracleStatus::kCapReached;
      res.states = static_cast<long>(seen.size());
      return res;
    }
    std::vector<std::uint64_t> next_frontier;
    for (std::uint64_t key : frontier) {
      packer.unpack(key, pos);
      detail::for_each_successor(g, pos, no_release, any_move, no_absorb,
                                 [&](const std::vector<VertexId>& nx) {
                                   std::vector<VertexId> c = nx;
                                   detail::canonicalize(c, team_begin);
                                   const auto k = packer.pack(c);
                                   if (seen.insert(k).second) next_frontier.push_back(k);
                                 });
      if (static_cast<long>(seen.size()) > limits.state_limit) {
        throw OracleRefused("joint state space exceeds the configured limit");
      }
    }
    frontier = std::move(next_frontier);
  }
}

/// Whether the team's agents can follow collision-free trajectories of
/// exactly T steps that obey `constraints` and end with every agent at a
/// target of the team (absorbed, for funnel teams). Vertex constraints after
/// T apply to agents parked at their final vertex.
inline bool enumerate_team_feasibility(const Graph& g, const Team& team,
                                       std::span<const Constraint> constraints, int T,
                                       long state_limit = 2'000'000) {
  const int n = team.size();
  const auto targets = team.target_set();
  const auto release = team.release_times();
  const detail::StatePacker packer(g.vertex_count(), n);
  const std::vector<int> team_begin{0, n};

  auto vertex_banned = [&](VertexId v, int t) {
    for (const Constraint& c : constraints) {
      if (c.kind == ConflictKind::kVertex && c.from == v && c.t == t) return true;
    }
    return false;
  };
  auto edge_banned = [&](VertexId a, VertexId b, int t) {
    for (const Constraint& c : constraints) {
      if (c.kind == ConflictKind::kEdge && c.from == a && c.to == b && c.t == t) return true;
    }
    return false;
  };

  std::vector<VertexId> pos(n);
  for (int j = 0; j < n; ++j) pos[j] = release[j] == 0 ? team.starts[j] : detail::kUnreleased;
  for (VertexId p : pos) {
    if (p >= 0 && vertex_banned(p, 0)) return false;
  }
  detail::canonicalize(pos, team_begin);
  std::vector<std::uint64_t> layer{packer.pack(pos)};

  // Unreleased agents are indistinguishable inside a sorted state, so the
  // agents due at t+1 are handed to unreleased slots in schedule order.
  std::vector<std::pair<int, VertexId>> schedule;
  for (int j = 0; j < n; ++j) schedule.emplace_back(release[j], team.starts[j]);
  std::sort(schedule.begin(), schedule.end());

  for (int t = 0; t < T; ++t) {
    std::unordered_set<std::uint64_t> next_layer;
    std::vector<VertexId> appear(n, detail::kUnreleased);
    for (std::uint64_t key : layer) {
      packer.unpack(key, pos);
      std::fill(appear.begin(), appear.end(), detail::kUnreleased);
      std::size_t next_arrival = 0;
      for (int j = 0; j < n; ++j) {
        if (pos[j] != detail::kUnreleased) continue;
        while (next_arrival < schedule.size() && schedule[next_arrival].first != t + 1) {
          ++next_arrival;
        }
        if (next_arrival == schedule.size()) break;
        appear[j] = schedule[next_arrival++].second;
      }
      auto allowed = [&](int, VertexId from, VertexId to) {
        if (to >= 0 && vertex_banned(to, t + 1)) return false;
        if (from >= 0 && from != to && edge_banned(from, to, t)) return false;
        return true;
      };
      auto can_absorb = [&](int, VertexId v) {
        return team.flags.funnel_target && std::binary_search(targets.begin(), targets.end(), v);
      };
      detail::for_each_successor(g, pos, appear, allowed, can_absorb,
                                 [&](const std::vector<VertexId>& nx) {
                                   std::vector<VertexId> c = nx;
                                   detail::canonicalize(c, team_begin);
                                   next_layer.insert(packer.pack(c));
                                 });
      if (static_cast<long>(next_layer.size()) > state_limit) {
        throw OracleRefused("team trajectory space exceeds the configured limit");
      }
    }
    layer.assign(next_layer.begin(), next_layer.end());
    std::sort(layer.begin(), layer.end());
  }

  for (std::uint64_t key : layer) {
    packer.unpack(key, pos);
    if (!detail::team_at_goal(pos, team, targets)) continue;
    bool parked_ok = true;
    if (!team.flags.funnel_target) {
      for (const Constraint& c : constraints) {
        if (c.kind != ConflictKind::kVertex || c.t <= T) continue;
        if (std::find(pos.begin(), pos.end(), c.from) != pos.end()) parked_ok = false;
      }
    }
    if (parked_ok) return true;
  }
  return false;
}

}  // namespace tapf

#endif  // TAPF_ORACLE_HPP
