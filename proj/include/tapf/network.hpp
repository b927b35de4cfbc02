#ifndef TAPF_NETWORK_HPP
#define TAPF_NETWORK_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tapf/graph.hpp"
#include "tapf/instance.hpp"
#include "tapf/solution.hpp"

namespace tapf {

using Weight = std::int64_t;

enum class NodeKind : std::uint8_t { kOut, kIn, kGadgetEntry, kGadgetExit, kFunnel };

struct NodeInfo {
  NodeKind kind;
  int index;  // vertex for kOut/kIn, edge id for gadget nodes, -1 for kFunnel
  int t;      // time step (gadget nodes: departure step)
};

struct Arc {
  int from;
  int to;
  int capacity;  // 0 once removed
  Weight weight;
};

struct Supply {
  int node;
  int units;
};

struct Demand {
  int node;
  int units;
};

/// The arcs of the gadget of edge {u, v} (u < v) at step t, in id order.
enum GadgetArc : int {
  kEntryFromU = 0,  // u_t^out -> w
  kEntryFromV = 1,  // v_t^out -> w
  kGadgetCore = 2,  // w -> w'
  kExitToU = 3,     // w' -> u_{t+1}^in
  kExitToV = 4,     // w' -> v_{t+1}^in
};

/// T-step time-expanded network of a graph. Node and arc ids are assigned in
/// construction order and are closed-form functions of (vertex/edge, t), so
/// they are stable across builds with the same graph and horizon.
///
/// Node layout per step t < T: v_t^out for all v, then the gadget pair
/// (w, w') of every edge, then v_{t+1}^in for all v; finally v_T^out. The
/// optional funnel node comes last. Arc layout per step t < T: stay arcs,
/// five gadget arcs per edge, vertex-capacity arcs of step t+1; funnel arcs
/// come last.
class TimeExpandedNetwork {
 public:
  TimeExpandedNetwork(const Graph& graph, int horizon, std::span<const VertexId> funnel_targets = {})
      : graph_(&graph),
        horizon_(horizon),
        nv_(graph.vertex_count()),
        ne_(graph.edge_count()),
        funnel_targets_(funnel_targets.begin(), funnel_targets.end()) {
    if (horizon < 0) throw std::invalid_argument("negative horizon");
    layer_nodes_ = 2 * nv_ + 2 * ne_;
    layer_arcs_ = 2 * nv_ + 5 * ne_;
    base_nodes_ = horizon_ * layer_nodes_ + nv_;
    const int funnel_arcs = static_cast<int>(funnel_targets_.size()) * (horizon_ + 1);
    arcs_.reserve(static_cast<std::size_t>(horizon_) * layer_arcs_ + funnel_arcs);
    for (int t = 0; t < horizon_; ++t) {
      for (VertexId v = 0; v < nv_; ++v) arcs_.push_back({out_node(v, t), in_node(v, t + 1), 1, 0});
      for (int e = 0; e < ne_; ++e) {
        const Edge& ed = graph.edge(e);
        const int w = gadget_entry(e, t), w2 = gadget_exit(e, t);
        arcs_.push_back({out_node(ed.u, t), w, 1, 0});
        arcs_.push_back({out_node(ed.v, t), w, 1, 0});
        arcs_.push_back({w, w2, 1, 0});
        arcs_.push_back({w2, in_node(ed.u, t + 1), 1, 0});
        arcs_.push_back({w2, in_node(ed.v, t + 1), 1, 0});
      }
      for (VertexId v = 0; v < nv_; ++v) {
        arcs_.push_back({in_node(v, t + 1), out_node(v, t + 1), 1, 0});
      }
    }
    for (VertexId g : funnel_targets_) {
      for (int t = 0; t <= horizon_; ++t) arcs_.push_back({out_node(g, t), funnel_node(), 1, 0});
    }
  }

  const Graph& graph() const { return *graph_; }
  int horizon() const { return horizon_; }
  bool has_funnel() const { return !funnel_targets_.empty(); }
  const std::vector<VertexId>& funnel_targets() const { return funnel_targets_; }

  int node_count() const { return base_nodes_ + (has_funnel() ? 1 : 0); }
  int arc_count() const { return static_cast<int>(arcs_.size()); }
  int active_arc_count() const {
    return static_cast<int>(std::count_if(arcs_.begin(), arcs_.end(),
                                          [](const Arc& a) { return a.capacity > 0; }));
  }

  int out_node(VertexId v, int t) const {
    return t < horizon_ ? t * layer_nodes_ + v : horizon_ * layer_nodes_ + v;
  }
  int in_node(VertexId v, int t) const { return (t - 1) * layer_nodes_ + nv_ + 2 * ne_ + v; }
  int gadget_entry(int e, int t) const { return t * layer_nodes_ + nv_ + 2 * e; }
  int gadget_exit(int e, int t) const { return gadget_entry(e, t) + 1; }
  int funnel_node() const { return base_nodes_; }

  int stay_arc(VertexId v, int t) const { return t * layer_arcs_ + v; }
  int gadget_arc(int e, int t, GadgetArc k) const { return t * layer_arcs_ + nv_ + 5 * e + k; }
  int capacity_arc(VertexId v, int t) const { return (t - 1) * layer_arcs_ + nv_ + 5 * ne_ + v; }
  int funnel_arc(int funnel_index, int t) const {
    return horizon_ * layer_arcs_ + funnel_index * (horizon_ + 1) + t;
  }

  NodeInfo describe(int node) const {
    if (node == funnel_node() && has_funnel()) return {NodeKind::kFunnel, -1, horizon_};
    const int t = node / layer_nodes_;
    const int r = node % layer_nodes_;
    if (t == horizon_ || r < nv_) return {NodeKind::kOut, r, t};
    if (r < nv_ + 2 * ne_) {
      const int g = r - nv_;
      return {g % 2 == 0 ? NodeKind::kGadgetEntry : NodeKind::kGadgetExit, g / 2, t};
    }
    return {NodeKind::kIn, r - nv_ - 2 * ne_, t + 1};
  }

  const std::vector<Arc>& arcs() const { return arcs_; }
  const Arc& arc(int id) const { return arcs_[id]; }
  void remove_arc(int id) { arcs_[id].capacity = 0; }
  void add_weight(int id, Weight w) { arcs_[id].weight += w; }

  const std::vector<Supply>& supplies() const { return supplies_; }
  const std::vector<Demand>& demands() const { return demands_; }
  void add_supply(int node, int units) { supplies_.push_back({node, units}); }
  void add_demand(int node, int units) { demands_.push_back({node, units}); }
  void remove_supplies_at(int node) {
    std::erase_if(supplies_, [&](const Supply& s) { return s.node == node; });
  }
  void remove_demands_at(int node) {
    std::erase_if(demands_, [&](const Demand& d) { return d.node == node; });
  }

  int total_supply() const {
    int s = 0;
    for (const Supply& x : supplies_) s += x.units;
    return s;
  }
  int total_demand() const {
    int s = 0;
    for (const Demand& x : demands_) s += x.units;
    return s;
  }

 private:
  const Graph* graph_;
  int horizon_;
  int nv_;
  int ne_;
  int layer_nodes_ = 0;
  int layer_arcs_ = 0;
  int base_nodes_ = 0;
  std::vector<VertexId> funnel_targets_;
  std::vector<Arc> arcs_;
  std::vector<Supply> supplies_;
  std::vector<Demand> demands_;
};

struct NetworkOptions {
  /// Remove arcs no unit of flow can use within the horizon (too far from
  /// every supply or from every demand). Does not change any feasible flow.
  bool prune = true;
  /// Horizons above this bound are rejected.
  int max_horizon = std::numeric_limits<int>::max();
};

namespace detail {

/// Earliest step each vertex can be reached from the team's (timed) supplies.
inline std::vector<int> earliest_presence(const Graph& g, const Team& team) {
  const auto release = team.release_times();
  std::vector<int> dist(g.vertex_count(), std::numeric_limits<int>::max());
  using Item = std::pair<int, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  for (std::size_t j = 0; j < team.starts.size(); ++j) {
    VertexId s = team.starts[j];
    if (release[j] < dist[s]) {
      dist[s] = release[j];
      open.emplace(release[j], s);
    }
  }
  while (!open.empty()) {
    auto [d, v] = open.top();
    open.pop();
    if (d != dist[v]) continue;
    for (VertexId w : g.neighbors(v)) {
      if (d + 1 < dist[w]) {
        dist[w] = d + 1;
        open.emplace(d + 1, w);
      }
    }
  }
  return dist;
}

}  // namespace detail

/// Single-commodity network for one team: supply at each agent's start (at its
/// release step), demand at the targets, constraint arcs removed and bias
/// weights added for the given paths of other teams.
///
/// Vertex constraint (l, t): removes l_t^in -> l_t^out; at t = 0 it removes a
/// supply at l; beyond the horizon it removes the demand at l (an agent
/// parked there would violate it). Edge constraint (l1, l2, t): removes the
/// gadget arcs l1_t^out -> w and w' -> l2_{t+1}^in.
///
/// Bias: +1 on v_t^in -> v_t^out per other-team agent at v at t, and +1 on
/// the gadget entry v_t^out -> w per other-team agent moving u -> v at t.
inline TimeExpandedNetwork build_network(const Graph& graph, const Team& team, int team_id,
                                         int horizon, std::span<const Constraint> constraints,
                                         std::span<const Path* const> bias_paths,
                                         const NetworkOptions& options = {}) {
  if (horizon < 0) throw std::invalid_argument("negative horizon");
  if (horizon > options.max_horizon) {
    throw std::out_of_range("horizon " + std::to_string(horizon) + " exceeds bound " +
                            std::to_string(options.max_horizon));
  }
  const auto targets = team.target_set();
  TimeExpandedNetwork net(graph, horizon,
                          team.flags.funnel_target ? std::span<const VertexId>(targets)
                                                   : std::span<const VertexId>());

  const auto release = team.release_times();
  for (std::size_t j = 0; j < team.starts.size(); ++j) {
    const int r = release[j];
    if (r > horizon) continue;  // released too late to matter at this horizon
    net.add_supply(r == 0 ? net.out_node(team.starts[j], 0) : net.in_node(team.starts[j], r), 1);
  }
  if (team.flags.funnel_target) {
    net.add_demand(net.funnel_node(), team.size());
  } else {
    for (VertexId g : targets) net.add_demand(net.out_node(g, horizon), 1);
  }

  if (options.prune && horizon > 0) {
    const auto early = detail::earliest_presence(graph, team);
    const auto to_target = graph.distances_from(targets);
    auto useful = [&](VertexId v, int t) {
      return early[v] <= t && to_target[v] != kUnreachable && to_target[v] <= horizon - t;
    };
    for (int t = 0; t < horizon; ++t) {
      for (VertexId v = 0; v < graph.vertex_count(); ++v) {
        if (!(useful(v, t) && useful(v, t + 1))) net.remove_arc(net.stay_arc(v, t));
        if (!useful(v, t + 1)) net.remove_arc(net.capacity_arc(v, t + 1));
      }
      for (int e = 0; e < graph.edge_count(); ++e) {
        const Edge& ed = graph.edge(e);
        const bool forward = useful(ed.u, t) && useful(ed.v, t + 1);
        const bool backward = useful(ed.v, t) && useful(ed.u, t + 1);
        if (!forward) {
          net.remove_arc(net.gadget_arc(e, t, kEntryFromU));
          net.remove_arc(net.gadget_arc(e, t, kExitToV));
        }
        if (!backward) {
          net.remove_arc(net.gadget_arc(e, t, kEntryFromV));
          net.remove_arc(net.gadget_arc(e, t, kExitToU));
        }
        if (!forward && !backward) net.remove_arc(net.gadget_arc(e, t, kGadgetCore));
      }
    }
    if (team.flags.funnel_target) {
      for (int i = 0; i < static_cast<int>(targets.size()); ++i) {
        for (int t = 0; t <= horizon; ++t) {
          if (!useful(targets[i], t)) net.remove_arc(net.funnel_arc(i, t));
        }
      }
    }
  }

  for (const Constraint& c : constraints) {
    if (c.team != team_id) {
      throw std::invalid_argument("constraint for team " + std::to_string(c.team + 1) +
                                  " given to team " + std::to_string(team_id + 1));
    }
    if (c.t < 0) throw std::invalid_argument("constraint at negative time");
    if (c.kind == ConflictKind::kVertex) {
      if (!graph.contains(c.from)) throw std::invalid_argument("constraint vertex out of range");
      if (c.t == 0) {
        net.remove_supplies_at(net.out_node(c.from, 0));
      } else if (c.t <= horizon) {
        net.remove_arc(net.capacity_arc(c.from, c.t));
      } else if (!team.flags.funnel_target) {
        net.remove_demands_at(net.out_node(c.from, horizon));
      }
    } else {
      auto e = graph.edge_id(c.from, c.to);
      if (!e) {
        throw std::invalid_argument("edge constraint on non-edge " + std::to_string(c.from) +
                                    "-" + std::to_string(c.to));
      }
      if (c.t + 1 > horizon) continue;
      const Edge& ed = graph.edge(*e);
      net.remove_arc(net.gadget_arc(*e, c.t, c.from == ed.u ? kEntryFromU : kEntryFromV));
      net.remove_arc(net.gadget_arc(*e, c.t, c.to == ed.u ? kExitToU : kExitToV));
    }
  }

  for (const Path* p : bias_paths) {
    for (int t = 0; t <= horizon; ++t) {
      const VertexId v = position_at(*p, t);
      if (t >= 1 && v != kAbsent) net.add_weight(net.capacity_arc(v, t), 1);
      if (t < horizon) {
        const VertexId next = position_at(*p, t + 1);
        if (v == kAbsent || next == kAbsent || v == next) continue;
        auto e = graph.edge_id(v, next);
        if (!e) continue;
        const Edge& ed = graph.edge(*e);
        // Penalize entering the same gadget from the other endpoint.
        net.add_weight(net.gadget_arc(*e, t, next == ed.u ? kEntryFromU : kEntryFromV), 1);
      }
    }
  }
  return net;
}

/// Unit flow of a set of team paths on the network (inverse of path
/// extraction). Paths must span at least `horizon + 1` steps or be read with
/// the usual repeat-last semantics. Throws if a path uses a removed arc or a
/// move that the graph lacks.
inline std::vector<int> encode_paths(const TimeExpandedNetwork& net, const Team& team,
                                     std::span<const Path> paths) {
  const Graph& g = net.graph();
  const int T = net.horizon();
  std::vector<int> flow(net.arc_count(), 0);
  const auto targets = team.target_set();
  auto use = [&](int arc) {
    if (net.arc(arc).capacity == 0) throw std::invalid_argument("path uses a removed arc");
    ++flow[arc];
  };
  for (const Path& p : paths) {
    for (int t = 0; t < T; ++t) {
      const VertexId a = position_at(p, t), b = position_at(p, t + 1);
      if (a == kAbsent && b == kAbsent) continue;
      if (a == kAbsent) continue;  // released at t+1: the supply feeds b_{t+1}^in
      if (b == kAbsent) {
        auto it = std::lower_bound(targets.begin(), targets.end(), a);
        if (!net.has_funnel() || it == targets.end() || *it != a) {
          throw std::invalid_argument("agent leaves the graph away from a funnel target");
        }
        use(net.funnel_arc(static_cast<int>(it - targets.begin()), t));
        break;
      }
      if (a == b) {
        use(net.stay_arc(a, t));
      } else {
        auto e = g.edge_id(a, b);
        if (!e) throw std::invalid_argument("path moves along a non-edge");
        const Edge& ed = g.edge(*e);
        use(net.gadget_arc(*e, t, a == ed.u ? kEntryFromU : kEntryFromV));
        use(net.gadget_arc(*e, t, kGadgetCore));
        use(net.gadget_arc(*e, t, b == ed.u ? kExitToU : kExitToV));
      }
      use(net.capacity_arc(b, t + 1));
      if (t + 1 == T && net.has_funnel()) {
        auto it = std::lower_bound(targets.begin(), targets.end(), b);
        if (it == targets.end() || *it != b) throw std::invalid_argument("funnel agent not at target");
        use(net.funnel_arc(static_cast<int>(it - targets.begin()), T));
      }
    }
    if (T == 0 && net.has_funnel()) {
      const VertexId a = position_at(p, 0);
      auto it = std::lower_bound(targets.begin(), targets.end(), a);
      if (it == targets.end() || *it != a) throw std::invalid_argument("funnel agent not at target");
      use(net.funnel_arc(static_cast<int>(it - targets.begin()), 0));
    }
  }
  return flow;
}

}  // namespace tapf

#endif  // TAPF_NETWORK_HPP
