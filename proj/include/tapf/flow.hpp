#ifndef TAPF_FLOW_HPP
#define TAPF_FLOW_HPP

#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "tapf/deadline.hpp"
#include "tapf/network.hpp"

namespace tapf {

struct FlowResult {
  int value = 0;
  Weight cost = 0;
  std::vector<int> arc_flow;     // per network arc id
  std::vector<int> supply_flow;  // per entry of net.supplies()
  std::vector<int> demand_flow;  // per entry of net.demands()
  int augmentations = 0;
};

namespace detail {

/// Residual graph over the active arcs of a network plus a super source and
/// a super sink. Residual arcs come in pairs (2k forward, 2k+1 backward).
class ResidualGraph {
 public:
  explicit ResidualGraph(const TimeExpandedNetwork& net) : net_(net) {
    compact_.assign(net.node_count(), -1);
    auto node = [&](int n) {
      if (compact_[n] == -1) compact_[n] = node_count_++;
      return compact_[n];
    };
    source_ = node_count_++;
    sink_ = node_count_++;
    const auto& arcs = net.arcs();
    for (int id = 0; id < static_cast<int>(arcs.size()); ++id) {
      const Arc& a = arcs[id];
      if (a.capacity <= 0) continue;
      add_pair(node(a.from), node(a.to), a.capacity, a.weight, id);
    }
    for (std::size_t i = 0; i < net.supplies().size(); ++i) {
      const Supply& s = net.supplies()[i];
      if (s.units > 0) add_pair(source_, node(s.node), s.units, 0, kSupplyTag - static_cast<int>(i));
    }
    for (std::size_t i = 0; i < net.demands().size(); ++i) {
      const Demand& d = net.demands()[i];
      if (d.units > 0) add_pair(node(d.node), sink_, d.units, 0, kDemandTag - static_cast<int>(i));
    }
    // CSR adjacency in residual-arc order.
    begin_.assign(node_count_ + 1, 0);
    for (int from : from_) ++begin_[from + 1];
    for (int v = 0; v < node_count_; ++v) begin_[v + 1] += begin_[v];
    out_.assign(from_.size(), 0);
    std::vector<int> fill(begin_.begin(), begin_.end() - 1);
    for (int r = 0; r < static_cast<int>(from_.size()); ++r) out_[fill[from_[r]]++] = r;
  }

  int node_count() const { return node_count_; }
  int source() const { return source_; }
  int sink() const { return sink_; }

  FlowResult result() const {
    FlowResult res;
    res.arc_flow.assign(net_.arc_count(), 0);
    res.supply_flow.assign(net_.supplies().size(), 0);
    res.demand_flow.assign(net_.demands().size(), 0);
    for (int k = 0; k < static_cast<int>(origin_.size()); ++k) {
      const int flow = cap_[2 * k + 1];
      const int origin = origin_[k];
      if (origin >= 0) {
        res.arc_flow[origin] = flow;
        res.cost += flow * net_.arc(origin).weight;
      } else if (origin <= kDemandTag) {
        res.demand_flow[kDemandTag - origin] = flow;
        res.value += flow;
      } else {
        res.supply_flow[kSupplyTag - origin] = flow;
      }
    }
    return res;
  }

  std::vector<int> begin_;
  std::vector<int> out_;
  std::vector<int> from_;
  std::vector<int> to_;
  std::vector<int> cap_;
  std::vector<Weight> cost_;

 private:
  static constexpr int kSupplyTag = -1;
  static constexpr int kDemandTag = -(1 << 29);

  void add_pair(int from, int to, int cap, Weight cost, int origin) {
    from_.push_back(from);
    to_.push_back(to);
    cap_.push_back(cap);
    cost_.push_back(cost);
    from_.push_back(to);
    to_.push_back(from);
    cap_.push_back(0);
    cost_.push_back(-cost);
    origin_.push_back(origin);
  }

  const TimeExpandedNetwork& net_;
  std::vector<int> compact_;
  std::vector<int> origin_;
  int node_count_ = 0;
  int source_ = 0;
  int sink_ = 0;
};

inline int bottleneck_and_push(ResidualGraph& g, const std::vector<int>& parent_arc) {
  int push = std::numeric_limits<int>::max();
  for (int v = g.sink(); v != g.source(); v = g.from_[parent_arc[v]]) {
    push = std::min(push, g.cap_[parent_arc[v]]);
  }
  for (int v = g.sink(); v != g.source(); v = g.from_[parent_arc[v]]) {
    g.cap_[parent_arc[v]] -= push;
    g.cap_[parent_arc[v] ^ 1] += push;
  }
  return push;
}

}  // namespace detail

/// Maximum integral flow by breadth-first augmenting paths. Weights are
/// reported in `cost` but not optimized.
inline FlowResult max_flow(const TimeExpandedNetwork& net, const Deadline& deadline = {}) {
  detail::ResidualGraph g(net);
  const int n = g.node_count();
  std::vector<int> parent_arc(n, -1);
  std::vector<int> seen(n, -1);
  int augmentations = 0;
  std::deque<int> queue;
  for (int round = 0;; ++round) {
    deadline.check();
    queue.clear();
    queue.push_back(g.source());
    seen[g.source()] = round;
    bool reached = false;
    while (!queue.empty() && !reached) {
      const int v = queue.front();
      queue.pop_front();
      for (int k = g.begin_[v]; k < g.begin_[v + 1]; ++k) {
        const int r = g.out_[k];
        const int w = g.to_[r];
        if (g.cap_[r] <= 0 || seen[w] == round) continue;
        seen[w] = round;
        parent_arc[w] = r;
        if (w == g.sink()) {
          reached = true;
          break;
        }
        queue.push_back(w);
      }
    }
    if (!reached) break;
    detail::bottleneck_and_push(g, parent_arc);
    ++augmentations;
  }
  FlowResult res = g.result();
  res.augmentations = augmentations;
  return res;
}

/// Minimum-weight maximum flow by successive shortest paths. Dijkstra runs on
/// reduced weights kept non-negative by node potentials; the search stops once
/// the sink is settled and unsettled nodes take the sink distance as their
/// potential increment.
inline FlowResult min_cost_max_flow(const TimeExpandedNetwork& net,
                                    const Deadline& deadline = {}) {
  for (const Arc& a : net.arcs()) {
    if (a.capacity > 0 && a.weight < 0) {
      throw std::invalid_argument("min_cost_max_flow needs non-negative weights");
    }
  }
  detail::ResidualGraph g(net);
  const int n = g.node_count();
  constexpr Weight kInf = std::numeric_limits<Weight>::max() / 4;
  std::vector<Weight> potential(n, 0);
  std::vector<Weight> dist(n, kInf);
  std::vector<char> settled(n, 0);
  std::vector<int> parent_arc(n, -1);
  std::vector<int> touched;
  int augmentations = 0;
  using Item = std::pair<Weight, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;

  while (true) {
    deadline.check();
    for (int v : touched) {
      dist[v] = kInf;
      settled[v] = 0;
    }
    touched.clear();
    open = {};
    dist[g.source()] = 0;
    touched.push_back(g.source());
    open.emplace(0, g.source());
    while (!open.empty()) {
      auto [d, v] = open.top();
      open.pop();
      if (settled[v] || d != dist[v]) continue;
      settled[v] = 1;
      if (v == g.sink()) break;
      for (int k = g.begin_[v]; k < g.begin_[v + 1]; ++k) {
        const int r = g.out_[k];
        if (g.cap_[r] <= 0) continue;
        const int w = g.to_[r];
        if (settled[w]) continue;
        const Weight nd = d + g.cost_[r] + potential[v] - potential[w];
        if (nd < dist[w]) {
          if (dist[w] == kInf) touched.push_back(w);
          dist[w] = nd;
          parent_arc[w] = r;
          open.emplace(nd, w);
        }
      }
    }
    if (!settled[g.sink()]) break;
    const Weight sink_dist = dist[g.sink()];
    for (int v : touched) potential[v] += std::min(dist[v], sink_dist);
    // Nodes never touched keep their distance "at least sink_dist".
    for (int v = 0; v < n; ++v) {
      if (dist[v] == kInf) potential[v] += sink_dist;
    }
    detail::bottleneck_and_push(g, parent_arc);
    ++augmentations;
  }
  FlowResult res = g.result();
  res.augmentations = augmentations;
  return res;
}

}  // namespace tapf

#endif  // TAPF_FLOW_HPP
