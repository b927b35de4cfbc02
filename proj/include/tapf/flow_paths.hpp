#ifndef TAPF_FLOW_PATHS_HPP
#define TAPF_FLOW_PATHS_HPP

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "tapf/flow.hpp"
#include "tapf/network.hpp"

namespace tapf {

class InfeasibleHorizon : public std::runtime_error {
 public:
  InfeasibleHorizon() : std::runtime_error("infeasible at this horizon") {}
};

/// Decomposes a flow of team-size units into one path per agent. Each agent
/// owns the unit injected at its own supply node (its start at its release
/// step), so the agent-to-target assignment is read off where that unit
/// ends. Paths have horizon()+1 entries; funnel teams get one more entry so
/// that every path ends off the graph.
inline std::vector<Path> extract_paths(const TimeExpandedNetwork& net, const FlowResult& flow,
                                       const Team& team) {
  if (flow.value < team.size()) throw InfeasibleHorizon();
  const Graph& g = net.graph();
  const int T = net.horizon();
  const auto targets = team.target_set();
  std::vector<int> remaining = flow.arc_flow;
  auto take = [&](int arc) {
    if (remaining[arc] > 0) {
      --remaining[arc];
      return true;
    }
    return false;
  };

  const auto release = team.release_times();
  const int length = T + 1 + (team.flags.funnel_target ? 1 : 0);
  std::vector<Path> paths;
  paths.reserve(team.size());
  for (int j = 0; j < team.size(); ++j) {
    const VertexId s = team.starts[j];
    const int r = release[j];
    const int supply_node = r == 0 ? net.out_node(s, 0) : net.in_node(s, r);
    bool supplied = false;
    for (std::size_t k = 0; k < net.supplies().size(); ++k) {
      if (net.supplies()[k].node == supply_node && flow.supply_flow[k] > 0) supplied = true;
    }
    if (!supplied) throw InfeasibleHorizon();

    Path path(length, kAbsent);
    VertexId v = s;
    int t = r;
    if (r > 0 && !take(net.capacity_arc(s, r))) {
      throw InternalError("released unit does not pass its vertex-capacity arc");
    }
    while (true) {
      path[t] = v;
      if (t == T) {
        if (team.flags.funnel_target) {
          auto it = std::lower_bound(targets.begin(), targets.end(), v);
          if (it == targets.end() || *it != v ||
              !take(net.funnel_arc(static_cast<int>(it - targets.begin()), T))) {
            throw InternalError("funnel unit not absorbed at the horizon");
          }
        }
        break;
      }
      if (team.flags.funnel_target) {
        auto it = std::lower_bound(targets.begin(), targets.end(), v);
        if (it != targets.end() && *it == v &&
            take(net.funnel_arc(static_cast<int>(it - targets.begin()), t))) {
          break;
        }
      }
      if (take(net.stay_arc(v, t))) {
        // stays at v
      } else {
        bool moved = false;
        auto nbrs = g.neighbors(v);
        auto eids = g.incident_edges(v);
        for (std::size_t k = 0; k < nbrs.size() && !moved; ++k) {
          const int e = eids[k];
          const Edge& ed = g.edge(e);
          const GadgetArc entry = v == ed.u ? kEntryFromU : kEntryFromV;
          const GadgetArc across = v == ed.u ? kExitToV : kExitToU;
          const GadgetArc back = v == ed.u ? kExitToU : kExitToV;
          if (remaining[net.gadget_arc(e, t, entry)] == 0) continue;
          if (!take(net.gadget_arc(e, t, entry)) || !take(net.gadget_arc(e, t, kGadgetCore))) {
            throw InternalError("broken flow through edge gadget");
          }
          if (take(net.gadget_arc(e, t, across))) {
            v = nbrs[k];
          } else if (!take(net.gadget_arc(e, t, back))) {
            // w' may also lead back to the entry vertex, which is a wait.
            throw InternalError("broken flow through edge gadget");
          }
          moved = true;
        }
        if (!moved) throw InternalError("flow stops before the horizon");
      }
      ++t;
      if (!take(net.capacity_arc(v, t))) throw InternalError("flow skips a vertex-capacity arc");
    }
    paths.push_back(std::move(path));
  }
  return paths;
}

}  // namespace tapf

#endif  // TAPF_FLOW_PATHS_HPP
