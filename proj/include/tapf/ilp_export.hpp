#ifndef TAPF_ILP_EXPORT_HPP
#define TAPF_ILP_EXPORT_HPP

#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tapf/instance.hpp"
#include "tapf/network.hpp"
#include "tapf/text_format.hpp"

namespace tapf {

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t instance_hash(const TapfInstance& inst) {
  return fnv1a64(serialize_instance(inst));
}

/// Integer multi-commodity flow model (one commodity per team) on the T-step
/// time-expanded network, in CPLEX LP format. x_<team>_<arc> is the flow of
/// a team on an arc; y_<team>_<k> is the flow a team delivers to its k-th
/// demand. Arcs shared by all teams get a joint capacity row. The objective
/// is constant: any feasible point is a solution with makespan at most T.
inline std::string export_ilp(const TapfInstance& inst, int horizon) {
  NetworkOptions no_prune;
  no_prune.prune = false;
  std::vector<TimeExpandedNetwork> nets;
  for (int i = 0; i < inst.team_count(); ++i) {
    nets.push_back(build_network(inst.graph, inst.teams[i], i, horizon, {}, {}, no_prune));
  }
  auto xname = [](int team, int arc) {
    return "x_" + std::to_string(team + 1) + "_" + std::to_string(arc);
  };
  auto yname = [](int team, int k) {
    return "y_" + std::to_string(team + 1) + "_" + std::to_string(k);
  };

  std::ostringstream rows;
  std::vector<std::string> variables;
  for (int i = 0; i < inst.team_count(); ++i) {
    const TimeExpandedNetwork& net = nets[i];
    for (int a = 0; a < net.arc_count(); ++a) {
      if (net.arc(a).capacity > 0) variables.push_back(xname(i, a));
    }
    for (std::size_t k = 0; k < net.demands().size(); ++k) variables.push_back(yname(i, static_cast<int>(k)));
  }
  const std::string anchor = variables.empty() ? std::string("x_none") : variables.front();

  for (int i = 0; i < inst.team_count(); ++i) {
    const TimeExpandedNetwork& net = nets[i];
    // node -> ordered terms
    std::map<int, std::vector<std::string>> terms;
    std::map<int, int> rhs;
    for (int a = 0; a < net.arc_count(); ++a) {
      const Arc& arc = net.arc(a);
      if (arc.capacity <= 0) continue;
      terms[arc.from].push_back("+ " + xname(i, a));
      terms[arc.to].push_back("- " + xname(i, a));
    }
    for (std::size_t k = 0; k < net.demands().size(); ++k) {
      terms[net.demands()[k].node].push_back("+ " + yname(i, static_cast<int>(k)));
    }
    for (const Supply& s : net.supplies()) rhs[s.node] += s.units;
    for (const auto& [node, units] : rhs) terms[node];
    for (const auto& [node, list] : terms) {
      const int b = rhs.count(node) ? rhs[node] : 0;
      rows << " flow_" << i + 1 << "_" << node << ":";
      if (list.empty()) rows << " 0 " << anchor;
      for (const std::string& term : list) rows << ' ' << term;
      rows << " = " << b << '\n';
    }
    rows << " demand_" << i + 1 << ":";
    if (net.demands().empty()) rows << " 0 " << anchor;
    for (std::size_t k = 0; k < net.demands().size(); ++k) rows << " + " << yname(i, static_cast<int>(k));
    rows << " = " << inst.teams[i].size() << '\n';
  }
  if (inst.team_count() > 1) {
    // Arcs below this id are the graph arcs every team shares; funnel arcs
    // come after them and belong to one team.
    const int shared = horizon * (2 * inst.graph.vertex_count() + 5 * inst.graph.edge_count());
    for (int a = 0; a < shared; ++a) {
      std::vector<int> users;
      for (int i = 0; i < inst.team_count(); ++i) {
        if (nets[i].arc(a).capacity > 0) users.push_back(i);
      }
      if (users.size() < 2) continue;
      rows << " cap_" << a << ":";
      for (int i : users) rows << " + " << xname(i, a);
      rows << " <= 1\n";
    }
  }

  std::ostringstream out;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(instance_hash(inst)));
  out << "\\ TAPF integer multi-commodity flow model\n";
  out << "\\ instance fnv1a64 " << hash << "\n";
  out << "\\ horizon " << horizon << "\n";
  out << "\\ commodities " << inst.team_count() << "\n";
  out << "Minimize\n obj: 0 " << anchor << "\n";
  out << "Subject To\n" << rows.str();
  out << "Bounds\n";
  for (int i = 0; i < inst.team_count(); ++i) {
    const TimeExpandedNetwork& net = nets[i];
    for (int a = 0; a < net.arc_count(); ++a) {
      if (net.arc(a).capacity > 0) out << " 0 <= " << xname(i, a) << " <= " << net.arc(a).capacity << '\n';
    }
    for (std::size_t k = 0; k < net.demands().size(); ++k) {
      out << " 0 <= " << yname(i, static_cast<int>(k)) << " <= " << net.demands()[k].units << '\n';
    }
  }
  out << "General\n";
  for (const std::string& v : variables) out << ' ' << v << '\n';
  out << "End\n";
  return out.str();
}

}  // namespace tapf

#endif  // TAPF_ILP_EXPORT_HPP
