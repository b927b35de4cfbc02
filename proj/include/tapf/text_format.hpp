#ifndef TAPF_TEXT_FORMAT_HPP
#define TAPF_TEXT_FORMAT_HPP

// Plain-text instance and solution files.
//
// Instance:
//   grid <width> <height>            (or: vertices <n> / edge <u> <v> ...)
//   <height rows of '.' free and '@' blocked>
//   teams <K>
//   team <i>: starts <v...> targets <v...> [flags: <flag...>]
//
// Solution: one line per agent, `agent <team>.<index>: v0 v1 ...`, with '-'
// for time steps the agent is off the graph. Teams and agents are 1-based in
// both files; vertex ids are 0-based.

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tapf/instance.hpp"
#include "tapf/solution.hpp"

namespace tapf {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

struct Line {
  int number;
  std::string text;
};

inline std::vector<Line> meaningful_lines(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string line(text.substr(pos, end - pos));
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.pop_back();
    }
    std::size_t lead = line.find_first_not_of(" \t");
    if (lead != std::string::npos) out.push_back({number, line.substr(lead)});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

inline std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline long parse_int(const std::string& tok, int line, long lo, long hi) {
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(tok, &used);
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + tok + "'");
  }
  if (used != tok.size()) throw ParseError(line, "expected an integer, got '" + tok + "'");
  if (value < lo || value > hi) throw ParseError(line, "value out of range: " + tok);
  return value;
}

}  // namespace detail

inline TapfInstance parse_instance(std::string_view text) {
  using detail::parse_int;
  const auto lines = detail::meaningful_lines(text);
  std::size_t i = 0;
  auto need = [&](const char* what) -> const detail::Line& {
    if (i >= lines.size()) {
      int last = lines.empty() ? 1 : lines.back().number;
      throw ParseError(last, std::string("unexpected end of file, expected ") + what);
    }
    return lines[i];
  };

  TapfInstance inst;
  {
    const auto& head = need("'grid' or 'vertices'");
    auto tok = detail::tokens(head.text);
    if (tok[0] == "grid") {
      if (tok.size() != 3) throw ParseError(head.number, "expected 'grid <width> <height>'");
      int w = static_cast<int>(parse_int(tok[1], head.number, 1, 1 << 15));
      int h = static_cast<int>(parse_int(tok[2], head.number, 1, 1 << 15));
      ++i;
      std::vector<bool> blocked;
      blocked.reserve(static_cast<std::size_t>(w) * h);
      for (int y = 0; y < h; ++y) {
        const auto& row = need("grid row");
        if (static_cast<int>(row.text.size()) != w) {
          throw ParseError(row.number, "grid row must have " + std::to_string(w) + " cells");
        }
        for (char c : row.text) {
          if (c == '.') {
            blocked.push_back(false);
          } else if (c == '@') {
            blocked.push_back(true);
          } else {
            throw ParseError(row.number, std::string("bad grid cell '") + c + "'");
          }
        }
        ++i;
      }
      try {
        inst.graph = Graph::grid(w, h, std::move(blocked));
      } catch (const std::invalid_argument& e) {
        throw ParseError(head.number, e.what());
      }
    } else if (tok[0] == "vertices") {
      if (tok.size() != 2) throw ParseError(head.number, "expected 'vertices <n>'");
      int n = static_cast<int>(parse_int(tok[1], head.number, 1, 1 << 28));
      ++i;
      std::vector<std::pair<VertexId, VertexId>> edges;
      while (i < lines.size() && detail::tokens(lines[i].text)[0] == "edge") {
        auto et = detail::tokens(lines[i].text);
        if (et.size() != 3) throw ParseError(lines[i].number, "expected 'edge <u> <v>'");
        edges.emplace_back(static_cast<VertexId>(parse_int(et[1], lines[i].number, 0, n - 1)),
                           static_cast<VertexId>(parse_int(et[2], lines[i].number, 0, n - 1)));
        ++i;
      }
      try {
        inst.graph = Graph::from_edges(n, edges);
      } catch (const std::invalid_argument& e) {
        throw ParseError(head.number, e.what());
      }
    } else {
      throw ParseError(head.number, "expected 'grid' or 'vertices', got '" + tok[0] + "'");
    }
  }

  const auto& teams_line = need("'teams <K>'");
  auto tt = detail::tokens(teams_line.text);
  if (tt.size() != 2 || tt[0] != "teams") throw ParseError(teams_line.number, "expected 'teams <K>'");
  const int k = static_cast<int>(parse_int(tt[1], teams_line.number, 1, 1 << 20));
  ++i;
  const long vmax = inst.graph.vertex_count() - 1;
  for (int team_index = 1; team_index <= k; ++team_index) {
    const auto& line = need("team line");
    auto tok = detail::tokens(line.text);
    if (tok.size() < 2 || tok[0] != "team" || tok[1] != std::to_string(team_index) + ":") {
      throw ParseError(line.number, "expected 'team " + std::to_string(team_index) + ":'");
    }
    Team team;
    enum { kNone, kStarts, kTargets, kFlags } section = kNone;
    for (std::size_t p = 2; p < tok.size(); ++p) {
      const std::string& w = tok[p];
      if (w == "starts") {
        section = kStarts;
      } else if (w == "targets") {
        section = kTargets;
      } else if (w == "flags:" || w == "flags") {
        section = kFlags;
      } else if (section == kStarts) {
        team.starts.push_back(static_cast<VertexId>(parse_int(w, line.number, 0, vmax)));
      } else if (section == kTargets) {
        team.targets.push_back(static_cast<VertexId>(parse_int(w, line.number, 0, vmax)));
      } else if (section == kFlags) {
        std::string flag;
        for (char c : w + "|") {
          if (c == '|' || c == ',') {
            if (flag == "shared_start_spread") {
              team.flags.shared_start_spread = true;
            } else if (flag == "funnel_target") {
              team.flags.funnel_target = true;
            } else if (flag == "surplus_targets") {
              team.flags.surplus_targets = true;
            } else if (!flag.empty()) {
              throw ParseError(line.number, "unknown flag '" + flag + "'");
            }
            flag.clear();
          } else {
            flag += c;
          }
        }
      } else {
        throw ParseError(line.number, "unexpected token '" + w + "'");
      }
    }
    if (team.starts.empty()) throw ParseError(line.number, "team has no starts");
    if (team.targets.empty()) throw ParseError(line.number, "team has no targets");
    inst.teams.push_back(std::move(team));
    ++i;
  }
  if (i < lines.size()) throw ParseError(lines[i].number, "trailing content");
  return inst;
}

inline std::string serialize_instance(const TapfInstance& inst) {
  std::ostringstream out;
  const Graph& g = inst.graph;
  if (const auto& grid = g.grid_info()) {
    out << "grid " << grid->width << ' ' << grid->height << '\n';
    for (int y = 0; y < grid->height; ++y) {
      for (int x = 0; x < grid->width; ++x) out << (grid->blocked[y * grid->width + x] ? '@' : '.');
      out << '\n';
    }
  } else {
    out << "vertices " << g.vertex_count() << '\n';
    for (const Edge& e : g.edges()) out << "edge " << e.u << ' ' << e.v << '\n';
  }
  out << "teams " << inst.team_count() << '\n';
  for (int i = 0; i < inst.team_count(); ++i) {
    const Team& team = inst.teams[i];
    out << "team " << i + 1 << ": starts";
    for (VertexId v : team.starts) out << ' ' << v;
    out << " targets";
    for (VertexId v : team.targets) out << ' ' << v;
    if (team.flags.any()) {
      out << " flags:";
      if (team.flags.shared_start_spread) out << " shared_start_spread";
      if (team.flags.funnel_target) out << " funnel_target";
      if (team.flags.surplus_targets) out << " surplus_targets";
    }
    out << '\n';
  }
  return out.str();
}

inline std::string serialize_solution(const Solution& sol) {
  std::ostringstream out;
  for (std::size_t i = 0; i < sol.team_paths.size(); ++i) {
    for (std::size_t j = 0; j < sol.team_paths[i].size(); ++j) {
      out << "agent " << i + 1 << '.' << j + 1 << ':';
      for (VertexId v : sol.team_paths[i][j]) {
        if (v == kAbsent) {
          out << " -";
        } else {
          out << ' ' << v;
        }
      }
      out << '\n';
    }
  }
  return out.str();
}

inline Solution parse_solution(std::string_view text) {
  using detail::parse_int;
  std::map<std::pair<long, long>, Path> agents;
  for (const auto& line : detail::meaningful_lines(text)) {
    auto tok = detail::tokens(line.text);
    if (tok.size() < 2 || tok[0] != "agent" || tok[1].empty() || tok[1].back() != ':') {
      throw ParseError(line.number, "expected 'agent <team>.<index>: ...'");
    }
    std::string id = tok[1].substr(0, tok[1].size() - 1);
    auto dot = id.find('.');
    if (dot == std::string::npos) throw ParseError(line.number, "agent id must be <team>.<index>");
    long team = parse_int(id.substr(0, dot), line.number, 1, 1 << 20);
    long index = parse_int(id.substr(dot + 1), line.number, 1, 1 << 20);
    Path path;
    for (std::size_t p = 2; p < tok.size(); ++p) {
      path.push_back(tok[p] == "-" ? kAbsent
                                   : static_cast<VertexId>(parse_int(tok[p], line.number, 0,
                                                                     (1L << 31) - 1)));
    }
    if (!agents.emplace(std::pair(team, index), std::move(path)).second) {
      throw ParseError(line.number, "agent " + id + " listed twice");
    }
  }
  Solution sol;
  for (auto& [key, path] : agents) {
    auto [team, index] = key;
    if (team != static_cast<long>(sol.team_paths.size()) &&
        team != static_cast<long>(sol.team_paths.size()) + 1) {
      throw ParseError(0, "missing team " + std::to_string(sol.team_paths.size() + 1));
    }
    if (team == static_cast<long>(sol.team_paths.size()) + 1) sol.team_paths.emplace_back();
    if (index != static_cast<long>(sol.team_paths.back().size()) + 1) {
      throw ParseError(0, "missing agent " + std::to_string(team) + "." +
                              std::to_string(sol.team_paths.back().size() + 1));
    }
    sol.team_paths.back().push_back(std::move(path));
  }
  return sol;
}

}  // namespace tapf

#endif  // TAPF_TEXT_FORMAT_HPP
