#ifndef TAPF_BENCH_HPP
#define TAPF_BENCH_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "tapf/generators.hpp"
#include "tapf/high_level.hpp"
#include "tapf/oracle.hpp"
#include "tapf/text_format.hpp"

namespace tapf {

enum class SolverMode { kCbm, kCbmUnweighted, kMapfRandomAssign, kOracle };

inline const char* to_string(SolverMode m) {
  switch (m) {
    case SolverMode::kCbm: return "cbm";
    case SolverMode::kCbmUnweighted: return "cbm-unweighted";
    case SolverMode::kMapfRandomAssign: return "mapf-random-assign";
    case SolverMode::kOracle: return "oracle";
  }
  return "?";
}

inline SolverMode parse_mode(std::string_view s) {
  for (SolverMode m : {SolverMode::kCbm, SolverMode::kCbmUnweighted, SolverMode::kMapfRandomAssign,
                       SolverMode::kOracle}) {
    if (s == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

/// Runs one solver mode. The oracle mode reports its result in the same
/// shape (no solution paths; makespan only).
inline SolveReport run_mode(const TapfInstance& inst, SolverMode mode, std::uint64_t seed,
                            SolveConfig config) {
  switch (mode) {
    case SolverMode::kCbm:
      config.weighted = true;
      return solve(inst, config);
    case SolverMode::kCbmUnweighted:
      config.weighted = false;
      return solve(inst, config);
    case SolverMode::kMapfRandomAssign:
      config.weighted = true;
      return solve_as_mapf(inst, seed, config);
    case SolverMode::kOracle: {
      const auto started = std::chrono::steady_clock::now();
      SolveReport report;
      OracleLimits limits;
      if (config.max_horizon >= 0) limits.horizon_cap = config.max_horizon;
      const OracleResult r = optimal_makespan(inst, limits);
      report.outcome = r.status == OracleStatus::kOptimal      ? SolveOutcome::kSolution
                       : r.status == OracleStatus::kInfeasible ? SolveOutcome::kNoSolution
                                                               : SolveOutcome::kHorizonCap;
      report.makespan = r.makespan;
      report.stats.nodes_expanded = r.states;
      report.stats.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      return report;
    }
  }
  throw std::logic_error("unreachable");
}

/// Benchmark family read from `key = value` lines. List-valued keys take
/// comma-separated values; one CSV row is produced per (agents, team size,
/// mode) combination, always over the same seeds.
struct FamilySpec {
  std::string name = "family";
  std::string kind = "grid";  // grid | warehouse
  int width = 30;
  int height = 30;
  double blocked = 0.1;
  std::vector<int> agents{10};
  std::vector<int> team_sizes{5};
  int stations = 3;
  int units_per_station = 4;
  int outgoing_units = -1;
  std::vector<SolverMode> modes{SolverMode::kCbm};
  int seed_count = 1;
  std::uint64_t first_seed = 1;
  double time_limit = 300;
  int max_t = -1;  // < 0: 4 * |V|
  int workers = 1;
};

inline FamilySpec parse_family(std::string_view text) {
  FamilySpec spec;
  auto ints = [](const std::string& v, int line) {
    std::vector<int> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto toks = detail::tokens(item);
      if (toks.size() != 1) throw ParseError(line, "bad list value '" + item + "'");
      out.push_back(static_cast<int>(detail::parse_int(toks[0], line, 0, 1'000'000'000)));
    }
    if (out.empty()) throw ParseError(line, "empty list");
    return out;
  };
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  for (const auto& ln : detail::meaningful_lines(text)) {
    const auto eq = ln.text.find('=');
    if (eq == std::string::npos) throw ParseError(ln.number, "expected key = value");
    const std::string key = trim(ln.text.substr(0, eq));
    const std::string value = trim(ln.text.substr(eq + 1));
    auto one = [&](long lo, long hi) {
      auto v = ints(value, ln.number);
      if (v.size() != 1 || v[0] < lo || v[0] > hi) throw ParseError(ln.number, "bad value for " + key);
      return v[0];
    };
    auto real = [&] {
      try {
        std::size_t used = 0;
        double d = std::stod(value, &used);
        if (used != value.size() || d < 0) throw std::invalid_argument(value);
        return d;
      } catch (const std::exception&) {
        throw ParseError(ln.number, "bad number for " + key);
      }
    };
    if (key == "name") {
      spec.name = value;
    } else if (key == "kind") {
      if (value != "grid" && value != "warehouse") throw ParseError(ln.number, "unknown kind");
      spec.kind = value;
    } else if (key == "width") {
      spec.width = one(1, 100000);
    } else if (key == "height") {
      spec.height = one(1, 100000);
    } else if (key == "blocked") {
      spec.blocked = real();
    } else if (key == "agents") {
      spec.agents = ints(value, ln.number);
    } else if (key == "team_size") {
      spec.team_sizes = ints(value, ln.number);
    } else if (key == "stations") {
      spec.stations = one(1, 1000);
    } else if (key == "units_per_station") {
      spec.units_per_station = one(1, 100000);
    } else if (key == "outgoing_units") {
      spec.outgoing_units = one(1, 1000000);
    } else if (key == "modes") {
      spec.modes.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          spec.modes.push_back(parse_mode(trim(item)));
        } catch (const std::invalid_argument& e) {
          throw ParseError(ln.number, e.what());
        }
      }
    } else if (key == "seeds") {
      spec.seed_count = one(1, 1000000);
    } else if (key == "first_seed") {
      spec.first_seed = static_cast<std::uint64_t>(one(0, 1'000'000'000));
    } else if (key == "time_limit") {
      spec.time_limit = real();
    } else if (key == "max_t") {
      spec.max_t = one(0, 1'000'000'000);
    } else if (key == "workers") {
      spec.workers = one(1, 1024);
    } else {
      throw ParseError(ln.number, "unknown key '" + key + "'");
    }
  }
  return spec;
}

/// Instance of a family for one (agents, team size, seed) point.
inline TapfInstance family_instance(const FamilySpec& spec, int agents, int team_size,
                                    std::uint64_t seed) {
  if (spec.kind == "warehouse") {
    WarehouseGenSpec w;
    w.station_count = spec.stations;
    w.units_per_station = spec.units_per_station;
    w.outgoing_units = spec.outgoing_units;
    w.seed = seed;
    return gen_warehouse(w);
  }
  if (team_size <= 0 || agents % team_size != 0) {
    throw std::invalid_argument("agent count " + std::to_string(agents) +
                                " is not a multiple of team size " + std::to_string(team_size));
  }
  GridGenSpec g;
  g.width = spec.width;
  g.height = spec.height;
  g.blocked_fraction = spec.blocked;
  g.team_count = agents / team_size;
  g.team_size = team_size;
  g.seed = seed;
  return gen_grid(g);
}

struct RunRecord {
  std::uint64_t seed = 0;
  SolveOutcome outcome = SolveOutcome::kNoSolution;
  int makespan = -1;
  double seconds = 0;
  long hl_nodes = 0;
  long ll_calls = 0;
  bool valid = true;  // solution passed validate_solution (true when none)
};

struct BenchRow {
  std::string family;
  int agents = 0;
  int team_size = 0;
  SolverMode mode = SolverMode::kCbm;
  int seed_count = 0;
  double success_rate = 0;
  double mean_makespan = 0;
  double mean_time_s = 0;
  double mean_hl_nodes = 0;
  double mean_ll_calls = 0;
  std::vector<RunRecord> runs;
};

inline constexpr const char* kBenchCsvHeader =
    "family,agents,team_size,mode,seed_count,success_rate,mean_makespan,mean_time_s,"
    "mean_hl_nodes,mean_ll_calls";

/// Solves every instance of the family in every mode. Instances are shared
/// across modes. Jobs run on `spec.workers` threads; results do not depend
/// on the worker count except through timeouts.
inline std::vector<BenchRow> run_bench(const FamilySpec& spec) {
  struct Point {
    int agents;
    int team_size;
  };
  std::vector<Point> points;
  if (spec.kind == "warehouse") {
    points.push_back({0, spec.units_per_station});
  } else {
    for (int a : spec.agents) {
      for (int k : spec.team_sizes) points.push_back({a, k});
    }
  }
  struct Job {
    std::size_t row;
    std::size_t run;
    const TapfInstance* inst;
    SolverMode mode;
    std::uint64_t seed;
  };
  std::vector<BenchRow> rows;
  std::vector<TapfInstance> instances;
  instances.reserve(points.size() * spec.seed_count);
  std::vector<Job> jobs;
  for (const Point& p : points) {
    const std::size_t first_inst = instances.size();
    for (int s = 0; s < spec.seed_count; ++s) {
      instances.push_back(family_instance(spec, p.agents, p.team_size, spec.first_seed + s));
    }
    for (SolverMode mode : spec.modes) {
      BenchRow row;
      row.family = spec.name;
      row.agents = instances[first_inst].agent_count();
      row.team_size = p.team_size;
      row.mode = mode;
      row.seed_count = spec.seed_count;
      row.runs.resize(spec.seed_count);
      for (int s = 0; s < spec.seed_count; ++s) {
        jobs.push_back({rows.size(), static_cast<std::size_t>(s), &instances[first_inst + s], mode,
                        spec.first_seed + s});
      }
      rows.push_back(std::move(row));
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const Job& job = jobs[j];
      SolveConfig config;
      config.time_limit = spec.time_limit;
      config.max_horizon = spec.max_t >= 0 ? spec.max_t : 4 * job.inst->graph.vertex_count();
      SolveReport r = run_mode(*job.inst, job.mode, job.seed, config);
      RunRecord rec;
      rec.seed = job.seed;
      rec.outcome = r.outcome;
      rec.makespan = r.makespan;
      rec.seconds = r.stats.wall_seconds;
      rec.hl_nodes = r.stats.nodes_generated;
      rec.ll_calls = r.stats.low_level_calls;
      if (r.solution) rec.valid = validate_solution(*job.inst, *r.solution).empty();
      rows[job.row].runs[job.run] = rec;
    }
  };
  const int threads = std::max(1, std::min<int>(spec.workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (BenchRow& row : rows) {
    int ok = 0;
    for (const RunRecord& r : row.runs) {
      if (r.outcome != SolveOutcome::kSolution || !r.valid) continue;
      ++ok;
      row.mean_makespan += r.makespan;
      row.mean_time_s += r.seconds;
      row.mean_hl_nodes += r.hl_nodes;
      row.mean_ll_calls += r.ll_calls;
    }
    row.success_rate = row.runs.empty() ? 0 : static_cast<double>(ok) / row.runs.size();
    if (ok > 0) {
      row.mean_makespan /= ok;
      row.mean_time_s /= ok;
      row.mean_hl_nodes /= ok;
      row.mean_ll_calls /= ok;
    }
  }
  return rows;
}

/// CSV text with the fixed header. With `timing` off the time column is
/// written as 0 so that repeated runs are byte-identical.
inline std::string bench_csv(const std::vector<BenchRow>& rows, bool timing = true) {
  std::string out = std::string(kBenchCsvHeader) + "\n";
  char buf[512];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%s,%d,%.4f,%.4f,%.4f,%.2f,%.2f\n", r.family.c_str(),
                  r.agents, r.team_size, to_string(r.mode), r.seed_count, r.success_rate,
                  r.mean_makespan, timing ? r.mean_time_s : 0.0, r.mean_hl_nodes, r.mean_ll_calls);
    out += buf;
  }
  return out;
}

}  // namespace tapf

#endif  // TAPF_BENCH_HPP
