#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "tapf/bench.hpp"
#include "tapf/generators.hpp"
#include "tapf/high_level.hpp"
#include "tapf/ilp_export.hpp"
#include "tapf/oracle.hpp"
#include "tapf/text_format.hpp"

namespace {

enum ExitCode {
  kExitSolution = 0,
  kExitInvalidSolution = 1,
  kExitInvalidInput = 2,
  kExitNoSolution = 3,
  kExitTimeout = 4,
  kExitHorizonCap = 5,
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

tapf::TapfInstance load_instance(const std::string& path) {
  tapf::TapfInstance inst;
  try {
    inst = tapf::parse_instance(read_file(path));
  } catch (const tapf::ParseError& e) {
    throw InputError(path + ":" + std::to_string(e.line()) + ": " + e.what());
  }
  auto problems = tapf::validate_instance(inst);
  if (!problems.empty()) {
    std::string msg = path + ": invalid instance";
    for (const auto& v : problems) msg += "\n  " + v.to_string();
    throw InputError(msg);
  }
  return inst;
}

int exit_code_for(tapf::SolveOutcome o) {
  switch (o) {
    case tapf::SolveOutcome::kSolution: return kExitSolution;
    case tapf::SolveOutcome::kNoSolution: return kExitNoSolution;
    case tapf::SolveOutcome::kTimeout: return kExitTimeout;
    case tapf::SolveOutcome::kHorizonCap: return kExitHorizonCap;
  }
  return kExitInvalidInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Team target-assignment and path-finding solver"};
  app.require_subcommand(1);

  std::string instance_path, solution_path, out_path, mode = "cbm", family_path;
  std::uint64_t seed = 1;
  double time_limit = 0;
  int max_t = -1;
  bool no_timing = false;

  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance file");
  solve_cmd->add_option("instance", instance_path, "Instance file")->required();
  solve_cmd->add_option("--mode", mode, "cbm | cbm-unweighted | mapf-random-assign | oracle");
  solve_cmd->add_option("--seed", seed, "Assignment seed for mapf-random-assign");
  solve_cmd->add_option("--time-limit", time_limit, "Seconds, 0 for none");
  solve_cmd->add_option("--max-t", max_t, "Horizon bound (default: theoretical makespan bound)");
  solve_cmd->add_option("--out", out_path, "Write the solution to this file");

  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark family and print CSV");
  bench_cmd->add_option("--family", family_path, "Family config file")->required();
  bench_cmd->add_option("--seed", seed, "First seed (overrides the family file)");
  bench_cmd->add_option("--time-limit", time_limit, "Per-instance seconds (overrides the family)");
  bench_cmd->add_option("--max-t", max_t, "Horizon cap (overrides the family)");
  bench_cmd->add_option("--out", out_path, "Write the CSV to this file");
  bench_cmd->add_flag("--no-timing", no_timing, "Write 0 in the time column");

  auto* validate_cmd = app.add_subcommand("validate", "Check a solution against an instance");
  validate_cmd->add_option("instance", instance_path, "Instance file")->required();
  validate_cmd->add_option("solution", solution_path, "Solution file")->required();

  std::string kind = "grid";
  tapf::GridGenSpec grid;
  tapf::WarehouseGenSpec warehouse;
  auto* gen_cmd = app.add_subcommand("generate", "Write a random instance");
  gen_cmd->add_option("kind", kind, "grid | warehouse")->check(CLI::IsMember({"grid", "warehouse"}));
  gen_cmd->add_option("--width", grid.width);
  gen_cmd->add_option("--height", grid.height);
  gen_cmd->add_option("--blocked", grid.blocked_fraction);
  gen_cmd->add_option("--teams", grid.team_count);
  gen_cmd->add_option("--team-size", grid.team_size);
  gen_cmd->add_option("--stations", warehouse.station_count);
  gen_cmd->add_option("--units", warehouse.units_per_station);
  gen_cmd->add_option("--outgoing", warehouse.outgoing_units);
  gen_cmd->add_option("--seed", seed);
  gen_cmd->add_option("--family", family_path, "Take grid/warehouse parameters from a family file");
  gen_cmd->add_option("--out", out_path);

  int horizon = 0;
  auto* ilp_cmd = app.add_subcommand("export-ilp", "Write the multi-commodity flow model");
  ilp_cmd->add_option("instance", instance_path, "Instance file")->required();
  ilp_cmd->add_option("--max-t", horizon, "Horizon T of the model")->required();
  ilp_cmd->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      const tapf::SolverMode m = tapf::parse_mode(mode);
      const auto inst = load_instance(instance_path);
      tapf::SolveConfig config;
      config.time_limit = time_limit;
      config.max_horizon = max_t;
      const auto report = tapf::run_mode(inst, m, seed, config);
      std::printf("outcome: %s\n", tapf::to_string(report.outcome));
      if (report.outcome == tapf::SolveOutcome::kSolution) {
        std::printf("makespan: %d\n", report.makespan);
      }
      std::printf("nodes generated: %ld\nnodes expanded: %ld\nlow-level calls: %ld\n",
                  report.stats.nodes_generated, report.stats.nodes_expanded,
                  report.stats.low_level_calls);
      std::printf("flow solves: %ld\nwall seconds: %.3f\n", report.stats.flow.flow_solves,
                  report.stats.wall_seconds);
      if (report.solution) {
        const auto problems = tapf::validate_solution(inst, *report.solution);
        for (const auto& v : problems) std::fprintf(stderr, "internal: %s\n", v.to_string().c_str());
        if (!out_path.empty()) write_output(out_path, tapf::serialize_solution(*report.solution));
      }
      return exit_code_for(report.outcome);
    }
    if (*bench_cmd) {
      tapf::FamilySpec spec;
      try {
        spec = tapf::parse_family(read_file(family_path));
      } catch (const tapf::ParseError& e) {
        throw InputError(family_path + ":" + std::to_string(e.line()) + ": " + e.what());
      }
      if (bench_cmd->count("--seed")) spec.first_seed = seed;
      if (bench_cmd->count("--time-limit")) spec.time_limit = time_limit;
      if (bench_cmd->count("--max-t")) spec.max_t = max_t;
      write_output(out_path, tapf::bench_csv(tapf::run_bench(spec), !no_timing));
      return 0;
    }
    if (*validate_cmd) {
      const auto inst = load_instance(instance_path);
      tapf::Solution sol;
      try {
        sol = tapf::parse_solution(read_file(solution_path));
      } catch (const tapf::ParseError& e) {
        throw InputError(solution_path + ":" + std::to_string(e.line()) + ": " + e.what());
      }
      const auto problems = tapf::validate_solution(inst, sol);
      if (problems.empty()) {
        std::printf("ok makespan %d\n", tapf::makespan(inst, sol));
        return kExitSolution;
      }
      for (const auto& v : problems) std::printf("%s\n", v.to_string().c_str());
      return kExitInvalidSolution;
    }
    if (*gen_cmd) {
      tapf::TapfInstance inst;
      if (!family_path.empty()) {
        const auto spec = tapf::parse_family(read_file(family_path));
        inst = tapf::family_instance(spec, spec.agents.front(), spec.team_sizes.front(), seed);
      } else if (kind == "warehouse") {
        warehouse.seed = seed;
        inst = tapf::gen_warehouse(warehouse);
      } else {
        grid.seed = seed;
        inst = tapf::gen_grid(grid);
      }
      write_output(out_path, tapf::serialize_instance(inst));
      return 0;
    }
    if (*ilp_cmd) {
      const auto inst = load_instance(instance_path);
      if (horizon < 0) throw InputError("horizon must be non-negative");
      write_output(out_path, tapf::export_ilp(inst, horizon));
      return 0;
    }
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalidInput;
  } catch (const tapf::ParseError& e) {
    std::fprintf(stderr, "error: line %d: %s\n", e.line(), e.what());
    return kExitInvalidInput;
  } catch (const tapf::GeneratorError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalidInput;
  } catch (const tapf::OracleRefused& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalidInput;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalidInput;
  }
  return 0;
}
