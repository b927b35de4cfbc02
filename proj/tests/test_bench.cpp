#include <gtest/gtest.h>

#include "tapf/bench.hpp"
#include "tapf/oracle.hpp"

using namespace tapf;

namespace {

FamilySpec small_grid() {
  return parse_family(R"(
# small grid family
name = tiny
kind = grid
width = 6
height = 5
blocked = 0.1
agents = 4
team_size = 1, 2
modes = cbm, cbm-unweighted, mapf-random-assign, oracle
seeds = 4
first_seed = 10
time_limit = 20
workers = 2
)");
}

}  // namespace

TEST(FamilySpec, ParsesEveryKey) {
  auto spec = small_grid();
  EXPECT_EQ(spec.name, "tiny");
  EXPECT_EQ(spec.width, 6);
  EXPECT_EQ(spec.height, 5);
  EXPECT_DOUBLE_EQ(spec.blocked, 0.1);
  EXPECT_EQ(spec.agents, std::vector<int>{4});
  EXPECT_EQ(spec.team_sizes, (std::vector<int>{1, 2}));
  ASSERT_EQ(spec.modes.size(), 4u);
  EXPECT_EQ(spec.modes[3], SolverMode::kOracle);
  EXPECT_EQ(spec.seed_count, 4);
  EXPECT_EQ(spec.first_seed, 10u);
  EXPECT_EQ(spec.workers, 2);
}

TEST(FamilySpec, RejectsBadInput) {
  EXPECT_THROW(parse_family("width 5\n"), ParseError);
  EXPECT_THROW(parse_family("colour = red\n"), ParseError);
  EXPECT_THROW(parse_family("modes = cbm, fastest\n"), ParseError);
  EXPECT_THROW(parse_family("kind = maze\n"), ParseError);
  EXPECT_THROW(parse_family("agents = 3, x\n"), ParseError);
}

TEST(SolverModes, RoundTripNames) {
  for (SolverMode m : {SolverMode::kCbm, SolverMode::kCbmUnweighted, SolverMode::kMapfRandomAssign,
                       SolverMode::kOracle}) {
    EXPECT_EQ(parse_mode(to_string(m)), m);
  }
  EXPECT_THROW(parse_mode("bogus"), std::invalid_argument);
}

TEST(Bench, RowsAgreeWithTheOracle) {
  auto spec = small_grid();
  auto rows = run_bench(spec);
  ASSERT_EQ(rows.size(), 8u);
  for (std::size_t p = 0; p < 2; ++p) {
    const BenchRow& cbm = rows[4 * p];
    const BenchRow& oracle = rows[4 * p + 3];
    ASSERT_EQ(cbm.mode, SolverMode::kCbm);
    ASSERT_EQ(oracle.mode, SolverMode::kOracle);
    for (int s = 0; s < spec.seed_count; ++s) {
      EXPECT_EQ(cbm.runs[s].outcome, SolveOutcome::kSolution);
      EXPECT_TRUE(cbm.runs[s].valid);
      EXPECT_EQ(cbm.runs[s].makespan, oracle.runs[s].makespan) << "seed " << cbm.runs[s].seed;
      EXPECT_EQ(rows[4 * p + 1].runs[s].makespan, cbm.runs[s].makespan);
      if (rows[4 * p + 2].runs[s].outcome == SolveOutcome::kSolution) {
        EXPECT_GE(rows[4 * p + 2].runs[s].makespan, cbm.runs[s].makespan);
      }
    }
    EXPECT_DOUBLE_EQ(cbm.success_rate, 1.0);
    EXPECT_EQ(cbm.team_size, static_cast<int>(p) + 1);
  }
}

TEST(Bench, CsvIsDeterministicWithoutTiming) {
  auto spec = small_grid();
  spec.modes = {SolverMode::kCbm};
  auto a = bench_csv(run_bench(spec), false);
  spec.workers = 1;
  auto b = bench_csv(run_bench(spec), false);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), kBenchCsvHeader);
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 3);
}

TEST(Bench, MeansAreOverSuccessesOnly) {
  BenchRow row;
  row.family = "f";
  row.seed_count = 2;
  row.success_rate = 0.5;
  row.mean_makespan = 7;
  auto csv = bench_csv({row});
  EXPECT_NE(csv.find("f,0,0,cbm,2,0.5000,7.0000,"), std::string::npos);
}

TEST(Bench, WarehouseFamilyBuildsDeskInstances) {
  auto spec = parse_family("kind = warehouse\nstations = 2\nunits_per_station = 2\nseeds = 2\ntime_limit = 30\n");
  auto rows = run_bench(spec);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].agents, 8);
  EXPECT_DOUBLE_EQ(rows[0].success_rate, 1.0);
}
