#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kfjlt/bench/config.hpp"
#include "kfjlt/bench/csv.hpp"
#include "kfjlt/bench/experiments.hpp"
#include "test_helpers.hpp"

using namespace kfjlt;
using namespace kfjlt::bench;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "kfjlt_bench_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_distortion() {
  ExperimentConfig c;
  c.kind = ExperimentKind::distortion;
  c.shape = Shape({4, 4, 4, 4});
  c.degrees = {1, 2, 4};
  c.m_grid = {8, 32};
  c.trials = 20;
  c.seed = 7;
  finalize(c);
  return c;
}

}  // namespace

TEST(Config, ParsesGridsAndLists) {
  EXPECT_EQ(parse_m_grid("200:1000:200"), (std::vector<Index>{200, 400, 600, 800, 1000}));
  EXPECT_EQ(parse_m_grid("5:5:1"), (std::vector<Index>{5}));
  EXPECT_EQ(parse_m_list("16, 64,256"), (std::vector<Index>{16, 64, 256}));
  EXPECT_EQ(parse_degrees("1,2,3"), (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_THROW(parse_m_grid("10:5:1"), ConfigError);
  EXPECT_THROW(parse_m_grid("1:5"), ConfigError);
  EXPECT_THROW(parse_m_list("3,x"), ConfigError);
  EXPECT_THROW(parse_m_list("0"), ConfigError);
}

TEST(Config, SettingsAndValidation) {
  ExperimentConfig c;
  apply_setting(c, "shape", "125x125");
  apply_setting(c, "degrees", "1,2");
  apply_setting(c, "dist", "uniform01");
  apply_setting(c, "structure", "kron,generic");
  apply_setting(c, "snr-db", "inf");
  apply_setting(c, "exhaustive", "true");
  EXPECT_EQ(c.shape, Shape({125, 125}));
  EXPECT_EQ(c.dist, Distribution::uniform01);
  EXPECT_EQ(c.structures.size(), 2u);
  EXPECT_TRUE(std::isinf(c.snr_db));
  EXPECT_TRUE(c.exhaustive);
  EXPECT_THROW(apply_setting(c, "colour", "red"), ConfigError);
  EXPECT_THROW(apply_setting(c, "dist", "cauchy"), ConfigError);
  EXPECT_THROW(apply_setting(c, "shape", "3x0"), ConfigError);

  ExperimentConfig bad;
  bad.shape = Shape({4, 4, 4, 4});
  bad.degrees = {3};
  EXPECT_THROW(finalize(bad), ConfigError);

  ExperimentConfig grid;
  grid.shape = Shape({4, 4});
  grid.degrees = {1};
  grid.m_grid = {17};
  grid.replacement = Replacement::without;
  EXPECT_THROW(finalize(grid), ConfigError);

  ExperimentConfig defaults;
  defaults.kind = ExperimentKind::ls;
  finalize(defaults);
  EXPECT_EQ(defaults.m_grid, default_m_grid(ExperimentKind::ls));
}

TEST(Config, FileThenOverrides) {
  const auto path = scratch("config.txt");
  {
    std::ofstream out(path);
    out << "# comment\n\nshape = 8x8\ntrials=12\nm-list=4,8\n";
  }
  ExperimentConfig c;
  load_config_file(path, c);
  EXPECT_EQ(c.shape, Shape({8, 8}));
  EXPECT_EQ(c.trials, 12u);
  apply_setting(c, "trials", "3");
  EXPECT_EQ(c.trials, 3u);
  {
    std::ofstream out(path);
    out << "shape 8x8\n";
  }
  EXPECT_THROW(load_config_file(path, c), ConfigError);
  EXPECT_THROW(load_config_file(scratch("missing.txt"), c), ConfigError);
}

TEST(Csv, HeaderOnlyRoundTripAndOrder) {
  const auto path = scratch("empty.csv");
  emit_csv(path, {});
  EXPECT_EQ(slurp(path), "experiment,method,m,trial,seed,value\n");
  EXPECT_EQ(slurp(summary_path(path)), "method,m,mean,std,count\n");
  EXPECT_TRUE(read_csv(path).empty());

  const auto p3 = scratch("three.csv");
  std::vector<TrialRecord> records{{"distortion", "kfjlt-d2", 10, 1, 5, 0.25, 0},
                                   {"distortion", "fjlt", 10, 0, 6, 1.0 / 3.0, 0},
                                   {"distortion", "kfjlt-d2", 10, 0, 7, 0.75, 0}};
  emit_csv(p3, records);
  const auto back = read_csv(p3);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[0].method, "fjlt");
  EXPECT_EQ(back[0].value, 1.0 / 3.0);
  EXPECT_EQ(back[1].trial, 0u);
  EXPECT_EQ(back[1].seed, 7u);
  EXPECT_EQ(back[2].value, 0.25);
  const auto summary = summarize(back);
  ASSERT_EQ(summary.size(), 2u);
  EXPECT_DOUBLE_EQ(summary[1].mean, 0.5);
  EXPECT_NEAR(summary[1].std, std::sqrt(0.125), 1e-15);
  EXPECT_EQ(summary[1].count, 2u);

  EXPECT_THROW(emit_csv("/proc/kfjlt/nope.csv", records), std::exception);
}

TEST(Distortion, FullSamplingIsExactWithoutReplacement) {
  // With m = N and no replacement every row is used once, so the sketch is
  // unitary and the distortion vanishes.
  ExperimentConfig c;
  c.shape = Shape({4, 4});
  c.degrees = {1, 2};
  c.m_grid = {16};
  c.trials = 5;
  c.replacement = Replacement::without;
  c.structures = {Structure::kron, Structure::generic};
  finalize(c);
  for (const auto& r : run_distortion(c)) EXPECT_LT(r.value, 1e-10) << r.method;
}

TEST(Distortion, DeterministicAndMethodIndependent) {
  const ExperimentConfig c = small_distortion();
  const auto a = run_distortion(c);
  const auto b = run_distortion(c);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].value, b[i].value);

  ExperimentConfig fewer = c;
  fewer.degrees = {2};
  const auto only = run_distortion(fewer);
  std::vector<double> from_all;
  for (const auto& r : a) {
    if (r.method == "kfjlt-d2") from_all.push_back(r.value);
  }
  ASSERT_EQ(only.size(), from_all.size());
  for (std::size_t i = 0; i < only.size(); ++i) EXPECT_EQ(only[i].value, from_all[i]);

  const auto p1 = scratch("det1.csv");
  const auto p2 = scratch("det2.csv");
  emit_csv(p1, a);
  emit_csv(p2, b);
  EXPECT_EQ(slurp(p1), slurp(p2));
}

TEST(Distortion, SampleBeforeUsesMatchedRowCounts) {
  EXPECT_EQ(factored_rows(100, 2), (std::vector<Index>{10, 10}));
  EXPECT_EQ(factored_rows(1600, 3), (std::vector<Index>{12, 12, 12}));
  EXPECT_EQ(factored_rows(7, 1), (std::vector<Index>{7}));
  ExperimentConfig c = small_distortion();
  c.degrees = {2};
  c.sampling = Sampling::before;
  c.m_grid = {30};
  const auto records = run_distortion(c);
  for (const auto& r : records) EXPECT_EQ(r.m, 25u);
  EXPECT_EQ(records.size(), 2 * c.trials);
}

TEST(Distortion, GaussianBaselineAndDecay) {
  ExperimentConfig c = small_distortion();
  c.gaussian_baseline = true;
  c.m_grid = {8, 128};
  c.trials = 100;
  const auto summary = summarize(run_distortion(c));
  for (std::size_t i = 0; i + 1 < summary.size(); i += 2) {
    ASSERT_EQ(summary[i].method, summary[i + 1].method);
    EXPECT_GT(summary[i].mean, summary[i + 1].mean) << summary[i].method;
  }
}

TEST(Timing, ZeroTrialsIsHeaderOnly) {
  ExperimentConfig c;
  c.kind = ExperimentKind::timing;
  c.shape = Shape({8, 8});
  c.degrees = {1, 2};
  c.m_grid = {4};
  c.trials = 0;
  finalize(c);
  const TimingResult r = run_timing(c);
  EXPECT_TRUE(r.records.empty());
  const auto path = scratch("timing.csv");
  emit_csv(path, r.records);
  EXPECT_EQ(slurp(path), "experiment,method,m,trial,seed,value\n");

  c.trials = 4;
  c.repeats = 3;
  const TimingResult t = run_timing(c);
  ASSERT_EQ(t.points.size(), 2u);
  EXPECT_EQ(t.records.size(), 6u);
  for (const auto& p : t.points) EXPECT_GT(p.median, 0.0);
}

TEST(Timing, LogLogSlope) {
  EXPECT_NEAR(loglog_slope({1, 10, 100}, {3, 30, 300}), 1.0, 1e-12);
  EXPECT_NEAR(loglog_slope({4, 16}, {2, 4}), 0.5, 1e-12);
  EXPECT_THROW(loglog_slope({1}, {1}), std::domain_error);
}

TEST(Ls, NoiselessAndExhaustive) {
  ExperimentConfig c;
  c.kind = ExperimentKind::ls;
  c.shape = Shape({6, 6});
  c.rank = 3;
  c.m_grid = {30};
  c.trials = 4;
  c.snr_db = std::numeric_limits<double>::infinity();
  c.exhaustive = true;
  finalize(c);
  for (const auto& r : run_ls(c)) {
    EXPECT_NE(r.method.find("-absolute"), std::string::npos);
    EXPECT_LT(r.value, 1e-8);
  }
  c.snr_db = 20.0;
  for (const auto& r : run_ls(c)) {
    EXPECT_GE(r.value, 1.0 - 1e-10);
    if (r.method == "kfjlt-full") {
      EXPECT_NEAR(r.value, 1.0, 1e-8);
      EXPECT_EQ(r.m, 36u);
    }
  }
}

TEST(Cprand, ExhaustiveMatchesAlsTrajectory) {
  ExperimentConfig c;
  c.kind = ExperimentKind::cprand;
  c.shape = Shape({5, 6, 4});
  c.rank = 2;
  c.m_grid = {20};
  c.trials = 2;
  c.max_sweeps = 8;
  c.tolerance = 0.0;
  c.exhaustive = true;
  finalize(c);
  const CprandResult r = run_cprand(c);
  std::map<std::pair<Index, Index>, double> als;
  for (const auto& row : r.trajectories) {
    if (row.method == "als") als[{row.trial, row.sweep}] = row.fit;
  }
  Index compared = 0;
  for (const auto& row : r.trajectories) {
    if (row.method != "cprand-full") continue;
    EXPECT_NEAR(row.fit, als.at({row.trial, row.sweep}), 1e-6);
    ++compared;
  }
  EXPECT_EQ(compared, 16u);
  EXPECT_EQ(r.records.size(), 6u);
}

TEST(Concentration, RunsAndHolds) {
  ExperimentConfig c;
  c.kind = ExperimentKind::concentration;
  c.m_grid = {3, 16};
  c.trials = 2000;
  finalize(c);
  const auto rows = run_concentration(c);
  EXPECT_EQ(rows.size(), 2u * 5u * 4u * 2u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.report.exact, r.n <= 12);
    EXPECT_TRUE(r.report.holds());
  }
  const auto path = scratch("conc.csv");
  emit_concentration_csv(path, rows);
  EXPECT_NE(slurp(path).find("hanson-wright"), std::string::npos);
}

TEST(TensorIo, RoundTripsTextAndBinary) {
  Rng rng(3);
  const DenseTensor t(Shape({2, 3, 4}), test::random_vector(24, rng));
  for (const char* name : {"t.txt", "t.bin"}) {
    const auto path = scratch(name);
    write_tensor(path, t);
    const DenseTensor back = read_tensor(path);
    EXPECT_EQ(back.shape(), t.shape());
    EXPECT_EQ(back.data(), t.data());
  }
  {
    std::ofstream out(scratch("short.txt"));
    out << "2x2\n1 2 3\n";
  }
  EXPECT_THROW(read_tensor(scratch("short.txt")), std::runtime_error);
}
