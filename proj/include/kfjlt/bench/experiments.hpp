#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kfjlt/bench/config.hpp"
#include "kfjlt/bench/csv.hpp"
#include "kfjlt/cp.hpp"
#include "kfjlt/tensor.hpp"
#include "kfjlt/testkit/testkit.hpp"

namespace kfjlt::bench {

/// Operator seed for one (trial, method, m). Keyed by label, so adding or
/// dropping a method leaves every other method's draws untouched.
std::uint64_t operator_seed(std::uint64_t master, Index trial, std::string_view label, Index m);

/// Per-factor row counts round(m^(1/d)) for sample-before runs.
std::vector<Index> factored_rows(Index m, std::size_t d);

std::vector<TrialRecord> run_distortion(const ExperimentConfig& config);

struct TimingPoint {
  std::string method;
  Index m = 0;
  /// Total nanoseconds per repetition.
  std::vector<double> totals;
  double median = 0.0;
};

struct TimingResult {
  std::vector<TrialRecord> records;
  std::vector<TimingPoint> points;
};

/// Embeds `trials` Kronecker vectors per method per m (after a warm-up).
/// Degree 1 materializes each vector and runs the FJLT; degree d >= 2 uses
/// the Kronecker path on the shape regrouped to d factors.
TimingResult run_timing(const ExperimentConfig& config);

/// Least-squares slope of log(time) against log(N).
double loglog_slope(const std::vector<double>& sizes, const std::vector<double>& times);

std::vector<TrialRecord> run_ls(const ExperimentConfig& config);

struct TrajectoryRow {
  std::string method;
  Index m = 0;
  Index trial = 0;
  Index sweep = 0;
  double fit = 0.0;
  double seconds = 0.0;
};

struct CprandResult {
  /// Final fit per run.
  std::vector<TrialRecord> records;
  std::vector<TrajectoryRow> trajectories;
};

CprandResult run_cprand(const ExperimentConfig& config);

/// <stem>.trajectory.csv next to `path`.
void emit_trajectories(const std::filesystem::path& path, const std::vector<TrajectoryRow>& rows);

struct ConcentrationRow {
  std::string check;
  Index n = 0;
  Index trial = 0;
  testkit::TailReport report;
};

/// Hoeffding and Hanson-Wright tails on random instances: exact enumeration
/// for n <= 12, otherwise `trials` Monte Carlo draws. n comes from the m
/// grid; `config.rank` random instances per n.
std::vector<ConcentrationRow> run_concentration(const ExperimentConfig& config);

void emit_concentration_csv(const std::filesystem::path& path,
                            const std::vector<ConcentrationRow>& rows);

/// Tensor file: a first line "<shape>" such as 8x8x8, then N values.
/// Files ending in .bin hold the values as little-endian 64-bit floats,
/// anything else as whitespace-separated text.
void write_tensor(const std::filesystem::path& path, const DenseTensor& t);
DenseTensor read_tensor(const std::filesystem::path& path);

}  // namespace kfjlt::bench
