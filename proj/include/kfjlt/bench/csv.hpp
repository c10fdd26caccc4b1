#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kfjlt/types.hpp"

namespace kfjlt::bench {

struct TrialRecord {
  std::string experiment;
  std::string method;
  Index m = 0;
  Index trial = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
  /// Wall-clock time the record was produced (ns since epoch); kept in
  /// memory only so that reruns stay byte-identical.
  std::int64_t timestamp = 0;
};

struct SummaryRow {
  std::string method;
  Index m = 0;
  double mean = 0.0;
  double std = 0.0;
  Index count = 0;
};

/// Orders records by (method, m, trial).
void sort_records(std::vector<TrialRecord>& records);

/// Per-(method, m) mean and sample standard deviation, sorted by (method, m).
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

/// <stem>.summary.csv next to `path`.
std::filesystem::path summary_path(const std::filesystem::path& path);

/// Writes the records (sorted) to `path` and the summary next to it.
void emit_csv(const std::filesystem::path& path, std::vector<TrialRecord> records);

std::vector<TrialRecord> read_csv(const std::filesystem::path& path);

/// Shortest round-tripping decimal form.
std::string format_double(double v);

}  // namespace kfjlt::bench
