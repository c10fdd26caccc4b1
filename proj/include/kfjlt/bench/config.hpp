#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kfjlt/shape.hpp"
#include "kfjlt/transforms.hpp"

namespace kfjlt::bench {

/// Bad flag or config-file value; the message says what to change.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ExperimentKind { distortion, timing, ls, cprand, concentration };
enum class Distribution { gaussian, uniform01 };
enum class Structure { kron, generic };
enum class Sampling { after, before };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::distortion;
  Shape shape{4, 4, 4, 4, 4, 4};
  std::vector<std::size_t> degrees{1, 2, 3};
  std::vector<Index> m_grid;
  Index trials = 1000;
  std::uint64_t seed = 0;
  Distribution dist = Distribution::gaussian;
  std::vector<Structure> structures{Structure::kron};
  Sampling sampling = Sampling::after;
  Replacement replacement = Replacement::with;
  /// Dense N(0, 1/m) sketch as an extra distortion baseline.
  bool gaussian_baseline = false;
  /// ls / cprand: add a run that uses every row once.
  bool exhaustive = false;
  Index rank = 5;
  /// ls / cprand noise level; infinity means noiseless.
  double snr_db = 20.0;
  Index max_sweeps = 50;
  double tolerance = 1e-6;
  /// Timing repetitions; the median is reported.
  Index repeats = 3;
  std::string out;
  /// cprand: read the tensor from this file instead of synthesizing one.
  std::string tensor;
};

std::string_view kind_name(ExperimentKind kind);
ExperimentKind parse_kind(std::string_view text);

/// "start:stop:step", inclusive of stop when it lands on the grid.
std::vector<Index> parse_m_grid(std::string_view text);
/// "a,b,c".
std::vector<Index> parse_m_list(std::string_view text);
std::vector<std::size_t> parse_degrees(std::string_view text);

/// Applies one key=value setting; keys mirror the long CLI flags without
/// the leading dashes (m-grid, m-list, shape, ...).
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Reads a key=value file (blank lines and lines starting with # skipped).
void load_config_file(const std::filesystem::path& path, ExperimentConfig& config);

/// Grid used when none was given for this kind of experiment.
std::vector<Index> default_m_grid(ExperimentKind kind);

/// Fills defaults and checks the config; throws ConfigError.
void finalize(ExperimentConfig& config);

}  // namespace kfjlt::bench
