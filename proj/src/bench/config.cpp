#include "kfjlt/bench/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

namespace kfjlt::bench {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(std::string(what) + ": cannot parse '" + std::string(text) + "'");
  }
  return value;
}

double parse_double(std::string_view text, std::string_view what) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  return parse_number<double>(text, what);
}

bool parse_bool(std::string_view text, std::string_view what) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(std::string(what) + ": expected true or false, got '" + std::string(text) + "'");
}

}  // namespace

std::string_view kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::distortion: return "distortion";
    case ExperimentKind::timing: return "timing";
    case ExperimentKind::ls: return "ls";
    case ExperimentKind::cprand: return "cprand";
    case ExperimentKind::concentration: return "concentration";
  }
  return "unknown";
}

ExperimentKind parse_kind(std::string_view text) {
  for (auto k : {ExperimentKind::distortion, ExperimentKind::timing, ExperimentKind::ls,
                 ExperimentKind::cprand, ExperimentKind::concentration}) {
    if (kind_name(k) == text) return k;
  }
  throw ConfigError("experiment: unknown kind '" + std::string(text) + "'");
}

std::vector<Index> parse_m_grid(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ConfigError("m-grid: expected start:stop:step, got '" + std::string(text) + "'");
  const auto start = parse_number<Index>(parts[0], "m-grid start");
  const auto stop = parse_number<Index>(parts[1], "m-grid stop");
  const auto step = parse_number<Index>(parts[2], "m-grid step");
  if (start == 0 || step == 0 || stop < start) {
    throw ConfigError("m-grid: need 1 <= start <= stop and step >= 1");
  }
  std::vector<Index> out;
  for (Index m = start; m <= stop; m += step) out.push_back(m);
  return out;
}

std::vector<Index> parse_m_list(std::string_view text) {
  std::vector<Index> out;
  for (auto part : split(text, ',')) {
    const auto m = parse_number<Index>(part, "m-list");
    if (m == 0) throw ConfigError("m-list: embedding dimensions must be positive");
    out.push_back(m);
  }
  return out;
}

std::vector<std::size_t> parse_degrees(std::string_view text) {
  std::vector<std::size_t> out;
  for (auto part : split(text, ',')) {
    const auto d = parse_number<std::size_t>(part, "degrees");
    if (d == 0) throw ConfigError("degrees: degrees must be positive");
    out.push_back(d);
  }
  return out;
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "experiment") {
    config.kind = parse_kind(value);
  } else if (key == "shape") {
    try {
      config.shape = Shape::parse(value);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("shape: ") + e.what());
    }
  } else if (key == "degrees") {
    config.degrees = parse_degrees(value);
  } else if (key == "m-grid") {
    config.m_grid = parse_m_grid(value);
  } else if (key == "m-list") {
    config.m_grid = parse_m_list(value);
  } else if (key == "trials") {
    config.trials = parse_number<Index>(value, "trials");
  } else if (key == "seed") {
    config.seed = parse_number<std::uint64_t>(value, "seed");
  } else if (key == "dist") {
    if (value == "gaussian") {
      config.dist = Distribution::gaussian;
    } else if (value == "uniform01") {
      config.dist = Distribution::uniform01;
    } else {
      throw ConfigError("dist: expected gaussian or uniform01, got '" + std::string(value) + "'");
    }
  } else if (key == "structure") {
    config.structures.clear();
    for (auto part : split(value, ',')) {
      if (part == "kron") {
        config.structures.push_back(Structure::kron);
      } else if (part == "generic") {
        config.structures.push_back(Structure::generic);
      } else {
        throw ConfigError("structure: expected kron or generic, got '" + std::string(part) + "'");
      }
    }
  } else if (key == "sampling") {
    if (value == "after") {
      config.sampling = Sampling::after;
    } else if (value == "before") {
      config.sampling = Sampling::before;
    } else {
      throw ConfigError("sampling: expected after or before, got '" + std::string(value) + "'");
    }
  } else if (key == "replacement") {
    if (value == "with") {
      config.replacement = Replacement::with;
    } else if (value == "without") {
      config.replacement = Replacement::without;
    } else {
      throw ConfigError("replacement: expected with or without, got '" + std::string(value) + "'");
    }
  } else if (key == "gaussian-baseline") {
    config.gaussian_baseline = parse_bool(value, key);
  } else if (key == "exhaustive") {
    config.exhaustive = parse_bool(value, key);
  } else if (key == "rank") {
    config.rank = parse_number<Index>(value, "rank");
  } else if (key == "snr-db") {
    config.snr_db = parse_double(value, "snr-db");
  } else if (key == "max-sweeps") {
    config.max_sweeps = parse_number<Index>(value, "max-sweeps");
  } else if (key == "tolerance") {
    config.tolerance = parse_double(value, "tolerance");
  } else if (key == "repeats") {
    config.repeats = parse_number<Index>(value, "repeats");
  } else if (key == "out") {
    config.out = std::string(value);
  } else if (key == "tensor") {
    config.tensor = std::string(value);
  } else {
    throw ConfigError("unknown setting '" + std::string(key) + "'");
  }
}

void load_config_file(const std::filesystem::path& path, ExperimentConfig& config) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    }
    try {
      apply_setting(config, trim(view.substr(0, eq)), view.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

std::vector<Index> default_m_grid(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::distortion: return {100, 200, 400, 800, 1600};
    case ExperimentKind::timing: return parse_m_grid("200:2000:200");
    case ExperimentKind::ls: return {16, 64, 256, 1024};
    case ExperimentKind::cprand: return {512};
    case ExperimentKind::concentration: return {2, 6, 10, 12, 20, 32, 64};
  }
  return {};
}

void finalize(ExperimentConfig& config) {
  if (config.m_grid.empty()) config.m_grid = default_m_grid(config.kind);
  if (config.degrees.empty()) throw ConfigError("degrees: at least one degree is required");
  if (config.structures.empty()) throw ConfigError("structure: at least one structure is required");
  if (config.repeats == 0) throw ConfigError("repeats: at least one repetition is required");

  const std::size_t base = config.shape.degree();
  if (config.kind == ExperimentKind::distortion || config.kind == ExperimentKind::timing) {
    for (std::size_t d : config.degrees) {
      if (base % d != 0) {
        throw ConfigError("degrees: a degree-" + std::to_string(d) + " run needs the " +
                          std::to_string(base) + " factors of shape " + config.shape.to_string() +
                          " to split into " + std::to_string(d) +
                          " equal groups of adjacent factors");
      }
    }
  }
  if (config.kind != ExperimentKind::concentration && config.kind != ExperimentKind::timing &&
      config.trials == 0) {
    throw ConfigError("trials: at least one trial is required");
  }
  if (config.replacement == Replacement::without) {
    const Index biggest = *std::max_element(config.m_grid.begin(), config.m_grid.end());
    Index population = config.shape.total();
    if (config.kind == ExperimentKind::cprand) {
      population = config.shape.total() / *std::max_element(config.shape.dims().begin(),
                                                             config.shape.dims().end());
    }
    if (config.kind != ExperimentKind::concentration && biggest > population) {
      throw ConfigError("m-grid: m = " + std::to_string(biggest) +
                        " exceeds the number of rows available without replacement (" +
                        std::to_string(population) + ")");
    }
  }
  if (config.kind == ExperimentKind::distortion && config.sampling == Sampling::before) {
    if (std::find(config.structures.begin(), config.structures.end(), Structure::generic) !=
        config.structures.end()) {
      throw ConfigError("sampling: sample-before runs need Kronecker-structured vectors");
    }
  }
  if (config.kind == ExperimentKind::cprand && config.shape.degree() < 2) {
    throw ConfigError("shape: cprand needs a tensor of degree at least 2");
  }
  if ((config.kind == ExperimentKind::ls || config.kind == ExperimentKind::cprand) &&
      config.rank == 0) {
    throw ConfigError("rank: must be positive");
  }
}

}  // namespace kfjlt::bench
