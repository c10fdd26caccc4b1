#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "kfjlt/bench/config.hpp"
#include "kfjlt/bench/csv.hpp"
#include "kfjlt/bench/experiments.hpp"
#include "kfjlt/bench/verify.hpp"

using namespace kfjlt;
using namespace kfjlt::bench;

namespace {

// Flags that map one-to-one onto config keys.
const char* const kValueFlags[] = {"shape",  "degrees",     "m-grid",    "m-list",   "trials",
                                   "seed",   "dist",        "structure", "sampling", "replacement",
                                   "out",    "rank",        "snr-db",    "max-sweeps",
                                   "tolerance", "repeats",  "tensor"};
const char* const kSwitches[] = {"exhaustive", "gaussian-baseline"};

struct Flags {
  std::map<std::string, std::string> values;
  std::map<std::string, bool> switches;
  std::string config_file;
};

void add_experiment_flags(CLI::App* sub, Flags& flags) {
  for (const char* name : kValueFlags) {
    sub->add_option(std::string("--") + name, flags.values[name]);
  }
  for (const char* name : kSwitches) {
    sub->add_flag(std::string("--") + name, flags.switches[name]);
  }
  sub->add_option("--config", flags.config_file, "key=value file; flags given here win");
}

ExperimentConfig build_config(ExperimentKind kind, const Flags& flags, const CLI::App* sub) {
  ExperimentConfig config;
  config.kind = kind;
  if (kind != ExperimentKind::distortion) {
    config.degrees = {1, 2};
    config.shape = Shape({125, 125});
  }
  if (kind == ExperimentKind::ls) config.shape = Shape({16, 16, 16});
  if (kind == ExperimentKind::cprand) {
    config.shape = Shape({20, 20, 20});
    config.rank = 3;
    config.trials = 10;
  }
  if (kind == ExperimentKind::ls) config.trials = 100;
  if (kind == ExperimentKind::concentration) config.trials = 100000;
  if (!flags.config_file.empty()) load_config_file(flags.config_file, config);
  for (const char* name : kValueFlags) {
    if (sub->count(std::string("--") + name) > 0) apply_setting(config, name, flags.values.at(name));
  }
  for (const char* name : kSwitches) {
    if (flags.switches.at(name)) apply_setting(config, name, "true");
  }
  config.kind = kind;
  finalize(config);
  if (config.out.empty()) config.out = std::string(kind_name(kind)) + ".csv";
  return config;
}

void print_summary(const std::vector<TrialRecord>& records) {
  std::printf("%-24s %8s %14s %14s %8s\n", "method", "m", "mean", "std", "count");
  for (const auto& row : summarize(records)) {
    std::printf("%-24s %8zu %14.6g %14.6g %8zu\n", row.method.c_str(), row.m, row.mean, row.std,
                row.count);
  }
}

int run(ExperimentKind kind, const Flags& flags, const CLI::App* sub) {
  const ExperimentConfig config = build_config(kind, flags, sub);
  switch (kind) {
    case ExperimentKind::distortion: {
      auto records = run_distortion(config);
      print_summary(records);
      emit_csv(config.out, std::move(records));
      break;
    }
    case ExperimentKind::timing: {
      TimingResult result = run_timing(config);
      std::printf("%-16s %8s %18s\n", "method", "m", "median total (ms)");
      for (const auto& p : result.points) {
        std::printf("%-16s %8zu %18.3f\n", p.method.c_str(), p.m, p.median * 1e-6);
      }
      emit_csv(config.out, std::move(result.records));
      break;
    }
    case ExperimentKind::ls: {
      auto records = run_ls(config);
      print_summary(records);
      emit_csv(config.out, std::move(records));
      break;
    }
    case ExperimentKind::cprand: {
      CprandResult result = run_cprand(config);
      print_summary(result.records);
      emit_csv(config.out, result.records);
      emit_trajectories(config.out, result.trajectories);
      break;
    }
    case ExperimentKind::concentration: {
      const auto rows = run_concentration(config);
      std::size_t held = 0;
      for (const auto& r : rows) held += r.report.holds();
      std::printf("%zu/%zu tail checks within bound\n", held, rows.size());
      emit_concentration_csv(config.out, rows);
      if (held != rows.size()) return 1;
      break;
    }
  }
  std::printf("wrote %s\n", config.out.c_str());
  return 0;
}

int run_verify(std::uint64_t seed, bool full) {
  std::vector<CheckResult> results;
  results.push_back(check_oracle_equivalence(full ? 200 : 50, seed));
  results.push_back(check_unitarity(full ? 500 : 100, seed));
  results.push_back(check_unbiasedness(full ? 10 : 3, full ? 100000 : 20000, seed));
  results.push_back(check_concentration(64, full ? 100000 : 20000, full ? 500 : 100, seed));
  results.push_back(check_rip_block_norms(full ? 16 : 8, full ? 4 : 2, 100, seed));
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    failed += !r.passed;
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kronecker fast Johnson-Lindenstrauss experiments"};
  app.require_subcommand(1);

  const std::pair<const char*, ExperimentKind> kinds[] = {
      {"distortion", ExperimentKind::distortion},
      {"timing", ExperimentKind::timing},
      {"ls", ExperimentKind::ls},
      {"cprand", ExperimentKind::cprand},
      {"concentration", ExperimentKind::concentration}};
  const char* const help[] = {"distortion ratios of FJLT / KFJLT / factored / Gaussian sketches",
                              "embedding time of FJLT vs KFJLT on Kronecker vectors",
                              "residual ratios of sketched Khatri-Rao least squares",
                              "CP-ALS vs CPRAND-MIX fit trajectories",
                              "Hoeffding and Hanson-Wright tail frequencies vs bounds"};

  std::map<std::string, Flags> flags;
  std::map<std::string, CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(kinds); ++i) {
    CLI::App* sub = app.add_subcommand(kinds[i].first, help[i]);
    add_experiment_flags(sub, flags[kinds[i].first]);
    subs[kinds[i].first] = sub;
  }
  std::uint64_t verify_seed = 20240601;
  bool verify_full = false;
  CLI::App* verify = app.add_subcommand("verify", "run the oracle and property suites");
  verify->add_option("--seed", verify_seed);
  verify->add_flag("--full", verify_full, "acceptance-scale instance counts");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return run_verify(verify_seed, verify_full);
    for (const auto& [name, kind] : kinds) {
      if (subs[name]->parsed()) return run(kind, flags[name], subs[name]);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
