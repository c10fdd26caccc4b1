// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "kfjlt/bench/config.hpp"
#include "kfjlt/bench/csv.hpp"
#include "kfjlt/bench/experiments.hpp"
#include "kfjlt/bench/verify.hpp"
#include "kfjlt/cp.hpp"

using namespace kfjlt;
using namespace kfjlt::bench;

namespace {

constexpr std::uint64_t kSeed = 20240601;
const std::filesystem::path kOut = "acceptance_out";

struct Outcome {
  bool passed = false;
  std::string detail;
};

using Means = std::map<std::string, std::map<Index, double>>;

Means means_of(const std::vector<TrialRecord>& records) {
  Means out;
  for (const auto& row : summarize(records)) out[row.method][row.m] = row.mean;
  return out;
}

bool non_increasing(const std::map<Index, double>& by_m) {
  double previous = std::numeric_limits<double>::infinity();
  for (const auto& [m, mean] : by_m) {
    if (mean > previous) return false;
    previous = mean;
  }
  return true;
}

std::string join_means(const std::map<Index, double>& by_m) {
  std::string s;
  char buf[64];
  for (const auto& [m, mean] : by_m) {
    std::snprintf(buf, sizeof buf, "%s%zu:%.4f", s.empty() ? "" : " ", m, mean);
    s += buf;
  }
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig distortion_config(const Shape& shape, std::vector<std::size_t> degrees) {
  ExperimentConfig c;
  c.kind = ExperimentKind::distortion;
  c.shape = shape;
  c.degrees = std::move(degrees);
  c.m_grid = {100, 200, 400, 800, 1600};
  c.trials = 1000;
  c.seed = kSeed;
  return c;
}

Outcome from_check(const CheckResult& r) { return {r.passed, r.detail}; }

Outcome criterion_oracle() {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r = check_oracle_equivalence(200, kSeed);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[64];
  std::snprintf(buf, sizeof buf, " in %.1f s", secs);
  return {r.passed && secs < 60.0, r.detail + buf};
}

Outcome criterion_unitarity() {
  const CheckResult a = check_unitarity(500, kSeed);
  const CheckResult b = check_unbiasedness(10, 100000, kSeed);
  return {a.passed && b.passed, a.detail + "; " + b.detail};
}

Outcome criterion_figure2() {
  const auto start = std::chrono::steady_clock::now();
  bool monotone = true;
  int ordered = 0, points = 0;
  std::string detail;
  for (Distribution dist : {Distribution::gaussian, Distribution::uniform01}) {
    ExperimentConfig c = distortion_config(Shape({4, 4, 4, 4, 4, 4}), {1, 2, 3});
    c.dist = dist;
    finalize(c);
    const auto records = run_distortion(c);
    emit_csv(kOut / (dist == Distribution::gaussian ? "degrees_gaussian.csv" : "degrees_uniform.csv"),
             records);
    const Means means = means_of(records);
    for (const auto& [method, by_m] : means) monotone = monotone && non_increasing(by_m);
    for (Index m : c.m_grid) {
      const double f = means.at("fjlt").at(m);
      const double d2 = means.at("kfjlt-d2").at(m);
      const double d3 = means.at("kfjlt-d3").at(m);
      ++points;
      ordered += f <= d2 && d2 <= d3;
    }
    detail += std::string(dist == Distribution::gaussian ? "gaussian" : "uniform") +
              " fjlt[" + join_means(means.at("fjlt")) + "] d2[" + join_means(means.at("kfjlt-d2")) +
              "] d3[" + join_means(means.at("kfjlt-d3")) + "]; ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[160];
  std::snprintf(buf, sizeof buf, "monotone=%s, ordered at %d/%d points, %.0f s", monotone ? "yes" : "no",
                ordered, points, secs);
  return {monotone && ordered * 5 >= points * 4 && secs < 600.0, detail + buf};
}

Outcome criterion_figure3() {
  int hits = 0, points = 0;
  std::string detail;
  for (const auto& [shape, d] : {std::pair{Shape({125, 125}), std::size_t{2}},
                                 std::pair{Shape({25, 25, 25}), std::size_t{3}}}) {
    ExperimentConfig c = distortion_config(shape, {d});
    c.structures = {Structure::kron, Structure::generic};
    finalize(c);
    const auto records = run_distortion(c);
    emit_csv(kOut / ("structure_d" + std::to_string(d) + ".csv"), records);
    const Means means = means_of(records);
    const std::string label = "kfjlt-d" + std::to_string(d);
    for (Index m : c.m_grid) {
      ++points;
      hits += means.at(label).at(m) >= means.at(label + "-generic").at(m);
    }
    detail += label + " kron[" + join_means(means.at(label)) + "] generic[" +
              join_means(means.at(label + "-generic")) + "]; ";
  }
  return {hits * 5 >= points * 4, detail + "kron >= generic at " + std::to_string(hits) + "/" +
                                      std::to_string(points) + " points"};
}

Outcome criterion_figure4() {
  int hits = 0, points = 0;
  std::string detail;
  for (const auto& [shape, d] : {std::pair{Shape({125, 125}), std::size_t{2}},
                                 std::pair{Shape({25, 25, 25}), std::size_t{3}}}) {
    ExperimentConfig c = distortion_config(shape, {d});
    c.sampling = Sampling::before;
    finalize(c);
    const auto records = run_distortion(c);
    emit_csv(kOut / ("before_after_d" + std::to_string(d) + ".csv"), records);
    const Means means = means_of(records);
    const std::string after = "kfjlt-d" + std::to_string(d);
    const std::string before = "factored-d" + std::to_string(d);
    for (const auto& [m, mean] : means.at(after)) {
      ++points;
      hits += mean <= means.at(before).at(m);
    }
    detail += "d" + std::to_string(d) + " after[" + join_means(means.at(after)) + "] before[" +
              join_means(means.at(before)) + "]; ";
  }
  return {hits * 5 >= points * 4, detail + "after <= before at " + std::to_string(hits) + "/" +
                                      std::to_string(points) + " points"};
}

Outcome criterion_timing() {
  ExperimentConfig c;
  c.kind = ExperimentKind::timing;
  c.shape = Shape({125, 125});
  c.degrees = {1, 2};
  c.m_grid = parse_m_grid("200:2000:200");
  c.trials = 1000;
  c.seed = kSeed;
  finalize(c);
  const TimingResult grid = run_timing(c);
  emit_csv(kOut / "timing.csv", grid.records);
  std::map<Index, double> fjlt, kfjlt;
  for (const auto& p : grid.points) (p.method == "fjlt" ? fjlt : kfjlt)[p.m] = p.median;
  int faster = 0;
  for (const auto& [m, t] : kfjlt) faster += t < fjlt.at(m);

  std::vector<double> sizes, t_fjlt, t_kfjlt;
  for (Index n : {Index{16}, Index{64}, Index{256}}) {
    ExperimentConfig s = c;
    s.shape = Shape({n, n});
    s.m_grid = {256};
    s.trials = 200;
    finalize(s);
    const TimingResult r = run_timing(s);
    sizes.push_back(static_cast<double>(n * n));
    for (const auto& p : r.points) (p.method == "fjlt" ? t_fjlt : t_kfjlt).push_back(p.median);
  }
  const double slope_f = loglog_slope(sizes, t_fjlt);
  const double slope_k = loglog_slope(sizes, t_kfjlt);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "kfjlt faster at %d/%zu m; e.g. m=200 fjlt %.1f ms vs kfjlt %.1f ms; "
                "log-log slope fjlt %.2f (need >= 0.7), kfjlt %.2f (need <= 0.8)",
                faster, kfjlt.size(), fjlt.at(200) * 1e-6, kfjlt.at(200) * 1e-6, slope_f, slope_k);
  const bool ok = faster == static_cast<int>(kfjlt.size()) && slope_f >= 0.7 && slope_k <= 0.8;
  return {ok, buf};
}

Outcome criterion_ls() {
  ExperimentConfig c;
  c.kind = ExperimentKind::ls;
  c.shape = Shape({16, 16, 16});
  c.rank = 5;
  c.m_grid = {16, 64, 256, 1024};
  c.trials = 100;
  c.seed = kSeed;
  c.exhaustive = true;
  finalize(c);
  const auto records = run_ls(c);
  emit_csv(kOut / "ls.csv", records);
  const Means means = means_of(records);
  Index at_1024 = 0, good_1024 = 0, flagged = 0;
  double worst_full = 0.0;
  for (const auto& r : records) {
    if (r.method == "kfjlt" && r.m == 1024) {
      ++at_1024;
      good_1024 += r.value <= 1.1;
    }
    if (r.method == "kfjlt-full") worst_full = std::max(worst_full, std::abs(r.value - 1.0));
    flagged += r.method.find("-absolute") != std::string::npos;
  }
  const bool monotone = flagged == 0 && non_increasing(means.at("kfjlt"));
  char buf[160];
  std::snprintf(buf, sizeof buf, "; ratio <= 1.1 at m=1024 in %zu/%zu; exhaustive |ratio-1| <= %.2g",
                good_1024, at_1024, worst_full);
  return {monotone && good_1024 * 10 >= at_1024 * 9 && worst_full <= 1e-8,
          "mean ratio [" + join_means(means.at("kfjlt")) + "]" + buf};
}

Outcome criterion_cprand() {
  // Exhaustive sweep against the exact ALS update.
  Rng rng(kSeed);
  const Shape small({6, 7, 8});
  DenseTensor t(small, Vector(static_cast<Eigen::Index>(small.total())));
  for (auto& v : t.data()) v = rng.normal();
  const CpModel init = CpModel::random(small, 3, rng);
  std::vector<SignVector> signs;
  std::vector<std::vector<Index>> rows;
  for (std::size_t k = 0; k < 3; ++k) {
    signs.push_back(SignVector::draw(small.dim(k), kSeed, k + 1));
    rows.emplace_back(small.total() / small.dim(k));
    std::iota(rows.back().begin(), rows.back().end(), Index{0});
  }
  const CprandSweepResult sk = cprand_mix_sweep(mix_tensor(t, signs), signs, mix_model(init, signs), rows);
  const AlsSweepResult ex = cp_als_sweep(t, init);
  double worst_update = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    worst_update = std::max(worst_update, (sk.state.model.factor(k) - ex.model.factor(k)).norm() /
                                              ex.model.factor(k).norm());
  }

  ExperimentConfig c;
  c.kind = ExperimentKind::cprand;
  c.shape = Shape({20, 20, 20});
  c.rank = 3;
  c.m_grid = {512};
  c.trials = 10;
  c.seed = kSeed;
  c.snr_db = std::numeric_limits<double>::infinity();
  c.max_sweeps = 50;
  finalize(c);
  const CprandResult run = run_cprand(c);
  emit_csv(kOut / "cprand.csv", run.records);
  emit_trajectories(kOut / "cprand.csv", run.trajectories);
  int sketched_ok = 0, als_ok = 0;
  for (const auto& r : run.records) {
    if (r.method == "cprand-mix") sketched_ok += r.value >= 0.99;
    if (r.method == "als") als_ok += r.value >= 0.999;
  }

  // Exact ALS monotonicity at every inner solve.
  Index solves = 0, violations = 0;
  for (Index trial = 0; trial < 5; ++trial) {
    Rng g = Rng::substream(kSeed, 500 + trial);
    DenseTensor x = reconstruct(CpModel::random(c.shape, 3, g));
    if (trial % 2 == 1) {
      for (auto& v : x.data()) v += 0.1 * g.normal();
    }
    CpModel model = CpModel::random(c.shape, 3, g);
    const double slack = 1e-10 * x.norm() * x.norm();
    double previous = objective(x, model);
    for (int sweep = 0; sweep < 20; ++sweep) {
      AlsSweepResult r = cp_als_sweep(x, model, true);
      for (double obj : r.objectives) {
        ++solves;
        violations += obj > previous + slack;
        previous = obj;
      }
      model = std::move(r.model);
    }
  }

  char buf[256];
  std::snprintf(buf, sizeof buf,
                "exhaustive vs ALS update %.2g; cprand-mix fit >= 0.99 on %d/10; ALS fit >= 0.999 "
                "on %d/10; ALS objective increases %zu/%zu",
                worst_update, sketched_ok, als_ok, violations, solves);
  return {worst_update <= 1e-8 && sketched_ok >= 8 && als_ok == 10 && violations == 0, buf};
}

Outcome criterion_concentration() { return from_check(check_concentration(64, 100000, 500, kSeed)); }

Outcome criterion_rip() { return from_check(check_rip_block_norms(16, 4, 100, kSeed)); }

Outcome criterion_determinism() {
  std::vector<std::string> mismatched;
  auto twice = [&](const std::string& name, const std::function<void(const std::filesystem::path&)>& emit) {
    const auto a = kOut / (name + "_a.csv");
    const auto b = kOut / (name + "_b.csv");
    emit(a);
    emit(b);
    if (slurp(a) != slurp(b) || slurp(a).empty()) mismatched.push_back(name);
  };

  ExperimentConfig d = distortion_config(Shape({4, 4, 4, 4, 4, 4}), {1, 2, 3});
  d.trials = 50;
  d.gaussian_baseline = true;
  d.structures = {Structure::kron, Structure::generic};
  finalize(d);
  twice("distortion", [&](const auto& p) { emit_csv(p, run_distortion(d)); });

  ExperimentConfig f = distortion_config(Shape({25, 25, 25}), {3});
  f.trials = 50;
  f.sampling = Sampling::before;
  finalize(f);
  twice("factored", [&](const auto& p) { emit_csv(p, run_distortion(f)); });

  ExperimentConfig l;
  l.kind = ExperimentKind::ls;
  l.shape = Shape({8, 8, 8});
  l.trials = 10;
  l.seed = kSeed;
  l.exhaustive = true;
  finalize(l);
  twice("ls", [&](const auto& p) { emit_csv(p, run_ls(l)); });

  ExperimentConfig c;
  c.kind = ExperimentKind::cprand;
  c.shape = Shape({10, 10, 10});
  c.rank = 2;
  c.m_grid = {64};
  c.trials = 2;
  c.seed = kSeed;
  c.max_sweeps = 10;
  finalize(c);
  twice("cprand", [&](const auto& p) { emit_csv(p, run_cprand(c).records); });

  ExperimentConfig k;
  k.kind = ExperimentKind::concentration;
  k.m_grid = {8, 20};
  k.trials = 5000;
  k.seed = kSeed;
  finalize(k);
  twice("concentration", [&](const auto& p) { emit_concentration_csv(p, run_concentration(k)); });

  std::string detail = "distortion, factored, ls, cprand, concentration reruns ";
  if (mismatched.empty()) return {true, detail + "byte-identical"};
  for (const auto& name : mismatched) detail += "[" + name + " differs]";
  return {false, detail};
}

}  // namespace

int main() {
  std::filesystem::create_directories(kOut);
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"oracle equivalence of fast paths", criterion_oracle},
      {"unitarity and unbiasedness", criterion_unitarity},
      {"degree ordering of distortion (4^6 vectors)", criterion_figure2},
      {"Kronecker vs generic vectors", criterion_figure3},
      {"sample-after vs sample-before", criterion_figure4},
      {"embedding time", criterion_timing},
      {"sketched least squares", criterion_ls},
      {"CPRAND-MIX and exact ALS", criterion_cprand},
      {"concentration tails", criterion_concentration},
      {"RIP and block-norm bounds", criterion_rip},
      {"determinism", criterion_determinism},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s [%d] %s: %s (%.1f s)\n", outcome.passed ? "PASS" : "FAIL", index, name,
                outcome.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !outcome.passed;
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
