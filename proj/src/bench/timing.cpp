#include <algorithm>
#include <chrono>
#include <cmath>

#include "kfjlt/bench/experiments.hpp"

namespace kfjlt::bench {

TimingResult run_timing(const ExperimentConfig& config) {
  using Clock = std::chrono::steady_clock;
  TimingResult out;
  if (config.trials == 0) return out;

  const Shape& base = config.shape;
  std::vector<KroneckerVector> vectors;
  for (Index v = 0; v < config.trials; ++v) {
    Rng rng = Rng::substream(config.seed, v);
    std::vector<Vector> factors;
    for (Index n : base.dims()) {
      Vector f(static_cast<Eigen::Index>(n));
      for (auto& x : f) x = config.dist == Distribution::gaussian ? rng.normal() : rng.uniform01();
      factors.push_back(std::move(f));
    }
    vectors.emplace_back(std::move(factors));
  }

  // Keeps the optimizer from dropping the embeddings.
  volatile double sink = 0.0;
  const Index warmup = std::min<Index>(config.trials, 16);

  for (std::size_t d : config.degrees) {
    std::vector<KroneckerVector> grouped;
    if (d > 1) {
      for (const auto& v : vectors) grouped.push_back(v.regroup(d));
    }
    const std::string label = d == 1 ? std::string("fjlt") : "kfjlt-d" + std::to_string(d);

    for (Index m : config.m_grid) {
      const std::uint64_t seed = operator_seed(config.seed, 0, label, m);
      std::function<void(Index)> embed;
      std::optional<FjltOperator> fop;
      std::optional<KfjltOperator> kop;
      if (d == 1) {
        fop.emplace(FjltOperator::sample(base.total(), m, seed, config.replacement));
        embed = [&](Index count) {
          for (Index v = 0; v < count; ++v) {
            const CVector y = fjlt_apply(*fop, kron_materialize(vectors[v]));
            sink = sink + y(0).real();
          }
        };
      } else {
        kop.emplace(KfjltOperator::sample(grouped.front().shape(), m, seed, config.replacement));
        embed = [&](Index count) {
          for (Index v = 0; v < count; ++v) {
            const CVector y = kfjlt_apply_kron(*kop, grouped[v]);
            sink = sink + y(0).real();
          }
        };
      }

      embed(warmup);
      TimingPoint point{label, m, {}, 0.0};
      for (Index rep = 0; rep < config.repeats; ++rep) {
        const auto start = Clock::now();
        embed(config.trials);
        const auto stop = Clock::now();
        const double ns = std::chrono::duration<double, std::nano>(stop - start).count();
        point.totals.push_back(ns);
        out.records.push_back({"timing", label, m, rep, seed, ns, 0});
      }
      std::vector<double> sorted = point.totals;
      std::sort(sorted.begin(), sorted.end());
      const std::size_t mid = sorted.size() / 2;
      point.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
      out.points.push_back(std::move(point));
    }
  }
  return out;
}

double loglog_slope(const std::vector<double>& sizes, const std::vector<double>& times) {
  if (sizes.size() != times.size() || sizes.size() < 2) {
    throw std::domain_error("loglog_slope: need at least two matching points");
  }
  const double n = static_cast<double>(sizes.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double x = std::log(sizes[i]);
    const double y = std::log(times[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace kfjlt::bench
