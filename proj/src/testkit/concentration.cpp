#include <cmath>
#include <string>

#include "kfjlt/testkit/testkit.hpp"

namespace kfjlt::testkit {
namespace {

bool use_exact(Index n, TailMethod method) {
  switch (method) {
    case TailMethod::exact:
      if (n > 24) throw ResourceError("exact sign enumeration is limited to n <= 24");
      return true;
    case TailMethod::monte_carlo:
      return false;
    case TailMethod::automatic:
      break;
  }
  return n <= kExactEnumerationMaxDim;
}

double spectral_norm(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues()(0);
}

// Runs `statistic` over every sign pattern or over `trials` Rademacher draws
// and counts how often it exceeds t.
template <typename Statistic>
TailReport tail_frequency(Index n, double t, Index trials, Rng& rng, TailMethod method,
                          Statistic&& statistic) {
  TailReport report;
  report.threshold = t;
  Vector xi(static_cast<Eigen::Index>(n));
  Index hits = 0;
  if (use_exact(n, method)) {
    const Index patterns = Index{1} << n;
    for (Index p = 0; p < patterns; ++p) {
      for (Index i = 0; i < n; ++i) xi(static_cast<Eigen::Index>(i)) = ((p >> i) & 1U) ? -1.0 : 1.0;
      if (std::abs(statistic(xi)) > t) ++hits;
    }
    report.trials = patterns;
    report.exact = true;
  } else {
    if (trials == 0) throw std::domain_error("tail check: at least one trial is required");
    for (Index trial = 0; trial < trials; ++trial) {
      for (Index i = 0; i < n; ++i) xi(static_cast<Eigen::Index>(i)) = rng.rademacher();
      if (std::abs(statistic(xi)) > t) ++hits;
    }
    report.trials = trials;
  }
  report.frequency = static_cast<double>(hits) / static_cast<double>(report.trials);
  if (!report.exact) {
    const double p = report.frequency;
    report.radius = 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(report.trials));
  }
  return report;
}

}  // namespace

double hoeffding_bound(const Vector& x, double t) {
  return 2.0 * std::exp(-t * t / (2.0 * x.squaredNorm()));
}

double hanson_wright_bound(const Matrix& x, double t) {
  const double frob_sq = x.squaredNorm();
  const double spec = spectral_norm(x);
  if (frob_sq == 0.0 || spec == 0.0) return 0.0;
  const double exponent = std::min(t * t / frob_sq, (96.0 / 65.0) * t / spec) / 64.0;
  return 2.0 * std::exp(-exponent);
}

TailReport hoeffding_tail_check(const Vector& x, double t, Index trials, Rng& rng,
                                TailMethod method) {
  if (!(t > 0.0)) throw std::domain_error("hoeffding_tail_check: t must be positive");
  if (x.size() == 0 || x.squaredNorm() == 0.0) {
    throw std::domain_error("hoeffding_tail_check: x must be nonzero");
  }
  TailReport report = tail_frequency(static_cast<Index>(x.size()), t, trials, rng, method,
                                     [&](const Vector& xi) { return xi.dot(x); });
  report.bound = hoeffding_bound(x, t);
  return report;
}

TailReport hanson_wright_tail_check(const Matrix& x, double t, Index trials, Rng& rng,
                                    TailMethod method) {
  if (!(t > 0.0)) throw std::domain_error("hanson_wright_tail_check: t must be positive");
  if (x.rows() != x.cols()) throw std::domain_error("hanson_wright_tail_check: X must be square");
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (x(i, i) != 0.0) {
      throw std::domain_error("hanson_wright_tail_check: X must have a zero diagonal");
    }
  }
  TailReport report = tail_frequency(static_cast<Index>(x.rows()), t, trials, rng, method,
                                     [&](const Vector& xi) { return xi.dot(x * xi); });
  report.bound = hanson_wright_bound(x, t);
  return report;
}

}  // namespace kfjlt::testkit
