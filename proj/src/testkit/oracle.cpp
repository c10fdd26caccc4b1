#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>

#include "kfjlt/testkit/testkit.hpp"

namespace kfjlt::testkit {

CVector dense_oracle_apply(const CMatrix& matrix, const CVector& x) {
  if (matrix.cols() != x.size()) {
    throw std::domain_error("dense_oracle_apply: matrix columns do not match vector length");
  }
  CVector out(matrix.rows());
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    Complex acc = 0.0;
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) acc += matrix(i, j) * x(j);
    out(i) = acc;
  }
  return out;
}

CVector dense_oracle_apply(const CMatrix& matrix, const Vector& x) {
  return dense_oracle_apply(matrix, CVector(x.cast<Complex>()));
}

CVector direct_dft(const CVector& x) {
  const Eigen::Index n = x.size();
  if (n == 0) throw std::domain_error("direct_dft: empty input");
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  CVector out(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Complex acc = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) /
                           static_cast<double>(n);
      acc += x(k) * Complex(std::cos(angle), std::sin(angle));
    }
    out(j) = norm * acc;
  }
  return out;
}

Index binomial(Index n, Index k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Index out = 1;
  for (Index i = 1; i <= k; ++i) {
    // out * (n - k + i) / i is always an integer at each step.
    const Index num = n - k + i;
    if (out > std::numeric_limits<Index>::max() / num) return std::numeric_limits<Index>::max();
    out = out * num / i;
  }
  return out;
}

Vector gaussian_jlt_apply(std::uint64_t seed, Index m, Index n, const Vector& x) {
  if (m == 0 || n == 0) throw std::domain_error("gaussian_jlt_apply: dimensions must be positive");
  if (static_cast<Index>(x.size()) != n) {
    throw std::domain_error("gaussian_jlt_apply: vector length does not match N");
  }
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  Vector out(static_cast<Eigen::Index>(m));
  for (Index i = 0; i < m; ++i) {
    double acc = 0.0;
    for (Index j = 0; j < n; ++j) acc += rng.normal() * x(static_cast<Eigen::Index>(j));
    out(static_cast<Eigen::Index>(i)) = scale * acc;
  }
  return out;
}

}  // namespace kfjlt::testkit
