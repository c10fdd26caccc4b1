#include <algorithm>
#include <cmath>
#include <numeric>

#include "kfjlt/testkit/testkit.hpp"

namespace kfjlt::testkit {

std::vector<std::vector<Index>> magnitude_blocks(const Vector& x, Index s) {
  const Index n = static_cast<Index>(x.size());
  if (s == 0 || s > n) throw std::domain_error("magnitude_blocks: need 1 <= s <= n");
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(x(static_cast<Eigen::Index>(a))) > std::abs(x(static_cast<Eigen::Index>(b)));
  });
  std::vector<std::vector<Index>> blocks;
  for (Index start = 0; start < n; start += s) {
    blocks.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                        order.begin() + static_cast<std::ptrdiff_t>(std::min(n, start + s)));
  }
  return blocks;
}

BlockNormReport block_norm_bounds_check(const Matrix& psi_left, const Matrix& psi_right,
                                        const Vector& x, const Vector& y, Index s,
                                        const SignVector& b, const SignVector& d, double delta) {
  const Index n = static_cast<Index>(x.size());
  if (s == 0 || s > n) throw std::domain_error("block_norm_bounds_check: need 1 <= s <= n");
  if (static_cast<Index>(y.size()) != n || static_cast<Index>(psi_left.cols()) != n ||
      static_cast<Index>(psi_right.cols()) != n || psi_left.rows() != psi_right.rows()) {
    throw std::domain_error("block_norm_bounds_check: dimensions are inconsistent");
  }
  if (b.size() != s || d.size() != n) {
    throw std::domain_error("block_norm_bounds_check: sign vectors must have lengths s and n");
  }

  const auto blocks_x = magnitude_blocks(x, s);
  const auto blocks_y = magnitude_blocks(y, s);
  std::vector<Index> block_of_x(n);
  std::vector<Index> block_of_y(n);
  for (Index p = 0; p < blocks_x.size(); ++p) {
    for (Index i : blocks_x[p]) block_of_x[i] = p;
    for (Index j : blocks_y[p]) block_of_y[j] = p;
  }
  const Matrix cross = psi_left.transpose() * psi_right;
  auto entry = [&](Index i, Index j) {
    const auto ii = static_cast<Eigen::Index>(i);
    const auto jj = static_cast<Eigen::Index>(j);
    return x(ii) * cross(ii, jj) * y(jj);
  };

  Matrix c = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (block_of_x[i] != 0 && block_of_y[j] != 0 && block_of_x[i] != block_of_y[j]) {
        c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = entry(i, j);
      }
    }
  }

  // v is indexed by I_1^c and sums over J_1 against b.
  const auto& j1 = blocks_y[0];
  double v_sq = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (block_of_x[i] == 0) continue;
    double acc = 0.0;
    for (Index q = 0; q < j1.size(); ++q) acc += entry(i, j1[q]) * b[q];
    v_sq += acc * acc;
  }

  double w = 0.0;
  for (Index p = 0; p < blocks_x.size(); ++p) {
    for (Index i : blocks_x[p]) {
      for (Index j : blocks_y[p]) w += d[i] * entry(i, j) * d[j];
    }
  }

  const double level = delta + 1e-12;
  const double scale = x.norm() * y.norm();
  const double root_s = std::sqrt(static_cast<double>(s));

  BlockNormReport report;
  report.c_spectral = Eigen::JacobiSVD<Matrix>(c).singularValues()(0);
  report.c_frobenius = c.norm();
  report.v_norm = std::sqrt(v_sq);
  report.w_abs = std::abs(w);
  report.c_spectral_bound = level / static_cast<double>(s) * scale;
  report.c_frobenius_bound = level / root_s * scale;
  report.v_norm_bound = level / root_s * scale;
  report.w_abs_bound = level * scale;
  return report;
}

}  // namespace kfjlt::testkit
