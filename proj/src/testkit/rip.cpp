#include <algorithm>
#include <limits>
#include <cmath>
#include <string>

#include "combinations.hpp"
#include "kfjlt/testkit/testkit.hpp"

namespace kfjlt::testkit {

RipReport rip_constant(const Matrix& psi, Index order, Index budget) {
  const Index n = static_cast<Index>(psi.cols());
  if (order == 0 || order > n) {
    throw std::domain_error("rip_constant: order must lie in [1, number of columns]");
  }
  const Index supports = binomial(n, order);
  if (supports > budget) {
    throw ResourceError("rip_constant: C(" + std::to_string(n) + ", " + std::to_string(order) +
                        ") = " + std::to_string(supports) + " supports exceeds the budget of " +
                        std::to_string(budget) + "; use fewer columns or a smaller order");
  }

  const Matrix gram = psi.transpose() * psi;
  const Eigen::Index t = static_cast<Eigen::Index>(order);
  Matrix sub(t, t);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(t);

  RipReport report{static_cast<Index>(psi.rows()), n, order, 0.0, 0, {}};
  detail::for_each_combination(n, order, [&](std::span<const Index> s) {
    for (Eigen::Index a = 0; a < t; ++a) {
      for (Eigen::Index b = 0; b < t; ++b) {
        sub(a, b) = gram(static_cast<Eigen::Index>(s[static_cast<Index>(a)]),
                         static_cast<Eigen::Index>(s[static_cast<Index>(b)]));
      }
      sub(a, a) -= 1.0;
    }
    solver.compute(sub, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    const double dev = std::max(std::abs(ev(0)), std::abs(ev(t - 1)));
    ++report.supports;
    if (dev > report.delta || report.worst_support.empty()) {
      report.delta = std::max(report.delta, dev);
      report.worst_support.assign(s.begin(), s.end());
    }
  });
  return report;
}

namespace {

Vector restricted_image(const Matrix& psi, const Vector& x, std::span<const Index> subset) {
  Vector out = Vector::Zero(psi.rows());
  for (Index i : subset) {
    out += psi.col(static_cast<Eigen::Index>(i)) * x(static_cast<Eigen::Index>(i));
  }
  return out;
}

double restricted_norm_sq(const Vector& x, std::span<const Index> subset) {
  double acc = 0.0;
  for (Index i : subset) acc += x(static_cast<Eigen::Index>(i)) * x(static_cast<Eigen::Index>(i));
  return acc;
}

}  // namespace

double rip_norm_excess(const Matrix& psi, const Vector& x, Index order, double delta) {
  const Index n = static_cast<Index>(psi.cols());
  if (static_cast<Index>(x.size()) != n) {
    throw std::domain_error("rip_norm_excess: vector length does not match columns");
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (Index k = 1; k <= std::min(order, n); ++k) {
    detail::for_each_combination(n, k, [&](std::span<const Index> s) {
      const double image = restricted_image(psi, x, s).squaredNorm();
      const double orig = restricted_norm_sq(x, s);
      worst = std::max(worst, std::abs(image - orig) - delta * orig);
    });
  }
  return worst;
}

double rip_inner_product_excess(const Matrix& psi, const Vector& x, Index s, double delta) {
  const Index n = static_cast<Index>(psi.cols());
  if (static_cast<Index>(x.size()) != n) {
    throw std::domain_error("rip_inner_product_excess: vector length does not match columns");
  }
  double worst = -std::numeric_limits<double>::infinity();
  std::vector<Index> complement;
  std::vector<Index> mapped;
  for (Index ki = 1; ki <= std::min(s, n); ++ki) {
    detail::for_each_combination(n, ki, [&](std::span<const Index> set_i) {
      const Vector image_i = restricted_image(psi, x, set_i);
      const double norm_i = std::sqrt(restricted_norm_sq(x, set_i));
      complement.clear();
      for (Index j = 0, p = 0; j < n; ++j) {
        if (p < set_i.size() && set_i[p] == j) {
          ++p;
        } else {
          complement.push_back(j);
        }
      }
      for (Index kj = 1; kj <= std::min(s, static_cast<Index>(complement.size())); ++kj) {
        detail::for_each_combination(complement.size(), kj, [&](std::span<const Index> pos) {
          mapped.clear();
          for (Index p : pos) mapped.push_back(complement[p]);
          const double inner = image_i.dot(restricted_image(psi, x, mapped));
          const double norm_j = std::sqrt(restricted_norm_sq(x, mapped));
          worst = std::max(worst, std::abs(inner) - delta * norm_i * norm_j);
        });
      }
    });
  }
  return worst;
}

double distortion_quadratic_form(const Matrix& psi, const Vector& x, const SignVector& zeta) {
  const Index n = static_cast<Index>(psi.cols());
  if (static_cast<Index>(x.size()) != n || zeta.size() != n) {
    throw std::domain_error("distortion_quadratic_form: dimensions are inconsistent");
  }
  Matrix m = psi.transpose() * psi - Matrix::Identity(psi.cols(), psi.cols());
  m = x.asDiagonal() * m * x.asDiagonal();
  Vector z(psi.cols());
  for (Index i = 0; i < n; ++i) z(static_cast<Eigen::Index>(i)) = zeta[i];
  return z.dot(m * z);
}

}  // namespace kfjlt::testkit
