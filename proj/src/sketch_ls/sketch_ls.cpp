#include "kfjlt/sketch_ls.hpp"

#include <algorithm>
#include <limits>

namespace kfjlt {
namespace {

Shape shape_of(const std::vector<Matrix>& factors) {
  if (factors.empty()) throw std::domain_error("KrlsProblem: no factor matrices");
  std::vector<Index> dims;
  for (const auto& a : factors) {
    if (a.cols() != factors.front().cols()) {
      throw std::domain_error("KrlsProblem: factor matrices must share a column count");
    }
    dims.push_back(static_cast<Index>(a.rows()));
  }
  if (factors.front().cols() < 1) throw std::domain_error("KrlsProblem: rank must be positive");
  return Shape(std::move(dims));
}

// Exact residuals below this fraction of ||b|| are rounding noise of a
// consistent system.
constexpr double kZeroResidual = 1e-10;

}  // namespace

KrlsProblem::KrlsProblem(std::vector<Matrix> factors, Vector rhs)
    : factors_(std::move(factors)), rhs_(std::move(rhs)), shape_(shape_of(factors_)) {
  if (static_cast<Index>(rhs_.size()) != shape_.total()) {
    throw std::domain_error("KrlsProblem: right-hand side length does not match the product of "
                            "factor row counts");
  }
}

CMatrix sketch_khatri_rao(const KfjltOperator& op, std::span<const Matrix> factors) {
  const Shape& shape = op.shape();
  if (factors.size() != shape.degree()) {
    throw std::domain_error("sketch_khatri_rao: factor count does not match operator degree");
  }
  const Eigen::Index r = factors.front().cols();
  if (r < 1) throw std::domain_error("sketch_khatri_rao: factors need at least one column");
  std::vector<CMatrix> mixed;
  mixed.reserve(factors.size());
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (factors[k].cols() != r || static_cast<Index>(factors[k].rows()) != shape.dim(k)) {
      throw std::domain_error("sketch_khatri_rao: factor dimensions do not match operator shape");
    }
    mixed.push_back(mix_columns(factors[k], op.signs()[k]));
  }

  const auto dims = shape.dims();
  const auto rows = op.rows();
  CMatrix out(static_cast<Eigen::Index>(rows.size()), r);
  for (Index i = 0; i < rows.size(); ++i) {
    Index rest = rows[i];
    auto row = out.row(static_cast<Eigen::Index>(i));
    row = mixed[0].row(static_cast<Eigen::Index>(rest % dims[0]));
    rest /= dims[0];
    for (std::size_t k = 1; k < dims.size(); ++k) {
      row.array() *= mixed[k].row(static_cast<Eigen::Index>(rest % dims[k])).array();
      rest /= dims[k];
    }
    row *= op.scale();
  }
  return out;
}

Matrix complexify(const CMatrix& m) {
  Matrix out(2 * m.rows(), m.cols());
  out.topRows(m.rows()) = m.real();
  out.bottomRows(m.rows()) = m.imag();
  return out;
}

Vector complexify(const CVector& z) {
  Vector out(2 * z.size());
  out.head(z.size()) = z.real();
  out.tail(z.size()) = z.imag();
  return out;
}

SketchedSystem sketch_system(const KrlsProblem& problem, const KfjltOperator& op) {
  if (!(problem.shape() == op.shape())) {
    throw std::domain_error("sketch_system: problem shape does not match operator shape");
  }
  return SketchedSystem{complexify(sketch_khatri_rao(op, problem.factors())),
                        complexify(kfjlt_apply_dense(op, problem.rhs())), op};
}

LsSolution solve_least_squares(const Eigen::Ref<const Matrix>& a,
                               const Eigen::Ref<const Matrix>& b) {
  if (a.rows() != b.rows()) throw std::domain_error("solve_least_squares: row counts differ");
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(static_cast<double>(std::max(a.rows(), a.cols())) *
                   std::numeric_limits<double>::epsilon());
  LsSolution out;
  out.solution = svd.solve(b);
  out.rank = static_cast<Index>(svd.rank());
  out.rank_deficient = out.rank < static_cast<Index>(a.cols());
  return out;
}

SketchedSolution solve_sketched_ls(const KrlsProblem& problem, const KfjltOperator& op) {
  const SketchedSystem system = sketch_system(problem, op);
  const LsSolution ls = solve_least_squares(system.matrix, system.rhs);
  SketchedSolution out;
  out.solution = ls.solution.col(0);
  out.sketched_residual = (system.matrix * out.solution - system.rhs).norm();
  out.rank = ls.rank;
  out.rank_deficient = ls.rank_deficient;
  return out;
}

std::vector<SketchedSolution> solve_sketched_ls(std::span<const Matrix> factors,
                                                const Eigen::Ref<const Matrix>& rhs,
                                                const KfjltOperator& op) {
  std::vector<SketchedSolution> out;
  out.reserve(static_cast<std::size_t>(rhs.cols()));
  for (Eigen::Index j = 0; j < rhs.cols(); ++j) {
    const KrlsProblem column(std::vector<Matrix>(factors.begin(), factors.end()), rhs.col(j));
    out.push_back(solve_sketched_ls(column, op));
  }
  return out;
}

ResidualRatio residual_ratio(const KrlsProblem& problem, const Eigen::Ref<const Vector>& xhat,
                             Index cap) {
  if (static_cast<Index>(xhat.size()) != problem.rank()) {
    throw std::domain_error("residual_ratio: solution length does not match problem rank");
  }
  const Matrix a = khatri_rao(problem.factors(), cap);
  const Vector exact = solve_least_squares(a, problem.rhs()).solution.col(0);
  const double best = (a * exact - problem.rhs()).norm();
  const double achieved = (a * xhat - problem.rhs()).norm();
  if (best <= kZeroResidual * problem.rhs().norm()) return ResidualRatio{achieved, true};
  return ResidualRatio{achieved / best, false};
}

}  // namespace kfjlt
