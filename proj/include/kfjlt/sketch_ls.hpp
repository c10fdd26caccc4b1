#pragma once

#include <span>
#include <vector>

#include "kfjlt/transforms.hpp"
#include "kfjlt/types.hpp"

namespace kfjlt {

/// min_x ||A x - b|| with A = A_d (.) ... (.) A_1 given by its factors.
class KrlsProblem {
 public:
  KrlsProblem(std::vector<Matrix> factors, Vector rhs);

  const Shape& shape() const noexcept { return shape_; }
  Index rank() const noexcept { return static_cast<Index>(factors_.front().cols()); }
  std::span<const Matrix> factors() const noexcept { return factors_; }
  const Vector& rhs() const noexcept { return rhs_; }

 private:
  std::vector<Matrix> factors_;
  Vector rhs_;
  Shape shape_;
};

/// Real 2m-row system [Re(Phi A); Im(Phi A)] x = [Re(Phi b); Im(Phi b)].
struct SketchedSystem {
  Matrix matrix;
  Vector rhs;
  KfjltOperator op;
};

struct LsSolution {
  Matrix solution;
  Index rank = 0;
  bool rank_deficient = false;
};

struct SketchedSolution {
  Vector solution;
  double sketched_residual = 0.0;
  Index rank = 0;
  bool rank_deficient = false;
};

struct ResidualRatio {
  double value = 0.0;
  /// The exact minimum residual was zero, so `value` is the absolute
  /// residual ||A xhat - b|| rather than a ratio.
  bool absolute = false;
};

/// Phi (A_d (.) ... (.) A_1) without forming the N-row product: each A_k is
/// mixed once and each sampled row is the entrywise product of the mixed
/// factor rows it decomposes into.
CMatrix sketch_khatri_rao(const KfjltOperator& op, std::span<const Matrix> factors);

/// Stacks real parts over imaginary parts.
Matrix complexify(const CMatrix& m);
Vector complexify(const CVector& z);

SketchedSystem sketch_system(const KrlsProblem& problem, const KfjltOperator& op);

/// Minimum-norm least-squares solution of a X = b via SVD. Singular values
/// below max(rows, cols) * eps * sigma_max count as zero.
LsSolution solve_least_squares(const Eigen::Ref<const Matrix>& a,
                               const Eigen::Ref<const Matrix>& b);

SketchedSolution solve_sketched_ls(const KrlsProblem& problem, const KfjltOperator& op);

/// Column-wise solve for a matrix right-hand side B (N x n).
std::vector<SketchedSolution> solve_sketched_ls(std::span<const Matrix> factors,
                                                const Eigen::Ref<const Matrix>& rhs,
                                                const KfjltOperator& op);

/// ||A xhat - b|| / min_x ||A x - b||, computed against a dense exact solve.
ResidualRatio residual_ratio(const KrlsProblem& problem, const Eigen::Ref<const Vector>& xhat,
                             Index cap = kDefaultMaterializationCap);

}  // namespace kfjlt
