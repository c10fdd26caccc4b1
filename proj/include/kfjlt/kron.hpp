#pragma once

#include <span>
#include <vector>

#include "kfjlt/shape.hpp"
#include "kfjlt/types.hpp"

namespace kfjlt {

/// x = x_d (x) ... (x) x_1, held as its factors.
///
/// Factors are stored in mode order (x_1 first). Entry i of the represented
/// vector is prod_k x_k(i_k) with (i_k) = multi_index(shape, i), so x_1 is the
/// fastest-varying factor. The length-N vector is never formed unless
/// kron_materialize is called.
class KroneckerVector {
 public:
  explicit KroneckerVector(std::vector<Vector> factors);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t degree() const noexcept { return factors_.size(); }
  const Vector& factor(std::size_t k) const { return factors_.at(k); }
  std::span<const Vector> factors() const noexcept { return factors_; }

  /// Views the same vector at a lower degree by merging equal-length runs of
  /// adjacent factors into their Kronecker products. degree() must be
  /// divisible by `groups`.
  KroneckerVector regroup(std::size_t groups) const;

 private:
  std::vector<Vector> factors_;
  Shape shape_;
};

/// The length-N vector represented by v.
Vector kron_materialize(const KroneckerVector& v, Index cap = kDefaultMaterializationCap);

/// Column-wise Kronecker product. matrices = (A_1, ..., A_d) in mode order;
/// column j of the result is A_d(:,j) (x) ... (x) A_1(:,j).
Matrix khatri_rao(std::span<const Matrix> matrices, Index cap = kDefaultMaterializationCap);

/// prod_k ||x_k||^2 without materializing.
double kron_norm_sq(const KroneckerVector& v);

}  // namespace kfjlt
