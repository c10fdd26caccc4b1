#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kfjlt/kron.hpp"
#include "kfjlt/rng.hpp"
#include "kfjlt/shape.hpp"
#include "kfjlt/types.hpp"

namespace kfjlt {

/// Rademacher diagonal xi in {-1, +1}^n, with the seed it was drawn from.
class SignVector {
 public:
  explicit SignVector(std::vector<signed char> signs, std::uint64_t seed = 0,
                      std::uint64_t stream = 0);

  static SignVector draw(Index n, std::uint64_t master_seed, std::uint64_t stream);
  static SignVector ones(Index n);

  Index size() const noexcept { return signs_.size(); }
  int operator[](Index i) const { return signs_[i]; }
  std::span<const signed char> values() const noexcept { return signs_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  /// Entrywise xi .* x.
  Vector apply(const Eigen::Ref<const Vector>& x) const;

 private:
  std::vector<signed char> signs_;
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
};

enum class Replacement { with, without };

/// m row indices drawn uniformly from [0, population). Without replacement
/// the order is random and m must not exceed population.
std::vector<Index> sample_rows(Index population, Index m, Replacement mode, Rng& rng);

/// Phi = sqrt(n/m) S F D_xi.
class FjltOperator {
 public:
  FjltOperator(SignVector signs, std::vector<Index> rows);

  /// Signs from sub-stream 1 of `seed`, rows from sub-stream 2, matching a
  /// degree-1 KfjltOperator::sample with the same seed.
  static FjltOperator sample(Index n, Index m, std::uint64_t seed,
                             Replacement mode = Replacement::with);

  Index n() const noexcept { return signs_.size(); }
  Index m() const noexcept { return rows_.size(); }
  double scale() const noexcept { return scale_; }
  const SignVector& signs() const noexcept { return signs_; }
  std::span<const Index> rows() const noexcept { return rows_; }

 private:
  SignVector signs_;
  std::vector<Index> rows_;
  double scale_;
};

/// Phi = sqrt(N/m) S (F_d D_d (x) ... (x) F_1 D_1).
///
/// Randomness layout for sample(): factor k (1-based) draws its signs from
/// sub-stream k of the master seed and the rows come from sub-stream d+1.
class KfjltOperator {
 public:
  KfjltOperator(Shape shape, std::vector<SignVector> signs, std::vector<Index> rows);

  static KfjltOperator sample(const Shape& shape, Index m, std::uint64_t seed,
                              Replacement mode = Replacement::with);

  /// Every row of the mixed vector, each once, with scale 1 (an isometry).
  static KfjltOperator full(const Shape& shape, std::uint64_t seed);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t degree() const noexcept { return shape_.degree(); }
  Index m() const noexcept { return rows_.size(); }
  double scale() const noexcept { return scale_; }
  std::span<const SignVector> signs() const noexcept { return signs_; }
  std::span<const Index> rows() const noexcept { return rows_; }

 private:
  Shape shape_;
  std::vector<SignVector> signs_;
  std::vector<Index> rows_;
  double scale_;
};

/// Sample-before-Kronecker variant: (x)_k sqrt(n_k/m_k) S_k F_k D_k.
class FactoredKfjltOperator {
 public:
  explicit FactoredKfjltOperator(std::vector<FjltOperator> factors);

  /// Same sign sub-streams as KfjltOperator::sample(shape, ., seed); factor k
  /// draws its m_k rows from sub-stream d+1+k.
  static FactoredKfjltOperator sample(const Shape& shape, std::span<const Index> rows_per_factor,
                                      std::uint64_t seed, Replacement mode = Replacement::with);

  /// Reuses the signs of an existing operator with fresh per-factor rows.
  static FactoredKfjltOperator with_signs(const KfjltOperator& op,
                                          std::span<const Index> rows_per_factor,
                                          std::uint64_t seed,
                                          Replacement mode = Replacement::with);

  Shape shape() const;
  std::size_t degree() const noexcept { return factors_.size(); }
  Index m() const noexcept;
  std::span<const FjltOperator> factors() const noexcept { return factors_; }

 private:
  std::vector<FjltOperator> factors_;
};

/// F_k D_k x_k.
CVector mix_factor(const Eigen::Ref<const Vector>& xk, const SignVector& signs);

/// F_k D_k A_k, column by column.
CMatrix mix_columns(const Eigen::Ref<const Matrix>& a, const SignVector& signs);

/// (F_d D_d (x) ... (x) F_1 D_1) x without sampling, applied mode by mode.
CVector kron_mix(const Shape& shape, std::span<const SignVector> signs,
                 const Eigen::Ref<const CVector>& x);

CVector fjlt_apply(const FjltOperator& op, const Eigen::Ref<const Vector>& x);

/// Mixes each factor once, then forms each sampled entry as the product of
/// the mixed factors at the row's multi-index.
CVector kfjlt_apply_kron(const KfjltOperator& op, const KroneckerVector& v);

CVector kfjlt_apply_dense(const KfjltOperator& op, const Eigen::Ref<const CVector>& x);
CVector kfjlt_apply_dense(const KfjltOperator& op, const Eigen::Ref<const Vector>& x);

/// Kronecker product of the per-factor FJLT outputs (length prod m_k).
CVector factored_apply(const FactoredKfjltOperator& op, const KroneckerVector& v);

/// |embedded - original| / original.
double distortion_ratio(double embedded_norm_sq, double original_norm_sq);

/// Explicit m x N matrices, built entry by entry from the DFT formula.
CMatrix materialize_operator(const FjltOperator& op, Index cap = kDefaultMaterializationCap);
CMatrix materialize_operator(const KfjltOperator& op, Index cap = kDefaultMaterializationCap);
CMatrix materialize_operator(const FactoredKfjltOperator& op,
                             Index cap = kDefaultMaterializationCap);

/// F(i, j) of the n-point unitary DFT.
Complex dft_entry(Index n, Index i, Index j);

}  // namespace kfjlt
