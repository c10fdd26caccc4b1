#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kfjlt/rng.hpp"
#include "kfjlt/tensor.hpp"
#include "kfjlt/transforms.hpp"
#include "kfjlt/types.hpp"

namespace kfjlt {

/// Rank-R CP model sum_j A_1(:,j) o ... o A_d(:,j).
class CpModel {
 public:
  explicit CpModel(std::vector<Matrix> factors);

  /// Factors with i.i.d. standard normal entries.
  static CpModel random(const Shape& shape, Index rank, Rng& rng);

  Index rank() const noexcept { return static_cast<Index>(factors_.front().cols()); }
  std::size_t degree() const noexcept { return factors_.size(); }
  Shape shape() const;
  const Matrix& factor(std::size_t k) const { return factors_.at(k); }
  std::span<const Matrix> factors() const noexcept { return factors_; }

  /// Replaces A_k; the new factor must keep the n_k x R dimensions.
  void set_factor(std::size_t k, Matrix a);

 private:
  std::vector<Matrix> factors_;
};

DenseTensor reconstruct(const CpModel& model, Index cap = kDefaultMaterializationCap);

/// Z_k = A_d (.) ... (.) A_{k+1} (.) A_{k-1} (.) ... (.) A_1 (zero-based k),
/// row-ordered to match the columns of unfold(t, k).
Matrix khatri_rao_all_but(const CpModel& model, std::size_t mode,
                          Index cap = kDefaultMaterializationCap);

/// ||X - M||_F^2.
double objective(const DenseTensor& t, const CpModel& model);

/// 1 - ||X - M||_F / ||X||_F.
double fit(const DenseTensor& t, const CpModel& model);

struct AlsSweepResult {
  CpModel model;
  /// Objective after each inner solve; filled only when tracking is requested.
  std::vector<double> objectives;
  bool degenerate = false;
};

/// One exact ALS pass: for k = 1..d, A_k <- argmin ||Z_k A_k^T - X_(k)^T||_F.
AlsSweepResult cp_als_sweep(const DenseTensor& t, CpModel model, bool track_objective = false);

/// X x_1 F_1 D_1 ... x_d F_d D_d.
ComplexTensor mix_tensor(const DenseTensor& t, std::span<const SignVector> signs);

struct UnmixedFactor {
  Matrix factor;
  /// Largest |imag| discarded when taking the real part.
  double imaginary_residue = 0.0;
};

/// A_k = D_k F_k^* Ahat_k, real part.
UnmixedFactor unmix_factor(const Eigen::Ref<const CMatrix>& mixed, const SignVector& signs);

/// A CP model together with its mixed factors Ahat_k = F_k D_k A_k.
struct MixedCpState {
  CpModel model;
  std::vector<CMatrix> mixed_factors;
};

MixedCpState mix_model(const CpModel& model, std::span<const SignVector> signs);

struct ModeUpdate {
  Matrix factor;
  double sketched_residual = 0.0;
  bool degenerate = false;
};

/// Sketched solve for A_k from the pre-mixed tensor.
///
/// `rows` are indices into the N_k rows of Z_k. The sketched Khatri-Rao rows
/// come from the mixed factors of the other modes; the matching rows of
/// Phi X_(k)^T are mode-k fibers of the mixed tensor pushed back through
/// F_k^* and D_k. Nothing of size N is touched.
ModeUpdate sketched_mode_update(const ComplexTensor& mixed, std::span<const SignVector> signs,
                                std::span<const CMatrix> mixed_factors, std::size_t mode,
                                std::span<const Index> rows);

struct CprandSweepResult {
  MixedCpState state;
  bool degenerate = false;
};

/// One CPRAND-MIX pass over all modes; rows_per_mode[k] drives mode k.
CprandSweepResult cprand_mix_sweep(const ComplexTensor& mixed, std::span<const SignVector> signs,
                                   MixedCpState state,
                                   std::span<const std::vector<Index>> rows_per_mode);

struct AlsOptions {
  Index max_sweeps = 100;
  /// Stop once a sweep changes the fit by less than this.
  double tolerance = 1e-6;
};

struct CprandOptions {
  Index max_sweeps = 100;
  double tolerance = 1e-6;
  Index rows = 0;
  Replacement replacement = Replacement::with;
  /// Use every row of Z_k once (the sketch becomes an isometry).
  bool exhaustive = false;
};

struct CpRun {
  CpModel model;
  std::vector<double> fits;
  std::vector<double> sweep_seconds;
  bool degenerate = false;
};

CpRun cp_als(const DenseTensor& t, CpModel init, const AlsOptions& options = {});

/// Signs for mode k come from sub-stream k+1 of `seed`; row samples are drawn
/// fresh for every mode of every sweep from sub-stream d+1.
CpRun cprand_mix(const DenseTensor& t, CpModel init, const CprandOptions& options,
                 std::uint64_t seed);

}  // namespace kfjlt
