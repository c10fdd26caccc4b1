#pragma once

#include <cstdint>
#include <vector>

#include "kfjlt/rng.hpp"
#include "kfjlt/transforms.hpp"
#include "kfjlt/types.hpp"

// Brute-force references and desk-scale statistical checks. Everything here
// is deliberately simple (plain loops, exhaustive enumeration) so it can
// serve as an independent reference for the fast paths.
namespace kfjlt::testkit {

/// Plain O(mN) matrix-vector product.
CVector dense_oracle_apply(const CMatrix& matrix, const CVector& x);
CVector dense_oracle_apply(const CMatrix& matrix, const Vector& x);

/// O(n^2) unitary DFT by direct summation.
CVector direct_dft(const CVector& x);

/// C(n, k), saturating at the largest Index on overflow.
Index binomial(Index n, Index k);

struct RipReport {
  Index rows = 0;
  Index cols = 0;
  Index order = 0;
  /// Smallest delta for which ||Psi x||^2 = (1 +- delta)||x||^2 holds for
  /// every `order`-sparse x.
  double delta = 0.0;
  Index supports = 0;
  std::vector<Index> worst_support;
};

inline constexpr Index kDefaultRipBudget = 200'000;

/// max over |S| = order of ||Psi_S^T Psi_S - I||_2, by enumerating every
/// support. Throws ResourceError when C(N, order) exceeds `budget`.
RipReport rip_constant(const Matrix& psi, Index order, Index budget = kDefaultRipBudget);

/// Largest amount by which | ||Psi_I x_I||^2 - ||x_I||^2 | exceeds
/// delta ||x_I||^2 over every nonempty I with |I| <= order (<= 0 means the
/// norm consequence of RIP holds everywhere).
double rip_norm_excess(const Matrix& psi, const Vector& x, Index order, double delta);

/// Largest amount by which |<Psi_I x_I, Psi_J x_J>| exceeds
/// delta ||x_I|| ||x_J|| over disjoint nonempty I, J with |I|, |J| <= s.
double rip_inner_product_excess(const Matrix& psi, const Vector& x, Index s, double delta);

/// zeta^T D_x (Psi^T Psi - I) D_x zeta.
double distortion_quadratic_form(const Matrix& psi, const Vector& x, const SignVector& zeta);

enum class TailMethod { automatic, exact, monte_carlo };

/// Largest n for which TailMethod::automatic enumerates every sign pattern.
inline constexpr Index kExactEnumerationMaxDim = 12;

struct TailReport {
  double threshold = 0.0;
  double frequency = 0.0;
  double bound = 0.0;
  Index trials = 0;
  /// Three binomial standard deviations of the frequency (zero when exact).
  double radius = 0.0;
  bool exact = false;

  bool holds() const { return frequency <= bound + radius; }
};

/// 2 exp(-t^2 / (2 ||x||^2)).
double hoeffding_bound(const Vector& x, double t);

/// 2 exp(-(1/64) min(t^2/||X||_F^2, (96/65) t/||X||)).
double hanson_wright_bound(const Matrix& x, double t);

/// Pr(|xi^T x| > t) for Rademacher xi.
TailReport hoeffding_tail_check(const Vector& x, double t, Index trials, Rng& rng,
                                TailMethod method = TailMethod::automatic);

/// Pr(|xi^T X xi| > t) for Rademacher xi; X must have an exactly zero diagonal.
TailReport hanson_wright_tail_check(const Matrix& x, double t, Index trials, Rng& rng,
                                    TailMethod method = TailMethod::automatic);

struct BlockNormReport {
  double c_spectral = 0.0;
  double c_frobenius = 0.0;
  double v_norm = 0.0;
  double w_abs = 0.0;
  double c_spectral_bound = 0.0;
  double c_frobenius_bound = 0.0;
  double v_norm_bound = 0.0;
  double w_abs_bound = 0.0;

  bool c_spectral_ok() const { return c_spectral <= c_spectral_bound; }
  bool c_frobenius_ok() const { return c_frobenius <= c_frobenius_bound; }
  bool v_norm_ok() const { return v_norm <= v_norm_bound; }
  bool w_abs_ok() const { return w_abs <= w_abs_bound; }
  bool holds() const { return c_spectral_ok() && c_frobenius_ok() && v_norm_ok() && w_abs_ok(); }
};

/// Sorted index blocks I_1..I_r of x: indices ordered by decreasing |x(i)|
/// (ties by ascending index), cut into runs of s.
std::vector<std::vector<Index>> magnitude_blocks(const Vector& x, Index s);

/// Builds C_{x,y}, v_{x,y}, w_{x,y} from the sorted blocks of x and y and
/// compares them with their block-norm bounds at level delta + 1e-12.
/// b has length s, d has length n.
BlockNormReport block_norm_bounds_check(const Matrix& psi_left, const Matrix& psi_right,
                                        const Vector& x, const Vector& y, Index s,
                                        const SignVector& b, const SignVector& d, double delta);

/// Dense Gaussian sketch with i.i.d. N(0, 1/m) entries drawn from `seed`.
Vector gaussian_jlt_apply(std::uint64_t seed, Index m, Index n, const Vector& x);

}  // namespace kfjlt::testkit
