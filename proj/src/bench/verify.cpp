#include "kfjlt/bench/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "kfjlt/sketch_ls.hpp"
#include "kfjlt/testkit/testkit.hpp"
#include "kfjlt/transforms.hpp"

namespace kfjlt::bench {
namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

Vector normal_vector(Index n, Rng& rng) {
  Vector v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = rng.normal();
  return v;
}

CVector normal_cvector(Index n, Rng& rng) {
  CVector v(static_cast<Eigen::Index>(n));
  for (auto& z : v) z = Complex(rng.normal(), rng.normal());
  return v;
}

Matrix normal_matrix(Index rows, Index cols, Rng& rng) {
  Matrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = rng.normal();
  return a;
}

KroneckerVector normal_kron(const Shape& shape, Rng& rng) {
  std::vector<Vector> factors;
  for (Index n : shape.dims()) factors.push_back(normal_vector(n, rng));
  return KroneckerVector(std::move(factors));
}

double rel(const CVector& got, const CVector& want) {
  return (got - want).norm() / std::max(want.norm(), 1e-300);
}

SignVector random_signs(Index n, Rng& rng) {
  std::vector<signed char> s(n);
  for (auto& v : s) v = static_cast<signed char>(rng.rademacher());
  return SignVector(std::move(s));
}

// Complexified subsampled DFT with random signs: a real 2m x n matrix.
Matrix complexified_fjlt(Index n, Index m, std::uint64_t seed) {
  return complexify(materialize_operator(FjltOperator::sample(n, m, seed, Replacement::without)));
}

}  // namespace

CheckResult check_oracle_equivalence(Index instances, std::uint64_t seed) {
  const std::vector<Shape> shapes{Shape({8}), Shape({4, 4}), Shape({3, 4, 5}), Shape({8, 8, 8}),
                                  Shape({16, 16})};
  double worst = 0.0;
  for (Index i = 0; i < instances; ++i) {
    const Shape& shape = shapes[i % shapes.size()];
    Rng rng = Rng::substream(seed, i);
    const Index n = shape.total();
    const Index m = 1 + rng.uniform_index(std::min<Index>(2 * n, 48));
    const std::uint64_t op_seed = substream_seed(seed, 1'000'000 + i);

    const KfjltOperator kop = KfjltOperator::sample(shape, m, op_seed);
    const CMatrix kdense = materialize_operator(kop);
    const KroneckerVector v = normal_kron(shape, rng);
    const Vector vx = kron_materialize(v);
    worst = std::max(worst, rel(kfjlt_apply_kron(kop, v), testkit::dense_oracle_apply(kdense, vx)));
    const CVector z = normal_cvector(n, rng);
    worst = std::max(worst, rel(kfjlt_apply_dense(kop, z), testkit::dense_oracle_apply(kdense, z)));

    const FjltOperator fop = FjltOperator::sample(n, m, op_seed);
    worst = std::max(worst, rel(fjlt_apply(fop, vx),
                                testkit::dense_oracle_apply(materialize_operator(fop), vx)));

    std::vector<Index> per_factor;
    for (Index nk : shape.dims()) per_factor.push_back(1 + rng.uniform_index(nk + 2));
    const FactoredKfjltOperator factored = FactoredKfjltOperator::sample(shape, per_factor, op_seed);
    worst = std::max(worst, rel(factored_apply(factored, v),
                                testkit::dense_oracle_apply(materialize_operator(factored), vx)));

    const Index r = 1 + rng.uniform_index(4);
    std::vector<Matrix> factors;
    for (Index nk : shape.dims()) factors.push_back(normal_matrix(nk, r, rng));
    const CMatrix sketched = sketch_khatri_rao(kop, factors);
    const Matrix kr = khatri_rao(factors);
    for (Eigen::Index j = 0; j < kr.cols(); ++j) {
      worst = std::max(worst, rel(sketched.col(j),
                                  testkit::dense_oracle_apply(kdense, Vector(kr.col(j)))));
    }
  }
  return {"oracle equivalence", worst <= 1e-10,
          fmt("worst relative error %.3g over %.0f instances", worst, static_cast<double>(instances))};
}

CheckResult check_unitarity(Index instances, std::uint64_t seed) {
  double worst = 0.0;
  for (Index i = 0; i < instances; ++i) {
    Rng rng = Rng::substream(seed, i);
    const std::size_t d = 1 + rng.uniform_index(3);
    std::vector<Index> dims;
    std::vector<SignVector> signs;
    for (std::size_t k = 0; k < d; ++k) {
      dims.push_back(1 + rng.uniform_index(16));
      signs.push_back(random_signs(dims.back(), rng));
    }
    const Shape shape(dims);
    const CVector x = normal_cvector(shape.total(), rng);
    const double mixed = kron_mix(shape, signs, x).norm();
    worst = std::max(worst, std::abs(mixed - x.norm()) / x.norm());
    const Vector f = normal_vector(dims[0], rng);
    worst = std::max(worst, std::abs(mix_factor(f, signs[0]).norm() - f.norm()) / f.norm());
  }
  return {"mixing preserves norms", worst <= 1e-12,
          fmt("worst relative norm change %.3g over %.0f instances", worst,
              static_cast<double>(instances))};
}

CheckResult check_unbiasedness(Index pairs, Index resamples, std::uint64_t seed) {
  const std::vector<Shape> shapes{Shape({16}), Shape({4, 8}), Shape({3, 4, 5}), Shape({6, 6})};
  double worst_z = 0.0;
  for (Index p = 0; p < pairs; ++p) {
    const Shape& shape = shapes[p % shapes.size()];
    Rng rng = Rng::substream(seed, p);
    const Vector x = normal_vector(shape.total(), rng);
    const KfjltOperator base = KfjltOperator::sample(shape, 1, substream_seed(seed, 1000 + p));
    const std::vector<SignVector> signs(base.signs().begin(), base.signs().end());
    const Index m = 1 + rng.uniform_index(shape.total() / 2);
    double sum = 0.0, sum_sq = 0.0;
    for (Index r = 0; r < resamples; ++r) {
      const KfjltOperator op(shape, signs, sample_rows(shape.total(), m, Replacement::with, rng));
      const double v = kfjlt_apply_dense(op, x).squaredNorm();
      sum += v;
      sum_sq += v * v;
    }
    const double count = static_cast<double>(resamples);
    const double mean = sum / count;
    const double se = std::sqrt(std::max(0.0, sum_sq / count - mean * mean) / count);
    const double z = std::abs(mean - x.squaredNorm()) / std::max(se, 1e-300);
    worst_z = std::max(worst_z, z);
  }
  return {"unbiased squared norm", worst_z <= 4.0,
          fmt("largest deviation %.2f standard errors over %.0f pairs x %.0f resamples", worst_z,
              static_cast<double>(pairs), static_cast<double>(resamples))};
}

CheckResult check_concentration(Index max_n, Index trials, Index identity_instances,
                                std::uint64_t seed) {
  const double multiples[] = {0.25, 0.5, 1.0, 1.5, 2.0, 3.0};
  Index exact_checks = 0, exact_violations = 0, mc_checks = 0, mc_violations = 0;

  auto tally = [&](const testkit::TailReport& r) {
    if (r.exact) {
      ++exact_checks;
      exact_violations += r.frequency > r.bound;
    } else {
      ++mc_checks;
      mc_violations += !r.holds();
    }
  };

  for (Index n = 1; n <= std::min<Index>(max_n, testkit::kExactEnumerationMaxDim); ++n) {
    Rng rng = Rng::substream(seed, n);
    for (int inst = 0; inst < 3; ++inst) {
      const Vector x = normal_vector(n, rng);
      Matrix a = normal_matrix(n, n, rng);
      a = (a + a.transpose()).eval();
      a.diagonal().setZero();
      for (double c : multiples) {
        tally(testkit::hoeffding_tail_check(x, c * x.norm(), 0, rng));
        if (n >= 2) tally(testkit::hanson_wright_tail_check(a, c * a.norm(), 0, rng));
      }
    }
  }
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  Rng hand(seed);
  tally(testkit::hanson_wright_tail_check(swap, 1.0, 0, hand));
  tally(testkit::hoeffding_tail_check(Vector::Unit(4, 0), 0.5, 0, hand));

  for (Index n : {Index{16}, Index{32}, Index{64}}) {
    if (n > max_n) break;
    Rng rng = Rng::substream(seed, 100 + n);
    const Vector x = normal_vector(n, rng);
    Matrix a = normal_matrix(n, n, rng);
    a = (a + a.transpose()).eval();
    a.diagonal().setZero();
    for (double c : {0.5, 1.0, 2.0}) {
      tally(testkit::hoeffding_tail_check(x, c * x.norm(), trials, rng));
      tally(testkit::hanson_wright_tail_check(a, c * a.norm(), trials, rng));
    }
    tally(testkit::hoeffding_tail_check(Vector::Ones(static_cast<Eigen::Index>(n)),
                                        std::sqrt(static_cast<double>(n)), trials, rng));
  }

  double worst_identity = 0.0;
  for (Index i = 0; i < identity_instances; ++i) {
    Rng rng = Rng::substream(seed, 10'000 + i);
    const Index rows = 1 + rng.uniform_index(16);
    const Index cols = 1 + rng.uniform_index(24);
    const Matrix psi = normal_matrix(rows, cols, rng) / std::sqrt(static_cast<double>(rows));
    const Vector x = normal_vector(cols, rng);
    const SignVector zeta = random_signs(cols, rng);
    const double image = (psi * zeta.apply(x)).squaredNorm();
    const double direct = image - x.squaredNorm();
    const double form = testkit::distortion_quadratic_form(psi, x, zeta);
    worst_identity = std::max(worst_identity, std::abs(form - direct) / (image + x.squaredNorm()));
  }

  const bool ok = exact_violations == 0 && mc_violations == 0 && worst_identity <= 1e-10;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "exact %zu/%zu within bound, monte carlo %zu/%zu within bound + 3 sd, "
                "quadratic-form identity worst %.3g",
                exact_checks - exact_violations, exact_checks, mc_checks - mc_violations, mc_checks,
                worst_identity);
  return {"concentration tails", ok, buf};
}

CheckResult check_rip_block_norms(Index n, Index s, Index instances, std::uint64_t seed) {
  std::string failures;

  // Hand cases.
  for (Index t = 1; t <= 3; ++t) {
    if (testkit::rip_constant(Matrix::Identity(6, 6), t).delta != 0.0) failures += " identity";
  }
  Matrix dup = Matrix::Zero(3, 2);
  dup(0, 0) = dup(0, 1) = 1.0;
  if (std::abs(testkit::rip_constant(dup, 2).delta - 1.0) > 1e-14) failures += " duplicated-column";

  // Sparse-norm and inner-product consequences on tiny instances.
  double worst_norm = -1.0, worst_inner = -1.0;
  for (int inst = 0; inst < 4; ++inst) {
    Rng rng = Rng::substream(seed, 50 + inst);
    const Matrix psi = inst % 2 == 0
                           ? complexified_fjlt(10, 8, substream_seed(seed, inst))
                           : Matrix(normal_matrix(6, 10, rng) / std::sqrt(6.0));
    const double d4 = testkit::rip_constant(psi, 4).delta;
    for (int trial = 0; trial < 5; ++trial) {
      const Vector x = normal_vector(10, rng);
      worst_norm = std::max(worst_norm, testkit::rip_norm_excess(psi, x, 4, d4) / x.squaredNorm());
      worst_inner =
          std::max(worst_inner, testkit::rip_inner_product_excess(psi, x, 2, d4) / x.squaredNorm());
    }
  }
  if (worst_norm > 1e-12) failures += " sparse-norm";
  if (worst_inner > 1e-12) failures += " inner-product";

  // Block-norm bounds with the measured constant of the stacked matrix.
  const Matrix stacked = complexified_fjlt(2 * n, (3 * 2 * n) / 4, substream_seed(seed, 99));
  const Matrix left = stacked.leftCols(static_cast<Eigen::Index>(n));
  const Matrix right = stacked.rightCols(static_cast<Eigen::Index>(n));
  const testkit::RipReport rip =
      testkit::rip_constant(stacked, 2 * s, std::numeric_limits<Index>::max());
  Index passed = 0;
  for (Index i = 0; i < instances; ++i) {
    Rng rng = Rng::substream(seed, 200 + i);
    const Vector x = normal_vector(n, rng);
    const Vector y = normal_vector(n, rng);
    const bool extreme = i == 0;
    const SignVector b = extreme ? SignVector::ones(s) : random_signs(s, rng);
    const SignVector d = extreme ? SignVector::ones(n) : random_signs(n, rng);
    passed += testkit::block_norm_bounds_check(left, right, x, y, s, b, d, rip.delta).holds();
  }
  if (passed != instances) failures += " block-norm";

  char buf[320];
  std::snprintf(buf, sizeof buf,
                "delta_hat(order %zu, %zu supports) = %.4f; block-norm bounds %zu/%zu; "
                "sparse-norm excess %.2g, inner-product excess %.2g%s%s",
                2 * s, rip.supports, rip.delta, passed, instances, worst_norm, worst_inner,
                failures.empty() ? "" : "; failed:", failures.c_str());
  return {"rip and block norms", failures.empty(), buf};
}

}  // namespace kfjlt::bench
