#include <gtest/gtest.h>

#include <numeric>

#include "kfjlt/sketch_ls.hpp"
#include "kfjlt/testkit/testkit.hpp"
#include "test_helpers.hpp"

using namespace kfjlt;

namespace {

std::vector<Matrix> random_factors(const Shape& shape, Index r, Rng& rng) {
  std::vector<Matrix> out;
  for (Index n : shape.dims()) out.push_back(test::random_matrix(n, r, rng));
  return out;
}

}  // namespace

TEST(SketchKhatriRao, RankOneIsKronApply) {
  Rng rng(1);
  const Shape shape({5, 3, 4});
  const auto factors = random_factors(shape, 1, rng);
  const KfjltOperator op = KfjltOperator::sample(shape, 11, 2);
  std::vector<Vector> cols;
  for (const auto& a : factors) cols.push_back(a.col(0));
  EXPECT_LE(test::relative_error(sketch_khatri_rao(op, factors).col(0),
                                 kfjlt_apply_kron(op, KroneckerVector(cols))),
            1e-13);
}

TEST(SketchKhatriRao, MatchesDenseOracle) {
  Rng rng(2);
  for (const Shape& shape : {Shape({4, 4}), Shape({8, 8, 8}), Shape({16, 16, 16}), Shape({7, 9})}) {
    const auto factors = random_factors(shape, 3, rng);
    const KfjltOperator op = KfjltOperator::sample(shape, 20, 3);
    const CMatrix expected = materialize_operator(op) * khatri_rao(factors).cast<Complex>();
    EXPECT_LE(test::relative_error(sketch_khatri_rao(op, factors), expected), 1e-10)
        << shape.to_string();
  }
}

TEST(SketchKhatriRao, DegreeOneIsFjltPerColumn) {
  Rng rng(3);
  const std::vector<Matrix> factors{test::random_matrix(12, 3, rng)};
  const KfjltOperator kop = KfjltOperator::sample(Shape({12}), 5, 4);
  const FjltOperator fop = FjltOperator::sample(12, 5, 4);
  const CMatrix s = sketch_khatri_rao(kop, factors);
  for (Eigen::Index j = 0; j < 3; ++j) {
    EXPECT_LE(test::relative_error(s.col(j), fjlt_apply(fop, factors[0].col(j))), 1e-14);
  }
}

TEST(SketchKhatriRao, DimensionMismatch) {
  Rng rng(4);
  const KfjltOperator op = KfjltOperator::sample(Shape({4, 4}), 5, 4);
  EXPECT_THROW(sketch_khatri_rao(op, random_factors(Shape({4, 5}), 2, rng)), std::domain_error);
  EXPECT_THROW(sketch_khatri_rao(op, random_factors(Shape({4, 4, 2}), 2, rng)), std::domain_error);
}

TEST(Complexify, Examples) {
  const Vector real = complexify(CVector{{Complex(1, 0), Complex(2, 0)}});
  EXPECT_EQ(real, (Vector{{1.0, 2.0, 0.0, 0.0}}));
  const Vector i = complexify(CVector{{Complex(0, 1)}});
  EXPECT_EQ(i, (Vector{{0.0, 1.0}}));
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const CVector z = test::random_cvector(5, rng);
    EXPECT_NEAR(complexify(z).squaredNorm(), z.squaredNorm(), 1e-14 * z.squaredNorm());
  }
  const CMatrix m = CMatrix::Constant(2, 3, Complex(1, -2));
  const Matrix c = complexify(m);
  EXPECT_EQ(c.rows(), 4);
  EXPECT_EQ(c.topRows(2), Matrix::Constant(2, 3, 1.0));
  EXPECT_EQ(c.bottomRows(2), Matrix::Constant(2, 3, -2.0));
}

TEST(KrlsProblem, Validation) {
  Rng rng(6);
  EXPECT_THROW(KrlsProblem({}, Vector(1)), std::domain_error);
  EXPECT_THROW(KrlsProblem({test::random_matrix(3, 2, rng), test::random_matrix(3, 1, rng)}, Vector(9)),
               std::domain_error);
  EXPECT_THROW(KrlsProblem(random_factors(Shape({3, 3}), 2, rng), Vector(8)), std::domain_error);
}

TEST(SolveSketchedLs, ConsistentSystemWithFullSampling) {
  Rng rng(7);
  const Shape shape({6, 5});
  const auto factors = random_factors(shape, 4, rng);
  const Vector x = test::random_vector(4, rng);
  const KrlsProblem problem(factors, khatri_rao(factors) * x);
  const SketchedSolution sol = solve_sketched_ls(problem, KfjltOperator::full(shape, 9));
  EXPECT_LE((sol.solution - x).norm(), 1e-8 * x.norm());
  EXPECT_LE(sol.sketched_residual, 1e-8);
  const ResidualRatio rr = residual_ratio(problem, sol.solution);
  EXPECT_TRUE(rr.absolute);
  EXPECT_LE(rr.value, 1e-8);
}

TEST(SolveSketchedLs, OrthonormalColumnsRecoverBasisVector) {
  // Orthonormal A_k columns give orthonormal Khatri-Rao columns.
  Rng rng(8);
  const Shape shape({8, 8});
  std::vector<Matrix> factors;
  for (Index n : shape.dims()) {
    Eigen::HouseholderQR<Matrix> qr(test::random_matrix(n, 3, rng));
    factors.push_back(qr.householderQ() * Matrix::Identity(static_cast<Eigen::Index>(n), 3));
  }
  const Matrix a = khatri_rao(factors);
  EXPECT_LE((a.transpose() * a - Matrix::Identity(3, 3)).norm(), 1e-12);
  const Vector e1 = Vector::Unit(3, 0);
  const KrlsProblem problem(factors, a * e1);
  for (Index m : {Index{16}, Index{64}}) {
    double err = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      err += (solve_sketched_ls(problem, KfjltOperator::sample(shape, m, seed)).solution - e1).norm();
    }
    EXPECT_LE(err / 20, 1e-8);
  }
  EXPECT_LE((solve_sketched_ls(problem, KfjltOperator::full(shape, 1)).solution - e1).norm(), 1e-12);
}

TEST(SolveSketchedLs, RankDeficientIsFlagged) {
  Rng rng(9);
  const Shape shape({4, 4});
  auto factors = random_factors(shape, 3, rng);
  factors[0].col(2) = factors[0].col(1);
  factors[1].col(2) = factors[1].col(1);
  const KrlsProblem problem(factors, test::random_vector(16, rng));
  const SketchedSolution sol = solve_sketched_ls(problem, KfjltOperator::full(shape, 2));
  EXPECT_TRUE(sol.rank_deficient);
  EXPECT_EQ(sol.rank, 2u);
  // Minimum norm: the two equal columns share the weight.
  EXPECT_NEAR(sol.solution(1), sol.solution(2), 1e-10);

  const SketchedSolution tiny = solve_sketched_ls(
      KrlsProblem(random_factors(shape, 5, rng), test::random_vector(16, rng)),
      KfjltOperator::sample(shape, 2, 3));
  EXPECT_TRUE(tiny.rank_deficient);
}

TEST(SolveSketchedLs, MatrixRightHandSideLoopsColumns) {
  Rng rng(10);
  const Shape shape({5, 4});
  const auto factors = random_factors(shape, 2, rng);
  const Matrix b = test::random_matrix(20, 3, rng);
  const KfjltOperator op = KfjltOperator::sample(shape, 12, 5);
  const auto sols = solve_sketched_ls(factors, b, op);
  ASSERT_EQ(sols.size(), 3u);
  for (Eigen::Index j = 0; j < 3; ++j) {
    EXPECT_EQ(sols[static_cast<std::size_t>(j)].solution,
              solve_sketched_ls(KrlsProblem(factors, b.col(j)), op).solution);
  }
}

TEST(ResidualRatio, Examples) {
  Rng rng(11);
  const Shape shape({5, 6});
  const auto factors = random_factors(shape, 3, rng);
  const Matrix a = khatri_rao(factors);
  const Vector b = test::random_vector(30, rng);
  const KrlsProblem problem(factors, b);
  const Vector exact = a.colPivHouseholderQr().solve(b);
  EXPECT_NEAR(residual_ratio(problem, exact).value, 1.0, 1e-12);

  // b orthogonal to col(A): zero is optimal.
  const Vector perp = b - a * exact;
  EXPECT_NEAR(residual_ratio(KrlsProblem(factors, perp), Vector::Zero(3)).value, 1.0, 1e-10);

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const SketchedSolution sol = solve_sketched_ls(problem, KfjltOperator::sample(shape, 8, seed));
    EXPECT_GE(residual_ratio(problem, sol.solution).value, 1.0 - 1e-10);
  }
  EXPECT_THROW(residual_ratio(problem, Vector::Zero(2)), std::domain_error);
}

TEST(SketchedLs, MeanResidualRatioDecreasesWithM) {
  Rng rng(12);
  const Shape shape({16, 16});
  const Index r = 4;
  const auto factors = random_factors(shape, r, rng);
  const Vector b = khatri_rao(factors) * test::random_vector(r, rng) + test::random_vector(256, rng);
  const KrlsProblem problem(factors, b);
  std::vector<double> means;
  for (Index m : {r + 2, 4 * r, 16 * r, 64 * r}) {
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      sum += residual_ratio(problem, solve_sketched_ls(problem, KfjltOperator::sample(shape, m, seed)).solution).value;
    }
    means.push_back(sum / 100);
  }
  for (std::size_t i = 1; i < means.size(); ++i) EXPECT_LT(means[i], means[i - 1]);
  EXPECT_LT(means.back(), 1.05);
}
