#include "kfjlt/kron.hpp"

#include <string>

namespace kfjlt {
namespace {

Shape shape_of(const std::vector<Vector>& factors) {
  std::vector<Index> dims;
  dims.reserve(factors.size());
  for (const auto& f : factors) dims.push_back(static_cast<Index>(f.size()));
  return Shape(std::move(dims));
}

void check_cap(Index n, Index cap, const char* what) {
  if (n > cap) {
    throw ResourceError(std::string(what) + ": N = " + std::to_string(n) +
                        " exceeds the materialization cap " + std::to_string(cap));
  }
}

// Accumulates next (x) current into a fresh buffer: out(a + |current| * b) =
// current(a) * next(b). Shared by kron_materialize and khatri_rao so both
// produce bitwise identical columns.
template <typename Column, typename Factor>
Vector kron_step(const Column& current, const Factor& next) {
  const Index inner = static_cast<Index>(current.size());
  const Index outer = static_cast<Index>(next.size());
  Vector out(static_cast<Eigen::Index>(inner * outer));
  for (Index b = 0; b < outer; ++b) {
    const double scale = next(static_cast<Eigen::Index>(b));
    for (Index a = 0; a < inner; ++a) {
      out(static_cast<Eigen::Index>(a + inner * b)) = current(static_cast<Eigen::Index>(a)) * scale;
    }
  }
  return out;
}

}  // namespace

KroneckerVector::KroneckerVector(std::vector<Vector> factors)
    : factors_(std::move(factors)), shape_(shape_of(factors_)) {}

KroneckerVector KroneckerVector::regroup(std::size_t groups) const {
  if (groups == 0 || degree() % groups != 0) {
    throw std::domain_error("KroneckerVector::regroup: degree " + std::to_string(degree()) +
                            " is not divisible into " + std::to_string(groups) + " groups");
  }
  const std::size_t per_group = degree() / groups;
  std::vector<Vector> merged;
  merged.reserve(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    Vector acc = factors_[g * per_group];
    for (std::size_t k = 1; k < per_group; ++k) acc = kron_step(acc, factors_[g * per_group + k]);
    merged.push_back(std::move(acc));
  }
  return KroneckerVector(std::move(merged));
}

Vector kron_materialize(const KroneckerVector& v, Index cap) {
  check_cap(v.shape().total(), cap, "kron_materialize");
  Vector acc = v.factor(0);
  for (std::size_t k = 1; k < v.degree(); ++k) acc = kron_step(acc, v.factor(k));
  return acc;
}

Matrix khatri_rao(std::span<const Matrix> matrices, Index cap) {
  if (matrices.empty()) throw std::domain_error("khatri_rao: no input matrices");
  const Eigen::Index r = matrices.front().cols();
  std::vector<Index> dims;
  for (const auto& m : matrices) {
    if (m.cols() != r) throw std::domain_error("khatri_rao: column counts differ");
    dims.push_back(static_cast<Index>(m.rows()));
  }
  const Shape shape(std::move(dims));
  check_cap(shape.total(), cap, "khatri_rao");

  Matrix out(static_cast<Eigen::Index>(shape.total()), r);
  for (Eigen::Index j = 0; j < r; ++j) {
    Vector acc = matrices[0].col(j);
    for (std::size_t k = 1; k < matrices.size(); ++k) acc = kron_step(acc, matrices[k].col(j));
    out.col(j) = acc;
  }
  return out;
}

double kron_norm_sq(const KroneckerVector& v) {
  double out = 1.0;
  for (const auto& f : v.factors()) out *= f.squaredNorm();
  return out;
}

}  // namespace kfjlt
