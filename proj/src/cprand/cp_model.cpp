#include <string>

#include "kfjlt/cp.hpp"
#include "kfjlt/kron.hpp"

namespace kfjlt {

CpModel::CpModel(std::vector<Matrix> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::domain_error("CpModel: no factor matrices");
  const Eigen::Index r = factors_.front().cols();
  if (r < 1) throw std::domain_error("CpModel: rank must be positive");
  for (const auto& a : factors_) {
    if (a.cols() != r) throw std::domain_error("CpModel: factor matrices must share a rank");
    if (a.rows() < 1) throw std::domain_error("CpModel: empty factor matrix");
  }
}

CpModel CpModel::random(const Shape& shape, Index rank, Rng& rng) {
  std::vector<Matrix> factors;
  for (Index n : shape.dims()) {
    Matrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(rank));
    // Column-major fill order keeps the draw sequence independent of Eigen internals.
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = rng.normal();
    }
    factors.push_back(std::move(a));
  }
  return CpModel(std::move(factors));
}

Shape CpModel::shape() const {
  std::vector<Index> dims;
  for (const auto& a : factors_) dims.push_back(static_cast<Index>(a.rows()));
  return Shape(std::move(dims));
}

void CpModel::set_factor(std::size_t k, Matrix a) {
  Matrix& slot = factors_.at(k);
  if (a.rows() != slot.rows() || a.cols() != slot.cols()) {
    throw std::domain_error("CpModel::set_factor: dimensions changed");
  }
  slot = std::move(a);
}

DenseTensor reconstruct(const CpModel& model, Index cap) {
  const Shape shape = model.shape();
  if (shape.total() > cap) {
    throw ResourceError("reconstruct: N = " + std::to_string(shape.total()) +
                        " exceeds the materialization cap " + std::to_string(cap));
  }
  const std::size_t d = model.degree();
  const Eigen::Index r = static_cast<Eigen::Index>(model.rank());
  Vector data(static_cast<Eigen::Index>(shape.total()));
  MultiIndex coords(d);
  Eigen::RowVectorXd term(r);
  for (Index i = 0; i < shape.total(); ++i) {
    multi_index_into(shape, i, coords);
    term = model.factor(0).row(static_cast<Eigen::Index>(coords[0]));
    for (std::size_t k = 1; k < d; ++k) {
      term.array() *= model.factor(k).row(static_cast<Eigen::Index>(coords[k])).array();
    }
    data(static_cast<Eigen::Index>(i)) = term.sum();
  }
  return DenseTensor(shape, std::move(data));
}

Matrix khatri_rao_all_but(const CpModel& model, std::size_t mode, Index cap) {
  if (mode >= model.degree()) throw std::domain_error("khatri_rao_all_but: mode out of range");
  if (model.degree() < 2) {
    throw std::domain_error("khatri_rao_all_but: a degree-1 model has no other modes");
  }
  std::vector<Matrix> rest;
  for (std::size_t k = 0; k < model.degree(); ++k) {
    if (k != mode) rest.push_back(model.factor(k));
  }
  return khatri_rao(rest, cap);
}

double objective(const DenseTensor& t, const CpModel& model) {
  if (!(t.shape() == model.shape())) {
    throw std::domain_error("objective: tensor and model shapes differ");
  }
  return (t.data() - reconstruct(model).data()).squaredNorm();
}

double fit(const DenseTensor& t, const CpModel& model) {
  const double norm = t.norm();
  if (!(norm > 0.0)) throw std::domain_error("fit: undefined for the zero tensor");
  return 1.0 - std::sqrt(objective(t, model)) / norm;
}

}  // namespace kfjlt
