#pragma once

#include <span>
#include <string>

#include "kfjlt/shape.hpp"
#include "kfjlt/types.hpp"

namespace kfjlt {

/// d-way dense tensor stored in linear_index order (mode 1 fastest).
template <typename Scalar>
class Tensor {
 public:
  using Data = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit Tensor(Shape shape) : shape_(std::move(shape)), data_(Data::Zero(size())) {}
  Tensor(Shape shape, Data data) : shape_(std::move(shape)), data_(std::move(data)) {
    if (static_cast<Index>(data_.size()) != shape_.total()) {
      throw std::domain_error("Tensor: data length " + std::to_string(data_.size()) +
                              " does not match shape " + shape_.to_string());
    }
  }

  const Shape& shape() const noexcept { return shape_; }
  const Data& data() const noexcept { return data_; }
  Data& data() noexcept { return data_; }

  Scalar& operator()(std::span<const Index> coords) {
    return data_(static_cast<Eigen::Index>(linear_index(shape_, coords)));
  }
  const Scalar& operator()(std::span<const Index> coords) const {
    return data_(static_cast<Eigen::Index>(linear_index(shape_, coords)));
  }

  double norm() const { return data_.norm(); }

 private:
  Eigen::Index size() const { return static_cast<Eigen::Index>(shape_.total()); }

  Shape shape_;
  Data data_;
};

using DenseTensor = Tensor<double>;
using ComplexTensor = Tensor<Complex>;

/// Mode-k unfolding (zero-based k): n_k x N_k, where column j is the linear
/// index of the remaining modes in increasing mode order, mode 1 fastest.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> unfold(const Tensor<Scalar>& t,
                                                             std::size_t mode) {
  const Shape& shape = t.shape();
  if (mode >= shape.degree()) throw std::domain_error("unfold: mode out of range");
  const Index n = shape.dim(mode);
  const Index stride = shape.stride(mode);
  const Index outer = shape.total() / (stride * n);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(
      static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(stride * outer));
  const auto& data = t.data();
  for (Index b = 0; b < outer; ++b) {
    for (Index i = 0; i < n; ++i) {
      for (Index a = 0; a < stride; ++a) {
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a + stride * b)) =
            data(static_cast<Eigen::Index>(a + stride * (i + n * b)));
      }
    }
  }
  return out;
}

/// Inverse of unfold.
template <typename Derived>
Tensor<typename Derived::Scalar> fold(const Eigen::MatrixBase<Derived>& m, std::size_t mode,
                                      const Shape& shape) {
  using Scalar = typename Derived::Scalar;
  if (mode >= shape.degree()) throw std::domain_error("fold: mode out of range");
  const Index n = shape.dim(mode);
  const Index stride = shape.stride(mode);
  const Index outer = shape.total() / (stride * n);
  if (static_cast<Index>(m.rows()) != n || static_cast<Index>(m.cols()) != stride * outer) {
    throw std::domain_error("fold: matrix dimensions do not match the mode unfolding of " +
                            shape.to_string());
  }
  typename Tensor<Scalar>::Data data(static_cast<Eigen::Index>(shape.total()));
  for (Index b = 0; b < outer; ++b) {
    for (Index i = 0; i < n; ++i) {
      for (Index a = 0; a < stride; ++a) {
        data(static_cast<Eigen::Index>(a + stride * (i + n * b))) =
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a + stride * b));
      }
    }
  }
  return Tensor<Scalar>(shape, std::move(data));
}

/// Gathers the mode-k fiber of t at column j of the mode-k unfolding.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mode_fiber(const Tensor<Scalar>& t, std::size_t mode,
                                                    Index column) {
  const Shape& shape = t.shape();
  const Index n = shape.dim(mode);
  const Index stride = shape.stride(mode);
  const Index a = column % stride;
  const Index b = column / stride;
  if (b >= shape.total() / (stride * n)) throw std::domain_error("mode_fiber: column out of range");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(static_cast<Eigen::Index>(n));
  for (Index i = 0; i < n; ++i) {
    out(static_cast<Eigen::Index>(i)) = t.data()(static_cast<Eigen::Index>(a + stride * (i + n * b)));
  }
  return out;
}

}  // namespace kfjlt
