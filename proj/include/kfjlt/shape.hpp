#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kfjlt/types.hpp"

namespace kfjlt {

/// Dimensions (n_1, ..., n_d) of a tensor product space R^{n_1} x ... x R^{n_d}.
///
/// The total size N = n_1 * ... * n_d is computed once at construction;
/// shapes whose product does not fit in Index are rejected.
class Shape {
 public:
  explicit Shape(std::vector<Index> dims);
  Shape(std::initializer_list<Index> dims) : Shape(std::vector<Index>(dims)) {}

  /// Parses "125x125" or "4x4x4".
  static Shape parse(std::string_view text);

  std::size_t degree() const noexcept { return dims_.size(); }
  Index dim(std::size_t k) const { return dims_.at(k); }
  Index total() const noexcept { return total_; }
  std::span<const Index> dims() const noexcept { return dims_; }

  /// Product of the dims strictly before mode k (the linear stride of mode k).
  Index stride(std::size_t k) const;

  /// The shape with mode k removed; requires degree() >= 2.
  Shape without(std::size_t k) const;

  std::string to_string() const;

  friend bool operator==(const Shape&, const Shape&) = default;

 private:
  std::vector<Index> dims_;
  Index total_ = 1;
};

/// Zero-based coordinates (i_1, ..., i_d) into a Shape.
using MultiIndex = std::vector<Index>;

/// i = sum_k i_k * prod_{l<k} n_l (mode 1 varies fastest).
Index linear_index(const Shape& shape, std::span<const Index> coords);

/// Inverse of linear_index.
MultiIndex multi_index(const Shape& shape, Index i);

/// Allocation-free form of multi_index; out.size() must equal shape.degree().
void multi_index_into(const Shape& shape, Index i, std::span<Index> out);

}  // namespace kfjlt
