#include "kfjlt/shape.hpp"

#include <charconv>
#include <limits>
#include <sstream>

namespace kfjlt {

Shape::Shape(std::vector<Index> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) {
    throw std::domain_error("Shape: at least one dimension is required");
  }
  for (Index n : dims_) {
    if (n == 0) {
      throw std::domain_error("Shape: every dimension must be positive");
    }
    if (total_ > std::numeric_limits<Index>::max() / n) {
      throw std::domain_error("Shape: product of dimensions overflows the index type");
    }
    total_ *= n;
  }
}

Shape Shape::parse(std::string_view text) {
  std::vector<Index> dims;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = text.find('x', pos);
    const std::string_view token =
        text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    Index value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
      throw std::invalid_argument("Shape: cannot parse '" + std::string(text) +
                                  "' (expected e.g. 125x125)");
    }
    dims.push_back(value);
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return Shape(std::move(dims));
}

Index Shape::stride(std::size_t k) const {
  if (k >= dims_.size()) throw std::domain_error("Shape::stride: mode out of range");
  Index s = 1;
  for (std::size_t l = 0; l < k; ++l) s *= dims_[l];
  return s;
}

Shape Shape::without(std::size_t k) const {
  if (k >= dims_.size()) throw std::domain_error("Shape::without: mode out of range");
  if (dims_.size() < 2) throw std::domain_error("Shape::without: cannot remove the only mode");
  std::vector<Index> rest;
  rest.reserve(dims_.size() - 1);
  for (std::size_t l = 0; l < dims_.size(); ++l) {
    if (l != k) rest.push_back(dims_[l]);
  }
  return Shape(std::move(rest));
}

std::string Shape::to_string() const {
  std::ostringstream out;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (k) out << 'x';
    out << dims_[k];
  }
  return out.str();
}

Index linear_index(const Shape& shape, std::span<const Index> coords) {
  if (coords.size() != shape.degree()) {
    throw std::domain_error("linear_index: multi-index length does not match shape degree");
  }
  Index i = 0;
  Index stride = 1;
  for (std::size_t k = 0; k < coords.size(); ++k) {
    if (coords[k] >= shape.dim(k)) {
      throw std::domain_error("linear_index: coordinate out of bounds");
    }
    i += coords[k] * stride;
    stride *= shape.dim(k);
  }
  return i;
}

void multi_index_into(const Shape& shape, Index i, std::span<Index> out) {
  if (i >= shape.total()) throw std::domain_error("multi_index: linear index out of range");
  if (out.size() != shape.degree()) {
    throw std::domain_error("multi_index: output length does not match shape degree");
  }
  const auto dims = shape.dims();
  for (std::size_t k = 0; k < dims.size(); ++k) {
    out[k] = i % dims[k];
    i /= dims[k];
  }
}

MultiIndex multi_index(const Shape& shape, Index i) {
  MultiIndex out(shape.degree());
  multi_index_into(shape, i, out);
  return out;
}

}  // namespace kfjlt
