#include <cmath>
#include <numbers>
#include <string>

#include "kfjlt/dft.hpp"
#include "kfjlt/transforms.hpp"

namespace kfjlt {
namespace {

void check_cap(Index n, Index cap) {
  if (n > cap) {
    throw ResourceError("materialize_operator: N = " + std::to_string(n) +
                        " exceeds the materialization cap " + std::to_string(cap));
  }
}

// Multiplies every mode-`mode` fiber entrywise by the sign vector.
void apply_signs_along_mode(std::span<Complex> data, const Shape& shape, std::size_t mode,
                            const SignVector& signs) {
  const Index n = shape.dim(mode);
  const Index stride = shape.stride(mode);
  const Index block = stride * n;
  for (Index base = 0; base < data.size(); base += block) {
    for (Index i = 0; i < n; ++i) {
      if (signs[i] > 0) continue;
      Complex* fiber = data.data() + base + i * stride;
      for (Index a = 0; a < stride; ++a) fiber[a] = -fiber[a];
    }
  }
}

CVector kron_product(const CVector& inner, const CVector& outer) {
  CVector out(inner.size() * outer.size());
  for (Eigen::Index b = 0; b < outer.size(); ++b) {
    out.segment(b * inner.size(), inner.size()) = inner * outer(b);
  }
  return out;
}

}  // namespace

Complex dft_entry(Index n, Index i, Index j) {
  const Index phase = (i * j) % n;
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(n);
  return std::polar(1.0 / std::sqrt(static_cast<double>(n)), angle);
}

CVector mix_factor(const Eigen::Ref<const Vector>& xk, const SignVector& signs) {
  if (static_cast<Index>(xk.size()) != signs.size()) {
    throw std::domain_error("mix_factor: vector length does not match sign vector length");
  }
  return unitary_dft(signs.apply(xk));
}

CMatrix mix_columns(const Eigen::Ref<const Matrix>& a, const SignVector& signs) {
  if (static_cast<Index>(a.rows()) != signs.size()) {
    throw std::domain_error("mix_columns: row count does not match sign vector length");
  }
  CMatrix out(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) out.col(j) = mix_factor(a.col(j), signs);
  return out;
}

CVector kron_mix(const Shape& shape, std::span<const SignVector> signs,
                 const Eigen::Ref<const CVector>& x) {
  if (static_cast<Index>(x.size()) != shape.total()) {
    throw std::domain_error("kron_mix: vector length does not match shape");
  }
  if (signs.size() != shape.degree()) {
    throw std::domain_error("kron_mix: one sign vector per mode is required");
  }
  CVector data = x;
  std::span<Complex> view(data.data(), shape.total());
  for (std::size_t k = 0; k < shape.degree(); ++k) {
    if (signs[k].size() != shape.dim(k)) {
      throw std::domain_error("kron_mix: sign vector length does not match mode size");
    }
    apply_signs_along_mode(view, shape, k, signs[k]);
    unitary_dft_along_mode(view, shape, k);
  }
  return data;
}

CVector fjlt_apply(const FjltOperator& op, const Eigen::Ref<const Vector>& x) {
  if (static_cast<Index>(x.size()) != op.n()) {
    throw std::domain_error("fjlt_apply: vector length does not match operator");
  }
  const CVector mixed = mix_factor(x, op.signs());
  CVector out(static_cast<Eigen::Index>(op.m()));
  const auto rows = op.rows();
  for (Index r = 0; r < rows.size(); ++r) {
    out(static_cast<Eigen::Index>(r)) = op.scale() * mixed(static_cast<Eigen::Index>(rows[r]));
  }
  return out;
}

CVector kfjlt_apply_kron(const KfjltOperator& op, const KroneckerVector& v) {
  if (!(v.shape() == op.shape())) {
    throw std::domain_error("kfjlt_apply_kron: vector shape " + v.shape().to_string() +
                            " does not match operator shape " + op.shape().to_string());
  }
  const std::size_t d = op.degree();
  std::vector<CVector> mixed;
  mixed.reserve(d);
  for (std::size_t k = 0; k < d; ++k) mixed.push_back(mix_factor(v.factor(k), op.signs()[k]));

  const auto dims = op.shape().dims();
  const auto rows = op.rows();
  CVector out(static_cast<Eigen::Index>(rows.size()));
  for (Index r = 0; r < rows.size(); ++r) {
    Index rest = rows[r];
    Complex value = mixed[0](static_cast<Eigen::Index>(rest % dims[0]));
    rest /= dims[0];
    for (std::size_t k = 1; k < d; ++k) {
      value *= mixed[k](static_cast<Eigen::Index>(rest % dims[k]));
      rest /= dims[k];
    }
    out(static_cast<Eigen::Index>(r)) = op.scale() * value;
  }
  return out;
}

CVector kfjlt_apply_dense(const KfjltOperator& op, const Eigen::Ref<const CVector>& x) {
  if (static_cast<Index>(x.size()) != op.shape().total()) {
    throw std::domain_error("kfjlt_apply_dense: vector length does not match operator");
  }
  const CVector mixed = kron_mix(op.shape(), op.signs(), x);
  const auto rows = op.rows();
  CVector out(static_cast<Eigen::Index>(rows.size()));
  for (Index r = 0; r < rows.size(); ++r) {
    out(static_cast<Eigen::Index>(r)) = op.scale() * mixed(static_cast<Eigen::Index>(rows[r]));
  }
  return out;
}

CVector kfjlt_apply_dense(const KfjltOperator& op, const Eigen::Ref<const Vector>& x) {
  return kfjlt_apply_dense(op, CVector(x.cast<Complex>()));
}

CVector factored_apply(const FactoredKfjltOperator& op, const KroneckerVector& v) {
  if (!(v.shape() == op.shape())) {
    throw std::domain_error("factored_apply: vector shape does not match operator shape");
  }
  CVector acc = fjlt_apply(op.factors()[0], v.factor(0));
  for (std::size_t k = 1; k < op.degree(); ++k) {
    acc = kron_product(acc, fjlt_apply(op.factors()[k], v.factor(k)));
  }
  return acc;
}

double distortion_ratio(double embedded_norm_sq, double original_norm_sq) {
  if (!(original_norm_sq > 0.0)) {
    throw std::domain_error("distortion_ratio: undefined for a zero original norm");
  }
  return std::abs(embedded_norm_sq - original_norm_sq) / original_norm_sq;
}

CMatrix materialize_operator(const FjltOperator& op, Index cap) {
  check_cap(op.n(), cap);
  const auto rows = op.rows();
  CMatrix out(static_cast<Eigen::Index>(op.m()), static_cast<Eigen::Index>(op.n()));
  for (Index r = 0; r < rows.size(); ++r) {
    for (Index j = 0; j < op.n(); ++j) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
          op.scale() * dft_entry(op.n(), rows[r], j) * static_cast<double>(op.signs()[j]);
    }
  }
  return out;
}

CMatrix materialize_operator(const KfjltOperator& op, Index cap) {
  const Shape& shape = op.shape();
  const Index n_total = shape.total();
  check_cap(n_total, cap);
  const std::size_t d = shape.degree();
  const auto rows = op.rows();

  CMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n_total));
  MultiIndex row_index(d);
  MultiIndex col_index(d);
  for (Index r = 0; r < rows.size(); ++r) {
    multi_index_into(shape, rows[r], row_index);
    for (Index j = 0; j < n_total; ++j) {
      multi_index_into(shape, j, col_index);
      Complex value = op.scale();
      for (std::size_t k = 0; k < d; ++k) {
        value *= dft_entry(shape.dim(k), row_index[k], col_index[k]) *
                 static_cast<double>(op.signs()[k][col_index[k]]);
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = value;
    }
  }
  return out;
}

CMatrix materialize_operator(const FactoredKfjltOperator& op, Index cap) {
  const Shape in_shape = op.shape();
  check_cap(in_shape.total(), cap);
  std::vector<Index> out_dims;
  std::vector<CMatrix> blocks;
  for (const auto& f : op.factors()) {
    out_dims.push_back(f.m());
    blocks.push_back(materialize_operator(f, cap));
  }
  const Shape out_shape(std::move(out_dims));
  const std::size_t d = op.degree();

  CMatrix out(static_cast<Eigen::Index>(out_shape.total()),
              static_cast<Eigen::Index>(in_shape.total()));
  MultiIndex row_index(d);
  MultiIndex col_index(d);
  for (Index r = 0; r < out_shape.total(); ++r) {
    multi_index_into(out_shape, r, row_index);
    for (Index j = 0; j < in_shape.total(); ++j) {
      multi_index_into(in_shape, j, col_index);
      Complex value = 1.0;
      for (std::size_t k = 0; k < d; ++k) {
        value *= blocks[k](static_cast<Eigen::Index>(row_index[k]),
                           static_cast<Eigen::Index>(col_index[k]));
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = value;
    }
  }
  return out;
}

}  // namespace kfjlt
