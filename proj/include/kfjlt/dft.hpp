#pragma once

#include <span>

#include "kfjlt/shape.hpp"
#include "kfjlt/types.hpp"

namespace kfjlt {

/// Unitary DFT: out(j) = n^{-1/2} sum_k x(k) exp(-2 pi i j k / n).
CVector unitary_dft(const Eigen::Ref<const CVector>& x);
CVector unitary_dft(const Eigen::Ref<const Vector>& x);

/// Inverse of unitary_dft (kernel exp(+2 pi i j k / n), same 1/sqrt(n) scale).
CVector inverse_unitary_dft(const Eigen::Ref<const CVector>& x);

/// In-place unitary DFT of every mode-`mode` fiber of a tensor stored in
/// linear_index order.
void unitary_dft_along_mode(std::span<Complex> data, const Shape& shape, std::size_t mode,
                            bool inverse = false);

}  // namespace kfjlt
