#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace kfjlt {

using Index = std::size_t;
using Complex = std::complex<double>;

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Largest N that oracle paths (materialization, dense reconstruction) will allocate.
inline constexpr Index kDefaultMaterializationCap = Index{1} << 22;

// Raised when an oracle-only operation would exceed its allocation cap or
// enumeration budget.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kfjlt
