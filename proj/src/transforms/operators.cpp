#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "kfjlt/transforms.hpp"

namespace kfjlt {
namespace {

double sampling_scale(Index population, Index m) {
  return std::sqrt(static_cast<double>(population) / static_cast<double>(m));
}

void check_rows(std::span<const Index> rows, Index population, const char* who) {
  if (rows.empty()) throw std::domain_error(std::string(who) + ": at least one row is required");
  for (Index r : rows) {
    if (r >= population) throw std::domain_error(std::string(who) + ": row index out of range");
  }
}

}  // namespace

SignVector::SignVector(std::vector<signed char> signs, std::uint64_t seed, std::uint64_t stream)
    : signs_(std::move(signs)), seed_(seed), stream_(stream) {
  if (signs_.empty()) throw std::domain_error("SignVector: empty");
  for (signed char s : signs_) {
    if (s != 1 && s != -1) throw std::domain_error("SignVector: entries must be +1 or -1");
  }
}

SignVector SignVector::draw(Index n, std::uint64_t master_seed, std::uint64_t stream) {
  Rng rng = Rng::substream(master_seed, stream);
  std::vector<signed char> signs(n);
  for (auto& s : signs) s = static_cast<signed char>(rng.rademacher());
  return SignVector(std::move(signs), master_seed, stream);
}

SignVector SignVector::ones(Index n) { return SignVector(std::vector<signed char>(n, 1)); }

Vector SignVector::apply(const Eigen::Ref<const Vector>& x) const {
  if (static_cast<Index>(x.size()) != size()) {
    throw std::domain_error("SignVector::apply: length mismatch");
  }
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = signs_[static_cast<Index>(i)] * x(i);
  return out;
}

std::vector<Index> sample_rows(Index population, Index m, Replacement mode, Rng& rng) {
  if (population == 0) throw std::domain_error("sample_rows: empty population");
  std::vector<Index> rows(m);
  if (mode == Replacement::with) {
    for (auto& r : rows) r = rng.uniform_index(population);
    return rows;
  }
  if (m > population) {
    throw std::domain_error("sample_rows: cannot draw " + std::to_string(m) +
                            " rows without replacement from " + std::to_string(population));
  }
  // Partial Fisher-Yates over a virtual identity permutation.
  std::unordered_map<Index, Index> swapped;
  auto at = [&](Index i) {
    auto it = swapped.find(i);
    return it == swapped.end() ? i : it->second;
  };
  for (Index i = 0; i < m; ++i) {
    const Index j = i + rng.uniform_index(population - i);
    const Index vi = at(i);
    const Index vj = at(j);
    rows[i] = vj;
    swapped[j] = vi;
  }
  return rows;
}

FjltOperator::FjltOperator(SignVector signs, std::vector<Index> rows)
    : signs_(std::move(signs)), rows_(std::move(rows)) {
  check_rows(rows_, signs_.size(), "FjltOperator");
  scale_ = sampling_scale(signs_.size(), rows_.size());
}

FjltOperator FjltOperator::sample(Index n, Index m, std::uint64_t seed, Replacement mode) {
  SignVector signs = SignVector::draw(n, seed, 1);
  Rng rows_rng = Rng::substream(seed, 2);
  return FjltOperator(std::move(signs), sample_rows(n, m, mode, rows_rng));
}

KfjltOperator::KfjltOperator(Shape shape, std::vector<SignVector> signs, std::vector<Index> rows)
    : shape_(std::move(shape)), signs_(std::move(signs)), rows_(std::move(rows)) {
  if (signs_.size() != shape_.degree()) {
    throw std::domain_error("KfjltOperator: one sign vector per factor is required");
  }
  for (std::size_t k = 0; k < signs_.size(); ++k) {
    if (signs_[k].size() != shape_.dim(k)) {
      throw std::domain_error("KfjltOperator: sign vector length does not match factor size");
    }
  }
  check_rows(rows_, shape_.total(), "KfjltOperator");
  scale_ = sampling_scale(shape_.total(), rows_.size());
}

KfjltOperator KfjltOperator::sample(const Shape& shape, Index m, std::uint64_t seed,
                                    Replacement mode) {
  std::vector<SignVector> signs;
  signs.reserve(shape.degree());
  for (std::size_t k = 0; k < shape.degree(); ++k) {
    signs.push_back(SignVector::draw(shape.dim(k), seed, k + 1));
  }
  Rng rows_rng = Rng::substream(seed, shape.degree() + 1);
  return KfjltOperator(shape, std::move(signs), sample_rows(shape.total(), m, mode, rows_rng));
}

KfjltOperator KfjltOperator::full(const Shape& shape, std::uint64_t seed) {
  std::vector<SignVector> signs;
  signs.reserve(shape.degree());
  for (std::size_t k = 0; k < shape.degree(); ++k) {
    signs.push_back(SignVector::draw(shape.dim(k), seed, k + 1));
  }
  std::vector<Index> rows(shape.total());
  std::iota(rows.begin(), rows.end(), Index{0});
  return KfjltOperator(shape, std::move(signs), std::move(rows));
}

FactoredKfjltOperator::FactoredKfjltOperator(std::vector<FjltOperator> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::domain_error("FactoredKfjltOperator: no factors");
}

FactoredKfjltOperator FactoredKfjltOperator::sample(const Shape& shape,
                                                    std::span<const Index> rows_per_factor,
                                                    std::uint64_t seed, Replacement mode) {
  if (rows_per_factor.size() != shape.degree()) {
    throw std::domain_error("FactoredKfjltOperator: one row count per factor is required");
  }
  const std::size_t d = shape.degree();
  std::vector<FjltOperator> factors;
  factors.reserve(d);
  for (std::size_t k = 0; k < d; ++k) {
    Rng rows_rng = Rng::substream(seed, d + 2 + k);
    factors.emplace_back(SignVector::draw(shape.dim(k), seed, k + 1),
                         sample_rows(shape.dim(k), rows_per_factor[k], mode, rows_rng));
  }
  return FactoredKfjltOperator(std::move(factors));
}

FactoredKfjltOperator FactoredKfjltOperator::with_signs(const KfjltOperator& op,
                                                        std::span<const Index> rows_per_factor,
                                                        std::uint64_t seed, Replacement mode) {
  const std::size_t d = op.degree();
  if (rows_per_factor.size() != d) {
    throw std::domain_error("FactoredKfjltOperator: one row count per factor is required");
  }
  std::vector<FjltOperator> factors;
  factors.reserve(d);
  for (std::size_t k = 0; k < d; ++k) {
    Rng rows_rng = Rng::substream(seed, d + 2 + k);
    factors.emplace_back(op.signs()[k],
                         sample_rows(op.shape().dim(k), rows_per_factor[k], mode, rows_rng));
  }
  return FactoredKfjltOperator(std::move(factors));
}

Shape FactoredKfjltOperator::shape() const {
  std::vector<Index> dims;
  for (const auto& f : factors_) dims.push_back(f.n());
  return Shape(std::move(dims));
}

Index FactoredKfjltOperator::m() const noexcept {
  Index m = 1;
  for (const auto& f : factors_) m *= f.m();
  return m;
}

}  // namespace kfjlt
