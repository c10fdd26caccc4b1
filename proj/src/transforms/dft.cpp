#include "kfjlt/dft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include <fftw3.h>

namespace kfjlt {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (n, howmany, stride, direction) and
// live for the program's lifetime.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int n, int howmany, int stride, bool inverse) {
    const auto key = std::make_tuple(n, howmany, stride, inverse);
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const std::size_t span = static_cast<std::size_t>(n - 1) * stride + howmany;
    fftw_complex* scratch = fftw_alloc_complex(span);
    fftw_plan plan = fftw_plan_many_dft(1, &n, howmany, scratch, nullptr, stride, 1, scratch,
                                        nullptr, stride, 1, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan == nullptr) throw std::runtime_error("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::tuple<int, int, int, bool>, fftw_plan> plans_;
};

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

// Transforms `howmany` interleaved sequences of length n starting at base.
void execute(Complex* base, Index n, Index howmany, Index stride, bool inverse) {
  fftw_plan plan = PlanCache::instance().get(static_cast<int>(n), static_cast<int>(howmany),
                                             static_cast<int>(stride), inverse);
  fftw_execute_dft(plan, as_fftw(base), as_fftw(base));
}

}  // namespace

void unitary_dft_along_mode(std::span<Complex> data, const Shape& shape, std::size_t mode,
                            bool inverse) {
  if (data.size() != shape.total()) {
    throw std::domain_error("unitary_dft_along_mode: data length does not match shape");
  }
  const Index n = shape.dim(mode);
  if (n == 1) return;
  const Index stride = shape.stride(mode);
  const Index block = stride * n;
  const Index outer = shape.total() / block;
  for (Index b = 0; b < outer; ++b) execute(data.data() + b * block, n, stride, stride, inverse);

  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& z : data) z *= scale;
}

CVector unitary_dft(const Eigen::Ref<const CVector>& x) {
  if (x.size() == 0) throw std::domain_error("unitary_dft: empty input");
  CVector out = x;
  const Index n = static_cast<Index>(out.size());
  unitary_dft_along_mode({out.data(), n}, Shape{n}, 0, false);
  return out;
}

CVector unitary_dft(const Eigen::Ref<const Vector>& x) {
  return unitary_dft(CVector(x.cast<Complex>()));
}

CVector inverse_unitary_dft(const Eigen::Ref<const CVector>& x) {
  if (x.size() == 0) throw std::domain_error("inverse_unitary_dft: empty input");
  CVector out = x;
  const Index n = static_cast<Index>(out.size());
  unitary_dft_along_mode({out.data(), n}, Shape{n}, 0, true);
  return out;
}

}  // namespace kfjlt
