#include "kfjlt/rng.hpp"

#include <limits>

namespace kfjlt {

Index Rng::uniform_index(Index n) {
  if (n == 0) throw std::domain_error("Rng::uniform_index: empty range");
  // Rejection sampling keeps the draw exactly uniform.
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return static_cast<Index>(r % bound);
}

}  // namespace kfjlt
