#pragma once

#include <numeric>
#include <span>
#include <vector>

#include "kfjlt/types.hpp"

namespace kfjlt::testkit::detail {

// Calls f(span) for every k-subset of [0, n) in lexicographic order.
template <typename F>
void for_each_combination(Index n, Index k, F&& f) {
  if (k > n) return;
  std::vector<Index> idx(k);
  std::iota(idx.begin(), idx.end(), Index{0});
  while (true) {
    f(std::span<const Index>(idx));
    if (k == 0) return;
    Index pos = k;
    while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) return;
    ++idx[pos - 1];
    for (Index j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace kfjlt::testkit::detail
