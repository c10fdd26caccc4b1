#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kfjlt/types.hpp"

// Property suites shared by `kfjlt verify` and the acceptance binary. Each
// returns a pass flag with a one-line summary of what was measured.
namespace kfjlt::bench {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast paths against materialized operators on `instances` seeded cases
/// cycling through (8), (4,4), (3,4,5), (8,8,8), (16,16).
CheckResult check_oracle_equivalence(Index instances, std::uint64_t seed);

/// Mixing preserves norms on `instances` random cases; the mean of
/// ||Phi x||^2 over `resamples` row draws is within 4 standard errors of
/// ||x||^2 for each of `pairs` fixed (x, signs).
CheckResult check_unitarity(Index instances, std::uint64_t seed);
CheckResult check_unbiasedness(Index pairs, Index resamples, std::uint64_t seed);

/// Exact enumeration for n <= 12 and Monte Carlo up to max_n, plus the
/// quadratic-form identity on `identity_instances` cases.
CheckResult check_concentration(Index max_n, Index trials, Index identity_instances,
                                std::uint64_t seed);

/// Hand RIP cases, the sparse-norm and inner-product consequences on tiny
/// instances, and block-norm bounds on `instances` random cases for a
/// complexified subsampled DFT with n columns per side and block size s.
CheckResult check_rip_block_norms(Index n, Index s, Index instances, std::uint64_t seed);

}  // namespace kfjlt::bench
