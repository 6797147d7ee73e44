#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cartan/error.hpp"

namespace cartan {

inline constexpr std::size_t kDefaultPartitionBound = 64;

/// Number of integer partitions of k, p(0) = 1, by Euler's pentagonal number
/// recurrence. `bound` is a soft limit; 400 is the hard limit for 64-bit results.
inline std::uint64_t partition_count(std::size_t k, std::size_t bound = kDefaultPartitionBound) {
  if (k > bound) throw GuardExceeded("partition argument", k, bound);
  if (k > 400) throw PreconditionError("partition_count: p(" + std::to_string(k) + ") overflows 64 bits");
  std::vector<std::int64_t> p(k + 1, 0);
  p[0] = 1;
  for (std::size_t n = 1; n <= k; ++n) {
    __int128 sum = 0;
    for (std::int64_t j = 1;; ++j) {
      const auto g1 = static_cast<std::size_t>(j * (3 * j - 1) / 2);
      if (g1 > n) break;
      const std::int64_t sign = (j % 2 == 1) ? 1 : -1;
      sum += sign * p[n - g1];
      const auto g2 = static_cast<std::size_t>(j * (3 * j + 1) / 2);
      if (g2 <= n) sum += sign * p[n - g2];
    }
    p[n] = static_cast<std::int64_t>(sum);
  }
  return static_cast<std::uint64_t>(p[k]);
}

}  // namespace cartan
