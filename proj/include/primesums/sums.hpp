#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <primesums/prime_table.hpp>

namespace primesums {

// Sum of the k consecutive primes starting at the n-th: two prefix lookups.
// k = 1 gives the prime itself; even k is allowed for diagnostics.
inline uint64_t consecutive_sum(const PrimeTable& t, uint64_t n, uint64_t k) {
  if (n < 1 || k < 1)
    throw std::domain_error("consecutive_sum: n and k must be >= 1");
  if (n > t.count() || k - 1 > t.count() - n)
    throw std::out_of_range("consecutive_sum: window [" + std::to_string(n) + ", " +
                            std::to_string(n + k - 1) + "] exceeds table of " +
                            std::to_string(t.count()) + " primes");
  return t.prefix(n + k - 1) - t.prefix(n - 1);
}

struct OddSum {
  uint64_t k;
  uint64_t sum;
  bool operator==(const OddSum&) const = default;
};

// All (k, sum) pairs for odd k = 3, 5, ..., k_max, ascending.
// Exactly (k_max - 1) / 2 pairs.
inline std::vector<OddSum> odd_sums_window(const PrimeTable& t, uint64_t n,
                                           uint64_t k_max) {
  if (k_max < 3 || k_max % 2 == 0)
    throw std::domain_error("odd_sums_window: k_max must be odd and >= 3");
  if (n < 1 || n > t.count() || k_max - 1 > t.count() - n)
    throw std::out_of_range("odd_sums_window: window [" + std::to_string(n) + ", " +
                            std::to_string(n + k_max - 1) + "] exceeds table of " +
                            std::to_string(t.count()) + " primes");
  std::vector<OddSum> out;
  out.reserve((k_max - 1) / 2);
  const uint64_t base = t.prefix(n - 1);
  for (uint64_t k = 3; k <= k_max; k += 2)
    out.push_back({k, t.prefix(n + k - 1) - base});
  return out;
}

}  // namespace primesums
