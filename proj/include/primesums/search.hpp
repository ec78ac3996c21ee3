#pragma once
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <primesums/primality.hpp>
#include <primesums/sums.hpp>

namespace primesums {

// Smallest odd length k >= 3 whose consecutive-prime sum starting at the
// n-th prime is itself prime, together with that sum.
struct MinLenRecord {
  uint64_t n;      // starting index
  uint64_t p;      // starting prime, prime(n)
  uint64_t k_min;  // minimal admissible odd length
  uint64_t sum;    // the prime sum of length k_min
  bool operator==(const MinLenRecord&) const = default;
};

// All admissible odd lengths for one starting prime, up to a window bound.
struct AdmissibleLengths {
  uint64_t n;
  uint64_t p;
  uint64_t window;                // largest k examined (odd, inclusive)
  std::vector<uint64_t> lengths;  // odd k in [3, window] with a prime sum, ascending
};

namespace detail {

inline void check_search_args(const PrimeTable& t, uint64_t n, uint64_t k_hi,
                              const char* who) {
  if (n == 1)
    throw std::domain_error(std::string(who) +
                            ": n = 1 excluded: every odd-length sum starting at 2 is "
                            "even and greater than 2, hence composite");
  if (n < 1) throw std::domain_error(std::string(who) + ": n must be >= 1");
  if (k_hi < 3 || k_hi % 2 == 0)
    throw std::domain_error(std::string(who) + ": length bound must be odd and >= 3");
  if (n > t.count() || k_hi - 1 > t.count() - n)
    throw std::out_of_range(std::string(who) + ": table of " + std::to_string(t.count()) +
                            " primes too small for n = " + std::to_string(n) +
                            " with length bound " + std::to_string(k_hi) +
                            "; rebuild with headroom");
}

}  // namespace detail

// Tests k = 3, 5, 7, ... in order and returns the first record whose sum is
// prime. Empty optional means every odd k <= k_cap gave a composite sum.
inline std::optional<MinLenRecord> minimal_odd_length(const PrimeTable& t, uint64_t n,
                                                      uint64_t k_cap = 10001) {
  detail::check_search_args(t, n, k_cap, "minimal_odd_length");
  const uint64_t base = t.prefix(n - 1);
  for (uint64_t k = 3; k <= k_cap; k += 2) {
    const uint64_t sum = t.prefix(n + k - 1) - base;
    if (is_prime(sum)) return MinLenRecord{n, t.prime(n), k, sum};
  }
  return std::nullopt;
}

// All odd k in [3, window] whose sum is prime, ascending.
inline AdmissibleLengths admissible_lengths(const PrimeTable& t, uint64_t n,
                                            uint64_t window = 999) {
  detail::check_search_args(t, n, window, "admissible_lengths");
  AdmissibleLengths out{n, t.prime(n), window, {}};
  const uint64_t base = t.prefix(n - 1);
  for (uint64_t k = 3; k <= window; k += 2)
    if (is_prime(t.prefix(n + k - 1) - base)) out.lengths.push_back(k);
  return out;
}

}  // namespace primesums
