#pragma once
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <primesums/primality.hpp>

namespace primesums {

namespace detail {

// Upper bound on the m-th prime: m (ln m + ln ln m) holds for m >= 6
// (Rosser), a fixed constant covers the head of the sequence.
inline uint64_t nth_prime_bound(uint64_t m) {
  if (m < 6) return 15;
  const double x = static_cast<double>(m);
  return static_cast<uint64_t>(std::ceil(x * (std::log(x) + std::log(std::log(x))))) + 64;
}

// Prefix sums with overflow detection. Result has size v.size() + 1 with a
// leading zero, so sums over [i, j] are two lookups.
inline std::vector<uint64_t> checked_prefix_sums(std::span<const uint64_t> v) {
  std::vector<uint64_t> prefix(v.size() + 1, 0);
  for (size_t i = 0; i < v.size(); ++i) {
    if (__builtin_add_overflow(prefix[i], v[i], &prefix[i + 1]))
      throw std::overflow_error("prime prefix sum exceeds 64 bits at index " +
                                std::to_string(i + 1));
  }
  return prefix;
}

}  // namespace detail

// The first M primes plus their prefix sums. Immutable after construction
// and safe to share across threads. Indexing is 1-based: prime(1) == 2.
class PrimeTable {
 public:
  // Generates the first m + headroom primes with a segmented sieve. The
  // sieve limit comes from nth_prime_bound, so one pass always suffices.
  static PrimeTable build(uint64_t m, uint64_t headroom = 0) {
    if (m < 1) throw std::domain_error("PrimeTable::build: m must be >= 1");
    const uint64_t want = m + headroom;
    PrimeTable t;
    t.primes_.reserve(want);
    t.sieve_first(want, detail::nth_prime_bound(want));
    if (t.primes_.size() != want)
      throw std::runtime_error("PrimeTable::build: sieve bound produced only " +
                               std::to_string(t.primes_.size()) + " of " +
                               std::to_string(want) + " primes");
    t.prefix_ = detail::checked_prefix_sums(t.primes_);
    return t;
  }

  uint64_t count() const { return primes_.size(); }

  // n-th prime, 1-indexed: prime(1) = 2, prime(2) = 3.
  uint64_t prime(uint64_t n) const {
    if (n < 1 || n > primes_.size())
      throw std::out_of_range("PrimeTable::prime: index " + std::to_string(n) +
                              " outside [1, " + std::to_string(primes_.size()) + "]");
    return primes_[n - 1];
  }

  // prefix(i) = prime(1) + ... + prime(i), prefix(0) = 0.
  uint64_t prefix(uint64_t i) const {
    if (i > primes_.size())
      throw std::out_of_range("PrimeTable::prefix: index " + std::to_string(i) +
                              " outside [0, " + std::to_string(primes_.size()) + "]");
    return prefix_[i];
  }

  std::span<const uint64_t> primes() const { return primes_; }

 private:
  PrimeTable() = default;

  // Segmented sieve of Eratosthenes, collecting primes until `want` are
  // found. Only odd numbers are collected; 2 is pushed up front.
  void sieve_first(uint64_t want, uint64_t limit) {
    const uint64_t sqrt_limit = static_cast<uint64_t>(std::sqrt(static_cast<double>(limit)));

    // small primes <= sqrt(limit), by a plain sieve
    std::vector<char> is_small_prime(sqrt_limit + 1, 1);
    for (uint64_t i = 2; i * i <= sqrt_limit; ++i)
      if (is_small_prime[i])
        for (uint64_t j = i * i; j <= sqrt_limit; j += i) is_small_prime[j] = 0;

    constexpr uint64_t segment_size = 1 << 17;
    std::vector<char> sieve(segment_size);
    std::vector<uint64_t> base;  // odd sieving primes seen so far
    std::vector<uint64_t> next;  // their next multiple, relative to the segment

    primes_.push_back(2);
    if (primes_.size() == want) return;

    uint64_t s = 3;  // next candidate sieving prime
    uint64_t n = 3;  // next candidate output prime
    for (uint64_t low = 0; low <= limit; low += segment_size) {
      std::fill(sieve.begin(), sieve.end(), 1);
      const uint64_t high = std::min(low + segment_size - 1, limit);

      for (; s * s <= high; s += 2) {
        if (is_small_prime[s]) {
          base.push_back(s);
          next.push_back(s * s - low);
        }
      }
      for (size_t i = 0; i < base.size(); ++i) {
        uint64_t j = next[i];
        for (const uint64_t step = base[i] * 2; j < segment_size; j += step) sieve[j] = 0;
        next[i] = j - segment_size;
      }
      for (; n <= high; n += 2) {
        if (sieve[n - low]) {
          primes_.push_back(n);
          if (primes_.size() == want) return;
        }
      }
    }
  }

  std::vector<uint64_t> primes_;
  std::vector<uint64_t> prefix_;  // size count() + 1
};

}  // namespace primesums
