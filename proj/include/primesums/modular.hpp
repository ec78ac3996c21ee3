#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <primesums/primality.hpp>
#include <primesums/prime_table.hpp>

namespace primesums {

enum class LengthParity { odd, even };

// Residue counts of the consecutive-prime sums starting at the n-th prime,
// taken over all lengths of one parity up to k_max.
struct ModularHistogram {
  uint64_t n;
  uint64_t q;
  uint64_t k_max;
  LengthParity parity;
  std::vector<uint64_t> counts;  // counts[r] = #{k : sum ≡ r (mod q)}

  uint64_t total() const {
    uint64_t t = 0;
    for (uint64_t c : counts) t += c;
    return t;
  }
};

// Builds the histogram incrementally: each step grows the running residue by
// the next two primes mod q, never re-summing the window. Odd mode covers
// k = 3, 5, ..., k_max ((k_max - 1) / 2 lengths); even mode, for exploration,
// covers k = 2, 4, ..., k_max.
inline ModularHistogram modular_histogram(const PrimeTable& t, uint64_t n, uint64_t q,
                                          uint64_t k_max,
                                          LengthParity parity = LengthParity::odd) {
  if (n < 2)
    throw std::domain_error("modular_histogram: n must be >= 2 (n = 1 is the parity-"
                            "degenerate start)");
  if (q < 2) throw std::domain_error("modular_histogram: modulus must be >= 2");
  if (q > 10'000'000)
    throw std::domain_error("modular_histogram: modulus too large for a dense histogram");
  const uint64_t k_first = parity == LengthParity::odd ? 3 : 2;
  if (k_max < k_first || k_max % 2 != k_first % 2)
    throw std::domain_error("modular_histogram: k_max must be >= " +
                            std::to_string(k_first) + " and of the requested parity");
  if (n > t.count() || k_max - 1 > t.count() - n)
    throw std::out_of_range("modular_histogram: window [" + std::to_string(n) + ", " +
                            std::to_string(n + k_max - 1) + "] exceeds table of " +
                            std::to_string(t.count()) + " primes");

  ModularHistogram h{n, q, k_max, parity, std::vector<uint64_t>(q, 0)};
  uint64_t residue = 0;
  for (uint64_t i = 0; i < k_first; ++i) residue = (residue + t.prime(n + i)) % q;
  h.counts[residue]++;
  for (uint64_t k = k_first + 2; k <= k_max; k += 2) {
    residue = (residue + t.prime(n + k - 2) % q + t.prime(n + k - 1) % q) % q;
    h.counts[residue]++;
  }
  return h;
}

// Fraction of odd lengths k in [3, k_max] whose sum is divisible by the odd
// prime l. l = 2 is rejected: for n >= 2 every odd-length sum is odd.
inline double divisibility_frequency(const PrimeTable& t, uint64_t n, uint64_t l,
                                     uint64_t k_max) {
  if (l == 2)
    throw std::domain_error("divisibility_frequency: l = 2 is degenerate (odd-length "
                            "sums of odd primes are always odd)");
  if (!is_prime(l))
    throw std::domain_error("divisibility_frequency: l = " + std::to_string(l) +
                            " is not prime");
  const auto h = modular_histogram(t, n, l, k_max, LengthParity::odd);
  return static_cast<double>(h.counts[0]) / (static_cast<double>(k_max - 1) / 2.0);
}

}  // namespace primesums
