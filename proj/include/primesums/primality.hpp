#pragma once
#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>

namespace primesums {

// Primes below 100. Used for trial division and as the known head of the
// prime sequence when sanity-checking a freshly built table.
inline constexpr std::array<uint64_t, 25> small_primes = {
    2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
    43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

namespace detail {

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

inline uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// One strong-pseudoprime round for odd n > 2 with n - 1 = d * 2^s.
inline bool strong_probable_prime(uint64_t n, uint64_t a, uint64_t d, int s) {
  a %= n;
  if (a == 0) return true;
  uint64_t x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace detail

// Exact primality for the full 64-bit range: trial division by the primes
// below 100, then strong-pseudoprime rounds with the bases
// {2, 325, 9375, 28178, 450775, 9780504, 1795265022}, a witness set with no
// composite strong pseudoprime below 2^64. Deterministic, not probabilistic.
inline bool is_prime(uint64_t v) {
  if (v < 2) return false;
  for (uint64_t p : small_primes) {
    if (v == p) return true;
    if (v % p == 0) return false;
  }
  const int s = std::countr_zero(v - 1);
  const uint64_t d = (v - 1) >> s;
  for (uint64_t a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull,
                     1795265022ull}) {
    if (!detail::strong_probable_prime(v, a, d, s)) return false;
  }
  return true;
}

}  // namespace primesums
