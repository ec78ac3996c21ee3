#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <primesums/modular.hpp>
#include <primesums/sums.hpp>

using primesums::divisibility_frequency;
using primesums::LengthParity;
using primesums::modular_histogram;
using primesums::PrimeTable;

TEST_CASE("parity law: odd-length sums from n >= 2 are all odd") {
  const auto t = PrimeTable::build(1100);
  const auto h = modular_histogram(t, 2, 2, 999);
  REQUIRE(h.counts == std::vector<uint64_t>{0, 499});
  REQUIRE(h.total() == 499);
}

TEST_CASE("worked example: n = 2, q = 3, window 9") {
  const auto t = PrimeTable::build(16);
  const auto h = modular_histogram(t, 2, 3, 9);
  // sums 15, 39, 75, 127 have residues 0, 0, 0, 1
  REQUIRE(h.counts == std::vector<uint64_t>{3, 1, 0});
}

TEST_CASE("incremental histogram equals one built from scratch") {
  const auto t = PrimeTable::build(1100);
  std::mt19937_64 rng(20240817);
  std::uniform_int_distribution<uint64_t> n_dist(2, 50);
  std::uniform_int_distribution<uint64_t> q_dist(2, 40);
  std::uniform_int_distribution<uint64_t> half_dist(1, 499);

  for (int trial = 0; trial < 25; ++trial) {
    const uint64_t n = n_dist(rng);
    const uint64_t q = q_dist(rng);
    const uint64_t k_max = 2 * half_dist(rng) + 1;
    const auto h = modular_histogram(t, n, q, k_max);

    std::vector<uint64_t> direct(q, 0);
    for (uint64_t k = 3; k <= k_max; k += 2)
      direct[primesums::consecutive_sum(t, n, k) % q]++;
    INFO("n = " << n << ", q = " << q << ", k_max = " << k_max);
    REQUIRE(h.counts == direct);
    REQUIRE(h.total() == (k_max - 1) / 2);
  }
}

TEST_CASE("even-length mode behind the explicit flag") {
  const auto t = PrimeTable::build(32);
  const auto h = modular_histogram(t, 2, 2, 8, LengthParity::even);
  // even-length sums of odd primes are even: k = 2, 4, 6, 8 all land on 0
  REQUIRE(h.counts == std::vector<uint64_t>{4, 0});
  REQUIRE(h.total() == 4);

  std::vector<uint64_t> direct(5, 0);
  for (uint64_t k = 2; k <= 20; k += 2)
    direct[primesums::consecutive_sum(t, 3, k) % 5]++;
  REQUIRE(modular_histogram(t, 3, 5, 20, LengthParity::even).counts == direct);
}

TEST_CASE("histogram argument errors") {
  const auto t = PrimeTable::build(64);
  REQUIRE_THROWS_AS(modular_histogram(t, 1, 3, 9), std::domain_error);
  REQUIRE_THROWS_AS(modular_histogram(t, 2, 1, 9), std::domain_error);
  REQUIRE_THROWS_AS(modular_histogram(t, 2, 3, 8), std::domain_error);   // parity
  REQUIRE_THROWS_AS(modular_histogram(t, 2, 3, 1), std::domain_error);
  REQUIRE_THROWS_AS(modular_histogram(t, 2, 20'000'000, 9), std::domain_error);
  REQUIRE_THROWS_AS(modular_histogram(t, 2, 3, 999), std::out_of_range);
  REQUIRE_THROWS_AS(modular_histogram(t, 2, 2, 7, LengthParity::even),
                    std::domain_error);  // k_max parity vs mode
}

TEST_CASE("divisibility frequency") {
  const auto t = PrimeTable::build(1100);
  REQUIRE(divisibility_frequency(t, 2, 3, 9) == 0.75);
  REQUIRE_THROWS_AS(divisibility_frequency(t, 2, 2, 9), std::domain_error);
  REQUIRE_THROWS_AS(divisibility_frequency(t, 2, 9, 9), std::domain_error);
  REQUIRE_THROWS_AS(divisibility_frequency(t, 2, 15, 9), std::domain_error);

  for (uint64_t l : {3ull, 5ull, 7ull}) {
    const double f = divisibility_frequency(t, 10, l, 999);
    REQUIRE(f >= 0.0);
    REQUIRE(f <= 1.0);
  }
}
