#include <catch2/catch_amalgamated.hpp>

#include <primesums/search.hpp>

using primesums::admissible_lengths;
using primesums::minimal_odd_length;
using primesums::MinLenRecord;
using primesums::PrimeTable;

namespace {

// Brute-force oracle: re-sums the whole window for every candidate length
// instead of using prefix sums.
std::optional<MinLenRecord> naive_minimal_odd_length(const PrimeTable& t, uint64_t n,
                                                     uint64_t k_cap) {
  for (uint64_t k = 3; k <= k_cap; k += 2) {
    uint64_t sum = 0;
    for (uint64_t i = 0; i < k; ++i) sum += t.prime(n + i);
    if (primesums::is_prime(sum)) return MinLenRecord{n, t.prime(n), k, sum};
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("minimal odd lengths for the smallest starts") {
  const auto t = PrimeTable::build(1200);
  REQUIRE(*minimal_odd_length(t, 2, 999) == MinLenRecord{2, 3, 9, 127});
  REQUIRE(*minimal_odd_length(t, 3, 999) == MinLenRecord{3, 5, 3, 23});
  REQUIRE(*minimal_odd_length(t, 4, 999) == MinLenRecord{4, 7, 3, 31});

  // the default cap needs the table sized for it up front
  const auto big = PrimeTable::build(2, 10000);
  REQUIRE(*minimal_odd_length(big, 2) == MinLenRecord{2, 3, 9, 127});
}

TEST_CASE("search agrees with the re-summing brute force") {
  const auto t = PrimeTable::build(2200);
  for (uint64_t n = 2; n <= 2000; ++n) {
    const auto fast = minimal_odd_length(t, n, 199);
    const auto slow = naive_minimal_odd_length(t, n, 199);
    REQUIRE(fast.has_value() == slow.has_value());
    if (fast) REQUIRE(*fast == *slow);
  }
}

TEST_CASE("a too-small cap reports exhaustion, not an error") {
  const auto t = PrimeTable::build(64);
  REQUIRE_FALSE(minimal_odd_length(t, 2, 3).has_value());  // S_3(3) = 15 composite
  REQUIRE(minimal_odd_length(t, 2, 9).has_value());
}

TEST_CASE("n = 1 is rejected with the parity explanation") {
  const auto t = PrimeTable::build(64);
  REQUIRE_THROWS_WITH(minimal_odd_length(t, 1),
                      Catch::Matchers::ContainsSubstring("n = 1") &&
                          Catch::Matchers::ContainsSubstring("even"));
  REQUIRE_THROWS_AS(admissible_lengths(t, 1), std::domain_error);
}

TEST_CASE("search argument errors") {
  const auto t = PrimeTable::build(64);
  REQUIRE_THROWS_AS(minimal_odd_length(t, 2, 4), std::domain_error);
  REQUIRE_THROWS_AS(minimal_odd_length(t, 2, 1), std::domain_error);
  REQUIRE_THROWS_WITH(minimal_odd_length(t, 60, 11),
                      Catch::Matchers::ContainsSubstring("rebuild with headroom"));
  REQUIRE_THROWS_AS(minimal_odd_length(t, 65, 3), std::out_of_range);
  REQUIRE_THROWS_AS(admissible_lengths(t, 2, UINT64_MAX), std::out_of_range);
}

TEST_CASE("admissible lengths for a tiny window") {
  const auto t = PrimeTable::build(16);
  const auto ls = admissible_lengths(t, 2, 9);
  REQUIRE(ls.n == 2);
  REQUIRE(ls.p == 3);
  REQUIRE(ls.window == 9);
  REQUIRE(ls.lengths == std::vector<uint64_t>{9});  // 15, 39, 75 composite; 127 prime
}

TEST_CASE("admissible lengths match an exhaustive check") {
  const auto t = PrimeTable::build(256);
  const auto ls = admissible_lengths(t, 5, 99);
  uint64_t idx = 0;
  for (uint64_t k = 3; k <= 99; k += 2) {
    const bool admissible =
        primesums::is_prime(primesums::consecutive_sum(t, 5, k));
    const bool listed = idx < ls.lengths.size() && ls.lengths[idx] == k;
    REQUIRE(admissible == listed);
    if (listed) ++idx;
  }
  REQUIRE(idx == ls.lengths.size());
}

TEST_CASE("published admissible-length sets for small starts") {
  const auto t = PrimeTable::build(1200);

  const auto k2 = admissible_lengths(t, 2, 999);
  REQUIRE(k2.lengths.size() == 71);
  REQUIRE(std::vector<uint64_t>(k2.lengths.begin(), k2.lengths.begin() + 9) ==
          std::vector<uint64_t>{9, 15, 17, 53, 55, 61, 65, 71, 75});
  REQUIRE(k2.lengths.back() == 977);

  const auto k3 = admissible_lengths(t, 3, 999);
  REQUIRE(k3.lengths.size() == 69);
  REQUIRE(std::vector<uint64_t>(k3.lengths.begin(), k3.lengths.begin() + 9) ==
          std::vector<uint64_t>{3, 5, 11, 17, 25, 35, 37, 73, 95});
  REQUIRE(k3.lengths.back() == 997);

  const auto k4 = admissible_lengths(t, 4, 999);
  REQUIRE(k4.lengths.size() == 99);
  REQUIRE(std::vector<uint64_t>(k4.lengths.begin(), k4.lengths.begin() + 9) ==
          std::vector<uint64_t>{3, 5, 11, 15, 21, 23, 25, 27, 33});
  REQUIRE(k4.lengths.back() == 993);
}
