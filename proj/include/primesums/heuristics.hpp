#pragma once
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include <primesums/search.hpp>

namespace primesums {

namespace detail {

// Kahan-compensated accumulator; products of many near-1 factors are
// evaluated as exp of a compensated sum of log1p terms.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace detail

// Density-model chance that a sum of k consecutive primes starting near p_n
// is prime: 1 / ln(k * p_n).
inline double heuristic_prime_probability(uint64_t k, uint64_t p_n) {
  if (k < 3) throw std::domain_error("heuristic_prime_probability: k must be >= 3");
  if (p_n < 2) throw std::domain_error("heuristic_prime_probability: p_n must be >= 2");
  return 1.0 / std::log(static_cast<double>(k) * static_cast<double>(p_n));
}

// Natural log of the no-solution product below, exact in the log domain.
// The product itself falls out of double range once m is a few thousand
// (it passes e^-745 well before m = 10^4 for small p_n), so large-m trends
// are analyzed through this function.
inline double cramer_no_solution_log(uint64_t p_n, uint64_t m) {
  if (p_n < 2) throw std::domain_error("cramer_no_solution_log: p_n must be >= 2");
  detail::CompensatedSum log_prod;
  for (uint64_t j = 1; j <= m; ++j)
    log_prod.add(std::log1p(-heuristic_prime_probability(2 * j + 1, p_n)));
  return log_prod.sum;
}

// Probability that none of the first m odd lengths 3, 5, ..., 2m+1 yields a
// prime sum, under independent trials with the density above:
// prod_{j=1..m} (1 - 1/ln((2j+1) p_n)). m = 0 is the empty product.
inline double cramer_no_solution_probability(uint64_t p_n, uint64_t m) {
  return std::exp(cramer_no_solution_log(p_n, m));
}

// Partial products for m = 1..m_max in one pass.
inline std::vector<double> cramer_no_solution_series(uint64_t p_n, uint64_t m_max) {
  if (p_n < 2) throw std::domain_error("cramer_no_solution_series: p_n must be >= 2");
  std::vector<double> out;
  out.reserve(m_max);
  detail::CompensatedSum log_prod;
  for (uint64_t j = 1; j <= m_max; ++j) {
    log_prod.add(std::log1p(-heuristic_prime_probability(2 * j + 1, p_n)));
    out.push_back(std::exp(log_prod.sum));
  }
  return out;
}

// Geometric-trial model of the minimal length: each odd length is an
// independent trial with success probability ~ 1/ln p_n, so the trial count
// X has mean ln p_n and k_min = 2X + 1 has mean 2 ln p_n and variance
// 4 (ln p_n)^2.
struct HeuristicReport {
  uint64_t p_n;
  double expected_k_min;                 // 2 ln p_n
  double variance_k_min;                 // 4 (ln p_n)^2 = expected^2
  std::vector<double> no_solution_probs; // Cramer products for m = 1..m_max
};

inline HeuristicReport heuristic_min_length_stats(uint64_t p_n, uint64_t m_max = 100) {
  if (p_n < 3) throw std::domain_error("heuristic_min_length_stats: p_n must be >= 3");
  const double log_p = std::log(static_cast<double>(p_n));
  return {p_n, 2.0 * log_p, 4.0 * log_p * log_p, cramer_no_solution_series(p_n, m_max)};
}

// Descriptive statistics of observed k_min values against the model above.
// The ratios use the geometric mean of the starting primes. The geometric
// fit is reported as a total-variation distance between the observed trial
// counts (k_min - 1) / 2 and a geometric law with the same mean; it is a
// diagnostic, not a verdict.
struct EmpiricalStats {
  uint64_t count = 0;
  double mean_k_min = 0.0;
  double var_k_min = 0.0;  // sample variance, 0 for a single record
  double geo_mean_p = 0.0;
  double mean_over_log_p = 0.0;    // mean(k_min) / ln(geo_mean_p)
  double var_over_log_p_sq = 0.0;  // var(k_min) / ln(geo_mean_p)^2
  double geometric_tv_distance = 0.0;
};

inline EmpiricalStats empirical_min_length_stats(std::span<const MinLenRecord> records) {
  if (records.empty())
    throw std::domain_error("empirical_min_length_stats: empty record set");

  EmpiricalStats s;
  s.count = records.size();

  double sum_k = 0.0, sum_log_p = 0.0;
  std::map<uint64_t, uint64_t> trial_counts;  // X = (k_min - 1) / 2
  for (const auto& r : records) {
    sum_k += static_cast<double>(r.k_min);
    sum_log_p += std::log(static_cast<double>(r.p));
    ++trial_counts[(r.k_min - 1) / 2];
  }
  const double n = static_cast<double>(s.count);
  s.mean_k_min = sum_k / n;
  if (s.count > 1) {
    double ss = 0.0;
    for (const auto& r : records) {
      const double d = static_cast<double>(r.k_min) - s.mean_k_min;
      ss += d * d;
    }
    s.var_k_min = ss / (n - 1.0);
  }
  const double log_p_bar = sum_log_p / n;
  s.geo_mean_p = std::exp(log_p_bar);
  s.mean_over_log_p = s.mean_k_min / log_p_bar;
  s.var_over_log_p_sq = s.var_k_min / (log_p_bar * log_p_bar);

  // TV distance against Geometric(p_hat) on {1, 2, ...} with matched mean.
  const double mean_trials = (s.mean_k_min - 1.0) / 2.0;
  const double p_hat = 1.0 / mean_trials;
  const uint64_t x_max = trial_counts.rbegin()->first;
  double tv = 0.0;
  for (uint64_t x = 1; x <= x_max; ++x) {
    const double geom = p_hat * std::pow(1.0 - p_hat, static_cast<double>(x - 1));
    const auto it = trial_counts.find(x);
    const double emp = it == trial_counts.end() ? 0.0 : static_cast<double>(it->second) / n;
    tv += std::abs(emp - geom);
  }
  tv += std::pow(1.0 - p_hat, static_cast<double>(x_max));  // geometric tail mass
  s.geometric_tv_distance = 0.5 * tv;
  return s;
}

}  // namespace primesums
