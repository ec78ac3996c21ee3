#pragma once
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include <primesums/heuristics.hpp>
#include <primesums/modular.hpp>
#include <primesums/search.hpp>
#include <primesums/sha256.hpp>
#include <primesums/verify.hpp>

namespace primesums {

// Report floats carry 6 significant digits; full precision lives only in the
// machine-readable JSONL.
inline std::string format_sig6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string iso8601_utc(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// One row per decade of p_n: empirical mean/variance of k_min next to the
// 2·ln p / 4·(ln p)^2 predictions and their ratios.
struct ComparisonRow {
  uint64_t p_lo = 0;  // decade lower bound: 10^d <= p_n < 10^(d+1)
  uint64_t p_hi = 0;
  uint64_t count = 0;
  double mean_k_min = 0.0;
  double predicted_mean = 0.0;  // 2 * mean(ln p)
  double mean_ratio = 0.0;
  double var_k_min = 0.0;
  double predicted_var = 0.0;  // 4 * mean(ln p)^2
  double var_ratio = 0.0;
};

inline std::vector<ComparisonRow> comparison_table(
    std::span<const MinLenRecord> records) {
  if (records.empty())
    throw std::domain_error("comparison_table: no records");

  struct Bucket {
    uint64_t count = 0;
    detail::CompensatedSum k_sum, k_sq_sum, log_p_sum;
  };
  std::vector<Bucket> buckets;  // index = decade exponent d
  for (const auto& r : records) {
    size_t d = 0;
    for (uint64_t v = r.p; v >= 10; v /= 10) ++d;
    if (d >= buckets.size()) buckets.resize(d + 1);
    auto& b = buckets[d];
    ++b.count;
    const double k = static_cast<double>(r.k_min);
    b.k_sum.add(k);
    b.k_sq_sum.add(k * k);
    b.log_p_sum.add(std::log(static_cast<double>(r.p)));
  }

  std::vector<ComparisonRow> rows;
  uint64_t lo = 1;
  for (const auto& b : buckets) {
    if (b.count > 0) {
      ComparisonRow row;
      row.p_lo = lo;
      row.p_hi = lo * 10;
      row.count = b.count;
      const double n = static_cast<double>(b.count);
      row.mean_k_min = b.k_sum.sum / n;
      row.var_k_min =
          b.count < 2
              ? 0.0
              : (b.k_sq_sum.sum - n * row.mean_k_min * row.mean_k_min) /
                    (n - 1.0);
      const double mean_log_p = b.log_p_sum.sum / n;
      row.predicted_mean = 2.0 * mean_log_p;
      row.predicted_var = 4.0 * mean_log_p * mean_log_p;
      row.mean_ratio = row.mean_k_min / row.predicted_mean;
      row.var_ratio = row.var_k_min / row.predicted_var;
      rows.push_back(row);
    }
    lo *= 10;
  }
  return rows;
}

inline std::string comparison_table_text(std::span<const ComparisonRow> rows) {
  std::string out =
      "p range             count  mean k_min  2 ln p   ratio   var k_min  "
      "4 (ln p)^2  ratio\n";
  for (const auto& r : rows) {
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "[%llu, %llu)%*s %6llu  %10s  %7s  %6s  %9s  %10s  %6s\n",
                  static_cast<unsigned long long>(r.p_lo),
                  static_cast<unsigned long long>(r.p_hi),
                  static_cast<int>(
                      std::max<ptrdiff_t>(0, 18 - static_cast<ptrdiff_t>(
                                                     std::to_string(r.p_lo).size() +
                                                     std::to_string(r.p_hi).size() +
                                                     4))),
                  "", static_cast<unsigned long long>(r.count),
                  format_sig6(r.mean_k_min).c_str(),
                  format_sig6(r.predicted_mean).c_str(),
                  format_sig6(r.mean_ratio).c_str(),
                  format_sig6(r.var_k_min).c_str(),
                  format_sig6(r.predicted_var).c_str(),
                  format_sig6(r.var_ratio).c_str());
    out += buf;
  }
  return out;
}

// --- CSV renderers (header row + data rows, LF line ends) ---

inline std::string lengths_csv(const AdmissibleLengths& a) {
  std::string out = "n,p,k\n";
  for (uint64_t k : a.lengths)
    out += std::to_string(a.n) + "," + std::to_string(a.p) + "," +
           std::to_string(k) + "\n";
  return out;
}

inline std::string modular_csv(const ModularHistogram& h) {
  std::string out = "n,q,k_max,residue,count\n";
  const std::string prefix = std::to_string(h.n) + "," + std::to_string(h.q) +
                             "," + std::to_string(h.k_max) + ",";
  for (uint64_t r = 0; r < h.q; ++r)
    out += prefix + std::to_string(r) + "," + std::to_string(h.counts[r]) + "\n";
  return out;
}

inline std::string divisibility_csv(uint64_t n, uint64_t l, uint64_t k_max,
                                    double freq) {
  return "n,l,k_max,freq\n" + std::to_string(n) + "," + std::to_string(l) +
         "," + std::to_string(k_max) + "," + format_sig6(freq) + "\n";
}

inline std::string heuristic_csv(std::span<const HeuristicReport> reports) {
  std::string out = "p_n,expected_k_min,variance_k_min\n";
  for (const auto& r : reports)
    out += std::to_string(r.p_n) + "," + format_sig6(r.expected_k_min) + "," +
           format_sig6(r.variance_k_min) + "\n";
  return out;
}

// --- Run manifest ---

struct ManifestOutput {
  std::string path;
  std::string sha256;
};

struct RunManifest {
  std::string tool = "primesums";
  nlohmann::ordered_json parameters;
  std::chrono::system_clock::time_point started_at;
  std::chrono::system_clock::time_point finished_at;
  std::optional<VerifyReport> outcome;
  std::vector<ManifestOutput> outputs;
};

inline nlohmann::ordered_json record_json(const MinLenRecord& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["p"] = r.p;
  j["k_min"] = r.k_min;
  j["sum"] = r.sum;
  return j;
}

inline nlohmann::ordered_json manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["tool"] = m.tool;
  j["digest_algorithm"] = "sha256";
  j["parameters"] = m.parameters;
  j["started_at"] = iso8601_utc(m.started_at);
  j["finished_at"] = iso8601_utc(m.finished_at);
  if (m.outcome) {
    const VerifyReport& rep = *m.outcome;
    nlohmann::ordered_json o;
    o["n_start"] = rep.n_start;
    o["n_end"] = rep.n_end;
    o["k_cap"] = rep.k_cap;
    o["searched"] = rep.searched;
    o["parity_excluded"] = rep.parity_excluded;
    o["counterexample_count"] = rep.counterexamples.size();
    o["counterexamples"] = nlohmann::ordered_json::array();
    for (uint64_t n : rep.counterexamples) o["counterexamples"].push_back(n);
    if (rep.max_record) o["max_record"] = record_json(*rep.max_record);
    if (rep.second_record) o["second_record"] = record_json(*rep.second_record);
    j["outcome"] = o;
  }
  j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& f : m.outputs) {
    nlohmann::ordered_json e;
    e["path"] = f.path;
    e["sha256"] = f.sha256;
    j["outputs"].push_back(e);
  }
  return j;
}

inline void write_manifest(const RunManifest& m, const std::string& path) {
  detail::write_file_atomic(path, manifest_json(m).dump(2) + "\n");
}

}  // namespace primesums
