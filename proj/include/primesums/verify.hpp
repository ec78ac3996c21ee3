#pragma once
#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <primesums/checkpoint.hpp>
#include <primesums/search.hpp>

namespace primesums {

struct VerifyOptions {
  uint64_t n_start = 1;
  uint64_t n_end = 0;
  uint64_t k_cap = 10001;
  uint64_t chunk_size = 4096;
  unsigned threads = 0;          // 0 = hardware concurrency
  std::string checkpoint_path;   // empty = no checkpointing
  uint64_t stop_after_chunks = 0;  // testing aid: stop after committing this
                                   // many chunks in the current invocation
};

struct VerifyReport {
  uint64_t n_start = 0;
  uint64_t n_end = 0;
  uint64_t k_cap = 0;
  bool parity_excluded = false;  // range contained n = 1
  uint64_t searched = 0;         // starting indices actually searched
  std::vector<uint64_t> counterexamples;  // n with no admissible k <= k_cap
  std::optional<MinLenRecord> max_record;     // largest k_min; ties go to smaller n
  std::optional<MinLenRecord> second_record;  // next in the same order
  uint64_t chunk_count = 0;
  uint64_t chunks_done = 0;
  bool stopped_early = false;
};

// Receives committed per-chunk results, always in ascending chunk order.
// begin() runs once up front; on a resumed run it tells the sink how many
// chunks an earlier invocation already committed and the largest starting
// index they can contain, so a file-backed sink can rewind to that boundary.
class RecordSink {
 public:
  virtual ~RecordSink() = default;
  virtual void begin(uint64_t resumed_chunks, uint64_t max_resumed_n) {
    (void)resumed_chunks;
    (void)max_resumed_n;
  }
  virtual void on_chunk(uint64_t chunk_index, std::span<const MinLenRecord> records) = 0;
};

// Collects everything in memory; handy for tests and small ranges.
class CollectSink final : public RecordSink {
 public:
  void on_chunk(uint64_t, std::span<const MinLenRecord> records) override {
    records_.insert(records_.end(), records.begin(), records.end());
  }
  const std::vector<MinLenRecord>& records() const { return records_; }

 private:
  std::vector<MinLenRecord> records_;
};

namespace detail {

struct ChunkResult {
  std::vector<MinLenRecord> records;
  std::vector<uint64_t> exhausted;
};

// Strict total order used for "largest chain" reporting: larger k_min first,
// then smaller n. Distinct n makes it a total order over records.
inline bool chain_record_before(const MinLenRecord& a, const MinLenRecord& b) {
  return a.k_min > b.k_min || (a.k_min == b.k_min && a.n < b.n);
}

inline ChunkResult search_chunk(const PrimeTable& t, uint64_t lo, uint64_t hi,
                                uint64_t k_cap) {
  ChunkResult out;
  out.records.reserve(hi - lo + 1);
  for (uint64_t n = lo; n <= hi; ++n) {
    if (n == 1) continue;  // parity exclusion, reported at range level
    if (auto rec = minimal_odd_length(t, n, k_cap))
      out.records.push_back(*rec);
    else
      out.exhausted.push_back(n);
  }
  return out;
}

// Top-2 accumulator over chain_record_before.
struct TopRecords {
  std::optional<MinLenRecord> best, second;
  void offer(const MinLenRecord& r) {
    if (!best || chain_record_before(r, *best)) {
      second = best;
      best = r;
    } else if (!second || chain_record_before(r, *second)) {
      second = r;
    }
  }
};

}  // namespace detail

// Exhaustive minimal-length search over n in [n_start, n_end], parallel over
// contiguous chunks of starting indices. Results are committed strictly in
// chunk order, so the record stream and the aggregate report do not depend
// on the thread count. With a checkpoint path the run is resumable: already
// committed chunks are recovered from the file, never recomputed (except one
// chunk re-searched to pin down the runner-up record exactly).
inline VerifyReport verify_range(const PrimeTable& t, const VerifyOptions& opt,
                                 RecordSink* sink = nullptr) {
  if (opt.n_start < 1 || opt.n_end < opt.n_start)
    throw std::domain_error("verify_range: need 1 <= n_start <= n_end");
  if (opt.k_cap < 3 || opt.k_cap % 2 == 0)
    throw std::domain_error("verify_range: k_cap must be odd and >= 3");
  if (opt.chunk_size < 1) throw std::domain_error("verify_range: chunk_size must be >= 1");
  if (opt.n_end > t.count() || opt.k_cap - 1 > t.count() - opt.n_end)
    throw std::out_of_range("verify_range: table of " + std::to_string(t.count()) +
                            " primes too small for n_end = " + std::to_string(opt.n_end) +
                            " with k_cap = " + std::to_string(opt.k_cap));

  const uint64_t span_len = opt.n_end - opt.n_start + 1;
  const uint64_t chunk_count = (span_len + opt.chunk_size - 1) / opt.chunk_size;
  const auto chunk_lo = [&](uint64_t c) { return opt.n_start + c * opt.chunk_size; };
  const auto chunk_hi = [&](uint64_t c) {
    return std::min(opt.n_end, chunk_lo(c) + opt.chunk_size - 1);
  };

  VerifyReport report;
  report.n_start = opt.n_start;
  report.n_end = opt.n_end;
  report.k_cap = opt.k_cap;
  report.parity_excluded = opt.n_start == 1;
  report.chunk_count = chunk_count;

  detail::TopRecords top;
  const auto count_searched = [&](uint64_t c) {
    return chunk_hi(c) - chunk_lo(c) + 1 - (chunk_lo(c) == 1 ? 1 : 0);
  };

  // Recover committed chunks from the checkpoint, if any.
  std::optional<CheckpointFile> checkpoint;
  uint64_t resumed = 0;
  if (!opt.checkpoint_path.empty()) {
    checkpoint.emplace(opt.checkpoint_path,
                       CheckpointParams{opt.n_start, opt.n_end, opt.k_cap, opt.chunk_size});
    resumed = checkpoint->entries().size();
    if (resumed > chunk_count)
      throw std::runtime_error("checkpoint " + opt.checkpoint_path + " corrupt: " +
                               std::to_string(resumed) + " entries for " +
                               std::to_string(chunk_count) + " chunks");

    std::vector<std::pair<uint64_t, MinLenRecord>> chunk_bests;
    for (const auto& e : checkpoint->entries()) {
      report.searched += count_searched(e.chunk);
      report.counterexamples.insert(report.counterexamples.end(), e.exhausted.begin(),
                                    e.exhausted.end());
      if (e.max_k == 0) continue;
      chunk_bests.emplace_back(e.chunk,
                               MinLenRecord{e.max_n, t.prime(e.max_n), e.max_k,
                                            consecutive_sum(t, e.max_n, e.max_k)});
    }
    // Per-chunk maxima miss the case where the top two records share a
    // chunk; re-searching the winning chunk closes the gap.
    if (!chunk_bests.empty()) {
      const auto winner = std::min_element(
          chunk_bests.begin(), chunk_bests.end(), [](const auto& a, const auto& b) {
            return detail::chain_record_before(a.second, b.second);
          });
      for (const auto& [c, rec] : chunk_bests)
        if (c != winner->first) top.offer(rec);
      const auto again = detail::search_chunk(t, chunk_lo(winner->first),
                                              chunk_hi(winner->first), opt.k_cap);
      for (const auto& r : again.records) top.offer(r);
    }
  }

  if (sink) sink->begin(resumed, resumed ? chunk_hi(resumed - 1) : 0);

  uint64_t committed = resumed;
  if (committed < chunk_count) {
    const unsigned threads = opt.threads
                                 ? opt.threads
                                 : std::max(1u, std::thread::hardware_concurrency());
    const uint64_t lookahead = std::max<uint64_t>(4 * threads, 16);

    std::mutex mu;
    std::condition_variable results_ready;
    std::condition_variable space_free;
    std::map<uint64_t, detail::ChunkResult> pending;
    std::atomic<uint64_t> next_chunk{committed};
    std::atomic<bool> stop{false};
    std::exception_ptr worker_error;

    auto worker = [&] {
      try {
        while (!stop.load(std::memory_order_relaxed)) {
          const uint64_t c = next_chunk.fetch_add(1);
          if (c >= chunk_count) return;
          {
            // Bounded lookahead keeps pending results (and memory) bounded
            // while the committer drains them in order.
            std::unique_lock lk(mu);
            space_free.wait(lk, [&] { return stop || c < committed + lookahead; });
            if (stop) return;
          }
          auto result = detail::search_chunk(t, chunk_lo(c), chunk_hi(c), opt.k_cap);
          {
            std::lock_guard lk(mu);
            pending.emplace(c, std::move(result));
          }
          results_ready.notify_all();
        }
      } catch (...) {
        std::lock_guard lk(mu);
        if (!worker_error) worker_error = std::current_exception();
        stop = true;
        results_ready.notify_all();
        space_free.notify_all();
      }
    };

    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);

    uint64_t committed_this_run = 0;
    try {
      for (uint64_t c = committed; c < chunk_count; ++c) {
        detail::ChunkResult result;
        {
          std::unique_lock lk(mu);
          results_ready.wait(lk, [&] { return worker_error || pending.count(c); });
          if (worker_error) break;
          result = std::move(pending.at(c));
          pending.erase(c);
        }

        if (sink) sink->on_chunk(c, result.records);
        if (checkpoint) {
          CheckpointEntry e;
          e.chunk = c;
          e.exhausted = result.exhausted;
          if (!result.records.empty()) {
            const auto best = std::min_element(result.records.begin(), result.records.end(),
                                               detail::chain_record_before);
            e.max_k = best->k_min;
            e.max_n = best->n;
          }
          checkpoint->append(std::move(e));
        }

        for (const auto& r : result.records) top.offer(r);
        report.counterexamples.insert(report.counterexamples.end(),
                                      result.exhausted.begin(), result.exhausted.end());
        report.searched += count_searched(c);

        {
          std::lock_guard lk(mu);
          committed = c + 1;
        }
        space_free.notify_all();
        ++committed_this_run;
        if (opt.stop_after_chunks && committed_this_run >= opt.stop_after_chunks &&
            committed < chunk_count) {
          report.stopped_early = true;
          break;
        }
      }
    } catch (...) {
      stop = true;
      results_ready.notify_all();
      space_free.notify_all();
      throw;
    }

    stop = true;
    results_ready.notify_all();
    space_free.notify_all();
    pool.clear();  // join
    if (worker_error) std::rethrow_exception(worker_error);
  }

  report.chunks_done = committed;
  report.max_record = top.best;
  report.second_record = top.second;
  return report;
}

}  // namespace primesums
