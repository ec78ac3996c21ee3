// primesums: search and verification tool for sums of consecutive primes.
//
// Subcommands: verify, minlen, lengths, modular, heuristic, reproduce.
// Exit codes: 0 success; 1 usage or domain error; 2 a verification found a
// counterexample/exhaustion (or a reproduce item failed); 3 internal/IO error.
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <primesums/primesums.hpp>

namespace ps = primesums;

namespace {

// Extra primes generated beyond the largest index a search can touch, so a
// search never exhausts the table (largest observed k_min is 349; the margin
// is ~57x that).
constexpr uint64_t kTableHeadroom = 20000;

// --threads wins; PRIMESUMS_THREADS is the CI-friendly fallback; 0 means
// "let the engine pick" (machine parallelism).
unsigned resolve_threads(unsigned flag_value) {
  if (flag_value) return flag_value;
  if (const char* env = std::getenv("PRIMESUMS_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (!end || *end != '\0' || v == 0 || v > 4096)
      throw std::domain_error("PRIMESUMS_THREADS must be a positive integer, got \"" +
                              std::string(env) + "\"");
    return static_cast<unsigned>(v);
  }
  return 0;
}

unsigned effective_threads(unsigned resolved) {
  return resolved ? resolved : std::max(1u, std::thread::hardware_concurrency());
}

ps::PrimeTable table_for(uint64_t n_hi, uint64_t k_hi) {
  return ps::PrimeTable::build(n_hi + k_hi - 1, kTableHeadroom);
}

std::string human_record(const ps::MinLenRecord& r) {
  return "n = " + std::to_string(r.n) + ", p = " + std::to_string(r.p) +
         ", k_min = " + std::to_string(r.k_min) + ", sum = " + std::to_string(r.sum);
}

void emit_csv(const std::string& csv, const std::string& out_path,
              std::vector<ps::ManifestOutput>* outputs = nullptr) {
  if (out_path.empty()) {
    std::cout << csv;
    return;
  }
  ps::detail::write_file_atomic(out_path, csv);
  size_t rows = 0;
  for (char c : csv) rows += c == '\n';
  if (rows) --rows;  // header
  std::cout << "wrote " << rows << " rows to " << out_path << "\n";
  if (outputs) outputs->push_back({out_path, ps::sha256_hex_of_file(out_path)});
}

struct VerifyArgs {
  uint64_t from = 1;
  uint64_t to = 0;
  uint64_t k_cap = 10001;
  uint64_t chunk_size = 4096;
  unsigned threads = 0;
  std::string checkpoint;
  std::string out;
  std::string manifest;
  uint64_t stop_after_chunks = 0;
};

int print_verify_summary(const ps::VerifyReport& rep) {
  std::cout << "verified n in [" << rep.n_start << ", " << rep.n_end << "], k_cap = "
            << rep.k_cap
            << (rep.parity_excluded ? " (n = 1 excluded: parity obstruction)" : "")
            << "\n";
  std::cout << "searched: " << rep.searched << " starting indices in " << rep.chunks_done
            << " of " << rep.chunk_count << " chunks\n";
  std::cout << "counterexamples: " << rep.counterexamples.size();
  if (!rep.counterexamples.empty()) {
    std::cout << " (n =";
    for (size_t i = 0; i < rep.counterexamples.size() && i < 20; ++i)
      std::cout << " " << rep.counterexamples[i];
    if (rep.counterexamples.size() > 20) std::cout << " ...";
    std::cout << ")";
  }
  std::cout << "\n";
  if (rep.max_record) std::cout << "longest: " << human_record(*rep.max_record) << "\n";
  if (rep.second_record)
    std::cout << "runner-up: " << human_record(*rep.second_record) << "\n";
  if (rep.stopped_early)
    std::cout << "stopped early; resume with the same flags and checkpoint\n";
  return rep.counterexamples.empty() ? 0 : 2;
}

int run_verify(const VerifyArgs& a) {
  ps::RunManifest manifest;
  manifest.started_at = std::chrono::system_clock::now();

  const unsigned threads = resolve_threads(a.threads);
  const auto table = table_for(a.to, a.k_cap);

  manifest.parameters["subcommand"] = "verify";
  manifest.parameters["from"] = a.from;
  manifest.parameters["to"] = a.to;
  manifest.parameters["k_cap"] = a.k_cap;
  manifest.parameters["chunk_size"] = a.chunk_size;
  manifest.parameters["threads"] = effective_threads(threads);
  manifest.parameters["table_primes"] = table.count();

  ps::VerifyOptions opt;
  opt.n_start = a.from;
  opt.n_end = a.to;
  opt.k_cap = a.k_cap;
  opt.chunk_size = a.chunk_size;
  opt.threads = threads;
  opt.checkpoint_path = a.checkpoint;
  opt.stop_after_chunks = a.stop_after_chunks;

  std::unique_ptr<ps::JsonlRecordWriter> writer;
  if (!a.out.empty()) writer = std::make_unique<ps::JsonlRecordWriter>(a.out);

  const ps::VerifyReport rep = ps::verify_range(table, opt, writer.get());

  manifest.finished_at = std::chrono::system_clock::now();
  manifest.outcome = rep;
  if (writer) manifest.outputs.push_back({a.out, ps::sha256_hex_of_file(a.out)});
  if (!a.checkpoint.empty())
    manifest.outputs.push_back({a.checkpoint, ps::sha256_hex_of_file(a.checkpoint)});
  if (!a.manifest.empty()) ps::write_manifest(manifest, a.manifest);

  return print_verify_summary(rep);
}

struct ReproduceArgs {
  unsigned threads = 0;
  std::string checkpoint;
  std::string out;
  std::string manifest;
};

// Re-runs the reference computation: the million-prime verification, its two
// record chains, the first-sum spot checks, and the five published
// admissible-length sets. Prints PASS/FAIL per item.
int run_reproduce(const ReproduceArgs& a) {
  constexpr uint64_t kN = 1'000'000;
  constexpr uint64_t kCap = 1001;
  constexpr uint64_t kWindow = 999;

  ps::RunManifest manifest;
  manifest.started_at = std::chrono::system_clock::now();

  const unsigned threads = resolve_threads(a.threads);
  const auto table = table_for(kN, kCap);

  manifest.parameters["subcommand"] = "reproduce";
  manifest.parameters["from"] = 1;
  manifest.parameters["to"] = kN;
  manifest.parameters["k_cap"] = kCap;
  manifest.parameters["window"] = kWindow;
  manifest.parameters["threads"] = effective_threads(threads);
  manifest.parameters["table_primes"] = table.count();

  bool all_pass = true;
  const auto item = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS  " : "FAIL  ") << name;
    if (!ok && !detail.empty()) std::cout << " [" << detail << "]";
    std::cout << "\n";
    all_pass = all_pass && ok;
  };

  item("p(1000000) = 15485863", table.prime(kN) == 15485863,
       "got " + std::to_string(table.prime(kN)));

  const uint64_t s3 = ps::consecutive_sum(table, kN, 3);
  item("S_3(p(1000000)) = 46457647, prime", s3 == 46457647 && ps::is_prime(s3),
       "got " + std::to_string(s3));

  const auto check_minlen = [&](uint64_t n, uint64_t k, uint64_t sum) {
    const auto rec = ps::minimal_odd_length(table, n, kCap);
    const bool ok = rec && rec->k_min == k && rec->sum == sum;
    item("k_min(n = " + std::to_string(n) + ") = " + std::to_string(k) + ", sum = " +
             std::to_string(sum),
         ok, rec ? "got " + human_record(*rec) : "exhausted");
  };
  check_minlen(2, 9, 127);
  check_minlen(3, 3, 23);

  ps::VerifyOptions opt;
  opt.n_start = 1;
  opt.n_end = kN;
  opt.k_cap = kCap;
  opt.threads = threads;
  opt.checkpoint_path = a.checkpoint;

  std::unique_ptr<ps::JsonlRecordWriter> writer;
  if (!a.out.empty()) writer = std::make_unique<ps::JsonlRecordWriter>(a.out);

  const ps::VerifyReport rep = ps::verify_range(table, opt, writer.get());
  manifest.outcome = rep;

  item("verify n in [2, 1000000], k_cap 1001: every start admits a prime sum",
       rep.counterexamples.empty(),
       std::to_string(rep.counterexamples.size()) + " counterexamples");

  const ps::MinLenRecord longest{651511, 9788183, 349, 3417024811};
  const ps::MinLenRecord runner_up{448696, 6561461, 299, 1962589843};
  item("longest chain: " + human_record(longest),
       rep.max_record && *rep.max_record == longest,
       rep.max_record ? "got " + human_record(*rep.max_record) : "none");
  item("runner-up: " + human_record(runner_up),
       rep.second_record && *rep.second_record == runner_up,
       rep.second_record ? "got " + human_record(*rep.second_record) : "none");

  const auto check_kset = [&](uint64_t n, uint64_t cardinality,
                              std::vector<uint64_t> prefix, uint64_t last) {
    const auto ls = ps::admissible_lengths(table, n, kWindow);
    bool ok = ls.lengths.size() == cardinality && !ls.lengths.empty() &&
              ls.lengths.back() == last && ls.lengths.size() >= prefix.size();
    for (size_t i = 0; ok && i < prefix.size(); ++i) ok = ls.lengths[i] == prefix[i];
    std::string got = "got " + std::to_string(ls.lengths.size()) + " lengths";
    if (!ls.lengths.empty()) {
      got += ": ";
      for (size_t i = 0; i < ls.lengths.size() && i < prefix.size(); ++i)
        got += (i ? "," : "") + std::to_string(ls.lengths[i]);
      got += ",...," + std::to_string(ls.lengths.back());
    }
    item("admissible lengths(n = " + std::to_string(n) + ", window 999): " +
             std::to_string(cardinality) + " values",
         ok, got);
  };
  check_kset(2, 71, {9, 15, 17, 53, 55, 61, 65, 71, 75}, 977);
  check_kset(3, 69, {3, 5, 11, 17, 25, 35, 37, 73, 95}, 997);
  check_kset(4, 99, {3, 5, 11, 15, 21, 23, 25, 27, 33}, 993);
  check_kset(651511, 32, {349, 379, 399, 405, 453, 483, 497, 499, 509}, 999);
  check_kset(448696, 31, {299, 323, 339, 341, 347, 405, 439, 441, 551}, 969);

  manifest.finished_at = std::chrono::system_clock::now();
  if (writer) manifest.outputs.push_back({a.out, ps::sha256_hex_of_file(a.out)});
  if (!a.checkpoint.empty())
    manifest.outputs.push_back({a.checkpoint, ps::sha256_hex_of_file(a.checkpoint)});
  if (!a.manifest.empty()) ps::write_manifest(manifest, a.manifest);

  std::cout << (all_pass ? "all items PASS\n" : "some items FAILED\n");
  return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sums of consecutive primes: verification, record search, heuristics"};
  app.require_subcommand(1);

  // verify
  VerifyArgs va;
  auto* verify = app.add_subcommand(
      "verify", "exhaustively search minimal odd lengths over a range of starting indices");
  verify->add_option("--from", va.from, "first starting index n")->capture_default_str();
  verify->add_option("--to", va.to, "last starting index n")->required();
  verify->add_option("--k-cap", va.k_cap, "largest odd length tried before declaring exhaustion")
      ->capture_default_str();
  verify->add_option("--chunk-size", va.chunk_size, "starting indices per work chunk")
      ->capture_default_str();
  verify->add_option("--threads", va.threads, "worker threads (default: machine parallelism)");
  verify->add_option("--checkpoint", va.checkpoint, "checkpoint file; reuse to resume");
  verify->add_option("--out", va.out, "write per-n records as JSONL");
  verify->add_option("--manifest", va.manifest, "write a run manifest as JSON");
  verify->add_option("--stop-after-chunks", va.stop_after_chunks)->group("");

  // minlen
  struct {
    uint64_t n = 0;
    uint64_t k_cap = 10001;
    bool json = false;
  } ma;
  auto* minlen =
      app.add_subcommand("minlen", "minimal admissible odd length for one starting index");
  minlen->add_option("--n", ma.n, "starting index (n >= 2)")->required();
  minlen->add_option("--k-cap", ma.k_cap, "largest odd length tried")->capture_default_str();
  minlen->add_flag("--json", ma.json, "print the record as one JSON line");

  // lengths
  struct {
    uint64_t n = 0;
    uint64_t window = 999;
    bool json = false;
    std::string out;
  } la;
  auto* lengths =
      app.add_subcommand("lengths", "all admissible odd lengths up to a window bound");
  lengths->add_option("--n", la.n, "starting index (n >= 2)")->required();
  lengths->add_option("--window", la.window, "largest odd length examined")
      ->capture_default_str();
  lengths->add_flag("--json", la.json, "print one JSON object instead of CSV");
  lengths->add_option("--out", la.out, "write the CSV here instead of stdout");

  // modular
  struct {
    uint64_t n = 0;
    uint64_t q = 0;
    uint64_t l = 0;
    uint64_t k_max = 999;
    bool even = false;
    std::string out;
  } da;
  auto* modular = app.add_subcommand(
      "modular", "residue histogram of the sums, or divisibility frequency by a small prime");
  modular->add_option("--n", da.n, "starting index (n >= 2)")->required();
  auto* q_opt = modular->add_option("--q", da.q, "modulus: count residues of sums mod q");
  auto* l_opt =
      modular->add_option("--l", da.l, "odd prime: report how often it divides the sums");
  modular->add_option("--k-max", da.k_max, "largest length examined")->capture_default_str();
  modular->add_flag("--even", da.even, "iterate even lengths instead of odd (with --q)");
  modular->add_option("--out", da.out, "write the CSV here instead of stdout");
  q_opt->excludes(l_opt);

  // heuristic
  struct {
    std::vector<uint64_t> p;
    uint64_t m_max = 100;
    std::string records;
    std::string out;
  } ha;
  auto* heuristic = app.add_subcommand(
      "heuristic", "density-model predictions, and empirical summaries of record files");
  heuristic->add_option("--p", ha.p, "starting prime(s) to evaluate the model at");
  heuristic->add_option("--m-max", ha.m_max, "odd lengths included in the no-solution product")
      ->capture_default_str();
  heuristic->add_option("--records", ha.records, "JSONL record file to summarize");
  heuristic->add_option("--out", ha.out, "write the machine-readable CSV here");

  // reproduce
  ReproduceArgs ra;
  auto* reproduce = app.add_subcommand(
      "reproduce", "re-run the reference results and print PASS/FAIL per item");
  reproduce->add_option("--threads", ra.threads,
                        "worker threads (default: machine parallelism)");
  reproduce->add_option("--checkpoint", ra.checkpoint, "checkpoint file; reuse to resume");
  reproduce->add_option("--out", ra.out, "write per-n records as JSONL");
  reproduce->add_option("--manifest", ra.manifest, "write a run manifest as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (verify->parsed()) return run_verify(va);

    if (minlen->parsed()) {
      const auto table = table_for(ma.n, ma.k_cap);
      const auto rec = ps::minimal_odd_length(table, ma.n, ma.k_cap);
      if (!rec) {
        std::cerr << "primesums: exhausted: no odd k <= " << ma.k_cap
                  << " gives a prime sum for n = " << ma.n << "\n";
        return 2;
      }
      if (ma.json)
        std::cout << ps::format_record_line(*rec);
      else
        std::cout << human_record(*rec) << "\n";
      return 0;
    }

    if (lengths->parsed()) {
      const auto table = table_for(la.n, la.window);
      const auto ls = ps::admissible_lengths(table, la.n, la.window);
      if (la.json) {
        nlohmann::ordered_json j;
        j["n"] = ls.n;
        j["p"] = ls.p;
        j["window"] = ls.window;
        j["lengths"] = ls.lengths;
        std::cout << j.dump() << "\n";
      } else {
        emit_csv(ps::lengths_csv(ls), la.out);
      }
      return 0;
    }

    if (modular->parsed()) {
      if ((da.q == 0) == (da.l == 0))
        throw std::domain_error("modular: give exactly one of --q or --l");
      const auto table = table_for(da.n, da.k_max);
      if (da.q) {
        const auto h = ps::modular_histogram(
            table, da.n, da.q, da.k_max,
            da.even ? ps::LengthParity::even : ps::LengthParity::odd);
        emit_csv(ps::modular_csv(h), da.out);
        uint64_t lo = 0, hi = 0;
        for (uint64_t c : h.counts)
          if (c) {
            lo = lo == 0 ? c : std::min(lo, c);
            hi = std::max(hi, c);
          }
        std::cout << "# " << h.total() << " sums over " << (da.even ? "even" : "odd")
                  << " k; nonempty buckets min " << lo << ", max " << hi
                  << ", max/min = " << ps::format_sig6(static_cast<double>(hi) /
                                                       static_cast<double>(lo))
                  << "\n";
      } else {
        if (da.even)
          throw std::domain_error("modular: --even applies to --q histograms only");
        const double freq = ps::divisibility_frequency(table, da.n, da.l, da.k_max);
        emit_csv(ps::divisibility_csv(da.n, da.l, da.k_max, freq), da.out);
        const auto h = ps::modular_histogram(table, da.n, da.l, da.k_max);
        std::cout << "# " << da.l << " divides " << h.counts[0] << " of " << h.total()
                  << " sums; 1/l = "
                  << ps::format_sig6(1.0 / static_cast<double>(da.l)) << "\n";
      }
      return 0;
    }

    if (heuristic->parsed()) {
      if (ha.p.empty() && ha.records.empty())
        throw std::domain_error("heuristic: give --p and/or --records");
      std::vector<ps::HeuristicReport> reports;
      for (uint64_t p : ha.p)
        reports.push_back(ps::heuristic_min_length_stats(p, ha.m_max));
      for (const auto& r : reports) {
        std::cout << "p = " << r.p_n
                  << ": expected k_min = " << ps::format_sig6(r.expected_k_min)
                  << ", variance = " << ps::format_sig6(r.variance_k_min)
                  << ", P(no solution in first " << ha.m_max
                  << " odd lengths) = " << ps::format_sig6(r.no_solution_probs.back())
                  << "\n";
      }
      if (!ha.records.empty()) {
        const auto records = ps::read_records(ha.records);
        const auto stats = ps::empirical_min_length_stats(records);
        std::cout << "records: " << stats.count << ", mean k_min = "
                  << ps::format_sig6(stats.mean_k_min)
                  << ", variance = " << ps::format_sig6(stats.var_k_min)
                  << ", geometric mean p = " << ps::format_sig6(stats.geo_mean_p) << "\n";
        std::cout << "mean/ln(p) = " << ps::format_sig6(stats.mean_over_log_p)
                  << ", variance/ln(p)^2 = " << ps::format_sig6(stats.var_over_log_p_sq)
                  << ", TV distance to geometric fit = "
                  << ps::format_sig6(stats.geometric_tv_distance) << "\n";
        std::cout << ps::comparison_table_text(ps::comparison_table(records));
      }
      if (!ha.out.empty()) {
        if (reports.empty())
          throw std::domain_error("heuristic: --out needs at least one --p");
        ps::detail::write_file_atomic(ha.out, ps::heuristic_csv(reports));
      }
      return 0;
    }

    if (reproduce->parsed()) return run_reproduce(ra);
  } catch (const std::domain_error& e) {
    std::cerr << "primesums: error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "primesums: error: " << e.what() << "\n";
    return 1;
  } catch (const std::out_of_range& e) {
    std::cerr << "primesums: error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "primesums: error: " << e.what() << "\n";
    return 3;
  }

  return 1;  // unreachable: require_subcommand guarantees a branch above
}
