#pragma once
#include <cstdint>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include <primesums/search.hpp>
#include <primesums/sha256.hpp>
#include <primesums/verify.hpp>

namespace primesums {

// One record per line, fixed field order, ascending n:
//   {"n":651511,"p":9788183,"k_min":349,"sum":3417024811}
inline std::string format_record_line(const MinLenRecord& r) {
  return "{\"n\":" + std::to_string(r.n) + ",\"p\":" + std::to_string(r.p) +
         ",\"k_min\":" + std::to_string(r.k_min) + ",\"sum\":" + std::to_string(r.sum) +
         "}\n";
}

// Writes a sorted record stream as JSONL and returns the sha256 of the bytes
// written. Identical inputs give identical bytes.
inline std::string write_records(std::span<const MinLenRecord> records,
                                 const std::string& path) {
  for (size_t i = 1; i < records.size(); ++i)
    if (records[i].n <= records[i - 1].n)
      throw std::domain_error("write_records: records must be ascending by n");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_records: cannot open " + path);
  Sha256 digest;
  for (const auto& r : records) {
    const std::string line = format_record_line(r);
    out << line;
    digest.update(line);
  }
  out.flush();
  if (!out) throw std::runtime_error("write_records: write failed: " + path);
  return digest.hex_digest();
}

inline std::vector<MinLenRecord> read_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_records: cannot open " + path);
  std::vector<MinLenRecord> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw std::runtime_error("read_records: " + path + " line " +
                               std::to_string(line_no) + ": not valid JSON");
    try {
      out.push_back({j.at("n").get<uint64_t>(), j.at("p").get<uint64_t>(),
                     j.at("k_min").get<uint64_t>(), j.at("sum").get<uint64_t>()});
    } catch (const nlohmann::json::exception&) {
      throw std::runtime_error("read_records: " + path + " line " +
                               std::to_string(line_no) + ": bad record fields");
    }
  }
  return out;
}

// Drops every line past the last committed chunk boundary: well-formed
// leading lines with n <= max_n are kept byte-for-byte, everything after
// (including a torn trailing line from a killed run) goes. Rewrites through
// a temp file so the records file is never half-truncated.
inline void truncate_records_file(const std::string& path, uint64_t max_n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {  // nothing on disk yet; leave an empty file
    detail::write_file_atomic(path, "");
    return;
  }
  std::string kept;
  std::string line;
  while (std::getline(in, line)) {
    if (in.eof() && in.fail()) break;  // torn trailing line, no newline
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("n") || !j.at("n").is_number_unsigned()) break;
    if (j.at("n").get<uint64_t>() > max_n) break;
    kept += line;
    kept += '\n';
  }
  in.close();
  detail::write_file_atomic(path, kept);
}

// Streams verify_range output to a JSONL file, flushing at every chunk
// commit so an interrupted run leaves nothing beyond the checkpoint plus at
// most fully-written chunks, which a resume rewinds.
class JsonlRecordWriter final : public RecordSink {
 public:
  explicit JsonlRecordWriter(std::string path) : path_(std::move(path)) {}

  void begin(uint64_t resumed_chunks, uint64_t max_resumed_n) override {
    truncate_records_file(path_, resumed_chunks == 0 ? 0 : max_resumed_n);
    out_.open(path_, std::ios::binary | std::ios::app);
    if (!out_) throw std::runtime_error("cannot open records file " + path_);
  }

  void on_chunk(uint64_t, std::span<const MinLenRecord> records) override {
    for (const auto& r : records) out_ << format_record_line(r);
    out_.flush();
    if (!out_) throw std::runtime_error("write failed: " + path_);
  }

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

}  // namespace primesums
