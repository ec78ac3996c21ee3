#pragma once
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace primesums {

// Checkpoint file for range verification, JSONL:
//
//   {"n_start":1,"n_end":1000000,"k_cap":1001,"chunk_size":4096}
//   {"chunk":0,"max_k":13,"max_n":2066}
//   {"chunk":1,"max_k":51,"max_n":7092}
//
// Line 1 pins the run parameters; a resume refuses a file whose parameters
// differ. Each further line marks one completed chunk, in chunk order, with
// the chunk's largest k_min and the n achieving it (0/0 when the chunk
// produced no record). Chunks with exhausted starting indices carry an
// extra "exh" array so a resumed run still reports them.

struct CheckpointParams {
  uint64_t n_start = 0;
  uint64_t n_end = 0;
  uint64_t k_cap = 0;
  uint64_t chunk_size = 0;
  bool operator==(const CheckpointParams&) const = default;
};

struct CheckpointEntry {
  uint64_t chunk = 0;
  uint64_t max_k = 0;  // 0 when the chunk produced no record
  uint64_t max_n = 0;
  std::vector<uint64_t> exhausted;
};

namespace detail {

inline std::string checkpoint_header_line(const CheckpointParams& p) {
  return "{\"n_start\":" + std::to_string(p.n_start) +
         ",\"n_end\":" + std::to_string(p.n_end) +
         ",\"k_cap\":" + std::to_string(p.k_cap) +
         ",\"chunk_size\":" + std::to_string(p.chunk_size) + "}";
}

inline std::string checkpoint_entry_line(const CheckpointEntry& e) {
  std::string line = "{\"chunk\":" + std::to_string(e.chunk) +
                     ",\"max_k\":" + std::to_string(e.max_k) +
                     ",\"max_n\":" + std::to_string(e.max_n);
  if (!e.exhausted.empty()) {
    line += ",\"exh\":[";
    for (size_t i = 0; i < e.exhausted.size(); ++i) {
      if (i) line += ',';
      line += std::to_string(e.exhausted[i]);
    }
    line += ']';
  }
  return line + "}";
}

// Whole-file write followed by rename, so readers never see a torn file.
inline void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " over " + path);
}

}  // namespace detail

// Owns one checkpoint file. Loading validates the header against the
// current run parameters and requires entries to be exactly chunks
// 0, 1, 2, ... in order; anything else is reported as corruption with the
// offending line number. Appends rewrite the file atomically.
class CheckpointFile {
 public:
  CheckpointFile(std::string path, const CheckpointParams& params)
      : path_(std::move(path)), header_(detail::checkpoint_header_line(params)) {
    std::ifstream in(path_, std::ios::binary);
    if (!in) {  // fresh run: write the header immediately
      rewrite();
      return;
    }
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded())
        throw std::runtime_error("checkpoint " + path_ + " corrupt at line " +
                                 std::to_string(line_no) + ": not valid JSON");
      if (line_no == 1) {
        CheckpointParams stored;
        try {
          stored.n_start = j.at("n_start").get<uint64_t>();
          stored.n_end = j.at("n_end").get<uint64_t>();
          stored.k_cap = j.at("k_cap").get<uint64_t>();
          stored.chunk_size = j.at("chunk_size").get<uint64_t>();
        } catch (const nlohmann::json::exception&) {
          throw std::runtime_error("checkpoint " + path_ +
                                   " corrupt at line 1: bad header fields");
        }
        if (detail::checkpoint_header_line(stored) != header_)
          throw std::runtime_error(
              "checkpoint " + path_ + " was written by a different run: stored " +
              detail::checkpoint_header_line(stored) + ", expected " + header_);
        continue;
      }
      CheckpointEntry e;
      try {
        e.chunk = j.at("chunk").get<uint64_t>();
        e.max_k = j.at("max_k").get<uint64_t>();
        e.max_n = j.at("max_n").get<uint64_t>();
        if (j.contains("exh")) e.exhausted = j.at("exh").get<std::vector<uint64_t>>();
      } catch (const nlohmann::json::exception&) {
        throw std::runtime_error("checkpoint " + path_ + " corrupt at line " +
                                 std::to_string(line_no) + ": bad entry fields");
      }
      if (e.chunk != entries_.size())
        throw std::runtime_error("checkpoint " + path_ + " corrupt at line " +
                                 std::to_string(line_no) + ": expected chunk " +
                                 std::to_string(entries_.size()) + ", found " +
                                 std::to_string(e.chunk));
      entries_.push_back(std::move(e));
    }
    if (line_no == 0)
      throw std::runtime_error("checkpoint " + path_ + " corrupt at line 1: empty file");
  }

  // Completed chunks, always a contiguous prefix 0..entries().size()-1.
  const std::vector<CheckpointEntry>& entries() const { return entries_; }

  void append(CheckpointEntry e) {
    if (e.chunk != entries_.size())
      throw std::logic_error("checkpoint append out of order");
    entries_.push_back(std::move(e));
    rewrite();
  }

  const std::string& path() const { return path_; }

 private:
  void rewrite() const {
    std::string content = header_ + "\n";
    for (const auto& e : entries_) content += detail::checkpoint_entry_line(e) + "\n";
    detail::write_file_atomic(path_, content);
  }

  std::string path_;
  std::string header_;
  std::vector<CheckpointEntry> entries_;
};

}  // namespace primesums
