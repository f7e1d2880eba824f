#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shotik/alphabet.hpp"
#include "shotik/codec.hpp"
#include "shotik/codebook.hpp"

namespace shotik {

struct ReportRow {
  std::string source;
  std::uint64_t chars = 0;
  std::uint64_t original_bytes = 0;
  std::uint64_t payload_bytes = 0;
  std::uint64_t wire_bytes = 0;
  std::uint64_t bit_count = 0;
  double bits_per_char = 0.0;
  double ratio_percent = 0.0;  // wire size vs original size
  std::array<std::uint64_t, 4> level_tokens{};
  std::uint64_t escapes = 0;
};

struct ReportAggregate {
  double chars = 0.0;
  double original_bytes = 0.0;
  double payload_bytes = 0.0;
  double wire_bytes = 0.0;
  double bits_per_char = 0.0;
  double ratio_percent = 0.0;
  double escapes = 0.0;
};

struct CompressionReport {
  std::vector<ReportRow> rows;
  ReportAggregate aggregate;
};

// Non-overlapping blocks of at most max_cps code points, cut at word
// boundaries where possible; a single oversized run is cut hard. The blocks
// concatenate back to the input.
inline std::vector<std::u32string> split_blocks(
    std::u32string_view text, std::size_t max_cps = 1000,
    const SymbolTable& table = SymbolTable::builtin()) {
  std::vector<std::u32string> blocks;
  std::u32string current;
  const auto flush = [&] {
    if (!current.empty()) {
      blocks.push_back(std::move(current));
      current.clear();
    }
  };
  for (Run& run : segment(text, table)) {
    std::u32string_view rest = run.text;
    while (!rest.empty()) {
      if (current.size() + rest.size() <= max_cps) {
        current += rest;
        break;
      }
      if (current.empty()) {  // oversized run: hard cut
        current = std::u32string(rest.substr(0, max_cps));
        rest.remove_prefix(max_cps);
      }
      flush();
    }
    if (current.size() == max_cps) flush();
  }
  flush();
  return blocks;
}

// Uniform sample of k block indices, reproducible for a fixed seed; the
// returned indices are sorted so report order stays canonical.
inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k,
                                               std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (k >= n) return idx;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

inline ReportRow measure_block(std::string source, std::u32string_view block,
                               const Tokenizer& tokenizer, const Codebook& cb) {
  ReportRow row;
  row.source = std::move(source);
  row.chars = block.size();
  row.original_bytes = encode_utf8(block).size();
  const std::vector<Token> tokens = tokenizer.tokenize(block);
  const CompressedMessage msg = encode(tokens, cb);
  row.payload_bytes = msg.payload.size();
  row.wire_bytes = kWireHeaderSize + msg.payload.size();
  row.bit_count = msg.bit_count;
  row.bits_per_char = row.chars ? bits_per_char(row.chars, msg) : 0.0;
  row.ratio_percent =
      row.original_bytes ? compression_ratio(row.original_bytes, row.wire_bytes) : 0.0;
  for (const Token& t : tokens) {
    if (t.kind == Token::Kind::Escape) ++row.escapes;
    else ++row.level_tokens[static_cast<std::size_t>(cb.entries[t.entry].level - 1)];
  }
  return row;
}

struct BenchOptions {
  std::size_t block_size = 1000;
  std::size_t max_blocks = 0;  // 0: keep all
  std::uint64_t seed = 0;
  TokenizerOptions tokenizer;
};

inline CompressionReport make_report(
    const Codebook& cb,
    const std::vector<std::pair<std::string, std::u32string>>& sources,
    const BenchOptions& options = {},
    const SymbolTable& table = SymbolTable::builtin()) {
  const Tokenizer tokenizer(cb, options.tokenizer);
  CompressionReport report;
  for (const auto& [name, text] : sources) {
    const auto blocks = split_blocks(text, options.block_size, table);
    std::vector<std::size_t> keep =
        sample_indices(blocks.size(),
                       options.max_blocks ? options.max_blocks : blocks.size(),
                       options.seed);
    for (std::size_t i : keep) {
      report.rows.push_back(measure_block(name + ":" + std::to_string(i),
                                          blocks[i], tokenizer, cb));
    }
  }
  if (!report.rows.empty()) {
    ReportAggregate& agg = report.aggregate;
    for (const ReportRow& r : report.rows) {
      agg.chars += static_cast<double>(r.chars);
      agg.original_bytes += static_cast<double>(r.original_bytes);
      agg.payload_bytes += static_cast<double>(r.payload_bytes);
      agg.wire_bytes += static_cast<double>(r.wire_bytes);
      agg.bits_per_char += r.bits_per_char;
      agg.ratio_percent += r.ratio_percent;
      agg.escapes += static_cast<double>(r.escapes);
    }
    const auto n = static_cast<double>(report.rows.size());
    agg.chars /= n;
    agg.original_bytes /= n;
    agg.payload_bytes /= n;
    agg.wire_bytes /= n;
    agg.bits_per_char /= n;
    agg.ratio_percent /= n;
    agg.escapes /= n;
  }
  return report;
}

// Optional side-by-side numbers from other systems, one value per row.
struct CompetitorColumn {
  std::string name;
  std::vector<double> values;
};

namespace detail {

inline std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace detail

inline std::string format_table(const CompressionReport& report,
                                const std::vector<CompetitorColumn>& competitors = {}) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> head = {"source",   "chars",    "orig_B",
                                   "payload_B", "wire_B",  "bits/char",
                                   "ratio_%",  "l1",       "l2",
                                   "l3",       "l4",       "esc"};
  for (const CompetitorColumn& c : competitors) head.push_back(c.name);
  grid.push_back(head);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const ReportRow& r = report.rows[i];
    std::vector<std::string> row = {
        r.source,
        std::to_string(r.chars),
        std::to_string(r.original_bytes),
        std::to_string(r.payload_bytes),
        std::to_string(r.wire_bytes),
        detail::fixed2(r.bits_per_char),
        detail::fixed2(r.ratio_percent),
        std::to_string(r.level_tokens[0]),
        std::to_string(r.level_tokens[1]),
        std::to_string(r.level_tokens[2]),
        std::to_string(r.level_tokens[3]),
        std::to_string(r.escapes)};
    for (const CompetitorColumn& c : competitors)
      row.push_back(i < c.values.size() ? detail::fixed2(c.values[i]) : "-");
    grid.push_back(std::move(row));
  }
  if (!report.rows.empty()) {
    const ReportAggregate& a = report.aggregate;
    std::vector<std::string> row = {"mean",
                                    detail::fixed2(a.chars),
                                    detail::fixed2(a.original_bytes),
                                    detail::fixed2(a.payload_bytes),
                                    detail::fixed2(a.wire_bytes),
                                    detail::fixed2(a.bits_per_char),
                                    detail::fixed2(a.ratio_percent),
                                    "-",
                                    "-",
                                    "-",
                                    "-",
                                    detail::fixed2(a.escapes)};
    for (std::size_t c = 0; c < competitors.size(); ++c) row.push_back("-");
    grid.push_back(std::move(row));
  }

  std::vector<std::size_t> width(grid[0].size(), 0);
  for (const auto& row : grid)
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], row[c].size());
  std::string out;
  for (const auto& row : grid) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += "  ";
      out += row[c];
      out.append(width[c] - row[c].size(), ' ');
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  }
  return out;
}

inline std::string format_csv(const CompressionReport& report,
                              const std::vector<CompetitorColumn>& competitors = {}) {
  std::string out =
      "source,chars,original_bytes,payload_bytes,wire_bytes,bits_per_char,"
      "ratio_percent,l1,l2,l3,l4,escapes";
  for (const CompetitorColumn& c : competitors) out += "," + c.name;
  out += '\n';
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const ReportRow& r = report.rows[i];
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f", r.bits_per_char, r.ratio_percent);
    out += r.source + "," + std::to_string(r.chars) + "," +
           std::to_string(r.original_bytes) + "," + std::to_string(r.payload_bytes) +
           "," + std::to_string(r.wire_bytes) + "," + buf + "," +
           std::to_string(r.level_tokens[0]) + "," + std::to_string(r.level_tokens[1]) +
           "," + std::to_string(r.level_tokens[2]) + "," +
           std::to_string(r.level_tokens[3]) + "," + std::to_string(r.escapes);
    for (const CompetitorColumn& c : competitors) {
      out += ",";
      if (i < c.values.size()) {
        std::snprintf(buf, sizeof(buf), "%.6f", c.values[i]);
        out += buf;
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace shotik
