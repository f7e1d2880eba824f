#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "shotik/bitstream.hpp"
#include "shotik/codebook.hpp"
#include "shotik/error.hpp"
#include "shotik/utf8.hpp"

namespace shotik {

// An escape emits the escape codeword followed by the raw scalar value in
// this many bits (enough for all of Unicode).
inline constexpr unsigned kEscapeScalarBits = 21;

struct Token {
  enum class Kind { Entry, Escape };

  Kind kind = Kind::Escape;
  std::uint32_t entry = 0;  // index into Codebook::entries
  char32_t cp = 0;
  std::uint64_t codebook_id = 0;

  static Token entry_token(std::uint32_t index, std::uint64_t codebook_id) {
    Token t;
    t.kind = Kind::Entry;
    t.entry = index;
    t.codebook_id = codebook_id;
    return t;
  }

  static Token escape_token(char32_t cp) {
    Token t;
    t.kind = Kind::Escape;
    t.cp = cp;
    return t;
  }
};

struct CompressedMessage {
  std::uint8_t version = 1;
  std::uint64_t codebook_id = 0;
  std::uint64_t bit_count = 0;
  std::vector<std::uint8_t> payload;  // ceil(bit_count / 8) bytes, zero padded
};

struct TokenizerOptions {
  // Bit l set => codebook level l participates in matching.
  unsigned level_mask = 0b11110;

  bool level_enabled(int level) const { return (level_mask >> level) & 1u; }
  static TokenizerOptions without_level(int level) {
    TokenizerOptions o;
    o.level_mask &= ~(1u << level);
    return o;
  }
};

// Greedy hierarchical matcher. At each position the longest codebook token
// wins; spaces merge with their successor through level-2 digrams; anything
// unmatched escapes as a raw code point, so progress is guaranteed.
class Tokenizer {
public:
  explicit Tokenizer(const Codebook& cb, TokenizerOptions options = {})
      : cb_(&cb) {
    nodes_.emplace_back();
    for (std::uint32_t i = 0; i < cb.entries.size(); ++i) {
      const CodebookEntry& e = cb.entries[i];
      if (!options.level_enabled(e.level)) continue;
      std::uint32_t node = 0;
      for (char32_t cp : e.token) {
        const auto it = nodes_[node].next.find(cp);
        if (it != nodes_[node].next.end()) {
          node = it->second;
        } else {
          const auto child = static_cast<std::uint32_t>(nodes_.size());
          nodes_[node].next.emplace(cp, child);
          nodes_.emplace_back();
          node = child;
        }
      }
      nodes_[node].entry = static_cast<std::int32_t>(i);
    }
  }

  std::vector<Token> tokenize(std::u32string_view text) const {
    std::vector<Token> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::int32_t best = -1;
      std::size_t best_len = 0;
      std::uint32_t node = 0;
      for (std::size_t k = pos; k < text.size(); ++k) {
        const auto it = nodes_[node].next.find(text[k]);
        if (it == nodes_[node].next.end()) break;
        node = it->second;
        if (nodes_[node].entry >= 0) {
          best = nodes_[node].entry;
          best_len = k - pos + 1;
        }
      }
      if (best >= 0) {
        out.push_back(Token::entry_token(static_cast<std::uint32_t>(best), cb_->id));
        pos += best_len;
      } else {
        out.push_back(Token::escape_token(text[pos]));
        ++pos;
      }
    }
    return out;
  }

private:
  struct Node {
    std::unordered_map<char32_t, std::uint32_t> next;
    std::int32_t entry = -1;
  };

  const Codebook* cb_;
  std::vector<Node> nodes_;
};

inline std::vector<Token> tokenize(std::u32string_view text, const Codebook& cb,
                                   TokenizerOptions options = {}) {
  return Tokenizer(cb, options).tokenize(text);
}

inline CompressedMessage encode(std::span<const Token> tokens, const Codebook& cb) {
  BitWriter w;
  for (const Token& t : tokens) {
    if (t.kind == Token::Kind::Entry) {
      if (t.codebook_id != cb.id || t.entry >= cb.entries.size())
        throw Error("codebook mismatch");
      w.push_codeword(cb.entries[t.entry].codeword);
    } else {
      w.push_codeword(cb.escape_codeword);
      w.push_uint(static_cast<std::uint32_t>(t.cp), kEscapeScalarBits);
    }
  }
  CompressedMessage msg;
  msg.codebook_id = cb.id;
  msg.bit_count = w.bit_count();
  msg.payload = w.take();
  return msg;
}

// Bit-level decoder over the codebook's prefix code tree. Every failure mode
// of a hostile payload maps to a defined error.
class Decoder {
public:
  explicit Decoder(const Codebook& cb) : cb_(&cb) {
    nodes_.push_back(Node{});
    for (std::uint32_t i = 0; i < cb.entries.size(); ++i)
      insert(cb.entries[i].codeword, static_cast<std::int32_t>(i));
    insert(cb.escape_codeword, kEscapeLeaf);
  }

  std::u32string decode(const CompressedMessage& msg) const {
    if (msg.codebook_id != cb_->id) throw Error("wrong codebook");
    if (msg.payload.size() != (msg.bit_count + 7) / 8)
      throw Error("corrupt payload");
    if (msg.bit_count % 8 != 0) {
      const std::uint8_t pad_mask =
          static_cast<std::uint8_t>(0xFFu >> (msg.bit_count % 8));
      if ((msg.payload.back() & pad_mask) != 0) throw Error("corrupt padding");
    }

    std::u32string out;
    BitReader r(msg.payload, msg.bit_count);
    std::uint32_t node = 0;
    while (!r.done()) {
      const int bit = r.read_bit();
      const std::int32_t next = nodes_[node].child[bit];
      if (next < 0) throw Error("corrupt payload");
      node = static_cast<std::uint32_t>(next);
      const std::int32_t leaf = nodes_[node].entry;
      if (leaf == kNoEntry) continue;
      if (leaf == kEscapeLeaf) {
        std::uint32_t v = 0;
        if (!r.read_uint(kEscapeScalarBits, v)) throw Error("corrupt payload");
        if (!is_scalar_value(static_cast<char32_t>(v)))
          throw Error("corrupt payload");
        out.push_back(static_cast<char32_t>(v));
      } else {
        out += cb_->entries[static_cast<std::uint32_t>(leaf)].token;
      }
      node = 0;
    }
    if (node != 0) throw Error("corrupt payload");  // truncated codeword
    return out;
  }

private:
  static constexpr std::int32_t kNoEntry = -1;
  static constexpr std::int32_t kEscapeLeaf = -2;

  struct Node {
    std::int32_t child[2] = {-1, -1};
    std::int32_t entry = kNoEntry;
  };

  void insert(std::string_view bits, std::int32_t leaf) {
    std::uint32_t node = 0;
    for (char c : bits) {
      const int b = c == '1';
      if (nodes_[node].child[b] < 0) {
        nodes_[node].child[b] = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(Node{});
      }
      node = static_cast<std::uint32_t>(nodes_[node].child[b]);
    }
    nodes_[node].entry = leaf;
  }

  const Codebook* cb_;
  std::vector<Node> nodes_;
};

inline std::u32string decode(const CompressedMessage& msg, const Codebook& cb) {
  return Decoder(cb).decode(msg);
}

inline double compression_ratio(std::uint64_t original_bytes,
                                std::uint64_t compressed_bytes) {
  if (original_bytes == 0) throw Error("empty source");
  return static_cast<double>(compressed_bytes) /
         static_cast<double>(original_bytes) * 100.0;
}

inline double bits_per_char(std::uint64_t char_count, const CompressedMessage& msg) {
  if (char_count == 0) throw Error("empty source");
  return static_cast<double>(msg.bit_count) / static_cast<double>(char_count);
}

inline double bits_per_char(std::u32string_view text, const CompressedMessage& msg) {
  return bits_per_char(text.size(), msg);
}

// Wire format: "SK" magic, version byte, codebook id (8 bytes BE),
// bit count (4 bytes BE), payload. 15 bytes of overhead.
inline constexpr std::uint8_t kWireMagic0 = 0x53;
inline constexpr std::uint8_t kWireMagic1 = 0x4B;
inline constexpr std::size_t kWireHeaderSize = 15;

inline std::vector<std::uint8_t> write_message(const CompressedMessage& msg) {
  if (msg.bit_count > 0xFFFFFFFFull) throw Error("message too large");
  std::vector<std::uint8_t> out;
  out.reserve(kWireHeaderSize + msg.payload.size());
  out.push_back(kWireMagic0);
  out.push_back(kWireMagic1);
  out.push_back(msg.version);
  for (int i = 7; i >= 0; --i)
    out.push_back(static_cast<std::uint8_t>(msg.codebook_id >> (8 * i)));
  for (int i = 3; i >= 0; --i)
    out.push_back(static_cast<std::uint8_t>(msg.bit_count >> (8 * i)));
  out.insert(out.end(), msg.payload.begin(), msg.payload.end());
  return out;
}

inline CompressedMessage read_message(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kWireHeaderSize) throw Error("corrupt payload");
  if (bytes[0] != kWireMagic0 || bytes[1] != kWireMagic1) throw Error("bad magic");
  if (bytes[2] != 1) throw Error("unsupported version");
  CompressedMessage msg;
  msg.version = bytes[2];
  for (int i = 0; i < 8; ++i) msg.codebook_id = (msg.codebook_id << 8) | bytes[3 + i];
  for (int i = 0; i < 4; ++i) msg.bit_count = (msg.bit_count << 8) | bytes[11 + i];
  const std::size_t payload_size = bytes.size() - kWireHeaderSize;
  if (payload_size != (msg.bit_count + 7) / 8) throw Error("corrupt payload");
  msg.payload.assign(bytes.begin() + kWireHeaderSize, bytes.end());
  return msg;
}

}  // namespace shotik
