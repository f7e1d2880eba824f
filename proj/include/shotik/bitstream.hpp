#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace shotik {

// MSB-first bit packing: the first bit written lands in bit 7 of byte 0.
// Trailing pad bits in the last byte are zero.
class BitWriter {
public:
  void push_bit(bool b) {
    if ((nbits_ & 7) == 0) bytes_.push_back(0);
    if (b) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (nbits_ & 7));
    ++nbits_;
  }

  void push_codeword(std::string_view bits01) {
    for (char c : bits01) push_bit(c == '1');
  }

  void push_uint(std::uint32_t value, unsigned nbits) {
    for (unsigned i = nbits; i-- > 0;) push_bit((value >> i) & 1u);
  }

  std::uint64_t bit_count() const { return nbits_; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

private:
  std::vector<std::uint8_t> bytes_;
  std::uint64_t nbits_ = 0;
};

class BitReader {
public:
  BitReader(std::span<const std::uint8_t> bytes, std::uint64_t bit_count)
      : bytes_(bytes), bit_count_(bit_count) {}

  std::uint64_t remaining() const { return bit_count_ - pos_; }
  bool done() const { return pos_ == bit_count_; }

  // -1 once exhausted.
  int read_bit() {
    if (pos_ >= bit_count_) return -1;
    const int b = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1;
    ++pos_;
    return b;
  }

  bool read_uint(unsigned nbits, std::uint32_t& out) {
    if (remaining() < nbits) return false;
    std::uint32_t v = 0;
    for (unsigned i = 0; i < nbits; ++i)
      v = (v << 1) | static_cast<std::uint32_t>(read_bit());
    out = v;
    return true;
  }

private:
  std::span<const std::uint8_t> bytes_;
  std::uint64_t bit_count_;
  std::uint64_t pos_ = 0;
};

}  // namespace shotik
