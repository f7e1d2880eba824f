#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "shotik/error.hpp"

namespace shotik {

inline constexpr char32_t kMaxScalar = 0x10FFFF;

inline constexpr bool is_scalar_value(char32_t cp) {
  return cp <= kMaxScalar && !(cp >= 0xD800 && cp <= 0xDFFF);
}

// Strict decoder: rejects overlong forms, surrogates, values past U+10FFFF
// and truncated sequences.
inline std::u32string decode_utf8(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  while (i < bytes.size()) {
    const auto fail = [&]() -> Error {
      return Error("invalid UTF-8 at byte " + std::to_string(i));
    };
    const std::uint8_t b0 = static_cast<std::uint8_t>(bytes[i]);
    char32_t cp = 0;
    unsigned n = 0;
    if (b0 < 0x80) {
      cp = b0;
      n = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      n = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      n = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      n = 4;
    } else {
      throw fail();
    }
    if (i + n > bytes.size()) throw fail();
    for (unsigned k = 1; k < n; ++k) {
      const std::uint8_t b = static_cast<std::uint8_t>(bytes[i + k]);
      if ((b & 0xC0) != 0x80) throw fail();
      cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr char32_t kMinForLen[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMinForLen[n] || !is_scalar_value(cp)) throw fail();
    out.push_back(cp);
    i += n;
  }
  return out;
}

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode_utf8(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size() * 3);
  for (char32_t cp : cps) append_utf8(out, cp);
  return out;
}

// Short aliases, mostly for tests and the CLI.
inline std::u32string u32(std::string_view s) { return decode_utf8(s); }
inline std::string u8str(std::u32string_view s) { return encode_utf8(s); }

}  // namespace shotik
