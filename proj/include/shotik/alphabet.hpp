#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "shotik/error.hpp"
#include "shotik/utf8.hpp"

namespace shotik {

// Phonological role of a code point. Every scalar value maps to exactly one
// role; anything not covered by a table entry is Other.
enum class Role { Vowel, Consonant, Virama, Space, Digit, Other };

inline const char* role_name(Role r) {
  switch (r) {
    case Role::Vowel: return "vowel";
    case Role::Consonant: return "consonant";
    case Role::Virama: return "virama";
    case Role::Space: return "space";
    case Role::Digit: return "digit";
    case Role::Other: return "other";
  }
  return "other";
}

inline std::optional<Role> role_from_name(std::string_view s) {
  if (s == "vowel") return Role::Vowel;
  if (s == "consonant") return Role::Consonant;
  if (s == "virama") return Role::Virama;
  if (s == "space") return Role::Space;
  if (s == "digit") return Role::Digit;
  if (s == "other") return Role::Other;
  return std::nullopt;
}

// Maps code points to roles via sorted, non-overlapping intervals plus
// single-code-point overrides. Overrides win over intervals; unmapped code
// points are Other.
//
// Loadable from a UTF-8 text file, one mapping per line:
//
//   <hex-lo>[-<hex-hi>]<TAB><role>
//
// where a line without a range is an override and `#` starts a comment.
class SymbolTable {
public:
  SymbolTable() = default;

  void map_range(char32_t lo, char32_t hi, Role role) {
    if (lo > hi) throw Error("symbol table: empty range");
    Range r{lo, hi, role};
    auto it = std::lower_bound(
        ranges_.begin(), ranges_.end(), r,
        [](const Range& a, const Range& b) { return a.lo < b.lo; });
    if (it != ranges_.end() && it->lo <= hi)
      throw Error("symbol table: overlapping range");
    if (it != ranges_.begin() && std::prev(it)->hi >= lo)
      throw Error("symbol table: overlapping range");
    ranges_.insert(it, r);
  }

  void map_codepoint(char32_t cp, Role role) { overrides_[cp] = role; }

  Role classify(char32_t cp) const {
    if (auto it = overrides_.find(cp); it != overrides_.end()) return it->second;
    auto it = std::upper_bound(
        ranges_.begin(), ranges_.end(), cp,
        [](char32_t v, const Range& r) { return v < r.lo; });
    if (it != ranges_.begin()) {
      --it;
      if (cp >= it->lo && cp <= it->hi) return it->role;
    }
    return Role::Other;
  }

  // Bengali block plus ASCII. Independent vowels and dependent vowel signs
  // both count as Vowel so hyphenation sees consonant+matra as a CV core.
  static const SymbolTable& builtin() {
    static const SymbolTable t = make_builtin();
    return t;
  }

  static SymbolTable parse(std::string_view text) {
    SymbolTable t;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t eol = text.find('\n', pos);
      std::string_view line = (eol == std::string_view::npos)
                                  ? text.substr(pos)
                                  : text.substr(pos, eol - pos);
      pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty() || line.front() == '#') continue;
      const auto bad = [&]() -> Error {
        return Error("symbol table: malformed line " + std::to_string(lineno));
      };
      const std::size_t tab = line.find('\t');
      if (tab == std::string_view::npos) throw bad();
      std::string_view cps = line.substr(0, tab);
      const auto role = role_from_name(line.substr(tab + 1));
      if (!role) throw bad();
      const std::size_t dash = cps.find('-');
      if (dash == std::string_view::npos) {
        t.map_codepoint(parse_hex(cps, bad), *role);
      } else {
        const char32_t lo = parse_hex(cps.substr(0, dash), bad);
        const char32_t hi = parse_hex(cps.substr(dash + 1), bad);
        if (lo > hi) throw bad();
        t.map_range(lo, hi, *role);
      }
    }
    return t;
  }

  static SymbolTable load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("symbol table: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

private:
  struct Range {
    char32_t lo, hi;
    Role role;
  };

  template <typename MakeError>
  static char32_t parse_hex(std::string_view s, const MakeError& bad) {
    if (s.empty() || s.size() > 6) throw bad();
    char32_t v = 0;
    for (char c : s) {
      v <<= 4;
      if (c >= '0' && c <= '9') v |= static_cast<char32_t>(c - '0');
      else if (c >= 'a' && c <= 'f') v |= static_cast<char32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') v |= static_cast<char32_t>(c - 'A' + 10);
      else throw bad();
    }
    if (!is_scalar_value(v)) throw bad();
    return v;
  }

  static SymbolTable make_builtin() {
    SymbolTable t;
    t.map_codepoint(0x0020, Role::Space);
    t.map_range(0x0030, 0x0039, Role::Digit);
    t.map_range(0x0041, 0x005A, Role::Consonant);
    t.map_range(0x0061, 0x007A, Role::Consonant);
    for (char32_t cp : {U'a', U'e', U'i', U'o', U'u', U'A', U'E', U'I', U'O', U'U'})
      t.map_codepoint(cp, Role::Vowel);
    t.map_range(0x0985, 0x0994, Role::Vowel);      // independent vowels
    t.map_range(0x0995, 0x09B9, Role::Consonant);  // consonants
    t.map_range(0x09BE, 0x09CC, Role::Vowel);      // dependent vowel signs
    t.map_codepoint(0x09CD, Role::Virama);         // hasant
    t.map_range(0x09DC, 0x09DF, Role::Consonant);
    t.map_range(0x09E6, 0x09EF, Role::Digit);      // Bengali digits
    return t;
  }

  std::vector<Range> ranges_;
  std::unordered_map<char32_t, Role> overrides_;
};

inline Role classify(char32_t cp, const SymbolTable& table) {
  return table.classify(cp);
}

// Anusvara, visarga and candrabindu are written as part of a word but carry
// role Other; they ride along with the preceding unit.
inline bool is_word_modifier(char32_t cp) {
  return cp >= 0x0981 && cp <= 0x0983;
}

inline bool is_word_codepoint(char32_t cp, const SymbolTable& table) {
  switch (table.classify(cp)) {
    case Role::Vowel:
    case Role::Consonant:
    case Role::Virama:
      return true;
    case Role::Other:
      return is_word_modifier(cp);
    default:
      return false;
  }
}

enum class RunKind { Word, Separator };

struct Run {
  RunKind kind;
  std::u32string text;
};

// Splits text into maximal Word / Separator runs. Concatenating the runs
// reproduces the input exactly.
inline std::vector<Run> segment(std::u32string_view text,
                                const SymbolTable& table = SymbolTable::builtin()) {
  std::vector<Run> runs;
  std::size_t i = 0;
  while (i < text.size()) {
    const bool word = is_word_codepoint(text[i], table);
    std::size_t j = i + 1;
    while (j < text.size() && is_word_codepoint(text[j], table) == word) ++j;
    runs.push_back(Run{word ? RunKind::Word : RunKind::Separator,
                       std::u32string(text.substr(i, j - i))});
    i = j;
  }
  return runs;
}

// One hyphenation unit: a vowel (possibly with attached modifiers) or a
// consonant cluster. Conjuncts (consonant-virama-consonant...) are a single
// unit and are never split across syllables.
struct Unit {
  std::u32string text;
  bool is_vowel = false;
};

inline std::vector<Unit> cluster_consonants(
    std::u32string_view word, const SymbolTable& table = SymbolTable::builtin()) {
  std::vector<Unit> units;
  for (char32_t cp : word) {
    const Role role = table.classify(cp);
    switch (role) {
      case Role::Vowel:
        units.push_back(Unit{std::u32string(1, cp), true});
        break;
      case Role::Virama:
        // Binds leftward; a word-initial virama starts its own unit.
        if (!units.empty()) units.back().text.push_back(cp);
        else units.push_back(Unit{std::u32string(1, cp), false});
        break;
      case Role::Consonant:
        if (!units.empty() && !units.back().is_vowel &&
            table.classify(units.back().text.back()) == Role::Virama) {
          units.back().text.push_back(cp);  // conjunct continues
        } else {
          units.push_back(Unit{std::u32string(1, cp), false});
        }
        break;
      default:
        // Modifiers (and any stray non-word code point) attach to the
        // preceding unit so flattening always reproduces the input.
        if (!units.empty()) units.back().text.push_back(cp);
        else units.push_back(Unit{std::u32string(1, cp), false});
        break;
    }
  }
  return units;
}

inline std::u32string flatten(const std::vector<Unit>& units) {
  std::u32string out;
  for (const Unit& u : units) out += u.text;
  return out;
}

}  // namespace shotik
