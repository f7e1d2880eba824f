#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shotik/alphabet.hpp"

namespace shotik {

// The four universal hyphenation algorithms. They differ only in how an
// inner consonant group of size n between two vowel blocks is divided
// (left, right):
//
//   UL   (n, 0)
//   UR   (0, n)
//   UML  (ceil(n/2), floor(n/2)), except n == 1 goes right
//   UMR  (floor(n/2), ceil(n/2))
//
// Leading consonants always join the first syllable and trailing consonants
// the last, so the syllable count equals the vowel-block count.
enum class HyphenationVariant { UL, UR, UML, UMR };

inline const char* variant_name(HyphenationVariant v) {
  switch (v) {
    case HyphenationVariant::UL: return "ul";
    case HyphenationVariant::UR: return "ur";
    case HyphenationVariant::UML: return "uml";
    case HyphenationVariant::UMR: return "umr";
  }
  return "umr";
}

inline std::optional<HyphenationVariant> variant_from_name(std::string_view s) {
  if (s == "ul") return HyphenationVariant::UL;
  if (s == "ur") return HyphenationVariant::UR;
  if (s == "uml") return HyphenationVariant::UML;
  if (s == "umr") return HyphenationVariant::UMR;
  return std::nullopt;
}

struct Hyphenation {
  std::vector<std::u32string> syllables;

  std::u32string joined(char32_t sep) const {
    std::u32string out;
    for (std::size_t i = 0; i < syllables.size(); ++i) {
      if (i) out.push_back(sep);
      out += syllables[i];
    }
    return out;
  }
};

// Maximal runs of vowel units, as half-open [begin, end) unit index pairs.
inline std::vector<std::pair<std::size_t, std::size_t>> vowel_blocks(
    const std::vector<Unit>& units) {
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  std::size_t i = 0;
  while (i < units.size()) {
    if (!units[i].is_vowel) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < units.size() && units[j].is_vowel) ++j;
    blocks.emplace_back(i, j);
    i = j;
  }
  return blocks;
}

namespace detail {

inline std::size_t consonants_kept_left(std::size_t n, HyphenationVariant v) {
  switch (v) {
    case HyphenationVariant::UL: return n;
    case HyphenationVariant::UR: return 0;
    case HyphenationVariant::UML: return n == 1 ? 0 : (n + 1) / 2;
    case HyphenationVariant::UMR: return n / 2;
  }
  return n / 2;
}

}  // namespace detail

// Words without a vowel form a single syllable. Splits operate on consonant
// units, never inside a conjunct.
inline Hyphenation hyphenate(std::u32string_view word, HyphenationVariant variant,
                             const SymbolTable& table = SymbolTable::builtin()) {
  const std::vector<Unit> units = cluster_consonants(word, table);
  const auto blocks = vowel_blocks(units);
  Hyphenation h;
  if (blocks.size() <= 1) {
    h.syllables.push_back(std::u32string(word));
    return h;
  }
  // cuts[k]: unit index at which syllable k+1 starts.
  std::vector<std::size_t> cuts;
  cuts.reserve(blocks.size() - 1);
  for (std::size_t b = 0; b + 1 < blocks.size(); ++b) {
    const std::size_t group_begin = blocks[b].second;
    const std::size_t n = blocks[b + 1].first - group_begin;
    cuts.push_back(group_begin + detail::consonants_kept_left(n, variant));
  }
  std::size_t unit = 0;
  std::u32string current;
  std::size_t next_cut = 0;
  for (const Unit& u : units) {
    if (next_cut < cuts.size() && unit == cuts[next_cut]) {
      h.syllables.push_back(std::move(current));
      current.clear();
      ++next_cut;
    }
    current += u.text;
    ++unit;
  }
  h.syllables.push_back(std::move(current));
  return h;
}

// Tally of syllable occurrences over a word stream. Deterministic: the map
// orders syllables by code point sequence.
inline std::map<std::u32string, std::uint64_t> syllabify_corpus(
    std::span<const std::u32string> words, HyphenationVariant variant,
    const SymbolTable& table = SymbolTable::builtin()) {
  std::map<std::u32string, std::uint64_t> counts;
  for (const std::u32string& w : words) {
    for (std::u32string& s : hyphenate(w, variant, table).syllables)
      ++counts[std::move(s)];
  }
  return counts;
}

}  // namespace shotik
