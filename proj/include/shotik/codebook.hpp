#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shotik/alphabet.hpp"
#include "shotik/error.hpp"
#include "shotik/hyphenation.hpp"
#include "shotik/utf8.hpp"

namespace shotik {

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (char c : bytes) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 1099511628211ull;
  }
  return h;
}

// Per-level frequency statistics gathered from a corpus.
//   level 1: single code points (every distinct one observed)
//   level 2: space + following non-space code point digrams
//   level 3: syllables under the chosen hyphenation variant
//   level 4: whole words of >= 2 code points
struct FrequencyModel {
  std::array<std::map<std::u32string, std::uint64_t>, 4> levels;
  std::uint64_t total_chars = 0;

  std::map<std::u32string, std::uint64_t>& level(int l) { return levels[l - 1]; }
  const std::map<std::u32string, std::uint64_t>& level(int l) const {
    return levels[l - 1];
  }
};

inline FrequencyModel collect_statistics(
    std::span<const std::u32string> corpus, HyphenationVariant variant,
    const SymbolTable& table = SymbolTable::builtin()) {
  FrequencyModel model;
  for (const std::u32string& text : corpus) {
    model.total_chars += text.size();
    for (char32_t cp : text) ++model.level(1)[std::u32string(1, cp)];
    for (std::size_t i = 0; i + 1 < text.size(); ++i) {
      if (table.classify(text[i]) == Role::Space &&
          table.classify(text[i + 1]) != Role::Space) {
        ++model.level(2)[std::u32string{text[i], text[i + 1]}];
      }
    }
    for (const Run& run : segment(text, table)) {
      if (run.kind != RunKind::Word) continue;
      if (run.text.size() >= 2) ++model.level(4)[run.text];
      for (std::u32string& s : hyphenate(run.text, variant, table).syllables)
        ++model.level(3)[std::move(s)];
    }
  }
  return model;
}

struct SelectionLimits {
  std::size_t level2 = 512;
  std::size_t level3 = 1024;
  std::size_t level4 = 256;

  std::size_t for_level(int l) const {
    return l == 2 ? level2 : l == 3 ? level3 : level4;
  }
};

struct SelectedToken {
  std::u32string token;
  int level = 1;
  std::uint64_t count = 0;
};

// Level-1 tokens are always kept. Levels 2..4 keep the top `limits` tokens
// by score = count * (length - 1), ties to the lexicographically smaller
// token; a token selected at several levels is kept only at the highest.
inline std::vector<SelectedToken> select_entries(const FrequencyModel& model,
                                                 const SelectionLimits& limits = {},
                                                 std::uint64_t min_count = 2) {
  if (min_count < 1) throw Error("min_count must be >= 1");
  std::vector<SelectedToken> out;
  for (const auto& [token, count] : model.level(1))
    out.push_back(SelectedToken{token, 1, count});

  std::map<std::u32string, int> claimed;  // token -> level kept at
  std::vector<SelectedToken> upper;
  for (int level = 4; level >= 2; --level) {
    std::vector<const std::pair<const std::u32string, std::uint64_t>*> cand;
    for (const auto& kv : model.level(level)) {
      if (kv.first.size() >= 2 && kv.second >= min_count) cand.push_back(&kv);
    }
    std::sort(cand.begin(), cand.end(), [](const auto* a, const auto* b) {
      const std::uint64_t sa = a->second * (a->first.size() - 1);
      const std::uint64_t sb = b->second * (b->first.size() - 1);
      if (sa != sb) return sa > sb;
      return a->first < b->first;
    });
    if (cand.size() > limits.for_level(level)) cand.resize(limits.for_level(level));
    for (const auto* kv : cand) {
      if (claimed.emplace(kv->first, level).second)
        upper.push_back(SelectedToken{kv->first, level, kv->second});
    }
  }
  std::sort(upper.begin(), upper.end(), [](const SelectedToken& a, const SelectedToken& b) {
    if (a.level != b.level) return a.level < b.level;
    return a.token < b.token;
  });
  out.insert(out.end(), std::make_move_iterator(upper.begin()),
             std::make_move_iterator(upper.end()));
  return out;
}

struct CodebookEntry {
  std::u32string token;
  int level = 1;
  std::uint64_t count = 0;
  double probability = 0.0;
  std::uint32_t code_length = 0;
  std::string codeword;  // "0"/"1" string, length == code_length

  bool operator==(const CodebookEntry& o) const {
    return token == o.token && level == o.level && count == o.count &&
           probability == o.probability && code_length == o.code_length &&
           codeword == o.codeword;
  }
};

// Exact Kraft-equality test by pairing: a complete prefix code's length
// multiset folds to a single length-0 node.
inline bool kraft_sum_is_one(std::vector<std::uint32_t> lengths) {
  if (lengths.empty()) return false;
  std::priority_queue<std::uint32_t> q(lengths.begin(), lengths.end());
  while (q.size() > 1) {
    const std::uint32_t a = q.top();
    q.pop();
    const std::uint32_t b = q.top();
    q.pop();
    if (a != b || a == 0) return false;
    q.push(a - 1);
  }
  return q.top() == 0;
}

// Sorting makes any prefix pair adjacent, so one linear scan suffices.
inline bool codewords_prefix_free(std::vector<std::string> codewords) {
  std::sort(codewords.begin(), codewords.end());
  for (std::size_t i = 0; i + 1 < codewords.size(); ++i) {
    const std::string& a = codewords[i];
    const std::string& b = codewords[i + 1];
    if (a.size() <= b.size() && b.compare(0, a.size(), a) == 0) return false;
  }
  return true;
}

// The static knowledge base: selected tokens with canonical prefix codes,
// plus a reserved escape codeword for code points outside the corpus.
// Entries are kept in canonical (code_length, token) order; the escape
// codeword sorts after entries of equal length.
struct Codebook {
  std::vector<CodebookEntry> entries;
  std::string escape_codeword;
  std::uint64_t escape_count = 0;
  HyphenationVariant variant = HyphenationVariant::UMR;
  std::uint64_t id = 0;

  std::uint64_t entry_count_total() const {
    std::uint64_t t = 0;
    for (const CodebookEntry& e : entries) t += e.count;
    return t;
  }

  double escape_probability() const {
    return static_cast<double>(escape_count) /
           static_cast<double>(entry_count_total() + escape_count);
  }

  bool operator==(const Codebook& o) const {
    return entries == o.entries && escape_codeword == o.escape_codeword &&
           escape_count == o.escape_count && variant == o.variant && id == o.id;
  }
};

inline std::uint64_t escape_count_for_total(std::uint64_t total) {
  return std::max<std::uint64_t>(1, (total + 999) / 1000);
}

inline std::string serialize(const Codebook& cb);

namespace detail {

// Deterministic Huffman code lengths: merge lowest counts first; among equal
// counts prefer the node created earliest (all leaves precede internal
// nodes, leaves in the given order).
inline std::vector<std::uint32_t> huffman_code_lengths(
    std::span<const std::uint64_t> counts) {
  const std::size_t n = counts.size();
  struct HeapItem {
    std::uint64_t count;
    std::uint64_t seq;
    std::uint32_t node;
  };
  const auto greater = [](const HeapItem& a, const HeapItem& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.seq > b.seq;
  };
  std::priority_queue<HeapItem, std::vector<HeapItem>, decltype(greater)> q(greater);
  std::vector<std::array<std::int32_t, 2>> children;
  for (std::size_t i = 0; i < n; ++i)
    q.push(HeapItem{counts[i], i, static_cast<std::uint32_t>(i)});
  std::uint64_t seq = n;
  while (q.size() > 1) {
    const HeapItem a = q.top();
    q.pop();
    const HeapItem b = q.top();
    q.pop();
    const auto node = static_cast<std::uint32_t>(n + children.size());
    children.push_back({static_cast<std::int32_t>(a.node),
                        static_cast<std::int32_t>(b.node)});
    q.push(HeapItem{a.count + b.count, seq++, node});
  }
  std::vector<std::uint32_t> depth(n + children.size(), 0);
  for (std::size_t k = children.size(); k-- > 0;) {
    const std::uint32_t d = depth[n + k] + 1;
    depth[children[k][0]] = d;
    depth[children[k][1]] = d;
  }
  depth.resize(n);
  if (n == 1) depth[0] = 1;
  return depth;
}

inline std::string canonical_bits(std::uint64_t code, std::uint32_t len) {
  std::string s(len, '0');
  for (std::uint32_t i = 0; i < len; ++i)
    if ((code >> (len - 1 - i)) & 1u) s[i] = '1';
  return s;
}

}  // namespace detail

// Huffman lengths over {selected + ESCAPE}, then canonical codewords in
// (length, token) order with ESCAPE last among codewords of its length.
inline Codebook assign_codes(std::span<const SelectedToken> selected,
                             HyphenationVariant variant = HyphenationVariant::UMR) {
  if (selected.empty()) throw Error("empty alphabet");

  std::vector<std::size_t> order(selected.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return selected[a].token < selected[b].token;
  });
  for (std::size_t i = 0; i + 1 < order.size(); ++i)
    if (selected[order[i]].token == selected[order[i + 1]].token)
      throw Error("duplicate token");

  std::uint64_t total = 0;
  for (const SelectedToken& t : selected) {
    if (t.count < 1) throw Error("count must be >= 1");
    total += t.count;
  }
  const std::uint64_t escape_count = escape_count_for_total(total);

  // Leaf order: tokens lexicographically, ESCAPE last.
  std::vector<std::uint64_t> counts;
  counts.reserve(selected.size() + 1);
  for (std::size_t idx : order) counts.push_back(selected[idx].count);
  counts.push_back(escape_count);
  const std::vector<std::uint32_t> lengths = detail::huffman_code_lengths(counts);

  struct Symbol {
    const SelectedToken* token;  // null for ESCAPE
    std::uint32_t length;
  };
  std::vector<Symbol> symbols;
  symbols.reserve(counts.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    symbols.push_back(Symbol{&selected[order[i]], lengths[i]});
  symbols.push_back(Symbol{nullptr, lengths.back()});
  std::stable_sort(symbols.begin(), symbols.end(), [](const Symbol& a, const Symbol& b) {
    if (a.length != b.length) return a.length < b.length;
    if (!a.token || !b.token) return b.token == nullptr && a.token != nullptr;
    return a.token->token < b.token->token;
  });

  Codebook cb;
  cb.variant = variant;
  cb.escape_count = escape_count;
  const double denom = static_cast<double>(total + escape_count);
  std::uint64_t code = 0;
  std::uint32_t prev_len = 0;
  for (const Symbol& s : symbols) {
    if (s.length > 62) throw Error("code length overflow");
    if (prev_len != 0) code = (code + 1) << (s.length - prev_len);
    else code <<= s.length;
    prev_len = s.length;
    const std::string bits = detail::canonical_bits(code, s.length);
    if (s.token) {
      cb.entries.push_back(CodebookEntry{
          s.token->token, s.token->level, s.token->count,
          static_cast<double>(s.token->count) / denom, s.length, bits});
    } else {
      cb.escape_codeword = bits;
    }
  }

  std::vector<std::uint32_t> all_lengths(lengths.begin(), lengths.end());
  if (!kraft_sum_is_one(all_lengths)) throw Error("Kraft violation");
  cb.id = fnv1a64(serialize(cb));
  return cb;
}

// AvgL = sum of code_length * probability, ESCAPE included.
inline double average_length(const Codebook& cb) {
  double avg = 0.0;
  for (const CodebookEntry& e : cb.entries) avg += e.code_length * e.probability;
  avg += cb.escape_codeword.size() * cb.escape_probability();
  return avg;
}

inline double entropy(std::span<const double> probabilities) {
  double sum = 0.0;
  for (double p : probabilities) {
    if (p <= 0.0) throw Error("probabilities must be > 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error("probabilities must sum to 1");
  double h = 0.0;
  for (double p : probabilities) h -= p * std::log2(p);
  return h;
}

inline double entropy(const Codebook& cb) {
  std::vector<double> probs;
  probs.reserve(cb.entries.size() + 1);
  for (const CodebookEntry& e : cb.entries) probs.push_back(e.probability);
  probs.push_back(cb.escape_probability());
  return entropy(probs);
}

namespace detail {

inline std::string escape_token(std::u32string_view token) {
  std::string raw = encode_utf8(token);
  std::string out;
  out.reserve(raw.size() + 4);
  for (char c : raw) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\\': out += "\\\\"; break;
      case ' ': out += "\\s"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline std::u32string unescape_token(std::string_view s) {
  std::string raw;
  raw.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == ' ') throw Error("malformed entry line");  // must be \s
    if (s[i] != '\\') {
      raw.push_back(s[i]);
      continue;
    }
    if (i + 1 >= s.size()) throw Error("malformed entry line");
    switch (s[++i]) {
      case 't': raw.push_back('\t'); break;
      case 'n': raw.push_back('\n'); break;
      case 's': raw.push_back(' '); break;
      case '\\': raw.push_back('\\'); break;
      default: throw Error("malformed entry line");
    }
  }
  return decode_utf8(raw);
}

inline bool valid_bits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c != '0' && c != '1') return false;
  return true;
}

inline bool valid_count(std::string_view s) {
  if (s.empty() || s.size() > 19 || s.front() == '0') return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace detail

// Text format:
//   SHOTIKCB 1 <variant>
//   ESCAPE <bits>
//   <level>\t<escaped-token>\t<count>\t<bits>   (sorted by (length, token))
inline std::string serialize(const Codebook& cb) {
  std::string out = "SHOTIKCB 1 ";
  out += variant_name(cb.variant);
  out += "\nESCAPE ";
  out += cb.escape_codeword;
  out += '\n';
  for (const CodebookEntry& e : cb.entries) {
    out += static_cast<char>('0' + e.level);
    out += '\t';
    out += detail::escape_token(e.token);
    out += '\t';
    out += std::to_string(e.count);
    out += '\t';
    out += e.codeword;
    out += '\n';
  }
  return out;
}

inline Codebook deserialize(std::string_view bytes) {
  // Every line must be newline-terminated; a cut-off file fails here.
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const std::size_t eol = bytes.find('\n', pos);
    if (eol == std::string_view::npos) throw Error("unexpected end of input");
    lines.push_back(bytes.substr(pos, eol - pos));
    pos = eol + 1;
  }
  if (lines.size() < 2) throw Error("unexpected end of input");

  const std::string_view header = lines[0];
  if (header.substr(0, 9) != "SHOTIKCB ") throw Error("bad magic");
  const std::size_t sp = header.find(' ', 9);
  if (sp == std::string_view::npos) throw Error("bad magic");
  if (header.substr(9, sp - 9) != "1") throw Error("unsupported version");
  const auto variant = variant_from_name(header.substr(sp + 1));
  if (!variant) throw Error("bad variant");

  Codebook cb;
  cb.variant = *variant;
  if (lines[1].substr(0, 7) != "ESCAPE " ||
      !detail::valid_bits(lines[1].substr(7)))
    throw Error("malformed escape line");
  cb.escape_codeword = std::string(lines[1].substr(7));

  for (std::size_t li = 2; li < lines.size(); ++li) {
    const std::string_view line = lines[li];
    std::array<std::string_view, 4> field;
    std::size_t start = 0;
    for (int f = 0; f < 3; ++f) {
      const std::size_t tab = line.find('\t', start);
      if (tab == std::string_view::npos) throw Error("malformed entry line");
      field[f] = line.substr(start, tab - start);
      start = tab + 1;
    }
    field[3] = line.substr(start);
    if (field[3].find('\t') != std::string_view::npos)
      throw Error("malformed entry line");

    if (field[0].size() != 1 || field[0][0] < '1' || field[0][0] > '4')
      throw Error("malformed entry line");
    if (!detail::valid_count(field[2]) || !detail::valid_bits(field[3]))
      throw Error("malformed entry line");

    CodebookEntry e;
    e.level = field[0][0] - '0';
    e.token = detail::unescape_token(field[1]);
    e.count = std::stoull(std::string(field[2]));
    e.codeword = std::string(field[3]);
    e.code_length = static_cast<std::uint32_t>(e.codeword.size());
    if (e.token.empty()) throw Error("malformed entry line");
    if (e.level == 1 && e.token.size() != 1) throw Error("malformed entry line");
    if (e.level >= 2 && e.token.size() < 2) throw Error("malformed entry line");
    cb.entries.push_back(std::move(e));
  }
  if (cb.entries.empty()) throw Error("empty alphabet");

  for (std::size_t i = 0; i + 1 < cb.entries.size(); ++i) {
    const CodebookEntry& a = cb.entries[i];
    const CodebookEntry& b = cb.entries[i + 1];
    if (a.code_length > b.code_length ||
        (a.code_length == b.code_length && a.token >= b.token)) {
      if (a.token == b.token) throw Error("duplicate token");
      throw Error("entries out of order");
    }
  }
  {
    std::map<std::u32string, bool> seen;
    for (const CodebookEntry& e : cb.entries)
      if (!seen.emplace(e.token, true).second) throw Error("duplicate token");
  }

  std::vector<std::string> codewords;
  std::vector<std::uint32_t> lengths;
  for (const CodebookEntry& e : cb.entries) {
    codewords.push_back(e.codeword);
    lengths.push_back(e.code_length);
  }
  codewords.push_back(cb.escape_codeword);
  lengths.push_back(static_cast<std::uint32_t>(cb.escape_codeword.size()));
  if (!codewords_prefix_free(std::move(codewords))) throw Error("prefix violation");
  if (!kraft_sum_is_one(std::move(lengths))) throw Error("Kraft violation");

  std::uint64_t total = 0;
  for (const CodebookEntry& e : cb.entries) total += e.count;
  cb.escape_count = escape_count_for_total(total);
  const double denom = static_cast<double>(total + cb.escape_count);
  for (CodebookEntry& e : cb.entries)
    e.probability = static_cast<double>(e.count) / denom;

  cb.id = fnv1a64(serialize(cb));
  return cb;
}

}  // namespace shotik
