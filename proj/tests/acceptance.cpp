// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Uses the bundled sample corpus under data/.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "shotik/alphabet.hpp"
#include "shotik/codebook.hpp"
#include "shotik/codec.hpp"
#include "shotik/hyphenation.hpp"
#include "shotik/report.hpp"
#include "shotik/utf8.hpp"

#include "testutil.hpp"

using namespace shotik;

namespace {

struct Failure {
  std::string reason;
};

void expect(bool ok, const std::string& reason) {
  if (!ok) throw Failure{reason};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{"cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::u32string> read_lines_u32(const std::string& path) {
  std::vector<std::u32string> lines;
  std::stringstream ss(read_file(path));
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty()) lines.push_back(decode_utf8(line));
  return lines;
}

const std::string kDataDir = SHOTIK_DATA_DIR;

const Codebook& bundled_codebook() {
  static const Codebook cb = [] {
    const std::vector<std::u32string> corpus = {
        decode_utf8(read_file(kDataDir + "/corpus_bn.txt"))};
    const auto model = collect_statistics(corpus, HyphenationVariant::UMR);
    const auto selected = select_entries(model, SelectionLimits{}, 2);
    return assign_codes(selected, HyphenationVariant::UMR);
  }();
  return cb;
}

// Shared pool of pipeline-built codebooks for criteria 3, 5 and 6.
const std::vector<Codebook>& random_codebooks() {
  static const std::vector<Codebook> pool = [] {
    std::vector<Codebook> out;
    std::mt19937_64 rng(0xC0DEB00C);
    for (int iter = 0; iter < 100; ++iter) {
      std::vector<std::u32string> vocab;
      const int vocab_size = 10 + static_cast<int>(rng() % 60);
      for (int i = 0; i < vocab_size; ++i)
        vocab.push_back(i % 2 ? testutil::random_bengali_word(rng)
                              : testutil::random_latin_word(rng));
      std::vector<std::u32string> corpus;
      const int texts = 1 + static_cast<int>(rng() % 5);
      for (int t = 0; t < texts; ++t)
        corpus.push_back(testutil::random_word_text(rng, vocab, 30 + rng() % 200));
      const auto variant = static_cast<HyphenationVariant>(rng() % 4);
      const auto model = collect_statistics(corpus, variant);
      const auto selected =
          select_entries(model, SelectionLimits{}, 1 + rng() % 2);
      out.push_back(assign_codes(selected, variant));
    }
    return out;
  }();
  return pool;
}

// ----- criteria -----

void criterion_hyphenation_golden() {
  const auto check = [](HyphenationVariant v, const char* expected) {
    const auto h = hyphenate(U"priesthood", v);
    expect(u8str(h.joined(U'-')) == expected,
           std::string("priesthood under ") + variant_name(v) + " gave " +
               u8str(h.joined(U'-')) + ", want " + expected);
  };
  check(HyphenationVariant::UL, "priesth-ood");
  check(HyphenationVariant::UR, "prie-sthood");
  check(HyphenationVariant::UML, "priest-hood");
  check(HyphenationVariant::UMR, "pries-thood");
}

void criterion_lossless_roundtrip() {
  const Codebook& cb = bundled_codebook();
  const Tokenizer tokenizer(cb);
  const Decoder decoder(cb);
  std::mt19937_64 rng(20260808);
  for (int i = 0; i < 10000; ++i) {
    const std::u32string text = testutil::random_mixed_text(rng, 1000);
    const auto msg = encode(tokenizer.tokenize(text), cb);
    const std::u32string back = decoder.decode(msg);
    expect(back == text, "round-trip mismatch at case " + std::to_string(i));
    if (i % 512 == 0)
      expect(encode_utf8(back) == encode_utf8(text),
             "byte-level mismatch at case " + std::to_string(i));
  }
}

void criterion_prefix_and_kraft() {
  for (const Codebook& cb : random_codebooks()) {
    std::vector<std::string> codewords;
    for (const auto& e : cb.entries) codewords.push_back(e.codeword);
    codewords.push_back(cb.escape_codeword);
    for (std::size_t i = 0; i < codewords.size(); ++i)
      for (std::size_t j = 0; j < codewords.size(); ++j) {
        if (i == j) continue;
        const std::string& a = codewords[i];
        const std::string& b = codewords[j];
        expect(!(a.size() <= b.size() && b.compare(0, a.size(), a) == 0),
               "prefix violation: " + a + " prefixes " + b);
      }
    std::vector<std::uint32_t> lengths;
    for (const auto& c : codewords)
      lengths.push_back(static_cast<std::uint32_t>(c.size()));
    expect(kraft_sum_is_one(lengths), "Kraft sum != 1");
  }
}

// Minimum average length over all Kraft-feasible length vectors; counts
// sorted descending pair with non-decreasing lengths.
double brute_force_min_avg(std::vector<std::uint64_t> counts) {
  std::sort(counts.begin(), counts.end(), std::greater<>());
  const std::size_t n = counts.size();
  const std::uint32_t max_len = static_cast<std::uint32_t>(n - 1);
  constexpr std::uint64_t kScale = 1ull << 20;
  std::uint64_t best = ~0ull;
  const auto rec = [&](auto&& self, std::size_t i, std::uint32_t prev,
                       std::uint64_t kraft, std::uint64_t cost) -> void {
    if (kraft > kScale) return;
    if (i == n) {
      best = std::min(best, cost);
      return;
    }
    for (std::uint32_t l = prev; l <= max_len; ++l)
      self(self, i + 1, l, kraft + (kScale >> l), cost + counts[i] * l);
  };
  rec(rec, 0, 1, 0, 0);
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return static_cast<double>(best) / static_cast<double>(total);
}

void criterion_huffman_optimality() {
  std::mt19937_64 rng(4242);
  for (int iter = 0; iter < 500; ++iter) {
    const std::size_t n = 2 + rng() % 5;  // 2..6 symbols
    std::vector<SelectedToken> sel;
    std::vector<std::uint64_t> counts;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t c = 1 + rng() % 100;
      sel.push_back({std::u32string(1, static_cast<char32_t>(U'a' + i)), 1, c});
      counts.push_back(c);
    }
    const auto cb = assign_codes(sel);
    counts.push_back(cb.escape_count);
    const double expected = brute_force_min_avg(counts);
    const double actual = average_length(cb);
    expect(std::abs(actual - expected) <= 1e-12,
           "AvgL " + std::to_string(actual) + " != brute-force minimum " +
               std::to_string(expected) + " at case " + std::to_string(iter));
  }
}

void criterion_shannon_bounds() {
  for (const Codebook& cb : random_codebooks()) {
    const double h = entropy(cb);
    const double avg = average_length(cb);
    expect(h <= avg + 1e-12, "entropy exceeds AvgL");
    expect(avg < h + 1.0, "AvgL reaches entropy + 1");
  }
}

void criterion_sibling_property() {
  for (const Codebook& cb : random_codebooks()) {
    // order mirrors the builder's tie-breaking: count, then token, escape last
    struct Sym {
      std::uint64_t count;
      bool is_escape;
      std::u32string token;
      std::uint32_t length;
    };
    std::vector<Sym> syms;
    for (const auto& e : cb.entries)
      syms.push_back({e.count, false, e.token, e.code_length});
    syms.push_back({cb.escape_count, true, {},
                    static_cast<std::uint32_t>(cb.escape_codeword.size())});
    std::sort(syms.begin(), syms.end(), [](const Sym& a, const Sym& b) {
      if (a.count != b.count) return a.count < b.count;
      if (a.is_escape != b.is_escape) return !a.is_escape;
      return a.token < b.token;
    });
    expect(syms[0].length == syms[1].length,
           "two least-frequent symbols have lengths " +
               std::to_string(syms[0].length) + " and " +
               std::to_string(syms[1].length));
  }
}

void criterion_syllable_counts() {
  std::mt19937_64 rng(777);
  const auto variants = {HyphenationVariant::UL, HyphenationVariant::UR,
                         HyphenationVariant::UML, HyphenationVariant::UMR};
  for (int i = 0; i < 1000; ++i) {
    const std::u32string w = i % 2 ? testutil::random_bengali_word(rng)
                                   : testutil::random_latin_word(rng);
    const std::size_t blocks = vowel_blocks(cluster_consonants(w)).size();
    expect(blocks >= 1, "generator produced a vowel-less word " + u8str(w));
    for (auto v : variants) {
      const auto h = hyphenate(w, v);
      expect(h.syllables.size() == blocks,
             u8str(w) + " under " + variant_name(v) + ": " +
                 std::to_string(h.syllables.size()) + " syllables, " +
                 std::to_string(blocks) + " vowel blocks");
    }
  }
}

void criterion_compression_effectiveness() {
  const std::string corpus_bytes = read_file(kDataDir + "/corpus_bn.txt");
  expect(corpus_bytes.size() >= 50 * 1024,
         "bundled corpus has " + std::to_string(corpus_bytes.size()) +
             " bytes, need >= 51200");
  const Codebook& cb = bundled_codebook();
  const Tokenizer tokenizer(cb);
  const auto messages = read_lines_u32(kDataDir + "/holdout_bn.txt");
  expect(messages.size() >= 20, "need at least 20 held-out messages");
  double sum_bpc = 0.0;
  for (const auto& m : messages) {
    expect(m.size() >= 180 && m.size() <= 220,
           "held-out message length " + std::to_string(m.size()) +
               " is not near 200 chars");
    const auto msg = encode(tokenizer.tokenize(m), cb);
    sum_bpc += bits_per_char(m, msg);
  }
  const double mean = sum_bpc / static_cast<double>(messages.size());
  expect(mean <= 5.0, "mean bits/char " + std::to_string(mean) + " > 5.0");
  expect(mean < 8.0, "mean bits/char " + std::to_string(mean) + " >= 8.0");
  std::fprintf(stderr, "  [criterion 8] mean bits/char over %zu messages: %.4f\n",
               messages.size(), mean);
}

void criterion_masking_efficacy() {
  const Codebook& cb = bundled_codebook();
  std::set<std::u32string> digrams;
  std::size_t space_entry = SIZE_MAX;
  for (std::size_t i = 0; i < cb.entries.size(); ++i) {
    if (cb.entries[i].level == 2) digrams.insert(cb.entries[i].token);
    if (cb.entries[i].token == U" ") space_entry = i;
  }
  expect(space_entry != SIZE_MAX, "codebook lacks a level-1 space entry");

  const auto messages = read_lines_u32(kDataDir + "/holdout_mask_bn.txt");
  expect(!messages.empty(), "mask holdout is empty");

  const Tokenizer masked(cb);
  const Tokenizer unmasked(cb, TokenizerOptions::without_level(2));
  std::uint64_t masked_bits = 0, unmasked_bits = 0;
  for (const auto& m : messages) {
    for (std::size_t i = 0; i + 1 < m.size(); ++i)
      if (m[i] == U' ' && m[i + 1] != U' ')
        expect(digrams.count(std::u32string{m[i], m[i + 1]}) == 1,
               "precondition: digram after position " + std::to_string(i) +
                   " missing from codebook");
    const auto tokens = masked.tokenize(m);
    for (const Token& t : tokens)
      expect(!(t.kind == Token::Kind::Entry && t.entry == space_entry),
             "standalone space token in masked stream");
    masked_bits += encode(tokens, cb).bit_count;
    unmasked_bits += encode(unmasked.tokenize(m), cb).bit_count;
  }
  expect(masked_bits <= unmasked_bits,
         "masking enlarged the payload: " + std::to_string(masked_bits) +
             " vs " + std::to_string(unmasked_bits) + " bits");
  std::fprintf(stderr, "  [criterion 9] masked %llu bits vs unmasked %llu bits\n",
               static_cast<unsigned long long>(masked_bits),
               static_cast<unsigned long long>(unmasked_bits));
}

void criterion_determinism() {
  const std::vector<std::u32string> corpus = {
      decode_utf8(read_file(kDataDir + "/corpus_bn.txt"))};
  const auto build = [&] {
    const auto model = collect_statistics(corpus, HyphenationVariant::UMR);
    return assign_codes(select_entries(model, SelectionLimits{}, 2),
                        HyphenationVariant::UMR);
  };
  const std::string a = serialize(build());
  const std::string b = serialize(build());
  expect(a == b, "two builds from identical corpora differ");

  const Codebook& cb = bundled_codebook();
  std::vector<std::pair<std::string, std::u32string>> sources;
  sources.emplace_back("holdout",
                       decode_utf8(read_file(kDataDir + "/holdout_bn.txt")));
  BenchOptions options;
  options.block_size = 200;
  options.max_blocks = 8;
  options.seed = 12345;
  const std::string r1 = format_table(make_report(cb, sources, options));
  const std::string r2 = format_table(make_report(cb, sources, options));
  expect(r1 == r2, "two bench reports with the same seed differ");
}

void criterion_wire_robustness() {
  const Codebook& cb = bundled_codebook();
  const Tokenizer tokenizer(cb);
  const Decoder decoder(cb);
  std::mt19937_64 rng(0xF022);
  const auto messages = read_lines_u32(kDataDir + "/holdout_bn.txt");
  expect(!messages.empty(), "holdout is empty");

  std::vector<std::vector<std::uint8_t>> wires;
  for (const auto& m : messages)
    wires.push_back(write_message(encode(tokenizer.tokenize(m), cb)));

  int defined_errors = 0, decoded = 0;
  for (int i = 0; i < 10000; ++i) {
    std::vector<std::uint8_t> wire = wires[rng() % wires.size()];
    if (i % 2 == 0) {  // single bit flip
      const std::size_t bit = rng() % (wire.size() * 8);
      wire[bit / 8] ^= static_cast<std::uint8_t>(0x80u >> (bit % 8));
    } else {  // truncation
      wire.resize(rng() % (wire.size() + 1));
    }
    try {
      const auto msg = read_message(wire);
      (void)decoder.decode(msg);
      ++decoded;
    } catch (const Error&) {
      ++defined_errors;
    }
  }
  expect(defined_errors + decoded == 10000, "fuzz case fell through");
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;  // 0: no budget
  std::function<void()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "hyphenation golden table", 1.0, criterion_hyphenation_golden},
      {2, "lossless round-trip x10000", 60.0, criterion_lossless_roundtrip},
      {3, "prefix-freeness and Kraft equality x100", 0.0, criterion_prefix_and_kraft},
      {4, "Huffman optimality vs brute force x500", 0.0, criterion_huffman_optimality},
      {5, "Shannon bounds", 0.0, criterion_shannon_bounds},
      {6, "sibling property", 0.0, criterion_sibling_property},
      {7, "syllable count equality x1000", 0.0, criterion_syllable_counts},
      {8, "compression effectiveness on bundled corpus", 30.0,
       criterion_compression_effectiveness},
      {9, "masking efficacy", 0.0, criterion_masking_efficacy},
      {10, "deterministic builds and reports", 0.0, criterion_determinism},
      {11, "wire-format robustness x10000", 60.0, criterion_wire_robustness},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string verdict = "PASS";
    std::string detail;
    try {
      c.run();
    } catch (const Failure& f) {
      verdict = "FAIL";
      detail = f.reason;
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = std::string("unexpected exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (verdict == "PASS" && c.budget_seconds > 0 && seconds >= c.budget_seconds) {
      verdict = "FAIL";
      detail = "runtime " + std::to_string(seconds) + " s exceeds budget of " +
               std::to_string(c.budget_seconds) + " s";
    }
    std::printf("criterion %2d: %s  %s (%.2f s)%s%s\n", c.id, verdict.c_str(),
                c.name, seconds, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (verdict == "FAIL") ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  else std::printf("all %zu criteria passed\n", criteria.size());
  return failures == 0 ? 0 : 1;
}
