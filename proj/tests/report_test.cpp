#include <catch2/catch.hpp>

#include <random>

#include "shotik/report.hpp"
#include "testutil.hpp"

using namespace shotik;

TEST_CASE("split_blocks respects the size cap and word boundaries", "[report]") {
  std::mt19937_64 rng(73);
  std::vector<std::u32string> vocab;
  for (int i = 0; i < 20; ++i) vocab.push_back(testutil::random_latin_word(rng));
  const std::u32string text = testutil::random_word_text(rng, vocab, 300);

  const auto blocks = split_blocks(text, 50);
  std::u32string joined;
  for (const auto& b : blocks) {
    REQUIRE(!b.empty());
    REQUIRE(b.size() <= 50);
    joined += b;
  }
  REQUIRE(joined == text);
  // no word (vocab words are < 50 cps) is split across blocks
  for (std::size_t i = 0; i + 1 < blocks.size(); ++i) {
    const bool left_word = is_word_codepoint(blocks[i].back(), SymbolTable::builtin());
    const bool right_word =
        is_word_codepoint(blocks[i + 1].front(), SymbolTable::builtin());
    REQUIRE_FALSE((left_word && right_word));
  }
}

TEST_CASE("split_blocks hard-cuts an oversized run", "[report]") {
  const std::u32string text(120, U'x');
  const auto blocks = split_blocks(text, 50);
  REQUIRE(blocks.size() == 3);
  CHECK(blocks[0].size() == 50);
  CHECK(blocks[1].size() == 50);
  CHECK(blocks[2].size() == 20);
}

TEST_CASE("split_blocks of empty text", "[report]") {
  CHECK(split_blocks(U"", 100).empty());
}

TEST_CASE("sample_indices is deterministic and sorted", "[report]") {
  const auto a = sample_indices(100, 10, 7);
  const auto b = sample_indices(100, 10, 7);
  CHECK(a == b);
  CHECK(std::is_sorted(a.begin(), a.end()));
  CHECK(a.size() == 10);
  const auto c = sample_indices(100, 10, 8);
  CHECK(a != c);
  const auto all = sample_indices(5, 10, 1);
  CHECK(all == std::vector<std::size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("report arithmetic is self-consistent", "[report]") {
  std::mt19937_64 rng(79);
  std::vector<std::u32string> vocab;
  for (int i = 0; i < 25; ++i) vocab.push_back(testutil::random_bengali_word(rng));
  const auto cb = testutil::build_codebook(
      {testutil::random_word_text(rng, vocab, 400)}, HyphenationVariant::UMR);

  std::vector<std::pair<std::string, std::u32string>> sources;
  sources.emplace_back("heldout", testutil::random_word_text(rng, vocab, 200));

  BenchOptions options;
  options.block_size = 120;
  const auto report = make_report(cb, sources, options);
  REQUIRE(!report.rows.empty());
  double mean_bpc = 0.0;
  for (const ReportRow& r : report.rows) {
    REQUIRE(r.bits_per_char ==
            Approx(static_cast<double>(r.bit_count) / r.chars).epsilon(1e-9));
    REQUIRE(r.ratio_percent ==
            Approx(100.0 * r.wire_bytes / r.original_bytes).epsilon(1e-9));
    REQUIRE(r.wire_bytes == r.payload_bytes + kWireHeaderSize);
    std::uint64_t tokens = r.escapes;
    for (auto n : r.level_tokens) tokens += n;
    REQUIRE(tokens >= 1);
    mean_bpc += r.bits_per_char;
  }
  mean_bpc /= static_cast<double>(report.rows.size());
  REQUIRE(report.aggregate.bits_per_char == Approx(mean_bpc).epsilon(1e-9));
}

TEST_CASE("reports with the same seed are identical", "[report]") {
  std::mt19937_64 rng(83);
  std::vector<std::u32string> vocab;
  for (int i = 0; i < 25; ++i) vocab.push_back(testutil::random_latin_word(rng));
  const auto cb = testutil::build_codebook(
      {testutil::random_word_text(rng, vocab, 300)}, HyphenationVariant::UMR);
  std::vector<std::pair<std::string, std::u32string>> sources;
  sources.emplace_back("t", testutil::random_word_text(rng, vocab, 500));

  BenchOptions options;
  options.block_size = 40;
  options.max_blocks = 5;
  options.seed = 99;
  const auto r1 = make_report(cb, sources, options);
  const auto r2 = make_report(cb, sources, options);
  CHECK(format_table(r1) == format_table(r2));
  CHECK(format_csv(r1) == format_csv(r2));
}

TEST_CASE("report formats render rows and competitors", "[report]") {
  std::mt19937_64 rng(89);
  const auto cb = testutil::build_codebook({U"alpha beta gamma alpha"},
                                           HyphenationVariant::UMR);
  std::vector<std::pair<std::string, std::u32string>> sources;
  sources.emplace_back("s", U"alpha beta alpha beta gamma");
  const auto report = make_report(cb, sources);

  const std::string table = format_table(report, {{"dcm1", {4.24}}});
  CHECK(table.find("source") != std::string::npos);
  CHECK(table.find("dcm1") != std::string::npos);
  CHECK(table.find("s:0") != std::string::npos);
  CHECK(table.find("mean") != std::string::npos);

  const std::string csv = format_csv(report);
  CHECK(csv.find("source,chars,") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') ==
        static_cast<long>(report.rows.size()) + 1);
}
