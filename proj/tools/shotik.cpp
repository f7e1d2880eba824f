// shotik - static codebook compression for short Bengali text.
//
// Subcommands: build, compress, decompress, bench, hyphenate, stats.
// Exit status: 0 success, 1 usage error, 2 data/format error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "shotik/alphabet.hpp"
#include "shotik/codebook.hpp"
#include "shotik/codec.hpp"
#include "shotik/hyphenation.hpp"
#include "shotik/report.hpp"
#include "shotik/utf8.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw shotik::Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in.good() && !in.eof()) throw shotik::Error("cannot read " + path);
  return ss.str();
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw shotik::Error("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out.good()) throw shotik::Error("cannot write " + path);
}

void write_output(const std::optional<std::string>& path, std::string_view bytes) {
  if (path) {
    write_file(*path, bytes);
  } else {
    std::cout.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    std::cout.flush();
  }
}

shotik::Codebook load_codebook(const std::string& path) {
  return shotik::deserialize(read_file(path));
}

shotik::SymbolTable load_table(const std::optional<std::string>& path) {
  if (path) return shotik::SymbolTable::load(*path);
  return shotik::SymbolTable::builtin();
}

shotik::HyphenationVariant parse_variant(const std::string& name) {
  const auto v = shotik::variant_from_name(name);
  if (!v) throw CLI::ValidationError("--variant", "expected ul, ur, uml or umr");
  return *v;
}

struct BuildArgs {
  std::vector<std::string> corpus;
  std::optional<std::string> output;
  std::string variant = "umr";
  std::size_t limit2 = shotik::SelectionLimits{}.level2;
  std::size_t limit3 = shotik::SelectionLimits{}.level3;
  std::size_t limit4 = shotik::SelectionLimits{}.level4;
  std::uint64_t min_count = 2;
  std::optional<std::string> symbols;
};

int cmd_build(const BuildArgs& args) {
  const shotik::SymbolTable table = load_table(args.symbols);
  std::vector<std::u32string> texts;
  for (const std::string& path : args.corpus)
    texts.push_back(shotik::decode_utf8(read_file(path)));

  const auto model = shotik::collect_statistics(texts, parse_variant(args.variant), table);
  const shotik::SelectionLimits limits{args.limit2, args.limit3, args.limit4};
  const auto selected = shotik::select_entries(model, limits, args.min_count);
  const auto cb = shotik::assign_codes(selected, parse_variant(args.variant));

  std::array<std::size_t, 4> per_level{};
  for (const auto& e : cb.entries) ++per_level[static_cast<std::size_t>(e.level - 1)];
  std::fprintf(stderr, "entries: l1=%zu l2=%zu l3=%zu l4=%zu total=%zu\n",
               per_level[0], per_level[1], per_level[2], per_level[3],
               cb.entries.size());
  std::fprintf(stderr, "avg_length=%.6f bits/token  entropy=%.6f bits\n",
               shotik::average_length(cb), shotik::entropy(cb));
  std::fprintf(stderr, "codebook id: %016llx\n",
               static_cast<unsigned long long>(cb.id));

  write_output(args.output, shotik::serialize(cb));
  return 0;
}

struct CompressArgs {
  std::string codebook;
  std::optional<std::string> input;
  std::optional<std::string> text;
  std::optional<std::string> output;
  std::vector<int> disable_levels;
};

shotik::TokenizerOptions tokenizer_options(const std::vector<int>& disabled) {
  shotik::TokenizerOptions options;
  for (int level : disabled) options.level_mask &= ~(1u << level);
  return options;
}

int cmd_compress(const CompressArgs& args) {
  const auto cb = load_codebook(args.codebook);
  std::string raw;
  if (args.text) {
    raw = *args.text;
  } else if (args.input) {
    raw = read_file(*args.input);
  } else {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    raw = ss.str();
  }
  const std::u32string text = shotik::decode_utf8(raw);
  const auto tokens =
      shotik::Tokenizer(cb, tokenizer_options(args.disable_levels)).tokenize(text);
  const auto msg = shotik::encode(tokens, cb);
  const auto wire = shotik::write_message(msg);

  if (!text.empty()) {
    std::fprintf(stderr, "chars=%zu bits=%llu bits/char=%.4f ratio=%.2f%%\n",
                 text.size(), static_cast<unsigned long long>(msg.bit_count),
                 shotik::bits_per_char(text, msg),
                 shotik::compression_ratio(raw.size(), wire.size()));
  }
  write_output(args.output,
               std::string_view(reinterpret_cast<const char*>(wire.data()), wire.size()));
  return 0;
}

struct DecompressArgs {
  std::string codebook;
  std::string input;
  std::optional<std::string> output;
};

int cmd_decompress(const DecompressArgs& args) {
  const auto cb = load_codebook(args.codebook);
  const std::string raw = read_file(args.input);
  const auto msg = shotik::read_message(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
  const std::u32string text = shotik::Decoder(cb).decode(msg);
  write_output(args.output, shotik::encode_utf8(text));
  return 0;
}

struct BenchArgs {
  std::string codebook;
  std::vector<std::string> inputs;
  std::size_t block_size = 1000;
  std::size_t max_blocks = 0;
  std::uint64_t seed = 0;
  bool csv = false;
  bool allow_overlap = false;
  std::vector<int> disable_levels;
  std::vector<std::string> competitors;
  std::optional<std::string> output;
  std::optional<std::string> symbols;
};

std::vector<shotik::CompetitorColumn> parse_competitors(
    const std::vector<std::string>& defs) {
  std::vector<shotik::CompetitorColumn> cols;
  for (const std::string& def : defs) {
    const std::size_t eq = def.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--competitor", "expected NAME=v1,v2,...");
    shotik::CompetitorColumn col;
    col.name = def.substr(0, eq);
    std::stringstream ss(def.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ','))
      col.values.push_back(std::stod(item));
    cols.push_back(std::move(col));
  }
  return cols;
}

int cmd_bench(const BenchArgs& args) {
  const auto cb = load_codebook(args.codebook);
  const shotik::SymbolTable table = load_table(args.symbols);
  if (!args.allow_overlap)
    std::fprintf(stderr,
                 "note: test files must be disjoint from the build corpus "
                 "(pass --allow-overlap to silence)\n");

  std::vector<std::pair<std::string, std::u32string>> sources;
  for (const std::string& path : args.inputs)
    sources.emplace_back(path, shotik::decode_utf8(read_file(path)));

  shotik::BenchOptions options;
  options.block_size = args.block_size;
  options.max_blocks = args.max_blocks;
  options.seed = args.seed;
  options.tokenizer = tokenizer_options(args.disable_levels);
  const auto report = shotik::make_report(cb, sources, options, table);
  if (report.rows.empty()) throw shotik::Error("empty test set");

  const auto competitors = parse_competitors(args.competitors);
  write_output(args.output, args.csv ? shotik::format_csv(report, competitors)
                                     : shotik::format_table(report, competitors));
  return 0;
}

struct HyphenateArgs {
  std::string word;
  std::string variant = "umr";
  std::optional<std::string> symbols;
};

int cmd_hyphenate(const HyphenateArgs& args) {
  const shotik::SymbolTable table = load_table(args.symbols);
  const auto variant = parse_variant(args.variant);
  const std::u32string input = shotik::decode_utf8(args.word);
  std::u32string out;
  for (const shotik::Run& run : shotik::segment(input, table)) {
    if (run.kind == shotik::RunKind::Word)
      out += shotik::hyphenate(run.text, variant, table).joined(U'-');
    else
      out += run.text;
  }
  std::cout << shotik::encode_utf8(out) << "\n";
  return 0;
}

struct StatsArgs {
  std::string codebook;
  std::size_t top = 10;
};

int cmd_stats(const StatsArgs& args) {
  const auto cb = load_codebook(args.codebook);
  std::array<std::size_t, 4> per_level{};
  std::uint32_t max_len = static_cast<std::uint32_t>(cb.escape_codeword.size());
  for (const auto& e : cb.entries) {
    ++per_level[static_cast<std::size_t>(e.level - 1)];
    max_len = std::max(max_len, e.code_length);
  }
  std::printf("codebook id: %016llx\n", static_cast<unsigned long long>(cb.id));
  std::printf("variant: %s\n", shotik::variant_name(cb.variant));
  std::printf("entries: l1=%zu l2=%zu l3=%zu l4=%zu total=%zu\n", per_level[0],
               per_level[1], per_level[2], per_level[3], cb.entries.size());
  std::printf("escape: codeword=%s synthetic_count=%llu\n",
              cb.escape_codeword.c_str(),
              static_cast<unsigned long long>(cb.escape_count));
  std::printf("avg_length=%.6f bits/token  entropy=%.6f bits  max_code_length=%u\n",
              shotik::average_length(cb), shotik::entropy(cb), max_len);

  std::vector<const shotik::CodebookEntry*> by_count;
  for (const auto& e : cb.entries) by_count.push_back(&e);
  std::sort(by_count.begin(), by_count.end(), [](const auto* a, const auto* b) {
    if (a->count != b->count) return a->count > b->count;
    return a->token < b->token;
  });
  const std::size_t n = std::min(args.top, by_count.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto* e = by_count[i];
    std::printf("%2d  %-24s count=%-8llu len=%-2u %s\n", e->level,
                shotik::encode_utf8(e->token).c_str(),
                static_cast<unsigned long long>(e->count), e->code_length,
                e->codeword.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"static codebook compression for short Bengali text"};
  app.require_subcommand(1);

  BuildArgs build_args;
  auto* build = app.add_subcommand("build", "build a codebook from corpus files");
  build->add_option("corpus", build_args.corpus, "UTF-8 corpus files")
      ->required()
      ->check(CLI::ExistingFile);
  build->add_option("-o,--output", build_args.output, "codebook file (default stdout)");
  build->add_option("--variant", build_args.variant, "hyphenation variant")
      ->check(CLI::IsMember({"ul", "ur", "uml", "umr"}));
  build->add_option("--limit2", build_args.limit2, "max level-2 entries");
  build->add_option("--limit3", build_args.limit3, "max level-3 entries");
  build->add_option("--limit4", build_args.limit4, "max level-4 entries");
  build->add_option("--min-count", build_args.min_count, "min corpus count for levels 2-4")
      ->check(CLI::PositiveNumber);
  build->add_option("--symbols", build_args.symbols, "symbol table file");

  CompressArgs compress_args;
  auto* compress = app.add_subcommand("compress", "compress a message");
  compress->add_option("-c,--codebook", compress_args.codebook, "codebook file")
      ->required();
  compress->add_option("input", compress_args.input, "input file (default stdin)");
  compress->add_option("-t,--text", compress_args.text, "message text");
  compress->add_option("-o,--output", compress_args.output, "output file (default stdout)");
  compress->add_option("--disable-level", compress_args.disable_levels,
                       "exclude a codebook level from matching")
      ->check(CLI::Range(1, 4));

  DecompressArgs decompress_args;
  auto* decompress = app.add_subcommand("decompress", "decompress a message");
  decompress->add_option("-c,--codebook", decompress_args.codebook, "codebook file")
      ->required();
  decompress->add_option("input", decompress_args.input, "compressed message file")
      ->required();
  decompress->add_option("-o,--output", decompress_args.output,
                         "output file (default stdout)");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "compression report over test files");
  bench->add_option("-c,--codebook", bench_args.codebook, "codebook file")->required();
  bench->add_option("inputs", bench_args.inputs, "held-out test files")
      ->required()
      ->check(CLI::ExistingFile);
  bench->add_option("--block-size", bench_args.block_size, "max code points per block")
      ->check(CLI::PositiveNumber);
  bench->add_option("--max-blocks", bench_args.max_blocks,
                    "random sample size per file (default: all blocks)");
  bench->add_option("--seed", bench_args.seed, "sampling seed");
  bench->add_flag("--csv", bench_args.csv, "emit CSV instead of a table");
  bench->add_flag("--allow-overlap", bench_args.allow_overlap,
                  "suppress the corpus-disjointness reminder");
  bench->add_option("--disable-level", bench_args.disable_levels,
                    "exclude a codebook level from matching")
      ->check(CLI::Range(1, 4));
  bench->add_option("--competitor", bench_args.competitors,
                    "extra column, NAME=v1,v2,...");
  bench->add_option("-o,--output", bench_args.output, "output file (default stdout)");
  bench->add_option("--symbols", bench_args.symbols, "symbol table file");

  HyphenateArgs hyphenate_args;
  auto* hyph = app.add_subcommand("hyphenate", "show a word's syllables");
  hyph->add_option("word", hyphenate_args.word, "word to hyphenate")->required();
  hyph->add_option("--variant", hyphenate_args.variant, "hyphenation variant")
      ->check(CLI::IsMember({"ul", "ur", "uml", "umr"}));
  hyph->add_option("--symbols", hyphenate_args.symbols, "symbol table file");

  StatsArgs stats_args;
  auto* stats = app.add_subcommand("stats", "inspect a codebook");
  stats->add_option("-c,--codebook", stats_args.codebook, "codebook file")->required();
  stats->add_option("--top", stats_args.top, "number of top entries to list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (build->parsed()) return cmd_build(build_args);
    if (compress->parsed()) return cmd_compress(compress_args);
    if (decompress->parsed()) return cmd_decompress(decompress_args);
    if (bench->parsed()) return cmd_bench(bench_args);
    if (hyph->parsed()) return cmd_hyphenate(hyphenate_args);
    if (stats->parsed()) return cmd_stats(stats_args);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const shotik::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
