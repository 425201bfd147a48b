#include "cli.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "snb/bench.hpp"
#include "snb/engine.hpp"
#include "snb/error.hpp"

namespace snb::cli {

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kNothing = 2;

class NoParse : public Error {
 public:
  explicit NoParse(const std::string& sentence) : Error("no parse: " + sentence) {}
};

struct Options {
  std::string fixtures;
  std::string source_lex, target_lex, bilingual, source_grammar, target_grammar;
  std::string goal;
  std::string mode = "memo-int";
  bool share_memo = false;
  bool first = false;
  bool all = false;
  bool distinct = false;
  bool stats = false;
  bool dump_signs = false;

  std::string sentence;
  std::string bag_file;
  std::string from;
  bool bag_only = false;
  std::string format = "table";
  int runs = 5;
  std::string modes = "naive,memo-int,memo-list";
};

GenMode parse_mode(const std::string& name) {
  if (auto m = mode_from_name(name)) return *m;
  throw Error("unknown mode: " + name);
}

Engine load_engine(const Options& o) {
  EngineConfig config = EngineConfig::from_directory(
      o.fixtures.empty() ? EngineConfig::default_fixture_dir() : std::filesystem::path(o.fixtures));
  if (!o.source_lex.empty()) config.source_lexicon = o.source_lex;
  if (!o.target_lex.empty()) config.target_lexicon = o.target_lex;
  if (!o.bilingual.empty()) config.bilingual = o.bilingual;
  if (!o.source_grammar.empty()) config.source_grammar = o.source_grammar;
  if (!o.target_grammar.empty()) config.target_grammar = o.target_grammar;
  config.goal_category = o.goal;
  return Engine::load(config);
}

std::vector<Parse> parse_or_fail(const Engine& engine, const std::string& sentence) {
  auto parses = engine.parse(sentence);
  if (parses.empty()) throw NoParse(sentence);
  return parses;
}

void dump(std::ostream& err, const Options& o, const std::string& stage, const SignBag& bag) {
  if (!o.dump_signs) return;
  err << "% " << stage << '\n';
  std::istringstream lines(write_bag(bag));
  for (std::string line; std::getline(lines, line);) err << "%   " << line << '\n';
}

std::string join(const std::vector<std::string>& words) {
  std::string s;
  for (const auto& w : words) s += (s.empty() ? "" : " ") + w;
  return s;
}

/// Generates every bag in order, printing `bag K: sentence` lines. Bag ids
/// run on across the list. Returns the number of sentences printed.
std::size_t generate_bags(const Engine& engine, const std::vector<SignBag>& bags,
                          const std::vector<std::vector<Tag>>& tags, Tag tag_floor,
                          const Options& o, std::ostream& out, std::ostream& err) {
  const GenMode mode = parse_mode(o.mode);
  const bool first_only = o.first && !o.all;
  std::optional<GenSession> shared;
  if (o.share_memo) {
    shared.emplace(mode);
    shared->reserve_tags(tag_floor);
  }

  std::size_t printed = 0;
  std::size_t productive = 0;
  std::uint64_t calls = 0, hits = 0, misses = 0;
  std::vector<std::string> stat_lines;
  for (std::size_t b = 0; b < bags.size(); ++b) {
    std::optional<GenSession> own;
    if (!shared) own.emplace(mode);
    GenSession& session = shared ? *shared : *own;
    const std::span<const Tag> bag_tags =
        b < tags.size() ? std::span<const Tag>(tags[b]) : std::span<const Tag>();
    const BagGeneration gen = engine.generate(bags[b], session, first_only, bag_tags);

    std::set<std::string> seen;
    for (const auto& r : gen.results) {
      const std::string s = join(r.sentence);
      if (o.distinct && !seen.insert(s).second) continue;
      out << "bag " << b + 1 << ": " << s << '\n';
      ++printed;
      if (o.dump_signs) err << "% bag " << b + 1 << " root: " << canonical(r.root) << '\n';
    }
    if (!gen.results.empty()) ++productive;
    calls += gen.calls;
    hits += gen.hits;
    misses += gen.misses;
    std::ostringstream line;
    line << "stats: bag " << b + 1 << " sentences=" << gen.results.size() << " calls=" << gen.calls;
    if (session.memoized()) {
      line << " hits=" << gen.hits << " misses=" << gen.misses << " ratio="
           << format_ratio(gen.calls ? double(gen.hits) / double(gen.calls) : 0.0);
    }
    stat_lines.push_back(line.str());
  }
  if (o.stats) {
    for (const auto& l : stat_lines) out << l << '\n';
    out << "stats: total bags=" << bags.size() << " productive=" << productive
        << " sentences=" << printed << " calls=" << calls;
    if (mode != GenMode::Naive) {
      out << " hits=" << hits << " misses=" << misses
          << " ratio=" << format_ratio(calls ? double(hits) / double(calls) : 0.0);
    }
    out << '\n';
  }
  return printed;
}

/// Parse and transfer `sentence`: every target bag of every parse, in order.
TransferResult transfer_sentence(const Engine& engine, const std::string& sentence, const Options& o,
                                 std::ostream& err) {
  TransferResult all;
  for (const auto& parse : parse_or_fail(engine, sentence)) {
    dump(err, o, "source bag", parse.bag);
    TransferResult t = engine.transfer(parse.bag);
    for (auto& tb : t.bags) {
      for (auto& tok : tb.tokens) tok += all.token_count;
      all.bags.push_back(std::move(tb));
    }
    all.token_count += t.token_count;
  }
  for (std::size_t b = 0; b < all.bags.size(); ++b)
    dump(err, o, "target bag " + std::to_string(b + 1), all.bags[b].bag);
  return all;
}

int cmd_parse(const Engine& engine, const Options& o, std::ostream& out) {
  const auto parses = parse_or_fail(engine, o.sentence);
  for (std::size_t p = 0; p < parses.size(); ++p) {
    if (p) out << '\n';
    if (!o.bag_only) {
      // Root and leaves share one variable numbering.
      const auto& d = parses[p].derivation;
      std::vector<Avm> nodes{d.root};
      nodes.insert(nodes.end(), d.leaves.begin(), d.leaves.end());
      std::istringstream lines(canonical(nodes, "\n"));
      out << "% parse " << p + 1 << '\n';
      std::string line;
      std::getline(lines, line);
      out << "% root: " << line << '\n';
      for (std::size_t i = 1; std::getline(lines, line); ++i)
        out << "% leaf " << i << ": " << line << '\n';
    }
    out << write_bag(parses[p].bag);
  }
  return kOk;
}

int cmd_transfer(const Engine& engine, const Options& o, std::ostream& out, std::ostream& err) {
  const TransferResult t = transfer_sentence(engine, o.sentence, o, err);
  for (std::size_t b = 0; b < t.bags.size(); ++b) {
    if (b) out << '\n';
    out << "% bag " << b + 1 << '\n';
    out << write_bag(t.bags[b].bag);
  }
  if (o.stats) out << "stats: bags=" << t.bags.size() << " tokens=" << t.token_count << '\n';
  return kOk;
}

int cmd_generate(const Engine& engine, const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<SignBag> bags;
  std::vector<std::vector<Tag>> tags;
  Tag floor = 0;
  if (!o.from.empty()) {
    TransferResult t = transfer_sentence(engine, o.from, o, err);
    for (auto& tb : t.bags) {
      if (o.share_memo) tags.push_back(tb.tokens);
      bags.push_back(std::move(tb.bag));
    }
    floor = t.token_count;
  } else {
    const std::string text = read_file(o.bag_file);
    auto records = read_bag_file(text, o.bag_file);
    if (records.empty()) throw Error("empty bag file: " + o.bag_file);
    const bool any_tags = std::any_of(records.begin(), records.end(),
                                      [](const BagRecord& r) { return !r.tags.empty(); });
    for (auto& r : records) {
      dump(err, o, "bag " + std::to_string(bags.size() + 1), r.bag);
      if (any_tags) {
        if (r.tags.empty()) {
          r.tags.resize(r.bag.size());
          std::iota(r.tags.begin(), r.tags.end(), 1u);
        }
        for (Tag t : r.tags) floor = std::max(floor, t);
        tags.push_back(r.tags);
      }
      bags.push_back(std::move(r.bag));
    }
  }
  return generate_bags(engine, bags, tags, floor, o, out, err) ? kOk : kNothing;
}

int cmd_translate(const Engine& engine, const Options& o, std::ostream& out, std::ostream& err) {
  TransferResult t = transfer_sentence(engine, o.sentence, o, err);
  std::vector<SignBag> bags;
  std::vector<std::vector<Tag>> tags;
  for (auto& tb : t.bags) {
    if (o.share_memo) tags.push_back(tb.tokens);
    bags.push_back(std::move(tb.bag));
  }
  return generate_bags(engine, bags, tags, t.token_count, o, out, err) ? kOk : kNothing;
}

int cmd_bench(const Engine& engine, const Options& o, std::ostream& out, std::ostream& err) {
  BenchOptions bo;
  bo.runs = o.runs;
  bo.modes.clear();
  std::stringstream list(o.modes);
  for (std::string name; std::getline(list, name, ',');)
    if (!name.empty()) bo.modes.push_back(parse_mode(name));

  ReportFormat format = ReportFormat::Table;
  if (o.format == "tsv") format = ReportFormat::Tsv;
  else if (o.format == "jsonl") format = ReportFormat::JsonLines;

  const auto sentences = fixture_sentences();
  const GenReport report = run_bench(engine, sentences, bo);
  out << emit_report(report, format);
  // Keep machine-readable formats clean on stdout.
  (format == ReportFormat::Table ? out : err) << emit_checks(report);
  return report.all_passed() ? kOk : kError;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shake-and-bake machine translation"};
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--fixtures", o.fixtures, "Directory holding the default lexicons and grammars");
  app.add_option("--source-lexicon", o.source_lex, "Source lexicon file");
  app.add_option("--target-lexicon", o.target_lex, "Target lexicon file");
  app.add_option("--bilingual", o.bilingual, "Bilingual lexicon file");
  app.add_option("--source-grammar", o.source_grammar, "Source grammar file");
  app.add_option("--target-grammar", o.target_grammar, "Target grammar file");
  app.add_option("--goal", o.goal, "Goal category for generation");
  app.add_option("--mode", o.mode, "naive, memo-int or memo-list")
      ->check(CLI::IsMember({"naive", "memo-int", "memo-list"}));
  app.add_flag("--share-memo", o.share_memo, "Carry one memo table across target bags");
  auto* first = app.add_flag("--first", o.first, "Stop each bag at its first sentence");
  app.add_flag("--all", o.all, "Enumerate every sentence (default)")->excludes(first);
  app.add_flag("--distinct", o.distinct, "Print each sentence of a bag once");
  app.add_flag("--stats", o.stats, "Append counter lines");
  app.add_flag("--dump-signs", o.dump_signs, "Write the signs of every stage to stderr");

  auto* parse = app.add_subcommand("parse", "Parse a sentence and print its bag");
  parse->add_option("sentence", o.sentence)->required();
  parse->add_flag("--bag-only", o.bag_only, "Only the bag, one sign per line");

  auto* transfer = app.add_subcommand("transfer", "Print the target bags of a sentence");
  transfer->add_option("sentence", o.sentence)->required();

  auto* generate = app.add_subcommand("generate", "Generate from a bag file or a sentence");
  auto* bag_opt = generate->add_option("bag-file", o.bag_file);
  auto* from_opt = generate->add_option("--from", o.from, "Source sentence to transfer first");
  bag_opt->excludes(from_opt);
  generate->require_option(1);

  auto* translate = app.add_subcommand("translate", "Translate a sentence");
  translate->add_option("sentence", o.sentence)->required();

  auto* bench = app.add_subcommand("bench", "Run the generation benchmark");
  bench->add_option("--format", o.format)->check(CLI::IsMember({"table", "tsv", "jsonl"}));
  bench->add_option("--runs", o.runs, "Timing runs per mode (median)")->check(CLI::PositiveNumber);
  bench->add_option("--modes", o.modes, "Comma-separated modes to time");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  try {
    const Engine engine = load_engine(o);
    if (parse->parsed()) return cmd_parse(engine, o, out);
    if (transfer->parsed()) return cmd_transfer(engine, o, out, err);
    if (generate->parsed()) return cmd_generate(engine, o, out, err);
    if (translate->parsed()) return cmd_translate(engine, o, out, err);
    return cmd_bench(engine, o, out, err);
  } catch (const NoParse& e) {
    err << e.what() << '\n';
    return translate->parsed() ? kNothing : kError;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kError;
  }
}

}  // namespace snb::cli
