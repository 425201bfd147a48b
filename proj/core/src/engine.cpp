#include "snb/engine.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "snb/error.hpp"

#ifndef SNB_FIXTURE_DIR
#define SNB_FIXTURE_DIR "data"
#endif

namespace snb {

namespace {

Avm resolve_goal(const Grammar& grammar, const std::string& category, const std::string& what) {
  if (!category.empty())
    return Avm::record({{"cat", Avm::atom(category)}, {"subcat", Avm::list({})}});
  if (!grammar.goal()) throw Error(what + " grammar declares no goal");
  return *grammar.goal();
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

EngineConfig EngineConfig::from_directory(const std::filesystem::path& dir) {
  EngineConfig c;
  c.source_lexicon = dir / "english.lex";
  c.target_lexicon = dir / "french.lex";
  c.bilingual = dir / "english-french.bil";
  c.source_grammar = dir / "english.grammar";
  c.target_grammar = dir / "french.grammar";
  return c;
}

std::filesystem::path EngineConfig::default_fixture_dir() {
  if (const char* env = std::getenv("SNB_FIXTURES"); env && *env) return env;
  return SNB_FIXTURE_DIR;
}

std::size_t Translation::sentence_count() const {
  std::size_t n = 0;
  for (const auto& b : bags) n += b.results.size();
  return n;
}

std::size_t Translation::productive_bags() const {
  std::size_t n = 0;
  for (const auto& b : bags) n += b.results.empty() ? 0 : 1;
  return n;
}

Engine Engine::load(const EngineConfig& config) {
  Engine e;
  e.source_lexicon_ = Lexicon::compile(read_file(config.source_lexicon), config.source_lexicon.string());
  e.target_lexicon_ = Lexicon::compile(read_file(config.target_lexicon), config.target_lexicon.string());
  e.bilingual_ = Bilingual::compile(read_file(config.bilingual), config.bilingual.string());
  e.source_grammar_ = Grammar::compile(read_file(config.source_grammar), config.source_grammar.string());
  e.target_grammar_ = Grammar::compile(read_file(config.target_grammar), config.target_grammar.string());
  e.source_goal_ = resolve_goal(e.source_grammar_, "", "source");
  e.target_goal_ = resolve_goal(e.target_grammar_, config.goal_category, "target");
  if (e.target_grammar_.max_branching() > e.target_lexicon_.max_branching())
    throw Error("target grammar has rules wider than the declared branching factor of " +
                config.target_lexicon.string());
  return e;
}

Engine Engine::from_text(std::string_view source_lexicon, std::string_view target_lexicon,
                         std::string_view bilingual, std::string_view source_grammar,
                         std::string_view target_grammar) {
  Engine e;
  e.source_lexicon_ = Lexicon::compile(source_lexicon, "<source lexicon>");
  e.target_lexicon_ = Lexicon::compile(target_lexicon, "<target lexicon>");
  e.bilingual_ = Bilingual::compile(bilingual, "<bilingual>");
  e.source_grammar_ = Grammar::compile(source_grammar, "<source grammar>");
  e.target_grammar_ = Grammar::compile(target_grammar, "<target grammar>");
  e.source_goal_ = resolve_goal(e.source_grammar_, "", "source");
  e.target_goal_ = resolve_goal(e.target_grammar_, "", "target");
  return e;
}

std::vector<Parse> Engine::parse(std::string_view sentence) const {
  const auto tokens = tokenize(sentence);
  if (tokens.empty()) throw Error("empty sentence");
  return parse_to_bag(source_grammar_, source_lexicon_, tokens, source_goal_);
}

TransferResult Engine::transfer(const SignBag& source_bag) const {
  return transfer_bags(bilingual_, source_bag, target_lexicon_);
}

BagGeneration Engine::generate(const SignBag& bag, GenSession& session, bool first_only,
                               std::span<const Tag> tags) const {
  BagGeneration out;
  const std::uint64_t calls0 = session.calls();
  const std::uint64_t hits0 = session.memo() ? session.memo()->hits() : 0;
  const std::uint64_t misses0 = session.memo() ? session.memo()->misses() : 0;
  auto collect = [&](const GenResult& r) {
    out.results.push_back(r);
    return !first_only;
  };
  if (tags.empty()) {
    shake_generate(target_grammar_, bag, target_goal_, session, collect);
  } else {
    shake_generate(target_grammar_, tag_bag(bag, tags), target_goal_, session, collect);
  }
  out.calls = session.calls() - calls0;
  if (session.memo()) {
    out.hits = session.memo()->hits() - hits0;
    out.misses = session.memo()->misses() - misses0;
  }
  return out;
}

std::vector<Translation> Engine::translate(std::string_view sentence,
                                           const TranslateOptions& options) const {
  std::vector<Translation> out;
  auto parses = parse(sentence);
  for (std::size_t p = 0; p < parses.size(); ++p) {
    Translation t;
    t.parse_id = p + 1;
    t.parse = std::move(parses[p]);
    t.transfer = transfer(t.parse.bag);
    std::optional<GenSession> shared;
    if (options.share_memo) {
      shared.emplace(options.mode);
      shared->reserve_tags(t.transfer.token_count);
    }
    for (std::size_t b = 0; b < t.transfer.bags.size(); ++b) {
      const TargetBag& target = t.transfer.bags[b];
      BagGeneration g;
      if (shared) {
        g = generate(target.bag, *shared, options.first_only, target.tokens);
      } else {
        GenSession session(options.mode);
        g = generate(target.bag, session, options.first_only);
      }
      g.bag_id = b + 1;
      t.bags.push_back(std::move(g));
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace snb
