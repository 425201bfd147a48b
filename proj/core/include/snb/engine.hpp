#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snb/avm.hpp"
#include "snb/generator.hpp"
#include "snb/grammar.hpp"
#include "snb/memo.hpp"
#include "snb/parser.hpp"
#include "snb/transfer.hpp"

namespace snb {

/// Files that make up one language pair.
struct EngineConfig {
  std::filesystem::path source_lexicon;
  std::filesystem::path target_lexicon;
  std::filesystem::path bilingual;
  std::filesystem::path source_grammar;
  std::filesystem::path target_grammar;
  /// Overrides the target grammar's goal with {cat: <name>, subcat: []}.
  std::string goal_category;

  /// english.lex, french.lex, english-french.bil, english.grammar and
  /// french.grammar inside `dir`.
  static EngineConfig from_directory(const std::filesystem::path& dir);
  /// $SNB_FIXTURES if set, else the fixture directory this build was
  /// configured with.
  static std::filesystem::path default_fixture_dir();
};

struct TranslateOptions {
  GenMode mode = GenMode::MemoIndex;
  /// Carry one memo table across all target bags of a sentence. Signs get
  /// the transfer's global token ids as tags so common signs share tags.
  bool share_memo = false;
  /// Stop each bag after its first sentence.
  bool first_only = false;
};

struct BagGeneration {
  std::size_t bag_id = 0;  // 1-based, in transfer order
  std::vector<GenResult> results;
  std::uint64_t calls = 0;
  std::uint64_t hits = 0;  // memo modes only; deltas for this bag
  std::uint64_t misses = 0;
};

struct Translation {
  std::size_t parse_id = 0;  // 1-based
  Parse parse;
  TransferResult transfer;
  std::vector<BagGeneration> bags;

  std::size_t sentence_count() const;
  std::size_t productive_bags() const;
};

/// Compiled lexicons and grammars for one language pair. Immutable after
/// loading, so one Engine may serve concurrent sessions.
class Engine {
 public:
  /// Reads and compiles every file. Throws FileError or SyntaxError naming
  /// the file.
  static Engine load(const EngineConfig& config);
  static Engine from_text(std::string_view source_lexicon, std::string_view target_lexicon,
                          std::string_view bilingual, std::string_view source_grammar,
                          std::string_view target_grammar);

  const Lexicon& source_lexicon() const { return source_lexicon_; }
  const Lexicon& target_lexicon() const { return target_lexicon_; }
  const Bilingual& bilingual() const { return bilingual_; }
  const Grammar& source_grammar() const { return source_grammar_; }
  const Grammar& target_grammar() const { return target_grammar_; }
  const Avm& source_goal() const { return source_goal_; }
  const Avm& target_goal() const { return target_goal_; }

  std::vector<Parse> parse(std::string_view sentence) const;
  TransferResult transfer(const SignBag& source_bag) const;
  BagGeneration generate(const SignBag& bag, GenSession& session, bool first_only = false,
                         std::span<const Tag> tags = {}) const;

  /// parse -> transfer -> generate over every target bag of every parse.
  /// Returns one Translation per parse (empty when the sentence has none).
  std::vector<Translation> translate(std::string_view sentence,
                                     const TranslateOptions& options = {}) const;

 private:
  Lexicon source_lexicon_;
  Lexicon target_lexicon_;
  Bilingual bilingual_;
  Grammar source_grammar_;
  Grammar target_grammar_;
  Avm source_goal_;
  Avm target_goal_;
};

/// Reads a whole file; throws FileError.
std::string read_file(const std::filesystem::path& path);

}  // namespace snb
