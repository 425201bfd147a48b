#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snb/avm.hpp"

namespace snb {

// Sign geometry used throughout:
//   {phon: [w...], cat: C, head: {...}, subcat: [sign...], sem: {index: I, args: [...]}, mod: sign}
// `mod` appears only on modifiers.

struct LexiconEntry {
  std::string word;
  std::string macro;
  std::vector<std::string> args;  // as written; macro arguments keep their '@'
  Avm sign;
  int line = 0;
};

/// A compiled unilingual lexicon. Immutable once compiled.
class Lexicon {
 public:
  static constexpr std::size_t kDefaultBranching = 3;

  /// Parses `entry @macro(args).` statements and an optional `branching N.`
  /// header. Throws SyntaxError with the offending line.
  static Lexicon compile(std::string_view text, std::string source = "<lexicon>");

  std::span<const LexiconEntry> entries() const { return entries_; }
  std::size_t max_branching() const { return max_branching_; }
  bool contains(std::string_view word) const;

 private:
  std::vector<LexiconEntry> entries_;
  std::size_t max_branching_ = kDefaultBranching;
};

/// Fresh variants of every sign listed for `word`, in file order.
std::vector<Avm> lexical_signs(const Lexicon& lexicon, std::string_view word);

/// Names of the built-in lexical templates, for diagnostics and docs.
std::vector<std::string> lexical_template_names();

enum class Principle {
  HeadFeature,  // mother shares head and sem with the head daughter
  Subcat,       // non-head daughters cancel the rightmost subcat slots
  Agreement,    // a non-head daughter's mod unifies with the head daughter
};

std::string_view principle_name(Principle p);
std::optional<Principle> principle_from_name(std::string_view name);

struct Rule {
  std::string id;
  Avm mother;
  std::vector<Avm> daughters;  // patterns, in surface order
  std::size_t head = 0;        // 0-based index into daughters
  std::vector<Principle> constraints;
  int line = 0;

  std::size_t arity() const { return daughters.size(); }
};

class Grammar {
 public:
  Grammar() = default;
  explicit Grammar(std::vector<Rule> rules, std::optional<Avm> goal = std::nullopt);

  /// Parses `rule id: M -> D1 ... Dk head=j constraints=[...].` statements
  /// (j is 1-based) and an optional `goal AVM.` statement.
  static Grammar compile(std::string_view text, std::string source = "<grammar>");

  std::span<const Rule> rules() const { return rules_; }
  std::size_t max_branching() const { return max_branching_; }
  /// The goal sign pattern, or nullopt if the file declared none.
  const std::optional<Avm>& goal() const { return goal_; }

 private:
  std::vector<Rule> rules_;
  std::size_t max_branching_ = 0;
  std::optional<Avm> goal_;
};

/// True if some top-level feature of `pattern` and `daughter` holds two
/// different atoms or lists of different lengths, so unification must fail.
bool shallow_clash(const Avm& pattern, const Avm& daughter);

/// Unifies `daughters[i]` with the rule's i-th pattern, runs the rule's
/// principles and sets mother.phon to the concatenated daughter phons.
/// Returns the instantiated mother with its bindings left on `trail`; on
/// failure the trail is rolled back and nullopt returned.
/// Throws std::invalid_argument when the daughter count does not match.
std::optional<Avm> apply_rule_ordered(const Grammar& grammar, const Rule& rule,
                                      std::span<const Avm> daughters, Trail& trail);

/// Phonology of a sign as a token list; nullopt unless phon is a list of atoms.
std::optional<std::vector<std::string>> phon_of(const Avm& sign);

}  // namespace snb
