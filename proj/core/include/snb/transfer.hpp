#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snb/avm.hpp"
#include "snb/bag.hpp"
#include "snb/error.hpp"
#include "snb/grammar.hpp"

namespace snb {

/// One path equation: sign.path = variable, or sign.path = constant.
struct Equation {
  Path path;
  std::string var;              // empty for a constant equation
  std::optional<Avm> constant;  // set for a constant equation
};

/// Constraint macros, e.g. `@semindex(X)`, compile to equations on the
/// first word of their side.
struct BilingualSide {
  std::vector<std::string> words;
  std::vector<Equation> equations;
};

struct BilingualEntry {
  BilingualSide source;
  BilingualSide target;
  int line = 0;
};

class Bilingual {
 public:
  /// Parses `w... [entry C (& C)*] <==> v... [entry C (& C)*].` statements.
  static Bilingual compile(std::string_view text, std::string source = "<bilingual>");

  std::span<const BilingualEntry> entries() const { return entries_; }
  /// Target-side variables that no source-side equation binds.
  std::span<const std::string> warnings() const { return warnings_; }

 private:
  std::vector<BilingualEntry> entries_;
  std::vector<std::string> warnings_;
};

/// A source sign no bilingual entry can cover.
class UncoveredSign : public Error {
 public:
  explicit UncoveredSign(std::string word)
      : Error("uncovered source sign: " + word), word_(std::move(word)) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

struct TargetBag {
  SignBag bag;
  /// Entry indices of the cover, in the order they were chosen.
  std::vector<std::size_t> cover;
  /// One token id per target sign, global across the whole transfer: a
  /// target sign produced the same way in two bags has the same id.
  std::vector<std::uint32_t> tokens;
};

struct TransferResult {
  std::vector<TargetBag> bags;
  std::uint32_t token_count = 0;  // ids run 1..token_count
};

/// Calls `visit` for every exact cover of `source` by bilingual entries, in
/// lexicographic order of entry choice (file order). Return false from
/// `visit` to stop early. Variables of the source bag are grounded to
/// index constants (`$x1`, `$x2`, ...) before matching, so indices shared by
/// source signs arrive as shared constants in the target signs.
void enumerate_target_bags(const Bilingual& bilingual, const SignBag& source,
                           const Lexicon& target_lexicon,
                           const std::function<bool(const TargetBag&)>& visit);

TransferResult transfer_bags(const Bilingual& bilingual, const SignBag& source,
                             const Lexicon& target_lexicon);

}  // namespace snb
