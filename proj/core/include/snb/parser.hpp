#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snb/avm.hpp"
#include "snb/bag.hpp"
#include "snb/grammar.hpp"

namespace snb {

struct Derivation {
  Avm root;
  std::vector<Avm> leaves;  // instantiated lexical signs, left to right
};

struct Parse {
  Derivation derivation;
  SignBag bag;  // fresh variants of the leaves; sharing between leaves kept
};

/// Whitespace split with ASCII lowercasing.
std::vector<std::string> tokenize(std::string_view sentence);

/// Bottom-up chart parse of `tokens`, returning every complete analysis
/// whose root unifies with `goal`, each with its bag of instantiated leaves.
/// Throws UnknownWord for a token the lexicon does not list.
std::vector<Parse> parse_to_bag(const Grammar& grammar, const Lexicon& lexicon,
                                std::span<const std::string> tokens, const Avm& goal);

/// As above with the grammar's declared goal.
std::vector<Parse> parse_to_bag(const Grammar& grammar, const Lexicon& lexicon,
                                std::span<const std::string> tokens);

}  // namespace snb
