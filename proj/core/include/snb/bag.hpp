#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "snb/avm.hpp"

namespace snb {

/// A multiset of signs. Order is kept because it fixes the generator's
/// shift order and tag assignment, but carries no linguistic meaning.
struct SignBag {
  std::vector<Avm> signs;

  std::size_t size() const { return signs.size(); }
  bool empty() const { return signs.empty(); }
  /// Phonology of every sign, concatenated in bag order.
  std::vector<std::string> words() const;
};

/// A bag as stored in a bag file: signs plus optional explicit tags.
struct BagRecord {
  SignBag bag;
  std::vector<std::uint32_t> tags;  // empty, or one per sign
};

/// Bag file: one canonical AVM per line, optionally prefixed `tagN:`.
/// Blank lines separate bags; `%` starts a comment. Variable names are
/// shared across the lines of one bag.
std::vector<BagRecord> read_bag_file(std::string_view text, const std::string& source = "<bag>");

/// Serializes one bag in bag-file syntax with a joint variable numbering.
std::string write_bag(const SignBag& bag, const std::vector<std::uint32_t>& tags = {});

}  // namespace snb
