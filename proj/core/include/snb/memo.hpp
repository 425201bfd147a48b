#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "snb/avm.hpp"

namespace snb {

using Tag = std::uint32_t;
using BigIndex = boost::multiprecision::cpp_int;

/// A sign token inside one generation session.
struct TaggedSign {
  Avm sign;
  Tag tag = 0;
};

/// Sum of 2^(t-1) over `tags`: one bit per tag, so distinct tag sets get
/// distinct values regardless of order. Arbitrary precision; empty -> 0.
/// Throws std::invalid_argument on a zero or repeated tag.
BigIndex calc_index(std::span<const Tag> tags);

enum class KeyMode { Index, TagList };

/// Order-insensitive key for a set of daughter tags.
class MemoKey {
 public:
  static MemoKey make(KeyMode mode, std::span<const Tag> tags);

  KeyMode mode() const { return std::holds_alternative<BigIndex>(value_) ? KeyMode::Index : KeyMode::TagList; }
  const BigIndex* index() const { return std::get_if<BigIndex>(&value_); }
  /// Ascending tags (TagList keys only).
  const std::vector<Tag>* tag_list() const { return std::get_if<std::vector<Tag>>(&value_); }

  bool operator==(const MemoKey&) const = default;

 private:
  std::variant<BigIndex, std::vector<Tag>> value_;
};

/// Stored result of one unordered-rule application: the mothers it built,
/// each tagged when stored. An empty list records failure.
struct MemoOutcome {
  std::vector<TaggedSign> mothers;
  bool failed() const { return mothers.empty(); }
};

/// Memo table keyed by daughter tag sets, with hit and miss counters.
class MemoTable {
 public:
  explicit MemoTable(KeyMode mode = KeyMode::Index) : mode_(mode) {}

  KeyMode key_mode() const { return mode_; }

  const MemoOutcome* find(const MemoKey& key) const;
  /// Entries are write-once; storing an existing key throws std::logic_error.
  const MemoOutcome& store(const MemoKey& key, MemoOutcome outcome);

  void count_hit() { ++hits_; }
  void count_miss() { ++misses_; }
  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }
  std::size_t size() const { return by_index_.size() + by_list_.size(); }

 private:
  struct IndexHash {
    std::size_t operator()(const BigIndex& v) const;
  };
  struct ListHash {
    std::size_t operator()(const std::vector<Tag>& v) const;
  };

  KeyMode mode_;
  std::unordered_map<BigIndex, MemoOutcome, IndexHash> by_index_;
  std::unordered_map<std::vector<Tag>, MemoOutcome, ListHash> by_list_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

struct MemoStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t calls = 0;
  double hit_ratio = 0.0;
};

MemoStats memo_stats(const MemoTable& memo);

}  // namespace snb
