#include "snb/memo.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace snb {

BigIndex calc_index(std::span<const Tag> tags) {
  BigIndex value = 0;
  for (Tag t : tags) {
    if (t == 0) throw std::invalid_argument("tags are positive integers");
    if (boost::multiprecision::bit_test(value, t - 1))
      throw std::invalid_argument("repeated tag " + std::to_string(t));
    value += BigIndex(1) << (t - 1);
  }
  return value;
}

MemoKey MemoKey::make(KeyMode mode, std::span<const Tag> tags) {
  MemoKey key;
  if (mode == KeyMode::Index) {
    key.value_ = calc_index(tags);
  } else {
    std::vector<Tag> sorted(tags.begin(), tags.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("repeated tag in memo key");
    key.value_ = std::move(sorted);
  }
  return key;
}

std::size_t MemoTable::IndexHash::operator()(const BigIndex& v) const {
  return static_cast<std::size_t>(boost::multiprecision::hash_value(v));
}

std::size_t MemoTable::ListHash::operator()(const std::vector<Tag>& v) const {
  std::size_t h = v.size();
  for (Tag t : v) h ^= std::hash<Tag>{}(t) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

const MemoOutcome* MemoTable::find(const MemoKey& key) const {
  if (const BigIndex* i = key.index()) {
    auto it = by_index_.find(*i);
    return it == by_index_.end() ? nullptr : &it->second;
  }
  auto it = by_list_.find(*key.tag_list());
  return it == by_list_.end() ? nullptr : &it->second;
}

const MemoOutcome& MemoTable::store(const MemoKey& key, MemoOutcome outcome) {
  if (key.mode() != mode_) throw std::logic_error("memo key mode does not match the table");
  if (const BigIndex* i = key.index()) {
    auto [it, inserted] = by_index_.try_emplace(*i, std::move(outcome));
    if (!inserted) throw std::logic_error("memo entry already stored");
    return it->second;
  }
  auto [it, inserted] = by_list_.try_emplace(*key.tag_list(), std::move(outcome));
  if (!inserted) throw std::logic_error("memo entry already stored");
  return it->second;
}

MemoStats memo_stats(const MemoTable& memo) {
  MemoStats s;
  s.hits = memo.hits();
  s.misses = memo.misses();
  s.calls = s.hits + s.misses;
  s.hit_ratio = s.calls == 0 ? 0.0 : static_cast<double>(s.hits) / static_cast<double>(s.calls);
  return s;
}

}  // namespace snb
