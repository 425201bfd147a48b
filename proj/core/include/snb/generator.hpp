#pragma once

// Shake-and-bake bag generation: a shift-reduce search over a bag of signs
// where every reduction combines the stack top with any subset of the rest
// of the stack, trying all daughter orders against every rule.

#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "snb/avm.hpp"
#include "snb/bag.hpp"
#include "snb/grammar.hpp"
#include "snb/memo.hpp"

namespace snb {

/// Tags 1..N in bag order. The signs are copied and any variable shared by
/// two signs is grounded to a constant, so every tagged sign is
/// self-contained and a tag always denotes the same sign.
std::vector<TaggedSign> tag_bag(const SignBag& bag);
/// As above with caller-chosen tags (pairwise distinct, positive).
std::vector<TaggedSign> tag_bag(const SignBag& bag, std::span<const Tag> tags);

/// Enumerates every way to pick `k` elements of `stack` by position, in
/// lexicographic order of positions. `visit(chosen, rest)` sees the picked
/// elements and the remainder, both in stack order; returning false stops
/// the enumeration, and the function then returns false.
template <class T, class Visit>
bool difference_select(std::span<const T> stack, std::size_t k, Visit&& visit) {
  const std::size_t n = stack.size();
  if (k > n) throw std::invalid_argument("difference_select: k exceeds stack size");
  std::vector<std::size_t> pos(k);
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  std::vector<T> chosen;
  std::vector<T> rest;
  for (;;) {
    chosen.clear();
    rest.clear();
    std::size_t p = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (p < k && pos[p] == i) {
        chosen.push_back(stack[i]);
        ++p;
      } else {
        rest.push_back(stack[i]);
      }
    }
    if (!visit(std::span<const T>(chosen), std::span<const T>(rest))) return false;
    // Advance to the next combination.
    std::size_t i = k;
    while (i > 0 && pos[i - 1] == n - k + i - 1) --i;
    if (i == 0) return true;
    ++pos[i - 1];
    for (std::size_t j = i; j < k; ++j) pos[j] = pos[j - 1] + 1;
  }
}

enum class GenMode { Naive, MemoIndex, MemoTagList };

std::string_view mode_name(GenMode mode);
std::optional<GenMode> mode_from_name(std::string_view name);

/// Tries every rule of matching arity (grammar order) against every
/// permutation of `daughters` (lexicographic order) and passes each mother
/// built to `visit`. The trail is back at its entry mark whenever `visit`
/// runs. Returns false if `visit` stopped the enumeration.
bool unordered_rule_naive(const Grammar& grammar, std::span<const TaggedSign> daughters,
                          Trail& trail, const std::function<bool(const Avm&)>& visit);

struct GenObserver {
  /// After all reductions from a state: stack size and number of
  /// unordered-rule invocations made from that state.
  std::function<void(std::size_t stack_size, std::size_t calls)> state_reduced;
  /// On every memo hit: the daughters and the stored outcome returned.
  std::function<void(std::span<const TaggedSign> daughters, const MemoOutcome& outcome)> memo_hit;
};

/// Memoized unordered rule application. On a hit the stored mothers (or
/// nothing, for a stored failure) are replayed without touching the
/// grammar. On a miss the naive search runs to exhaustion, each mother gets
/// the next tag from `next_tag`, the complete outcome is stored and then
/// replayed. Returns false if `visit` stopped the enumeration.
bool unordered_rule_memo(const Grammar& grammar, MemoTable& memo,
                         std::span<const TaggedSign> daughters, Trail& trail, Tag& next_tag,
                         const std::function<bool(const TaggedSign&)>& visit,
                         const GenObserver* observer = nullptr);

/// State carried by one generation session: trail, tag counter, memo table
/// and counters. Reusing a session for several bags shares its memo table.
class GenSession {
 public:
  explicit GenSession(GenMode mode);

  GenMode mode() const { return mode_; }
  bool memoized() const { return mode_ != GenMode::Naive; }
  /// Null in naive mode.
  MemoTable* memo() { return memo_ ? &*memo_ : nullptr; }
  const MemoTable* memo() const { return memo_ ? &*memo_ : nullptr; }

  /// Unordered-rule invocations so far, in every mode.
  std::uint64_t calls() const { return calls_; }

  /// Makes sure later tags are above `max_used`.
  void reserve_tags(Tag max_used) { next_tag_ = std::max<Tag>(next_tag_, max_used + 1); }
  Tag peek_next_tag() const { return next_tag_; }

  Trail& trail() { return trail_; }

  GenObserver observer;

 private:
  friend class GenSearch;

  GenMode mode_;
  std::optional<MemoTable> memo_;
  Trail trail_;
  Tag next_tag_ = 1;
  std::uint64_t calls_ = 0;
};

struct GenResult {
  std::vector<std::string> sentence;
  Avm root;
};

/// Depth-first shake-and-bake search. At each state: accept if the bag is
/// used up and the single stack sign unifies with `goal`; then try every
/// reduction (stack top plus i-1 other stack signs, i = 1..max branching);
/// then shift the next bag sign. Every complete derivation is passed to
/// `visit`; return false from it to stop. Returns false if stopped early.
/// Throws std::invalid_argument on an empty bag.
bool shake_generate(const Grammar& grammar, std::span<const TaggedSign> bag, const Avm& goal,
                    GenSession& session, const std::function<bool(const GenResult&)>& visit);

/// Tags `bag` 1..N (after any tags the session already used) and generates.
bool shake_generate(const Grammar& grammar, const SignBag& bag, const Avm& goal,
                    GenSession& session, const std::function<bool(const GenResult&)>& visit);

/// Every sentence derivable from `bag` in a fresh session of `mode`.
std::vector<GenResult> generate_all(const Grammar& grammar, const SignBag& bag, const Avm& goal,
                                    GenMode mode);

}  // namespace snb
