#include "snb/generator.hpp"

#include <algorithm>
#include <set>

namespace snb {

std::vector<TaggedSign> tag_bag(const SignBag& bag, std::span<const Tag> tags) {
  if (tags.size() != bag.size()) throw std::invalid_argument("tag_bag: one tag per sign required");
  std::set<Tag> seen;
  for (Tag t : tags) {
    if (t == 0) throw std::invalid_argument("tag_bag: tags are positive");
    if (!seen.insert(t).second) throw std::invalid_argument("tag_bag: repeated tag");
  }
  std::vector<Avm> signs = fresh_variants(bag.signs);
  ground_variables(signs, "$g", true);
  std::vector<TaggedSign> out;
  out.reserve(signs.size());
  for (std::size_t i = 0; i < signs.size(); ++i) out.push_back({signs[i], tags[i]});
  return out;
}

std::vector<TaggedSign> tag_bag(const SignBag& bag) {
  std::vector<Tag> tags(bag.size());
  std::iota(tags.begin(), tags.end(), Tag{1});
  return tag_bag(bag, tags);
}

std::string_view mode_name(GenMode mode) {
  switch (mode) {
    case GenMode::Naive:
      return "naive";
    case GenMode::MemoIndex:
      return "memo-int";
    case GenMode::MemoTagList:
      return "memo-list";
  }
  return "?";
}

std::optional<GenMode> mode_from_name(std::string_view name) {
  for (GenMode m : {GenMode::Naive, GenMode::MemoIndex, GenMode::MemoTagList})
    if (mode_name(m) == name) return m;
  return std::nullopt;
}

bool unordered_rule_naive(const Grammar& grammar, std::span<const TaggedSign> daughters,
                          Trail& trail, const std::function<bool(const Avm&)>& visit) {
  const std::size_t k = daughters.size();
  std::vector<std::size_t> order(k);
  std::vector<Avm> ordered(k);
  for (const Rule& rule : grammar.rules()) {
    if (rule.arity() != k) continue;
    std::iota(order.begin(), order.end(), std::size_t{0});
    do {
      for (std::size_t i = 0; i < k; ++i) ordered[i] = daughters[order[i]].sign;
      const Trail::Mark mark = trail.mark();
      auto mother = apply_rule_ordered(grammar, rule, ordered, trail);
      if (!mother) continue;
      Avm snapshot = fresh_variant(*mother);
      trail.undo(mark);
      if (!visit(snapshot)) return false;
    } while (std::next_permutation(order.begin(), order.end()));
  }
  return true;
}

bool unordered_rule_memo(const Grammar& grammar, MemoTable& memo,
                         std::span<const TaggedSign> daughters, Trail& trail, Tag& next_tag,
                         const std::function<bool(const TaggedSign&)>& visit,
                         const GenObserver* observer) {
  std::vector<Tag> tags;
  tags.reserve(daughters.size());
  for (const auto& d : daughters) tags.push_back(d.tag);
  const MemoKey key = MemoKey::make(memo.key_mode(), tags);

  const MemoOutcome* outcome = memo.find(key);
  if (outcome) {
    memo.count_hit();
    if (observer && observer->memo_hit) observer->memo_hit(daughters, *outcome);
  } else {
    memo.count_miss();
    MemoOutcome fresh;
    unordered_rule_naive(grammar, daughters, trail, [&](const Avm& mother) {
      fresh.mothers.push_back({mother, next_tag++});
      return true;
    });
    outcome = &memo.store(key, std::move(fresh));
  }
  // Stored mothers are never mutated outside an application's trail window,
  // so they can be handed out as they are.
  for (const TaggedSign& m : outcome->mothers)
    if (!visit(m)) return false;
  return true;
}

GenSession::GenSession(GenMode mode) : mode_(mode) {
  if (mode == GenMode::MemoIndex) memo_.emplace(KeyMode::Index);
  if (mode == GenMode::MemoTagList) memo_.emplace(KeyMode::TagList);
}

class GenSearch {
 public:
  GenSearch(const Grammar& grammar, std::span<const TaggedSign> bag, const Avm& goal,
            GenSession& session, const std::function<bool(const GenResult&)>& visit)
      : grammar_(grammar),
        bag_(bag),
        goal_(fresh_variant(goal)),
        session_(session),
        visit_(visit),
        branching_(grammar.max_branching()) {}

  bool step(const std::vector<TaggedSign>& stack, std::size_t next) {
    Trail& trail = session_.trail();

    // Done: bag used up and a single sign left that satisfies the goal.
    if (next == bag_.size() && stack.size() == 1) {
      const Trail::Mark mark = trail.mark();
      if (unify(stack.front().sign, goal_, trail)) {
        GenResult result;
        result.root = fresh_variant(stack.front().sign);
        trail.undo(mark);
        result.sentence = phon_of(result.root).value_or(std::vector<std::string>{});
        if (!visit_(result)) return false;
      }
    }

    // Reduce: the top plus any i-1 other stack signs.
    if (!stack.empty()) {
      const TaggedSign& top = stack.front();
      const std::span<const TaggedSign> others(stack.begin() + 1, stack.end());
      const std::size_t limit = std::min(branching_, stack.size());
      std::size_t calls = 0;
      bool go_on = true;
      std::vector<TaggedSign> daughters;
      for (std::size_t i = 1; i <= limit && go_on; ++i) {
        go_on = difference_select(others, i - 1,
                                  [&](std::span<const TaggedSign> chosen,
                                      std::span<const TaggedSign> rest) {
                                    daughters.assign(1, top);
                                    daughters.insert(daughters.end(), chosen.begin(), chosen.end());
                                    ++calls;
                                    return reduce(daughters, rest, next);
                                  });
      }
      if (session_.observer.state_reduced) session_.observer.state_reduced(stack.size(), calls);
      if (!go_on) return false;
    }

    // Shift.
    if (next < bag_.size()) {
      std::vector<TaggedSign> pushed;
      pushed.reserve(stack.size() + 1);
      pushed.push_back(bag_[next]);
      pushed.insert(pushed.end(), stack.begin(), stack.end());
      return step(pushed, next + 1);
    }
    return true;
  }

 private:
  bool reduce(const std::vector<TaggedSign>& daughters, std::span<const TaggedSign> rest,
              std::size_t next) {
    ++session_.calls_;
    auto continue_with = [&](const TaggedSign& mother) {
      std::vector<TaggedSign> stack;
      stack.reserve(rest.size() + 1);
      stack.push_back(mother);
      stack.insert(stack.end(), rest.begin(), rest.end());
      return step(stack, next);
    };
    // `daughters` and `rest` are scratch buffers of the caller; copy before
    // recursing.
    const std::vector<TaggedSign> dtrs = daughters;
    const std::vector<TaggedSign> remaining(rest.begin(), rest.end());
    rest = remaining;

    if (MemoTable* memo = session_.memo()) {
      return unordered_rule_memo(grammar_, *memo, dtrs, session_.trail(), session_.next_tag_,
                                 continue_with, &session_.observer);
    }
    return unordered_rule_naive(grammar_, dtrs, session_.trail(), [&](const Avm& mother) {
      return continue_with(TaggedSign{mother, session_.next_tag_++});
    });
  }

  const Grammar& grammar_;
  std::span<const TaggedSign> bag_;
  Avm goal_;
  GenSession& session_;
  const std::function<bool(const GenResult&)>& visit_;
  std::size_t branching_;
};

bool shake_generate(const Grammar& grammar, std::span<const TaggedSign> bag, const Avm& goal,
                    GenSession& session, const std::function<bool(const GenResult&)>& visit) {
  if (bag.empty()) throw std::invalid_argument("cannot generate from an empty bag");
  Tag max_tag = 0;
  for (const auto& t : bag) max_tag = std::max(max_tag, t.tag);
  session.reserve_tags(max_tag);
  GenSearch search(grammar, bag, goal, session, visit);
  return search.step({}, 0);
}

bool shake_generate(const Grammar& grammar, const SignBag& bag, const Avm& goal,
                    GenSession& session, const std::function<bool(const GenResult&)>& visit) {
  if (bag.empty()) throw std::invalid_argument("cannot generate from an empty bag");
  std::vector<Tag> tags(bag.size());
  std::iota(tags.begin(), tags.end(), session.peek_next_tag());
  return shake_generate(grammar, tag_bag(bag, tags), goal, session, visit);
}

std::vector<GenResult> generate_all(const Grammar& grammar, const SignBag& bag, const Avm& goal,
                                    GenMode mode) {
  GenSession session(mode);
  std::vector<GenResult> out;
  shake_generate(grammar, bag, goal, session, [&](const GenResult& r) {
    out.push_back(r);
    return true;
  });
  return out;
}

}  // namespace snb
