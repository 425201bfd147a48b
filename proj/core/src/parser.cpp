#include "snb/parser.hpp"

#include <cctype>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "snb/error.hpp"

namespace snb {

namespace {

// A chart edge keeps a snapshot of its mother and how it was built. Leaves
// are only reconstructed, by replaying the rules, for complete analyses.
struct Edge {
  Avm mother;
  const Rule* rule = nullptr;  // null for a lexical edge
  std::vector<const Edge*> kids;
};

class Chart {
 public:
  Chart(const Grammar& grammar, std::size_t n) : grammar_(grammar), n_(n), cells_(n * (n + 1)) {}

  std::vector<const Edge*>& cell(std::size_t begin, std::size_t end) {
    return cells_[begin * (n_ + 1) + end];
  }

  void add_edge(std::size_t begin, std::size_t end, Edge e) {
    arena_.push_back(std::move(e));
    cell(begin, end).push_back(&arena_.back());
  }

  /// Builds every edge over [begin, end); all shorter spans must be done.
  void fill(std::size_t begin, std::size_t end) {
    std::vector<std::pair<const Rule*, std::vector<const Edge*>>> pending;
    for (const Rule& rule : grammar_.rules()) {
      if (rule.arity() < 2 || rule.arity() > end - begin) continue;
      std::vector<const Edge*> picked;
      split(rule, begin, end, picked, pending);
    }
    for (const auto& [rule, daughters] : pending) add(*rule, daughters, begin, end);

    // Unary closure, including over the edges it produces.
    for (std::size_t i = 0; i < cell(begin, end).size(); ++i) {
      for (const Rule& rule : grammar_.rules()) {
        if (rule.arity() != 1) continue;
        add(rule, {cell(begin, end)[i]}, begin, end);
      }
    }
  }

 private:
  // Chooses one edge per piece for every split of [begin, end) into the
  // remaining number of non-empty contiguous pieces.
  void split(const Rule& rule, std::size_t begin, std::size_t end,
             std::vector<const Edge*>& picked,
             std::vector<std::pair<const Rule*, std::vector<const Edge*>>>& pending) {
    const std::size_t remaining = rule.arity() - picked.size();
    const Avm& pattern = rule.daughters[picked.size()];
    if (remaining == 1) {
      for (const Edge* e : cell(begin, end)) {
        if (shallow_clash(pattern, e->mother)) continue;
        picked.push_back(e);
        pending.emplace_back(&rule, picked);
        picked.pop_back();
      }
      return;
    }
    for (std::size_t mid = begin + 1; mid + remaining - 1 <= end; ++mid) {
      for (const Edge* e : cell(begin, mid)) {
        if (shallow_clash(pattern, e->mother)) continue;
        picked.push_back(e);
        split(rule, mid, end, picked, pending);
        picked.pop_back();
      }
    }
  }

  void add(const Rule& rule, std::vector<const Edge*> daughters, std::size_t begin, std::size_t end) {
    std::vector<Avm> mothers;
    mothers.reserve(daughters.size());
    for (const Edge* d : daughters) mothers.push_back(d->mother);
    const Trail::Mark mark = trail_.mark();
    auto mother = apply_rule_ordered(grammar_, rule, mothers, trail_);
    if (!mother) return;
    Avm snapshot = fresh_variant(*mother);
    trail_.undo(mark);
    add_edge(begin, end, Edge{std::move(snapshot), &rule, std::move(daughters)});
  }

  const Grammar& grammar_;
  std::size_t n_;
  std::vector<std::vector<const Edge*>> cells_;
  std::deque<Edge> arena_;  // stable addresses
  Trail trail_;
};

// Rebuilds the derivation under `e` with live structure sharing: bindings
// stay on `trail`. Appends the leaves and returns the mother.
Avm replay(const Grammar& grammar, const Edge& e, Trail& trail, std::vector<Avm>& leaves) {
  if (!e.rule) {
    Avm leaf = fresh_variant(e.mother);
    leaves.push_back(leaf);
    return leaf;
  }
  std::vector<Avm> mothers;
  for (const Edge* k : e.kids) mothers.push_back(replay(grammar, *k, trail, leaves));
  auto mother = apply_rule_ordered(grammar, *e.rule, mothers, trail);
  if (!mother) throw std::logic_error("parser: replay of rule " + e.rule->id + " failed");
  return *mother;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : sentence) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<Parse> parse_to_bag(const Grammar& grammar, const Lexicon& lexicon,
                                std::span<const std::string> tokens, const Avm& goal) {
  if (tokens.empty()) throw std::invalid_argument("cannot parse an empty sentence");
  const std::size_t n = tokens.size();
  Chart chart(grammar, n);

  for (std::size_t i = 0; i < n; ++i) {
    auto signs = lexical_signs(lexicon, tokens[i]);
    if (signs.empty()) throw UnknownWord(tokens[i]);
    for (auto& s : signs) chart.add_edge(i, i + 1, Edge{s, nullptr, {}});
  }
  for (std::size_t len = 1; len <= n; ++len)
    for (std::size_t b = 0; b + len <= n; ++b) chart.fill(b, b + len);

  std::vector<Parse> out;
  Trail trail;
  for (const Edge* top : chart.cell(0, n)) {
    const Edge& e = *top;
    if (shallow_clash(goal, e.mother)) continue;
    const Trail::Mark mark = trail.mark();
    std::vector<Avm> leaves;
    const Avm root = replay(grammar, e, trail, leaves);
    if (!unify(root, fresh_variant(goal), trail)) {
      trail.undo(mark);
      continue;
    }
    std::vector<Avm> parts{root};
    parts.insert(parts.end(), leaves.begin(), leaves.end());
    parts = fresh_variants(parts);
    trail.undo(mark);
    Parse p;
    p.derivation.root = parts.front();
    p.derivation.leaves.assign(parts.begin() + 1, parts.end());
    p.bag.signs = fresh_variants(p.derivation.leaves);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Parse> parse_to_bag(const Grammar& grammar, const Lexicon& lexicon,
                                std::span<const std::string> tokens) {
  if (!grammar.goal()) throw std::invalid_argument("grammar declares no goal");
  return parse_to_bag(grammar, lexicon, tokens, *grammar.goal());
}

}  // namespace snb
