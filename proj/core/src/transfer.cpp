#include "snb/transfer.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "snb/lexer.hpp"

namespace snb {

namespace {

struct ConstraintMacro {
  std::string_view name;
  std::size_t arity;
  Path path;
  std::optional<std::string_view> constant;
};

const std::vector<ConstraintMacro>& constraint_macros() {
  static const std::vector<ConstraintMacro> table = {
      {"semindex", 1, Path{"sem", "index"}, std::nullopt},
      {"cont_args", 1, Path{"sem", "args"}, std::nullopt},
      {"prep", 0, Path{"cat"}, "p"},
  };
  return table;
}

BilingualSide read_side(Lexer& lex, std::set<std::string>* vars) {
  BilingualSide side;
  while (lex.peek().kind == Lexer::Kind::Ident && lex.peek().text != "entry")
    side.words.push_back(lex.next().text);
  if (side.words.empty()) lex.fail("expected at least one word");
  if (!lex.is_ident("entry")) return side;
  lex.next();
  do {
    lex.expect("@");
    const std::string name = lex.expect_ident("constraint macro");
    auto it = std::find_if(constraint_macros().begin(), constraint_macros().end(),
                           [&](const ConstraintMacro& m) { return m.name == name; });
    if (it == constraint_macros().end()) lex.fail("unknown constraint macro '" + name + "'");
    std::vector<std::string> args;
    if (lex.accept("(")) {
      do {
        if (lex.peek().kind != Lexer::Kind::Var) lex.fail("constraint arguments must be variables");
        args.push_back(lex.next().text);
      } while (lex.accept(","));
      lex.expect(")");
    }
    if (args.size() != it->arity)
      lex.fail("wrong arity for '@" + name + "': expected " + std::to_string(it->arity) +
               ", got " + std::to_string(args.size()));
    Equation eq;
    eq.path = it->path;
    if (it->constant) {
      eq.constant = Avm::atom(*it->constant);
    } else {
      eq.var = args.front();
      if (vars) vars->insert(eq.var);
    }
    side.equations.push_back(std::move(eq));
  } while (lex.accept("&"));
  return side;
}

using TokenKey = std::vector<std::size_t>;

class CoverSearch {
 public:
  CoverSearch(const Bilingual& bilingual, const SignBag& source, const Lexicon& target,
              const std::function<bool(const TargetBag&)>& visit)
      : bilingual_(bilingual), target_(target), visit_(visit) {
    signs_ = fresh_variants(source.signs);
    ground_variables(signs_, "$x", false);
    for (const auto& s : signs_) {
      auto phon = phon_of(s);
      if (!phon || phon->size() != 1)
        throw Error("source sign is not a single word: " + canonical(s));
      words_.push_back(phon->front());
    }
    for (const auto& w : words_) {
      const bool covered = std::any_of(
          bilingual_.entries().begin(), bilingual_.entries().end(), [&](const BilingualEntry& e) {
            return std::find(e.source.words.begin(), e.source.words.end(), w) !=
                   e.source.words.end();
          });
      if (!covered) throw UncoveredSign(w);
    }
    used_.assign(signs_.size(), false);
  }

  std::uint32_t token_count() const { return static_cast<std::uint32_t>(tokens_.size()); }

  bool run() {
    auto first = std::find(used_.begin(), used_.end(), false);
    if (first == used_.end()) return visit_(current_);
    const auto i = static_cast<std::size_t>(first - used_.begin());

    for (std::size_t e = 0; e < bilingual_.entries().size(); ++e) {
      const BilingualEntry& entry = bilingual_.entries()[e];
      auto assigned = assign(entry.source.words, i);
      if (!assigned) continue;
      std::map<std::string, Avm> env;
      if (!bind_source(entry.source, signs_[assigned->front()], env)) continue;

      for (std::size_t k : *assigned) used_[k] = true;
      current_.cover.push_back(e);
      TokenKey key{e};
      std::vector<std::size_t> sorted = *assigned;
      std::sort(sorted.begin(), sorted.end());
      key.insert(key.end(), sorted.begin(), sorted.end());
      key.push_back(std::numeric_limits<std::size_t>::max());
      const bool go_on = place_target(entry.target, 0, env, key);
      current_.cover.pop_back();
      for (std::size_t k : *assigned) used_[k] = false;
      if (!go_on) return false;
    }
    return true;
  }

 private:
  // Source sign index for each word of a side; `pivot` takes the first
  // occurrence of its own word, the others the lowest unused matching signs.
  std::optional<std::vector<std::size_t>> assign(const std::vector<std::string>& side,
                                                 std::size_t pivot) const {
    auto at = std::find(side.begin(), side.end(), words_[pivot]);
    if (at == side.end()) return std::nullopt;
    std::vector<std::size_t> out(side.size());
    std::vector<bool> taken = used_;
    taken[pivot] = true;
    for (std::size_t j = 0; j < side.size(); ++j) {
      if (j == static_cast<std::size_t>(at - side.begin())) {
        out[j] = pivot;
        continue;
      }
      bool found = false;
      for (std::size_t k = 0; k < signs_.size() && !found; ++k) {
        if (!taken[k] && words_[k] == side[j]) {
          taken[k] = true;
          out[j] = k;
          found = true;
        }
      }
      if (!found) return std::nullopt;
    }
    return out;
  }

  bool bind_source(const BilingualSide& side, const Avm& sign, std::map<std::string, Avm>& env) {
    for (const Equation& eq : side.equations) {
      auto value = get_path(sign, eq.path);
      if (!value) return false;
      if (eq.constant) {
        Trail trail;
        const bool ok = unify(*value, *eq.constant, trail);
        trail.undo(0);
        if (!ok) return false;
        continue;
      }
      auto [it, inserted] = env.try_emplace(eq.var, *value);
      if (!inserted) {
        Trail trail;
        const bool ok = unify(it->second, *value, trail);
        trail.undo(0);
        if (!ok) return false;
      }
    }
    return true;
  }

  bool place_target(const BilingualSide& side, std::size_t j, std::map<std::string, Avm>& env,
                    TokenKey& key) {
    if (j == side.words.size()) return run();
    const std::vector<Avm> alternatives = lexical_signs(target_, side.words[j]);
    if (alternatives.empty()) throw Error("unknown target word: " + side.words[j]);
    for (std::size_t a = 0; a < alternatives.size(); ++a) {
      Avm sign = fresh_variant(alternatives[a]);
      std::map<std::string, Avm> local = env;
      if (j == 0 && !apply_target(side, sign, local)) continue;
      key.push_back(j);
      key.push_back(a);
      current_.bag.signs.push_back(sign);
      current_.tokens.push_back(token_for(key));
      const bool go_on = place_target(side, j + 1, local, key);
      current_.tokens.pop_back();
      current_.bag.signs.pop_back();
      key.resize(key.size() - 2);
      if (!go_on) return false;
    }
    return true;
  }

  static bool apply_target(const BilingualSide& side, const Avm& sign,
                           std::map<std::string, Avm>& env) {
    Trail trail;  // bindings on a fresh sign are kept
    for (const Equation& eq : side.equations) {
      const Avm value = eq.constant ? *eq.constant : env.try_emplace(eq.var).first->second;
      if (!unify_path(sign, eq.path, value, trail)) return false;
    }
    return true;
  }

  std::uint32_t token_for(const TokenKey& key) {
    auto [it, inserted] = tokens_.try_emplace(key, static_cast<std::uint32_t>(tokens_.size() + 1));
    return it->second;
  }

  const Bilingual& bilingual_;
  const Lexicon& target_;
  std::function<bool(const TargetBag&)> visit_;
  std::vector<Avm> signs_;
  std::vector<std::string> words_;
  std::vector<bool> used_;
  TargetBag current_;
  std::map<TokenKey, std::uint32_t> tokens_;
};

}  // namespace

Bilingual Bilingual::compile(std::string_view text, std::string source) {
  Bilingual out;
  Lexer lex(text, std::move(source));
  while (!lex.at_end()) {
    BilingualEntry entry;
    entry.line = lex.line();
    std::set<std::string> source_vars;
    std::set<std::string> target_vars;
    entry.source = read_side(lex, &source_vars);
    lex.expect("<==>");
    entry.target = read_side(lex, &target_vars);
    lex.expect(".");
    for (const auto& v : target_vars) {
      if (!source_vars.count(v))
        out.warnings_.push_back(lex.source() + ":" + std::to_string(entry.line) +
                                ": target variable " + v + " is not bound by the source side");
    }
    out.entries_.push_back(std::move(entry));
  }
  return out;
}

void enumerate_target_bags(const Bilingual& bilingual, const SignBag& source,
                           const Lexicon& target_lexicon,
                           const std::function<bool(const TargetBag&)>& visit) {
  CoverSearch search(bilingual, source, target_lexicon, visit);
  search.run();
}

TransferResult transfer_bags(const Bilingual& bilingual, const SignBag& source,
                             const Lexicon& target_lexicon) {
  TransferResult result;
  CoverSearch search(bilingual, source, target_lexicon, [&](const TargetBag& bag) {
    result.bags.push_back(bag);
    return true;
  });
  search.run();
  result.token_count = search.token_count();
  return result;
}

}  // namespace snb
