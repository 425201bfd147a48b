#include "snb/grammar.hpp"

#include <algorithm>
#include <stdexcept>

#include "snb/error.hpp"
#include "snb/lexer.hpp"

namespace snb {

namespace {

enum class Param { Word, Atom, Feature };

// Lexical templates. `$k` is replaced by the k-th atom argument; an omitted
// optional atom argument becomes a variable shared by all its occurrences.
// Feature arguments (e.g. @fin) are expanded and unified into the sign.
struct Template {
  std::string_view name;
  std::vector<Param> params;
  std::size_t required;
  bool lexical;
  std::string_view body;
};

const std::vector<Template>& templates() {
  static const std::vector<Template> table = {
      {"adject", {Param::Word, Param::Atom}, 1, true,
       "{phon: [$1], cat: adj, head: {agr: $2}, subcat: [], sem: {index: I},"
       " mod: {cat: nbar, head: {agr: $2}, sem: {index: I}}}"},
      {"cn", {Param::Word, Param::Atom}, 1, true,
       "{phon: [$1], cat: n, head: {agr: $2}, sem: {index: I},"
       " subcat: [{cat: det, head: {agr: $2}, sem: {index: I}}]}"},
      {"det", {Param::Word}, 1, true,
       "{phon: [$1], cat: det, head: {agr: _}, subcat: [], sem: {index: _}}"},
      {"art", {Param::Word, Param::Atom}, 2, true,
       "{phon: [$1], cat: det, head: {agr: $2}, subcat: [], sem: {index: _}}"},
      {"pn", {Param::Word}, 1, true,
       "{phon: [$1], cat: pn, head: {agr: _}, subcat: [], sem: {index: _}}"},
      {"preposition", {Param::Word}, 1, true,
       "{phon: [$1], cat: p, head: {pform: $1}, sem: {index: I},"
       " subcat: [{cat: np, sem: {index: I}}]}"},
      {"intransv", {Param::Word, Param::Feature}, 1, true,
       "{phon: [$1], cat: v, head: {vform: _}, sem: {args: [S]},"
       " subcat: [{cat: np, sem: {index: S}}]}"},
      {"transv", {Param::Word, Param::Feature}, 1, true,
       "{phon: [$1], cat: v, head: {vform: _}, sem: {args: [S, O]},"
       " subcat: [{cat: np, sem: {index: S}}, {cat: np, sem: {index: O}}]}"},
      {"ditransv", {Param::Word, Param::Feature}, 1, true,
       "{phon: [$1], cat: v, head: {vform: _}, sem: {args: [S, O, R]},"
       " subcat: [{cat: np, sem: {index: S}}, {cat: np, sem: {index: O}},"
       " {cat: pp, sem: {index: R}}]}"},
      {"fin", {}, 0, false, "{head: {vform: fin}}"},
  };
  return table;
}

const Template* find_template(std::string_view name) {
  for (const auto& t : templates())
    if (t.name == name) return &t;
  return nullptr;
}

struct MacroArg {
  bool is_macro = false;
  std::string text;
};

std::string substitute(std::string_view body, const std::vector<MacroArg>& args,
                       std::size_t nparams) {
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '$' && i + 1 < body.size() && body[i + 1] >= '1' && body[i + 1] <= '9') {
      const std::size_t k = static_cast<std::size_t>(body[i + 1] - '1');
      if (k < args.size()) {
        out += args[k].text;
      } else if (k < nparams) {
        out += "Opt" + std::to_string(k + 1);
      }
      ++i;
    } else {
      out += body[i];
    }
  }
  return out;
}

Avm expand(const Template& t, const std::vector<MacroArg>& args, const Lexer& lex) {
  if (args.size() < t.required || args.size() > t.params.size()) {
    std::string expected = std::to_string(t.required);
    if (t.params.size() != t.required) expected += ".." + std::to_string(t.params.size());
    lex.fail("wrong arity for macro '" + std::string(t.name) + "': expected " + expected +
             " argument(s), got " + std::to_string(args.size()));
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    const bool want_macro = t.params[i] == Param::Feature;
    if (args[i].is_macro != want_macro) {
      lex.fail("argument " + std::to_string(i + 1) + " of '" + std::string(t.name) +
               (want_macro ? "' must be a macro such as @fin" : "' must be an atom"));
    }
  }
  Avm sign = parse_avm(substitute(t.body, args, t.params.size()));
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (!args[i].is_macro) continue;
    const Template* inner = find_template(args[i].text);
    if (!inner) lex.fail("unknown macro '" + args[i].text + "'");
    if (inner->lexical || inner->required > 0)
      lex.fail("macro '" + args[i].text + "' cannot be used as an argument");
    Trail trail;
    if (!unify(sign, expand(*inner, {}, lex), trail))
      lex.fail("macro '" + args[i].text + "' is incompatible with '" + std::string(t.name) + "'");
  }
  return sign;
}

std::size_t parse_count(Lexer& lex, std::string_view what) {
  const std::string digits = lex.expect_ident(what);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
    lex.fail("expected a positive integer for " + std::string(what));
  const std::size_t n = std::stoul(digits);
  if (n == 0) lex.fail(std::string(what) + " must be positive");
  return n;
}

}  // namespace

Lexicon Lexicon::compile(std::string_view text, std::string source) {
  Lexicon lexicon;
  Lexer lex(text, std::move(source));
  while (!lex.at_end()) {
    const int line = lex.line();
    if (lex.peek().kind == Lexer::Kind::Ident && lex.peek().text == "branching") {
      lex.next();
      lexicon.max_branching_ = parse_count(lex, "branching factor");
      lex.expect(".");
      continue;
    }
    if (!(lex.peek().kind == Lexer::Kind::Ident && lex.peek().text == "entry"))
      lex.fail("expected 'entry' or 'branching'");
    lex.next();
    lex.expect("@");
    const std::string name = lex.expect_ident("macro name");
    const Template* t = find_template(name);
    if (!t) lex.fail("unknown macro '" + name + "'");
    if (!t->lexical) lex.fail("macro '" + name + "' is not a lexical template");

    std::vector<MacroArg> args;
    if (lex.accept("(")) {
      do {
        MacroArg a;
        a.is_macro = lex.accept("@");
        a.text = lex.expect_ident("macro argument");
        args.push_back(std::move(a));
      } while (lex.accept(","));
      lex.expect(")");
    }
    lex.expect(".");
    if (args.empty()) lex.fail("macro '" + name + "' needs a word argument");

    LexiconEntry e;
    e.word = args.front().text;
    e.macro = name;
    for (const auto& a : args) e.args.push_back(a.is_macro ? "@" + a.text : a.text);
    e.sign = expand(*t, args, lex);
    e.line = line;
    if (!is_acyclic(e.sign)) throw SyntaxError(lex.source(), line, "entry for '" + e.word + "' is cyclic");
    lexicon.entries_.push_back(std::move(e));
  }
  return lexicon;
}

bool Lexicon::contains(std::string_view word) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const LexiconEntry& e) { return e.word == word; });
}

std::vector<Avm> lexical_signs(const Lexicon& lexicon, std::string_view word) {
  std::vector<Avm> out;
  for (const auto& e : lexicon.entries())
    if (e.word == word) out.push_back(fresh_variant(e.sign));
  return out;
}

std::vector<std::string> lexical_template_names() {
  std::vector<std::string> out;
  for (const auto& t : templates())
    if (t.lexical) out.emplace_back(t.name);
  return out;
}

std::string_view principle_name(Principle p) {
  switch (p) {
    case Principle::HeadFeature:
      return "head_feature";
    case Principle::Subcat:
      return "subcat";
    case Principle::Agreement:
      return "agreement";
  }
  return "?";
}

std::optional<Principle> principle_from_name(std::string_view name) {
  for (Principle p : {Principle::HeadFeature, Principle::Subcat, Principle::Agreement})
    if (principle_name(p) == name) return p;
  return std::nullopt;
}

Grammar::Grammar(std::vector<Rule> rules, std::optional<Avm> goal)
    : rules_(std::move(rules)), goal_(std::move(goal)) {
  for (const auto& r : rules_) {
    if (r.daughters.empty()) throw std::invalid_argument("rule " + r.id + " has no daughters");
    if (r.head >= r.daughters.size())
      throw std::invalid_argument("rule " + r.id + " has an out-of-range head");
    max_branching_ = std::max(max_branching_, r.daughters.size());
  }
}

Grammar Grammar::compile(std::string_view text, std::string source) {
  std::vector<Rule> rules;
  std::optional<Avm> goal;
  Lexer lex(text, std::move(source));
  while (!lex.at_end()) {
    const int line = lex.line();
    if (lex.is_ident("goal")) {
      lex.next();
      if (goal) lex.fail("duplicate goal");
      VarScope scope;
      goal = read_avm(lex, scope);
      lex.expect(".");
      continue;
    }
    if (!lex.is_ident("rule")) lex.fail("expected 'rule' or 'goal'");
    lex.next();

    Rule r;
    r.line = line;
    r.id = lex.expect_ident("rule id");
    for (const auto& other : rules)
      if (other.id == r.id) lex.fail("duplicate rule id '" + r.id + "'");
    lex.expect(":");
    VarScope scope;
    r.mother = read_avm(lex, scope);
    lex.expect("->");
    while (!lex.is_ident("head")) {
      if (lex.at_end() || lex.is_punct(".")) lex.fail("expected 'head=' after daughters");
      r.daughters.push_back(read_avm(lex, scope));
    }
    if (r.daughters.empty()) lex.fail("rule '" + r.id + "' has no daughters");
    lex.next();
    lex.expect("=");
    const std::size_t head = parse_count(lex, "head position");
    if (head > r.daughters.size()) lex.fail("head position out of range");
    r.head = head - 1;
    if (!lex.is_ident("constraints")) lex.fail("expected 'constraints='");
    lex.next();
    lex.expect("=");
    lex.expect("[");
    if (!lex.accept("]")) {
      do {
        const std::string name = lex.expect_ident("principle name");
        auto p = principle_from_name(name);
        if (!p) lex.fail("unknown principle '" + name + "'");
        r.constraints.push_back(*p);
      } while (lex.accept(","));
      lex.expect("]");
    }
    lex.expect(".");
    if (!is_acyclic(r.mother)) throw SyntaxError(lex.source(), line, "rule '" + r.id + "' is cyclic");
    rules.push_back(std::move(r));
  }
  return Grammar(std::move(rules), std::move(goal));
}

std::optional<std::vector<std::string>> phon_of(const Avm& sign) {
  auto phon = sign.feature("phon");
  if (!phon || !phon->is_list()) return std::nullopt;
  std::vector<std::string> out;
  for (const auto& item : phon->items()) {
    if (!item.is_atom()) return std::nullopt;
    out.emplace_back(item.atom_name());
  }
  return out;
}

namespace {

const Path& head_path() {
  static const Path p{"head"};
  return p;
}
const Path& sem_path() {
  static const Path p{"sem"};
  return p;
}
const Path& subcat_path() {
  static const Path p{"subcat"};
  return p;
}
const Path& mod_path() {
  static const Path p{"mod"};
  return p;
}
const Path& phon_path() {
  static const Path p{"phon"};
  return p;
}

bool head_feature(const Avm& mother, const Avm& head, Trail& trail) {
  for (const Path* p : {&head_path(), &sem_path()}) {
    if (auto v = get_path(head, *p); v && !unify_path(mother, *p, *v, trail)) return false;
  }
  return true;
}

bool subcat(const Avm& mother, const Rule& rule, std::span<const Avm> daughters, Trail& trail) {
  auto list = get_path(daughters[rule.head], subcat_path());
  if (!list || !list->is_list()) return false;
  const std::vector<Avm> slots = list->items();
  const std::size_t k = daughters.size() - 1;
  if (slots.size() < k) return false;
  const std::size_t keep = slots.size() - k;
  std::size_t j = keep;
  for (std::size_t i = 0; i < daughters.size(); ++i) {
    if (i == rule.head) continue;
    if (!unify(daughters[i], slots[j++], trail)) return false;
  }
  const std::vector<Avm> rest(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(keep));
  return unify_path(mother, subcat_path(), Avm::list(rest), trail);
}

bool agreement(const Rule& rule, std::span<const Avm> daughters, Trail& trail) {
  for (std::size_t i = 0; i < daughters.size(); ++i) {
    if (i == rule.head) continue;
    if (auto mod = get_path(daughters[i], mod_path());
        mod && !unify(*mod, daughters[rule.head], trail))
      return false;
  }
  return true;
}

}  // namespace

bool shallow_clash(const Avm& pattern, const Avm& daughter) {
  const NodePtr& p = deref(pattern.node());
  const NodePtr& d = deref(daughter.node());
  if (p->kind != NodeKind::Record || d->kind != NodeKind::Record) return false;
  for (const auto& [name, value] : p->features) {
    const NodePtr* other = find_feature(*d, name);
    if (!other) continue;
    const NodePtr& a = deref(value);
    const NodePtr& b = deref(*other);
    if (a->kind == NodeKind::Var || b->kind == NodeKind::Var) continue;
    if (a->kind != b->kind) return true;
    if (a->kind == NodeKind::Atom && a->atom != b->atom) return true;
    if (a->kind == NodeKind::List && a->items.size() != b->items.size()) return true;
  }
  return false;
}

std::optional<Avm> apply_rule_ordered(const Grammar& /*grammar*/, const Rule& rule,
                                      std::span<const Avm> daughters, Trail& trail) {
  if (daughters.size() != rule.arity())
    throw std::invalid_argument("rule " + rule.id + " expects " + std::to_string(rule.arity()) +
                                " daughters, got " + std::to_string(daughters.size()));

  for (std::size_t i = 0; i < daughters.size(); ++i)
    if (shallow_clash(rule.daughters[i], daughters[i])) return std::nullopt;

  std::vector<Avm> parts;
  parts.reserve(rule.arity() + 1);
  parts.push_back(rule.mother);
  parts.insert(parts.end(), rule.daughters.begin(), rule.daughters.end());
  parts = fresh_variants(parts);
  const Avm& mother = parts.front();

  const Trail::Mark mark = trail.mark();
  auto fail = [&]() -> std::optional<Avm> {
    trail.undo(mark);
    return std::nullopt;
  };

  for (std::size_t i = 0; i < daughters.size(); ++i)
    if (!unify(daughters[i], parts[i + 1], trail)) return fail();

  for (Principle p : rule.constraints) {
    bool ok = true;
    switch (p) {
      case Principle::HeadFeature:
        ok = head_feature(mother, daughters[rule.head], trail);
        break;
      case Principle::Subcat:
        ok = subcat(mother, rule, daughters, trail);
        break;
      case Principle::Agreement:
        ok = agreement(rule, daughters, trail);
        break;
    }
    if (!ok) return fail();
  }

  std::vector<Avm> phon;
  for (const auto& d : daughters) {
    auto list = get_path(d, phon_path());
    if (!list || !list->is_list()) return fail();
    for (const auto& w : list->items()) {
      if (!w.is_atom()) return fail();
      phon.push_back(w);
    }
  }
  if (!unify_path(mother, phon_path(), Avm::list(phon), trail)) return fail();
  return mother;
}

}  // namespace snb
