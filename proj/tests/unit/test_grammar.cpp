#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "snb/error.hpp"
#include "snb/grammar.hpp"
#include "snb/lexer.hpp"

using namespace snb;

namespace {

const Rule& rule_named(const Grammar& g, std::string_view id) {
  for (const auto& r : g.rules())
    if (r.id == id) return r;
  FAIL("no rule " << id);
  throw;
}

Avm one_sign(const Lexicon& lex, std::string_view word) {
  auto signs = lexical_signs(lex, word);
  REQUIRE(signs.size() == 1);
  return signs.front();
}

std::string error_of(auto&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("lexer tokens") {
  Lexer lex("foo Bar _ #3 -> <==> . % comment\n{", "<t>");
  CHECK(lex.next().kind == Lexer::Kind::Ident);
  CHECK(lex.next().kind == Lexer::Kind::Var);
  CHECK(lex.next().kind == Lexer::Kind::Var);
  CHECK(lex.next().text == "#3");
  CHECK(lex.next().text == "->");
  CHECK(lex.next().text == "<==>");
  CHECK(lex.next().text == ".");
  const auto brace = lex.next();
  CHECK(brace.text == "{");
  CHECK(brace.line == 2);
  CHECK(lex.at_end());
}

TEST_CASE("lexicon: proper noun entry") {
  const Lexicon lex = Lexicon::compile("entry @pn(john).");
  REQUIRE(lex.entries().size() == 1);
  const Avm s = lex.entries()[0].sign;
  CHECK(canonical(*s.feature("phon")) == "[john]");
  CHECK(s.feature("cat")->atom_name() == "pn");
  CHECK(get_path(s, Path{"sem", "index"})->is_var());
  CHECK(canonical(*s.feature("subcat")) == "[]");
}

TEST_CASE("lexicon: common noun with gender") {
  const Lexicon lex = Lexicon::compile("entry @cn(chat,masc).");
  REQUIRE(lex.entries().size() == 1);
  CHECK(get_path(lex.entries()[0].sign, Path{"head", "agr"})->atom_name() == "masc");
}

TEST_CASE("lexicon: rejected entries name the line") {
  CHECK(error_of([] { Lexicon::compile("entry @nosuchmacro(x)."); }) ==
        "syntax error: <lexicon>:1: unknown macro 'nosuchmacro'");
  CHECK_THROWS_AS(Lexicon::compile("\nentry @cn(a,b,c)."), SyntaxError);
  CHECK(error_of([] { Lexicon::compile("\nentry @cn(a,b,c)."); }).find(":2:") != std::string::npos);
  CHECK_THROWS_AS(Lexicon::compile("entry @transv(eats,@nosuch)."), SyntaxError);
  CHECK_THROWS_AS(Lexicon::compile("entry @pn(john)"), SyntaxError);
  CHECK_THROWS_AS(Lexicon::compile("branching 0."), SyntaxError);
}

TEST_CASE("lexicon: branching header") {
  CHECK(Lexicon::compile("entry @pn(a).").max_branching() == Lexicon::kDefaultBranching);
  CHECK(Lexicon::compile("branching 2. entry @pn(a).").max_branching() == 2);
}

TEST_CASE("lexical_signs on the fixtures") {
  const auto& e = testfx::engine();
  const auto le = lexical_signs(e.target_lexicon(), "le");
  REQUIRE(le.size() == 1);
  CHECK(get_path(le[0], Path{"head", "agr"})->atom_name() == "masc");

  const auto the = lexical_signs(e.source_lexicon(), "the");
  REQUIRE(the.size() == 1);
  CHECK(get_path(the[0], Path{"head", "agr"})->is_var());

  CHECK(lexical_signs(e.source_lexicon(), "zzz").empty());

  // Each call hands out new variables.
  const auto a = lexical_signs(e.source_lexicon(), "john");
  const auto b = lexical_signs(e.source_lexicon(), "john");
  CHECK_FALSE(get_path(a[0], Path{"sem", "index"})->same(*get_path(b[0], Path{"sem", "index"})));
}

TEST_CASE("grammar: fixture rules") {
  const Grammar& g = testfx::engine().target_grammar();
  CHECK(g.rules().size() == 9);
  CHECK(g.max_branching() == 3);
  REQUIRE(g.goal().has_value());
  CHECK(canonical(*g.goal()) == "{cat: s, head: {vform: fin}, subcat: []}");
  const Rule& s = rule_named(g, "s_np_vp");
  CHECK(s.arity() == 2);
  CHECK(s.head == 1);
  CHECK(s.constraints == std::vector<Principle>{Principle::HeadFeature, Principle::Subcat});
}

TEST_CASE("grammar: syntax errors") {
  CHECK_THROWS_AS(Grammar::compile("rule r: {cat: a} -> head=1 constraints=[]."), SyntaxError);
  CHECK_THROWS_AS(Grammar::compile("rule r: {cat: a} -> {cat: b} head=2 constraints=[]."), SyntaxError);
  CHECK_THROWS_AS(Grammar::compile("rule r: {cat: a} -> {cat: b} head=1 constraints=[nope]."),
                  SyntaxError);
  CHECK_THROWS_AS(Grammar::compile("rule r: {cat: a} -> {cat: b} head=1 constraints=[].\n"
                                   "rule r: {cat: a} -> {cat: b} head=1 constraints=[]."),
                  SyntaxError);
  for (auto p : {Principle::HeadFeature, Principle::Subcat, Principle::Agreement})
    CHECK(principle_from_name(principle_name(p)) == p);
}

TEST_CASE("apply_rule_ordered: head-complement combination") {
  const auto& e = testfx::engine();
  const Grammar& g = e.target_grammar();
  Trail trail;
  const Avm aime = one_sign(e.target_lexicon(), "aime");
  const Avm marie = one_sign(e.target_lexicon(), "marie");

  const std::vector<Avm> pn{marie};
  const auto np = apply_rule_ordered(g, rule_named(g, "np_pn"), pn, trail);
  REQUIRE(np);
  CHECK(np->feature("cat")->atom_name() == "np");

  const std::vector<Avm> dtrs{aime, *np};
  const auto vp = apply_rule_ordered(g, rule_named(g, "vp_v_np"), dtrs, trail);
  REQUIRE(vp);
  CHECK(*phon_of(*vp) == std::vector<std::string>{"aime", "marie"});
  CHECK(vp->feature("subcat")->items().size() == 1);
  // The object's index is now the verb's second argument.
  CHECK(get_path(*vp, Path{"sem", "args"})->items()[1].same(*get_path(marie, Path{"sem", "index"})));

  // Wrong order fails, and leaves nothing behind.
  const auto mark = trail.mark();
  const std::vector<Avm> swapped{*np, aime};
  CHECK_FALSE(apply_rule_ordered(g, rule_named(g, "vp_v_np"), swapped, trail));
  CHECK(trail.mark() == mark);
}

TEST_CASE("apply_rule_ordered: determiner-noun agreement clash") {
  const auto& e = testfx::engine();
  const Grammar& g = e.target_grammar();
  Trail trail;
  const Avm le = one_sign(e.target_lexicon(), "le");
  const Avm table = one_sign(e.target_lexicon(), "table");

  const std::vector<Avm> n{table};
  const auto nbar = apply_rule_ordered(g, rule_named(g, "nbar_n"), n, trail);
  REQUIRE(nbar);
  const std::vector<Avm> dtrs{le, *nbar};
  const bool built = apply_rule_ordered(g, rule_named(g, "np_det_nbar"), dtrs, trail).has_value();

  const auto agr = oracle::unify(*get_path(le, Path{"head", "agr"}), *get_path(table, Path{"head", "agr"}));
  CHECK(built == agr.ok);
  CHECK_FALSE(built);

  // Same determiner with a masculine noun goes through.
  const std::vector<Avm> chat{one_sign(e.target_lexicon(), "chat")};
  const auto nbar2 = apply_rule_ordered(g, rule_named(g, "nbar_n"), chat, trail);
  REQUIRE(nbar2);
  const std::vector<Avm> ok{one_sign(e.target_lexicon(), "le"), *nbar2};
  CHECK(apply_rule_ordered(g, rule_named(g, "np_det_nbar"), ok, trail).has_value());
}

TEST_CASE("apply_rule_ordered: wrong daughter count is rejected up front") {
  const Grammar& g = testfx::engine().target_grammar();
  Trail trail;
  const std::vector<Avm> one{Avm::variable()};
  CHECK_THROWS_AS(apply_rule_ordered(g, rule_named(g, "s_np_vp"), one, trail), std::invalid_argument);
  CHECK(trail.size() == 0);
}

TEST_CASE("agreement principle on adjective modification") {
  const auto& e = testfx::engine();
  const Grammar& g = e.target_grammar();
  Trail trail;
  const std::vector<Avm> n{one_sign(e.target_lexicon(), "chat")};
  const auto nbar = apply_rule_ordered(g, rule_named(g, "nbar_n"), n, trail);
  REQUIRE(nbar);
  const std::vector<Avm> fem{one_sign(e.target_lexicon(), "bonne"), *nbar};
  CHECK_FALSE(apply_rule_ordered(g, rule_named(g, "nbar_adj_nbar"), fem, trail));
  const std::vector<Avm> masc{one_sign(e.target_lexicon(), "bon"), *nbar};
  const auto ok = apply_rule_ordered(g, rule_named(g, "nbar_adj_nbar"), masc, trail);
  REQUIRE(ok);
  CHECK(*phon_of(*ok) == std::vector<std::string>{"bon", "chat"});
}
