#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "helpers.hpp"

using namespace cgs;
using namespace cgs::testutil;

TEST_CASE("parse builds the expected core ASTs") {
  auto f = parse_formula("<<1,2>> X p");
  REQUIRE(f->kind == NodeKind::Coalition);
  CHECK(f->coalition == std::set<AgentId>{1, 2});
  REQUIRE(f->lhs->kind == NodeKind::Next);
  CHECK(f->lhs->lhs->kind == NodeKind::Atom);
  CHECK(f->lhs->lhs->atom == "p");

  auto g = parse_formula("~<<1>> X q");
  REQUIRE(g->kind == NodeKind::Not);
  CHECK(g->lhs->kind == NodeKind::Coalition);
  CHECK(g->lhs->coalition == std::set<AgentId>{1});

  auto h = parse_formula("p U (q | r)");
  REQUIRE(h->kind == NodeKind::Until);
  CHECK(h->lhs->atom == "p");
  CHECK(h->rhs->kind == NodeKind::Or);
}

TEST_CASE("precedence and associativity") {
  // U binds looser than | and &, tighter than ->; right associative.
  CHECK(equal(parse_formula("p U q U r"),
              f_until(f_atom("p"), f_until(f_atom("q"), f_atom("r")))));
  CHECK(equal(parse_formula("p | q U r"),
              f_until(f_or(f_atom("p"), f_atom("q")), f_atom("r"))));
  CHECK(equal(parse_formula("p & q | r"),
              f_or(f_and(f_atom("p"), f_atom("q")), f_atom("r"))));
  CHECK(equal(parse_formula("p -> q U r"),
              f_implies(f_atom("p"), f_until(f_atom("q"), f_atom("r")))));
  CHECK(equal(parse_formula("~p | q"), f_or(f_not(f_atom("p")), f_atom("q"))));
  CHECK(equal(parse_formula("X p U q"),
              f_until(f_next(f_atom("p")), f_atom("q"))));
}

TEST_CASE("derived operators desugar into the core") {
  CHECK(equal(parse_formula("F p"), f_until(f_true(), f_atom("p"))));
  CHECK(equal(parse_formula("G p"),
              f_not(f_until(f_true(), f_not(f_atom("p"))))));
  CHECK(equal(parse_formula("p & q"),
              f_not(f_or(f_not(f_atom("p")), f_not(f_atom("q"))))));
  CHECK(equal(parse_formula("false"), f_not(f_true())));
  CHECK(render(parse_formula("F p")).find("U") != std::string::npos);
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_formula(""), ParseError);
  CHECK_THROWS_AS(parse_formula("p |"), ParseError);
  CHECK_THROWS_AS(parse_formula("<<1 p"), ParseError);
  CHECK_THROWS_AS(parse_formula("(p"), ParseError);
  CHECK_THROWS_AS(parse_formula("p q"), ParseError);
  try {
    parse_formula("p | ");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.column > 1);
  }
}

TEST_CASE("empty coalitions parse") {
  auto f = parse_formula("<<>> X p");
  REQUIRE(f->kind == NodeKind::Coalition);
  CHECK(f->coalition.empty());
}

TEST_CASE("classify separates the fragments") {
  CHECK(classify(parse_formula("X (p U q)")) == FragmentTag::LTL);
  CHECK(classify(parse_formula("p | ~q")) == FragmentTag::LTL);
  CHECK(classify(parse_formula("<<1>>(p U q)")) == FragmentTag::ATL);
  CHECK(classify(parse_formula("<<1>> X q")) == FragmentTag::ATL);
  CHECK(classify(parse_formula("~<<1>> X q | <<2>>(p U <<1>> X p)")) ==
        FragmentTag::ATL);
  CHECK(classify(parse_formula("<<1>> X X p")) == FragmentTag::ATLSTAR);
  CHECK(classify(parse_formula("<<1>> (p U X q)")) == FragmentTag::ATLSTAR);
  CHECK(classify(parse_formula("<<1>> G p")) == FragmentTag::ATLSTAR);
  // A path formula that is not a state formula is not ATL.
  CHECK(classify(parse_formula("X <<1>> X p")) == FragmentTag::ATLSTAR);
}

TEST_CASE("state-formula recognition") {
  CHECK(is_state_formula(parse_formula("p | <<1>> X q")));
  CHECK(!is_state_formula(parse_formula("X p")));
  CHECK(!is_state_formula(parse_formula("p U q")));
  CHECK(!contains_coalition(parse_formula("p U q")));
  CHECK(contains_coalition(parse_formula("p U <<>> X q")));
}

TEST_CASE("translation doubles exactly the next operators") {
  CHECK(equal(translate_tr(parse_formula("p")), parse_formula("p")));
  CHECK(equal(translate_tr(parse_formula("<<1>> X q")),
              parse_formula("<<1>> X X q")));
  CHECK(equal(translate_tr(parse_formula("<<1,2>>(p U q)")),
              parse_formula("<<1,2>>(p U q)")));
  CHECK(equal(translate_tr(parse_formula("~(p | X q)")),
              parse_formula("~(p | X X q)")));

  Rng rng(2024);
  for (int round = 0; round < 1000; ++round) {
    auto f = random_state_formula(rng, {"p", "q", "r"}, 2, 4);
    auto t = translate_tr(f);
    NodeCounts a = count_nodes(f), b = count_nodes(t);
    CHECK(b.nexts == 2 * a.nexts);
    CHECK(b.atoms == a.atoms);
    CHECK(b.truths == a.truths);
    CHECK(b.nots == a.nots);
    CHECK(b.ors == a.ors);
    CHECK(b.untils == a.untils);
    CHECK(b.coalitions == a.coalitions);
    CHECK(b.total() <= 2 * a.total());
  }
}

TEST_CASE("translation pushes X-shaped ATL out of the fragment") {
  auto f = parse_formula("<<1>> X q");
  REQUIRE(classify(f) == FragmentTag::ATL);
  CHECK(classify(translate_tr(f)) == FragmentTag::ATLSTAR);
  // Until shapes survive.
  auto u = parse_formula("<<1>>(p U q)");
  CHECK(classify(translate_tr(u)) == FragmentTag::ATL);
}

TEST_CASE("render round-trips") {
  for (const char* text :
       {"<<1,2>> X p", "~<<1>> X q", "p U (q | r)", "F (p & G q)",
        "<<>> (p U q)", "p -> q -> r", "true U ~false"}) {
    auto f = parse_formula(text);
    CHECK(equal(parse_formula(render(f)), f));
  }
  Rng rng(7);
  for (int round = 0; round < 500; ++round) {
    auto f = random_state_formula(rng, {"p", "q", "r"}, 3, 6);
    auto back = parse_formula(render(f));
    CHECK(equal(back, f));
    // render o parse is a fixed point on canonical texts.
    CHECK(render(back) == render(f));
  }
}

TEST_CASE("vocabulary and agent collection") {
  auto f = parse_formula("<<1,3>>(p U (q | <<2>> X p))");
  CHECK(formula_atoms(f) == std::set<std::string>{"p", "q"});
  CHECK(formula_agents(f) == std::set<AgentId>{1, 2, 3});
}
