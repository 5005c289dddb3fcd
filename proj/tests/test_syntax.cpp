#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "lincat/term.hpp"
#include "lincat/type.hpp"

using namespace lincat;

TEST_CASE("type parsing per the declared grammar") {
  TypeP t = parse_type("!(a (%) (!a)^)");
  REQUIRE(t->kind == Type::Bang);
  REQUIRE(t->a->kind == Type::Par);
  CHECK(t->a->a->kind == Type::Atom);
  CHECK(t->a->a->name == "a");
  CHECK(t->a->b->kind == Type::Dual);
  CHECK(t->a->b->a->kind == Type::Bang);

  CHECK(parse_type("1")->kind == Type::One);
  TypeP u = parse_type("a (x) 1");
  CHECK(u->kind == Type::Tensor);
  CHECK(u->a->name == "a");
  CHECK(u->b->kind == Type::One);

  // postfix binds tighter than prefix bang
  CHECK(type_eq(parse_type("!a^"), t_bang(t_dual(t_atom("a")))));
  CHECK(type_eq(parse_type("(!a)^"), t_dual(t_bang(t_atom("a")))));
  // infix left-assoc
  CHECK(type_eq(parse_type("a (x) b (x) c"),
                t_tensor(t_tensor(t_atom("a"), t_atom("b")), t_atom("c"))));
  CHECK_THROWS_AS(parse_type("a (x) b (%) c"), ParseError);
  CHECK_THROWS_AS(parse_type("a (x"), ParseError);
}

TEST_CASE("typing table for generators") {
  auto a = t_atom("a");

  Judgement j = typecheck(parse_term("dup{a}"));
  CHECK(type_eq(j.source, t_bang(a)));
  CHECK(type_eq(j.target, t_tensor(t_bang(a), t_bang(a))));

  j = typecheck(parse_term("delta{a} ; eps{!a}"));
  CHECK(type_eq(j.source, t_bang(a)));
  CHECK(type_eq(j.target, t_bang(a)));

  CHECK_THROWS_AS(typecheck(parse_term("eps{a} ; delta{a}")), TypeError);

  j = typecheck(parse_term("phi{a,b}"));
  CHECK(print_type(j.source) == "!a (x) !b");
  CHECK(print_type(j.target) == "!(a (x) b)");

  j = typecheck(parse_term("phi0"));
  CHECK(print_type(j.source) == "1");
  CHECK(print_type(j.target) == "!1");

  j = typecheck(parse_term("dist{a,b,c}"));
  CHECK(print_type(j.source) == "a (x) (b (%) c)");
  CHECK(print_type(j.target) == "(a (x) b) (%) c");

  j = typecheck(parse_term("dist'{a,b,c}"));
  CHECK(print_type(j.source) == "(a (%) b) (x) c");
  CHECK(print_type(j.target) == "a (%) (b (x) c)");

  j = typecheck(parse_term("tau{a}"));
  CHECK(print_type(j.source) == "1");
  CHECK(print_type(j.target) == "a (%) a^");

  j = typecheck(parse_term("gamma{a}"));
  CHECK(print_type(j.source) == "a^ (x) a");
  CHECK(print_type(j.target) == "#");

  j = typecheck(parse_term("weak{a}"));
  CHECK(print_type(j.target) == "1");
}

TEST_CASE("type error reports the offending path") {
  try {
    typecheck(parse_term("(delta{a} ; eps{a}) ; dup{b}"));
    FAIL("expected a type error");
  } catch (TypeError& e) {
    std::string msg = e.what();
    CHECK(msg.find(".0") != std::string::npos);
  }
}

TEST_CASE("pretty printing round-trips and is deterministic") {
  CHECK(print_term(m_id(t_one())) == "id{1}");
  CHECK(print_term(parse_term("delta{a} ; !(eps{a})")) == "delta{a} ; !(eps{a})");
  CHECK(print_term(parse_term("phi{a,b}")) == "phi{a,b}");

  const char* samples[] = {
      "delta{a} ; eps{!a}",
      "(dup{a} (x) id{!b}) ; (weak{a} (x) weak{b})",
      "!(dup{a} ; (weak{a} (x) eps{a}))",
      "tau{a} ; (id{a} (%) id{a^})",
      "dist{a,b (x) c, #} ; (assocT'{a,b,c} (%) id{#})",
      "lunitT'{!a} ; (phi0 (x) id{!a}) ; phi{1,a}",
      "gamma{!(a (%) b^)}",
  };
  for (auto s : samples) {
    TermP t = parse_term(s);
    std::string p1 = print_term(t);
    TermP t2 = parse_term(p1);
    CHECK(term_eq(t, t2));
    CHECK(print_term(t2) == p1);
  }
}

// random term builder over random shallow types (parse/print property)
static TermP random_term(std::mt19937& rng, int depth);
static TypeP random_type(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> d(0, depth > 0 ? 6 : 2);
  switch (d(rng)) {
    case 0: return t_atom("a");
    case 1: return t_atom("b");
    case 2: return t_one();
    case 3: return t_bot();
    case 4: return t_tensor(random_type(rng, depth - 1), random_type(rng, depth - 1));
    case 5: return t_dual(random_type(rng, depth - 1));
    default: return t_bang(random_type(rng, depth - 1));
  }
}

static TermP random_term(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> d(0, depth > 0 ? 9 : 5);
  switch (d(rng)) {
    case 0: return m_id(random_type(rng, 1));
    case 1: return m_gen(Term::Delta, random_type(rng, 1));
    case 2: return m_gen(Term::Dup, random_type(rng, 1));
    case 3: return m_gen(Term::Weak, random_type(rng, 1));
    case 4: return m_gen(Term::PhiT, random_type(rng, 1), random_type(rng, 1));
    case 5: return m_gen(Term::Tau, random_type(rng, 1));
    case 6: {
      TermP f = random_term(rng, depth - 1);
      Judgement j = typecheck(f);
      return m_comp(f, m_id(j.target));
    }
    case 7: return m_tensor(random_term(rng, depth - 1), random_term(rng, depth - 1));
    case 8: return m_par(random_term(rng, depth - 1), random_term(rng, depth - 1));
    default: return m_bang(random_term(rng, depth - 1));
  }
}

TEST_CASE("parse after print is the identity on random terms") {
  std::mt19937 rng(7);
  for (int i = 0; i < 300; i++) {
    TermP t = random_term(rng, 4);
    std::string s = print_term(t);
    CAPTURE(s);
    TermP u = parse_term(s);
    CHECK(term_eq(t, u));
  }
}
