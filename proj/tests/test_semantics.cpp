#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "lincat/semantics.hpp"

using namespace lincat;

static Interp small_interp(int n = 2, int D = 2) {
  Interp I;
  I.declare("a", n);
  I.declare("b", n);
  I.degree_cap = D;
  return I;
}

TEST_CASE("interpret_type enumeration sizes") {
  Interp I = small_interp(2, 2);
  CHECK(enum_type(parse_type("1"), I, 2).size() == 1);
  CHECK(enum_type(parse_type("a"), I, 2) == enum_type(parse_type("a^"), I, 2));
  // multisets of size <= 2 over 2 labels: 1 + 2 + 3
  CHECK(enum_type(parse_type("!a"), I, 2).size() == 6);
  CHECK(enum_type(parse_type("a (x) a"), I, 2).size() == 4);
}

TEST_CASE("generator coefficients") {
  Interp I = small_interp(2, 3);
  ElemId x = e_atom("a0"), y = e_atom("a1");

  SUBCASE("identity") {
    Judgement j = typecheck(parse_term("id{a}"));
    CHECK(coeff(j, x, x, I) == 1);
    CHECK(coeff(j, x, y, I) == 0);
  }
  SUBCASE("weakening carries * to the empty multiset") {
    Judgement j = typecheck(parse_term("weak{a}"));
    CHECK(coeff(j, e_mset({}), e_star(), I) == 1);
    CHECK(coeff(j, e_mset({{x, Count(1)}}), e_star(), I) == 0);
  }
  SUBCASE("duplicator decompositions") {
    Judgement j = typecheck(parse_term("dup{a}"));
    ElemId xy = e_mset({{x, Count(1)}, {y, Count(1)}});
    ElemId xx = e_mset({{x, Count(2)}});
    CHECK(coeff(j, xy, e_pair(e_mset({{x, Count(1)}}), e_mset({{y, Count(1)}})), I) == 1);
    CHECK(coeff(j, xx, e_pair(e_mset({{x, Count(1)}}), e_mset({{x, Count(1)}})), I) == 1);
    CHECK(coeff(j, xy, e_pair(e_mset({{y, Count(1)}}), e_mset({{x, Count(1)}})), I) == 1);
    CHECK(coeff(j, xy, e_pair(xy, e_mset({})), I) == 1);
    CHECK(coeff(j, xy, e_pair(xx, e_mset({})), I) == 0);
  }
  SUBCASE("tau is the identity pairing") {
    Judgement j = typecheck(parse_term("tau{a}"));
    auto m = full_matrix(j, I);
    int units = 0;
    for (auto& [k, v] : m) {
      CHECK(v == 1);
      units++;
    }
    CHECK(units == 2);
  }
  SUBCASE("rule 2 composite equals the identity matrix") {
    Judgement lhs = typecheck(parse_term("delta{a} ; eps{!a}"));
    Judgement rhs = typecheck(parse_term("id{!a}"));
    CHECK(full_matrix(lhs, I) == full_matrix(rhs, I));
  }
}

TEST_CASE("delta admits empty-padding intermediate indices exactly") {
  // delta ; delta vs delta ; !delta on an entry whose intermediate multiset
  // is larger than the queried window: backward evaluation stays exact.
  Interp I = small_interp(1, 2);
  Judgement l1 = typecheck(parse_term("delta{a} ; delta{!a}"));
  Judgement l2 = typecheck(parse_term("delta{a} ; !(delta{a})"));
  ElemId empty = e_mset({});
  ElemId ee = e_mset({{empty, Count(2)}});  // {{},{}} in exp^2
  ElemId T = e_mset({{ee, Count(2)}});      // {{{},{}},{{},{}}} in exp^3
  CHECK(coeff(l1, empty, T, I) == 1);
  CHECK(coeff(l1, empty, T, I) == coeff(l2, empty, T, I));
}

TEST_CASE("symbolic 2x2 exp matrix reproduces the displayed block") {
  ElemId i1 = e_atom("i1"), i2 = e_atom("i2");
  std::vector<ElemId> idx = {i1, i2};
  std::map<std::pair<ElemId, ElemId>, Poly> M;
  M[{i1, i1}] = Poly::var("a");
  M[{i2, i1}] = Poly::var("b");
  M[{i1, i2}] = Poly::var("c");
  M[{i2, i2}] = Poly::var("d");

  auto E = exp_matrix(M, idx, idx, 2);

  auto ms = [&](int n1, int n2) {
    std::vector<std::pair<ElemId, Count>> es;
    if (n1) es.push_back({i1, Count((long)n1)});
    if (n2) es.push_back({i2, Count((long)n2)});
    return e_mset(std::move(es));
  };
  Poly a = Poly::var("a"), b = Poly::var("b"), c = Poly::var("c"), d = Poly::var("d");

  CHECK(E.at({ms(0, 0), ms(0, 0)}) == Poly(1));
  CHECK(E.find({ms(1, 0), ms(0, 0)}) == E.end());
  CHECK(E.at({ms(1, 0), ms(1, 0)}) == a);
  CHECK(E.at({ms(0, 1), ms(1, 0)}) == b);
  CHECK(E.at({ms(1, 0), ms(0, 1)}) == c);
  CHECK(E.at({ms(0, 1), ms(0, 1)}) == d);
  // degree-2 block: y1^2 = a^2 x1^2 + 2ab x1x2 + b^2 x2^2, etc.
  CHECK(E.at({ms(2, 0), ms(2, 0)}) == a * a);
  CHECK(E.at({ms(1, 1), ms(2, 0)}) == Poly(2) * a * b);
  CHECK(E.at({ms(0, 2), ms(2, 0)}) == b * b);
  CHECK(E.at({ms(2, 0), ms(1, 1)}) == a * c);
  CHECK(E.at({ms(1, 1), ms(1, 1)}) == a * d + b * c);
  CHECK(E.at({ms(0, 2), ms(1, 1)}) == b * d);
  CHECK(E.at({ms(2, 0), ms(0, 2)}) == c * c);
  CHECK(E.at({ms(1, 1), ms(0, 2)}) == Poly(2) * c * d);
  CHECK(E.at({ms(0, 2), ms(0, 2)}) == d * d);
  // the asymmetry: (1,2) carries coefficient 2, (2,1) carries 1
  CHECK(E.at({ms(1, 1), ms(2, 0)}) == Poly(2) * a * b);
  CHECK(E.at({ms(2, 0), ms(1, 1)}) == a * c);
}

TEST_CASE("exp respects composition on random natural matrices") {
  std::mt19937 rng(11);
  ElemId i1 = e_atom("i1"), i2 = e_atom("i2");
  std::vector<ElemId> idx = {i1, i2};
  for (int trial = 0; trial < 8; trial++) {
    std::map<std::pair<ElemId, ElemId>, BigInt> M, N, NM;
    std::uniform_int_distribution<int> d(0, 3);
    for (ElemId r : idx)
      for (ElemId c : idx) {
        M[{r, c}] = d(rng);
        N[{r, c}] = d(rng);
      }
    for (ElemId a : idx)
      for (ElemId c : idx) {
        BigInt s = 0;
        for (ElemId b : idx) s += N[{b, c}] * M[{a, b}];
        NM[{a, c}] = s;
      }
    auto clean = [](std::map<std::pair<ElemId, ElemId>, BigInt> m) {
      for (auto it = m.begin(); it != m.end();)
        it = it->second == 0 ? m.erase(it) : std::next(it);
      return m;
    };
    auto EM = exp_matrix(clean(M), idx, idx, 3);
    auto EN = exp_matrix(clean(N), idx, idx, 3);
    auto ENM = exp_matrix(clean(NM), idx, idx, 3);
    auto msets = enum_msets(idx, 3);
    for (ElemId alpha : msets)
      for (ElemId gamma : msets) {
        BigInt s = 0;
        for (ElemId beta : msets) {
          auto it1 = EM.find({alpha, beta});
          auto it2 = EN.find({beta, gamma});
          if (it1 != EM.end() && it2 != EN.end()) s += it1->second * it2->second;
        }
        auto it = ENM.find({alpha, gamma});
        BigInt expect = it == ENM.end() ? BigInt(0) : it->second;
        CHECK(s == expect);
      }
  }
}

TEST_CASE("phi0 column and rule 14") {
  Interp I = small_interp(1, 3);
  Judgement j = typecheck(parse_term("phi0"));
  for (auto beta : enum_type(parse_type("!1"), I, 3)) CHECK(coeff(j, e_star(), beta, I) == 1);
  Judgement r14 = typecheck(parse_term("phi0 ; eps{1}"));
  CHECK(full_matrix(r14, I) == full_matrix(typecheck(parse_term("id{1}")), I));
}

TEST_CASE("bar stripping: interpretation ignores overbars") {
  Interp I = small_interp(2, 2);
  Judgement j = typecheck(parse_term("gamma{a}"));
  ElemId x = e_atom("a0");
  CHECK(coeff(j, e_pair(e_bar(x), x), e_star(), I) == 1);
  CHECK(coeff(j, e_pair(x, x), e_star(), I) == 1);
}

TEST_CASE("gamma on a banged type evaluates pointwise") {
  Interp I = small_interp(1, 1);
  Judgement g = typecheck(parse_term("gamma{!a}"));
  ElemId m0 = e_mset({});
  CHECK(coeff(g, e_pair(m0, m0), e_star(), I) == 1);
  CHECK(coeff(g, e_pair(m0, e_mset({{e_atom("a0"), Count(1)}})), e_star(), I) == 0);
}

TEST_CASE("element literal syntax round-trips") {
  const char* samples[] = {"a0", "*", "(a0,*)", "{}", "{a0:2, a1}", "bar((a0,{a1:3}))"};
  for (auto s : samples) {
    ElemId e = parse_element(s);
    CHECK(parse_element(print_element(e)) == e);
  }
}
