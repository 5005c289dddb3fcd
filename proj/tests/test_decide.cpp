#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <fstream>

#include "doctest.h"
#include "lincat/corpus.hpp"
#include "lincat/decide.hpp"

using namespace lincat;

static std::string fixture(const std::string& name) {
  std::ifstream in(std::string(LINCAT_FIXTURE_DIR) + "/" + name);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

TEST_CASE("decide_equal basics") {
  SUBCASE("f vs f;id") {
    TermP f = parse_term("dup{a}");
    TermP g = parse_term("dup{a} ; id{!a (x) !a}");
    CHECK(decide_equal(f, g).equivalent());
  }
  SUBCASE("rule 8 instance") {
    TermP f = parse_term("dup{a} ; (weak{a} (x) id{!a}) ; lunitT{!a}");
    TermP g = parse_term("id{!a}");
    CHECK(decide_equal(f, g).equivalent());
  }
  SUBCASE("equal after normalization, and a distinct witness otherwise") {
    TermP f = parse_term("dup{a} ; (weak{a} (x) id{!a}) ; lunitT{!a}");
    TermP g = parse_term("delta{a} ; eps{!a}");
    CHECK(decide_equal(f, g).equivalent());  // both are id{!a}
    // a slid symmetry over equal legs stays equal (cocommutativity)
    Verdict same = decide_equal(parse_term("dup{a} ; (eps{a} (x) eps{a})"),
                                parse_term("dup{a} ; (eps{a} (x) eps{a}) ; symT{a,a}"));
    CHECK(same.kind == Verdict::EquivalentUpToSim);
    Verdict d = decide_equal(parse_term("id{a (x) b}"), parse_term("symT{a,b} ; symT{b,a}"));
    CHECK(d.kind == Verdict::EquivalentUpToSim);
    Verdict d2 = decide_equal(parse_term("id{a (x) a}"), parse_term("symT{a,a}"));
    CHECK(d2.kind == Verdict::Distinct);
    CHECK(!d2.witness.empty());
  }
  SUBCASE("boundary mismatch throws") {
    CHECK_THROWS_AS(decide_equal(parse_term("dup{a}"), parse_term("weak{a}")), TypeError);
  }
}

TEST_CASE("Fig.1 legs decide equivalent") {
  TermP l = parse_term(fixture("fig1_left.lin"));
  TermP r = parse_term(fixture("fig1_right.lin"));
  Verdict v = decide_equal(l, r);
  CHECK(v.equivalent());
}

TEST_CASE("decide_semantic agrees on small cases") {
  SUBCASE("same term is trivially equivalent") {
    TermP f = parse_term("dup{a}");
    Verdict v = decide_semantic(f, f);
    CHECK(v.equivalent());
  }
  SUBCASE("congruence-shuffled term") {
    TermP f = parse_term("dup{a}");
    TermP g = parse_term("dup{a} ; symT{!a,!a}");
    CHECK(decide_semantic(f, g).equivalent());
    CHECK(decide_equal(f, g).equivalent());
  }
  SUBCASE("distinct coefficient witness") {
    // dup vs a weakening-based term with the same boundary
    TermP f = parse_term("dup{a}");
    TermP g = parse_term("dup{a} ; (dup{a} (x) id{!a}) ; ((weak{a} (x) id{!a}) (x) id{!a}) ; (lunitT{!a} (x) id{!a})");
    Verdict ve = decide_equal(f, g);
    Verdict vs = decide_semantic(f, g);
    CHECK(ve.equivalent() == vs.equivalent());
    CHECK(ve.equivalent());  // d coassoc/counit make these equal
  }
  SUBCASE("genuinely distinct") {
    TermP f = parse_term("id{a (x) a}");
    TermP g = parse_term("symT{a,a}");
    Verdict ve = decide_equal(f, g);
    Verdict vs = decide_semantic(f, g);
    CHECK(ve.kind == Verdict::Distinct);
    CHECK(vs.kind == Verdict::Distinct);
  }
  SUBCASE("weakened leg vs duplicate-free identity") {
    // dup with one weakened leg equals the identity (rule 8); a duplicated
    // eps pair does not
    Verdict vs = decide_semantic(parse_term("dup{a} ; (weak{a} (x) id{!a}) ; lunitT{!a}"),
                                 parse_term("id{!a}"));
    CHECK(vs.equivalent());
  }
}

TEST_CASE("corpus cross-validation: semantic never contradicts syntactic") {
  auto terms = corpus(2024, 30, CorpusOptions{3, 1, {"a"}});
  int pairs = 0;
  for (size_t i = 0; i + 1 < terms.size() && pairs < 15; i += 2) {
    Judgement j1 = typecheck(terms[i]);
    Judgement j2 = typecheck(terms[i + 1]);
    if (!type_eq(j1.source, j2.source) || !type_eq(j1.target, j2.target)) continue;
    pairs++;
    Verdict ve = decide_equal(terms[i], terms[i + 1]);
    Verdict vs;
    try {
      vs = decide_semantic(terms[i], terms[i + 1]);
    } catch (Error&) {
      continue;
    }
    if (ve.kind == Verdict::Distinct) CHECK(vs.kind != Verdict::EquivalentUpToSim);
    if (vs.kind == Verdict::EquivalentUpToSim) CHECK(ve.kind == Verdict::EquivalentUpToSim);
  }
  // self-comparisons always agree
  for (size_t i = 0; i < 10 && i < terms.size(); i++) {
    CHECK(decide_equal(terms[i], terms[i]).equivalent());
  }
}

TEST_CASE("corpus terms normalize within fuel and give wellformed graphs") {
  auto terms = corpus(7, 40, CorpusOptions{4, 2, {"a", "b"}});
  for (auto& t : terms) {
    auto r = normalize(t, 10000, 48);
    CHECK(!r.fuel_exhausted);
    Graph g = normal_graph_of(typecheck(r.term));
    auto rep = check_wellformed(g);
    if (!rep.ok()) {
      CAPTURE(print_term(t));
      CAPTURE(rep.violations[0]);
    }
    CHECK(rep.ok());
  }
}
