#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lincat/corpus.hpp"
#include "lincat/decide.hpp"

namespace py = pybind11;
using namespace lincat;

namespace {

Interp make_interp(const std::vector<std::string>& atoms, int size, int degree) {
  Interp I;
  for (auto& a : atoms) I.declare(a, size);
  I.degree_cap = degree;
  return I;
}

}  // namespace

PYBIND11_MODULE(pylincat, m) {
  m.doc() = "normalization and equality for morphisms of the free linear category";

  m.def("parse", [](const std::string& s) { return print_term(parse_term(s)); },
        "parse a term and return its canonical printing");

  m.def("typecheck", [](const std::string& s) {
    Judgement j = typecheck(parse_term(s));
    return py::make_tuple(print_type(j.source), print_type(j.target));
  });

  m.def(
      "normalize",
      [](const std::string& s, int fuel, int cong_budget) {
        auto r = normalize(parse_term(s), fuel, cong_budget);
        if (r.fuel_exhausted) throw std::runtime_error("fuel exhausted");
        return py::make_tuple(print_term(r.term), r.trace.text());
      },
      py::arg("term"), py::arg("fuel") = 10000, py::arg("cong_budget") = 64);

  m.def(
      "is_normal",
      [](const std::string& s, int cong_budget) { return is_normal(parse_term(s), cong_budget); },
      py::arg("term"), py::arg("cong_budget") = 64);

  m.def(
      "graph_json",
      [](const std::string& s) {
        auto r = normalize(parse_term(s));
        return to_json(normal_graph_of(typecheck(r.term)));
      },
      py::arg("term"));

  m.def(
      "graph_dot",
      [](const std::string& s) {
        auto r = normalize(parse_term(s));
        return to_dot(normal_graph_of(typecheck(r.term)));
      },
      py::arg("term"));

  m.def(
      "graph_stats",
      [](const std::string& s) {
        auto r = normalize(parse_term(s));
        GraphStats st = graph_stats(normal_graph_of(typecheck(r.term)));
        py::dict d;
        d["size"] = st.size;
        d["boards"] = st.board_count;
        d["bioriented"] = st.bioriented_count;
        d["dup_scale"] = st.dup_scale.str();
        return d;
      },
      py::arg("term"));

  m.def(
      "coeff",
      [](const std::string& term, const std::string& alpha, const std::string& beta,
         const std::vector<std::string>& atoms, int interp_size, int degree,
         const std::string& via) {
        Interp I = make_interp(atoms, interp_size, degree);
        Judgement j = typecheck(parse_term(term));
        ElemId a = parse_element(alpha), b = parse_element(beta);
        if (via == "matrix") return coeff(j, a, b, I).str();
        auto r = normalize(j.term);
        Graph g = normal_graph_of(typecheck(r.term));
        BigInt pi = pi_exact(g, {a}, {b}, I);
        if (via == "pi") return pi.str();
        BigInt mx = coeff(j, a, b, I);
        if (mx != pi) throw std::runtime_error("pi and matrix disagree");
        return pi.str();
      },
      py::arg("term"), py::arg("alpha"), py::arg("beta"),
      py::arg("atoms") = std::vector<std::string>{"a", "b"}, py::arg("interp_size") = 2,
      py::arg("degree") = 2, py::arg("via") = "both");

  m.def(
      "decide",
      [](const std::string& f, const std::string& g, bool semantic) {
        Verdict v = semantic ? decide_semantic(parse_term(f), parse_term(g))
                             : decide_equal(parse_term(f), parse_term(g));
        py::dict d;
        d["verdict"] = std::string(v.name());
        d["witness"] = v.witness;
        d["exit_code"] = v.exit_code();
        return d;
      },
      py::arg("f"), py::arg("g"), py::arg("semantic") = false);

  m.def(
      "pecho",
      [](const std::string& term, long p) {
        auto r = normalize(parse_term(term));
        Graph g = normal_graph_of(typecheck(r.term));
        GraphStats st = graph_stats(g);
        BigInt bound = (long)st.size;
        if (st.dup_scale > bound) bound = st.dup_scale;
        if (!p) p = next_prime_above(bound.convert_to<long>());
        Interp I;
        I.declare("a", (int)st.bioriented_count + 1);
        I.declare("b", (int)st.bioriented_count + 1);
        I.degree_cap = 2;
        EchoInstance inst = echo_instance(g, default_echo_params(g, p, I));
        StarReport rep = check_stars(g, inst, p, I);
        py::dict d;
        d["p"] = p;
        std::vector<std::string> top, bottom;
        for (ElemId e : inst.top) top.push_back(print_element(e));
        for (ElemId e : inst.bottom) bottom.push_back(print_element(e));
        d["alpha"] = top;
        d["beta"] = bottom;
        std::vector<bool> stars(rep.star, rep.star + 5);
        d["stars"] = stars;
        return d;
      },
      py::arg("term"), py::arg("p") = 0);

  m.def(
      "selftest",
      [](uint64_t seed, int count) {
        auto terms = corpus(seed, count, CorpusOptions{4, 2, {"a", "b"}});
        for (auto& t : terms) {
          auto r = normalize(t, 10000, 48);
          if (r.fuel_exhausted) return false;
          Graph g = normal_graph_of(typecheck(r.term));
          if (!check_wellformed(g).ok()) return false;
        }
        return true;
      },
      py::arg("seed") = 1, py::arg("count") = 10);
}
