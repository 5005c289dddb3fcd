#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lincat/corpus.hpp"
#include "lincat/decide.hpp"

using namespace lincat;

namespace {

struct Config {
  std::string atoms = "a,b";
  int interp_size = 2;
  int degree = 2;
  int fuel = 10000;
  int cong_budget = 64;
  long p = 0;
  std::string format = "text";
  uint64_t seed = 1;

  Interp interp() const {
    Interp I;
    std::stringstream ss(atoms);
    std::string a;
    while (std::getline(ss, a, ','))
      if (!a.empty()) I.declare(a, interp_size);
    I.degree_cap = degree;
    return I;
  }
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in.good()) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TermP load_term(const std::string& path) { return parse_term(slurp(path)); }

int run(int argc, char** argv) {
  CLI::App app{"normalization and equality for morphisms of the free linear category"};
  app.require_subcommand(1);
  Config cfg;
  app.add_option("--atoms", cfg.atoms, "comma-separated atom names");
  app.add_option("--interp-size", cfg.interp_size, "labels per atom set");
  app.add_option("--degree", cfg.degree, "multiset degree cap D");
  app.add_option("--fuel", cfg.fuel, "rewrite step budget");
  app.add_option("--cong-budget", cfg.cong_budget, "congruence search budget");
  app.add_option("--p", cfg.p, "prime override");
  app.add_option("--format", cfg.format, "text|json|dot");
  app.add_option("--seed", cfg.seed, "random seed");

  std::string file, file2, alpha_text, beta_text, via = "both";
  bool want_trace = false, semantic = false;
  int count = 50;

  auto* parse_cmd = app.add_subcommand("parse", "parse a term file and echo it back");
  parse_cmd->add_option("file", file)->required();

  auto* tc = app.add_subcommand("typecheck", "parse and report the boundary judgement");
  tc->add_option("file", file)->required();

  auto* nm = app.add_subcommand("normalize", "rewrite to normal form");
  nm->add_option("file", file)->required();
  nm->add_flag("--trace", want_trace, "print the rewrite trace");

  auto* gr = app.add_subcommand("graph", "normalized proof-net graph");
  gr->add_option("file", file)->required();

  auto* co = app.add_subcommand("coeff", "coefficient of the interpreted morphism");
  co->add_option("file", file)->required();
  co->add_option("--alpha", alpha_text, "source element")->required();
  co->add_option("--beta", beta_text, "target element")->required();
  co->add_option("--via", via, "pi|matrix|both");

  auto* pe = app.add_subcommand("pecho", "p-echo instance and star report");
  pe->add_option("file", file)->required();

  auto* de = app.add_subcommand("decide", "decide equality up to ~");
  de->add_option("f", file)->required();
  de->add_option("g", file2)->required();
  de->add_flag("--semantic", semantic, "use the p-echo route");
  de->add_flag("--trace", want_trace, "print both rewrite traces");

  auto* st = app.add_subcommand("selftest", "randomized corpus invariants");
  st->add_option("--count", count, "corpus size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*parse_cmd) {
      std::cout << print_term(load_term(file)) << "\n";
      return 0;
    }
    if (*tc) {
      Judgement j = typecheck(load_term(file));
      std::cout << print_term(j.term) << "\n  : " << print_type(j.source) << " -> "
                << print_type(j.target) << "\n";
      return 0;
    }
    if (*nm) {
      auto r = normalize(load_term(file), cfg.fuel, cfg.cong_budget);
      if (want_trace) std::cout << r.trace.text();
      std::cout << print_term(r.term) << "\n";
      if (r.fuel_exhausted) {
        std::cerr << "inconclusive: fuel exhausted\n";
        return 2;
      }
      return 0;
    }
    if (*gr) {
      auto r = normalize(load_term(file), cfg.fuel, cfg.cong_budget);
      if (r.fuel_exhausted) {
        std::cerr << "inconclusive: fuel exhausted\n";
        return 2;
      }
      Graph g = normal_graph_of(typecheck(r.term));
      auto rep = check_wellformed(g);
      for (auto& v : rep.violations) std::cerr << "violation: " << v << "\n";
      if (cfg.format == "dot")
        std::cout << to_dot(g);
      else if (cfg.format == "json")
        std::cout << to_json(g) << "\n";
      else {
        auto s = graph_stats(g);
        std::cout << "wires: " << s.size << "\nboards: " << s.board_count
                  << "\nbioriented: " << s.bioriented_count
                  << "\nduplication scale: " << s.dup_scale.str() << "\n";
      }
      return rep.ok() ? 0 : 3;
    }
    if (*co) {
      Interp I = cfg.interp();
      Judgement j = typecheck(load_term(file));
      ElemId alpha = parse_element(alpha_text);
      ElemId beta = parse_element(beta_text);
      if (via == "matrix" || via == "both") {
        BigInt m = coeff(j, alpha, beta, I);
        std::cout << "matrix: " << m.str() << "\n";
      }
      if (via == "pi" || via == "both") {
        auto r = normalize(j.term, cfg.fuel, cfg.cong_budget);
        if (r.fuel_exhausted) {
          std::cerr << "inconclusive: fuel exhausted\n";
          return 2;
        }
        Graph g = normal_graph_of(typecheck(r.term));
        BigInt m = pi_exact(g, {alpha}, {beta}, I);
        std::cout << "pi: " << m.str() << "\n";
        if (cfg.p)
          std::cout << "pi mod " << cfg.p << ": " << pi_mod_p(g, {alpha}, {beta}, cfg.p, I)
                    << "\n";
      }
      return 0;
    }
    if (*pe) {
      auto r = normalize(load_term(file), cfg.fuel, cfg.cong_budget);
      if (r.fuel_exhausted) {
        std::cerr << "inconclusive: fuel exhausted\n";
        return 2;
      }
      Graph g = normal_graph_of(typecheck(r.term));
      GraphStats s = graph_stats(g);
      BigInt bound = (long)s.size;
      if (s.dup_scale > bound) bound = s.dup_scale;
      long p = cfg.p ? cfg.p : next_prime_above((long)bound);
      Interp I = cfg.interp();
      for (auto sets = I.atom_sets; auto& [name, labels] : sets)
        if (labels.size() < s.bioriented_count + 1) I.declare(name, (int)s.bioriented_count + 1);
      EchoInstance inst = echo_instance(g, default_echo_params(g, p, I));
      std::cout << "p: " << p << "\n";
      for (size_t i = 0; i < inst.top.size(); i++)
        std::cout << "alpha[" << i << "]: " << print_element(inst.top[i]) << "\n";
      for (size_t i = 0; i < inst.bottom.size(); i++)
        std::cout << "beta[" << i << "]: " << print_element(inst.bottom[i]) << "\n";
      FormPair fp = canonical_forms(generic_form(g));
      for (size_t i = 0; i < fp.top.size(); i++)
        std::cout << "phi[" << i << "]: " << print_form(fp.top[i]) << "\n";
      for (size_t i = 0; i < fp.bottom.size(); i++)
        std::cout << "psi[" << i << "]: " << print_form(fp.bottom[i]) << "\n";
      StarReport rep = check_stars(g, inst, p, I);
      for (int i = 0; i < 5; i++)
        std::cout << "*" << (i + 1) << ": " << (rep.star[i] ? "pass" : "FAIL ")
                  << rep.witness[i] << "\n";
      return rep.all() ? 0 : 1;
    }
    if (*de) {
      TermP f = load_term(file);
      TermP g = load_term(file2);
      Verdict v = semantic ? decide_semantic(f, g, cfg.p, nullptr, cfg.fuel, cfg.cong_budget)
                           : decide_equal(f, g, cfg.fuel, cfg.cong_budget);
      if (want_trace) {
        std::cout << "--- trace f\n" << v.trace_f.text();
        std::cout << "--- trace g\n" << v.trace_g.text();
      }
      std::cout << v.name() << "\n";
      if (!v.witness.empty()) std::cout << v.witness << "\n";
      return v.exit_code();
    }
    if (*st) {
      auto terms = corpus(cfg.seed, count, CorpusOptions{4, 2, {"a", "b"}});
      size_t normalized = 0, agreed = 0;
      for (auto& t : terms) {
        auto r = normalize(t, cfg.fuel, cfg.cong_budget);
        if (r.fuel_exhausted) {
          std::cout << "FAIL fuel: " << print_term(t) << "\n";
          return 1;
        }
        normalized++;
        Graph g0 = normal_graph_of(typecheck(r.term));
        auto rep = check_wellformed(g0);
        if (!rep.ok()) {
          std::cout << "FAIL wellformed: " << print_term(t) << ": " << rep.violations[0]
                    << "\n";
          return 1;
        }
        auto r2 = normalize(t, cfg.fuel, cfg.cong_budget, cfg.seed + 17);
        Graph g1 = normal_graph_of(typecheck(r2.term));
        if (!almost_equal(g0, g1)) {
          std::cout << "FAIL confluence: " << print_term(t) << "\n";
          return 1;
        }
        agreed++;
      }
      std::cout << "selftest: " << normalized << " normalized, " << agreed
                << " confluence-checked, seed " << cfg.seed << "\n";
      return 0;
    }
  } catch (ParseError& e) {
    std::cerr << "parse error at position " << e.pos << ": " << e.what() << "\n";
    return 3;
  } catch (TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
    return 3;
  } catch (Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
