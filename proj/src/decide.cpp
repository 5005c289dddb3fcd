#include "lincat/decide.hpp"

namespace lincat {

namespace {

std::string first_divergence(const std::string& a, const std::string& b) {
  size_t i = 0;
  while (i < a.size() && i < b.size() && a[i] == b[i]) i++;
  size_t from = i > 40 ? i - 40 : 0;
  return "canonical forms diverge at offset " + std::to_string(i) + ":\n  left:  ..." +
         a.substr(from, 80) + "\n  right: ..." + b.substr(from, 80);
}

}  // namespace

Verdict decide_equal(const TermP& f, const TermP& g, int fuel, int cong_budget) {
  Verdict v;
  Judgement jf = typecheck(f);
  Judgement jg = typecheck(g);
  if (!type_eq(jf.source, jg.source) || !type_eq(jf.target, jg.target))
    throw TypeError("decide: boundary types differ");

  NormalizeResult nf = normalize(f, fuel, cong_budget);
  NormalizeResult ng = normalize(g, fuel, cong_budget);
  v.trace_f = nf.trace;
  v.trace_g = ng.trace;
  if (nf.fuel_exhausted || ng.fuel_exhausted) {
    v.kind = Verdict::Inconclusive;
    v.witness = "fuel exhausted before reaching a normal form";
    return v;
  }
  Graph gf = normal_graph_of(typecheck(nf.term));
  Graph gg = normal_graph_of(typecheck(ng.term));
  std::string cf = canonical_certificate(gf);
  std::string cg = canonical_certificate(gg);
  if (cf == cg) {
    v.kind = Verdict::EquivalentUpToSim;
    return v;
  }
  v.kind = Verdict::Distinct;
  v.witness = first_divergence(cf, cg);
  return v;
}

long semantic_prime(const Graph& gf, const Graph& gg) {
  GraphStats sf = graph_stats(gf);
  GraphStats sg = graph_stats(gg);
  BigInt bound = (long)std::max(sf.size, sg.size);
  if (sf.dup_scale > bound) bound = sf.dup_scale;
  if (bound > 1000000) throw Error("decide_semantic: required prime bound is impractical");
  return next_prime_above((long)bound);
}

Verdict decide_semantic(const TermP& f, const TermP& g, long p_override, const Interp* I0,
                        int fuel, int cong_budget) {
  Verdict v;
  Judgement jf = typecheck(f);
  Judgement jg = typecheck(g);
  if (!type_eq(jf.source, jg.source) || !type_eq(jf.target, jg.target))
    throw TypeError("decide: boundary types differ");

  NormalizeResult nf = normalize(f, fuel, cong_budget);
  NormalizeResult ng = normalize(g, fuel, cong_budget);
  v.trace_f = nf.trace;
  v.trace_g = ng.trace;
  if (nf.fuel_exhausted || ng.fuel_exhausted) {
    v.kind = Verdict::Inconclusive;
    v.witness = "fuel exhausted before reaching a normal form";
    return v;
  }
  Graph gf = normal_graph_of(typecheck(nf.term));
  Graph gg = normal_graph_of(typecheck(ng.term));

  long p = semantic_prime(gf, gg);
  if (p_override) {
    if (p_override < p)
      throw Error("decide_semantic: p must exceed max(size, size', d) = " + std::to_string(p - 1));
    p = p_override;
    if (!is_prime(p)) throw Error("decide_semantic: p is not prime");
  }

  // finite interpretation with one label per bioriented wire
  GraphStats sf = graph_stats(gf);
  GraphStats sg = graph_stats(gg);
  size_t need = std::max(sf.bioriented_count, sg.bioriented_count) + 1;
  Interp I;
  if (I0) I = *I0;
  std::vector<std::string> atoms;
  collect_atoms(jf.source, atoms);
  collect_atoms(jf.target, atoms);
  for (auto& a : atoms)
    if (!I.atom_sets.count(a) || I.atom_sets[a].size() < need) I.declare(a, (int)need);

  EchoInstance inst = echo_instance(gf, default_echo_params(gf, p, I));
  StarReport rep = check_stars(gg, inst, p, I);
  if (!rep.all()) {
    v.kind = Verdict::Distinct;
    for (int i = 0; i < 5; i++)
      if (!rep.star[i]) {
        v.witness = "echo instance of the first graph fails (*" + std::to_string(i + 1) +
                    ") on the second: " + rep.witness[i];
        break;
      }
    return v;
  }
  FormPair from_instance = reconstruct_generic(inst, p);
  FormPair of_g = generic_form(gg);
  if (!forms_equal_up_to_renaming(from_instance, of_g)) {
    v.kind = Verdict::Distinct;
    v.witness = "generic forms differ after reconstruction";
    return v;
  }
  v.kind = Verdict::EquivalentUpToSim;
  return v;
}

}  // namespace lincat
