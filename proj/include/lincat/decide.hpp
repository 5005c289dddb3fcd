#pragma once

#include "lincat/generic.hpp"
#include "lincat/rewrite.hpp"

namespace lincat {

struct Verdict {
  enum Kind { EquivalentUpToSim, Distinct, Inconclusive } kind;
  std::string witness;  // replayable structural difference / coefficient, or the reason
  Trace trace_f, trace_g;

  bool equivalent() const { return kind == EquivalentUpToSim; }
  // exit codes: 0 equivalent, 1 distinct, 2 inconclusive
  int exit_code() const { return kind == EquivalentUpToSim ? 0 : kind == Distinct ? 1 : 2; }
  const char* name() const {
    switch (kind) {
      case EquivalentUpToSim: return "equivalent-up-to-sim";
      case Distinct: return "distinct";
      case Inconclusive: return "inconclusive";
    }
    return "?";
  }
};

// normalize both, translate to graphs, compare up to ~
Verdict decide_equal(const TermP& f, const TermP& g, int fuel = 10000, int cong_budget = 64);

// the proof-mirroring route: a p-echo instance of f's graph checked against
// g's graph via the star conditions and the form reconstruction
Verdict decide_semantic(const TermP& f, const TermP& g, long p_override = 0,
                        const Interp* I = nullptr, int fuel = 10000, int cong_budget = 64);

// smallest prime admissible for decide_semantic on these graphs
long semantic_prime(const Graph& gf, const Graph& gg);

}  // namespace lincat
