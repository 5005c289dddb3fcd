#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lincat/term.hpp"

namespace lincat {

// Oriented rewrite rule (1)..(23). Both legs are patterns over uppercase
// type metavariables and ?f-style term metavariables; the stored orientation
// is the paper's double arrow.
struct RewriteRule {
  int id;
  TermP lhs, rhs;
  std::string lhs_text, rhs_text;
};

// Unoriented congruence. `structural` entries (bifunctoriality, interchange,
// functoriality of !) are absorbed by spine canonicalization and are not used
// as search moves.
struct CongruenceRule {
  std::string name;
  TermP left, right;
  std::string left_text, right_text;
  bool structural;
};

const std::vector<RewriteRule>& rules_table();
const std::vector<CongruenceRule>& congruences_table();

struct TraceStep {
  bool is_congruence = false;
  int rule_id = 0;          // when !is_congruence
  std::string cong_name;    // when is_congruence
  std::string path;
  std::string before, after;  // matched window as terms
  TermP result;               // whole term after this step
};

struct Trace {
  std::vector<TraceStep> steps;
  std::string text() const;  // one line per step: `<id> @ <path> : <before> => <after>`
};

struct NormalizeResult {
  TermP term;
  Trace trace;
  bool fuel_exhausted = false;
};

// Flatten compositions to a spine of whiskered single-generator layers,
// distribute ! over composition, drop identities, and sort commuting layers
// into the canonical vertical-first order.
TermP canonical_term(const TermP& t);

// Deterministic strategy: leftmost spine window, innermost bang nesting,
// ascending rule id. `seed != 0` randomizes redex choice instead (used by the
// confluence property tests).
NormalizeResult normalize(const TermP& t, int fuel = 10000, int cong_budget = 64,
                          uint64_t seed = 0);

bool is_normal(const TermP& t, int cong_budget = 64);

// One rule application at the given redex path (as reported in traces).
TermP apply_rule(const TermP& t, int rule_id, const std::string& path);

struct MatchHit {
  int rule_id;
  std::string path;
  TermP result;
  std::string before, after;  // matched window / its replacement
};
// All direct (congruence-free) matches in canonical order.
std::vector<MatchHit> direct_matches(const TermP& t);

// Replay a trace from `start`, checking each step reproduces the recorded
// result; returns the final term.
TermP replay(const TermP& start, const Trace& trace);

}  // namespace lincat
