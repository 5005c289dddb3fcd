#pragma once

#include <map>
#include <optional>
#include <set>

#include "lincat/graph.hpp"
#include "lincat/pi.hpp"

namespace lincat {

// The template language assigned along flows. Boxed board lists are stored
// innermost-first; Plus is kept as a canonically sorted list of summands.
struct GenericForm;
using FormP = std::shared_ptr<const GenericForm>;

struct GenericForm {
  enum Kind { Var, Star, Dot, Plus, Empty, Single, Boxed } kind;
  std::string var;           // Var name
  std::vector<int> boards;   // Var: containing boards; Boxed: box list
  FormP a, b;                // Dot(a,b), Single(a), Boxed(a, boards)
  std::vector<FormP> summands;  // Plus
};

FormP f_var(const std::string& name, std::vector<int> boards);
FormP f_star();
FormP f_dot(FormP a, FormP b);
FormP f_plus(std::vector<FormP> summands);  // canonicalizes; singleton collapses
FormP f_empty();
FormP f_single(FormP a);
FormP f_boxed(FormP a, std::vector<int> boards);

int form_cmp(const FormP& x, const FormP& y);
bool form_eq(const FormP& x, const FormP& y);
std::string print_form(const FormP& f);

// Flow orientation: +1 downward, -1 upward, 0 bioriented; throws on
// collision, loop (deadlock) or malformed structure.
struct Flows {
  std::map<GId, int> direction;
  std::map<GId, FormP> form;               // form on every wire
  std::map<GId, std::string> var_of_wire;  // bioriented wires
  std::vector<FormP> top, bottom;          // forms on the outer wires
};
Flows orient_flows(const Graph& g);

// the generic form (phi; psi) of a normalized graph
struct FormPair {
  std::vector<FormP> top, bottom;
};
FormPair generic_form(const Graph& g);

// Renaming canonicalization: variables and board identifiers renumbered in
// traversal order, making "up to renaming" plain equality.
FormPair canonical_forms(const FormPair& fp);
bool forms_equal_up_to_renaming(const FormPair& x, const FormPair& y);

// P = ({m_i}, eta): run-length-compressed (constant unless overridden).
struct AssignmentPair {
  std::map<int, Count> m_const;
  std::map<std::string, ElemId> eta_const;
  std::map<std::pair<int, std::vector<long>>, Count> m_over;
  std::map<std::pair<std::string, std::vector<long>>, ElemId> eta_over;

  Count m(int board, const std::vector<long>& s) const;
  ElemId eta(const std::string& var, const std::vector<long>& s) const;
  bool uniform() const { return m_over.empty() && eta_over.empty(); }
};

// instance evaluation per the clause table; uniform pairs evaluate with
// run-length counts, general pairs enumerate suffix sequences
ElemId instantiate(const FormP& f, const AssignmentPair& P, const std::vector<long>& s);

struct EchoParams {
  long p = 0;
  std::map<GId, long> k;                     // board -> distinct exponent
  std::map<std::string, std::string> atoms;  // var -> distinct label
};

struct EchoInstance {
  std::vector<ElemId> top, bottom;  // bar-decorated elements
  long p = 0;
};

// derive default parameters: distinct k by board order; each variable gets a
// fresh label from the interpretation of its wire's atom
EchoParams default_echo_params(const Graph& g, long p, const Interp& I);
EchoInstance echo_instance(const Graph& g, const EchoParams& params);

struct StarReport {
  bool star[5] = {false, false, false, false, false};
  std::string witness[5];
  bool all() const { return star[0] && star[1] && star[2] && star[3] && star[4]; }
};

// check (*1)..(*5) of the instance against the graph g (via pi_mod_p for *1)
StarReport check_stars(const Graph& g, const EchoInstance& inst, long p, const Interp& I);

// Lemma pwe08: rebuild the generic form from a p-echo instance; throws when
// the input admits no valid decomposition
FormPair reconstruct_generic(const EchoInstance& inst, long p);

// Lemma vqa10: rebuild the graph from forms plus outer types
Graph reconstruct_graph(const FormPair& forms, const std::vector<TypeP>& top_types,
                        const std::vector<TypeP>& bottom_types);

}  // namespace lincat
