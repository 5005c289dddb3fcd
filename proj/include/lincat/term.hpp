#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lincat/type.hpp"

namespace lincat {

struct Term;
using TermP = std::shared_ptr<const Term>;

// Morphism syntax of the free linear category. Every generator carries its
// type arguments; boundary types are synthesized by typecheck().
struct Term {
  enum Kind {
    Id,       // id{A} : A -> A
    Comp,     // f ; g (diagrammatic)
    TensorM,  // f (x) g
    ParM,     // f (%) g
    BangM,    // !(f)
    Delta,    // delta{A} : !A -> !!A
    Eps,      // eps{A}   : !A -> A
    Dup,      // dup{A}   : !A -> !A (x) !A
    Weak,     // weak{A}  : !A -> 1
    PhiT,     // phi{A,B} : !A (x) !B -> !(A (x) B)
    Phi0,     // phi0     : 1 -> !1
    Dist,     // dist{A,B,C}  : A (x) (B (%) C) -> (A (x) B) (%) C
    DistP,    // dist'{A,B,C} : (A (%) B) (x) C -> A (%) (B (x) C)
    Tau,      // tau{A}   : 1 -> A (%) A^
    Gamma,    // gamma{A} : A^ (x) A -> #
    AssocT,   // assocT{A,B,C} : (A(x)B)(x)C -> A(x)(B(x)C)
    AssocTInv,
    AssocP,
    AssocPInv,
    SymT,  // symT{A,B} : A(x)B -> B(x)A
    SymP,
    LUnitT,  // lunitT{A} : 1(x)A -> A
    LUnitTInv,
    RUnitT,  // runitT{A} : A(x)1 -> A
    RUnitTInv,
    LUnitP,  // lunitP{A} : #(%)A -> A
    LUnitPInv,
    RUnitP,  // runitP{A} : A(%)# -> A
    RUnitPInv,
    MetaTerm,  // ?f{A,B} : pattern variable, arbitrary morphism A -> B
  };

  Kind kind;
  TermP f, g;       // Comp / TensorM / ParM / BangM(f)
  TypeP A, B, C;    // type arguments
  std::string var;  // MetaTerm name

  bool is(Kind k) const { return kind == k; }
};

struct Judgement {
  TermP term;
  TypeP source;
  TypeP target;
};

TermP m_id(TypeP A);
TermP m_comp(TermP f, TermP g);
TermP m_tensor(TermP f, TermP g);
TermP m_par(TermP f, TermP g);
TermP m_bang(TermP f);
TermP m_gen(Term::Kind k, TypeP A = nullptr, TypeP B = nullptr, TypeP C = nullptr);
TermP m_metaterm(const std::string& name, TypeP A, TypeP B);

// seq {f1, f2, ...} composed left to right; empty -> id would be untyped, so
// requires at least one element.
TermP m_seq(const std::vector<TermP>& fs);

bool term_eq(const TermP& x, const TermP& y);
size_t term_hash(const TermP& x);
size_t term_size(const TermP& x);

// Source/target of a term. Throws TypeError with the offending subterm path
// (dot-separated child indices) on a composition mismatch.
Judgement typecheck(const TermP& t);

// Boundary of a single generator (no composite kinds).
void generator_boundary(const Term& t, TypeP& src, TypeP& dst);

std::string print_term(const TermP& t);
TermP parse_term(const std::string& text, bool allow_meta = false);

}  // namespace lincat
