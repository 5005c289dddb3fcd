#pragma once

#include <map>
#include <unordered_map>
#include <vector>

#include "lincat/element.hpp"
#include "lincat/term.hpp"

namespace lincat {

// Finite interpretation of the atomic objects, plus the multiset-cardinality
// cap used wherever an index set must be enumerated (gamma on infinite
// types, full-matrix dumps).
struct Interp {
  std::map<std::string, std::vector<std::string>> atom_sets;
  int degree_cap = 2;

  void declare(const std::string& atom, int n_labels);
  const std::vector<std::string>& labels(const std::string& atom) const;
};

struct TruncationInstability : Error {
  using Error::Error;
};

// All elements of the interpretation of `t` with every multiset level capped
// at `cap` elements. Throws if the enumeration exceeds `max_size`.
std::vector<ElemId> enum_type(const TypeP& t, const Interp& I, int cap,
                              size_t max_size = 2000000);

// Does an element lie in the interpretation of t (ignoring caps)?
bool element_in_type(ElemId e, const TypeP& t, const Interp& I);

using Column = std::unordered_map<ElemId, BigInt>;

// Exact nonzero column of the coefficient matrix: all sources alpha with
// M_f[alpha; target] != 0, by demand-driven backward evaluation. Exact except
// at gamma over types containing !, where the diagonal enumeration is capped
// at `cap` multiset elements; coeff() evaluates at degree_cap and degree_cap+1
// and throws TruncationInstability when the queried entry differs.
Column column_at(const Judgement& j, ElemId target, const Interp& I, int cap,
                 bool* gamma_capped = nullptr);
Column column(const Judgement& j, ElemId target, const Interp& I);

// Single matrix entry M_f[alpha; beta] (bars in the inputs are ignored).
BigInt coeff(const Judgement& j, ElemId alpha, ElemId beta, const Interp& I);

// Window-restricted materialization: all entries with both indices inside
// the enumerated truncated index sets.
std::map<std::pair<ElemId, ElemId>, BigInt> full_matrix(const Judgement& j, const Interp& I);

// Sparse-matrix text dump: `<alpha> ; <beta> ; <count>` per nonzero entry.
std::string dump_matrix(const std::map<std::pair<ElemId, ElemId>, BigInt>& m);

// exp of a coefficient matrix over abstract index elements, with multiset
// degree at most D on both sides. Works over any commutative semiring S
// providing +, *, default == zero construction, and S(long).
template <class S>
std::map<std::pair<ElemId, ElemId>, S> exp_matrix(
    const std::map<std::pair<ElemId, ElemId>, S>& M, const std::vector<ElemId>& src,
    const std::vector<ElemId>& dst, int D);

// Multisets over `base` with at most `cap` elements, canonically ordered.
std::vector<ElemId> enum_msets(const std::vector<ElemId>& base, int cap,
                               size_t max_size = 2000000);

// Multivariate polynomial with BigInt coefficients, for the symbolic
// exp-matrix reproduction.
struct Poly {
  // monomial: sorted (var, power) pairs
  using Mono = std::vector<std::pair<std::string, int>>;
  std::map<Mono, BigInt> terms;

  Poly() = default;
  Poly(long c);
  static Poly var(const std::string& name);
  Poly operator+(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  bool operator==(const Poly& o) const;
  std::string str() const;
};

// ---- template implementation ----

template <class S>
std::map<std::pair<ElemId, ElemId>, S> exp_matrix(
    const std::map<std::pair<ElemId, ElemId>, S>& M, const std::vector<ElemId>& src,
    const std::vector<ElemId>& dst, int D) {
  std::map<std::pair<ElemId, ElemId>, S> out;
  std::vector<ElemId> betas = enum_msets(dst, D);
  for (ElemId beta : betas) {
    // product over beta of the linear form y_b = sum_a M[a,b] x_a
    std::map<ElemId, S> poly;  // monomial (mset over src) -> coeff
    poly[e_mset({})] = S(1);
    const ElemNode& bn = elem(beta);
    for (auto& [b, cnt] : bn.mset) {
      auto v = cnt.value(20);
      if (!v) throw Error("exp_matrix: multiplicity too large");
      for (BigInt rep = 0; rep < *v; rep++) {
        std::map<ElemId, S> next;
        for (auto& [mono, c] : poly) {
          for (ElemId a : src) {
            auto it = M.find({a, b});
            if (it == M.end()) continue;
            ElemId m2 = mset_union(mono, e_mset({{a, Count(1)}}));
            auto& slot = next[m2];
            slot = slot + (c * it->second);
          }
        }
        poly = std::move(next);
      }
    }
    for (auto& [mono, c] : poly) {
      if (c == S()) continue;
      out[{mono, beta}] = c;
    }
  }
  return out;
}

}  // namespace lincat
