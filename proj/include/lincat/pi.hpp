#pragma once

#include <optional>

#include "lincat/element.hpp"
#include "lincat/graph.hpp"
#include "lincat/semantics.hpp"

namespace lincat {

// The enumeration process over a normal-form graph: decompose from the
// annotated boundary inward, forking at duplicators, delta parts and boards;
// failed branches contribute 0.
//
// pi_exact computes the exact coefficient (big integer). pi_mod_p computes
// the residue, consuming run-length multisets directly: at a board whose
// positive annotation is homogeneous with p^l elements (l >= 1), branches
// with a non-homogeneous gate vanish and homogeneous ones collapse to a
// single column subprocess.
struct PiOptions {
  size_t card_cap = 64;  // refuse materializing multisets beyond this
};

BigInt pi_exact(const Graph& g, const std::vector<ElemId>& top,
                const std::vector<ElemId>& bottom, const Interp& I, PiOptions opts = {});

long pi_mod_p(const Graph& g, const std::vector<ElemId>& top, const std::vector<ElemId>& bottom,
              long p, const Interp& I);

// Fermat helpers. pow_reduce returns a^(p^l) mod p (== a mod p); binom_mod is
// the binomial coefficient mod p by Lucas' theorem.
long pow_reduce(long a, long l, long p);
long binom_mod(const BigInt& n, const BigInt& j, long p);

}  // namespace lincat
