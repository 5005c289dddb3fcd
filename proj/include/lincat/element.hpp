#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lincat/count.hpp"
#include "lincat/type.hpp"

namespace lincat {

// Members of interpreted objects: atoms, *, pairs, finite multisets with
// big-integer (possibly symbolic prime-power) multiplicities, and overbars.
// Elements are hash-consed into a global pool; ElemId equality is structural
// equality. Bars are bookkeeping: semantic operations strip them.
using ElemId = int32_t;

struct ElemNode {
  enum Kind { AtomVal, Star, PairVal, MSetVal, BarVal };
  Kind kind;
  std::string atom;
  ElemId a = -1, b = -1;
  std::vector<std::pair<ElemId, Count>> mset;  // sorted by elem_cmp, counts != 0
};

const ElemNode& elem(ElemId id);

ElemId e_atom(const std::string& label);
ElemId e_star();
ElemId e_pair(ElemId a, ElemId b);
ElemId e_bar(ElemId a);
ElemId e_mset(std::vector<std::pair<ElemId, Count>> entries);  // canonicalizes
ElemId e_empty_mset();

// Structural total order (atoms < * < pairs < msets < bars at equal kinds
// compared recursively). Used for canonical mset entry order.
int elem_cmp(ElemId x, ElemId y);

ElemId mset_union(ElemId x, ElemId y);
Count mset_card(ElemId m);  // throws if symbolic counts cannot be summed
bool mset_is_homogeneous(ElemId m);

ElemId strip_bars(ElemId e);
// Wrap occurrences under Dual positions of `type` in bars.
ElemId decorate_bars(ElemId e, const TypeP& type);

std::string print_element(ElemId e);
ElemId parse_element(const std::string& text);

// All ordered splits gamma = g1 + g2. Symbolic counts split all-or-nothing.
std::vector<std::pair<ElemId, ElemId>> ordered_splits2(ElemId m);
// Ordered splits into n parts (allowing empty parts). Counts too large to
// enumerate split all-or-nothing when they are powers of `modp_base` (sound
// for residues mod an odd prime: a p-power is not a sum of smaller p-powers
// in fewer than p parts, and non-p-power chunks vanish downstream).
std::vector<std::vector<ElemId>> ordered_splits(ElemId m, size_t n, long modp_base = 0);
// Unordered decompositions into exactly n multisets (allowing empty parts),
// as sorted part vectors.
std::vector<std::vector<ElemId>> unordered_partitions(ElemId m, size_t n);

// Distinct linear dispositions (multiset permutations); requires the
// cardinality to materialize and stay below `cap`.
std::vector<std::vector<ElemId>> dispositions(ElemId m, size_t cap);

}  // namespace lincat
