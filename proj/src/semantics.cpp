#include "lincat/semantics.hpp"

#include <algorithm>
#include <functional>

namespace lincat {

void Interp::declare(const std::string& atom, int n_labels) {
  std::vector<std::string> ls;
  for (int i = 0; i < n_labels; i++) ls.push_back(atom + std::to_string(i));
  atom_sets[atom] = std::move(ls);
}

const std::vector<std::string>& Interp::labels(const std::string& atom) const {
  auto it = atom_sets.find(atom);
  if (it == atom_sets.end()) throw Error("undeclared atom '" + atom + "'");
  return it->second;
}

std::vector<ElemId> enum_msets(const std::vector<ElemId>& base, int cap, size_t max_size) {
  std::vector<ElemId> out;
  std::vector<std::pair<ElemId, Count>> cur;
  std::function<void(size_t, int)> rec = [&](size_t i, int budget) {
    if (i == base.size()) {
      out.push_back(e_mset(cur));
      if (out.size() > max_size) throw Error("enum_msets: truncated index set too large");
      return;
    }
    rec(i + 1, budget);
    for (int k = 1; k <= budget; k++) {
      cur.emplace_back(base[i], Count((long)k));
      rec(i + 1, budget - k);
      cur.pop_back();
    }
  };
  rec(0, cap);
  std::sort(out.begin(), out.end(), [](ElemId x, ElemId y) { return elem_cmp(x, y) < 0; });
  return out;
}

std::vector<ElemId> enum_type(const TypeP& t, const Interp& I, int cap, size_t max_size) {
  switch (t->kind) {
    case Type::Atom: {
      std::vector<ElemId> out;
      for (auto& l : I.labels(t->name)) out.push_back(e_atom(l));
      return out;
    }
    case Type::One:
    case Type::Bot: return {e_star()};
    case Type::Dual: return enum_type(t->a, I, cap, max_size);
    case Type::Tensor:
    case Type::Par: {
      auto as = enum_type(t->a, I, cap, max_size);
      auto bs = enum_type(t->b, I, cap, max_size);
      if (as.size() * bs.size() > max_size) throw Error("enum_type: index set too large");
      std::vector<ElemId> out;
      for (ElemId a : as)
        for (ElemId b : bs) out.push_back(e_pair(a, b));
      return out;
    }
    case Type::Bang: {
      auto as = enum_type(t->a, I, cap, max_size);
      return enum_msets(as, cap, max_size);
    }
    case Type::Meta: throw Error("enum_type: metavariable type");
  }
  throw Error("enum_type: bad type");
}

bool element_in_type(ElemId e0, const TypeP& t, const Interp& I) {
  ElemId e = strip_bars(e0);
  const ElemNode& n = elem(e);
  switch (t->kind) {
    case Type::Atom: {
      if (n.kind != ElemNode::AtomVal) return false;
      auto& ls = I.labels(t->name);
      return std::find(ls.begin(), ls.end(), n.atom) != ls.end();
    }
    case Type::One:
    case Type::Bot: return n.kind == ElemNode::Star;
    case Type::Dual: return element_in_type(e, t->a, I);
    case Type::Tensor:
    case Type::Par:
      return n.kind == ElemNode::PairVal && element_in_type(n.a, t->a, I) &&
             element_in_type(n.b, t->b, I);
    case Type::Bang: {
      if (n.kind != ElemNode::MSetVal) return false;
      for (auto& [x, c] : n.mset)
        if (!element_in_type(x, t->a, I)) return false;
      return true;
    }
    case Type::Meta: return false;
  }
  return false;
}

namespace {

// Demand-driven backward evaluation environment.
struct Eval {
  const Interp& I;
  int gamma_cap;
  bool gamma_capped = false;  // set when a gamma diagonal was actually truncated
  std::unordered_map<const Term*, std::pair<TypeP, TypeP>> bounds;
  std::map<std::pair<const Term*, ElemId>, Column> memo;

  Eval(const Interp& i, int cap) : I(i), gamma_cap(cap) {}

  const std::pair<TypeP, TypeP>& boundary(const TermP& t) {
    auto it = bounds.find(t.get());
    if (it != bounds.end()) return it->second;
    Judgement j = typecheck(t);
    return bounds.emplace(t.get(), std::make_pair(j.source, j.target)).first->second;
  }

  // multiset flatten: union over entries (scaled by their counts)
  ElemId flatten(ElemId S) {
    const ElemNode& n = elem(S);
    std::vector<std::pair<ElemId, Count>> acc;
    for (auto& [gamma, c] : n.mset) {
      const ElemNode& g = elem(gamma);
      if (g.kind != ElemNode::MSetVal) throw Error("flatten: expected multiset of multisets");
      for (auto& [x, cx] : g.mset) acc.emplace_back(x, c * cx);
    }
    return e_mset(std::move(acc));
  }

  Column col(const TermP& t, ElemId target) {
    auto key = std::make_pair(t.get(), target);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    Column r = col_raw(t, target);
    memo.emplace(key, r);
    return r;
  }

  Column col_raw(const TermP& t, ElemId target) {
    Column r;
    const ElemNode& tn = elem(target);
    switch (t->kind) {
      case Term::Id: r[target] = 1; break;
      case Term::MetaTerm: throw Error("cannot evaluate a term metavariable");
      case Term::Comp: {
        Column mid = col(t->g, target);
        for (auto& [b, c] : mid) {
          Column left = col(t->f, b);
          for (auto& [a, c2] : left) r[a] += c * c2;
        }
        break;
      }
      case Term::TensorM:
      case Term::ParM: {
        if (tn.kind != ElemNode::PairVal) break;
        Column l = col(t->f, tn.a);
        Column rr = col(t->g, tn.b);
        for (auto& [a, c1] : l)
          for (auto& [b, c2] : rr) r[e_pair(a, b)] += c1 * c2;
        break;
      }
      case Term::BangM: {
        if (tn.kind != ElemNode::MSetVal) break;
        // product over target entries of the linear form sum_a col_f(t)[a] x_a
        std::map<ElemId, BigInt> poly;
        poly[e_mset({})] = 1;
        for (auto& [b, cnt] : tn.mset) {
          auto v = cnt.value(16);
          if (!v || *v > 64) throw Error("BangM column: multiplicity too large to expand");
          Column base = col(t->f, b);
          for (BigInt rep = 0; rep < *v; rep++) {
            std::map<ElemId, BigInt> next;
            for (auto& [mono, c] : poly)
              for (auto& [a, ca] : base)
                next[mset_union(mono, e_mset({{a, Count(1)}}))] += c * ca;
            poly = std::move(next);
          }
        }
        for (auto& [mono, c] : poly)
          if (c != 0) r[mono] = c;
        break;
      }
      case Term::Delta: {
        if (tn.kind != ElemNode::MSetVal) break;
        r[flatten(target)] = 1;
        break;
      }
      case Term::Eps: {
        r[e_mset({{target, Count(1)}})] = 1;
        break;
      }
      case Term::Dup: {
        if (tn.kind != ElemNode::PairVal) break;
        r[mset_union(tn.a, tn.b)] = 1;
        break;
      }
      case Term::Weak: {
        if (tn.kind != ElemNode::Star) break;
        r[e_mset({})] = 1;
        break;
      }
      case Term::PhiT: {
        if (tn.kind != ElemNode::MSetVal) break;
        // unzip: gamma over A x B maps back to (proj1, proj2)
        std::vector<std::pair<ElemId, Count>> p1, p2;
        bool ok = true;
        for (auto& [x, c] : tn.mset) {
          const ElemNode& xe = elem(x);
          if (xe.kind != ElemNode::PairVal) {
            ok = false;
            break;
          }
          p1.emplace_back(xe.a, c);
          p2.emplace_back(xe.b, c);
        }
        if (ok) r[e_pair(e_mset(std::move(p1)), e_mset(std::move(p2)))] = 1;
        break;
      }
      case Term::Phi0: {
        if (tn.kind != ElemNode::MSetVal) break;
        r[e_star()] = 1;
        break;
      }
      case Term::Tau: {
        if (tn.kind != ElemNode::PairVal) break;
        if (tn.a == tn.b) r[e_star()] = 1;
        break;
      }
      case Term::Gamma: {
        if (tn.kind != ElemNode::Star) break;
        if (type_contains_bang(t->A)) gamma_capped = true;
        for (ElemId d : enum_type(t->A, I, gamma_cap)) r[e_pair(d, d)] += 1;
        break;
      }
      case Term::Dist: {
        // target ((a,b), c) -> source (a, (b,c))
        if (tn.kind != ElemNode::PairVal) break;
        const ElemNode& ab = elem(tn.a);
        if (ab.kind != ElemNode::PairVal) break;
        r[e_pair(ab.a, e_pair(ab.b, tn.b))] = 1;
        break;
      }
      case Term::DistP: {
        // target (a, (b,c)) -> source ((a,b), c)
        if (tn.kind != ElemNode::PairVal) break;
        const ElemNode& bc = elem(tn.b);
        if (bc.kind != ElemNode::PairVal) break;
        r[e_pair(e_pair(tn.a, bc.a), bc.b)] = 1;
        break;
      }
      case Term::AssocT:
      case Term::AssocP: {
        // target (a, (b,c)) -> source ((a,b), c)
        if (tn.kind != ElemNode::PairVal) break;
        const ElemNode& bc = elem(tn.b);
        if (bc.kind != ElemNode::PairVal) break;
        r[e_pair(e_pair(tn.a, bc.a), bc.b)] = 1;
        break;
      }
      case Term::AssocTInv:
      case Term::AssocPInv: {
        if (tn.kind != ElemNode::PairVal) break;
        const ElemNode& ab = elem(tn.a);
        if (ab.kind != ElemNode::PairVal) break;
        r[e_pair(ab.a, e_pair(ab.b, tn.b))] = 1;
        break;
      }
      case Term::SymT:
      case Term::SymP: {
        if (tn.kind != ElemNode::PairVal) break;
        r[e_pair(tn.b, tn.a)] = 1;
        break;
      }
      case Term::LUnitT:
      case Term::LUnitP: {
        r[e_pair(e_star(), target)] = 1;
        break;
      }
      case Term::RUnitT:
      case Term::RUnitP: {
        r[e_pair(target, e_star())] = 1;
        break;
      }
      case Term::LUnitTInv:
      case Term::LUnitPInv: {
        if (tn.kind != ElemNode::PairVal || elem(tn.a).kind != ElemNode::Star) break;
        r[tn.b] = 1;
        break;
      }
      case Term::RUnitTInv:
      case Term::RUnitPInv: {
        if (tn.kind != ElemNode::PairVal || elem(tn.b).kind != ElemNode::Star) break;
        r[tn.a] = 1;
        break;
      }
    }
    return r;
  }
};

bool term_has_capped_gamma(const TermP& t) {
  if (!t) return false;
  if (t->kind == Term::Gamma && type_contains_bang(t->A)) return true;
  return term_has_capped_gamma(t->f) || term_has_capped_gamma(t->g);
}

}  // namespace

Column column_at(const Judgement& j, ElemId target0, const Interp& I, int cap,
                 bool* gamma_capped) {
  ElemId target = strip_bars(target0);
  Eval ev(I, cap);
  Column r = ev.col(j.term, target);
  if (gamma_capped) *gamma_capped = ev.gamma_capped;
  return r;
}

Column column(const Judgement& j, ElemId target, const Interp& I) {
  bool capped = false;
  Column r1 = column_at(j, target, I, I.degree_cap, &capped);
  if (capped) {
    Column r2 = column_at(j, target, I, I.degree_cap + 1);
    bool same = r1.size() == r2.size() &&
                std::all_of(r1.begin(), r1.end(), [&](const auto& kv) {
                  auto it = r2.find(kv.first);
                  return it != r2.end() && it->second == kv.second;
                });
    if (!same)
      throw TruncationInstability(
          "column changed when the degree cap increased; raise --degree");
  }
  return r1;
}

BigInt coeff(const Judgement& j, ElemId alpha, ElemId beta, const Interp& I) {
  if (!element_in_type(alpha, j.source, I))
    throw Error("coeff: source element is outside the interpreted source type");
  if (!element_in_type(beta, j.target, I))
    throw Error("coeff: target element is outside the interpreted target type");
  ElemId a = strip_bars(alpha);
  bool capped = false;
  Column c1 = column_at(j, beta, I, I.degree_cap, &capped);
  auto it1 = c1.find(a);
  BigInt v1 = it1 == c1.end() ? BigInt(0) : it1->second;
  if (capped) {
    Column c2 = column_at(j, beta, I, I.degree_cap + 1);
    auto it2 = c2.find(a);
    BigInt v2 = it2 == c2.end() ? BigInt(0) : it2->second;
    if (v1 != v2)
      throw TruncationInstability(
          "coefficient changed when the degree cap increased; raise --degree");
  }
  return v1;
}

std::map<std::pair<ElemId, ElemId>, BigInt> full_matrix(const Judgement& j, const Interp& I) {
  std::map<std::pair<ElemId, ElemId>, BigInt> out;
  auto srcs = enum_type(j.source, I, I.degree_cap);
  auto dsts = enum_type(j.target, I, I.degree_cap);
  std::unordered_map<ElemId, bool> in_src;
  for (ElemId a : srcs) in_src[a] = true;
  for (ElemId b : dsts) {
    Column c = column(j, b, I);
    for (auto& [a, v] : c)
      if (v != 0 && in_src.count(a)) out[{a, b}] = v;
  }
  return out;
}

std::string dump_matrix(const std::map<std::pair<ElemId, ElemId>, BigInt>& m) {
  std::string out;
  for (auto& [k, v] : m) {
    out += print_element(k.first);
    out += " ; ";
    out += print_element(k.second);
    out += " ; ";
    out += v.str();
    out += "\n";
  }
  return out;
}

Poly::Poly(long c) {
  if (c != 0) terms[{}] = c;
}

Poly Poly::var(const std::string& name) {
  Poly p;
  p.terms[{{name, 1}}] = 1;
  return p;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  for (auto& [m, c] : o.terms) {
    r.terms[m] += c;
    if (r.terms[m] == 0) r.terms.erase(m);
  }
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  for (auto& [m1, c1] : terms)
    for (auto& [m2, c2] : o.terms) {
      Mono m;
      size_t i = 0, j = 0;
      while (i < m1.size() || j < m2.size()) {
        if (j == m2.size() || (i < m1.size() && m1[i].first < m2[j].first))
          m.push_back(m1[i++]);
        else if (i == m1.size() || m2[j].first < m1[i].first)
          m.push_back(m2[j++]);
        else {
          m.emplace_back(m1[i].first, m1[i].second + m2[j].second);
          i++, j++;
        }
      }
      r.terms[m] += c1 * c2;
      if (r.terms[m] == 0) r.terms.erase(m);
    }
  return r;
}

bool Poly::operator==(const Poly& o) const { return terms == o.terms; }

std::string Poly::str() const {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto& [m, c] : terms) {
    if (!first) out += " + ";
    first = false;
    if (!(c == 1) || m.empty()) out += c.str();
    for (auto& [v, p] : m) {
      out += v;
      if (p > 1) out += "^" + std::to_string(p);
    }
  }
  return out;
}

}  // namespace lincat
