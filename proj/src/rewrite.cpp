#include "lincat/rewrite.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace lincat {

namespace {

using Path = std::vector<int>;

bool is_prefix(const Path& p, const Path& q) {
  if (p.size() > q.size()) return false;
  return std::equal(p.begin(), p.end(), q.begin());
}
bool disjoint(const Path& p, const Path& q) { return !is_prefix(p, q) && !is_prefix(q, p); }

std::string path_str(const Path& p) {
  if (p.empty()) return "e";
  std::string s;
  for (size_t i = 0; i < p.size(); i++) {
    if (i) s += '.';
    s += std::to_string(p[i]);
  }
  return s;
}

TypeP subtree(const TypeP& t, const Path& p, size_t from = 0) {
  if (from == p.size()) return t;
  if (t->kind != Type::Tensor && t->kind != Type::Par)
    throw Error("subtree: path descends into a non-product type");
  return subtree(p[from] == 0 ? t->a : t->b, p, from + 1);
}

TypeP splice(const TypeP& t, const Path& p, const TypeP& sub, size_t from = 0) {
  if (from == p.size()) return sub;
  if (t->kind != Type::Tensor && t->kind != Type::Par)
    throw Error("splice: path descends into a non-product type");
  TypeP a = t->a, b = t->b;
  if (p[from] == 0)
    a = splice(a, p, sub, from + 1);
  else
    b = splice(b, p, sub, from + 1);
  return t->kind == Type::Tensor ? t_tensor(a, b) : t_par(a, b);
}

// a single whiskered layer as a plain term: identities around `act` at `p`
TermP whisker(const TypeP& boundary, const Path& p, const TermP& act, size_t from = 0) {
  if (from == p.size()) return act;
  if (boundary->kind != Type::Tensor && boundary->kind != Type::Par)
    throw Error("whisker: path descends into a non-product type");
  TermP l, r;
  if (p[from] == 0) {
    l = whisker(boundary->a, p, act, from + 1);
    r = m_id(boundary->b);
  } else {
    l = m_id(boundary->a);
    r = whisker(boundary->b, p, act, from + 1);
  }
  return boundary->kind == Type::Tensor ? m_tensor(l, r) : m_par(l, r);
}

struct Layer {
  Path path;
  TermP act;  // generator or BangM(single-layer whisker term)
};

struct Spine {
  TypeP src;
  std::vector<Layer> layers;
};

std::pair<TypeP, TypeP> act_boundary(const TermP& act) {
  Judgement j = typecheck(act);
  return {j.source, j.target};
}

// boundaries[i] = type before layer i; boundaries.back() = target
std::vector<TypeP> boundaries(const Spine& s) {
  std::vector<TypeP> out;
  out.push_back(s.src);
  TypeP cur = s.src;
  for (auto& l : s.layers) {
    auto [a, b] = act_boundary(l.act);
    (void)a;
    cur = splice(cur, l.path, b);
    out.push_back(cur);
  }
  return out;
}

void sort_layers(std::vector<Layer>& ls) {
  bool moved = true;
  while (moved) {
    moved = false;
    for (size_t i = 0; i + 1 < ls.size(); i++) {
      if (disjoint(ls[i].path, ls[i + 1].path) &&
          std::lexicographical_compare(ls[i + 1].path.begin(), ls[i + 1].path.end(),
                                       ls[i].path.begin(), ls[i].path.end())) {
        std::swap(ls[i], ls[i + 1]);
        moved = true;
      }
    }
  }
}

Spine make_spine(const TermP& t);

// flatten into atomic layers; bang contents are canonicalized recursively and
// distributed over composition
void flatten(const TermP& t, const Path& at, std::vector<Layer>& out) {
  switch (t->kind) {
    case Term::Id: return;
    case Term::Comp:
      flatten(t->f, at, out);
      flatten(t->g, at, out);
      return;
    case Term::TensorM:
    case Term::ParM: {
      Path l = at, r = at;
      l.push_back(0);
      r.push_back(1);
      flatten(t->f, l, out);
      flatten(t->g, r, out);
      return;
    }
    case Term::BangM: {
      if (t->f->kind == Term::MetaTerm) {  // pattern: opaque bang content
        out.push_back({at, t});
        return;
      }
      Spine inner = make_spine(t->f);
      std::vector<TypeP> bs = boundaries(inner);
      for (size_t i = 0; i < inner.layers.size(); i++) {
        TermP w = whisker(bs[i], inner.layers[i].path, inner.layers[i].act);
        out.push_back({at, m_bang(w)});
      }
      return;
    }
    default: out.push_back({at, t}); return;
  }
}

Spine make_spine(const TermP& t) {
  Judgement j = typecheck(t);
  Spine s;
  s.src = j.source;
  flatten(t, {}, s.layers);
  sort_layers(s.layers);
  return s;
}

TermP spine_term(const Spine& s) {
  if (s.layers.empty()) return m_id(s.src);
  std::vector<TermP> factors;
  TypeP cur = s.src;
  for (auto& l : s.layers) {
    factors.push_back(whisker(cur, l.path, l.act));
    auto [a, b] = act_boundary(l.act);
    (void)a;
    cur = splice(cur, l.path, b);
  }
  return m_seq(factors);
}

// ---- pattern matching ----

struct Bindings {
  std::map<std::string, TypeP> ty;
  std::map<std::string, TermP> tm;
};

bool unify_type(const TypeP& pat, const TypeP& sub, Bindings& b) {
  if (pat->kind == Type::Meta) {
    auto it = b.ty.find(pat->name);
    if (it != b.ty.end()) return type_eq(it->second, sub);
    b.ty[pat->name] = sub;
    return true;
  }
  if (pat->kind != sub->kind) return false;
  switch (pat->kind) {
    case Type::Atom: return pat->name == sub->name;
    case Type::One:
    case Type::Bot: return true;
    case Type::Dual:
    case Type::Bang: return unify_type(pat->a, sub->a, b);
    case Type::Tensor:
    case Type::Par: return unify_type(pat->a, sub->a, b) && unify_type(pat->b, sub->b, b);
    default: return false;
  }
}

TypeP subst_type(const TypeP& pat, const Bindings& b) {
  switch (pat->kind) {
    case Type::Meta: {
      auto it = b.ty.find(pat->name);
      if (it == b.ty.end()) throw Error("unbound type metavariable " + pat->name);
      return it->second;
    }
    case Type::Atom:
    case Type::One:
    case Type::Bot: return pat;
    case Type::Dual: return t_dual(subst_type(pat->a, b));
    case Type::Bang: return t_bang(subst_type(pat->a, b));
    case Type::Tensor: return t_tensor(subst_type(pat->a, b), subst_type(pat->b, b));
    case Type::Par: return t_par(subst_type(pat->a, b), subst_type(pat->b, b));
  }
  throw Error("subst_type: bad kind");
}

TermP subst_term(const TermP& pat, const Bindings& b) {
  if (pat->kind == Term::MetaTerm) {
    auto it = b.tm.find(pat->var);
    if (it == b.tm.end()) throw Error("unbound term metavariable ?" + pat->var);
    return it->second;
  }
  auto sub = [&](const TypeP& t) { return t ? subst_type(t, b) : nullptr; };
  auto t = std::make_shared<Term>(*pat);
  t->A = sub(pat->A);
  t->B = sub(pat->B);
  t->C = sub(pat->C);
  if (pat->f) t->f = subst_term(pat->f, b);
  if (pat->g) t->g = subst_term(pat->g, b);
  return t;
}

// unify a concrete subject act against a pattern act
bool unify_act(const TermP& pat, const TermP& sub, Bindings& b) {
  if (pat->kind != sub->kind) return false;
  if (pat->kind == Term::BangM) {
    Spine ps = make_spine(pat->f);
    Spine ss = make_spine(sub->f);
    if (ps.layers.size() != 1 || ss.layers.size() != 1) return false;
    if (ps.layers[0].path != ss.layers[0].path) return false;
    if (!unify_act(ps.layers[0].act, ss.layers[0].act, b)) return false;
    Judgement pj = typecheck(pat->f);
    Judgement sj = typecheck(sub->f);
    return unify_type(pj.source, sj.source, b);
  }
  auto check = [&](const TypeP& p, const TypeP& s) {
    if (!p && !s) return true;
    if (!p || !s) return false;
    return unify_type(p, s, b);
  };
  return check(pat->A, sub->A) && check(pat->B, sub->B) && check(pat->C, sub->C);
}

struct WindowMatch {
  Bindings bind;
  size_t start = 0, end = 0;
  std::vector<size_t> matched;
  std::vector<size_t> skipped_front;
  std::vector<size_t> skipped_back;
  Path delta;
};

bool try_match(const Spine& subj, const std::vector<TypeP>& bounds, const Spine& pat,
               size_t s0, const Path& delta, WindowMatch& out) {
  Bindings b;
  std::vector<size_t> matched;      // subject index per consumed slot, ascending per chain
  std::vector<Path> matched_wants;  // shifted pattern path per matched entry
  std::set<size_t> consumed;

  auto shifted = [&](const Path& rel) {
    Path p = delta;
    p.insert(p.end(), rel.begin(), rel.end());
    return p;
  };
  // composition order: a pattern layer must land after every earlier pattern
  // layer whose subtree overlaps its own
  auto lower_bound_for = [&](const Path& want) {
    size_t lo = s0;
    for (size_t k = 0; k < matched.size(); k++)
      if (!disjoint(matched_wants[k], want)) lo = std::max(lo, matched[k] + 1);
    return lo;
  };

  for (size_t pi = 0; pi < pat.layers.size(); pi++) {
    const Layer& pl = pat.layers[pi];
    Path want = shifted(pl.path);
    size_t lo = pi == 0 ? s0 : lower_bound_for(want);
    bool meta_bare = pl.act->kind == Term::MetaTerm;
    bool meta_bang = pl.act->kind == Term::BangM && pl.act->f->kind == Term::MetaTerm;

    if (meta_bare || meta_bang) {
      std::vector<size_t> run;
      for (size_t k = lo; k < subj.layers.size(); k++) {
        if (consumed.count(k)) continue;
        const Layer& sl = subj.layers[k];
        bool absorb = meta_bare
                          ? is_prefix(want, sl.path)
                          : (sl.path == want && sl.act->kind == Term::BangM &&
                             sl.act->f->kind != Term::MetaTerm);
        if (absorb) {
          run.push_back(k);
          continue;
        }
        // an overlapping layer ends a started run; before the run starts it
        // may still escape the window (validated below)
        if (!disjoint(sl.path, want) && !run.empty()) break;
      }
      if (run.empty()) return false;
      if (pi == 0 && run.front() != s0) return false;
      const TermP& mv = meta_bare ? pl.act : pl.act->f;
      TermP bound;
      if (meta_bare) {
        TypeP cur = subtree(bounds[run.front()], want);
        std::vector<TermP> fs;
        for (size_t idx : run) {
          Path rel(subj.layers[idx].path.begin() + want.size(), subj.layers[idx].path.end());
          fs.push_back(whisker(cur, rel, subj.layers[idx].act));
          auto [a, bb] = act_boundary(subj.layers[idx].act);
          (void)a;
          cur = splice(cur, rel, bb);
        }
        bound = m_seq(fs);
      } else {
        std::vector<TermP> fs;
        for (size_t idx : run) fs.push_back(subj.layers[idx].act->f);
        bound = m_seq(fs);
      }
      Judgement bj = typecheck(bound);
      if (!unify_type(mv->A, bj.source, b) || !unify_type(mv->B, bj.target, b)) return false;
      auto it = b.tm.find(mv->var);
      if (it != b.tm.end()) {
        if (!term_eq(canonical_term(it->second), canonical_term(bound))) return false;
      } else {
        b.tm[mv->var] = bound;
      }
      for (size_t idx : run) {
        matched.push_back(idx);
        matched_wants.push_back(want);
        consumed.insert(idx);
      }
      continue;
    }

    bool found = false;
    for (size_t k = lo; k < subj.layers.size(); k++) {
      if (consumed.count(k)) continue;
      const Layer& sl = subj.layers[k];
      if (sl.path == want) {
        Bindings save = b;
        if (unify_act(pl.act, sl.act, b)) {
          if (pi == 0 && k != s0) return false;
          matched.push_back(k);
          matched_wants.push_back(want);
          consumed.insert(k);
          found = true;
          break;
        }
        b = save;
      }
      // non-matching layers may still escape the window (validated below)
    }
    if (!found) return false;
  }

  size_t wstart = *std::min_element(matched.begin(), matched.end());
  size_t wend = *std::max_element(matched.begin(), matched.end());
  out.skipped_front.clear();
  out.skipped_back.clear();
  for (size_t idx = wstart; idx <= wend; idx++) {
    if (consumed.count(idx)) continue;
    bool front = true, back = true;
    for (size_t m : matched) {
      if (m < idx && !disjoint(subj.layers[m].path, subj.layers[idx].path)) front = false;
      if (m > idx && !disjoint(subj.layers[m].path, subj.layers[idx].path)) back = false;
    }
    if (front)
      out.skipped_front.push_back(idx);
    else if (back)
      out.skipped_back.push_back(idx);
    else
      return false;
  }
  std::sort(matched.begin(), matched.end());
  out.bind = std::move(b);
  out.start = wstart;
  out.end = wend;
  out.matched = std::move(matched);
  out.delta = delta;
  return true;
}

std::vector<Path> candidate_deltas(const Spine& subj) {
  std::set<Path> set;
  set.insert(Path{});
  for (auto& l : subj.layers)
    for (size_t k = 0; k <= l.path.size(); k++)
      set.insert(Path(l.path.begin(), l.path.begin() + k));
  return {set.begin(), set.end()};
}

struct PatternPair {
  TermP lhs, rhs;
};

struct Hit {
  size_t leftmost = 0;
  int depth = 0;
  int order_key = 0;
  std::string path;
  TermP result;
  std::string before, after;
};

TermP rebuild_with(const Spine& subj, const WindowMatch& m, const TermP& rhs_inst) {
  Spine out;
  out.src = subj.src;
  for (size_t i = 0; i < m.start; i++) out.layers.push_back(subj.layers[i]);
  for (size_t i : m.skipped_front) out.layers.push_back(subj.layers[i]);
  std::vector<Layer> repl;
  flatten(rhs_inst, m.delta, repl);
  for (auto& l : repl) out.layers.push_back(l);
  for (size_t i : m.skipped_back) out.layers.push_back(subj.layers[i]);
  for (size_t i = m.end + 1; i < subj.layers.size(); i++) out.layers.push_back(subj.layers[i]);
  sort_layers(out.layers);
  return spine_term(out);
}

std::string window_term_str(const Spine& subj, const std::vector<TypeP>& bounds,
                            const WindowMatch& m) {
  try {
    TypeP cur = subtree(bounds[m.matched.front()], m.delta);
    std::vector<TermP> fs;
    for (size_t idx : m.matched) {
      Path rel(subj.layers[idx].path.begin() + m.delta.size(), subj.layers[idx].path.end());
      fs.push_back(whisker(cur, rel, subj.layers[idx].act));
      auto [a, bb] = act_boundary(subj.layers[idx].act);
      (void)a;
      cur = splice(cur, rel, bb);
    }
    return print_term(m_seq(fs));
  } catch (Error&) {
    return "<window>";
  }
}

void search_matches(const TermP& term, const std::vector<PatternPair>& pats,
                    const std::vector<int>& keys, const std::string& prefix, int depth,
                    std::vector<Hit>& hits) {
  Spine subj = make_spine(term);
  std::vector<TypeP> bounds = boundaries(subj);
  auto deltas = candidate_deltas(subj);

  for (size_t which = 0; which < pats.size(); which++) {
    Spine pat = make_spine(pats[which].lhs);
    if (pat.layers.empty()) continue;
    for (size_t s0 = 0; s0 < subj.layers.size(); s0++) {
      for (auto& delta : deltas) {
        WindowMatch m;
        if (!try_match(subj, bounds, pat, s0, delta, m)) continue;
        if (m.matched.front() != s0) continue;
        TermP rhs_inst;
        try {
          rhs_inst = subst_term(pats[which].rhs, m.bind);
          typecheck(rhs_inst);
        } catch (Error&) {
          continue;
        }
        TermP result;
        try {
          result = canonical_term(rebuild_with(subj, m, rhs_inst));
        } catch (Error&) {
          continue;
        }
        Hit h;
        h.leftmost = m.start;
        h.depth = depth;
        h.order_key = keys[which];
        h.path = prefix + "s" + std::to_string(m.start) + "@" + path_str(delta);
        h.result = result;
        h.before = window_term_str(subj, bounds, m);
        h.after = print_term(rhs_inst);
        hits.push_back(std::move(h));
      }
    }
  }

  // recurse into maximal bang groups
  size_t i = 0;
  while (i < subj.layers.size()) {
    if (subj.layers[i].act->kind != Term::BangM ||
        subj.layers[i].act->f->kind == Term::MetaTerm) {
      i++;
      continue;
    }
    Path p = subj.layers[i].path;
    std::vector<size_t> group{i};
    size_t j = i + 1;
    while (j < subj.layers.size()) {
      if (subj.layers[j].path == p && subj.layers[j].act->kind == Term::BangM &&
          subj.layers[j].act->f->kind != Term::MetaTerm) {
        group.push_back(j);
        j++;
      } else if (disjoint(subj.layers[j].path, p)) {
        j++;
      } else
        break;
    }
    std::vector<TermP> inner;
    for (size_t g : group) inner.push_back(subj.layers[g].act->f);
    TermP inner_term = m_seq(inner);
    std::vector<Hit> sub;
    search_matches(inner_term, pats, keys, prefix + "b" + std::to_string(i) + ".", depth + 1,
                   sub);
    for (auto& h : sub) {
      Spine out;
      out.src = subj.src;
      std::set<size_t> ingroup(group.begin(), group.end());
      bool emitted = false;
      for (size_t k = 0; k < subj.layers.size(); k++) {
        if (ingroup.count(k)) {
          if (!emitted) {
            emitted = true;
            std::vector<Layer> repl;
            flatten(m_bang(h.result), p, repl);
            for (auto& l : repl) out.layers.push_back(l);
          }
          continue;
        }
        out.layers.push_back(subj.layers[k]);
      }
      sort_layers(out.layers);
      Hit h2 = h;
      h2.result = canonical_term(spine_term(out));
      h2.leftmost = i;
      hits.push_back(std::move(h2));
    }
    i = group.back() + 1;
  }
}

std::vector<PatternPair> rule_patterns() {
  std::vector<PatternPair> out;
  for (auto& r : rules_table()) out.push_back({r.lhs, r.rhs});
  return out;
}

struct CongMove {
  std::string name;
  TermP lhs, rhs;
};

const std::vector<CongMove>& cong_moves() {
  static std::vector<CongMove> moves = [] {
    std::vector<CongMove> ms;
    for (auto& c : congruences_table()) {
      if (c.structural) continue;
      ms.push_back({c.name, c.left, c.right});
      ms.push_back({c.name + "~", c.right, c.left});
    }
    return ms;
  }();
  return moves;
}

void sort_hits(std::vector<Hit>& hits) {
  std::stable_sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) {
    if (x.leftmost != y.leftmost) return x.leftmost < y.leftmost;
    if (x.depth != y.depth) return x.depth > y.depth;  // innermost first
    if (x.order_key != y.order_key) return x.order_key < y.order_key;
    return x.path.size() < y.path.size();
  });
}

struct CongHit {
  std::string name;
  std::string path;
  TermP result;
  std::string before, after;
};

std::vector<CongHit> cong_applications(const TermP& t) {
  std::vector<Hit> hits;
  std::vector<PatternPair> pats;
  std::vector<int> keys;
  int k = 0;
  for (auto& m : cong_moves()) {
    pats.push_back({m.lhs, m.rhs});
    keys.push_back(k++);
  }
  search_matches(canonical_term(t), pats, keys, "", 0, hits);
  sort_hits(hits);
  std::vector<CongHit> out;
  std::set<std::string> seen;
  for (auto& h : hits) {
    std::string sig = print_term(h.result);
    if (!seen.insert(sig).second) continue;
    out.push_back({cong_moves()[h.order_key].name, h.path, h.result, h.before, h.after});
  }
  return out;
}

// one normalization step: congruence-bounded breadth-first search for a rule
// redex; returns false when none is reachable within the budget
bool find_step(const TermP& t, int cong_budget, uint64_t* rng_state,
               std::vector<TraceStep>& steps_out) {
  struct Node {
    TermP term;
    std::vector<TraceStep> congs;
  };
  std::deque<Node> queue;
  std::set<std::string> seen;
  TermP start = canonical_term(t);
  queue.push_back({start, {}});
  seen.insert(print_term(start));
  int expansions = 0;

  auto pick = [&](size_t n) -> size_t {
    if (!rng_state) return 0;
    *rng_state = *rng_state * 6364136223846793005ull + 1442695040888963407ull;
    return (size_t)((*rng_state >> 33) % n);
  };

  while (!queue.empty()) {
    Node node = queue.front();
    queue.pop_front();
    std::vector<MatchHit> hits = direct_matches(node.term);
    if (!hits.empty()) {
      size_t choice = pick(hits.size());
      steps_out = node.congs;
      TraceStep st;
      st.is_congruence = false;
      st.rule_id = hits[choice].rule_id;
      st.path = hits[choice].path;
      st.before = hits[choice].before;
      st.after = hits[choice].after;
      st.result = hits[choice].result;
      steps_out.push_back(std::move(st));
      return true;
    }
    if (expansions >= cong_budget) continue;
    expansions++;
    for (auto& c : cong_applications(node.term)) {
      std::string sig = print_term(c.result);
      if (!seen.insert(sig).second) continue;
      TraceStep st;
      st.is_congruence = true;
      st.cong_name = c.name;
      st.path = c.path;
      st.before = c.before;
      st.after = c.after;
      st.result = c.result;
      Node next;
      next.term = c.result;
      next.congs = node.congs;
      next.congs.push_back(std::move(st));
      queue.push_back(std::move(next));
    }
  }
  return false;
}

}  // namespace

TermP canonical_term(const TermP& t) {
  Spine s = make_spine(t);
  return spine_term(s);
}

std::vector<MatchHit> direct_matches(const TermP& t) {
  std::vector<Hit> hits;
  std::vector<PatternPair> pats = rule_patterns();
  std::vector<int> keys;
  for (auto& r : rules_table()) keys.push_back(r.id);
  search_matches(canonical_term(t), pats, keys, "", 0, hits);
  sort_hits(hits);
  std::vector<MatchHit> out;
  std::set<std::string> seen;
  for (auto& h : hits) {
    std::string sig = std::to_string(h.order_key) + "|" + h.path + "|" + print_term(h.result);
    if (!seen.insert(sig).second) continue;
    out.push_back({h.order_key, h.path, h.result, h.before, h.after});
  }
  return out;
}

NormalizeResult normalize(const TermP& t, int fuel, int cong_budget, uint64_t seed) {
  NormalizeResult res;
  uint64_t rng = seed;
  TermP cur = canonical_term(t);
  for (int step = 0; step < fuel; step++) {
    std::vector<TraceStep> steps;
    if (!find_step(cur, cong_budget, seed ? &rng : nullptr, steps)) {
      res.term = cur;
      return res;
    }
    for (auto& s : steps) res.trace.steps.push_back(s);
    cur = res.trace.steps.back().result;
  }
  res.term = cur;
  res.fuel_exhausted = true;
  return res;
}

bool is_normal(const TermP& t, int cong_budget) {
  std::vector<TraceStep> steps;
  return !find_step(t, cong_budget, nullptr, steps);
}

TermP apply_rule(const TermP& t, int rule_id, const std::string& path) {
  for (auto& h : direct_matches(t)) {
    if (h.rule_id != rule_id) continue;
    if (!path.empty() && path != "root" && h.path != path) continue;
    return h.result;
  }
  throw Error("apply_rule: rule " + std::to_string(rule_id) + " does not match at '" + path +
              "'");
}

TermP replay(const TermP& start, const Trace& trace) {
  TermP cur = canonical_term(start);
  for (auto& st : trace.steps) {
    bool found = false;
    if (st.is_congruence) {
      for (auto& c : cong_applications(cur)) {
        if (c.name == st.cong_name && c.path == st.path && term_eq(c.result, st.result)) {
          cur = c.result;
          found = true;
          break;
        }
      }
    } else {
      for (auto& h : direct_matches(cur)) {
        if (h.rule_id == st.rule_id && h.path == st.path && term_eq(h.result, st.result)) {
          cur = h.result;
          found = true;
          break;
        }
      }
    }
    if (!found) throw Error("replay: recorded step no longer applies");
  }
  return cur;
}

std::string Trace::text() const {
  std::string out;
  for (auto& s : steps) {
    out += s.is_congruence ? ("~" + s.cong_name) : std::to_string(s.rule_id);
    out += " @ " + s.path + " : " + s.before + " => " + s.after + "\n";
  }
  return out;
}

// ---- tables ----

#include "rules_table.inc"

const std::vector<RewriteRule>& rules_table() {
  static std::vector<RewriteRule> table = [] {
    std::vector<RewriteRule> rs;
    for (auto& r : kRules) {
      RewriteRule rr;
      rr.id = r.id;
      rr.lhs_text = r.lhs;
      rr.rhs_text = r.rhs;
      rr.lhs = parse_term(r.lhs, true);
      rr.rhs = parse_term(r.rhs, true);
      rs.push_back(std::move(rr));
    }
    if (rs.size() != 23) throw Error("rules_table: expected 23 rules");
    return rs;
  }();
  return table;
}

const std::vector<CongruenceRule>& congruences_table() {
  static std::vector<CongruenceRule> table = [] {
    std::vector<CongruenceRule> cs;
    for (auto& c : kCongruences) {
      CongruenceRule cr;
      cr.name = c.name;
      cr.left_text = c.left;
      cr.right_text = c.right;
      cr.left = parse_term(c.left, true);
      cr.right = parse_term(c.right, true);
      cr.structural = c.structural;
      cs.push_back(std::move(cr));
    }
    return cs;
  }();
  return table;
}

}  // namespace lincat
