#include "lincat/generic.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace lincat {

// ---- forms ----

static std::shared_ptr<GenericForm> mkf(GenericForm::Kind k) {
  auto f = std::make_shared<GenericForm>();
  f->kind = k;
  return f;
}

FormP f_var(const std::string& name, std::vector<int> boards) {
  auto f = mkf(GenericForm::Var);
  f->var = name;
  f->boards = std::move(boards);
  return f;
}
FormP f_star() { return mkf(GenericForm::Star); }
FormP f_dot(FormP a, FormP b) {
  auto f = std::make_shared<GenericForm>();
  f->kind = GenericForm::Dot;
  f->a = std::move(a);
  f->b = std::move(b);
  return f;
}
FormP f_empty() { return mkf(GenericForm::Empty); }
FormP f_single(FormP a) {
  auto f = std::make_shared<GenericForm>();
  f->kind = GenericForm::Single;
  f->a = std::move(a);
  return f;
}
FormP f_boxed(FormP a, std::vector<int> boards) {
  auto f = std::make_shared<GenericForm>();
  f->kind = GenericForm::Boxed;
  f->a = std::move(a);
  f->boards = std::move(boards);
  return f;
}
FormP f_plus(std::vector<FormP> summands) {
  std::vector<FormP> flat;
  for (auto& s : summands) {
    if (s->kind == GenericForm::Plus)
      flat.insert(flat.end(), s->summands.begin(), s->summands.end());
    else
      flat.push_back(s);
  }
  if (flat.size() == 1) return flat[0];
  std::sort(flat.begin(), flat.end(), [](const FormP& x, const FormP& y) {
    return form_cmp(x, y) < 0;
  });
  auto f = std::make_shared<GenericForm>();
  f->kind = GenericForm::Plus;
  f->summands = std::move(flat);
  return f;
}

int form_cmp(const FormP& x, const FormP& y) {
  if (x->kind != y->kind) return x->kind < y->kind ? -1 : 1;
  switch (x->kind) {
    case GenericForm::Var: {
      if (x->var != y->var) return x->var < y->var ? -1 : 1;
      if (x->boards != y->boards) return x->boards < y->boards ? -1 : 1;
      return 0;
    }
    case GenericForm::Star:
    case GenericForm::Empty: return 0;
    case GenericForm::Dot: {
      int c = form_cmp(x->a, y->a);
      if (c) return c;
      return form_cmp(x->b, y->b);
    }
    case GenericForm::Single: return form_cmp(x->a, y->a);
    case GenericForm::Boxed: {
      if (x->boards != y->boards) return x->boards < y->boards ? -1 : 1;
      return form_cmp(x->a, y->a);
    }
    case GenericForm::Plus: {
      size_t n = std::min(x->summands.size(), y->summands.size());
      for (size_t i = 0; i < n; i++) {
        int c = form_cmp(x->summands[i], y->summands[i]);
        if (c) return c;
      }
      if (x->summands.size() != y->summands.size())
        return x->summands.size() < y->summands.size() ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

bool form_eq(const FormP& x, const FormP& y) { return form_cmp(x, y) == 0; }

static std::string board_list_str(const std::vector<int>& bs) {
  std::string s = "[";
  for (size_t i = 0; i < bs.size(); i++) {
    if (i) s += ",";
    s += "i" + std::to_string(bs[i]);
  }
  return s + "]";
}

std::string print_form(const FormP& f) {
  switch (f->kind) {
    case GenericForm::Var:
      return f->var + (f->boards.empty() ? "" : board_list_str(f->boards));
    case GenericForm::Star: return "*";
    case GenericForm::Empty: return "{}0";
    case GenericForm::Single: return "{" + print_form(f->a) + "}1";
    case GenericForm::Boxed: return "{" + print_form(f->a) + "}" + board_list_str(f->boards);
    case GenericForm::Dot: {
      auto wrap = [](const FormP& g) {
        std::string s = print_form(g);
        if (g->kind == GenericForm::Plus || g->kind == GenericForm::Dot) return "(" + s + ")";
        return s;
      };
      return wrap(f->a) + " . " + wrap(f->b);
    }
    case GenericForm::Plus: {
      std::string s;
      for (size_t i = 0; i < f->summands.size(); i++) {
        if (i) s += " + ";
        std::string t = print_form(f->summands[i]);
        if (f->summands[i]->kind == GenericForm::Plus) t = "(" + t + ")";
        s += t;
      }
      return s;
    }
  }
  return "?";
}

// ---- flow orientation and form assignment ----

Flows orient_flows(const Graph& g0) {
  Graph g = canonicalize_graph(g0);
  Flows fl;
  // region chain of a wire, innermost first
  auto chain = [&](GId w) {
    std::vector<int> out;
    GId r = g.wires[w].region;
    while (r >= 0) {
      out.push_back(r);
      r = g.boards[r].parent;
    }
    return out;
  };

  // pending: (wire, form, direction: +1 pushed downward, -1 upward)
  std::deque<std::tuple<GId, FormP, int>> queue;
  std::map<GId, std::map<int, FormP>> received;  // part -> port key -> form
  std::set<GId> fired;
  int varcount = 0;

  // sources: bioriented atomic wires and unit/counit terminals
  for (GId w = 0; w < (GId)g.wires.size(); w++) {
    if (!g.wires[w].alive) continue;
    if (g.wires[w].type->kind == Type::Atom) {
      std::string name = "x" + std::to_string(++varcount);
      fl.var_of_wire[w] = name;
      FormP v = f_var(name, chain(w));
      fl.direction[w] = 0;
      fl.form[w] = v;
      queue.push_back({w, v, +1});
      queue.push_back({w, v, -1});
    }
  }
  for (GId p = 0; p < (GId)g.parts.size(); p++) {
    if (!g.parts[p].alive) continue;
    switch (g.parts[p].kind) {
      case GPart::UnitIntro:
      case GPart::CounitIntro:
        fired.insert(p);
        queue.push_back({g.parts[p].bottom_ports[0], f_star(), +1});
        break;
      case GPart::UnitElim:
      case GPart::CounitElim:
        fired.insert(p);
        queue.push_back({g.parts[p].top_ports[0], f_star(), -1});
        break;
      default: break;
    }
  }

  auto deliver_key = [](bool at_top, int port) { return (at_top ? 0 : 100) + port; };

  std::function<void(GId, FormP, int)> emit = [&](GId w, FormP f, int dir) {
    queue.push_back({w, std::move(f), dir});
  };

  while (!queue.empty()) {
    auto [w, f, dir] = queue.front();
    queue.pop_front();
    if (g.wires[w].type->kind != Type::Atom) {
      auto it = fl.direction.find(w);
      if (it != fl.direction.end())
        throw Error("orient_flows: flow collision on wire " + std::to_string(w));
      fl.direction[w] = dir;
      fl.form[w] = f;
    }
    const GEnd& dst = dir > 0 ? g.wires[w].bottom : g.wires[w].top;
    if (dst.kind == GEnd::OuterTop || dst.kind == GEnd::OuterBottom) continue;
    if (dst.kind == GEnd::None) throw Error("orient_flows: free wire end");
    GId part = dst.part;
    const GPart& pt = g.parts[part];
    bool at_top = dst.kind == GEnd::TopPort;
    received[part][deliver_key(at_top, dst.port)] = f;
    if (fired.count(part)) continue;
    auto have = [&](bool top_side, int port) {
      return received[part].count(deliver_key(top_side, port));
    };
    auto get = [&](bool top_side, int port) {
      return received[part][deliver_key(top_side, port)];
    };
    switch (pt.kind) {
      case GPart::TensorIntro:
      case GPart::ParIntro: {
        if (have(true, 0) && have(true, 1)) {
          fired.insert(part);
          emit(pt.bottom_ports[0], f_dot(get(true, 0), get(true, 1)), +1);
        }
        break;
      }
      case GPart::TensorElim:
      case GPart::ParElim: {
        if (have(false, 0) && have(false, 1)) {
          fired.insert(part);
          emit(pt.top_ports[0], f_dot(get(false, 0), get(false, 1)), -1);
        }
        break;
      }
      case GPart::Cap: {
        // receives on the A leg (port 0), emits down the A^ leg
        if (have(false, 0)) {
          fired.insert(part);
          emit(pt.bottom_ports[1], get(false, 0), +1);
        }
        break;
      }
      case GPart::Cup: {
        // receives on the A leg (port 1), emits up the A^ leg
        if (have(true, 1)) {
          fired.insert(part);
          emit(pt.top_ports[0], get(true, 1), -1);
        }
        break;
      }
      case GPart::EpsLens: {
        if (have(false, 0)) {
          fired.insert(part);
          emit(pt.top_ports[0], f_single(get(false, 0)), -1);
        }
        break;
      }
      case GPart::Eliminator: {
        if (have(false, 0)) {
          if (get(false, 0)->kind != GenericForm::Star)
            throw Error("orient_flows: eliminator expects * below");
          fired.insert(part);
          emit(pt.top_ports[0], f_empty(), -1);
        }
        break;
      }
      case GPart::DeltaLens: {
        if (have(false, 0)) {
          FormP in = get(false, 0);
          if (in->kind != GenericForm::Boxed)
            throw Error("orient_flows: delta expects a boxed form below");
          // the union flattens one box level; sums distribute, singletons
          // turn into plain boxes, empties stay empty
          std::function<FormP(const FormP&, const std::vector<int>&)> flatten_box =
              [&](const FormP& x, const std::vector<int>& outer) -> FormP {
            switch (x->kind) {
              case GenericForm::Boxed: {
                std::vector<int> merged = x->boards;
                merged.insert(merged.end(), outer.begin(), outer.end());
                return f_boxed(x->a, std::move(merged));
              }
              case GenericForm::Single: return f_boxed(x->a, outer);
              case GenericForm::Empty: return f_empty();
              case GenericForm::Plus: {
                std::vector<FormP> ss;
                for (auto& sub : x->summands) ss.push_back(flatten_box(sub, outer));
                return f_plus(std::move(ss));
              }
              default:
                throw Error("orient_flows: delta over a non-multiset form");
            }
          };
          fired.insert(part);
          emit(pt.top_ports[0], flatten_box(in->a, in->boards), -1);
        }
        break;
      }
      case GPart::Duplicator: {
        bool ready = true;
        for (size_t k = 0; k < pt.bottom_ports.size(); k++)
          if (!have(false, (int)k)) ready = false;
        if (ready) {
          std::vector<FormP> legs;
          for (size_t k = 0; k < pt.bottom_ports.size(); k++) legs.push_back(get(false, (int)k));
          fired.insert(part);
          emit(pt.top_ports[0], f_plus(std::move(legs)), -1);
        }
        break;
      }
      case GPart::NegGate: {
        if (have(false, 0)) {
          fired.insert(part);
          emit(pt.top_ports[0], f_boxed(get(false, 0), {pt.board}), -1);
        }
        break;
      }
      case GPart::PosGate: {
        if (have(true, 0)) {
          fired.insert(part);
          emit(pt.bottom_ports[0], f_boxed(get(true, 0), {pt.board}), +1);
        }
        break;
      }
      case GPart::UnitIntro:
      case GPart::UnitElim:
      case GPart::CounitIntro:
      case GPart::CounitElim: break;  // sources, already fired
    }
  }

  for (GId p = 0; p < (GId)g.parts.size(); p++)
    if (g.parts[p].alive && !fired.count(p))
      throw Error("orient_flows: flow loop or dead end at a part");

  for (GId w : g.outer_top) fl.top.push_back(fl.form.at(w));
  for (GId w : g.outer_bottom) fl.bottom.push_back(fl.form.at(w));
  return fl;
}

FormPair generic_form(const Graph& g) {
  Flows fl = orient_flows(g);
  return {fl.top, fl.bottom};
}

// ---- renaming canonicalization ----

namespace {

struct Renamer {
  std::map<std::string, std::string> vars;
  std::map<int, int> boards;

  FormP rename(const FormP& f) {
    switch (f->kind) {
      case GenericForm::Var: {
        auto it = vars.find(f->var);
        std::string nv;
        if (it == vars.end()) {
          nv = "x" + std::to_string(vars.size() + 1);
          vars[f->var] = nv;
        } else
          nv = it->second;
        return f_var(nv, rename_boards(f->boards));
      }
      case GenericForm::Star: return f_star();
      case GenericForm::Empty: return f_empty();
      case GenericForm::Dot: return f_dot(rename(f->a), rename(f->b));
      case GenericForm::Single: return f_single(rename(f->a));
      case GenericForm::Boxed: {
        // board ids are assigned walking the list innermost-first
        FormP inner = rename(f->a);
        return f_boxed(inner, rename_boards(f->boards));
      }
      case GenericForm::Plus: {
        // canonical order may change under renaming: rename then re-sort,
        // iterating to a fixpoint of the combined map is unnecessary at desk
        // scale because summand shapes differ structurally
        std::vector<FormP> ss;
        for (auto& s : f->summands) ss.push_back(rename(s));
        return f_plus(std::move(ss));
      }
    }
    return f;
  }

  std::vector<int> rename_boards(const std::vector<int>& bs) {
    std::vector<int> out;
    for (int b : bs) {
      auto it = boards.find(b);
      if (it == boards.end()) {
        int nb = (int)boards.size() + 1;
        boards[b] = nb;
        out.push_back(nb);
      } else
        out.push_back(it->second);
    }
    return out;
  }
};

}  // namespace

FormPair canonical_forms(const FormPair& fp) {
  Renamer r;
  FormPair out;
  for (auto& f : fp.top) out.top.push_back(r.rename(f));
  for (auto& f : fp.bottom) out.bottom.push_back(r.rename(f));
  return out;
}

namespace {

// bijective renaming search: variables and boards matched on the fly, with
// backtracking over permutations of Plus summands
struct FormMatcher {
  std::map<std::string, std::string> var_fwd, var_bwd;
  std::map<int, int> board_fwd, board_bwd;

  bool bind_var(const std::string& a, const std::string& b) {
    auto f = var_fwd.find(a);
    if (f != var_fwd.end()) return f->second == b;
    auto r = var_bwd.find(b);
    if (r != var_bwd.end()) return false;
    var_fwd[a] = b;
    var_bwd[b] = a;
    return true;
  }
  bool bind_board(int a, int b) {
    auto f = board_fwd.find(a);
    if (f != board_fwd.end()) return f->second == b;
    auto r = board_bwd.find(b);
    if (r != board_bwd.end()) return false;
    board_fwd[a] = b;
    board_bwd[b] = a;
    return true;
  }

  // goal-list matching with backtracking across the whole pair: Plus nodes
  // branch over summand injections, restoring the binding on failure
  bool match_goals(std::vector<std::pair<FormP, FormP>> goals, size_t i) {
    if (i == goals.size()) return true;
    const FormP x = goals[i].first;
    const FormP y = goals[i].second;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
      case GenericForm::Star:
      case GenericForm::Empty: return match_goals(std::move(goals), i + 1);
      case GenericForm::Var: {
        if (x->boards.size() != y->boards.size()) return false;
        FormMatcher save = *this;
        bool ok = bind_var(x->var, y->var);
        for (size_t k = 0; ok && k < x->boards.size(); k++)
          ok = bind_board(x->boards[k], y->boards[k]);
        if (ok && match_goals(goals, i + 1)) return true;
        *this = save;
        return false;
      }
      case GenericForm::Dot: {
        goals.push_back({x->a, y->a});
        goals.push_back({x->b, y->b});
        return match_goals(std::move(goals), i + 1);
      }
      case GenericForm::Single: {
        goals.push_back({x->a, y->a});
        return match_goals(std::move(goals), i + 1);
      }
      case GenericForm::Boxed: {
        if (x->boards.size() != y->boards.size()) return false;
        FormMatcher save = *this;
        bool ok = true;
        for (size_t k = 0; ok && k < x->boards.size(); k++)
          ok = bind_board(x->boards[k], y->boards[k]);
        if (ok) {
          auto g2 = goals;
          g2.push_back({x->a, y->a});
          if (match_goals(std::move(g2), i + 1)) return true;
        }
        *this = save;
        return false;
      }
      case GenericForm::Plus: {
        if (x->summands.size() != y->summands.size()) return false;
        std::vector<size_t> perm(y->summands.size());
        std::function<bool(size_t, std::vector<bool>&)> assign =
            [&](size_t k, std::vector<bool>& used) {
              if (k == x->summands.size()) {
                auto g2 = goals;
                for (size_t t = 0; t < perm.size(); t++)
                  g2.push_back({x->summands[t], y->summands[perm[t]]});
                return match_goals(std::move(g2), i + 1);
              }
              for (size_t j = 0; j < y->summands.size(); j++) {
                if (used[j]) continue;
                used[j] = true;
                perm[k] = j;
                if (assign(k + 1, used)) return true;
                used[j] = false;
              }
              return false;
            };
        std::vector<bool> used(y->summands.size(), false);
        return assign(0, used);
      }
    }
    return false;
  }
};

}  // namespace

bool forms_equal_up_to_renaming(const FormPair& x, const FormPair& y) {
  if (x.top.size() != y.top.size() || x.bottom.size() != y.bottom.size()) return false;
  FormMatcher m;
  std::vector<std::pair<FormP, FormP>> goals;
  for (size_t i = 0; i < x.top.size(); i++) goals.push_back({x.top[i], y.top[i]});
  for (size_t i = 0; i < x.bottom.size(); i++) goals.push_back({x.bottom[i], y.bottom[i]});
  return m.match_goals(std::move(goals), 0);
}

// ---- instance evaluation ----

Count AssignmentPair::m(int board, const std::vector<long>& s) const {
  auto it = m_over.find({board, s});
  if (it != m_over.end()) return it->second;
  auto c = m_const.find(board);
  if (c == m_const.end()) throw Error("assignment pair: no size for board " + std::to_string(board));
  return c->second;
}

ElemId AssignmentPair::eta(const std::string& var, const std::vector<long>& s) const {
  auto it = eta_over.find({var, s});
  if (it != eta_over.end()) return it->second;
  auto c = eta_const.find(var);
  if (c == eta_const.end()) throw Error("assignment pair: no atom for variable " + var);
  return c->second;
}

ElemId instantiate(const FormP& f, const AssignmentPair& P, const std::vector<long>& s) {
  switch (f->kind) {
    case GenericForm::Var: return P.eta(f->var, s);
    case GenericForm::Star: return e_star();
    case GenericForm::Empty: return e_empty_mset();
    case GenericForm::Dot:
      return e_pair(instantiate(f->a, P, s), instantiate(f->b, P, s));
    case GenericForm::Plus: {
      ElemId acc = e_empty_mset();
      for (auto& g : f->summands) acc = mset_union(acc, instantiate(g, P, s));
      return acc;
    }
    case GenericForm::Single:
      return e_mset({{instantiate(f->a, P, s), Count(1)}});
    case GenericForm::Boxed: {
      // suffixes enumerate the boxed boards outermost-first
      if (P.uniform()) {
        Count total(1);
        for (int b : f->boards) total = total * P.m(b, s);
        return e_mset({{instantiate(f->a, P, s), total}});
      }
      std::vector<int> outer_first(f->boards.rbegin(), f->boards.rend());
      std::vector<std::pair<ElemId, Count>> entries;
      std::function<void(size_t, std::vector<long>&)> rec = [&](size_t i,
                                                                std::vector<long>& suffix) {
        if (i == outer_first.size()) {
          std::vector<long> full = s;
          full.insert(full.end(), suffix.begin(), suffix.end());
          entries.emplace_back(instantiate(f->a, P, full), Count(1));
          return;
        }
        std::vector<long> ctx = s;
        ctx.insert(ctx.end(), suffix.begin(), suffix.end());
        auto mv = P.m(outer_first[i], ctx).value(16);
        if (!mv) throw Error("instantiate: board size too large to enumerate");
        for (long r = 1; r <= (long)*mv; r++) {
          suffix.push_back(r);
          rec(i + 1, suffix);
          suffix.pop_back();
        }
      };
      std::vector<long> suffix;
      rec(0, suffix);
      return e_mset(std::move(entries));
    }
  }
  throw Error("instantiate: bad form");
}

// ---- echo instances ----

EchoParams default_echo_params(const Graph& g0, long p, const Interp& I) {
  Graph g = canonicalize_graph(g0);
  Flows fl = orient_flows(g);
  EchoParams ep;
  ep.p = p;
  long k = 0;
  for (GId b = 0; b < (GId)g.boards.size(); b++)
    if (g.boards[b].alive) ep.k[b] = k++;
  std::map<std::string, size_t> next_label;  // per atom
  for (auto& [w, v] : fl.var_of_wire) {
    const TypeP& ty = g.wires[w].type;
    if (ty->kind != Type::Atom) throw Error("echo params: bioriented wire is not atomic");
    auto& labels = I.labels(ty->name);
    size_t& idx = next_label[ty->name];
    if (idx >= labels.size())
      throw Error("echo params: interpretation of '" + ty->name +
                  "' has fewer labels than bioriented wires");
    ep.atoms[v] = labels[idx++];
  }
  return ep;
}

EchoInstance echo_instance(const Graph& g0, const EchoParams& params) {
  if (!is_prime(params.p)) throw Error("echo_instance: p is not prime");
  Graph g = canonicalize_graph(g0);
  Flows fl = orient_flows(g);
  // discernibility validation
  std::set<long> ks;
  for (auto& [b, k] : params.k)
    if (!ks.insert(k).second) throw Error("echo_instance: duplicate k exponent");
  std::set<std::string> labels;
  for (auto& [v, l] : params.atoms)
    if (!labels.insert(l).second) throw Error("echo_instance: duplicate atom label");

  AssignmentPair P;
  for (GId b = 0; b < (GId)g.boards.size(); b++) {
    if (!g.boards[b].alive) continue;
    auto it = params.k.find(b);
    if (it == params.k.end()) throw Error("echo_instance: missing k for a board");
    P.m_const[b] = Count::ppow(params.p, big_pow(params.p, it->second));
  }
  for (auto& [w, v] : fl.var_of_wire) {
    auto it = params.atoms.find(v);
    if (it == params.atoms.end()) throw Error("echo_instance: missing label for " + v);
    P.eta_const[v] = e_atom(it->second);
  }

  EchoInstance inst;
  inst.p = params.p;
  for (size_t i = 0; i < g.outer_top.size(); i++) {
    ElemId e = instantiate(fl.top[i], P, {});
    inst.top.push_back(decorate_bars(e, g.wires[g.outer_top[i]].type));
  }
  for (size_t i = 0; i < g.outer_bottom.size(); i++) {
    ElemId e = instantiate(fl.bottom[i], P, {});
    inst.bottom.push_back(decorate_bars(e, g.wires[g.outer_bottom[i]].type));
  }
  return inst;
}

// ---- star conditions ----

namespace {

// occurrence walk: (element, parity, enclosing multiplicity) with the source
// side contributing one parity flip
struct OccWalk {
  // positive multiset occurrences: value -> list of counts
  std::map<ElemId, std::vector<Count>> pos_msets;
  // signed atoms: (label, parity even?) -> list of counts
  std::map<std::pair<std::string, bool>, std::vector<Count>> atoms;

  void walk(ElemId e, int parity, const Count& mult) {
    const ElemNode& n = elem(e);
    switch (n.kind) {
      case ElemNode::AtomVal: atoms[{n.atom, parity % 2 == 0}].push_back(mult); break;
      case ElemNode::Star: break;
      case ElemNode::BarVal: walk(n.a, parity + 1, mult); break;
      case ElemNode::PairVal:
        walk(n.a, parity, mult);
        walk(n.b, parity, mult);
        break;
      case ElemNode::MSetVal: {
        if (parity % 2 == 0) pos_msets[strip_bars(e)].push_back(mult);
        auto entries = n.mset;
        for (auto& [x, c] : entries) walk(x, parity, mult * c);
        break;
      }
    }
  }
};

// is the count a power of p with the exponent itself a power of p (p^(p^k))?
std::optional<long> echo_card_exponent(const Count& c, long p) {
  auto l = c.ppow_log(p);
  if (!l) return std::nullopt;
  // l must equal p^k
  BigInt rem = *l;
  long k = 0;
  if (rem == 1) return 0;  // p^(p^0) = p
  while (rem % p == 0) {
    rem /= p;
    k++;
  }
  if (rem != 1 || k == 0) return std::nullopt;
  return k;
}

std::optional<BigInt> total_ppow(const std::vector<Count>& counts, long p) {
  // the sum of the occurrence counts, when it is a power of p
  Count total(0);
  for (auto& c : counts) {
    try {
      total = total + c;
    } catch (Error&) {
      return std::nullopt;  // sums of distinct huge prime powers are not powers
    }
  }
  auto l = total.ppow_log(p);
  if (!l) return std::nullopt;
  return *l;
}

}  // namespace

StarReport check_stars(const Graph& g, const EchoInstance& inst, long p, const Interp& I) {
  StarReport rep;
  OccWalk occ;
  for (ElemId e : inst.top) occ.walk(e, 1, Count(1));  // source side: one flip
  for (ElemId e : inst.bottom) occ.walk(e, 0, Count(1));

  // *1: the coefficient is nonzero mod p
  try {
    long r = pi_mod_p(g, inst.top, inst.bottom, p, I);
    rep.star[0] = r % p != 0;
    if (!rep.star[0]) rep.witness[0] = "coefficient vanishes mod p";
  } catch (Error& e) {
    rep.star[0] = false;
    rep.witness[0] = e.what();
  }

  // *2: positive multisets homogeneous with p^(p^k) elements
  rep.star[1] = true;
  for (auto& [v, counts] : occ.pos_msets) {
    if (!mset_is_homogeneous(v)) {
      rep.star[1] = false;
      rep.witness[1] = "non-homogeneous positive multiset " + print_element(v);
      break;
    }
    if (!elem(v).mset.empty() && !echo_card_exponent(mset_card(v), p)) {
      rep.star[1] = false;
      rep.witness[1] = "positive multiset cardinality is not p^(p^k): " + print_element(v);
      break;
    }
  }

  // *3: equal-cardinality positive multisets coincide
  rep.star[2] = true;
  {
    std::map<std::string, ElemId> by_card;
    for (auto& [v, counts] : occ.pos_msets) {
      if (elem(v).mset.empty()) continue;
      std::string card = mset_card(v).str();
      auto it = by_card.find(card);
      if (it != by_card.end() && it->second != v) {
        rep.star[2] = false;
        rep.witness[2] = "two positive multisets share cardinality " + card;
        break;
      }
      by_card.emplace(card, v);
    }
  }

  // *4: each positive multiset occurs a p-power number of times
  rep.star[3] = true;
  for (auto& [v, counts] : occ.pos_msets) {
    if (!total_ppow(counts, p)) {
      rep.star[3] = false;
      rep.witness[3] = "positive multiset occurrence count is not a power of p: " +
                       print_element(v);
      break;
    }
  }

  // *5: each signed atom occurs a p-power number of times
  rep.star[4] = true;
  for (auto& [key, counts] : occ.atoms) {
    if (!total_ppow(counts, p)) {
      rep.star[4] = false;
      rep.witness[4] = "signed atom occurrence count is not a power of p: " + key.first;
      break;
    }
  }
  return rep;
}

// ---- reconstruction of the generic form (Lemma pwe08) ----

namespace {

struct GenericRebuilder {
  long p;
  // distinct positive multisets -> board id; nesting via occurrence counts
  std::map<ElemId, int> board_of;          // keyed by the stripped multiset value
  std::map<int, std::set<long>> ancestors; // board -> k's of enclosing boards
  std::map<int, long> k_of;                // board -> its own k
  std::map<std::string, std::string> var_of_label;
  std::map<std::string, std::vector<int>> var_boards;
  int next_board = 0;
  int next_var = 0;

  // digits of a p-power exponent: the set of k with digit 1; nullopt if any
  // digit exceeds 1
  std::optional<std::set<long>> digit_set(BigInt l) {
    std::set<long> out;
    long pos = 0;
    while (l > 0) {
      long d = (long)(l % p);
      l /= p;
      if (d > 1) return std::nullopt;
      if (d == 1) out.insert(pos);
      pos++;
    }
    return out;
  }

  void harvest(const EchoInstance& inst) {
    OccWalk occ;
    for (ElemId e : inst.top) occ.walk(e, 1, Count(1));
    for (ElemId e : inst.bottom) occ.walk(e, 0, Count(1));
    // boards from distinct nonempty positive multisets
    for (auto& [v, counts] : occ.pos_msets) {
      if (elem(v).mset.empty()) continue;
      auto kk = echo_card_exponent(mset_card(v), p);
      if (!kk) throw Error("reconstruct_generic: positive multiset cardinality is not p^(p^k)");
      auto tot = total_ppow(counts, p);
      if (!tot) throw Error("reconstruct_generic: occurrence count is not a power of p");
      auto anc = digit_set(*tot);
      if (!anc) throw Error("reconstruct_generic: occurrence count has repeated digits");
      int b = next_board++;
      board_of[v] = b;
      k_of[b] = *kk;
      ancestors[b] = *anc;
    }
    // validate the nesting is a forest: each ancestor set is realized
    for (auto& [b, anc] : ancestors) {
      for (long a : anc) {
        bool found = false;
        for (auto& [b2, k2] : k_of)
          if (k2 == a) found = true;
        if (!found) throw Error("reconstruct_generic: dangling ancestor exponent");
      }
    }
  }

  // boards sorted outermost-first for a chunk with exponent digit set S and
  // own-chain validation
  std::vector<int> chain_of(const std::set<long>& ks) {
    // the boards with these k's, ordered by ancestor-set inclusion
    std::vector<int> bs;
    for (long k : ks) {
      for (auto& [b, bk] : k_of)
        if (bk == k) bs.push_back(b);
    }
    std::sort(bs.begin(), bs.end(), [&](int x, int y) {
      return ancestors[x].size() < ancestors[y].size();
    });
    // innermost-first for the Boxed list
    std::reverse(bs.begin(), bs.end());
    return bs;
  }

  FormP rebuild(ElemId e0, int parity, const std::vector<int>& ctx) {
    const ElemNode& n = elem(e0);
    switch (n.kind) {
      case ElemNode::Star: return f_star();
      case ElemNode::BarVal: return rebuild(n.a, parity + 1, ctx);
      case ElemNode::PairVal:
        return f_dot(rebuild(n.a, parity, ctx), rebuild(n.b, parity, ctx));
      case ElemNode::AtomVal: {
        auto it = var_of_label.find(n.atom);
        std::string v;
        if (it == var_of_label.end()) {
          v = "x" + std::to_string(++next_var);
          var_of_label[n.atom] = v;
          var_boards[v] = ctx;
        } else {
          v = it->second;
          if (var_boards[v] != ctx)
            throw Error("reconstruct_generic: a label occurs in distinct board contexts");
        }
        return f_var(v, ctx);
      }
      case ElemNode::MSetVal: {
        if (parity % 2 == 0) {
          // positive: a board box p^(p^k){gamma'}
          ElemId key = strip_bars(e0);
          auto it = board_of.find(key);
          if (n.mset.empty() || it == board_of.end())
            throw Error("reconstruct_generic: unregistered positive multiset");
          int b = it->second;
          std::vector<int> ctx2 = ctx;
          ctx2.insert(ctx2.begin(), b);
          return f_boxed(rebuild(n.mset[0].first, parity, ctx2), {b});
        }
        // negative: decompose into < p homogeneous chunks of p-power counts
        // (unique up to shuffles: the base-p digits of each multiplicity)
        if (n.mset.empty()) return f_empty();
        std::vector<FormP> chunks;
        auto entries = n.mset;
        for (auto& [x, c] : entries) {
          std::vector<BigInt> chunk_exps;
          if (c.symbolic()) {
            chunk_exps.push_back(c.exponent());
          } else {
            BigInt v = *c.value();
            long pos = 0;
            while (v > 0) {
              long d = (long)(v % p);
              v /= p;
              for (long t = 0; t < d; t++) chunk_exps.push_back(pos);
              pos++;
            }
          }
          for (const BigInt& l : chunk_exps) {
            if (l == 0) {
              chunks.push_back(f_single(rebuild(x, parity, ctx)));
              continue;
            }
            auto ks = digit_set(l);
            if (!ks) throw Error("reconstruct_generic: chunk exponent has repeated digits");
            std::vector<int> chain = chain_of(*ks);
            if (chain.size() != ks->size())
              throw Error("reconstruct_generic: chunk exponent does not match the boards");
            std::vector<int> ctx2 = ctx;
            ctx2.insert(ctx2.begin(), chain.begin(), chain.end());
            chunks.push_back(f_boxed(rebuild(x, parity, ctx2), chain));
          }
        }
        return f_plus(std::move(chunks));
      }
    }
    throw Error("reconstruct_generic: bad element");
  }
};

}  // namespace

FormPair reconstruct_generic(const EchoInstance& inst, long p) {
  GenericRebuilder rb;
  rb.p = p;
  rb.harvest(inst);
  FormPair out;
  for (ElemId e : inst.top) out.top.push_back(rb.rebuild(e, 1, {}));
  for (ElemId e : inst.bottom) out.bottom.push_back(rb.rebuild(e, 0, {}));
  return out;
}

// ---- reconstruction of the graph (Lemma vqa10) ----

namespace {

struct GraphRebuilder {
  Graph g;
  // external board id (from forms) -> created board
  std::map<int, GId> board_map;
  struct VarStub {
    GEnd attach;
    TypeP type;
    GId region;
    std::vector<int> boards;
  };
  std::map<std::string, std::vector<VarStub>> var_stubs;
  std::vector<GId> dotted_pending;  // terminals needing a host

  GId add_wire(TypeP t, GId region) {
    GWire w;
    w.type = std::move(t);
    w.region = region;
    g.wires.push_back(std::move(w));
    return (GId)(g.wires.size() - 1);
  }
  GId add_part(GPart::Kind k, GId region) {
    GPart pp;
    pp.kind = k;
    pp.region = region;
    g.parts.push_back(std::move(pp));
    return (GId)(g.parts.size() - 1);
  }

  void connect(GId wire, const GEnd& e, bool as_top) {
    if (as_top)
      g.wires[wire].top = e;
    else
      g.wires[wire].bottom = e;
    switch (e.kind) {
      case GEnd::TopPort: g.parts[e.part].top_ports[e.port] = wire; break;
      case GEnd::BottomPort: g.parts[e.part].bottom_ports[e.port] = wire; break;
      case GEnd::OuterTop: g.outer_top[e.index] = wire; break;
      case GEnd::OuterBottom: g.outer_bottom[e.index] = wire; break;
      case GEnd::None: break;
    }
  }

  GEnd reserve_top_port(GId part) {
    g.parts[part].top_ports.push_back(-1);
    return {GEnd::TopPort, part, (int)g.parts[part].top_ports.size() - 1, -1};
  }
  GEnd reserve_bottom_port(GId part) {
    g.parts[part].bottom_ports.push_back(-1);
    return {GEnd::BottomPort, part, (int)g.parts[part].bottom_ports.size() - 1, -1};
  }

  GId board_for(int ext, GId region) {
    auto it = board_map.find(ext);
    if (it != board_map.end()) {
      if (g.boards[it->second].parent != region)
        throw Error("reconstruct_graph: board context mismatch");
      return it->second;
    }
    GId b = (GId)g.boards.size();
    g.boards.push_back(GBoard{region, {}, -1, true});
    board_map[ext] = b;
    return b;
  }

  // attach.kind BottomPort / OuterTop: the wire's top end is known and the
  // flow ascends into it (the emitter goes below); otherwise the emitter goes
  // above the known bottom end.
  void process(const FormP& f, const TypeP& ty, GId region, const GEnd& attach,
               const std::vector<int>& ctx) {
    bool emitter_below = attach.kind == GEnd::BottomPort || attach.kind == GEnd::OuterTop;
    if (ty->kind == Type::Atom) {
      if (f->kind != GenericForm::Var)
        throw Error("reconstruct_graph: atomic wire without a variable form");
      if (!f->boards.empty() && f->boards != ctx)
        throw Error("reconstruct_graph: variable board list inconsistent with its position");
      var_stubs[f->var].push_back({attach, ty, region, ctx});
      return;
    }
    switch (ty->kind) {
      case Type::One:
      case Type::Bot: {
        if (f->kind != GenericForm::Star)
          throw Error("reconstruct_graph: unit wire carries a non-* form");
        GId w = add_wire(ty, region);
        if (emitter_below) {
          GId part = add_part(ty->kind == Type::One ? GPart::UnitElim : GPart::CounitElim,
                              region);
          connect(w, attach, true);
          connect(w, reserve_top_port(part), false);
          if (ty->kind == Type::One) dotted_pending.push_back(part);
        } else {
          GId part = add_part(ty->kind == Type::One ? GPart::UnitIntro : GPart::CounitIntro,
                              region);
          connect(w, reserve_bottom_port(part), true);
          connect(w, attach, false);
          if (ty->kind == Type::Bot) dotted_pending.push_back(part);
        }
        return;
      }
      case Type::Tensor:
      case Type::Par: {
        if (f->kind != GenericForm::Dot)
          throw Error("reconstruct_graph: product wire without a dot form");
        bool tensor = ty->kind == Type::Tensor;
        GId w = add_wire(ty, region);
        if (emitter_below) {
          GId part = add_part(tensor ? GPart::TensorElim : GPart::ParElim, region);
          connect(w, attach, true);
          connect(w, reserve_top_port(part), false);
          GEnd p0 = reserve_bottom_port(part), p1 = reserve_bottom_port(part);
          process(f->a, ty->a, region, p0, ctx);
          process(f->b, ty->b, region, p1, ctx);
        } else {
          GId part = add_part(tensor ? GPart::TensorIntro : GPart::ParIntro, region);
          GEnd p0 = reserve_top_port(part), p1 = reserve_top_port(part);
          connect(w, reserve_bottom_port(part), true);
          connect(w, attach, false);
          process(f->a, ty->a, region, p0, ctx);
          process(f->b, ty->b, region, p1, ctx);
        }
        return;
      }
      case Type::Dual: {
        GId w = add_wire(ty, region);
        if (emitter_below) {
          GId cup = add_part(GPart::Cup, region);
          GEnd leg0 = reserve_top_port(cup);  // A^: our wire
          GEnd leg1 = reserve_top_port(cup);  // A: the receiving leg
          connect(w, attach, true);
          connect(w, leg0, false);
          process(f, ty->a, region, leg1, ctx);
        } else {
          GId cap = add_part(GPart::Cap, region);
          GEnd leg0 = reserve_bottom_port(cap);  // A
          GEnd leg1 = reserve_bottom_port(cap);  // A^: our wire
          connect(w, leg1, true);
          connect(w, attach, false);
          process(f, ty->a, region, leg0, ctx);
        }
        return;
      }
      case Type::Bang: {
        GId w = add_wire(ty, region);
        if (emitter_below) {
          switch (f->kind) {
            case GenericForm::Plus: {
              // summands that share their outermost board came through one
              // delta into that board (rule 5 forbids parallel deltas into a
              // shared board in normal forms); merge them back
              std::vector<FormP> legs;
              std::map<int, std::vector<FormP>> shared;
              std::vector<int> shared_order;
              for (auto& sub : f->summands) {
                if (sub->kind == GenericForm::Boxed && sub->boards.size() >= 2) {
                  int outer = sub->boards.back();
                  if (!shared.count(outer)) shared_order.push_back(outer);
                  shared[outer].push_back(sub);
                } else {
                  legs.push_back(sub);
                }
              }
              std::vector<std::pair<int, FormP>> merged;  // board, inner plus
              for (int b : shared_order) {
                auto& group = shared[b];
                if (group.size() == 1) {
                  legs.push_back(group[0]);
                  continue;
                }
                std::vector<FormP> stripped;
                for (auto& sub : group) {
                  std::vector<int> rest(sub->boards.begin(), sub->boards.end() - 1);
                  stripped.push_back(f_boxed(sub->a, rest));
                }
                merged.emplace_back(b, f_plus(std::move(stripped)));
              }
              auto emit_merged = [&](int b_ext, const FormP& inner, const GEnd& at) {
                // delta ; negative gate of board b; the plus continues inside
                GId dl = add_part(GPart::DeltaLens, region);
                GId wv = add_wire(ty, region);
                connect(wv, at, true);
                connect(wv, reserve_top_port(dl), false);
                GId b = board_for(b_ext, region);
                GId gate = add_part(GPart::NegGate, region);
                g.parts[gate].board = b;
                g.boards[b].neg_gates.push_back(gate);
                GId wmid = add_wire(t_bang(ty), region);
                connect(wmid, reserve_bottom_port(dl), true);
                connect(wmid, reserve_top_port(gate), false);
                GEnd inner_at = reserve_bottom_port(gate);
                std::vector<int> ctx2 = ctx;
                ctx2.insert(ctx2.begin(), b_ext);
                process(inner, ty, b, inner_at, ctx2);
              };
              size_t total = legs.size() + merged.size();
              if (total == 1) {
                // no duplicator at all
                g.wires[w].alive = false;
                if (!merged.empty())
                  emit_merged(merged[0].first, merged[0].second, attach);
                else
                  process(legs[0], ty, region, attach, ctx);
                return;
              }
              GId dup = add_part(GPart::Duplicator, region);
              connect(w, attach, true);
              connect(w, reserve_top_port(dup), false);
              for (auto& sub : legs) {
                GEnd leg = reserve_bottom_port(dup);
                process(sub, ty, region, leg, ctx);
              }
              for (auto& [b_ext, inner] : merged) {
                GEnd leg = reserve_bottom_port(dup);
                emit_merged(b_ext, inner, leg);
              }
              return;
            }
            case GenericForm::Empty: {
              GId el = add_part(GPart::Eliminator, region);
              connect(w, attach, true);
              connect(w, reserve_top_port(el), false);
              GEnd below = reserve_bottom_port(el);
              process(f_star(), t_one(), region, below, ctx);
              return;
            }
            case GenericForm::Single: {
              GId eps = add_part(GPart::EpsLens, region);
              connect(w, attach, true);
              connect(w, reserve_top_port(eps), false);
              GEnd below = reserve_bottom_port(eps);
              process(f->a, ty->a, region, below, ctx);
              return;
            }
            case GenericForm::Boxed: {
              if (f->boards.size() == 1) {
                GId b = board_for(f->boards[0], region);
                GId gate = add_part(GPart::NegGate, region);
                g.parts[gate].board = b;
                g.boards[b].neg_gates.push_back(gate);
                connect(w, attach, true);
                connect(w, reserve_top_port(gate), false);
                GEnd inner = reserve_bottom_port(gate);
                std::vector<int> ctx2 = ctx;
                ctx2.insert(ctx2.begin(), f->boards[0]);
                process(f->a, ty->a, b, inner, ctx2);
              } else {
                // a flattened box comes from a delta lens
                GId dl = add_part(GPart::DeltaLens, region);
                connect(w, attach, true);
                connect(w, reserve_top_port(dl), false);
                GEnd below = reserve_bottom_port(dl);
                std::vector<int> rest(f->boards.begin(), f->boards.end() - 1);
                FormP inner = f_boxed(f_boxed(f->a, rest), {f->boards.back()});
                process(inner, t_bang(ty), region, below, ctx);
              }
              return;
            }
            default: throw Error("reconstruct_graph: bad ascending form on a bang wire");
          }
        } else {
          if (f->kind != GenericForm::Boxed || f->boards.size() != 1)
            throw Error("reconstruct_graph: descending bang wire must come from a board");
          GId b = board_for(f->boards[0], region);
          GId gate = add_part(GPart::PosGate, region);
          g.parts[gate].board = b;
          if (g.boards[b].pos_gate >= 0)
            throw Error("reconstruct_graph: board has two positive gates");
          g.boards[b].pos_gate = gate;
          GEnd inner = reserve_top_port(gate);
          connect(w, reserve_bottom_port(gate), true);
          connect(w, attach, false);
          std::vector<int> ctx2 = ctx;
          ctx2.insert(ctx2.begin(), f->boards[0]);
          process(f->a, ty->a, b, inner, ctx2);
        }
        return;
      }
      default: throw Error("reconstruct_graph: unsupported wire type");
    }
  }

  void finish() {
    // pair up variable stubs into bioriented wires
    for (auto& [v, stubs] : var_stubs) {
      if (stubs.size() != 2)
        throw Error("reconstruct_graph: variable " + v + " does not occur exactly twice");
      VarStub a = stubs[0], b = stubs[1];
      bool a_top = a.attach.kind == GEnd::BottomPort || a.attach.kind == GEnd::OuterTop;
      bool b_top = b.attach.kind == GEnd::BottomPort || b.attach.kind == GEnd::OuterTop;
      if (a_top == b_top)
        throw Error("reconstruct_graph: variable " + v + " has incompatible attachments");
      if (!a_top) std::swap(a, b);
      if (a.region != b.region)
        throw Error("reconstruct_graph: variable " + v + " spans two regions");
      if (!type_eq(a.type, b.type))
        throw Error("reconstruct_graph: variable " + v + " has two types");
      GId w = add_wire(a.type, a.region);
      connect(w, a.attach, true);
      connect(w, b.attach, false);
    }
    // boards need their positive gates
    for (auto& [ext, b] : board_map)
      if (g.boards[b].pos_gate < 0)
        throw Error("reconstruct_graph: board without a positive gate");
    for (GId t : dotted_pending) g.dotted.push_back({t, -1});
    // hosts decided by the shared placement search (any placement is ~-equal)
    for (auto& d : g.dotted) {
      // temporary valid host so compaction bookkeeping stays consistent
      for (GId w = 0; w < (GId)g.wires.size(); w++)
        if (g.wires[w].alive && g.wires[w].region == g.parts[d.terminal].region) {
          d.host = w;
          break;
        }
      if (d.host < 0) throw Error("reconstruct_graph: no host wire for a dotted link");
    }
    place_dotted_links(g);
  }
};

}  // namespace

Graph reconstruct_graph(const FormPair& forms, const std::vector<TypeP>& top_types,
                        const std::vector<TypeP>& bottom_types) {
  if (forms.top.size() != top_types.size() || forms.bottom.size() != bottom_types.size())
    throw Error("reconstruct_graph: form/type arity mismatch");
  GraphRebuilder rb;
  rb.g.outer_top.assign(top_types.size(), -1);
  rb.g.outer_bottom.assign(bottom_types.size(), -1);
  for (size_t i = 0; i < top_types.size(); i++)
    rb.process(forms.top[i], top_types[i], -1, GEnd{GEnd::OuterTop, -1, -1, (int)i}, {});
  for (size_t i = 0; i < bottom_types.size(); i++)
    rb.process(forms.bottom[i], bottom_types[i], -1, GEnd{GEnd::OuterBottom, -1, -1, (int)i},
               {});
  rb.finish();
  return canonicalize_graph(rb.g);
}

}  // namespace lincat
