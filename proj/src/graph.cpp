#include "lincat/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace lincat {

size_t Graph::wire_count() const {
  size_t n = 0;
  for (auto& w : wires)
    if (w.alive) n++;
  return n;
}

int Graph::region_depth(GId region) const {
  int d = 0;
  while (region >= 0) {
    region = boards[region].parent;
    d++;
  }
  return d;
}

namespace {

struct Builder {
  Graph g;

  GId add_wire(TypeP t, GId region) {
    GWire w;
    w.type = std::move(t);
    w.region = region;
    g.wires.push_back(std::move(w));
    return (GId)(g.wires.size() - 1);
  }

  GId add_part(GPart::Kind k, GId region) {
    GPart p;
    p.kind = k;
    p.region = region;
    g.parts.push_back(std::move(p));
    return (GId)(g.parts.size() - 1);
  }

  void attach_top(GId part, GId wire) {
    // wire hangs below `part`: the wire's top end lands on a bottom port
    int port = (int)g.parts[part].bottom_ports.size();
    g.parts[part].bottom_ports.push_back(wire);
    g.wires[wire].top = {GEnd::BottomPort, part, port, -1};
  }

  void attach_bottom(GId part, GId wire) {
    int port = (int)g.parts[part].top_ports.size();
    g.parts[part].top_ports.push_back(wire);
    g.wires[wire].bottom = {GEnd::TopPort, part, port, -1};
  }

  // fuse the bottom of `upper` to the top of `lower`; keeps upper's id
  void merge(GId upper, GId lower) {
    if (upper == lower) throw Error("merge: wire self-fusion");
    GEnd low = g.wires[lower].bottom;
    g.wires[upper].bottom = low;
    redirect(low, lower, upper);
    g.wires[lower].alive = false;
  }

  void redirect(const GEnd& e, GId from, GId to) {
    switch (e.kind) {
      case GEnd::TopPort: g.parts[e.part].top_ports[e.port] = to; break;
      case GEnd::BottomPort: g.parts[e.part].bottom_ports[e.port] = to; break;
      case GEnd::OuterTop: g.outer_top[e.index] = to; break;
      case GEnd::OuterBottom: g.outer_bottom[e.index] = to; break;
      case GEnd::None: break;
    }
    // dotted hosts follow the surviving wire
    for (auto& d : g.dotted)
      if (d.host == from) d.host = to;
  }

  struct Frag {
    GId top, bottom;
  };

  Frag build(const TermP& t, GId region) {
    switch (t->kind) {
      case Term::Id: {
        GId w = add_wire(typecheck(t).source, region);
        return {w, w};
      }
      case Term::Comp: {
        Frag a = build(t->f, region);
        Frag b = build(t->g, region);
        bool b_single = b.top == b.bottom;
        merge(a.bottom, b.top);
        return {a.top, b_single ? a.bottom : b.bottom};
      }
      case Term::TensorM:
      case Term::ParM: {
        bool tensor = t->kind == Term::TensorM;
        Frag a = build(t->f, region);
        Frag b = build(t->g, region);
        Judgement j = typecheck(t);
        GId e = add_part(tensor ? GPart::TensorElim : GPart::ParElim, region);
        GId i = add_part(tensor ? GPart::TensorIntro : GPart::ParIntro, region);
        GId wtop = add_wire(j.source, region);
        GId wbot = add_wire(j.target, region);
        attach_bottom(e, wtop);
        attach_top(e, a.top);
        attach_top(e, b.top);
        attach_bottom(i, a.bottom);
        attach_bottom(i, b.bottom);
        attach_top(i, wbot);
        return {wtop, wbot};
      }
      case Term::BangM: {
        GId b = (GId)g.boards.size();
        g.boards.push_back(GBoard{region, {}, -1, true});
        Frag in = build(t->f, b);
        Judgement j = typecheck(t);
        GId ng = add_part(GPart::NegGate, region);
        g.parts[ng].board = b;
        GId pg = add_part(GPart::PosGate, region);
        g.parts[pg].board = b;
        GId wtop = add_wire(j.source, region);
        GId wbot = add_wire(j.target, region);
        attach_bottom(ng, wtop);
        attach_top(ng, in.top);
        attach_bottom(pg, in.bottom);
        attach_top(pg, wbot);
        g.boards[b].neg_gates.push_back(ng);
        g.boards[b].pos_gate = pg;
        return {wtop, wbot};
      }
      default: return build_gen(t, region);
    }
  }

  Frag build_gen(const TermP& t, GId region) {
    Judgement j = typecheck(t);
    const TypeP& A = t->A;
    const TypeP& B = t->B;
    const TypeP& C = t->C;
    auto W = [&](TypeP ty) { return add_wire(std::move(ty), region); };
    auto P = [&](GPart::Kind k) { return add_part(k, region); };

    switch (t->kind) {
      case Term::Delta: {
        GId p = P(GPart::DeltaLens);
        GId w1 = W(j.source), w2 = W(j.target);
        attach_bottom(p, w1);
        attach_top(p, w2);
        return {w1, w2};
      }
      case Term::Eps: {
        GId p = P(GPart::EpsLens);
        GId w1 = W(j.source), w2 = W(j.target);
        attach_bottom(p, w1);
        attach_top(p, w2);
        return {w1, w2};
      }
      case Term::Weak: {
        GId p = P(GPart::Eliminator);
        GId w1 = W(j.source), w2 = W(j.target);
        attach_bottom(p, w1);
        attach_top(p, w2);
        return {w1, w2};
      }
      case Term::Dup: {
        GId d = P(GPart::Duplicator);
        GId i = P(GPart::TensorIntro);
        GId w1 = W(j.source), l1 = W(t_bang(A)), l2 = W(t_bang(A)), w2 = W(j.target);
        attach_bottom(d, w1);
        attach_top(d, l1);
        attach_top(d, l2);
        attach_bottom(i, l1);
        attach_bottom(i, l2);
        attach_top(i, w2);
        return {w1, w2};
      }
      case Term::PhiT: {
        GId b = (GId)g.boards.size();
        g.boards.push_back(GBoard{region, {}, -1, true});
        GId iA = W(A), iB = W(B), iAB = W(t_tensor(A, B));
        g.wires[iA].region = g.wires[iB].region = g.wires[iAB].region = b;
        GId ti = add_part(GPart::TensorIntro, b);
        attach_bottom(ti, iA);
        attach_bottom(ti, iB);
        attach_top(ti, iAB);
        GId g1 = P(GPart::NegGate), g2 = P(GPart::NegGate), pg = P(GPart::PosGate);
        g.parts[g1].board = g.parts[g2].board = g.parts[pg].board = b;
        GId o1 = W(t_bang(A)), o2 = W(t_bang(B)), o3 = W(j.target);
        attach_bottom(g1, o1);
        attach_top(g1, iA);
        attach_bottom(g2, o2);
        attach_top(g2, iB);
        attach_bottom(pg, iAB);
        attach_top(pg, o3);
        g.boards[b].neg_gates = {g1, g2};
        g.boards[b].pos_gate = pg;
        GId e = P(GPart::TensorElim);
        GId wtop = W(j.source);
        attach_bottom(e, wtop);
        attach_top(e, o1);
        attach_top(e, o2);
        return {wtop, o3};
      }
      case Term::Phi0: {
        GId b = (GId)g.boards.size();
        g.boards.push_back(GBoard{region, {}, -1, true});
        GId i1 = W(t_one());
        g.wires[i1].region = b;
        GId ui = add_part(GPart::UnitIntro, b);
        attach_top(ui, i1);
        GId pg = P(GPart::PosGate);
        g.parts[pg].board = b;
        GId o = W(j.target);
        attach_bottom(pg, i1);
        attach_top(pg, o);
        g.boards[b].pos_gate = pg;
        GId ue = P(GPart::UnitElim);
        GId wtop = W(j.source);
        attach_bottom(ue, wtop);
        g.dotted.push_back({ue, o});
        return {wtop, o};
      }
      case Term::Dist: {
        // A (x) (B (%) C) -> (A (x) B) (%) C
        GId e = P(GPart::TensorElim), pe = P(GPart::ParElim);
        GId ti = P(GPart::TensorIntro), pi = P(GPart::ParIntro);
        GId w1 = W(j.source), a = W(A), bc = W(t_par(B, C)), b1 = W(B), c1 = W(C),
            ab = W(t_tensor(A, B)), w2 = W(j.target);
        attach_bottom(e, w1);
        attach_top(e, a);
        attach_top(e, bc);
        attach_bottom(pe, bc);
        attach_top(pe, b1);
        attach_top(pe, c1);
        attach_bottom(ti, a);
        attach_bottom(ti, b1);
        attach_top(ti, ab);
        attach_bottom(pi, ab);
        attach_bottom(pi, c1);
        attach_top(pi, w2);
        return {w1, w2};
      }
      case Term::DistP: {
        // (A (%) B) (x) C -> A (%) (B (x) C)
        GId e = P(GPart::TensorElim), pe = P(GPart::ParElim);
        GId ti = P(GPart::TensorIntro), pi = P(GPart::ParIntro);
        GId w1 = W(j.source), abp = W(t_par(A, B)), c1 = W(C), a = W(A), b1 = W(B),
            bc = W(t_tensor(B, C)), w2 = W(j.target);
        attach_bottom(e, w1);
        attach_top(e, abp);
        attach_top(e, c1);
        attach_bottom(pe, abp);
        attach_top(pe, a);
        attach_top(pe, b1);
        attach_bottom(ti, b1);
        attach_bottom(ti, c1);
        attach_top(ti, bc);
        attach_bottom(pi, a);
        attach_bottom(pi, bc);
        attach_top(pi, w2);
        return {w1, w2};
      }
      case Term::Tau: {
        GId ue = P(GPart::UnitElim), cap = P(GPart::Cap), pi = P(GPart::ParIntro);
        GId w1 = W(j.source), la = W(A), ld = W(t_dual(A)), w2 = W(j.target);
        attach_bottom(ue, w1);
        attach_top(cap, la);
        attach_top(cap, ld);
        attach_bottom(pi, la);
        attach_bottom(pi, ld);
        attach_top(pi, w2);
        g.dotted.push_back({ue, la});
        return {w1, w2};
      }
      case Term::Gamma: {
        GId e = P(GPart::TensorElim), cup = P(GPart::Cup), ci = P(GPart::CounitIntro);
        GId w1 = W(j.source), ld = W(t_dual(A)), la = W(A), w2 = W(j.target);
        attach_bottom(e, w1);
        attach_top(e, ld);
        attach_top(e, la);
        attach_bottom(cup, ld);
        attach_bottom(cup, la);
        attach_top(ci, w2);
        g.dotted.push_back({ci, la});
        return {w1, w2};
      }
      case Term::AssocT:
      case Term::AssocP: {
        bool tensor = t->kind == Term::AssocT;
        auto ek = tensor ? GPart::TensorElim : GPart::ParElim;
        auto ik = tensor ? GPart::TensorIntro : GPart::ParIntro;
        auto pr = [&](TypeP x, TypeP y) { return tensor ? t_tensor(x, y) : t_par(x, y); };
        GId e1 = P(ek), e2 = P(ek), i1 = P(ik), i2 = P(ik);
        GId w1 = W(j.source), ab = W(pr(A, B)), c1 = W(C), a = W(A), b1 = W(B),
            bc = W(pr(B, C)), w2 = W(j.target);
        attach_bottom(e1, w1);
        attach_top(e1, ab);
        attach_top(e1, c1);
        attach_bottom(e2, ab);
        attach_top(e2, a);
        attach_top(e2, b1);
        attach_bottom(i1, b1);
        attach_bottom(i1, c1);
        attach_top(i1, bc);
        attach_bottom(i2, a);
        attach_bottom(i2, bc);
        attach_top(i2, w2);
        return {w1, w2};
      }
      case Term::AssocTInv:
      case Term::AssocPInv: {
        bool tensor = t->kind == Term::AssocTInv;
        auto ek = tensor ? GPart::TensorElim : GPart::ParElim;
        auto ik = tensor ? GPart::TensorIntro : GPart::ParIntro;
        auto pr = [&](TypeP x, TypeP y) { return tensor ? t_tensor(x, y) : t_par(x, y); };
        GId e1 = P(ek), e2 = P(ek), i1 = P(ik), i2 = P(ik);
        GId w1 = W(j.source), a = W(A), bc = W(pr(B, C)), b1 = W(B), c1 = W(C),
            ab = W(pr(A, B)), w2 = W(j.target);
        attach_bottom(e1, w1);
        attach_top(e1, a);
        attach_top(e1, bc);
        attach_bottom(e2, bc);
        attach_top(e2, b1);
        attach_top(e2, c1);
        attach_bottom(i1, a);
        attach_bottom(i1, b1);
        attach_top(i1, ab);
        attach_bottom(i2, ab);
        attach_bottom(i2, c1);
        attach_top(i2, w2);
        return {w1, w2};
      }
      case Term::SymT:
      case Term::SymP: {
        bool tensor = t->kind == Term::SymT;
        GId e = P(tensor ? GPart::TensorElim : GPart::ParElim);
        GId i = P(tensor ? GPart::TensorIntro : GPart::ParIntro);
        GId w1 = W(j.source), a = W(A), b1 = W(B), w2 = W(j.target);
        attach_bottom(e, w1);
        attach_top(e, a);
        attach_top(e, b1);
        attach_bottom(i, b1);  // crossed
        attach_bottom(i, a);
        attach_top(i, w2);
        return {w1, w2};
      }
      case Term::LUnitT:
      case Term::RUnitT: {
        bool left = t->kind == Term::LUnitT;
        GId e = P(GPart::TensorElim), ue = P(GPart::UnitElim);
        GId w1 = W(j.source), u = W(t_one()), a = W(A);
        attach_bottom(e, w1);
        if (left) {
          attach_top(e, u);
          attach_top(e, a);
        } else {
          attach_top(e, a);
          attach_top(e, u);
        }
        attach_bottom(ue, u);
        g.dotted.push_back({ue, a});
        return {w1, a};
      }
      case Term::LUnitTInv:
      case Term::RUnitTInv: {
        bool left = t->kind == Term::LUnitTInv;
        GId i = P(GPart::TensorIntro), ui = P(GPart::UnitIntro);
        GId u = W(t_one()), a = W(A), w2 = W(j.target);
        attach_top(ui, u);
        if (left) {
          attach_bottom(i, u);
          attach_bottom(i, a);
        } else {
          attach_bottom(i, a);
          attach_bottom(i, u);
        }
        attach_top(i, w2);
        return {a, w2};
      }
      case Term::LUnitP:
      case Term::RUnitP: {
        bool left = t->kind == Term::LUnitP;
        GId e = P(GPart::ParElim), ce = P(GPart::CounitElim);
        GId w1 = W(j.source), u = W(t_bot()), a = W(A);
        attach_bottom(e, w1);
        if (left) {
          attach_top(e, u);
          attach_top(e, a);
        } else {
          attach_top(e, a);
          attach_top(e, u);
        }
        attach_bottom(ce, u);
        return {w1, a};
      }
      case Term::LUnitPInv:
      case Term::RUnitPInv: {
        bool left = t->kind == Term::LUnitPInv;
        GId i = P(GPart::ParIntro), ci = P(GPart::CounitIntro);
        GId u = W(t_bot()), a = W(A), w2 = W(j.target);
        attach_top(ci, u);
        if (left) {
          attach_bottom(i, u);
          attach_bottom(i, a);
        } else {
          attach_bottom(i, a);
          attach_bottom(i, u);
        }
        attach_top(i, w2);
        g.dotted.push_back({ci, a});
        return {a, w2};
      }
      default: throw Error("term_to_graph: unexpected kind");
    }
  }
};

}  // namespace

Graph term_to_graph(const Judgement& j) {
  Builder b;
  auto frag = b.build(j.term, -1);
  b.g.wires[frag.top].top = {GEnd::OuterTop, -1, -1, 0};
  b.g.outer_top.push_back(frag.top);
  b.g.wires[frag.bottom].bottom = {GEnd::OuterBottom, -1, -1, 0};
  b.g.outer_bottom.push_back(frag.bottom);
  return b.g;
}

// ---- compaction ----

namespace {

Graph compact(const Graph& g) {
  Graph out;
  std::vector<GId> wmap(g.wires.size(), -1), pmap(g.parts.size(), -1), bmap(g.boards.size(), -1);
  for (size_t i = 0; i < g.boards.size(); i++)
    if (g.boards[i].alive) {
      bmap[i] = (GId)out.boards.size();
      out.boards.push_back(g.boards[i]);
    }
  for (size_t i = 0; i < g.parts.size(); i++)
    if (g.parts[i].alive) {
      pmap[i] = (GId)out.parts.size();
      out.parts.push_back(g.parts[i]);
    }
  for (size_t i = 0; i < g.wires.size(); i++)
    if (g.wires[i].alive) {
      wmap[i] = (GId)out.wires.size();
      out.wires.push_back(g.wires[i]);
    }
  auto mb = [&](GId b) { return b < 0 ? b : bmap[b]; };
  for (auto& b : out.boards) {
    b.parent = mb(b.parent);
    for (auto& gp : b.neg_gates) gp = pmap[gp];
    if (b.pos_gate >= 0) b.pos_gate = pmap[b.pos_gate];
  }
  for (auto& p : out.parts) {
    p.region = mb(p.region);
    p.board = mb(p.board);
    for (auto& w : p.top_ports) w = wmap[w];
    for (auto& w : p.bottom_ports) w = wmap[w];
  }
  auto me = [&](GEnd e) {
    if (e.kind == GEnd::TopPort || e.kind == GEnd::BottomPort) e.part = pmap[e.part];
    return e;
  };
  for (auto& w : out.wires) {
    w.region = mb(w.region);
    w.top = me(w.top);
    w.bottom = me(w.bottom);
  }
  for (GId w : g.outer_top) out.outer_top.push_back(wmap[w]);
  for (GId w : g.outer_bottom) out.outer_bottom.push_back(wmap[w]);
  for (size_t i = 0; i < out.outer_top.size(); i++)
    out.wires[out.outer_top[i]].top = {GEnd::OuterTop, -1, -1, (int)i};
  for (size_t i = 0; i < out.outer_bottom.size(); i++)
    out.wires[out.outer_bottom[i]].bottom = {GEnd::OuterBottom, -1, -1, (int)i};
  for (auto& d : g.dotted)
    if (g.parts[d.terminal].alive && g.wires[d.host].alive)
      out.dotted.push_back({pmap[d.terminal], wmap[d.host]});
  return out;
}

struct Mutator {
  Graph g;

  void redirect(const GEnd& e, GId to) {
    switch (e.kind) {
      case GEnd::TopPort: g.parts[e.part].top_ports[e.port] = to; break;
      case GEnd::BottomPort: g.parts[e.part].bottom_ports[e.port] = to; break;
      case GEnd::OuterTop: g.outer_top[e.index] = to; break;
      case GEnd::OuterBottom: g.outer_bottom[e.index] = to; break;
      case GEnd::None: break;
    }
  }

  // fuse upper wire's bottom to lower wire's bottom end; keeps upper's id
  void merge(GId upper, GId lower) {
    if (upper == lower) throw Error("graph merge: closed loop");
    g.wires[upper].bottom = g.wires[lower].bottom;
    redirect(g.wires[upper].bottom, upper);
    for (auto& d : g.dotted)
      if (d.host == lower) d.host = upper;
    g.wires[lower].alive = false;
  }

  void kill_part(GId p) {
    g.parts[p].alive = false;
    g.dotted.erase(
        std::remove_if(g.dotted.begin(), g.dotted.end(),
                       [&](const GDotted& d) { return d.terminal == p; }),
        g.dotted.end());
  }

  // rings on a dying wire move to a provisional host; the final placement
  // pass re-seats every ring anyway
  void retire_wire(GId w) {
    bool hosted = false;
    for (auto& d : g.dotted)
      if (d.host == w) hosted = true;
    if (hosted) {
      GId repl = -1;
      for (GId u = 0; u < (GId)g.wires.size(); u++)
        if (u != w && g.wires[u].alive && g.wires[u].region == g.wires[w].region) {
          repl = u;
          break;
        }
      if (repl < 0)
        for (GId u = 0; u < (GId)g.wires.size(); u++)
          if (u != w && g.wires[u].alive) {
            repl = u;
            break;
          }
      if (repl >= 0)
        for (auto& d : g.dotted)
          if (d.host == w) d.host = repl;
    }
    g.wires[w].alive = false;
  }

  bool is_port(const GEnd& e, GPart::Kind k, int port, bool top_side) const {
    if (top_side && e.kind != GEnd::TopPort) return false;
    if (!top_side && e.kind != GEnd::BottomPort) return false;
    if (!g.parts[e.part].alive) return false;
    if (g.parts[e.part].kind != k) return false;
    return port < 0 || e.port == port;
  }

  bool beta_step() {
    for (size_t wi = 0; wi < g.wires.size(); wi++) {
      if (!g.wires[wi].alive) continue;
      const GEnd& t = g.wires[wi].top;
      const GEnd& b = g.wires[wi].bottom;
      // intro over elim (tensor / par)
      for (auto [ik, ek] : {std::pair{GPart::TensorIntro, GPart::TensorElim},
                            std::pair{GPart::ParIntro, GPart::ParElim}}) {
        if (is_port(t, ik, 0, false) && is_port(b, ek, 0, true)) {
          GId I = t.part, E = b.part;
          GId a1 = g.parts[I].top_ports[0], a2 = g.parts[I].top_ports[1];
          GId b1 = g.parts[E].bottom_ports[0], b2 = g.parts[E].bottom_ports[1];
          merge(a1, b1);
          merge(a2, b2);
          kill_part(I);
          kill_part(E);
          retire_wire(wi);
          return true;
        }
      }
      // unit intro over unit elim
      if (is_port(t, GPart::UnitIntro, 0, false) && is_port(b, GPart::UnitElim, 0, true)) {
        kill_part(t.part);
        kill_part(b.part);
        retire_wire(wi);
        return true;
      }
      if (is_port(t, GPart::CounitIntro, 0, false) && is_port(b, GPart::CounitElim, 0, true)) {
        kill_part(t.part);
        kill_part(b.part);
        retire_wire(wi);
        return true;
      }
      // positive gate over negative gate: fuse boards
      if (is_port(t, GPart::PosGate, 0, false) && is_port(b, GPart::NegGate, 0, true)) {
        GId pg = t.part, ng = b.part;
        GId P = g.parts[pg].board, Q = g.parts[ng].board;
        if (P == Q) throw Error("beta: board feeding itself");
        GId pin = g.parts[pg].top_ports[0];
        GId nin = g.parts[ng].bottom_ports[0];
        merge(pin, nin);
        // splice P's gate row into Q's at ng's position
        auto& qg = g.boards[Q].neg_gates;
        auto it = std::find(qg.begin(), qg.end(), ng);
        if (it == qg.end()) throw Error("beta: gate not on its board");
        std::vector<GId> row(g.boards[P].neg_gates.begin(), g.boards[P].neg_gates.end());
        it = qg.erase(it);
        qg.insert(it, row.begin(), row.end());
        // reparent P's contents into Q
        for (auto& w : g.wires)
          if (w.alive && w.region == P) w.region = Q;
        for (auto& p : g.parts)
          if (p.alive && p.region == P) p.region = Q;
        for (auto& bd : g.boards)
          if (bd.alive && bd.parent == P) bd.parent = Q;
        for (GId gg : row) g.parts[gg].board = Q;
        g.boards[P].alive = false;
        kill_part(pg);
        kill_part(ng);
        retire_wire(wi);
        return true;
      }
      // diode zigzag: cap leg into cup leg
      if (t.kind == GEnd::BottomPort && b.kind == GEnd::TopPort &&
          g.parts[t.part].alive && g.parts[b.part].alive &&
          g.parts[t.part].kind == GPart::Cap && g.parts[b.part].kind == GPart::Cup) {
        GId cap = t.part, cup = b.part;
        // cap ports: 0 = A, 1 = A^; cup ports: 0 = A^, 1 = A
        int cp = t.port, up = b.port;
        if ((cp == 1 && up == 0) || (cp == 0 && up == 1)) {
          GId cap_other = g.parts[cap].bottom_ports[1 - cp];
          GId cup_other = g.parts[cup].top_ports[1 - up];
          // the surviving wire runs from cup_other's top to cap_other's bottom
          GWire nw;
          nw.type = g.wires[cap_other].type;
          nw.region = g.wires[cap_other].region;
          nw.top = g.wires[cup_other].top;
          nw.bottom = g.wires[cap_other].bottom;
          g.wires.push_back(nw);
          GId nid = (GId)(g.wires.size() - 1);
          redirect(g.wires[nid].top, nid);
          redirect(g.wires[nid].bottom, nid);
          for (auto& d : g.dotted)
            if (d.host == cap_other || d.host == cup_other) d.host = nid;
          g.wires[cap_other].alive = false;
          g.wires[cup_other].alive = false;
          retire_wire(wi);
          kill_part(cap);
          kill_part(cup);
          return true;
        }
      }
    }
    return false;
  }
};

}  // namespace

Graph beta_normalize(const Graph& g) {
  Mutator m{g};
  while (m.beta_step()) {
  }
  Graph out = compact(m.g);
  if (!out.dotted.empty()) place_dotted_links(out);
  return out;
}

void place_dotted_links(Graph& g) {
  if (g.dotted.empty()) return;
  // component structure per region (child boards collapse to one node)
  std::map<GId, std::map<std::string, int>> dsu_ids;
  std::map<GId, std::vector<int>> dsu_parent;
  auto node_name = [&](GId part) -> std::string {
    const GPart& pt = g.parts[part];
    if (pt.kind == GPart::NegGate || pt.kind == GPart::PosGate)
      return "board" + std::to_string(pt.board);
    return "part" + std::to_string(part);
  };
  auto node_id = [&](GId region, const std::string& name) {
    auto& ids = dsu_ids[region];
    auto it = ids.find(name);
    if (it != ids.end()) return it->second;
    int id = (int)ids.size();
    ids[name] = id;
    dsu_parent[region].push_back(id);
    return id;
  };
  std::function<int(GId, int)> find = [&](GId region, int x) {
    auto& par = dsu_parent[region];
    while (par[x] != x) x = par[x] = par[par[x]];
    return x;
  };
  auto unite = [&](GId region, int a, int b) {
    dsu_parent[region][find(region, a)] = find(region, b);
  };
  auto end_node = [&](GId region, GId wire, const GEnd& e) -> int {
    if (e.kind == GEnd::TopPort || e.kind == GEnd::BottomPort)
      return node_id(region, node_name(e.part));
    return node_id(region,
                   "outer_w" + std::to_string(wire) + (e.kind == GEnd::OuterTop ? "t" : "b"));
  };
  for (GId w = 0; w < (GId)g.wires.size(); w++) {
    if (!g.wires[w].alive) continue;
    GId r = g.wires[w].region;
    unite(r, end_node(r, w, g.wires[w].top), end_node(r, w, g.wires[w].bottom));
  }
  std::vector<GId> terminals;
  for (auto& d : g.dotted) terminals.push_back(d.terminal);
  std::vector<std::vector<GId>> candidates;
  for (GId t : terminals) {
    GId region = g.parts[t].region;
    int tn = node_id(region, node_name(t));
    std::vector<GId> main, rest;
    for (GId w = 0; w < (GId)g.wires.size(); w++) {
      if (!g.wires[w].alive || g.wires[w].region != region) continue;
      int wn = end_node(region, w, g.wires[w].top);
      if (find(region, wn) != find(region, tn))
        main.push_back(w);
      else
        rest.push_back(w);
    }
    main.insert(main.end(), rest.begin(), rest.end());
    if (main.empty()) throw Error("place_dotted_links: no host wire available");
    candidates.push_back(std::move(main));
  }
  std::vector<size_t> pick(terminals.size(), 0);
  auto apply = [&]() {
    g.dotted.clear();
    for (size_t i = 0; i < terminals.size(); i++)
      g.dotted.push_back({terminals[i], candidates[i][pick[i]]});
  };
  auto switching_ok = [&]() {
    for (auto& v : check_wellformed(g).violations)
      if (v.find("switching") != std::string::npos) return false;
    return true;
  };
  apply();
  long attempts = 0;
  while (!switching_ok()) {
    size_t i = 0;
    for (; i < pick.size(); i++) {
      if (++pick[i] < candidates[i].size()) break;
      pick[i] = 0;
    }
    if (i == pick.size() || ++attempts > 20000)
      throw Error("place_dotted_links: no switching-correct placement found");
    apply();
  }
}

// ---- eta expansion ----

namespace {

struct Expander {
  Graph g;

  bool flat_side(const GEnd& e) const {
    if (e.kind != GEnd::TopPort) return false;
    auto k = g.parts[e.part].kind;
    return k == GPart::DeltaLens || k == GPart::EpsLens || k == GPart::Duplicator ||
           k == GPart::Eliminator;
  }

  bool port_of(const GEnd& e, GPart::Kind k, bool top_side) const {
    if (top_side && e.kind != GEnd::TopPort) return false;
    if (!top_side && e.kind != GEnd::BottomPort) return false;
    return g.parts[e.part].kind == k;
  }

  GId add_wire(TypeP t, GId region) {
    GWire w;
    w.type = std::move(t);
    w.region = region;
    g.wires.push_back(std::move(w));
    return (GId)(g.wires.size() - 1);
  }

  GId add_part(GPart::Kind k, GId region) {
    GPart p;
    p.kind = k;
    p.region = region;
    g.parts.push_back(std::move(p));
    return (GId)(g.parts.size() - 1);
  }

  void redirect(const GEnd& e, GId to) {
    switch (e.kind) {
      case GEnd::TopPort: g.parts[e.part].top_ports[e.port] = to; break;
      case GEnd::BottomPort: g.parts[e.part].bottom_ports[e.port] = to; break;
      case GEnd::OuterTop: g.outer_top[e.index] = to; break;
      case GEnd::OuterBottom: g.outer_bottom[e.index] = to; break;
      case GEnd::None: break;
    }
  }

  void attach_top(GId part, GId wire) {
    int port = (int)g.parts[part].bottom_ports.size();
    g.parts[part].bottom_ports.push_back(wire);
    g.wires[wire].top = {GEnd::BottomPort, part, port, -1};
  }
  void attach_bottom(GId part, GId wire) {
    int port = (int)g.parts[part].top_ports.size();
    g.parts[part].top_ports.push_back(wire);
    g.wires[wire].bottom = {GEnd::TopPort, part, port, -1};
  }

  // split w, returning the new lower segment (same type/region); w keeps its
  // top end, the new wire takes the old bottom end
  GId split(GId w) {
    GId w2 = add_wire(g.wires[w].type, g.wires[w].region);
    g.wires[w2].bottom = g.wires[w].bottom;
    redirect(g.wires[w2].bottom, w2);
    g.wires[w].bottom = {GEnd::None, -1, -1, -1};
    return w2;
  }

  // returns true if expanded
  bool expand(GId wi) {
    if (!g.wires[wi].alive) return false;
    const TypeP T = g.wires[wi].type;
    const GId region = g.wires[wi].region;
    const GEnd wtop = g.wires[wi].top;
    const GEnd wbot = g.wires[wi].bottom;
    switch (T->kind) {
      case Type::Atom:
      case Type::Meta: return false;
      case Type::Tensor:
      case Type::Par: {
        bool tensor = T->kind == Type::Tensor;
        auto ik = tensor ? GPart::TensorIntro : GPart::ParIntro;
        auto ek = tensor ? GPart::TensorElim : GPart::ParElim;
        if (port_of(wtop, ik, false) || port_of(wbot, ek, true)) return false;
        GId w2 = split(wi);
        GId e = add_part(ek, region), i = add_part(ik, region);
        GId a = add_wire(T->a, region), b = add_wire(T->b, region);
        attach_bottom(e, wi);
        attach_top(e, a);
        attach_top(e, b);
        attach_bottom(i, a);
        attach_bottom(i, b);
        attach_top(i, w2);
        return true;
      }
      case Type::One: {
        if (port_of(wtop, GPart::UnitIntro, false) || port_of(wbot, GPart::UnitElim, true))
          return false;
        GId w2 = split(wi);
        GId ue = add_part(GPart::UnitElim, region), ui = add_part(GPart::UnitIntro, region);
        attach_bottom(ue, wi);
        attach_top(ui, w2);
        g.dotted.push_back({ue, w2});
        return true;
      }
      case Type::Bot: {
        if (port_of(wtop, GPart::CounitIntro, false) || port_of(wbot, GPart::CounitElim, true))
          return false;
        GId w2 = split(wi);
        GId ce = add_part(GPart::CounitElim, region), ci = add_part(GPart::CounitIntro, region);
        attach_bottom(ce, wi);
        attach_top(ci, w2);
        g.dotted.push_back({ci, wi});
        return true;
      }
      case Type::Bang: {
        if (port_of(wtop, GPart::PosGate, false) || port_of(wbot, GPart::NegGate, true))
          return false;
        if (flat_side(wbot)) return false;
        GId w2 = split(wi);
        GId b = (GId)g.boards.size();
        g.boards.push_back(GBoard{region, {}, -1, true});
        GId inner = add_wire(T->a, b);
        GId ng = add_part(GPart::NegGate, region), pg = add_part(GPart::PosGate, region);
        g.parts[ng].board = g.parts[pg].board = b;
        attach_bottom(ng, wi);
        attach_top(ng, inner);
        attach_bottom(pg, inner);
        attach_top(pg, w2);
        g.boards[b].neg_gates.push_back(ng);
        g.boards[b].pos_gate = pg;
        return true;
      }
      case Type::Dual: {
        if (port_of(wtop, GPart::Cap, false) || port_of(wbot, GPart::Cup, true))
          return false;
        GId w2 = split(wi);
        GId cup = add_part(GPart::Cup, region), cap = add_part(GPart::Cap, region);
        GId m = add_wire(T->a, region);
        // cup top ports: [A^, A]; cap bottom ports: [A, A^]
        attach_bottom(cup, wi);
        g.wires[m].bottom = {GEnd::TopPort, cup, 1, -1};
        g.parts[cup].top_ports.push_back(m);
        g.wires[m].top = {GEnd::BottomPort, cap, 0, -1};
        g.parts[cap].bottom_ports.push_back(m);
        attach_top(cap, w2);  // becomes bottom port 1 (the A^ leg)
        return true;
      }
    }
    return false;
  }

  void run() {
    for (;;) {
      // outermost first: smallest region depth, then wire id
      std::vector<GId> order;
      for (GId i = 0; i < (GId)g.wires.size(); i++)
        if (g.wires[i].alive) order.push_back(i);
      std::sort(order.begin(), order.end(), [&](GId x, GId y) {
        int dx = depth(g.wires[x].region), dy = depth(g.wires[y].region);
        if (dx != dy) return dx < dy;
        return x < y;
      });
      bool any = false;
      for (GId i : order)
        if (expand(i)) {
          any = true;
          break;
        }
      if (!any) return;
    }
  }

  int depth(GId region) const {
    int d = 0;
    while (region >= 0) {
      region = g.boards[region].parent;
      d++;
    }
    return d;
  }
};

}  // namespace

Graph eta_expand(const Graph& g) {
  Expander e{g};
  e.run();
  return compact(e.g);
}

Graph canonicalize_graph(const Graph& g0) {
  Graph g = compact(g0);
  // merge duplicator chains into multi-duplicators
  bool merged = true;
  while (merged) {
    merged = false;
    for (GId p = 0; p < (GId)g.parts.size() && !merged; p++) {
      if (!g.parts[p].alive || g.parts[p].kind != GPart::Duplicator) continue;
      for (size_t leg = 0; leg < g.parts[p].bottom_ports.size(); leg++) {
        GId w = g.parts[p].bottom_ports[leg];
        const GEnd& b = g.wires[w].bottom;
        if (b.kind == GEnd::TopPort && g.parts[b.part].alive &&
            g.parts[b.part].kind == GPart::Duplicator) {
          GId q = b.part;
          std::vector<GId> legs;
          for (size_t k = 0; k < g.parts[p].bottom_ports.size(); k++) {
            if (k == leg) {
              for (GId lw : g.parts[q].bottom_ports) legs.push_back(lw);
            } else
              legs.push_back(g.parts[p].bottom_ports[k]);
          }
          g.parts[p].bottom_ports = legs;
          for (size_t k = 0; k < legs.size(); k++)
            g.wires[legs[k]].top = {GEnd::BottomPort, p, (int)k, -1};
          g.parts[q].alive = false;
          g.wires[w].alive = false;
          merged = true;
          break;
        }
      }
    }
  }
  return compact(g);
}

Graph normal_graph_of(const Judgement& j) {
  return canonicalize_graph(eta_expand(beta_normalize(term_to_graph(j))));
}

// ---- well-formedness ----

namespace {

const char* kind_name(GPart::Kind k) {
  switch (k) {
    case GPart::TensorIntro: return "tensorI";
    case GPart::TensorElim: return "tensorE";
    case GPart::ParIntro: return "parI";
    case GPart::ParElim: return "parE";
    case GPart::UnitIntro: return "unitI";
    case GPart::UnitElim: return "unitE";
    case GPart::CounitIntro: return "counitI";
    case GPart::CounitElim: return "counitE";
    case GPart::Cap: return "cap";
    case GPart::Cup: return "cup";
    case GPart::DeltaLens: return "delta";
    case GPart::EpsLens: return "eps";
    case GPart::Duplicator: return "dup";
    case GPart::Eliminator: return "elim";
    case GPart::NegGate: return "neggate";
    case GPart::PosGate: return "posgate";
  }
  return "?";
}

}  // namespace

WellformedReport check_wellformed(const Graph& g) {
  WellformedReport rep;
  auto bad = [&](const std::string& s) { rep.violations.push_back(s); };

  // endpoint/port consistency
  for (GId w = 0; w < (GId)g.wires.size(); w++) {
    if (!g.wires[w].alive) continue;
    for (auto [e, top_end] : {std::pair{g.wires[w].top, true}, {g.wires[w].bottom, false}}) {
      switch (e.kind) {
        case GEnd::None: bad("wire " + std::to_string(w) + " has a free end"); break;
        case GEnd::TopPort:
          if (top_end) bad("wire " + std::to_string(w) + " top end on a top-side port");
          if (!g.parts[e.part].alive || g.parts[e.part].top_ports[e.port] != w)
            bad("wire " + std::to_string(w) + " dangling top-port reference");
          break;
        case GEnd::BottomPort:
          if (!top_end) bad("wire " + std::to_string(w) + " bottom end on a bottom-side port");
          if (!g.parts[e.part].alive || g.parts[e.part].bottom_ports[e.port] != w)
            bad("wire " + std::to_string(w) + " dangling bottom-port reference");
          break;
        case GEnd::OuterTop:
          if (!top_end || g.outer_top[e.index] != w)
            bad("wire " + std::to_string(w) + " bad outer-top reference");
          break;
        case GEnd::OuterBottom:
          if (top_end || g.outer_bottom[e.index] != w)
            bad("wire " + std::to_string(w) + " bad outer-bottom reference");
          break;
      }
    }
  }

  // part-side port consistency
  for (GId p = 0; p < (GId)g.parts.size(); p++) {
    const GPart& pt = g.parts[p];
    if (!pt.alive) continue;
    for (size_t k = 0; k < pt.top_ports.size(); k++) {
      GId w = pt.top_ports[k];
      const GEnd& e = g.wires[w].bottom;
      if (!g.wires[w].alive || e.kind != GEnd::TopPort || e.part != p || e.port != (int)k)
        bad("part " + std::to_string(p) + " top port " + std::to_string(k) +
            " not referenced back by its wire");
    }
    for (size_t k = 0; k < pt.bottom_ports.size(); k++) {
      GId w = pt.bottom_ports[k];
      const GEnd& e = g.wires[w].top;
      if (!g.wires[w].alive || e.kind != GEnd::BottomPort || e.part != p || e.port != (int)k)
        bad("part " + std::to_string(p) + " bottom port " + std::to_string(k) +
            " not referenced back by its wire");
    }
  }

  // part typing and arity
  for (GId p = 0; p < (GId)g.parts.size(); p++) {
    const GPart& pt = g.parts[p];
    if (!pt.alive) continue;
    auto ty = [&](GId w) { return g.wires[w].type; };
    auto expect = [&](bool cond, const std::string& what) {
      if (!cond) bad("part " + std::to_string(p) + " (" + kind_name(pt.kind) + "): " + what);
    };
    size_t nt = pt.top_ports.size(), nb = pt.bottom_ports.size();
    switch (pt.kind) {
      case GPart::TensorIntro:
      case GPart::ParIntro: {
        expect(nt == 2 && nb == 1, "arity");
        if (nt == 2 && nb == 1) {
          auto out = ty(pt.bottom_ports[0]);
          bool tensor = pt.kind == GPart::TensorIntro;
          expect(out->kind == (tensor ? Type::Tensor : Type::Par), "output type");
          expect(type_eq(out->a, ty(pt.top_ports[0])) && type_eq(out->b, ty(pt.top_ports[1])),
                 "component types");
        }
        break;
      }
      case GPart::TensorElim:
      case GPart::ParElim: {
        expect(nt == 1 && nb == 2, "arity");
        if (nt == 1 && nb == 2) {
          auto in = ty(pt.top_ports[0]);
          bool tensor = pt.kind == GPart::TensorElim;
          expect(in->kind == (tensor ? Type::Tensor : Type::Par), "input type");
          expect(type_eq(in->a, ty(pt.bottom_ports[0])) && type_eq(in->b, ty(pt.bottom_ports[1])),
                 "component types");
        }
        break;
      }
      case GPart::UnitIntro:
        expect(nt == 0 && nb == 1 && ty(pt.bottom_ports[0])->kind == Type::One, "shape");
        break;
      case GPart::UnitElim:
        expect(nt == 1 && nb == 0 && ty(pt.top_ports[0])->kind == Type::One, "shape");
        break;
      case GPart::CounitIntro:
        expect(nt == 0 && nb == 1 && ty(pt.bottom_ports[0])->kind == Type::Bot, "shape");
        break;
      case GPart::CounitElim:
        expect(nt == 1 && nb == 0 && ty(pt.top_ports[0])->kind == Type::Bot, "shape");
        break;
      case GPart::Cap:
        expect(nt == 0 && nb == 2, "arity");
        if (nb == 2)
          expect(type_eq(t_dual(ty(pt.bottom_ports[0])), ty(pt.bottom_ports[1])), "leg types");
        break;
      case GPart::Cup:
        expect(nt == 2 && nb == 0, "arity");
        if (nt == 2) expect(type_eq(ty(pt.top_ports[0]), t_dual(ty(pt.top_ports[1]))), "leg types");
        break;
      case GPart::DeltaLens:
        expect(nt == 1 && nb == 1, "arity");
        if (nt == 1 && nb == 1) {
          expect(ty(pt.top_ports[0])->kind == Type::Bang, "input bang");
          expect(type_eq(t_bang(ty(pt.top_ports[0])), ty(pt.bottom_ports[0])), "output type");
          // the leg must sit on a negative gate
          const GEnd& le = g.wires[pt.bottom_ports[0]].bottom;
          expect(le.kind == GEnd::TopPort && g.parts[le.part].kind == GPart::NegGate,
                 "delta leg not on a negative gate");
        }
        break;
      case GPart::EpsLens:
        expect(nt == 1 && nb == 1, "arity");
        if (nt == 1 && nb == 1)
          expect(type_eq(ty(pt.top_ports[0]), t_bang(ty(pt.bottom_ports[0]))), "types");
        break;
      case GPart::Duplicator: {
        expect(nt == 1 && nb >= 2, "arity");
        if (nt == 1) {
          expect(ty(pt.top_ports[0])->kind == Type::Bang, "duplicator on !A only");
          for (GId lw : pt.bottom_ports) expect(type_eq(ty(lw), ty(pt.top_ports[0])), "leg types");
        }
        break;
      }
      case GPart::Eliminator:
        expect(nt == 1 && nb == 1, "arity");
        if (nt == 1 && nb == 1) {
          expect(ty(pt.top_ports[0])->kind == Type::Bang, "input bang");
          expect(ty(pt.bottom_ports[0])->kind == Type::One, "output unit");
        }
        break;
      case GPart::NegGate:
      case GPart::PosGate: {
        expect(nt == 1 && nb == 1, "arity");
        expect(pt.board >= 0 && g.boards[pt.board].alive, "gate board");
        if (nt == 1 && nb == 1) {
          GId outer = pt.kind == GPart::NegGate ? pt.top_ports[0] : pt.bottom_ports[0];
          GId inner = pt.kind == GPart::NegGate ? pt.bottom_ports[0] : pt.top_ports[0];
          expect(type_eq(ty(outer), t_bang(ty(inner))), "gate types");
          if (pt.board >= 0) {
            expect(g.wires[inner].region == pt.board, "gate inner region");
            expect(g.wires[outer].region == g.boards[pt.board].parent, "gate outer region");
          }
        }
        break;
      }
    }
  }

  // boards form a tree; gates registered
  for (GId b = 0; b < (GId)g.boards.size(); b++) {
    if (!g.boards[b].alive) continue;
    GId a = g.boards[b].parent;
    std::set<GId> seen{b};
    while (a >= 0) {
      if (!seen.insert(a).second) {
        bad("board nesting cycle at " + std::to_string(b));
        break;
      }
      a = g.boards[a].parent;
    }
    if (g.boards[b].pos_gate < 0 || !g.parts[g.boards[b].pos_gate].alive)
      bad("board " + std::to_string(b) + " lacks a positive gate");
    for (GId ng : g.boards[b].neg_gates)
      if (!g.parts[ng].alive || g.parts[ng].board != b)
        bad("board " + std::to_string(b) + " gate list broken");
  }

  // regions of wire endpoints agree
  for (GId w = 0; w < (GId)g.wires.size(); w++) {
    if (!g.wires[w].alive) continue;
    for (auto& e : {g.wires[w].top, g.wires[w].bottom}) {
      if (e.kind != GEnd::TopPort && e.kind != GEnd::BottomPort) continue;
      const GPart& pt = g.parts[e.part];
      GId expect_region = pt.region;
      // gates: outer side lives in pt.region, inner side in pt.board
      if (pt.kind == GPart::NegGate || pt.kind == GPart::PosGate) {
        bool outer_side = (pt.kind == GPart::NegGate) == (e.kind == GEnd::TopPort);
        expect_region = outer_side ? pt.region : pt.board;
      }
      if (g.wires[w].region != expect_region)
        bad("wire " + std::to_string(w) + " region mismatch at a part");
    }
  }

  // switching condition per region, with dotted links as jump edges
  // nodes: parts in the region (child boards collapse to one node each)
  std::set<GId> regions;
  regions.insert(-1);
  for (GId b = 0; b < (GId)g.boards.size(); b++)
    if (g.boards[b].alive) regions.insert(b);
  for (GId region : regions) {
    // map: part -> node id (child-board gates map to the board's node)
    std::map<std::string, int> node_of;
    auto node_name = [&](GId part) -> std::string {
      const GPart& pt = g.parts[part];
      if (pt.kind == GPart::NegGate || pt.kind == GPart::PosGate) {
        if (pt.board == region) return "part" + std::to_string(part);  // own boundary gate
        return "board" + std::to_string(pt.board);  // child board collapses to one node
      }
      return "part" + std::to_string(part);
    };
    struct Edge {
      int a, b;
      GId via_part = -1;  // for switched premise selection
      int premise = -1;   // 0/1 for switched ports
    };
    std::vector<Edge> edges;
    std::set<int> nodes;
    auto nid = [&](const std::string& s) {
      auto it = node_of.find(s);
      if (it != node_of.end()) return it->second;
      int id = (int)node_of.size();
      node_of[s] = id;
      nodes.insert(id);
      return id;
    };
    auto end_node = [&](GId wire, const GEnd& e) -> int {
      if (e.kind == GEnd::TopPort || e.kind == GEnd::BottomPort) return nid(node_name(e.part));
      // boundary leaves: one node per wire end, stable across calls
      return nid("outer_w" + std::to_string(wire) +
                 (e.kind == GEnd::OuterTop ? "t" : "b"));
    };
    std::vector<GId> switched;  // ParIntro / TensorElim / Duplicator parts here
    // rings subdivide their host wire: the jump lands on a midpoint node
    std::map<GId, std::vector<GId>> rings_on;  // wire -> terminals
    for (auto& d : g.dotted) {
      if (!g.parts[d.terminal].alive || !g.wires[d.host].alive) continue;
      if (g.parts[d.terminal].region != region) continue;
      rings_on[d.host].push_back(d.terminal);
    }
    for (GId w = 0; w < (GId)g.wires.size(); w++) {
      if (!g.wires[w].alive || g.wires[w].region != region) continue;
      // switched premises: the top ports of a ParIntro, the bottom ports of a
      // TensorElim, and the legs of a duplicator (contraction); boards are not
      // involved in the switching
      int via_top = -1, prem_top = -1, via_bot = -1, prem_bot = -1;
      {
        const GEnd& e = g.wires[w].top;
        if (e.kind == GEnd::BottomPort &&
            (g.parts[e.part].kind == GPart::TensorElim ||
             g.parts[e.part].kind == GPart::Duplicator) &&
            g.parts[e.part].region == region) {
          via_top = e.part;
          prem_top = e.port;
        }
      }
      {
        const GEnd& e = g.wires[w].bottom;
        if (e.kind == GEnd::TopPort && g.parts[e.part].kind == GPart::ParIntro &&
            g.parts[e.part].region == region) {
          via_bot = e.part;
          prem_bot = e.port;
        }
      }
      for (int vp : {via_top, via_bot})
        if (vp >= 0 && std::find(switched.begin(), switched.end(), (GId)vp) == switched.end())
          switched.push_back(vp);
      int a = end_node(w, g.wires[w].top);
      int b = end_node(w, g.wires[w].bottom);
      auto it = rings_on.find(w);
      if (it == rings_on.end()) {
        Edge ed{a, b, -1, -1};
        if (via_top >= 0) {
          ed.via_part = via_top;
          ed.premise = prem_top;
        } else if (via_bot >= 0) {
          ed.via_part = via_bot;
          ed.premise = prem_bot;
        }
        edges.push_back(ed);
      } else {
        // chain: top -- mid1 -- ... -- midk -- bottom; jumps attach to mids
        int prev = a;
        for (size_t k = 0; k < it->second.size(); k++) {
          int mid = nid("mid_w" + std::to_string(w) + "_" + std::to_string(k));
          Edge seg{prev, mid, -1, -1};
          if (k == 0 && via_top >= 0) {
            seg.via_part = via_top;
            seg.premise = prem_top;
          }
          edges.push_back(seg);
          edges.push_back({nid(node_name(it->second[k])), mid, -1, -1});
          prev = mid;
        }
        Edge last{prev, b, -1, -1};
        if (via_bot >= 0) {
          last.via_part = via_bot;
          last.premise = prem_bot;
        }
        edges.push_back(last);
      }
    }
    if (edges.empty()) continue;
    std::vector<size_t> radix;
    size_t total = 1;
    for (GId sp : switched) {
      size_t n = g.parts[sp].kind == GPart::ParIntro ? g.parts[sp].top_ports.size()
                                                     : g.parts[sp].bottom_ports.size();
      radix.push_back(n);
      total *= n;
      if (total > 65536) break;
    }
    if (total > 65536) {
      bad("region has too many switchings to enumerate");
      continue;
    }
    for (size_t sw = 0; sw < total; sw++) {
      std::vector<int> choice(switched.size());
      size_t rem = sw;
      for (size_t i = 0; i < switched.size(); i++) {
        choice[i] = (int)(rem % radix[i]);
        rem /= radix[i];
      }
      std::map<int, int> uf;
      std::function<int(int)> find = [&](int x) {
        if (!uf.count(x)) uf[x] = x;
        return uf[x] == x ? x : uf[x] = find(uf[x]);
      };
      bool cyclic = false;
      for (auto& ed : edges) {
        if (ed.via_part >= 0) {
          size_t si =
              std::find(switched.begin(), switched.end(), ed.via_part) - switched.begin();
          if (ed.premise != choice[si]) continue;
        }
        int ra = find(ed.a), rb = find(ed.b);
        if (ra == rb) {
          cyclic = true;
          break;
        }
        uf[ra] = rb;
      }
      if (cyclic) {
        bad("switching cycle in region " + std::to_string(region));
        break;
      }
      std::set<int> roots;
      for (auto& [n, _] : uf) roots.insert(find(n));
      for (int n : nodes)
        if (!uf.count(n)) roots.insert(n);
      if (roots.size() > 1) {
        bad("switching disconnect in region " + std::to_string(region));
        break;
      }
    }
  }

  return rep;
}

// ---- stats ----

GraphStats graph_stats(const Graph& g0) {
  Graph g = canonicalize_graph(g0);
  GraphStats st;
  st.size = g.wire_count();
  for (auto& b : g.boards)
    if (b.alive) st.board_count++;
  for (auto& w : g.wires)
    if (w.alive && w.type->kind == Type::Atom) st.bioriented_count++;
  for (auto& p : g.parts) {
    if (!p.alive || p.kind != GPart::Duplicator) continue;
    BigInt f = 1;
    for (size_t n = 2; n <= p.bottom_ports.size(); n++) f *= (long)n;
    st.dup_scale *= f;
  }
  return st;
}

// ---- canonical certificate / almost_equal ----

namespace {

struct CanonNode {
  // node universe: wires, parts, boards
  enum Kind { Wire, Part, Board } kind;
  GId id;
};

std::string initial_color(const Graph& g, const CanonNode& n) {
  switch (n.kind) {
    case CanonNode::Wire: {
      const GWire& w = g.wires[n.id];
      std::string c = "w:" + print_type(w.type);
      if (w.top.kind == GEnd::OuterTop) c += ":T" + std::to_string(w.top.index);
      if (w.bottom.kind == GEnd::OuterBottom) c += ":B" + std::to_string(w.bottom.index);
      return c;
    }
    case CanonNode::Part: return std::string("p:") + kind_name(g.parts[n.id].kind);
    case CanonNode::Board: return "b";
  }
  return "?";
}

struct CanonGraph {
  // adjacency with role labels; unordered roles share one label
  struct Adj {
    int other;
    std::string role;
  };
  std::vector<std::vector<Adj>> adj;
  std::vector<std::string> color;

  std::string refine_certificate() {
    size_t n = color.size();
    for (int round = 0; round < 64; round++) {
      std::vector<std::string> next(n);
      std::set<std::string> distinct;
      for (size_t i = 0; i < n; i++) {
        std::vector<std::string> sig;
        for (auto& a : adj[i]) sig.push_back(a.role + "(" + color[a.other] + ")");
        std::sort(sig.begin(), sig.end());
        std::string s = color[i] + "|";
        for (auto& x : sig) s += x + ";";
        next[i] = s;
        distinct.insert(s);
      }
      // compress
      std::map<std::string, int> rank;
      for (auto& s : distinct) rank.emplace(s, (int)rank.size());
      bool changed = false;
      for (size_t i = 0; i < n; i++) {
        std::string c = "c" + std::to_string(rank[next[i]]);
        if (c != color[i]) changed = true;
        color[i] = c;
      }
      if (!changed) break;
    }
    // check discreteness
    std::map<std::string, std::vector<size_t>> classes;
    for (size_t i = 0; i < n; i++) classes[color[i]].push_back(i);
    for (auto& [c, members] : classes) {
      if (members.size() > 1) {
        // individualize: branch on each member, keep the least certificate
        std::string best;
        for (size_t m : members) {
          CanonGraph g2 = *this;
          g2.color[m] += "*";
          std::string cert = g2.refine_certificate();
          if (best.empty() || cert < best) best = cert;
        }
        return best;
      }
    }
    // discrete: emit sorted labeled edges
    std::vector<std::string> lines;
    for (size_t i = 0; i < n; i++)
      for (auto& a : adj[i]) lines.push_back(color[i] + "-" + a.role + "-" + color[a.other]);
    std::sort(lines.begin(), lines.end());
    std::string cert;
    for (auto& l : lines) cert += l + "\n";
    return cert;
  }
};

}  // namespace

std::string canonical_certificate(const Graph& g0) {
  Graph g = canonicalize_graph(g0);
  // dotted links erased: not represented at all
  std::vector<CanonNode> nodes;
  std::map<std::pair<int, GId>, int> index;
  auto add = [&](CanonNode::Kind k, GId id) {
    index[{(int)k, id}] = (int)nodes.size();
    nodes.push_back({k, id});
  };
  for (GId i = 0; i < (GId)g.wires.size(); i++)
    if (g.wires[i].alive) add(CanonNode::Wire, i);
  for (GId i = 0; i < (GId)g.parts.size(); i++)
    if (g.parts[i].alive) add(CanonNode::Part, i);
  for (GId i = 0; i < (GId)g.boards.size(); i++)
    if (g.boards[i].alive) add(CanonNode::Board, i);

  CanonGraph cg;
  cg.adj.resize(nodes.size());
  cg.color.resize(nodes.size());
  for (size_t i = 0; i < nodes.size(); i++) cg.color[i] = initial_color(g, nodes[i]);
  auto link = [&](int a, int b, const std::string& role) {
    cg.adj[a].push_back({b, role + ">"});
    cg.adj[b].push_back({a, role + "<"});
  };
  auto widx = [&](GId w) { return index.at({(int)CanonNode::Wire, w}); };
  auto pidx = [&](GId p) { return index.at({(int)CanonNode::Part, p}); };
  auto bidx = [&](GId b) { return index.at({(int)CanonNode::Board, b}); };

  for (GId p = 0; p < (GId)g.parts.size(); p++) {
    if (!g.parts[p].alive) continue;
    const GPart& pt = g.parts[p];
    bool dup = pt.kind == GPart::Duplicator;
    for (size_t k = 0; k < pt.top_ports.size(); k++)
      link(pidx(p), widx(pt.top_ports[k]), "t" + std::to_string(k));
    for (size_t k = 0; k < pt.bottom_ports.size(); k++)
      link(pidx(p), widx(pt.bottom_ports[k]), dup ? "leg" : "b" + std::to_string(k));
    if (pt.kind == GPart::NegGate) link(pidx(p), bidx(pt.board), "neggate");
    if (pt.kind == GPart::PosGate) link(pidx(p), bidx(pt.board), "posgate");
    if (pt.region >= 0) link(pidx(p), bidx(pt.region), "region");
  }
  for (GId w = 0; w < (GId)g.wires.size(); w++) {
    if (!g.wires[w].alive) continue;
    if (g.wires[w].region >= 0) link(widx(w), bidx(g.wires[w].region), "wregion");
  }
  for (GId b = 0; b < (GId)g.boards.size(); b++) {
    if (!g.boards[b].alive) continue;
    if (g.boards[b].parent >= 0) link(bidx(b), bidx(g.boards[b].parent), "nest");
  }
  return cg.refine_certificate();
}

bool almost_equal(const Graph& g1, const Graph& g2) {
  return canonical_certificate(g1) == canonical_certificate(g2);
}

// ---- dot / json ----

std::string to_dot(const Graph& g) {
  std::ostringstream os;
  os << "digraph G {\n  rankdir=TB;\n  node [shape=box,fontsize=9];\n";
  std::function<void(GId)> emit_region = [&](GId region) {
    for (GId p = 0; p < (GId)g.parts.size(); p++) {
      if (!g.parts[p].alive || g.parts[p].region != region) continue;
      os << "    p" << p << " [label=\"" << kind_name(g.parts[p].kind) << "\"];\n";
    }
    for (GId b = 0; b < (GId)g.boards.size(); b++) {
      if (!g.boards[b].alive || g.boards[b].parent != region) continue;
      os << "    subgraph cluster_b" << b << " {\n    label=\"board " << b << "\";\n";
      emit_region(b);
      os << "    }\n";
    }
  };
  emit_region(-1);
  auto endname = [&](const GEnd& e, GId w, bool top) -> std::string {
    if (e.kind == GEnd::TopPort || e.kind == GEnd::BottomPort)
      return "p" + std::to_string(e.part);
    std::string n = (top ? "top" : "bot") + std::to_string(e.index);
    os << "  " << n << " [shape=plaintext,label=\"" << (top ? "in " : "out ") << e.index
       << "\"];\n";
    return n;
  };
  for (GId w = 0; w < (GId)g.wires.size(); w++) {
    if (!g.wires[w].alive) continue;
    std::string a = endname(g.wires[w].top, w, true);
    std::string b = endname(g.wires[w].bottom, w, false);
    os << "  " << a << " -> " << b << " [label=\"" << print_type(g.wires[w].type) << "\"];\n";
  }
  for (auto& d : g.dotted) {
    const GEnd& h = g.wires[d.host].top;
    if (h.kind == GEnd::BottomPort || h.kind == GEnd::TopPort)
      os << "  p" << d.terminal << " -> p" << h.part
         << " [style=dotted,arrowhead=none];\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_json(const Graph& g0) {
  Graph g = compact(g0);
  nlohmann::json j;
  auto end_json = [&](const GEnd& e) {
    nlohmann::json o;
    switch (e.kind) {
      case GEnd::TopPort: o = {{"kind", "topPort"}, {"part", e.part}, {"port", e.port}}; break;
      case GEnd::BottomPort:
        o = {{"kind", "bottomPort"}, {"part", e.part}, {"port", e.port}};
        break;
      case GEnd::OuterTop: o = {{"kind", "outerTop"}, {"index", e.index}}; break;
      case GEnd::OuterBottom: o = {{"kind", "outerBottom"}, {"index", e.index}}; break;
      case GEnd::None: o = {{"kind", "none"}}; break;
    }
    return o;
  };
  j["wires"] = nlohmann::json::array();
  for (auto& w : g.wires)
    j["wires"].push_back({{"type", print_type(w.type)},
                          {"top", end_json(w.top)},
                          {"bottom", end_json(w.bottom)},
                          {"region", w.region}});
  j["parts"] = nlohmann::json::array();
  for (auto& p : g.parts)
    j["parts"].push_back({{"kind", kind_name(p.kind)},
                          {"topPorts", p.top_ports},
                          {"bottomPorts", p.bottom_ports},
                          {"region", p.region},
                          {"board", p.board}});
  j["boards"] = nlohmann::json::array();
  for (auto& b : g.boards)
    j["boards"].push_back(
        {{"parent", b.parent}, {"negGates", b.neg_gates}, {"posGate", b.pos_gate}});
  j["dotted"] = nlohmann::json::array();
  for (auto& d : g.dotted) j["dotted"].push_back({{"terminal", d.terminal}, {"host", d.host}});
  j["outerTop"] = g.outer_top;
  j["outerBottom"] = g.outer_bottom;
  return j.dump(2);
}

Graph from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Graph g;
  auto end_parse = [&](const nlohmann::json& o) {
    GEnd e;
    std::string k = o.at("kind");
    if (k == "topPort") {
      e.kind = GEnd::TopPort;
      e.part = o.at("part");
      e.port = o.at("port");
    } else if (k == "bottomPort") {
      e.kind = GEnd::BottomPort;
      e.part = o.at("part");
      e.port = o.at("port");
    } else if (k == "outerTop") {
      e.kind = GEnd::OuterTop;
      e.index = o.at("index");
    } else if (k == "outerBottom") {
      e.kind = GEnd::OuterBottom;
      e.index = o.at("index");
    }
    return e;
  };
  for (auto& w : j.at("wires")) {
    GWire gw;
    gw.type = parse_type(w.at("type"));
    gw.top = end_parse(w.at("top"));
    gw.bottom = end_parse(w.at("bottom"));
    gw.region = w.at("region");
    g.wires.push_back(std::move(gw));
  }
  for (auto& p : j.at("parts")) {
    GPart gp;
    std::string k = p.at("kind");
    bool found = false;
    for (int kk = GPart::TensorIntro; kk <= GPart::PosGate; kk++) {
      if (k == kind_name((GPart::Kind)kk)) {
        gp.kind = (GPart::Kind)kk;
        found = true;
        break;
      }
    }
    if (!found) throw Error("from_json: unknown part kind " + k);
    gp.top_ports = p.at("topPorts").get<std::vector<GId>>();
    gp.bottom_ports = p.at("bottomPorts").get<std::vector<GId>>();
    gp.region = p.at("region");
    gp.board = p.at("board");
    g.parts.push_back(std::move(gp));
  }
  for (auto& b : j.at("boards")) {
    GBoard gb;
    gb.parent = b.at("parent");
    gb.neg_gates = b.at("negGates").get<std::vector<GId>>();
    gb.pos_gate = b.at("posGate");
    g.boards.push_back(std::move(gb));
  }
  for (auto& d : j.at("dotted")) g.dotted.push_back({d.at("terminal"), d.at("host")});
  g.outer_top = j.at("outerTop").get<std::vector<GId>>();
  g.outer_bottom = j.at("outerBottom").get<std::vector<GId>>();
  return g;
}

}  // namespace lincat
