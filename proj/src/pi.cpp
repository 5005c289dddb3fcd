#include "lincat/pi.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

namespace lincat {

long pow_reduce(long a, long l, long p) {
  if (!is_prime(p)) throw Error("pow_reduce: p is not prime");
  if (l < 1) throw Error("pow_reduce: l must be positive");
  auto modpow = [&](long base, long e) {
    long r = 1 % p;
    long b = ((base % p) + p) % p;
    while (e > 0) {
      if (e & 1) r = (r * b) % p;
      b = (b * b) % p;
      e >>= 1;
    }
    return r;
  };
  long r = ((a % p) + p) % p;
  for (long i = 0; i < l; i++) r = modpow(r, p);
  return r;
}

long binom_mod(const BigInt& n0, const BigInt& j0, long p) {
  if (!is_prime(p)) throw Error("binom_mod: p is not prime");
  if (j0 < 0 || j0 > n0) return 0;
  BigInt n = n0, j = j0;
  long result = 1;
  auto modpow = [&](long base, long e) {
    long r = 1 % p, b = ((base % p) + p) % p;
    while (e > 0) {
      if (e & 1) r = (r * b) % p;
      b = (b * b) % p;
      e >>= 1;
    }
    return r;
  };
  while (n > 0 || j > 0) {
    long nd = (long)(n % p);
    long jd = (long)(j % p);
    n /= p;
    j /= p;
    if (jd > nd) return 0;
    long num = 1, den = 1;
    for (long k = 0; k < jd; k++) {
      num = (num * ((nd - k) % p)) % p;
      den = (den * ((k + 1) % p)) % p;
    }
    result = (result * num % p) * modpow(den, p - 2) % p;
  }
  return result;
}

namespace {

struct Ring {
  bool modp = false;
  long p = 0;

  BigInt norm(const BigInt& v) const {
    if (!modp) return v;
    BigInt r = v % p;
    if (r < 0) r += p;
    return r;
  }
  BigInt add(const BigInt& a, const BigInt& b) const { return norm(a + b); }
  BigInt mul(const BigInt& a, const BigInt& b) const { return norm(a * b); }

  BigInt pow(const BigInt& v, const Count& n) const {
    if (n.is_zero()) return 1;
    if (v == 0) return 0;
    if (v == 1) return 1;
    if (modp) {
      BigInt base = norm(v);
      if (base == 0) return 0;
      BigInt e;
      if (n.symbolic()) {
        e = 1;  // p^k == 1 mod (p-1)
      } else {
        e = *n.value() % (p - 1);
        if (e == 0) e = p - 1;
      }
      BigInt r = 1, b = base, ee = e;
      while (ee > 0) {
        if (ee % 2 == 1) r = norm(r * b);
        b = norm(b * b);
        ee /= 2;
      }
      return r;
    }
    auto nv = n.value(20);
    if (!nv) throw Error("pi: exact power with a cardinality too large to materialize");
    return big_pow(v, *nv);
  }
};

struct GateIn {
  bool present = false;
  bool is_delta = false;
  ElemId val = -1;  // direct annotation, or the delta input gamma
};

struct State {
  std::map<GId, ElemId> wire_val;
  std::deque<std::tuple<GId, ElemId, bool>> queue;  // (wire, value, entered at top end)
  std::map<GId, std::vector<GateIn>> board_neg;
  std::map<GId, GateIn> board_pos;
  std::set<GId> fired;
  BigInt factor = 1;
};

struct Engine {
  const Graph& g;
  const Interp& I;
  PiOptions opts;
  Ring ring;
  std::map<std::pair<GId, std::vector<ElemId>>, BigInt> memo;

  Engine(const Graph& gr, const Interp& i, PiOptions o, Ring r) : g(gr), I(i), opts(o), ring(r) {}

  BigInt eval_root(const std::vector<ElemId>& top, const std::vector<ElemId>& bottom) {
    if (top.size() != g.outer_top.size() || bottom.size() != g.outer_bottom.size())
      throw Error("pi: boundary annotation arity mismatch");
    State st;
    for (size_t i = 0; i < top.size(); i++) {
      ElemId e = strip_bars(top[i]);
      if (!element_in_type(e, g.wires[g.outer_top[i]].type, I))
        throw Error("pi: top annotation " + std::to_string(i) + " is not in the wire's type");
      st.queue.push_back({g.outer_top[i], e, true});
    }
    for (size_t i = 0; i < bottom.size(); i++) {
      ElemId e = strip_bars(bottom[i]);
      if (!element_in_type(e, g.wires[g.outer_bottom[i]].type, I))
        throw Error("pi: bottom annotation " + std::to_string(i) + " is not in the wire's type");
      st.queue.push_back({g.outer_bottom[i], e, false});
    }
    return run(-1, std::move(st));
  }

  BigInt eval_board(GId board, const std::vector<ElemId>& col) {
    auto key = std::make_pair(board, col);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    State st;
    const GBoard& b = g.boards[board];
    for (size_t i = 0; i < b.neg_gates.size(); i++) {
      GId inner = g.parts[b.neg_gates[i]].bottom_ports[0];
      st.queue.push_back({inner, col[i], true});
    }
    GId pin = g.parts[b.pos_gate].top_ports[0];
    st.queue.push_back({pin, col.back(), false});
    BigInt v = run(board, std::move(st));
    memo.emplace(key, v);
    return v;
  }

  BigInt run(GId region, State st) {
    while (!st.queue.empty()) {
      auto [w, v, from_top] = st.queue.front();
      st.queue.pop_front();
      if (g.wires[w].region != region) throw Error("pi: delivery crossed a board boundary");
      auto it = st.wire_val.find(w);
      if (it != st.wire_val.end()) {
        if (it->second != v) return 0;  // the two ends of a wire must agree
        continue;
      }
      st.wire_val[w] = v;
      const GEnd& dst = from_top ? g.wires[w].bottom : g.wires[w].top;
      if (dst.kind == GEnd::None) throw Error("pi: annotation reached a free wire end");
      if (dst.kind == GEnd::OuterTop || dst.kind == GEnd::OuterBottom)
        continue;  // the boundary annotation arrives as its own push and compares
      auto res = deliver(region, st, dst.part, dst.kind == GEnd::TopPort, dst.port, v);
      if (res) return *res;
    }
    for (GId p = 0; p < (GId)g.parts.size(); p++) {
      if (!g.parts[p].alive || g.parts[p].region != region) continue;
      if (!st.fired.count(p))
        throw Error("pi: evaluation deadlocked at a part (malformed graph)");
    }
    return st.factor;
  }

  std::optional<BigInt> deliver(GId region, State& st, GId part, bool at_top, int port,
                                ElemId v) {
    const GPart& pt = g.parts[part];
    auto push_up = [&](GId wire, ElemId val) { st.queue.push_back({wire, val, false}); };
    auto push_down = [&](GId wire, ElemId val) { st.queue.push_back({wire, val, true}); };
    auto fail = [&]() -> std::optional<BigInt> { return BigInt(0); };

    switch (pt.kind) {
      case GPart::TensorIntro:
      case GPart::ParIntro: {
        if (at_top) return std::nullopt;
        const ElemNode& n = elem(v);
        if (n.kind != ElemNode::PairVal) return fail();
        st.fired.insert(part);
        push_up(pt.top_ports[0], n.a);
        push_up(pt.top_ports[1], n.b);
        return std::nullopt;
      }
      case GPart::TensorElim:
      case GPart::ParElim: {
        if (!at_top) return std::nullopt;
        const ElemNode& n = elem(v);
        if (n.kind != ElemNode::PairVal) return fail();
        st.fired.insert(part);
        push_down(pt.bottom_ports[0], n.a);
        push_down(pt.bottom_ports[1], n.b);
        return std::nullopt;
      }
      case GPart::UnitIntro:
      case GPart::CounitIntro: {
        if (at_top) return std::nullopt;
        if (elem(v).kind != ElemNode::Star) return fail();
        st.fired.insert(part);
        return std::nullopt;
      }
      case GPart::UnitElim:
      case GPart::CounitElim: {
        if (!at_top) return std::nullopt;
        if (elem(v).kind != ElemNode::Star) return fail();
        st.fired.insert(part);
        return std::nullopt;
      }
      case GPart::Cap: {
        if (at_top || st.fired.count(part)) return std::nullopt;
        st.fired.insert(part);
        push_down(pt.bottom_ports[1 - port], v);
        return std::nullopt;
      }
      case GPart::Cup: {
        if (!at_top || st.fired.count(part)) return std::nullopt;
        st.fired.insert(part);
        push_up(pt.top_ports[1 - port], v);
        return std::nullopt;
      }
      case GPart::EpsLens: {
        if (!at_top) return std::nullopt;
        const ElemNode& n = elem(v);
        if (n.kind != ElemNode::MSetVal || n.mset.size() != 1 || !n.mset[0].second.is_one())
          return fail();
        st.fired.insert(part);
        push_down(pt.bottom_ports[0], n.mset[0].first);
        return std::nullopt;
      }
      case GPart::Eliminator: {
        if (!at_top) return std::nullopt;
        const ElemNode& n = elem(v);
        if (n.kind != ElemNode::MSetVal || !n.mset.empty()) return fail();
        st.fired.insert(part);
        push_down(pt.bottom_ports[0], e_star());
        return std::nullopt;
      }
      case GPart::DeltaLens: {
        if (!at_top) return std::nullopt;
        // the delta decomposition is resolved together with the gate below,
        // once the board's positive cardinality is known
        const GEnd& below = g.wires[pt.bottom_ports[0]].bottom;
        if (below.kind != GEnd::TopPort || g.parts[below.part].kind != GPart::NegGate)
          throw Error("pi: delta part without a negative gate below");
        GId gate = below.part;
        st.fired.insert(part);
        st.fired.insert(gate);
        st.wire_val[pt.bottom_ports[0]] = v;  // bookkeeping only
        return record_gate(region, st, gate, GateIn{true, true, v});
      }
      case GPart::Duplicator: {
        if (!at_top) return std::nullopt;
        st.fired.insert(part);
        auto splits = ordered_splits(v, pt.bottom_ports.size(), ring.modp ? ring.p : 0);
        BigInt total = 0;
        for (auto& rowvals : splits) {
          State st2 = st;
          for (size_t k = 0; k < rowvals.size(); k++)
            st2.queue.push_back({pt.bottom_ports[k], rowvals[k], true});
          total = ring.add(total, run(region, std::move(st2)));
        }
        return total;
      }
      case GPart::NegGate: {
        if (!at_top) return std::nullopt;
        st.fired.insert(part);
        return record_gate(region, st, part, GateIn{true, false, v});
      }
      case GPart::PosGate: {
        if (at_top) return std::nullopt;
        st.fired.insert(part);
        st.board_pos[pt.board] = GateIn{true, false, v};
        return try_board(st, pt.board);
      }
    }
    return std::nullopt;
  }

  std::optional<BigInt> record_gate(GId region, State& st, GId gate, GateIn in) {
    (void)region;
    GId b = g.parts[gate].board;
    auto& row = st.board_neg[b];
    row.resize(g.boards[b].neg_gates.size());
    for (size_t i = 0; i < g.boards[b].neg_gates.size(); i++)
      if (g.boards[b].neg_gates[i] == gate) row[i] = in;
    return try_board(st, b);
  }

  std::optional<BigInt> try_board(State& st, GId b) {
    auto pos = st.board_pos.find(b);
    if (pos == st.board_pos.end() || !pos->second.present) return std::nullopt;
    auto& row = st.board_neg[b];
    row.resize(g.boards[b].neg_gates.size());
    for (auto& in : row)
      if (!in.present) return std::nullopt;
    BigInt v = board_value(b, row, pos->second.val);
    if (v == 0) return BigInt(0);
    st.fired.insert(g.boards[b].pos_gate);
    st.factor = ring.mul(st.factor, v);
    return std::nullopt;
  }

  BigInt board_value(GId b, const std::vector<GateIn>& row, ElemId beta) {
    const ElemNode& bn = elem(beta);
    if (bn.kind != ElemNode::MSetVal) throw Error("pi: board annotation is not a multiset");
    Count n = mset_card(beta);

    // direct gate annotations must share the positive cardinality
    for (auto& in : row)
      if (!in.is_delta && !(mset_card(in.val) == n)) return 0;

    // empty positive multiset: every gate decomposes into zero parts
    if (n.is_zero()) {
      for (auto& in : row)
        if (!elem(in.val).mset.empty()) return 0;
      return 1;
    }

    // mod-p shortcut: homogeneous positive multiset of p^l elements, l >= 1
    if (ring.modp) {
      auto l = n.ppow_log(ring.p);
      if (l && *l >= 1 && mset_is_homogeneous(beta)) {
        std::vector<ElemId> col;
        for (auto& in : row) {
          if (in.is_delta) {
            ElemId part = divide_mset(in.val, n);
            if (part < 0) return 0;
            col.push_back(part);
          } else {
            if (!mset_is_homogeneous(in.val)) return 0;
            col.push_back(elem(in.val).mset[0].first);
          }
        }
        col.push_back(bn.mset[0].first);
        return eval_board(b, col);
      }
    }

    auto nv = n.value(20);
    bool can_materialize = nv && *nv <= (long)opts.card_cap;
    bool has_delta = std::any_of(row.begin(), row.end(),
                                 [](const GateIn& in) { return in.is_delta; });

    // single-matrix fast path: everything homogeneous and no delta splits
    if (!has_delta && mset_is_homogeneous(beta) &&
        std::all_of(row.begin(), row.end(),
                    [&](const GateIn& in) { return mset_is_homogeneous(in.val); })) {
      std::vector<ElemId> col;
      for (auto& in : row) col.push_back(elem(in.val).mset[0].first);
      col.push_back(bn.mset[0].first);
      BigInt inner = eval_board(b, col);
      return ring.pow(inner, n);
    }

    if (!can_materialize)
      throw Error("pi: cardinality too large for exact enumeration (raise the cap)");

    size_t nn = (size_t)*nv;
    std::vector<ElemId> bs;
    for (auto& [e, c] : bn.mset) {
      auto cv = c.value(20);
      if (!cv) throw Error("pi: beta multiplicity too large");
      for (BigInt k = 0; k < *cv; k++) bs.push_back(e);
    }
    std::vector<std::vector<std::vector<ElemId>>> choices;
    for (auto& in : row) {
      if (in.is_delta)
        choices.push_back(ordered_splits(in.val, nn, ring.modp ? ring.p : 0));
      else
        choices.push_back(dispositions(in.val, opts.card_cap));
    }
    for (auto& ch : choices)
      if (ch.empty()) return 0;
    BigInt total = 0;
    std::vector<size_t> idx(choices.size(), 0);
    for (;;) {
      BigInt prod = 1;
      for (size_t c = 0; c < nn && prod != 0; c++) {
        std::vector<ElemId> col;
        for (size_t i = 0; i < choices.size(); i++) col.push_back(choices[i][idx[i]][c]);
        col.push_back(bs[c]);
        prod = ring.mul(prod, eval_board(b, col));
      }
      total = ring.add(total, prod);
      size_t t = 0;
      for (; t < choices.size(); t++) {
        if (++idx[t] < choices[t].size()) break;
        idx[t] = 0;
      }
      if (t == choices.size()) break;
    }
    return total;
  }

  // gamma / n entrywise when every multiplicity divides, else -1
  ElemId divide_mset(ElemId gamma, const Count& n) {
    const ElemNode& gn = elem(gamma);
    std::vector<std::pair<ElemId, Count>> entries;
    for (auto& [e, c] : gn.mset) {
      auto q = divide_count(c, n);
      if (!q) return -1;
      entries.emplace_back(e, *q);
    }
    return e_mset(std::move(entries));
  }

  std::optional<Count> divide_count(const Count& c, const Count& n) {
    if (n.is_one()) return c;
    long p = ring.p ? ring.p
                    : (c.symbolic() ? c.base() : (n.symbolic() ? n.base() : 0));
    if (p) {
      auto lc = c.ppow_log(p), ln = n.ppow_log(p);
      if (lc && ln) {
        if (*lc < *ln) return std::nullopt;
        return Count::ppow(p, *lc - *ln);
      }
    }
    auto cv = c.value(), nv2 = n.value();
    if (cv && nv2 && *nv2 != 0 && *cv % *nv2 == 0) return Count(BigInt(*cv / *nv2));
    return std::nullopt;
  }
};

}  // namespace

BigInt pi_exact(const Graph& g0, const std::vector<ElemId>& top,
                const std::vector<ElemId>& bottom, const Interp& I, PiOptions opts) {
  Graph g = canonicalize_graph(g0);
  Engine e(g, I, opts, Ring{false, 0});
  return e.eval_root(top, bottom);
}

long pi_mod_p(const Graph& g0, const std::vector<ElemId>& top,
              const std::vector<ElemId>& bottom, long p, const Interp& I) {
  if (!is_prime(p)) throw Error("pi_mod_p: p is not prime");
  Graph g = canonicalize_graph(g0);
  Engine e(g, I, PiOptions{}, Ring{true, p});
  return (long)e.eval_root(top, bottom);
}

}  // namespace lincat
