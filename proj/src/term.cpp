#include "lincat/term.hpp"

#include <cctype>
#include <functional>
#include <map>

namespace lincat {

static TermP mk(Term::Kind k, TermP f, TermP g, TypeP A, TypeP B, TypeP C,
                std::string var = {}) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->f = std::move(f);
  t->g = std::move(g);
  t->A = std::move(A);
  t->B = std::move(B);
  t->C = std::move(C);
  t->var = std::move(var);
  return t;
}

TermP m_id(TypeP A) { return mk(Term::Id, nullptr, nullptr, std::move(A), nullptr, nullptr); }
TermP m_comp(TermP f, TermP g) {
  return mk(Term::Comp, std::move(f), std::move(g), nullptr, nullptr, nullptr);
}
TermP m_tensor(TermP f, TermP g) {
  return mk(Term::TensorM, std::move(f), std::move(g), nullptr, nullptr, nullptr);
}
TermP m_par(TermP f, TermP g) {
  return mk(Term::ParM, std::move(f), std::move(g), nullptr, nullptr, nullptr);
}
TermP m_bang(TermP f) { return mk(Term::BangM, std::move(f), nullptr, nullptr, nullptr, nullptr); }
TermP m_gen(Term::Kind k, TypeP A, TypeP B, TypeP C) {
  return mk(k, nullptr, nullptr, std::move(A), std::move(B), std::move(C));
}
TermP m_metaterm(const std::string& name, TypeP A, TypeP B) {
  return mk(Term::MetaTerm, nullptr, nullptr, std::move(A), std::move(B), nullptr, name);
}

TermP m_seq(const std::vector<TermP>& fs) {
  if (fs.empty()) throw Error("m_seq: empty sequence");
  TermP t = fs[0];
  for (size_t i = 1; i < fs.size(); i++) t = m_comp(t, fs[i]);
  return t;
}

bool term_eq(const TermP& x, const TermP& y) {
  if (x.get() == y.get()) return true;
  if (!x || !y) return false;
  if (x->kind != y->kind || x->var != y->var) return false;
  if (!type_eq(x->A, y->A) || !type_eq(x->B, y->B) || !type_eq(x->C, y->C)) return false;
  return term_eq(x->f, y->f) && term_eq(x->g, y->g);
}

size_t term_hash(const TermP& x) {
  if (!x) return 0;
  size_t h = std::hash<int>()(x->kind * 131 + 7);
  auto mix = [&h](size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  mix(std::hash<std::string>()(x->var));
  mix(type_hash(x->A));
  mix(type_hash(x->B));
  mix(type_hash(x->C));
  mix(term_hash(x->f));
  mix(term_hash(x->g));
  return h;
}

size_t term_size(const TermP& x) {
  if (!x) return 0;
  return 1 + term_size(x->f) + term_size(x->g);
}

void generator_boundary(const Term& t, TypeP& src, TypeP& dst) {
  const TypeP& A = t.A;
  const TypeP& B = t.B;
  const TypeP& C = t.C;
  switch (t.kind) {
    case Term::Id: src = A, dst = A; return;
    case Term::Delta: src = t_bang(A), dst = t_bang(t_bang(A)); return;
    case Term::Eps: src = t_bang(A), dst = A; return;
    case Term::Dup: src = t_bang(A), dst = t_tensor(t_bang(A), t_bang(A)); return;
    case Term::Weak: src = t_bang(A), dst = t_one(); return;
    case Term::PhiT: src = t_tensor(t_bang(A), t_bang(B)), dst = t_bang(t_tensor(A, B)); return;
    case Term::Phi0: src = t_one(), dst = t_bang(t_one()); return;
    case Term::Dist: src = t_tensor(A, t_par(B, C)), dst = t_par(t_tensor(A, B), C); return;
    case Term::DistP: src = t_tensor(t_par(A, B), C), dst = t_par(A, t_tensor(B, C)); return;
    case Term::Tau: src = t_one(), dst = t_par(A, t_dual(A)); return;
    case Term::Gamma: src = t_tensor(t_dual(A), A), dst = t_bot(); return;
    case Term::AssocT: src = t_tensor(t_tensor(A, B), C), dst = t_tensor(A, t_tensor(B, C)); return;
    case Term::AssocTInv:
      src = t_tensor(A, t_tensor(B, C)), dst = t_tensor(t_tensor(A, B), C);
      return;
    case Term::AssocP: src = t_par(t_par(A, B), C), dst = t_par(A, t_par(B, C)); return;
    case Term::AssocPInv: src = t_par(A, t_par(B, C)), dst = t_par(t_par(A, B), C); return;
    case Term::SymT: src = t_tensor(A, B), dst = t_tensor(B, A); return;
    case Term::SymP: src = t_par(A, B), dst = t_par(B, A); return;
    case Term::LUnitT: src = t_tensor(t_one(), A), dst = A; return;
    case Term::LUnitTInv: src = A, dst = t_tensor(t_one(), A); return;
    case Term::RUnitT: src = t_tensor(A, t_one()), dst = A; return;
    case Term::RUnitTInv: src = A, dst = t_tensor(A, t_one()); return;
    case Term::LUnitP: src = t_par(t_bot(), A), dst = A; return;
    case Term::LUnitPInv: src = A, dst = t_par(t_bot(), A); return;
    case Term::RUnitP: src = t_par(A, t_bot()), dst = A; return;
    case Term::RUnitPInv: src = A, dst = t_par(A, t_bot()); return;
    case Term::MetaTerm: src = A, dst = B; return;
    default: throw Error("generator_boundary: composite kind");
  }
}

namespace {

void check_rec(const TermP& t, TypeP& src, TypeP& dst, std::string path) {
  switch (t->kind) {
    case Term::Comp: {
      TypeP s1, d1, s2, d2;
      check_rec(t->f, s1, d1, path + ".0");
      check_rec(t->g, s2, d2, path + ".1");
      if (!type_eq(d1, s2))
        throw TypeError("composition mismatch at " + (path.empty() ? "root" : path) +
                        ": left target " + print_type(d1) + " vs right source " + print_type(s2));
      src = s1;
      dst = d2;
      return;
    }
    case Term::TensorM: {
      TypeP s1, d1, s2, d2;
      check_rec(t->f, s1, d1, path + ".0");
      check_rec(t->g, s2, d2, path + ".1");
      src = t_tensor(s1, s2);
      dst = t_tensor(d1, d2);
      return;
    }
    case Term::ParM: {
      TypeP s1, d1, s2, d2;
      check_rec(t->f, s1, d1, path + ".0");
      check_rec(t->g, s2, d2, path + ".1");
      src = t_par(s1, s2);
      dst = t_par(d1, d2);
      return;
    }
    case Term::BangM: {
      TypeP s1, d1;
      check_rec(t->f, s1, d1, path + ".0");
      src = t_bang(s1);
      dst = t_bang(d1);
      return;
    }
    default: generator_boundary(*t, src, dst); return;
  }
}

}  // namespace

Judgement typecheck(const TermP& t) {
  Judgement j;
  j.term = t;
  check_rec(t, j.source, j.target, "");
  return j;
}

// ---- printing ----

namespace {

struct GenName {
  Term::Kind kind;
  const char* name;
  int arity;  // number of type args
};

const GenName kGenNames[] = {
    {Term::Delta, "delta", 1},   {Term::Eps, "eps", 1},
    {Term::Dup, "dup", 1},       {Term::Weak, "weak", 1},
    {Term::PhiT, "phi", 2},      {Term::Phi0, "phi0", 0},
    {Term::Dist, "dist", 3},     {Term::DistP, "dist'", 3},
    {Term::Tau, "tau", 1},       {Term::Gamma, "gamma", 1},
    {Term::AssocT, "assocT", 3}, {Term::AssocTInv, "assocT'", 3},
    {Term::AssocP, "assocP", 3}, {Term::AssocPInv, "assocP'", 3},
    {Term::SymT, "symT", 2},     {Term::SymP, "symP", 2},
    {Term::LUnitT, "lunitT", 1}, {Term::LUnitTInv, "lunitT'", 1},
    {Term::RUnitT, "runitT", 1}, {Term::RUnitTInv, "runitT'", 1},
    {Term::LUnitP, "lunitP", 1}, {Term::LUnitPInv, "lunitP'", 1},
    {Term::RUnitP, "runitP", 1}, {Term::RUnitPInv, "runitP'", 1},
};

const GenName* gen_by_kind(Term::Kind k) {
  for (auto& g : kGenNames)
    if (g.kind == k) return &g;
  return nullptr;
}

const GenName* gen_by_name(const std::string& n) {
  for (auto& g : kGenNames)
    if (n == g.name) return &g;
  return nullptr;
}

// precedence levels: 0 = comp, 1 = tensor/par, 2 = atomic
void print_rec(const TermP& t, std::string& out, int level) {
  switch (t->kind) {
    case Term::Comp: {
      if (level > 0) out += '(';
      print_rec(t->f, out, 0);
      out += " ; ";
      print_rec(t->g, out, 0);
      if (level > 0) out += ')';
      return;
    }
    case Term::TensorM:
    case Term::ParM: {
      if (level > 1) out += '(';
      const char* op = t->kind == Term::TensorM ? " (x) " : " (%) ";
      // parenthesize children at same level unless same-operator chain
      auto child = [&](const TermP& u) {
        bool same = u->kind == t->kind;
        print_rec(u, out, same ? 1 : 2);
      };
      child(t->f);
      out += op;
      print_rec(t->g, out, 2);
      if (level > 1) out += ')';
      return;
    }
    case Term::BangM: {
      out += "!(";
      print_rec(t->f, out, 0);
      out += ')';
      return;
    }
    case Term::Id: {
      out += "id{" + print_type(t->A) + "}";
      return;
    }
    case Term::MetaTerm: {
      out += "?" + t->var + "{" + print_type(t->A) + "," + print_type(t->B) + "}";
      return;
    }
    default: {
      const GenName* g = gen_by_kind(t->kind);
      if (!g) throw Error("print_term: unknown kind");
      out += g->name;
      if (g->arity > 0) {
        out += '{';
        out += print_type(t->A);
        if (g->arity > 1) out += "," + print_type(t->B);
        if (g->arity > 2) out += "," + print_type(t->C);
        out += '}';
      }
      return;
    }
  }
}

struct TermParser {
  const std::string& s;
  size_t i = 0;
  bool allow_meta;

  TermParser(const std::string& text, bool meta) : s(text), allow_meta(meta) {}

  void skip() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) i++;
  }
  bool peek(const std::string& tok) {
    skip();
    return s.compare(i, tok.size(), tok) == 0;
  }
  bool eat(const std::string& tok) {
    if (peek(tok)) {
      i += tok.size();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, i); }

  TermP parse() {
    TermP t = comp();
    skip();
    if (i != s.size()) fail("trailing input in term");
    return t;
  }

  TermP comp() {
    TermP lhs = infix();
    for (;;) {
      skip();
      if (eat(";")) {
        TermP rhs = infix();
        lhs = m_comp(lhs, rhs);
      } else
        break;
    }
    return lhs;
  }

  TermP infix() {
    TermP lhs = atomic();
    int op = 0;
    for (;;) {
      skip();
      size_t save = i;
      int here = 0;
      if (eat("(x)"))
        here = 1;
      else if (eat("(%)"))
        here = 2;
      else
        break;
      if (op && here != op) {
        i = save;
        fail("mixing (x) and (%) on terms requires parentheses");
      }
      op = here;
      TermP rhs = atomic();
      lhs = op == 1 ? m_tensor(lhs, rhs) : m_par(lhs, rhs);
    }
    return lhs;
  }

  std::string ident() {
    skip();
    size_t j = i;
    while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) j++;
    if (j == i) fail("expected identifier");
    std::string name = s.substr(i, j - i);
    i = j;
    if (j < s.size() && s[j] == '\'') {
      name += '\'';
      i++;
    }
    return name;
  }

  TypeP type_arg_until(char stop1, char stop2) {
    skip();
    size_t depth = 0;
    size_t j = i;
    for (; j < s.size(); j++) {
      char c = s[j];
      if (c == '(' || c == '{') depth++;
      if (c == ')' || c == '}') {
        if (depth == 0) break;
        depth--;
      }
      if (depth == 0 && (c == stop1 || c == stop2)) break;
    }
    std::string sub = s.substr(i, j - i);
    TypeP t;
    try {
      t = parse_type(sub, allow_meta);
    } catch (ParseError& e) {
      throw ParseError(e.what(), i + e.pos);
    }
    i = j;
    return t;
  }

  TermP atomic() {
    skip();
    if (i >= s.size()) fail("unexpected end of term");
    char c = s[i];
    if (c == '(') {
      i++;
      TermP t = comp();
      skip();
      if (!eat(")")) fail("expected ')'");
      return t;
    }
    if (c == '!') {
      i++;
      skip();
      if (!eat("(")) fail("expected '(' after '!'");
      TermP t = comp();
      if (!eat(")")) fail("expected ')' closing '!('");
      return m_bang(t);
    }
    if (c == '?') {
      if (!allow_meta) fail("term metavariable not allowed here");
      i++;
      std::string name = ident();
      if (!eat("{")) fail("expected '{' after term metavariable");
      TypeP A = type_arg_until(',', '}');
      if (!eat(",")) fail("expected ',' in metavariable boundary");
      TypeP B = type_arg_until('}', '}');
      if (!eat("}")) fail("expected '}'");
      return m_metaterm(name, A, B);
    }
    std::string name = ident();
    if (name == "id") {
      if (!eat("{")) fail("expected '{' after id");
      TypeP A = type_arg_until('}', '}');
      if (!eat("}")) fail("expected '}'");
      return m_id(A);
    }
    if (name == "phi0") return m_gen(Term::Phi0);
    const GenName* g = gen_by_name(name);
    if (!g) fail("unknown generator '" + name + "'");
    TypeP A, B, C;
    if (g->arity > 0) {
      if (!eat("{")) fail("expected '{' after " + name);
      A = type_arg_until(g->arity > 1 ? ',' : '}', '}');
      if (g->arity > 1) {
        if (!eat(",")) fail("expected ','");
        B = type_arg_until(g->arity > 2 ? ',' : '}', '}');
      }
      if (g->arity > 2) {
        if (!eat(",")) fail("expected ','");
        C = type_arg_until('}', '}');
      }
      if (!eat("}")) fail("expected '}'");
    }
    return m_gen(g->kind, A, B, C);
  }
};

}  // namespace

std::string print_term(const TermP& t) {
  std::string out;
  print_rec(t, out, 0);
  return out;
}

TermP parse_term(const std::string& text, bool allow_meta) {
  TermParser p(text, allow_meta);
  return p.parse();
}

}  // namespace lincat
