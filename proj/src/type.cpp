#include "lincat/type.hpp"

#include <cctype>
#include <functional>
#include <unordered_set>

namespace lincat {

static TypeP mk(Type::Kind k, std::string name, TypeP a, TypeP b) {
  auto t = std::make_shared<Type>();
  t->kind = k;
  t->name = std::move(name);
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}

TypeP t_atom(const std::string& name) { return mk(Type::Atom, name, nullptr, nullptr); }
TypeP t_one() {
  static TypeP one = mk(Type::One, "", nullptr, nullptr);
  return one;
}
TypeP t_bot() {
  static TypeP bot = mk(Type::Bot, "", nullptr, nullptr);
  return bot;
}
TypeP t_tensor(TypeP a, TypeP b) { return mk(Type::Tensor, "", std::move(a), std::move(b)); }
TypeP t_par(TypeP a, TypeP b) { return mk(Type::Par, "", std::move(a), std::move(b)); }
TypeP t_dual(TypeP a) { return mk(Type::Dual, "", std::move(a), nullptr); }
TypeP t_bang(TypeP a) { return mk(Type::Bang, "", std::move(a), nullptr); }
TypeP t_meta(const std::string& name) { return mk(Type::Meta, name, nullptr, nullptr); }

bool type_eq(const TypeP& x, const TypeP& y) {
  if (x.get() == y.get()) return true;
  if (!x || !y) return false;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case Type::Atom:
    case Type::Meta: return x->name == y->name;
    case Type::One:
    case Type::Bot: return true;
    case Type::Dual:
    case Type::Bang: return type_eq(x->a, y->a);
    case Type::Tensor:
    case Type::Par: return type_eq(x->a, y->a) && type_eq(x->b, y->b);
  }
  return false;
}

size_t type_hash(const TypeP& x) {
  if (!x) return 0;
  size_t h = std::hash<int>()(x->kind);
  auto mix = [&h](size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  if (x->kind == Type::Atom || x->kind == Type::Meta) mix(std::hash<std::string>()(x->name));
  if (x->a) mix(type_hash(x->a));
  if (x->b) mix(type_hash(x->b));
  return h;
}

bool type_has_meta(const TypeP& x) {
  if (!x) return false;
  if (x->kind == Type::Meta) return true;
  return type_has_meta(x->a) || type_has_meta(x->b);
}

bool type_contains_bang(const TypeP& x) {
  if (!x) return false;
  if (x->kind == Type::Bang) return true;
  return type_contains_bang(x->a) || type_contains_bang(x->b);
}

void collect_atoms(const TypeP& t, std::vector<std::string>& out) {
  if (!t) return;
  if (t->kind == Type::Atom) {
    for (auto& s : out)
      if (s == t->name) return;
    out.push_back(t->name);
  }
  collect_atoms(t->a, out);
  collect_atoms(t->b, out);
}

// ---- printing ----

// Precedence: infix (x)/(%) lowest; ! binds tighter; postfix ^ tightest.
static void print_rec(const TypeP& t, std::string& out, bool infix_ctx) {
  switch (t->kind) {
    case Type::Atom:
    case Type::Meta: out += t->name; break;
    case Type::One: out += '1'; break;
    case Type::Bot: out += '#'; break;
    case Type::Tensor:
    case Type::Par: {
      if (infix_ctx) out += '(';
      // left-assoc chains of the same operator print without parens
      const char* op = t->kind == Type::Tensor ? " (x) " : " (%) ";
      std::function<void(const TypeP&)> left = [&](const TypeP& u) {
        if (u->kind == t->kind) {
          left(u->a);
          out += op;
          print_rec(u->b, out, true);
        } else {
          print_rec(u, out, true);
        }
      };
      left(t->a);
      out += op;
      print_rec(t->b, out, true);
      if (infix_ctx) out += ')';
      break;
    }
    case Type::Dual: {
      bool paren = t->a->kind == Type::Tensor || t->a->kind == Type::Par ||
                   t->a->kind == Type::Bang;
      if (paren) out += '(';
      print_rec(t->a, out, !paren && infix_ctx);
      if (paren) out += ')';
      out += '^';
      break;
    }
    case Type::Bang: {
      out += '!';
      bool paren = t->a->kind == Type::Tensor || t->a->kind == Type::Par ||
                   t->a->kind == Type::Dual;
      if (paren) out += '(';
      print_rec(t->a, out, false);
      if (paren) out += ')';
      break;
    }
  }
}

std::string print_type(const TypeP& t) {
  std::string out;
  print_rec(t, out, false);
  return out;
}

// ---- parsing ----

namespace {

struct TypeParser {
  const std::string& s;
  size_t i = 0;
  bool allow_meta;

  explicit TypeParser(const std::string& text, bool meta) : s(text), allow_meta(meta) {}

  void skip() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) i++;
  }
  bool eat(const std::string& tok) {
    skip();
    if (s.compare(i, tok.size(), tok) == 0) {
      i += tok.size();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, i); }

  TypeP parse() {
    TypeP t = infix();
    skip();
    if (i != s.size()) fail("trailing input in type");
    return t;
  }

  // tensor and par have equal precedence; mixing requires parentheses
  TypeP infix() {
    TypeP lhs = unary();
    skip();
    int op = 0;  // 0 none, 1 tensor, 2 par
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
        fail("mixing (x) and (%) requires parentheses");
      }
      op = here;
      TypeP rhs = unary();
      lhs = op == 1 ? t_tensor(lhs, rhs) : t_par(lhs, rhs);
    }
    return lhs;
  }

  TypeP unary() {
    skip();
    if (i < s.size() && s[i] == '!') {
      i++;
      return t_bang(unary_postfix_of_bang());
    }
    return postfix();
  }

  // `!` binds a postfix-expr: !a^ parses as !(a^)
  TypeP unary_postfix_of_bang() {
    skip();
    if (i < s.size() && s[i] == '!') {
      i++;
      return t_bang(unary_postfix_of_bang());
    }
    return postfix();
  }

  TypeP postfix() {
    TypeP t = primary();
    for (;;) {
      skip();
      if (i < s.size() && s[i] == '^') {
        i++;
        t = t_dual(t);
      } else
        break;
    }
    return t;
  }

  TypeP primary() {
    skip();
    if (i >= s.size()) fail("unexpected end of type");
    char c = s[i];
    if (c == '(') {
      // lookahead: "(x)" / "(%)" handled by infix; a bare '(' groups
      i++;
      TypeP t = infix();
      skip();
      if (i >= s.size() || s[i] != ')') fail("expected ')'");
      i++;
      // grouped subterm may still take postfix ^
      for (;;) {
        skip();
        if (i < s.size() && s[i] == '^') {
          i++;
          t = t_dual(t);
        } else
          break;
      }
      return t;
    }
    if (c == '1') {
      i++;
      return t_one();
    }
    if (c == '#') {
      i++;
      return t_bot();
    }
    if (std::islower((unsigned char)c)) {
      size_t j = i;
      while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) j++;
      std::string name = s.substr(i, j - i);
      i = j;
      return t_atom(name);
    }
    if (std::isupper((unsigned char)c)) {
      if (!allow_meta) fail("uppercase type metavariable not allowed here");
      size_t j = i;
      while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) j++;
      std::string name = s.substr(i, j - i);
      i = j;
      return t_meta(name);
    }
    fail(std::string("unexpected character '") + c + "' in type");
  }
};

}  // namespace

TypeP parse_type(const std::string& text, bool allow_meta) {
  TypeParser p(text, allow_meta);
  return p.parse();
}

}  // namespace lincat
