#pragma once

#include <memory>
#include <string>
#include <vector>

namespace lincat {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  size_t pos;
  ParseError(const std::string& msg, size_t at) : Error(msg), pos(at) {}
};

struct TypeError : Error {
  using Error::Error;
};

// Objects of the free linear category. Duality is a free constructor:
// no quotient by (A^)^ = A or De Morgan.
struct Type;
using TypeP = std::shared_ptr<const Type>;

struct Type {
  enum Kind { Atom, One, Bot, Tensor, Par, Dual, Bang, Meta };
  Kind kind;
  std::string name;  // Atom / Meta
  TypeP a, b;

  bool is(Kind k) const { return kind == k; }
};

TypeP t_atom(const std::string& name);
TypeP t_one();
TypeP t_bot();
TypeP t_tensor(TypeP a, TypeP b);
TypeP t_par(TypeP a, TypeP b);
TypeP t_dual(TypeP a);
TypeP t_bang(TypeP a);
TypeP t_meta(const std::string& name);  // pattern matching only

bool type_eq(const TypeP& x, const TypeP& y);
size_t type_hash(const TypeP& x);
bool type_has_meta(const TypeP& x);
bool type_contains_bang(const TypeP& x);

std::string print_type(const TypeP& t);

// DSL: atoms = lowercase idents, `1`, `#`, `A (x) B`, `A (%) B`, `A^`, `!A`.
// Uppercase idents are metavariables (accepted only when allow_meta).
TypeP parse_type(const std::string& text, bool allow_meta = false);

void collect_atoms(const TypeP& t, std::vector<std::string>& out);

}  // namespace lincat
