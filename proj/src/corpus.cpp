#include "lincat/corpus.hpp"

namespace lincat {

TypeP random_type(std::mt19937_64& rng, const CorpusOptions& opts, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 7 : 2);
  switch (pick(rng)) {
    case 0:
    case 1:
    case 2: {
      std::uniform_int_distribution<size_t> ai(0, opts.atoms.size() - 1);
      return t_atom(opts.atoms[ai(rng)]);
    }
    case 3: return t_one();
    case 4: return t_tensor(random_type(rng, opts, depth - 1), random_type(rng, opts, depth - 1));
    case 5: return t_par(random_type(rng, opts, depth - 1), random_type(rng, opts, depth - 1));
    case 6: return t_dual(random_type(rng, opts, depth - 1));
    default: return t_bang(random_type(rng, opts, depth - 1));
  }
}

namespace {

// one random generator (or structural map) applicable out of `A`; identity
// when nothing else fits the shape
TermP random_step(std::mt19937_64& rng, const CorpusOptions& opts, const TypeP& A, int depth) {
  std::vector<TermP> options;
  auto add = [&](TermP t) { options.push_back(std::move(t)); };

  if (A->kind == Type::Bang) {
    add(m_gen(Term::Delta, A->a));
    add(m_gen(Term::Eps, A->a));
    add(m_gen(Term::Dup, A->a));
    add(m_gen(Term::Weak, A->a));
    if (depth > 0) add(m_bang(random_term_from(rng, opts, A->a, depth - 1)));
  }
  if (A->kind == Type::One) {
    add(m_gen(Term::Phi0));
    add(m_gen(Term::Tau, random_type(rng, opts, 1)));
  }
  if (A->kind == Type::Tensor) {
    if (A->a->kind == Type::Bang && A->b->kind == Type::Bang)
      add(m_gen(Term::PhiT, A->a->a, A->b->a));
    if (A->a->kind == Type::Dual && type_eq(A->a->a, A->b)) add(m_gen(Term::Gamma, A->b));
    if (A->a->kind == Type::Tensor)
      add(m_gen(Term::AssocT, A->a->a, A->a->b, A->b));
    if (A->b->kind == Type::Tensor)
      add(m_gen(Term::AssocTInv, A->a, A->b->a, A->b->b));
    add(m_gen(Term::SymT, A->a, A->b));
    if (A->a->kind == Type::One) add(m_gen(Term::LUnitT, A->b));
    if (A->b->kind == Type::One) add(m_gen(Term::RUnitT, A->a));
    if (A->b->kind == Type::Par) add(m_gen(Term::Dist, A->a, A->b->a, A->b->b));
    if (A->a->kind == Type::Par) add(m_gen(Term::DistP, A->a->a, A->a->b, A->b));
    if (depth > 0)
      add(m_tensor(random_term_from(rng, opts, A->a, depth - 1),
                   random_term_from(rng, opts, A->b, depth - 1)));
  }
  if (A->kind == Type::Par) {
    if (A->a->kind == Type::Par) add(m_gen(Term::AssocP, A->a->a, A->a->b, A->b));
    if (A->b->kind == Type::Par) add(m_gen(Term::AssocPInv, A->a, A->b->a, A->b->b));
    add(m_gen(Term::SymP, A->a, A->b));
    if (A->a->kind == Type::Bot) add(m_gen(Term::LUnitP, A->b));
    if (A->b->kind == Type::Bot) add(m_gen(Term::RUnitP, A->a));
    if (depth > 0)
      add(m_par(random_term_from(rng, opts, A->a, depth - 1),
                random_term_from(rng, opts, A->b, depth - 1)));
  }
  // always-applicable unit insertions (kept rare by the weighting below)
  std::uniform_int_distribution<int> rare(0, 5);
  if (rare(rng) == 0) {
    add(m_gen(Term::LUnitTInv, A));
    add(m_gen(Term::RUnitTInv, A));
    add(m_gen(Term::LUnitPInv, A));
    add(m_gen(Term::RUnitPInv, A));
  }
  if (options.empty()) return m_id(A);
  std::uniform_int_distribution<size_t> pick(0, options.size() - 1);
  return options[pick(rng)];
}

}  // namespace

TermP random_term_from(std::mt19937_64& rng, const CorpusOptions& opts, const TypeP& source,
                       int depth) {
  TermP acc = nullptr;
  TypeP cur = source;
  std::uniform_int_distribution<int> len(1, std::max(1, depth));
  int steps = len(rng);
  for (int i = 0; i < steps; i++) {
    TermP step = random_step(rng, opts, cur, depth - 1);
    Judgement j = typecheck(step);
    acc = acc ? m_comp(acc, step) : step;
    cur = j.target;
  }
  return acc ? acc : m_id(source);
}

TermP random_term(std::mt19937_64& rng, const CorpusOptions& opts) {
  TypeP src = random_type(rng, opts, opts.max_type_depth);
  return random_term_from(rng, opts, src, opts.max_depth);
}

std::vector<TermP> corpus(uint64_t seed, size_t count, const CorpusOptions& opts) {
  std::mt19937_64 rng(seed);
  std::vector<TermP> out;
  while (out.size() < count) {
    TermP t = random_term(rng, opts);
    if (term_size(t) < 2) continue;  // skip bare identities
    out.push_back(t);
  }
  return out;
}

}  // namespace lincat
