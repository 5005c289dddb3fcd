#include "lincat/element.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <unordered_map>

namespace lincat {

namespace {

struct Pool {
  std::deque<ElemNode> nodes;  // deque: stable references across interning
  std::unordered_map<size_t, std::vector<ElemId>> buckets;

  size_t node_hash(const ElemNode& n) {
    size_t h = std::hash<int>()(n.kind);
    auto mix = [&h](size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
    mix(std::hash<std::string>()(n.atom));
    mix((size_t)(n.a + 1));
    mix((size_t)(n.b + 1));
    for (auto& [e, c] : n.mset) {
      mix((size_t)e);
      mix(c.hash());
    }
    return h;
  }

  bool node_eq(const ElemNode& x, const ElemNode& y) {
    if (x.kind != y.kind || x.atom != y.atom || x.a != y.a || x.b != y.b) return false;
    if (x.mset.size() != y.mset.size()) return false;
    for (size_t i = 0; i < x.mset.size(); i++)
      if (x.mset[i].first != y.mset[i].first || !(x.mset[i].second == y.mset[i].second))
        return false;
    return true;
  }

  ElemId intern(ElemNode n) {
    size_t h = node_hash(n);
    auto& bucket = buckets[h];
    for (ElemId id : bucket)
      if (node_eq(nodes[id], n)) return id;
    nodes.push_back(std::move(n));
    ElemId id = (ElemId)(nodes.size() - 1);
    bucket.push_back(id);
    return id;
  }
};

Pool& pool() {
  static Pool p;
  return p;
}

}  // namespace

const ElemNode& elem(ElemId id) { return pool().nodes[id]; }

ElemId e_atom(const std::string& label) {
  ElemNode n;
  n.kind = ElemNode::AtomVal;
  n.atom = label;
  return pool().intern(std::move(n));
}

ElemId e_star() {
  ElemNode n;
  n.kind = ElemNode::Star;
  return pool().intern(std::move(n));
}

ElemId e_pair(ElemId a, ElemId b) {
  ElemNode n;
  n.kind = ElemNode::PairVal;
  n.a = a;
  n.b = b;
  return pool().intern(std::move(n));
}

ElemId e_bar(ElemId a) {
  ElemNode n;
  n.kind = ElemNode::BarVal;
  n.a = a;
  return pool().intern(std::move(n));
}

int elem_cmp(ElemId x, ElemId y) {
  if (x == y) return 0;
  const ElemNode& a = elem(x);
  const ElemNode& b = elem(y);
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  switch (a.kind) {
    case ElemNode::AtomVal: return a.atom < b.atom ? -1 : (a.atom == b.atom ? 0 : 1);
    case ElemNode::Star: return 0;
    case ElemNode::PairVal: {
      int c = elem_cmp(a.a, b.a);
      if (c) return c;
      return elem_cmp(a.b, b.b);
    }
    case ElemNode::BarVal: return elem_cmp(a.a, b.a);
    case ElemNode::MSetVal: {
      size_t n = std::min(a.mset.size(), b.mset.size());
      for (size_t i = 0; i < n; i++) {
        int c = elem_cmp(a.mset[i].first, b.mset[i].first);
        if (c) return c;
        const Count& ca = a.mset[i].second;
        const Count& cb = b.mset[i].second;
        if (!(ca == cb)) return ca < cb ? -1 : 1;
      }
      if (a.mset.size() != b.mset.size()) return a.mset.size() < b.mset.size() ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

// Representation canonicalization: symbolic counts that fit in 4096 bits
// become exact naturals, so equal values always intern identically.
static Count canon_count(const Count& c) {
  if (!c.symbolic()) return c;
  auto v = c.value(4096);
  if (v) return Count(*v);
  return c;
}

ElemId e_mset(std::vector<std::pair<ElemId, Count>> entries) {
  // merge equal keys, drop zeros, sort canonically
  std::sort(entries.begin(), entries.end(),
            [](const auto& x, const auto& y) { return elem_cmp(x.first, y.first) < 0; });
  std::vector<std::pair<ElemId, Count>> merged;
  for (auto& [e, c0] : entries) {
    Count c = canon_count(c0);
    if (c.is_zero()) continue;
    if (!merged.empty() && merged.back().first == e)
      merged.back().second = canon_count(merged.back().second + c);
    else
      merged.emplace_back(e, c);
  }
  ElemNode n;
  n.kind = ElemNode::MSetVal;
  n.mset = std::move(merged);
  return pool().intern(std::move(n));
}

ElemId e_empty_mset() { return e_mset({}); }

ElemId mset_union(ElemId x, ElemId y) {
  const ElemNode& a = elem(x);
  const ElemNode& b = elem(y);
  if (a.kind != ElemNode::MSetVal || b.kind != ElemNode::MSetVal)
    throw Error("mset_union: not multisets");
  auto entries = a.mset;
  entries.insert(entries.end(), b.mset.begin(), b.mset.end());
  return e_mset(std::move(entries));
}

Count mset_card(ElemId m) {
  const ElemNode& n = elem(m);
  if (n.kind != ElemNode::MSetVal) throw Error("mset_card: not a multiset");
  Count total(0);
  for (auto& [e, c] : n.mset) total = total + c;
  return total;
}

bool mset_is_homogeneous(ElemId m) {
  const ElemNode& n = elem(m);
  if (n.kind != ElemNode::MSetVal) throw Error("mset_is_homogeneous: not a multiset");
  return n.mset.size() <= 1;
}

ElemId strip_bars(ElemId e) {
  const ElemNode& n = elem(e);
  switch (n.kind) {
    case ElemNode::AtomVal:
    case ElemNode::Star: return e;
    case ElemNode::BarVal: return strip_bars(n.a);
    case ElemNode::PairVal: return e_pair(strip_bars(n.a), strip_bars(n.b));
    case ElemNode::MSetVal: {
      std::vector<std::pair<ElemId, Count>> entries;
      for (auto& [x, c] : n.mset) entries.emplace_back(strip_bars(x), c);
      return e_mset(std::move(entries));
    }
  }
  return e;
}

static ElemId decorate_stripped(ElemId e, const TypeP& type) {
  switch (type->kind) {
    case Type::Atom:
    case Type::One:
    case Type::Bot: return e;
    case Type::Dual: return e_bar(decorate_stripped(e, type->a));
    case Type::Tensor:
    case Type::Par: {
      const ElemNode& n = elem(e);
      if (n.kind != ElemNode::PairVal) throw Error("decorate_bars: expected pair");
      return e_pair(decorate_stripped(n.a, type->a), decorate_stripped(n.b, type->b));
    }
    case Type::Bang: {
      const ElemNode& n = elem(e);
      if (n.kind != ElemNode::MSetVal) throw Error("decorate_bars: expected multiset");
      std::vector<std::pair<ElemId, Count>> entries;
      for (auto& [x, c] : n.mset) entries.emplace_back(decorate_stripped(x, type->a), c);
      return e_mset(std::move(entries));
    }
    case Type::Meta: throw Error("decorate_bars: metavariable type");
  }
  return e;
}

ElemId decorate_bars(ElemId e, const TypeP& type) { return decorate_stripped(strip_bars(e), type); }

// ---- printing / parsing ----

std::string print_element(ElemId e) {
  const ElemNode& n = elem(e);
  switch (n.kind) {
    case ElemNode::AtomVal: return n.atom;
    case ElemNode::Star: return "*";
    case ElemNode::PairVal: return "(" + print_element(n.a) + "," + print_element(n.b) + ")";
    case ElemNode::BarVal: return "bar(" + print_element(n.a) + ")";
    case ElemNode::MSetVal: {
      std::string out = "{";
      bool first = true;
      for (auto& [x, c] : n.mset) {
        if (!first) out += ", ";
        first = false;
        out += print_element(x);
        if (!c.is_one() || c.symbolic()) {
          out += ":";
          if (c.symbolic()) {
            // exponent printed as a sum of p-powers (base-p digits)
            BigInt rem = c.exponent();
            long p = c.base();
            std::vector<std::string> terms;
            long k = 0;
            while (rem > 0) {
              BigInt digit = rem % p;
              rem /= p;
              for (BigInt d = 0; d < digit; d++) terms.push_back("p^" + std::to_string(k));
              k++;
            }
            std::string exp;
            for (size_t t = 0; t < terms.size(); t++) {
              if (t) exp += " + ";
              exp += terms[t];
            }
            if (exp.empty()) exp = "0";
            out += "p^(" + exp + ")";
          } else {
            out += c.str();
          }
        }
      }
      out += "}";
      return out;
    }
  }
  return "?";
}

namespace {

struct ElemParser {
  const std::string& s;
  size_t i = 0;
  explicit ElemParser(const std::string& text) : s(text) {}

  void skip() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) i++;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      i++;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& m) { throw ParseError(m, i); }

  ElemId parse() {
    ElemId e = element();
    skip();
    if (i != s.size()) fail("trailing input in element");
    return e;
  }

  ElemId element() {
    skip();
    if (i >= s.size()) fail("unexpected end of element");
    char c = s[i];
    if (c == '*') {
      i++;
      return e_star();
    }
    if (c == '(') {
      i++;
      ElemId a = element();
      if (!eat(',')) fail("expected ',' in pair");
      ElemId b = element();
      if (!eat(')')) fail("expected ')'");
      return e_pair(a, b);
    }
    if (c == '{') {
      i++;
      std::vector<std::pair<ElemId, Count>> entries;
      skip();
      if (eat('}')) return e_mset({});
      for (;;) {
        ElemId x = element();
        Count cnt(1);
        skip();
        if (eat(':')) {
          skip();
          size_t j = i;
          while (j < s.size() && std::isdigit((unsigned char)s[j])) j++;
          if (j == i) fail("expected count");
          cnt = Count(BigInt(s.substr(i, j - i)));
          i = j;
        }
        entries.emplace_back(x, cnt);
        if (eat('}')) break;
        if (!eat(',')) fail("expected ',' or '}' in multiset");
      }
      return e_mset(std::move(entries));
    }
    if (std::isalpha((unsigned char)c)) {
      size_t j = i;
      while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) j++;
      std::string name = s.substr(i, j - i);
      i = j;
      if (name == "bar") {
        if (!eat('(')) fail("expected '(' after bar");
        ElemId a = element();
        if (!eat(')')) fail("expected ')'");
        return e_bar(a);
      }
      return e_atom(name);
    }
    fail(std::string("unexpected character '") + c + "' in element");
  }
};

}  // namespace

ElemId parse_element(const std::string& text) {
  ElemParser p(text);
  return p.parse();
}

// ---- decompositions ----

namespace {

void compositions(const BigInt& v, size_t n, std::vector<Count>& cur,
                  std::vector<std::vector<Count>>& out) {
  if (n == 1) {
    cur.push_back(Count(v));
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (BigInt k = 0; k <= v; k++) {
    cur.push_back(Count(k));
    compositions(v - k, n - 1, cur, out);
    cur.pop_back();
  }
}

// All ways to split one entry's count across n ordered parts. Symbolic counts
// go whole to one part: a prime power p^e with e >= 1 cannot be written as a
// sum of fewer than p smaller prime powers, and only prime-power chunks can
// survive downstream, so all-or-nothing is exhaustive for them. The same
// applies to huge concrete counts when they are p-powers and the caller is
// computing residues.
std::vector<std::vector<Count>> count_splits(const Count& c, size_t n, long modp_base) {
  std::vector<std::vector<Count>> out;
  auto all_or_nothing = [&]() {
    for (size_t j = 0; j < n; j++) {
      std::vector<Count> row(n, Count(0));
      row[j] = c;
      out.push_back(std::move(row));
    }
  };
  if (c.symbolic()) {
    all_or_nothing();
    return out;
  }
  auto v = c.value();
  if (!v || *v > 128) {
    if (modp_base && c.ppow_log(modp_base)) {
      all_or_nothing();
      return out;
    }
    throw Error("ordered_splits: count too large to enumerate");
  }
  std::vector<Count> cur;
  compositions(*v, n, cur, out);
  return out;
}

}  // namespace

std::vector<std::vector<ElemId>> ordered_splits(ElemId m, size_t n, long modp_base) {
  const ElemNode& node = elem(m);
  if (node.kind != ElemNode::MSetVal) throw Error("ordered_splits: not a multiset");
  std::vector<std::vector<ElemId>> result;
  if (n == 0) {
    if (node.mset.empty()) result.push_back({});
    return result;
  }
  if (node.mset.empty()) {
    result.push_back(std::vector<ElemId>(n, e_empty_mset()));
    return result;
  }
  // for each entry, the ways to split its count across n parts
  auto entries = node.mset;
  std::vector<std::vector<std::vector<Count>>> per_entry;
  for (auto& [e, c] : entries) per_entry.push_back(count_splits(c, n, modp_base));
  // cartesian product
  std::vector<size_t> idx(per_entry.size(), 0);
  for (;;) {
    std::vector<std::vector<std::pair<ElemId, Count>>> parts(n);
    for (size_t t = 0; t < per_entry.size(); t++) {
      const auto& split = per_entry[t][idx[t]];
      for (size_t k = 0; k < n; k++)
        if (!split[k].is_zero()) parts[k].emplace_back(entries[t].first, split[k]);
    }
    std::vector<ElemId> row;
    for (auto& p : parts) row.push_back(e_mset(std::move(p)));
    result.push_back(std::move(row));
    // advance
    size_t t = 0;
    for (; t < per_entry.size(); t++) {
      if (++idx[t] < per_entry[t].size()) break;
      idx[t] = 0;
    }
    if (t == per_entry.size()) break;
  }
  return result;
}

std::vector<std::pair<ElemId, ElemId>> ordered_splits2(ElemId m) {
  std::vector<std::pair<ElemId, ElemId>> out;
  for (auto& row : ordered_splits(m, 2)) out.emplace_back(row[0], row[1]);
  return out;
}

std::vector<std::vector<ElemId>> unordered_partitions(ElemId m, size_t n) {
  auto ordered = ordered_splits(m, n);
  std::vector<std::vector<ElemId>> out;
  for (auto& row : ordered) {
    auto sorted = row;
    std::sort(sorted.begin(), sorted.end(), [](ElemId x, ElemId y) { return elem_cmp(x, y) < 0; });
    bool seen = false;
    for (auto& prev : out)
      if (prev == sorted) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(std::move(sorted));
  }
  return out;
}

std::vector<std::vector<ElemId>> dispositions(ElemId m, size_t cap) {
  const ElemNode& node = elem(m);
  if (node.kind != ElemNode::MSetVal) throw Error("dispositions: not a multiset");
  std::vector<ElemId> flat;
  for (auto& [e, c] : node.mset) {
    auto v = c.value(64);
    if (!v) throw Error("dispositions: count too large to materialize");
    if (*v > (long)cap) throw Error("dispositions: multiset cardinality exceeds cap");
    for (BigInt k = 0; k < *v; k++) flat.push_back(e);
    if (flat.size() > cap) throw Error("dispositions: multiset cardinality exceeds cap");
  }
  std::sort(flat.begin(), flat.end());
  std::vector<std::vector<ElemId>> out;
  do {
    out.push_back(flat);
  } while (std::next_permutation(flat.begin(), flat.end()));
  return out;
}

}  // namespace lincat
