#include "lincat/count.hpp"

#include "lincat/type.hpp"

namespace lincat {

BigInt big_pow(const BigInt& base, const BigInt& exp) {
  if (exp < 0) throw Error("big_pow: negative exponent");
  BigInt r = 1, b = base, e = exp;
  while (e > 0) {
    if (e % 2 == 1) r *= b;
    b *= b;
    e /= 2;
  }
  return r;
}

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; d++)
    if (p % d == 0) return false;
  return true;
}

long next_prime_above(long n) {
  long p = n + 1;
  while (!is_prime(p)) p++;
  return p;
}

Count Count::ppow(long p, BigInt exponent) {
  if (exponent == 0) return Count(BigInt(1));
  return Count(p, std::move(exponent));
}

bool Count::is_one() const {
  if (!sym_) return nat_ == 1;
  return exp_ == 0;
}

std::optional<BigInt> Count::value(unsigned max_bits) const {
  if (!sym_) return nat_;
  // bits of p^e ~ e*log2(p); reject when too large
  BigInt bits = exp_ * (64 - __builtin_clzl((unsigned long)p_));
  if (bits > max_bits) return std::nullopt;
  return big_pow(BigInt(p_), exp_);
}

Count Count::operator+(const Count& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  if (!sym_ && !o.sym_) return Count(nat_ + o.nat_);
  auto a = value(), b = o.value();
  if (a && b) return Count(*a + *b);
  throw Error("Count: sum of symbolic counts is not a prime power; cannot represent");
}

Count Count::operator*(const Count& o) const {
  if (!sym_ && !o.sym_) return Count(nat_ * o.nat_);
  if (sym_ && o.sym_) {
    if (p_ != o.p_) throw Error("Count: mixed prime bases");
    return Count(p_, exp_ + o.exp_);
  }
  const Count& s = sym_ ? *this : o;
  const Count& n = sym_ ? o : *this;
  if (n.nat_ == 0) return Count(BigInt(0));
  if (n.nat_ == 1) return s;
  // fold small naturals that are powers of p into the exponent
  BigInt v = n.nat_;
  BigInt extra = 0;
  while (v % s.p_ == 0) {
    v /= s.p_;
    extra++;
  }
  if (v == 1) return Count(s.p_, s.exp_ + extra);
  auto sv = s.value();
  if (sv) return Count(*sv * n.nat_);
  throw Error("Count: product not representable");
}

bool Count::operator==(const Count& o) const {
  if (sym_ == o.sym_) {
    if (!sym_) return nat_ == o.nat_;
    return p_ == o.p_ && exp_ == o.exp_;
  }
  auto a = value(), b = o.value();
  if (a && b) return *a == *b;
  return false;
}

bool Count::operator<(const Count& o) const {
  auto a = value(1024), b = o.value(1024);
  if (a && b) return *a < *b;
  if (a && !b) return true;
  if (!a && b) return false;
  if (p_ != o.p_) return p_ < o.p_;
  return exp_ < o.exp_;
}

std::optional<BigInt> Count::ppow_log(long p) const {
  if (sym_) {
    if (p_ != p) return std::nullopt;
    return exp_;
  }
  if (nat_ <= 0) return std::nullopt;
  BigInt v = nat_;
  BigInt l = 0;
  while (v % p == 0) {
    v /= p;
    l++;
  }
  if (v != 1) return std::nullopt;
  return l;
}

bool Count::divides(const Count& o, long p) const {
  auto la = ppow_log(p), lb = o.ppow_log(p);
  if (la && lb) return *la <= *lb;
  auto a = value(), b = o.value();
  if (a && b) return *a != 0 && *b % *a == 0;
  return false;
}

std::string Count::str() const {
  if (!sym_) return nat_.str();
  return "p^" + exp_.str();
}

size_t Count::hash() const {
  if (!sym_) return std::hash<std::string>()(nat_.str());
  return std::hash<std::string>()("p^" + exp_.str()) * 31 + (size_t)p_;
}

}  // namespace lincat
