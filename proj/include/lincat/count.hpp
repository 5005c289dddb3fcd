#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>

namespace lincat {

using BigInt = boost::multiprecision::cpp_int;

// Multiset multiplicity: either an exact natural number or a symbolic prime
// power p^e (e itself exact). Homogeneous counts like p^(p^k) stay symbolic,
// so cardinalities such as p^(p^k) never materialize element by element.
class Count {
 public:
  Count() : nat_(0) {}
  Count(long v) : nat_(v) {}
  Count(BigInt v) : nat_(std::move(v)) {}
  static Count nat(BigInt v) { return Count(std::move(v)); }
  static Count ppow(long p, BigInt exponent);

  bool symbolic() const { return sym_; }
  long base() const { return p_; }
  const BigInt& exponent() const { return exp_; }

  // Concrete value when representable within `max_bits` (default 1<<16 bits).
  std::optional<BigInt> value(unsigned max_bits = 1u << 16) const;

  bool is_zero() const { return !sym_ && nat_ == 0; }
  bool is_one() const;

  Count operator+(const Count& o) const;
  Count operator*(const Count& o) const;
  bool operator==(const Count& o) const;
  bool operator!=(const Count& o) const { return !(*this == o); }
  // Total order for canonical sorting (symbolic compared by exponent).
  bool operator<(const Count& o) const;

  // Is this count a power of p (p^l, l >= 0)? Returns l if so.
  std::optional<BigInt> ppow_log(long p) const;
  // Divisibility for powers of p.
  bool divides(const Count& o, long p) const;

  std::string str() const;
  size_t hash() const;

 private:
  Count(long p, BigInt e) : sym_(true), p_(p), exp_(std::move(e)) {}
  bool sym_ = false;
  BigInt nat_;   // when !sym_
  long p_ = 0;   // when sym_
  BigInt exp_;   // when sym_: value = p^exp_
};

BigInt big_pow(const BigInt& base, const BigInt& exp);
bool is_prime(long p);
long next_prime_above(long n);

}  // namespace lincat
