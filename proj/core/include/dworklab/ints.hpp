#pragma once
// Exact integer / rational scaffolding shared by every module, plus the
// library-wide error type.  All arithmetic that feeds a certified residue is
// done on arbitrary-precision integers; nothing here rounds.

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace dworklab {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Every documented failure mode carries one of these tags so callers (and
// tests) can distinguish "wrong input" from "ran out of certified precision".
enum class Err {
  RingMismatch,
  NotAUnit,
  NoUnitRoot,
  MultipleUnitRoots,
  InsufficientPrecision,
  DivisionFailure,
  NonNuclearInput,
  NotInvertibleAtTruncation,
  NotOrdinaryAtTruncation,
  CongruenceHypothesisViolated,
  CapTooSmall,
  InsufficientTruncation,
  BudgetExceeded,
  CoefficientNotDescendable,
  Stalled,
  NotMonomialUnit,
  IntegralityFailure,
  DegreeCheckFailure,
  SlopeMismatch,
  BadInput,
};

class Error : public std::runtime_error {
 public:
  Error(Err kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Err kind() const { return kind_; }

 private:
  Err kind_;
};

[[noreturn]] inline void fail(Err kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, Err kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

// p-adic valuation of a nonzero integer; the caller handles zero separately.
inline long ord_p(BigInt v, long p) {
  if (v == 0) fail(Err::BadInput, "ord_p(0) undefined; handle zero before calling");
  if (v < 0) v = -v;
  long ord = 0;
  while (v % p == 0) {
    v /= p;
    ++ord;
  }
  return ord;
}

inline BigInt pow_big(BigInt base, unsigned long exp) {
  BigInt r = 1;
  while (exp) {
    if (exp & 1) r *= base;
    base *= base;
    exp >>= 1;
  }
  return r;
}

inline BigInt pow_big(const BigInt& base, const BigInt& exp) {
  require(exp >= 0, Err::BadInput, "pow_big: negative exponent");
  require(exp <= 4'000'000, Err::BudgetExceeded, "pow_big: exponent too large");
  return pow_big(base, exp.convert_to<unsigned long>());
}

// Nonnegative remainder, used everywhere a canonical digit is produced.
inline BigInt mod_pos(const BigInt& v, const BigInt& m) {
  BigInt r = v % m;
  if (r < 0) r += m;
  return r;
}

// Inverse of u modulo m (extended Euclid); u must be coprime to m.
inline BigInt inv_mod(const BigInt& u, const BigInt& m) {
  BigInt a = mod_pos(u, m), b = m;
  BigInt x0 = 1, x1 = 0;
  while (b != 0) {
    BigInt q = a / b;
    BigInt t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
  }
  if (a != 1) fail(Err::NotAUnit, "inv_mod: argument not invertible modulo m");
  return mod_pos(x0, m);
}

// Binomial coefficient C(n, k) for arbitrary (possibly negative) integer n
// and k >= 0.  Always an exact integer.
inline BigInt binomial(const BigInt& n, long k) {
  if (k < 0) return 0;
  BigInt num = 1, den = 1;
  for (long i = 0; i < k; ++i) {
    num *= (n - i);
    den *= (i + 1);
  }
  // The product of k consecutive integers is divisible by k!.
  return num / den;
}

inline std::string to_decimal(const BigInt& v) { return v.str(); }

}  // namespace dworklab
