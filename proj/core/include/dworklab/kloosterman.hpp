#pragma once
// Exact n-dimensional Kloosterman sums over small finite fields and the
// fibre-level consequences used as the end-to-end instance:
//
//   K(n; ybar / F_{p^Df}) = sum over (F*)^n of zeta_p^{Tr(x_1+...+x_n +
//   ybar/(x_1...x_n))}, an exact algebraic integer in Z[zeta_p];
//
//   the fibre L-polynomial P(T) of degree n+1 with reciprocal-root power sums
//   s_k = (-1)^n K_k reconstructed through Newton's identities (division by k
//   must land back in Z[zeta_p] — IntegralityFailure is a bug signal, not a
//   data condition), with the (n+2)-nd power sum closing the degree claim;
//
//   the slope verification: embedding zeta_p -> 1 + pi into the cyclotomic
//   local ring is exact (the Eisenstein polynomial is Phi_p(1+x)), the
//   coefficient ords are exact integers, and the polygon normalized to ord_q
//   units must be the staircase {0, 1, ..., n}, each slope of length one;
//
//   the unit-root map over the parameter torus: Hensel's unique unit root of
//   each embedded fibre polynomial, feeding the unit-root pipelines.

#include "dworklab/unit_root.hpp"

namespace dworklab {

// Exact element of Z[zeta_p], power basis 1, zeta, ..., zeta^{p-2}; for p = 2
// this degenerates to a single integer (zeta_2 = -1).
struct CyclotomicInt {
  int p = 0;
  std::vector<BigInt> c;

  static CyclotomicInt zero(int p);
  static CyclotomicInt one(int p);
  static CyclotomicInt zeta_pow(int p, long t);

  CyclotomicInt operator+(const CyclotomicInt& o) const;
  CyclotomicInt operator-(const CyclotomicInt& o) const;
  CyclotomicInt operator-() const;
  CyclotomicInt operator*(const CyclotomicInt& o) const;
  bool operator==(const CyclotomicInt& o) const;
  bool operator!=(const CyclotomicInt& o) const { return !(*this == o); }

  bool is_zero() const;
  bool is_rational(BigInt* value = nullptr) const;
  CyclotomicInt galois(long t) const;  // zeta -> zeta^t, p must not divide t
  // Exact division by a nonzero integer; IntegralityFailure if any coefficient
  // does not divide.
  CyclotomicInt divexact_int(const BigInt& m) const;
  std::string to_string() const;
};

inline constexpr long kKloostermanBudget = 50'000'000L;

// Exact K(n; y) over F_{p^Df}; y a nonzero GF(p, Df) code.  (p^Df - 1)^n must
// stay within the budget.
CyclotomicInt kloosterman_sum(int n, int p, int Df, long y_code);

struct KloostermanFibre {
  ClosedPoint point;                 // degree-d parameter ybar on the 1-torus
  int n = 0;
  std::vector<CyclotomicInt> sums;   // K_1 .. K_{n+2} over F_{p^{dk}}
  std::vector<CyclotomicInt> poly;   // P(T) coefficients, degree n+1, poly[0]=1
  bool degree_check = false;         // the (n+2)-nd power sum closed
};

// Sums, Newton reconstruction, and the degree closure for one parameter point.
KloostermanFibre fibre_polynomial(int n, const ClosedPoint& point);

// zeta_p -> 1 + pi (exact since the Eisenstein polynomial is Phi_p(1+x)); for
// p = 2 the value is the plain integer.  R must be a base ring (d = 1) with
// matching p and, for odd p, full cyclotomic ramification.
PAdicScalar embed_cyclotomic(const CyclotomicInt& z, const RingPtr& R);

struct SperberReport {
  NewtonPolygon polygon;  // ord_q units (normalization d * e)
  bool pass = false;
  bool product_ord_ok = false;  // ord_q(e_{n+1}) == n(n+1)/2
  std::vector<std::string> notes;
};

// Builds the polygon of the embedded fibre polynomial and checks the
// staircase slopes {0..n}; strict mode turns a failure into SlopeMismatch.
SperberReport verify_sperber(const KloostermanFibre& fibre, const RingPtr& R,
                             bool strict = false);

// Smallest ring precision that certifies every slope ord the staircase needs
// at parameter degree d.
int kloosterman_ring_precision(int n, int p, int d);

// alpha_0 at every parameter point of ctx (which must be a 1-torus context
// over the matching base ring).
UnitRootFibreMap kloosterman_unit_root_map(int n, TorusContext& ctx);

}  // namespace dworklab
