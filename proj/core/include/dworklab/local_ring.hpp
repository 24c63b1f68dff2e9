#pragma once
// Exact arithmetic in O/pi^N where O is the unramified degree-d extension of
// Z_p, optionally ramified by adjoining lambda = zeta_p - 1 (so pi = lambda,
// e = p - 1, via the Eisenstein relation Phi_p(1 + lambda) = 0).  With the
// trivial choice pi = p and e = 1.
//
// Representation: a scalar is sum_{i<d, j<e} c[i*e+j] * omega^i * lambda^j
// with c[i*e+j] a canonical residue in [0, p^{M_j}), M_j = ceil((N-j)/e).
// That per-slot modulus makes the representation unique per residue class
// modulo pi^N: an integer-coefficient error of size p^{M_j} on the lambda^j
// slot has ord >= j + e*M_j >= N.  omega is the image of x in Z_p[x]/(f) for
// the same deterministic modulus f used by the residue field F_{p^d}.
//
// Scalars are always exact residues mod pi^N of whatever expression produced
// them; aggregate objects (series, matrices) carry separate guaranteed-
// modulus ledgers when divisions spend precision.

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dworklab/gf.hpp"
#include "dworklab/ints.hpp"

namespace dworklab {

enum class Ram { Trivial, Cyclotomic };

class LocalRing;
using RingPtr = std::shared_ptr<const LocalRing>;

class LocalRing : public std::enable_shared_from_this<LocalRing> {
 public:
  static RingPtr make(int p, int d, Ram ram, int N);

  int p() const { return p_; }
  int d() const { return d_; }
  int e() const { return e_; }  // ramification index: 1 or p-1
  int N() const { return N_; }
  Ram ram() const { return ram_; }
  const GF& residue_field() const { return *gf_; }

  long Mj(int j) const { return Mj_[j]; }          // slot precision in p-digits
  const BigInt& pMj(int j) const { return pMj_[j]; }
  const std::vector<int>& unram_modulus() const { return gf_->modulus(); }
  // Eisenstein tail: lambda^e = -(E[0] + E[1]*lambda + ... + E[e-1]*lambda^{e-1});
  // E[j] = binomial(p, j+1), so E[0] = p.  Empty for trivial ramification.
  const std::vector<BigInt>& eisenstein() const { return eis_; }

  bool same_as(const LocalRing& o) const {
    return p_ == o.p_ && d_ == o.d_ && e_ == o.e_ && N_ == o.N_ && ram_ == o.ram_;
  }
  std::string describe() const;

 private:
  LocalRing(int p, int d, Ram ram, int N);
  int p_, d_, e_, N_;
  Ram ram_;
  std::shared_ptr<GF> gf_;
  std::vector<BigInt> eis_;
  std::vector<long> Mj_;
  std::vector<BigInt> pMj_;
};

class PAdicScalar {
 public:
  PAdicScalar() = default;

  static PAdicScalar zero(const RingPtr& R);
  static PAdicScalar one(const RingPtr& R);
  static PAdicScalar from_int(const RingPtr& R, const BigInt& v);
  // Coefficients in slot order c[i*e+j]; reduced canonically on entry.
  static PAdicScalar from_coeffs(const RingPtr& R, std::vector<BigInt> c);
  // The uniformizer: lambda (cyclotomic; equals -2 when p = 2) or p (trivial).
  static PAdicScalar pi(const RingPtr& R);
  // Teichmuller lift of a residue-field element: iterate t -> t^{p^d} on the
  // digit lift until fixed.  Satisfies t^{p^d} = t exactly mod pi^N.
  static PAdicScalar teichmuller(const RingPtr& R, long gf_code);

  const RingPtr& ring() const { return R_; }
  bool valid() const { return static_cast<bool>(R_); }
  const std::vector<BigInt>& coeffs() const { return c_; }

  PAdicScalar operator+(const PAdicScalar& o) const;
  PAdicScalar operator-(const PAdicScalar& o) const;
  PAdicScalar operator-() const;
  PAdicScalar operator*(const PAdicScalar& o) const;
  PAdicScalar& operator+=(const PAdicScalar& o) { return *this = *this + o; }
  PAdicScalar& operator-=(const PAdicScalar& o) { return *this = *this - o; }
  PAdicScalar& operator*=(const PAdicScalar& o) { return *this = *this * o; }
  bool operator==(const PAdicScalar& o) const;
  bool operator!=(const PAdicScalar& o) const { return !(*this == o); }

  bool is_zero() const;  // zero residue mod pi^N
  // pi-adic valuation of the residue; returns N (the AT_LEAST_N sentinel) for
  // the zero residue.  Exact for nonzero residues.
  long ord_pi() const;
  // True iff the two residues agree modulo pi^t (t <= N).
  bool congruent(const PAdicScalar& o, long t) const;

  PAdicScalar mul_int(const BigInt& v) const;
  PAdicScalar mul_pi(long t = 1) const;
  // Exact division by pi^t; throws DivisionFailure if ord < t.  The quotient
  // is certified mod pi^{N-t}; the stored digits above that are the exact
  // quotient of this stored residue (deterministic).
  PAdicScalar divexact_pi(long t = 1) const;
  // Exact division by a nonzero integer m = +-p^t*u; certified mod pi^{N-e*t}.
  // Throws DivisionFailure if the p-part does not divide.
  PAdicScalar divexact_int(const BigInt& m) const;
  // Newton inversion of a unit (NotAUnit if the residue vanishes mod pi).
  PAdicScalar invert_unit() const;
  // Integer powers; negative exponents invert first (unit required).
  PAdicScalar pow(const BigInt& k) const;

  // Image in the residue field F_{p^d}, as a GF code.
  long residue_code() const;
  // Embed a base-ring scalar (d = 1, same p/ram/N) into this wider ring.
  static PAdicScalar embed_base(const RingPtr& target, const PAdicScalar& s);
  // Inverse of embed_base: requires all omega^{>=1} coordinates to vanish,
  // else throws CoefficientNotDescendable.
  PAdicScalar descend_to_base(const RingPtr& base) const;

  std::vector<std::string> digit_strings() const;
  std::string to_string() const;

 private:
  PAdicScalar(RingPtr R, std::vector<BigInt> c) : R_(std::move(R)), c_(std::move(c)) {}
  void canonicalize();
  RingPtr R_;
  std::vector<BigInt> c_;
};

// ord_pi(a - b); N means the residues agree everywhere we can see.
long diff_ord(const PAdicScalar& a, const PAdicScalar& b);

// ---- Newton polygons -------------------------------------------------------

struct NewtonPolygon {
  // Lower convex hull vertices (x, y/normalization) and the ascending slope
  // segments (slope, horizontal length).  Points whose valuation is only
  // known as "at least N" are excluded (apparent polygon).
  std::vector<std::pair<long, BigRat>> vertices;
  std::vector<std::pair<BigRat, long>> segments;
};

NewtonPolygon newton_polygon(const std::vector<std::optional<BigRat>>& ords,
                             const BigRat& normalization);

// ---- Hensel lifting of the unique unit reciprocal root ---------------------

// P = 1 + c_1 T + ... with exactly one unit reciprocal root: requires the
// mod-pi reduction to be 1 - abar*T of T-degree exactly 1 (NoUnitRoot /
// MultipleUnitRoots otherwise).  Iterates Newton on the reversed polynomial;
// the result is stable under raising N.
PAdicScalar hensel_unit_root(const std::vector<PAdicScalar>& P);

// ---- Ring towers ------------------------------------------------------------

// Base parameters fixed (p, ram, N); hands out the unramified degree-d
// extension on demand and caches it so all users share residue-field tables.
class RingTower {
 public:
  explicit RingTower(RingPtr base) : base_(std::move(base)) {
    require(base_->d() == 1, Err::BadInput, "RingTower: base ring must have d = 1");
  }
  const RingPtr& base() const { return base_; }
  RingPtr at_degree(int d);

 private:
  RingPtr base_;
  std::vector<RingPtr> cache_;
};

}  // namespace dworklab
