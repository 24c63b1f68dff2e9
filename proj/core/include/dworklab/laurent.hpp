#pragma once
// Truncated Laurent series on the n-torus: finitely many monomials X^u with
// |u| = sum_i |u_i| <= U, p-adic scalar coefficients, plus two honesty
// ledgers.
//
//  * scalar_modulus: the stored coefficients are exact residues mod
//    pi^{scalar_modulus} of the intended value (divisions spend this down).
//  * drop_floor: minimum ord over every coefficient ever clipped away by the
//    support box ("drop and record"); LONG_MAX while nothing was dropped.
//    Downstream evaluations at unit points are certified only modulo
//    pi^{min(scalar_modulus, drop_floor)}.
//
// A TailCert is a *declared* decay class for the infinite object a stored
// series stands for: ord(coeff at u) >= r*|u| (Over) or >= c*log_q|u| (CLog).
// Construction validates the declaration against the stored support; products
// propagate the class by the weakest-precondition rules (Over is pointwise,
// CLog only asymptotically, hence the epsilon haircut).

#include <climits>
#include <map>
#include <optional>
#include <vector>

#include "dworklab/local_ring.hpp"

namespace dworklab {

using Expo = std::vector<int>;

inline long l1(const Expo& u) {
  long s = 0;
  for (int v : u) s += v < 0 ? -v : v;
  return s;
}

struct TailCert {
  enum class Kind { None, CLog, Over };
  Kind kind = Kind::None;
  BigRat param = 0;

  static TailCert none() { return {}; }
  static TailCert clog(const BigRat& c) { return {Kind::CLog, c}; }
  static TailCert over(const BigRat& r) { return {Kind::Over, r}; }
};

// Haircut applied when combining CLog certificates multiplicatively.
inline const BigRat kCertEpsilon = BigRat(1, 8);

class TruncatedLaurent {
 public:
  TruncatedLaurent() = default;
  // entries: (exponent, coefficient); clips nothing (throws if |u| > U).
  static TruncatedLaurent make(const RingPtr& R, int n, int U,
                               const std::vector<std::pair<Expo, PAdicScalar>>& entries,
                               TailCert cert = TailCert::none());
  static TruncatedLaurent zero(const RingPtr& R, int n, int U);
  static TruncatedLaurent constant(const RingPtr& R, int n, int U, const PAdicScalar& c);
  static TruncatedLaurent monomial(const RingPtr& R, int n, int U, const Expo& u,
                                   const PAdicScalar& c);

  const RingPtr& ring() const { return R_; }
  int n() const { return n_; }
  int U() const { return U_; }
  const std::map<Expo, PAdicScalar>& support() const { return a_; }
  const TailCert& cert() const { return cert_; }
  long scalar_modulus() const { return scalar_modulus_; }
  long drop_floor() const { return drop_floor_; }
  bool tail_exact() const { return drop_floor_ == LONG_MAX; }
  // Certified modulus for anything folding the tail back in (evaluation).
  long eval_modulus() const { return std::min<long>(scalar_modulus_, drop_floor_); }

  PAdicScalar coeff(const Expo& u) const;  // zero scalar if absent
  bool is_zero() const;
  // min ord over stored coefficients; ring N (AT_LEAST_N) if support empty.
  long ord() const;
  // Exponents where the coefficient is a unit (the mod-pi support).
  std::vector<Expo> unit_support() const;
  // If the mod-pi reduction is a single monomial c*X^w, returns w.
  std::optional<Expo> single_unit_monomial() const;

  TruncatedLaurent operator+(const TruncatedLaurent& o) const;
  TruncatedLaurent operator-(const TruncatedLaurent& o) const;
  TruncatedLaurent operator-() const;
  TruncatedLaurent operator*(const TruncatedLaurent& o) const;
  bool operator==(const TruncatedLaurent& o) const;  // stored data only

  TruncatedLaurent mul_scalar(const PAdicScalar& s) const;
  TruncatedLaurent mul_pi(long t = 1) const;
  // Exact division by pi^t on every coefficient; spends t of scalar_modulus.
  TruncatedLaurent divexact_pi(long t = 1) const;

  // sigma(X^u) = X^{qu}; exponents leaving the box are dropped and recorded.
  TruncatedLaurent sigma_act(int q) const;

  // Inverse of a series whose mod-pi reduction is a single monomial (the only
  // units of the truncated Laurent ring); geometric series in the pi-divisible
  // part.  Throws NotInvertibleAtTruncation otherwise.
  TruncatedLaurent invert_unit() const;

  // Value at a point with unit Teichmuller coordinates living in ring Rd
  // (coefficients are embedded from the base ring).  Certified modulo
  // pi^{eval_modulus()}.
  PAdicScalar eval_at(const std::vector<PAdicScalar>& coords, const RingPtr& Rd) const;

  // ord(coeff) >= cert bound on every stored coefficient, exact comparison.
  bool stored_satisfies(const TailCert& cert) const;
  // min over |u| > U of the declared bound (LONG_MAX for None / exact tails).
  long declared_tail_floor() const;

  bool congruent(const TruncatedLaurent& o, long t) const;

  // Internal knobs used by module-level code.
  TruncatedLaurent with_cert(TailCert cert) const;
  TruncatedLaurent widened(int newU) const;  // enlarge the support box

 private:
  void insert_or_drop(const Expo& u, const PAdicScalar& v);
  RingPtr R_;
  int n_ = 0;
  int U_ = 0;
  std::map<Expo, PAdicScalar> a_;
  TailCert cert_;
  long scalar_modulus_ = 0;
  long drop_floor_ = LONG_MAX;
};

long diff_ord(const TruncatedLaurent& a, const TruncatedLaurent& b);

// Validates a declared certificate against the stored support (exact
// comparisons; for CLog the test "ord >= c*log_q|u|" is q^{ord*den} >=
// |u|^{num} with c = num/den).  Returns false instead of throwing.
bool certify_convergence(const TruncatedLaurent& f, const TailCert& cert);

// ---- Dense Laurent matrices -------------------------------------------------

using LMat = std::vector<std::vector<TruncatedLaurent>>;

LMat lmat_mul(const LMat& A, const LMat& B);
LMat lmat_add(const LMat& A, const LMat& B);
LMat lmat_sub(const LMat& A, const LMat& B);
LMat lmat_identity(const RingPtr& R, int n, int U, int m);
LMat lmat_sigma(const LMat& A, int q);
LMat lmat_mul_pi(const LMat& A, long t = 1);
LMat lmat_divexact_pi(const LMat& A, long t = 1);
// Laplace expansion with subset memoisation; fine for the small ranks the
// module layer handles (guarded).
TruncatedLaurent lmat_det(const LMat& A);
// Adjugate inverse; det must satisfy the single-unit-monomial condition.
LMat lmat_inverse(const LMat& A);
long lmat_ord(const LMat& A);
long lmat_scalar_modulus(const LMat& A);
long lmat_eval_modulus(const LMat& A);

}  // namespace dworklab
