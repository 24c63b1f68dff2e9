#pragma once
// L-functions of nuclear sigma-modules over the n-torus, computed two
// independent ways:
//   * truncated Euler products over closed points (exact up to T^{d_max}),
//   * the Dwork trace formula on the truncated Fredholm matrix F = (B_{qv-u}).
// Plus the Newton-Waring trace identities, the basic power-decomposition of
// L(phi^k, T), and the weight-twist valuation audit of the Fredholm columns.

#include <optional>
#include <string>

#include "dworklab/sigma_module.hpp"

namespace dworklab {

struct LSeries {
  RingPtr R;
  long D = 0;
  std::vector<PAdicScalar> c;  // size D+1, c[0] = 1
  long modulus = 0;            // coefficients certified mod pi^modulus
  long exact_upto = 0;         // c_j complete for j <= exact_upto; beyond: PARTIAL
  std::string provenance;
};

LSeries ls_one(const RingPtr& R, long D);
LSeries ls_from_coeffs(const RingPtr& R, std::vector<PAdicScalar> c, long modulus,
                       long exact_upto, std::string provenance);
LSeries ls_mul(const LSeries& a, const LSeries& b);
LSeries ls_inverse(const LSeries& a);
LSeries ls_pow(const LSeries& a, long e);  // any integer exponent
LSeries ls_scale_T(const LSeries& a, const PAdicScalar& s);  // T -> s T
LSeries ls_truncate(const LSeries& a, long D);

// Equality mod (pi^{min modulus}, T^{min(D, exact frontier)+1}).
struct LAgree {
  bool ok = false;
  long upto = 0;            // compared through this T-degree
  long modulus = 0;         // compared at this pi-power
  long first_mismatch = -1; // -1 if none
};
LAgree ls_agree(const LSeries& a, const LSeries& b);

// Minimum pi-ord of a_j - b_j over the shared exact frontier (degrees 1..upto);
// ring N sentinel when the series agree at every compared residue.
long ls_diff_ord(const LSeries& a, const LSeries& b);

// ---- Euler products ----------------------------------------------------------

// Shared enumeration of closed points plus the ring tower they live in.
struct TorusContext {
  int n = 0;
  int q = 0;
  int d_max = 0;
  RingTower* tower = nullptr;  // not owned; must outlive the context
  std::vector<ClosedPoint> points;
};
TorusContext make_torus_context(RingTower& tower, int n, int d_max);

// Fibre Frobenii are memoised per (module uid, point index); uids are unique
// per make_module call, so reusing one cache across modules is safe.
struct FibreCache {
  std::map<std::pair<long, int>, NuclearConstMatrix> store;
  const NuclearConstMatrix& get(const SigmaModule& M, TorusContext& ctx, int idx);
};

enum class Functor { Plain, Sym, Ext };

// One tensor factor of an Euler product: functor applied to the fibre, then an
// integer matrix power (negative needs invertible fibres).
struct FactorSpec {
  const SigmaModule* module = nullptr;
  Functor functor = Functor::Plain;
  int functor_deg = 1;
  BigInt power = BigInt(1);
};

// Rank-1 twist a^{unit_exp} * (X^{mono})^{mono_exp} folded into each factor.
struct TwistSpec {
  std::optional<PAdicScalar> unit;  // base-ring unit a
  BigInt unit_exp = BigInt(0);
  Expo mono;                        // empty = no monomial part
  BigInt mono_exp = BigInt(0);
};

// Euler factor at x: det(I - w_x (x)_i functor_i(Phi_x)^{k_i} T^{deg x})^{-1}.
// Traces of the tensor factor are taken as products of per-part traces.
LSeries euler_product_L(const std::vector<FactorSpec>& parts,
                        const std::optional<TwistSpec>& twist, long D,
                        TorusContext& ctx, FibreCache& cache);

LSeries euler_L(const SigmaModule& M, const BigInt& k, long D, TorusContext& ctx,
                FibreCache& cache);
LSeries tensor_powers_L(const SigmaModule& m1, const BigInt& k1,
                        const SigmaModule& m2, const BigInt& k2, long D,
                        TorusContext& ctx, FibreCache& cache);

// ---- Dwork trace formula -----------------------------------------------------

struct FredholmResult {
  LSeries L;    // assembled L-function
  LSeries det;  // det(I - T F) itself
  long U_F = 0;
  long dim = 0;  // size of the truncated F block
};

// U_F < 0 means: computed from the module (exact support radius / (q-1) for
// tail-exact matrices, certificate bound for OVER; CLOG alone cannot reach the
// working modulus and raises InsufficientTruncation).
FredholmResult fredholm_L(const SigmaModule& M, long D, long U_F = -1);

// det(I - TF) == prod_{j>=0} L(B, q^j T)^{(-1)^{n-1} C(n+j-1, j)}, truncated
// where q^j passes the working modulus.
struct InvertedCheck {
  LSeries lhs;  // direct determinant
  LSeries rhs;  // product of scaled Euler L's
  LAgree agree;
};
InvertedCheck fredholm_inverted_check(const SigmaModule& M, long D, TorusContext& ctx,
                                      FibreCache& cache);

// ---- Newton-Waring identities and the basic decomposition --------------------

struct WaringPair {
  PAdicScalar lhs;
  PAdicScalar rhs;
};
// Tr(E^k) = sum_{i>=1} (-1)^{i-1} i Tr(Sym^{k-i}E) Tr(Ext^i E)
WaringPair newton_waring_check_41(const NuclearConstMatrix& E, long k);
// Tr(E^k) = Tr(Sym^k E) + sum_{i>=2} (-1)^{i-1} (i-1) Tr(Sym^{k-i}E) Tr(Ext^i E)
WaringPair newton_waring_check_42(const NuclearConstMatrix& E, long k);

struct DetDecomp {
  LSeries lhs;          // det(I - T E^k)
  LSeries rhs_full;     // prod det(I - T Sym^{k-i}E (x) Ext^i E)^{(-1)^{i-1} i}
  LSeries rhs_reduced;  // det(I - T Sym^k E) * prod_{i>=2} (...)^{(-1)^{i-1}(i-1)}
};
DetDecomp det_power_decomposition_check(const NuclearConstMatrix& E, long k, long D);

struct LDecomp {
  LSeries lhs;  // L(phi^k, T)
  LSeries rhs;  // prod_i L(Sym^{k-i} phi (x) Ext^i phi, T)^{(-1)^{i-1} i}
  LAgree agree;
};
LDecomp l_power_decomposition(const SigmaModule& M, long k, long D, TorusContext& ctx,
                              FibreCache& cache);

// ---- valuation audit ----------------------------------------------------------

// Weight twist G_{v,u} = pi^{w(v)-w(u)} B_{qu-v} with w(u) = (c - eps/2) log_q|u|.
// Verifies, with exact log comparisons: columns outside |u| <= N_eps_star have
// twisted ord >= c - eps, and every scanned column obeys the uniform floor
// -w(N_eps_star).  Report-only.
struct AuditColumn {
  Expo u;
  int j = 0;
};
struct ValuationAuditReport {
  bool pass = false;
  BigRat c, eps;
  long N_eps = 0;
  long N_eps_star = 0;
  std::string floor_desc;
  std::vector<AuditColumn> exceptional;  // columns failing (c - eps), small |u|
  std::vector<std::string> violations;   // hard failures
  std::string note;
};
ValuationAuditReport valuation_audit(const SigmaModule& M, const BigRat& c,
                                     const BigRat& eps, int U_F);

}  // namespace dworklab
