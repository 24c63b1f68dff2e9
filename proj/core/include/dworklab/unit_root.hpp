#pragma once
// The unit root zeta function and its three computation pipelines.
//
//  1. unit_root_L: direct Euler product over the Hensel unit roots of the
//     fibre characteristic polynomials (the definition).
//  2. limiting_sequence_L: L(phi^{k_m}, T) for k_m = k + (q-1) p^m, computed
//     through the twisted symmetric/exterior decomposition over the
//     normalized psi; the terms converge to unit_root_L at rate ~pi^{m+1}.
//  3. explicit_formula_L: the closed-form finite product over the limiting
//     modules psi_{infty,k-i} tensor Ext^i psi, evaluated at finite f-degree
//     cap G (tail_level G+1 keeps the truncation honest).
//
// The limiting module itself: on the basis {f^u}, column u is
//     u00^{k-|u|} (1 + pi Y(e))^{k-|u|} * prod_i P_i^{u_i},
// where u00 = psi[0][0], pi Y(e) = sum_{i>=1} (psi[i][0]/u00) f_{i+1}, and
// P_i = psi[0][i] + sum_{j>=1} psi[j][i] f_{j+1}; negative exponents go
// through the p-adic binomial series.  The finite power phi_{k_m} uses the
// same formula with the terminating binomial and zero columns beyond degree
// k_m; comparing the two matrices entrywise is the congruence
//     phi_{k_m} = phi_{infty,k} mod pi^{min(mu(k_m), m+1)},  k_m = k + p^m.
//
// Higher slopes: slope-j unit roots are gamma_j / gamma_{j-1} for the
// exterior-power layers psi_i; the limit pipeline is
//     L(phi_j^k) = lim_m L(psi_{j-1}^{-k+(q-1)p^{m+k}} (x) psi_j^{k+(q-1)p^m})
// (matrix powers, not tensor powers), and the closed form is the double
// product over (l1, l2) with exponent (-1)^{l1+l2} l1 l2.

#include "dworklab/hodge_newton.hpp"

namespace dworklab {

struct UnitRootFibreMap {
  RingPtr R;                        // base ring the roots live in
  std::vector<PAdicScalar> alpha0;  // aligned with ctx.points
  long modulus = 0;                 // roots certified mod pi^modulus
  std::string source;
};

// Hensel unit root of det(I - T Phi_x) at every closed point, descended to
// the base ring (the characteristic coefficients are Galois-stable).
// Requires a module ordinary at slope zero with a unique unit root per fibre.
UnitRootFibreMap unit_root_fibres(const SigmaModule& M, TorusContext& ctx,
                                  FibreCache& cache);

// prod_x (1 - alpha_0(x)^k T^{deg x})^{-1}; k may be any integer (negative
// powers invert the unit roots).
LSeries unit_root_L(const UnitRootFibreMap& fibres, const BigInt& k, long D,
                    TorusContext& ctx);

struct LimitStep {
  long m = 0;
  BigInt k_m;
  LSeries L;
  long observed_ord = 0;  // ls_diff_ord against the direct unit-root series
};

// Pipeline 2 for slope zero; M must be ordinary at slope zero with h0 = 1.
std::vector<LimitStep> limiting_sequence_L(const SigmaModule& M, const BigInt& k,
                                           const std::vector<long>& m_list, long D,
                                           TorusContext& ctx, FibreCache& cache);

// Same contract one slope up: the reference is the Euler product over
// gamma_j/gamma_{j-1}.  k must be a positive integer (it enters p^{m+k}).
std::vector<LimitStep> higher_slope_limit_L(const SigmaModule& M, int j, long k,
                                            const std::vector<long>& m_list, long D,
                                            TorusContext& ctx, FibreCache& cache);

struct ContinuityReport {
  long claimed = 0;   // ord(pi p^m) = 1 + m * e
  long observed = 0;  // coefficientwise diff ord of the two series
  long compared_at = 0;  // min(claimed, available modulus) actually testable
  bool pass = false;
};

// k1 = k2 mod (p-1)p^m required (CongruenceHypothesisViolated otherwise).
ContinuityReport continuity_check(const UnitRootFibreMap& fibres, const BigInt& k1,
                                  const BigInt& k2, long m, long D, TorusContext& ctx);

struct LimitingModule {
  BigInt k;
  int G = 0;
  bool finite = false;  // built as the finite power phi_{k} (zero-extended)
  std::vector<std::vector<long>> basis;  // u[i] = exponent of f_{i+2}
  SigmaModule module;                    // tail_level = G+1
};

LimitingModule build_limiting_module(const Normalization& norm, const BigInt& k, int G);
LimitingModule build_finite_power_module(const Normalization& norm, const BigInt& k_m,
                                         int G);

// Greatest t with psi(e_j) = 0 mod pi^t for every column j > k (ring N when
// there are no such columns).
long mu_schedule(const SigmaModule& psi, const BigInt& k);

struct CongruenceReport {
  BigInt k_m;
  long claimed = 0;    // min(mu(k_m), m+1), capped at the comparable modulus
  long observed = 0;   // entrywise diff ord of the two matrices
  bool pass = false;
  bool sharpened_applies = false;  // ord_pi(p) < p - 1
  long sharpened = 0;              // 1 + m * e
  bool sharpened_pass = false;
};

CongruenceReport limiting_congruence_check(const Normalization& norm, const BigInt& k,
                                           long m, int G);

// Pipeline 3 (slope zero): prod_{i=1..rank} L(a^k g^r (x) psi_{infty,k-i}
// (x) Ext^i psi [(x) extra], T)^{(-1)^{i-1} i} with r = k mod (q-1).
LSeries explicit_formula_L(const Normalization& norm, const BigInt& k, long D, int G,
                           TorusContext& ctx, FibreCache& cache,
                           const SigmaModule* extra_twist = nullptr);

// Slope-j closed form from the normalized layers at j-1 and j.
LSeries explicit_formula_higher_L(const Normalization& norm_prev,
                                  const Normalization& norm_cur, const BigInt& k,
                                  long D, int G, TorusContext& ctx, FibreCache& cache);

// Apparent Newton polygon of each series in the window (slopes in ord_p units
// per T-degree); d_s = length of the slope-s segment.  A row is stable when
// every window entry agrees, certified when the supporting line stays
// strictly below the modulus floor through the full T-range.
struct SlopeRow {
  long s = 0;
  long d_s = 0;
  bool stable = false;
  bool certified = false;
};
struct SlopeReport {
  std::vector<SlopeRow> rows;
};
SlopeReport slope_degree_explore(const std::vector<LSeries>& window, long s_max);

}  // namespace dworklab
