#pragma once
// Slope filtration machinery for nuclear sigma-modules that are ordinary at
// the slopes involved.
//
//  * slope_zero_decompose: splits off the slope-zero part by solving the
//    block-triangularisation fixed point
//        E10 = B10 B00^{-1} + pi (B11 - E10 B01) E10^sigma B00^{-1}
//    from E10 = 0; the residual gains at least one power of pi per step.
//    The basis change produces unit_part (the rank-h0 slope-zero Frobenius
//    B00 + pi B01 E10^sigma) and quotient_psi (the quotient Frobenius is
//    pi * quotient_psi).  The solved E10 generically loses overconvergence:
//    outputs carry at best a log-decay certificate, never an Over one.
//
//  * higher_slope_parts: the slope-i layers via exterior powers,
//        psi_i = pi^{-(h1 + 2 h2 + ... + i hi)} Ext^{h0+...+hi} phi,
//    after checking the ord identity ord(Ext^{h0+...+hi} phi) = sum t*h_t
//    exactly; each psi_i is ordinary at slope zero and gets its own split.
//
//  * normalize_unit_monomial: for h0 = 1, the one-step basis change with
//    E10^(1) = B10 B00^{-1}; the new top-left entry must reduce mod pi to a
//    single unit monomial a X^g, and dividing the whole matrix by that
//    monomial leaves psi with top-left = 1 mod pi and first column below it
//    divisible by pi.  This is the entry point for the limiting-module
//    construction (the solved E10 would zero the lower-left block and erase
//    the data the limit needs).
//
//  * factorization_check: L(phi^k, T) = L(phi_0^k, T) * L(psi^k, pi^k T)
//    compared through the honest precision frontier.

#include "dworklab/l_function.hpp"

namespace dworklab {

struct SlopeZeroSplit {
  SigmaModule module;        // the input, unchanged
  long h0 = 0;               // rank of the slope-zero part
  LMat E10;                  // (rank-h0) x h0 solved block
  SigmaModule unit_part;     // rank h0, B00 + pi B01 E10^sigma
  SigmaModule quotient_psi;  // rank-h0 rows; quotient Frobenius = pi * this
  long residual_ord = 0;     // pi-divisibility reached by the defect
  std::vector<long> residual_history;  // defect ord after each iteration
};

// Requires det(B00) to reduce mod pi to a single unit monomial
// (NotOrdinaryAtTruncation otherwise).  Iterates until the residual ord
// reaches the working modulus; Stalled if a step fails to gain a power of pi.
SlopeZeroSplit slope_zero_decompose(const SigmaModule& M);

struct HigherSlopePart {
  int i = 0;             // the slope
  long s = 0;            // h0 + ... + hi (exterior power taken)
  long t = 0;            // h1 + 2 h2 + ... + i hi (pi power divided out)
  SigmaModule psi;       // the slope-i layer, ordinary at slope zero
  SlopeZeroSplit split;  // its slope-zero split
};

// Layers for i = 0..j; DivisionFailure if the ord identity fails at some i.
std::vector<HigherSlopePart> higher_slope_parts(const SigmaModule& M, int j);

struct Normalization {
  SigmaModule module;  // the input, unchanged
  PAdicScalar a;       // full unit coefficient of the extracted monomial
  Expo g;              // exponent of the extracted monomial
  SigmaModule psi;     // reduced shape: psi[0][0] = 1 mod pi, psi[i>0][0] = 0 mod pi,
                       // columns >= 1 divisible by pi
};

// One-step reduction (h0 must be 1); NotMonomialUnit if the top-left entry of
// the one-step basis change does not reduce to a single unit monomial.
Normalization normalize_unit_monomial(const SlopeZeroSplit& split);

struct FactorizationCheck {
  LSeries lhs;        // L(phi^k, T)
  LSeries unit_part;  // L(phi_0^k, T)
  LSeries twisted;    // L(psi^k, pi^k T)
  LAgree agree;       // lhs vs unit_part * twisted
};

FactorizationCheck factorization_check(const SigmaModule& M, const BigInt& k, long D,
                                       TorusContext& ctx, FibreCache& cache);

}  // namespace dworklab
