#pragma once
// Shared helpers for the unit and acceptance suites: ring factories, the
// rational zeta closed form, and small builders for Laurent constants.

#include <vector>

#include "dworklab/l_function.hpp"

namespace dwtest {

using namespace dworklab;

inline RingPtr ring(long p, int d = 1, long N = 12, Ram ram = Ram::Trivial) {
  return LocalRing::make(p, d, ram, N);
}

// (1-T)/(1-pT) = 1 + sum_{j>=1} (p^j - p^{j-1}) T^j.
inline BigInt zeta_coeff(long p, long j) {
  if (j == 0) return BigInt(1);
  BigInt pj = 1;
  for (long t = 1; t < j; ++t) pj *= p;
  return pj * p - pj;
}

inline TruncatedLaurent lconst(const RingPtr& R, int n, int U, const BigInt& v,
                               TailCert cert = TailCert::none()) {
  return TruncatedLaurent::constant(R, n, U, PAdicScalar::from_int(R, v)).with_cert(cert);
}

inline TruncatedLaurent lmono(const RingPtr& R, int n, int U, const Expo& u,
                              const BigInt& v, TailCert cert = TailCert::none()) {
  return TruncatedLaurent::make(R, n, U, {{u, PAdicScalar::from_int(R, v)}}, cert);
}

// True when every coefficient of L matches the closed form (1-T)/(1-pT)
// through degree upto at the series' certified modulus (at least need_mod).
inline bool matches_rational_zeta(const LSeries& L, long p, long upto, long need_mod) {
  if (L.modulus < need_mod || L.exact_upto < upto) return false;
  for (long j = 0; j <= upto; ++j) {
    const PAdicScalar want = PAdicScalar::from_int(L.R, zeta_coeff(p, j));
    if (!L.c[static_cast<size_t>(j)].congruent(want, need_mod)) return false;
  }
  return true;
}

}  // namespace dwtest
