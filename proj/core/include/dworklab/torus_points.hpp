#pragma once
// Closed points of the n-torus G_m^n over F_q (this artifact fixes q = p):
// Frobenius orbits of n-tuples of nonzero elements of F_{q^d}, one canonical
// representative per orbit, with exact Teichmuller lifts of the coordinates
// into the unramified degree-d extension of the working ring.

#include <vector>

#include "dworklab/gf.hpp"
#include "dworklab/local_ring.hpp"

namespace dworklab {

struct ClosedPoint {
  int n = 0;
  int q = 0;
  int degree = 0;                  // orbit size = lcm of coordinate degrees
  std::vector<long> rep;           // canonical coords, GF(q^degree) codes (orbit-min)
  std::vector<PAdicScalar> teich;  // Teichmuller lifts of rep, in the degree-d ring
};

// Enumeration budget: refuses (q^d_max)^n beyond this many tuples.
inline constexpr long kPointEnumBudget = 10'000'000L;

// All closed points of degree <= d_max, ordered by (degree, lex rep).  The
// canonical representative of an orbit is its coordinatewise-code
// lexicographic minimum over Frobenius shifts.  Deterministic.
std::vector<ClosedPoint> enumerate_closed_points(int n, int q, int d_max, RingTower& tower);

// Teichmuller coordinates of the i-th Frobenius twist x^{q^i}: since the
// lifts are Teichmuller, twisting is exact q^i-th powering coordinatewise.
std::vector<PAdicScalar> frobenius_twist(const ClosedPoint& x, long i);

}  // namespace dworklab
