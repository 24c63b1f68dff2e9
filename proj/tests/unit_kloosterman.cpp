#include "doctest.h"
#include "dworklab/kloosterman.hpp"
#include "test_util.hpp"

using namespace dwtest;

namespace {

BigInt rat(const CyclotomicInt& z) {
  BigInt v;
  REQUIRE(z.is_rational(&v));
  return v;
}

CyclotomicInt cint(int p, long v) {
  CyclotomicInt z = CyclotomicInt::one(p);
  z.c[0] = v;
  return z;
}

}  // namespace

TEST_CASE("cyclotomic integer arithmetic at p = 3") {
  const CyclotomicInt z = CyclotomicInt::zeta_pow(3, 1);
  // zeta^2 = -1 - zeta in the power basis
  const CyclotomicInt z2 = CyclotomicInt::zeta_pow(3, 2);
  CHECK(z2.c == std::vector<BigInt>{-1, -1});
  CHECK(z * z == z2);
  CHECK(z * z2 == CyclotomicInt::one(3));
  CHECK(CyclotomicInt::zeta_pow(3, 3) == CyclotomicInt::one(3));
  // 1 + zeta + zeta^2 = 0, so zeta + zeta^2 is the rational -1
  CHECK(rat(z + z2) == -1);
  // galois zeta -> zeta^2 maps a + b zeta to (a - b) - b zeta
  CyclotomicInt w = cint(3, 4) + z;  // 4 + zeta
  const CyclotomicInt wg = w.galois(2);
  CHECK(wg.c == std::vector<BigInt>{3, -1});
  CHECK_THROWS_AS(w.galois(3), Error);  // p divides t
  // exact integer division
  const CyclotomicInt even = cint(3, 2) + (z + z);  // 2 + 2 zeta
  CHECK(even.divexact_int(2) == cint(3, 1) + z);
  CHECK_THROWS_AS((cint(3, 1) + z).divexact_int(2), Error);
}

TEST_CASE("Kloosterman sums over F_2, F_4, F_8 by hand") {
  // K_m = sum over x in F_{2^m}^* of (-1)^{Tr(x + 1/x)}.
  //  m = 1: x = 1 gives Tr(0) = 0, so K_1 = 1.
  //  m = 2: x + 1/x is 0, 1, 1 for x = 1, w, w^2 and Tr(1) = 0 on F_4: K_2 = 3.
  //  m = 3: F_8 = F_2[a]/(a^3+a+1); x + 1/x takes the values a^2+a+1, a+1,
  //         a^2+1 on the three inverse pairs, each of trace 1, and 0 at x = 1:
  //         K_3 = 1 + 2(-3) = -5.
  CHECK(rat(kloosterman_sum(1, 2, 1, 1)) == 1);
  CHECK(rat(kloosterman_sum(1, 2, 2, 1)) == 3);
  CHECK(rat(kloosterman_sum(1, 2, 3, 1)) == -5);
}

TEST_CASE("fibre polynomials at p = 2, n = 1") {
  const RingPtr R = ring(2, 1, 12);
  RingTower tower(R);
  const auto points = enumerate_closed_points(1, 2, 2, tower);
  REQUIRE(points.size() == 2);

  // degree 1 (ybar = 1): s_k = -K_k gives P = 1 + T + 2T^2
  const KloostermanFibre f1 = fibre_polynomial(1, points[0]);
  REQUIRE(f1.poly.size() == 3);
  CHECK(rat(f1.poly[0]) == 1);
  CHECK(rat(f1.poly[1]) == 1);
  CHECK(rat(f1.poly[2]) == 2);
  CHECK(f1.degree_check);
  const SperberReport s1 = verify_sperber(f1, R);
  CHECK(s1.pass);
  CHECK(s1.product_ord_ok);

  // degree 2 (ybar = w): K_1 = -1 by hand (x + w/x has trace 1, 1, 0 at
  // x = 1, w, w^2), and the fibre field is F_4, so P = 1 - T + 4T^2.
  const KloostermanFibre f2 = fibre_polynomial(1, points[1]);
  CHECK(rat(f2.sums[0]) == -1);
  CHECK(rat(f2.poly[1]) == -1);
  CHECK(rat(f2.poly[2]) == 4);
  CHECK(f2.degree_check);
  const SperberReport s2 = verify_sperber(f2, R);
  CHECK(s2.pass);
  CHECK(s2.product_ord_ok);
}

TEST_CASE("fibre polynomial at p = 2, n = 2 closes at degree 3") {
  const RingPtr R = ring(2, 1, 12);
  RingTower tower(R);
  const auto points = enumerate_closed_points(1, 2, 1, tower);
  const KloostermanFibre f = fibre_polynomial(2, points[0]);
  REQUIRE(f.poly.size() == 4);
  // K_1 = -1 (single term x1 = x2 = 1), K_2 = 5 over (F_4^*)^2 by hand;
  // Newton gives e_1 = -1, e_2 = -2, and the weight closes e_3 = 8:
  // P = 1 + T - 2T^2 - 8T^3.
  CHECK(rat(f.sums[0]) == -1);
  CHECK(rat(f.sums[1]) == 5);
  CHECK(rat(f.poly[1]) == 1);
  CHECK(rat(f.poly[2]) == -2);
  CHECK(rat(f.poly[3]) == -8);
  CHECK(f.degree_check);
  const SperberReport rep = verify_sperber(f, R);
  CHECK(rep.pass);
  CHECK(rep.product_ord_ok);
}

TEST_CASE("fibre polynomials at p = 3, n = 1 (cyclotomic embedding)") {
  const RingPtr R = ring(3, 1, 12, Ram::Cyclotomic);
  RingTower tower(R);
  const auto points = enumerate_closed_points(1, 3, 2, tower);
  for (const ClosedPoint& pt : points) {
    const KloostermanFibre f = fibre_polynomial(1, pt);
    CHECK(f.degree_check);
    const SperberReport rep = verify_sperber(f, R, /*strict=*/true);
    CHECK(rep.pass);
    CHECK(rep.product_ord_ok);
    if (pt.degree == 1) {
      // ybar = 1: K_1 = zeta + zeta^2 = -1, so P = 1 - T + 3T^2;
      // ybar = 2: both terms are zeta^0, K_1 = 2, so P = 1 + 2T + 3T^2.
      const BigInt k1 = rat(f.sums[0]);
      const BigInt c1 = rat(f.poly[1]);
      CHECK(c1 == k1);  // c_1 = -s_1 = K_1 for n = 1
      CHECK((k1 == -1 || k1 == 2));
      CHECK(rat(f.poly[2]) == 3);
    }
  }
}

TEST_CASE("embedding zeta_p -> 1 + pi is exact") {
  const RingPtr R3 = ring(3, 1, 10, Ram::Cyclotomic);
  const PAdicScalar z = embed_cyclotomic(CyclotomicInt::zeta_pow(3, 1), R3);
  // Phi_3(z) = z^2 + z + 1 = 0 in the cyclotomic ring
  CHECK((z * z + z + PAdicScalar::one(R3)).is_zero());
  CHECK(z.pow(BigInt(3)).congruent(PAdicScalar::one(R3), 10));
  // rational elements embed as integers
  CHECK(embed_cyclotomic(cint(3, -7), R3).congruent(PAdicScalar::from_int(R3, -7), 10));
  // p = 2: zeta_2 = -1 as a plain integer in a trivially ramified ring
  const RingPtr R2 = ring(2, 1, 10);
  CHECK(embed_cyclotomic(CyclotomicInt::zeta_pow(2, 1), R2)
            .congruent(PAdicScalar::from_int(R2, -1), 10));
  // odd p requires the cyclotomic ring
  const RingPtr R3t = ring(3, 1, 10);
  CHECK_THROWS_AS(embed_cyclotomic(CyclotomicInt::zeta_pow(3, 1), R3t), Error);
}

TEST_CASE("unit root map over the parameter torus") {
  const int N = std::max(12, kloosterman_ring_precision(1, 2, 2));
  const RingPtr R = ring(2, 1, N);
  RingTower tower(R);
  TorusContext ctx = make_torus_context(tower, 1, 2);
  const UnitRootFibreMap map = kloosterman_unit_root_map(1, ctx);
  REQUIRE(map.alpha0.size() == ctx.points.size());
  // at ybar = 1 the unit root of 1 + T + 2T^2 satisfies alpha = -1 - 2 alpha^2:
  // alpha = -19 mod 32 by two Hensel steps from alpha = -1
  CHECK(map.alpha0[0].congruent(PAdicScalar::from_int(R, -19), 5));
  // k = 0 collapses the Euler product to the torus zeta function
  const LSeries L0 = unit_root_L(map, BigInt(0), 4, ctx);
  CHECK(matches_rational_zeta(L0, 2, 2, 6));
  // continuity across a congruent exponent pair at the map's precision
  const ContinuityReport rep = continuity_check(map, BigInt(2), BigInt(2 + 4), 2, 2, ctx);
  CHECK(rep.pass);
}

TEST_CASE("ring precision helper and the enumeration budget") {
  // degree-d staircase tops out at ord_pi = d * e * n(n+1)/2; the helper must
  // clear it with room for the Hensel division
  CHECK(kloosterman_ring_precision(1, 2, 3) >= 4);
  CHECK(kloosterman_ring_precision(2, 2, 2) >= 7);
  CHECK(kloosterman_ring_precision(1, 3, 2) >= 3);
  // (p^Df - 1)^n above the budget must refuse rather than spin
  CHECK_THROWS_AS(kloosterman_sum(2, 2, 13, 1), Error);
}
