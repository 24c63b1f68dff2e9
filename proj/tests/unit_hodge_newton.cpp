#include "doctest.h"
#include "dworklab/hodge_newton.hpp"
#include "dworklab/random_modules.hpp"
#include "test_util.hpp"

using namespace dwtest;

namespace {

// The worked constant example B = [[1, 0], [1, pi]].
SigmaModule worked_example(const RingPtr& R) {
  const int U = 2;
  LMat B(2);
  B[0] = {lconst(R, 1, U, 1), TruncatedLaurent::zero(R, 1, U)};
  B[1] = {lconst(R, 1, U, 1),
          TruncatedLaurent::constant(R, 1, U, PAdicScalar::pi(R))};
  return make_module(2, B);
}

}  // namespace

TEST_CASE("worked example: E10 solves to the geometric series (1-pi)^{-1}") {
  const RingPtr R = ring(2, 1, 12);
  const SigmaModule M = worked_example(R);
  const SlopeZeroSplit S = slope_zero_decompose(M);
  CHECK(S.h0 == 1);

  // oracle: sum of pi^i, i = 0..N-1, computed without invert_unit
  PAdicScalar geo = PAdicScalar::zero(R);
  for (long i = 0; i < 12; ++i) geo += PAdicScalar::one(R).mul_pi(i);
  REQUIRE(S.E10.size() == 1);
  REQUIRE(S.E10[0].size() == 1);
  const PAdicScalar e10 = S.E10[0][0].coeff(Expo{0});
  CHECK(e10.congruent(geo, 12));
  // the same value through Newton inversion
  CHECK(e10.congruent((PAdicScalar::one(R) - PAdicScalar::pi(R)).invert_unit(), 12));

  // residual ord strictly increases to the full modulus
  CHECK(S.residual_ord == 12);
  for (size_t t = 1; t < S.residual_history.size(); ++t)
    CHECK(S.residual_history[t] > S.residual_history[t - 1]);

  // the split parts are the constants the triangular shape dictates
  CHECK(S.unit_part.rank() == 1);
  CHECK(S.unit_part.B[0][0].coeff(Expo{0}) == PAdicScalar::one(R));
  CHECK(S.quotient_psi.rank() == 1);
  CHECK(S.quotient_psi.B[0][0].coeff(Expo{0}) == PAdicScalar::one(R));
}

TEST_CASE("worked example: factorization L(phi^k) = L(phi_0^k) L(psi^k, pi^k T)") {
  const RingPtr R = ring(2, 1, 12);
  const SigmaModule M = worked_example(R);
  RingTower tower(R);
  TorusContext ctx = make_torus_context(tower, 1, 4);
  FibreCache cache;
  for (long k = 1; k <= 3; ++k) {
    const FactorizationCheck fc = factorization_check(M, BigInt(k), 4, ctx, cache);
    CHECK(fc.agree.ok);
    CHECK(fc.agree.modulus >= 10);
    CHECK(fc.agree.upto >= 4);
    // with all fibre unit roots 1, the unit-part L-function is rational zeta
    CHECK(matches_rational_zeta(fc.unit_part, 2, 4, 10));
  }
}

TEST_CASE("higher slope parts of a diagonal module") {
  const RingPtr R = ring(2, 1, 12);
  const int U = 4;
  const PAdicScalar u1 = PAdicScalar::from_int(R, 3);
  const PAdicScalar u2 = PAdicScalar::from_int(R, 5);
  LMat B(2);
  B[0] = {TruncatedLaurent::constant(R, 1, U, u1), TruncatedLaurent::zero(R, 1, U)};
  B[1] = {TruncatedLaurent::zero(R, 1, U),
          TruncatedLaurent::constant(R, 1, U, u2.mul_pi(1))};
  const SigmaModule M = make_module(2, B);
  const auto parts = higher_slope_parts(M, 1);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].i == 0);
  CHECK(parts[0].s == 1);
  CHECK(parts[0].t == 0);
  CHECK(parts[0].psi.B[0][0].coeff(Expo{0}) == u1);
  // slope 1: Ext^2 phi = det = u1 u2 pi, divided by pi^{t = 1}
  CHECK(parts[1].i == 1);
  CHECK(parts[1].s == 2);
  CHECK(parts[1].t == 1);
  CHECK(parts[1].psi.B[0][0].coeff(Expo{0}) == u1 * u2);
  CHECK(parts[1].split.h0 == 1);
}

TEST_CASE("normalize_unit_monomial postconditions") {
  const RingPtr R = ring(2, 1, 12);
  const SigmaModule M = random_ordinary_rank2(R, 2, 1, 32, 909);
  const SlopeZeroSplit S = slope_zero_decompose(M);
  const Normalization norm = normalize_unit_monomial(S);
  CHECK(norm.a.ord_pi() == 0);
  // psi[0][0] = 1 mod pi, psi[1][0] = 0 mod pi, column 1 divisible by pi
  const auto& psi = norm.psi.B;
  CHECK(psi[0][0].coeff(Expo(1, 0)).congruent(PAdicScalar::one(R), 1));
  CHECK(psi[0][0].unit_support().size() == 1);
  CHECK(psi[1][0].ord() >= 1);
  CHECK(psi[0][1].ord() >= 1);
  CHECK(psi[1][1].ord() >= 1);
  // the twist monomial must be a genuine box exponent
  CHECK(static_cast<int>(norm.g.size()) == 1);
}

TEST_CASE("factorization on random triangular ordinary modules") {
  const RingPtr R = ring(2, 1, 12);
  RingTower tower(R);
  TorusContext ctx = make_torus_context(tower, 1, 4);
  FibreCache cache;
  for (uint64_t seed : {5u, 6u, 7u}) {
    const SigmaModule M = random_ordinary_rank2(R, 2, 1, 64, seed);
    for (long k = 1; k <= 2; ++k) {
      const FactorizationCheck fc = factorization_check(M, BigInt(k), 4, ctx, cache);
      CHECK(fc.agree.ok);
      CHECK(fc.agree.modulus >= 8);
      CHECK(fc.agree.upto >= 4);
    }
  }
}

TEST_CASE("slope-zero split refuses non-ordinary modules") {
  const RingPtr R = ring(2, 1, 12);
  const int U = 2;
  // top-left reduces to 1 + X mod pi: two unit monomials, det B00 not monomial
  LMat B(2);
  B[0] = {lconst(R, 1, U, 1) + lmono(R, 1, U, {1}, 1),
          TruncatedLaurent::zero(R, 1, U)};
  B[1] = {lconst(R, 1, U, 1),
          TruncatedLaurent::constant(R, 1, U, PAdicScalar::pi(R))};
  const SigmaModule M = make_module(2, B);
  CHECK_THROWS_AS(slope_zero_decompose(M), Error);
}
