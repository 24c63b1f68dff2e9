#include "doctest.h"
#include "test_util.hpp"

using namespace dwtest;

TEST_CASE("laurent ring identities") {
  const RingPtr R = ring(2, 1, 12);
  const int U = 4;
  const TruncatedLaurent one = lconst(R, 1, U, 1);
  const TruncatedLaurent f =
      lmono(R, 1, U, {1}, 3) + lmono(R, 1, U, {-2}, 5) + lconst(R, 1, U, 7);
  CHECK(f * one == f);

  // (1 + pi X)(1 - pi X) = 1 - pi^2 X^2
  const TruncatedLaurent a = one + lmono(R, 1, U, {1}, 2);
  const TruncatedLaurent b = one - lmono(R, 1, U, {1}, 2);
  const TruncatedLaurent want = one - lmono(R, 1, U, {2}, 4);
  CHECK(a * b == want);
}

TEST_CASE("clipping drops support and records the loss") {
  const RingPtr R = ring(2, 1, 12);
  const int U = 3;
  // pi^2 X^U * X: the product exponent leaves the box; the dropped
  // coefficient has ord 2, so the drop floor records 2
  const TruncatedLaurent g = lmono(R, 1, U, {U}, 4) * lmono(R, 1, U, {1}, 1);
  CHECK(g.support().empty());
  CHECK(!g.tail_exact());
  CHECK(g.drop_floor() == 2);
  CHECK(g.eval_modulus() == 2);
  // make() refuses out-of-box entries outright
  CHECK_THROWS_AS(lmono(R, 1, U, {U + 1}, 1), Error);
}

TEST_CASE("sigma_act sends X^u to X^{qu}") {
  const RingPtr R = ring(2, 1, 8);
  const int U = 8;
  CHECK(lmono(R, 1, U, {1}, 1).sigma_act(2) == lmono(R, 1, U, {2}, 1));
  const TruncatedLaurent c = lconst(R, 1, U, 9);
  CHECK(c.sigma_act(2) == c);
  // q=2: sigma(1 + pi X + pi^2 X^2) = 1 + pi X^2 + pi^2 X^4
  const TruncatedLaurent f =
      lconst(R, 1, U, 1) + lmono(R, 1, U, {1}, 2) + lmono(R, 1, U, {2}, 4);
  const TruncatedLaurent want =
      lconst(R, 1, U, 1) + lmono(R, 1, U, {2}, 2) + lmono(R, 1, U, {4}, 4);
  CHECK(f.sigma_act(2) == want);
  // support leaving the box under sigma is recorded
  const TruncatedLaurent far = lmono(R, 1, U, {5}, 2);
  const TruncatedLaurent clipped = far.sigma_act(2);
  CHECK(clipped.support().empty());
  CHECK(clipped.drop_floor() == 1);
}

TEST_CASE("eval_at torus points") {
  const RingPtr R = ring(2, 1, 12);
  const TruncatedLaurent c = lconst(R, 1, 4, 11);
  CHECK(c.eval_at({PAdicScalar::one(R)}, R) == PAdicScalar::from_int(R, 11));
  // p=2, f = 1 + 2X at x = 1 -> 3
  const TruncatedLaurent f = lconst(R, 1, 4, 1) + lmono(R, 1, 4, {1}, 2);
  CHECK(f.eval_at({PAdicScalar::one(R)}, R) == PAdicScalar::from_int(R, 3));
  // at a degree-2 Teichmuller coordinate, f = X evaluates to the coordinate
  RingTower tower(R);
  const RingPtr R2 = tower.at_degree(2);
  const PAdicScalar t = PAdicScalar::teichmuller(R2, 2);
  CHECK(lmono(R, 1, 4, {1}, 1).eval_at({t}, R2) == t);
  // negative exponents use the unit inverse
  CHECK(lmono(R, 1, 4, {-1}, 1).eval_at({t}, R2) == t.invert_unit());
}

TEST_CASE("structurally zero factors keep their own ledger through products") {
  const RingPtr R = ring(2, 1, 12);
  const int U = 3;
  // a clipped, weak-ledger factor ...
  const TruncatedLaurent weak = lmono(R, 1, U, {U}, 1) * lmono(R, 1, U, {1}, 1);
  REQUIRE(weak.eval_modulus() == 0);
  // ... times an exact zero: the product is exactly 0 mod pi^12, not mod pi^0
  const TruncatedLaurent z = TruncatedLaurent::zero(R, 1, U);
  const TruncatedLaurent prod = z * weak;
  CHECK(prod.support().empty());
  CHECK(prod.tail_exact());
  CHECK(prod.scalar_modulus() == 12);
  // generic products still take the min of the two ledgers
  const TruncatedLaurent gen = weak * lconst(R, 1, U, 3);
  CHECK(gen.drop_floor() == 0);
}

TEST_CASE("lmat inverse round-trips against the identity") {
  const RingPtr R = ring(2, 1, 12);
  const int U = 6;
  LMat A(2);
  A[0] = {lconst(R, 1, U, 3), lmono(R, 1, U, {1}, 2)};
  A[1] = {lmono(R, 1, U, {-1}, 4), lconst(R, 1, U, 1) + lmono(R, 1, U, {2}, 6)};
  const LMat Ainv = lmat_inverse(A);
  const LMat prod = lmat_mul(A, Ainv);
  const LMat I = lmat_identity(R, 1, U, 2);
  const LMat diff = lmat_sub(prod, I);
  CHECK(lmat_ord(diff) >= lmat_eval_modulus(diff));
}

TEST_CASE("invert_unit needs a single unit monomial mod pi") {
  const RingPtr R = ring(2, 1, 8);
  const int U = 8;
  const TruncatedLaurent g = lmono(R, 1, U, {1}, 3) + lconst(R, 1, U, 4);
  const TruncatedLaurent ginv = g.invert_unit();
  const TruncatedLaurent prod = g * ginv;
  // product == 1 to the certified modulus
  const TruncatedLaurent diff = prod - lconst(R, 1, U, 1);
  CHECK(diff.ord() >= diff.eval_modulus());
  // 1 + X has two unit monomials: not invertible here
  CHECK_THROWS_AS((lconst(R, 1, U, 1) + lmono(R, 1, U, {1}, 1)).invert_unit(), Error);
}
