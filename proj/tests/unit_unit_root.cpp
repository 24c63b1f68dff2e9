#include "doctest.h"
#include "dworklab/random_modules.hpp"
#include "dworklab/unit_root.hpp"
#include "test_util.hpp"

using namespace dwtest;

namespace {

// generalized binomial C(kappa, j), exact for any integer kappa
BigInt binom_oracle(const BigInt& kappa, long j) {
  BigInt num = 1, den = 1;
  for (long t = 1; t <= j; ++t) {
    num *= kappa - (t - 1);
    den *= t;
  }
  return num / den;  // product of j consecutive integers is divisible by j!
}

// The worked constant example [[1,0],[1,pi]]: every fibre unit root is 1.
SigmaModule worked_example(const RingPtr& R) {
  const int U = 2;
  LMat B(2);
  B[0] = {lconst(R, 1, U, 1), TruncatedLaurent::zero(R, 1, U)};
  B[1] = {lconst(R, 1, U, 1),
          TruncatedLaurent::constant(R, 1, U, PAdicScalar::pi(R))};
  return make_module(2, B);
}

// Hand-picked normalized shape psi = [[1, pi b], [pi c, pi d]] (constants).
Normalization hand_norm(const RingPtr& R, int q, long b, long c, long d) {
  const int U = 4;
  LMat psiB(2);
  psiB[0] = {lconst(R, 1, U, 1), lconst(R, 1, U, b).mul_pi(1)};
  psiB[1] = {lconst(R, 1, U, c).mul_pi(1), lconst(R, 1, U, d).mul_pi(1)};
  Normalization norm;
  norm.module = make_module(q, psiB);
  norm.psi = make_module(q, psiB);
  norm.a = PAdicScalar::one(R);
  norm.g = Expo(1, 0);
  return norm;
}

}  // namespace

TEST_CASE("direct pipeline on the worked example: all unit roots are 1") {
  const RingPtr R = ring(2, 1, 12);
  RingTower tower(R);
  TorusContext ctx = make_torus_context(tower, 1, 4);
  FibreCache cache;
  const SigmaModule M = worked_example(R);
  const UnitRootFibreMap fibres = unit_root_fibres(M, ctx, cache);
  CHECK(fibres.modulus >= 11);
  for (const PAdicScalar& a : fibres.alpha0)
    CHECK(a.congruent(PAdicScalar::one(R), fibres.modulus));
  // alpha = 1 makes the unit root L-function the torus zeta for every k
  for (long k : {0L, 1L, 3L, -2L}) {
    const LSeries L = unit_root_L(fibres, BigInt(k), 4, ctx);
    CHECK(matches_rational_zeta(L, 2, 4, 10));
  }
}

TEST_CASE("three pipelines agree on normalized rank-2 modules") {
  const RingPtr R = ring(2, 1, 12);
  RingTower tower(R);
  TorusContext ctx = make_torus_context(tower, 1, 4);
  const long D = 4;
  for (int variant = 0; variant < 2; ++variant) {
    const SigmaModule M = random_normalized_rank2(R, 2, 1, 32, 11 + variant,
                                                  /*constant_only=*/variant == 0);
    FibreCache cache;
    const UnitRootFibreMap fibres = unit_root_fibres(M, ctx, cache);
    const Normalization norm = normalize_unit_monomial(slope_zero_decompose(M));
    for (long k : {1L, 2L}) {
      const LSeries direct = unit_root_L(fibres, BigInt(k), D, ctx);

      // pipeline 2: twisted powers at k_m = k + (q-1) p^m converge at rate m+1
      const auto steps = limiting_sequence_L(M, BigInt(k), {1, 2, 3}, D, ctx, cache);
      for (const LimitStep& st : steps) CHECK(st.observed_ord >= st.m + 1);
      CHECK(ls_diff_ord(steps.back().L, direct) >= 4);

      // pipeline 3: closed-form finite product over the limiting modules
      const LSeries closed = explicit_formula_L(norm, BigInt(k), D, 10, ctx, cache);
      CHECK(ls_diff_ord(closed, direct) >= 6);
    }
  }
}

TEST_CASE("limiting module columns match the binomial-expansion oracle") {
  const RingPtr R = ring(2, 1, 12);
  const long b = 3, c = 5, d = 7;
  const Normalization norm = hand_norm(R, 2, b, c, d);
  const BigInt k(2);
  const int G = 3;

  const PAdicScalar pb = PAdicScalar::from_int(R, b).mul_pi(1);
  const PAdicScalar pc = PAdicScalar::from_int(R, c).mul_pi(1);
  const PAdicScalar pd = PAdicScalar::from_int(R, d).mul_pi(1);

  // column r of the matrix on the basis {f^r} is
  //     (sum_j C(k-r, j) (pi c)^j f^j) * (pi b + pi d f)^r
  // (u00 = 1 here); the finite power k_m terminates the binomial at k_m - r
  // and zeroes the columns with r > k_m.
  const auto oracle = [&](const BigInt& kk, bool finite, long s, long r) {
    if (finite && BigInt(r) > kk) return PAdicScalar::zero(R);
    const BigInt kappa = kk - r;
    PAdicScalar acc = PAdicScalar::zero(R);
    for (long t = 0; t <= std::min(r, s); ++t) {
      const long j = s - t;
      if (finite && BigInt(j) > kappa) continue;
      PAdicScalar term = PAdicScalar::from_int(R, binom_oracle(BigInt(r), t));
      term = term * pb.pow(BigInt(r - t)) * pd.pow(BigInt(t));
      term = term * PAdicScalar::from_int(R, binom_oracle(kappa, j));
      term = term * pc.pow(BigInt(j));
      acc += term;
    }
    return acc;
  };

  const LimitingModule lim = build_limiting_module(norm, k, G);
  const LimitingModule fin = build_finite_power_module(norm, k, G);
  for (const LimitingModule* Lm : {&lim, &fin}) {
    REQUIRE(Lm->basis.size() == static_cast<size_t>(G) + 1);
    CHECK(Lm->module.tail_level == G + 1);
    // basis[i] = {r}: one f-variable for rank 2, ordered by f-degree
    for (size_t i = 0; i < Lm->basis.size(); ++i) {
      REQUIRE(Lm->basis[i].size() == 1);
      CHECK(Lm->basis[i][0] == static_cast<long>(i));
    }
    for (long s = 0; s <= G; ++s)
      for (long r = 0; r <= G; ++r) {
        const PAdicScalar got =
            Lm->module.B[static_cast<size_t>(s)][static_cast<size_t>(r)].coeff(
                Expo(1, 0));
        CHECK(got.congruent(oracle(k, Lm->finite, s, r), 12));
      }
  }
  // the two builders differ exactly in the negative-binomial column r = 3
  CHECK(fin.module.B[3][3].is_zero());
  CHECK(!lim.module.B[3][3].is_zero());
  CHECK(lim.module.B[3][3].ord() >= 3);
}

TEST_CASE("mu schedule reads the column divisibility past degree k") {
  const RingPtr R = ring(2, 1, 12);
  const Normalization norm = hand_norm(R, 2, 3, 5, 7);
  CHECK(mu_schedule(norm.psi, BigInt(1)) == 1);   // column e_2 is pi-divisible
  CHECK(mu_schedule(norm.psi, BigInt(2)) == 12);  // no columns past degree 2
}

TEST_CASE("limiting congruence phi_{k_m} = phi_{infty,k} mod pi^min(mu,m+1)") {
  SUBCASE("p = 2, positive k") {
    const RingPtr R = ring(2, 1, 12);
    const Normalization norm = hand_norm(R, 2, 3, 5, 7);
    for (long m = 1; m <= 3; ++m) {
      const CongruenceReport rep = limiting_congruence_check(norm, BigInt(2), m, 6);
      CHECK(rep.k_m == BigInt(2) + pow_big(BigInt(2), static_cast<unsigned long>(m)));
      CHECK(rep.claimed == m + 1);  // mu = N when k_m exceeds the rank
      CHECK(rep.pass);
      CHECK_FALSE(rep.sharpened_applies);  // e = p - 1 = 1
    }
  }
  SUBCASE("p = 2, negative k hits the mu branch") {
    const RingPtr R = ring(2, 1, 12);
    const Normalization norm = hand_norm(R, 2, 3, 5, 7);
    const CongruenceReport r1 = limiting_congruence_check(norm, BigInt(-1), 1, 6);
    CHECK(r1.k_m == 1);
    CHECK(r1.claimed == 1);  // mu(1) = 1 caps the claim
    CHECK(r1.pass);
    const CongruenceReport r2 = limiting_congruence_check(norm, BigInt(-1), 2, 6);
    CHECK(r2.k_m == 3);
    CHECK(r2.claimed == 3);
    CHECK(r2.pass);
  }
  SUBCASE("p = 3 trivial ramification: sharpened rate applies") {
    const RingPtr R = ring(3, 1, 12);
    const Normalization norm = hand_norm(R, 3, 2, 4, 5);
    for (long m = 1; m <= 2; ++m) {
      const CongruenceReport rep = limiting_congruence_check(norm, BigInt(2), m, 6);
      CHECK(rep.pass);
      CHECK(rep.sharpened_applies);  // e = 1 < p - 1 = 2
      CHECK(rep.sharpened == 1 + m);
      CHECK(rep.sharpened_pass);
    }
  }
}

TEST_CASE("continuity in k: congruent exponents give congruent series") {
  const RingPtr R = ring(2, 1, 12);
  RingTower tower(R);
  TorusContext ctx = make_torus_context(tower, 1, 3);
  FibreCache cache;
  const SigmaModule M = random_normalized_rank2(R, 2, 1, 16, 77);
  const UnitRootFibreMap fibres = unit_root_fibres(M, ctx, cache);
  for (long m = 1; m <= 3; ++m) {
    const BigInt k1(3), k2 = BigInt(3) + pow_big(BigInt(2), static_cast<unsigned long>(m));
    const ContinuityReport rep = continuity_check(fibres, k1, k2, m, 3, ctx);
    CHECK(rep.claimed == 1 + m);
    CHECK(rep.pass);
  }
  // hypothesis violated: 1 and 2 differ by 1, not by (p-1)p^2 = 4
  try {
    continuity_check(fibres, BigInt(1), BigInt(2), 2, 3, ctx);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == Err::CongruenceHypothesisViolated);
  }
}

TEST_CASE("higher slope limit: diag(u, pi c X) against the hand gamma-ratio") {
  const RingPtr R = ring(2, 1, 12);
  RingTower tower(R);
  TorusContext ctx = make_torus_context(tower, 1, 4);
  FibreCache cache;
  const int U = 4;
  LMat B(2);
  B[0] = {lconst(R, 1, U, 3), TruncatedLaurent::zero(R, 1, U)};
  B[1] = {TruncatedLaurent::zero(R, 1, U), lmono(R, 1, U, {1}, 5).mul_pi(1)};
  const SigmaModule M = make_module(2, B);
  const long D = 4;

  for (long k : {1L, 2L}) {
    // oracle: at a degree-d point the slope-1 unit root is
    //     gamma_1/gamma_0 = (det Phi / pi^d) * gamma_0^{-1}
    // with gamma_0 the Hensel unit root of det(I - T Phi).
    LSeries oracle = ls_one(R, D);
    for (const ClosedPoint& x : ctx.points) {
      const long dx = x.degree;
      if (dx > D) continue;
      const NuclearConstMatrix Phi = fibre_frobenius(M, x, tower);
      const CharSeries cs = char_series(Phi, 2);
      const PAdicScalar g0 = hensel_unit_root(cs.c);
      const PAdicScalar alpha =
          (cs.c[2].divexact_pi(dx) * g0.invert_unit()).descend_to_base(R);
      std::vector<PAdicScalar> cf(static_cast<size_t>(D) + 1, PAdicScalar::zero(R));
      cf[0] = PAdicScalar::one(R);
      if (dx <= D) cf[static_cast<size_t>(dx)] = PAdicScalar::zero(R) - alpha.pow(BigInt(k));
      oracle = ls_mul(oracle, ls_inverse(ls_from_coeffs(R, cf, 12, D, "hand local")));
    }

    const auto steps = higher_slope_limit_L(M, 1, k, {1, 2, 3}, D, ctx, cache);
    for (const LimitStep& st : steps) CHECK(st.observed_ord >= st.m + 1);
    CHECK(steps.back().observed_ord >= 6);
    CHECK(ls_diff_ord(steps.back().L, oracle) >= 6);
  }
}

TEST_CASE("slope/degree exploration over a window of series") {
  const RingPtr R = ring(2, 1, 12);
  // (1 - T)(1 - 2T): slopes 0 and 1, one unit each
  std::vector<PAdicScalar> c1 = {PAdicScalar::one(R), PAdicScalar::from_int(R, -3),
                                 PAdicScalar::from_int(R, 2)};
  const LSeries L1 = ls_from_coeffs(R, c1, 12, 2, "hand");
  // (1 - T)(1 - 4T): slopes 0 and 2
  std::vector<PAdicScalar> c2 = {PAdicScalar::one(R), PAdicScalar::from_int(R, -5),
                                 PAdicScalar::from_int(R, 4)};
  const LSeries L2 = ls_from_coeffs(R, c2, 12, 2, "hand");

  const SlopeReport same = slope_degree_explore({L1, L1}, 2);
  REQUIRE(same.rows.size() == 3);
  CHECK(same.rows[0].d_s == 1);
  CHECK(same.rows[0].stable);
  CHECK(same.rows[0].certified);
  CHECK(same.rows[1].d_s == 1);
  CHECK(same.rows[1].stable);
  CHECK(same.rows[2].d_s == 0);

  const SlopeReport moved = slope_degree_explore({L1, L2}, 2);
  CHECK_FALSE(moved.rows[1].stable);  // slope-1 segment present only in L1
  CHECK(moved.rows[2].d_s == 1);      // the window's last entry has slope 2
  CHECK_FALSE(moved.rows[2].stable);
}
