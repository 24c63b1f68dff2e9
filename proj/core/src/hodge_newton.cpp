#include "dworklab/hodge_newton.hpp"

#include <utility>

namespace dworklab {

namespace {

LMat block_of(const LMat& B, long r0, long r1, long c0, long c1) {
  LMat out(static_cast<size_t>(r1 - r0));
  for (long i = r0; i < r1; ++i)
    out[static_cast<size_t>(i - r0)].assign(B[static_cast<size_t>(i)].begin() + c0,
                                            B[static_cast<size_t>(i)].begin() + c1);
  return out;
}

LMat lmat_zero(const RingPtr& R, int n, int U, long rows, long cols) {
  LMat out(static_cast<size_t>(rows));
  for (auto& row : out)
    row.assign(static_cast<size_t>(cols), TruncatedLaurent::zero(R, n, U));
  return out;
}

// The solved transition block generically loses overconvergence (the fixed
// point is only log-convergent), so an Over certificate must not survive the
// split even when the finite data happens to satisfy it.
TruncatedLaurent downgrade_over(const TruncatedLaurent& f) {
  if (f.cert().kind != TailCert::Kind::Over) return f;
  return f.with_cert(TailCert::clog(f.cert().param));
}

LMat downgrade_over(const LMat& A) {
  LMat out = A;
  for (auto& row : out)
    for (auto& e : row) e = downgrade_over(e);
  return out;
}

// min scalar modulus over a list of blocks, floored by the ring N.
long working_modulus(const RingPtr& R, const std::vector<const LMat*>& blocks) {
  long m = R->N();
  for (const LMat* b : blocks)
    if (!b->empty()) m = std::min(m, lmat_scalar_modulus(*b));
  return m;
}

}  // namespace

SlopeZeroSplit slope_zero_decompose(const SigmaModule& M) {
  const RingPtr& R = M.R;
  const long r = M.rank();
  require(r >= 1, Err::BadInput, "slope_zero_decompose: empty module");
  require(M.tail_level == kNoTail, Err::BadInput,
          "slope_zero_decompose: finite-rank module required");
  const long h0 = M.h_seq.empty() ? 0 : M.h_seq[0];
  require(h0 >= 1, Err::NotOrdinaryAtTruncation,
          "slope_zero_decompose: no unit columns (h0 = 0)");

  SlopeZeroSplit out;
  out.module = M;
  out.h0 = h0;

  const int n = M.n;
  const int U = M.B[0][0].U();
  const int q = M.q;

  LMat T00 = block_of(M.B, 0, h0, 0, h0);
  require(lmat_det(T00).single_unit_monomial().has_value(), Err::NotOrdinaryAtTruncation,
          "slope_zero_decompose: det of the unit block is not a unit mod pi");

  if (h0 == r) {  // pure slope zero: nothing to split off
    out.E10 = {};
    out.unit_part = M;
    out.quotient_psi = SigmaModule{q, n, R, {}, {}, {}, {}, kNoTail};
    out.residual_ord = working_modulus(R, {&T00});
    out.residual_history = {out.residual_ord};
    return out;
  }

  LMat T01 = block_of(M.B, 0, h0, h0, r);  // = pi B01 of the normal form
  LMat T10 = block_of(M.B, h0, r, 0, h0);
  LMat T11 = block_of(M.B, h0, r, h0, r);  // = pi B11
  const LMat B00inv = lmat_inverse(T00);
  const long target = working_modulus(R, {&T00, &T01, &T10, &T11});

  // E10 <- (B10 + pi(B11 - E10 B01) E10^sigma) B00^{-1}, written on the stored
  // blocks as (T10 + (T11 - E10 T01) E10^sigma) B00^{-1}; the defect
  //   Res(E10) = T10 - E10 T00 + (T11 - E10 T01) E10^sigma
  // must gain at least one power of pi per step until it reaches either the
  // ring precision or the certified modulus of the residual itself (support
  // clipping under sigma can lower that ceiling below N; a plateau there is
  // honest termination, not a stall).
  LMat E = lmat_zero(R, n, U, r - h0, h0);
  auto defect = [&](const LMat& X) -> std::pair<long, long> {  // (certified ord, ceiling)
    const LMat res = lmat_add(lmat_sub(T10, lmat_mul(X, T00)),
                              lmat_mul(lmat_sub(T11, lmat_mul(X, T01)), lmat_sigma(X, q)));
    const long ceiling = std::min<long>(R->N(), lmat_eval_modulus(res));
    return {std::min(lmat_ord(res), ceiling), ceiling};
  };

  auto [ro, ceiling] = defect(E);
  out.residual_history.push_back(ro);
  long guard = target + 4;
  while (ro < target && ro < ceiling) {
    require(guard-- > 0, Err::Stalled, "slope_zero_decompose: iteration guard exceeded");
    E = lmat_mul(lmat_add(T10, lmat_mul(lmat_sub(T11, lmat_mul(E, T01)), lmat_sigma(E, q))),
                 B00inv);
    const auto [next, next_ceiling] = defect(E);
    if (next <= ro && next >= next_ceiling) {
      // certified as far as the clipped data can say; keep the better iterate
      if (next > ro) out.residual_history.push_back(next);
      ro = std::max(ro, next);
      ceiling = next_ceiling;
      break;
    }
    require(next > ro, Err::Stalled,
            "slope_zero_decompose: defect ord failed to gain a power of pi");
    ro = next;
    ceiling = next_ceiling;
    out.residual_history.push_back(ro);
  }
  out.residual_ord = ro;
  out.E10 = downgrade_over(E);

  const LMat Es = lmat_sigma(E, q);
  out.unit_part = make_module(q, downgrade_over(lmat_add(T00, lmat_mul(T01, Es))));
  require(static_cast<long>(out.unit_part.h_seq.size()) == 1 && out.unit_part.h_seq[0] == h0,
          Err::NotOrdinaryAtTruncation,
          "slope_zero_decompose: split unit part is not purely slope zero");
  out.quotient_psi =
      make_module(q, downgrade_over(lmat_divexact_pi(lmat_sub(T11, lmat_mul(E, T01)), 1)));
  return out;
}

std::vector<HigherSlopePart> higher_slope_parts(const SigmaModule& M, int j) {
  require(j >= 0, Err::BadInput, "higher_slope_parts: slope must be >= 0");
  require(M.tail_level == kNoTail, Err::BadInput,
          "higher_slope_parts: finite-rank module required");
  require(static_cast<long>(M.h_seq.size()) > j, Err::NotOrdinaryAtTruncation,
          "higher_slope_parts: module has no slope-j layer");

  std::vector<HigherSlopePart> parts;
  long s = 0, t = 0;
  for (int i = 0; i <= j; ++i) {
    require(M.h_seq[static_cast<size_t>(i)] >= 1, Err::NotOrdinaryAtTruncation,
            "higher_slope_parts: empty slope layer below the requested one");
    s += M.h_seq[static_cast<size_t>(i)];
    t += static_cast<long>(i) * M.h_seq[static_cast<size_t>(i)];

    HigherSlopePart part;
    part.i = i;
    part.s = s;
    part.t = t;
    SigmaModule W = power_algebra(M, static_cast<int>(s), PowOp::Ext);
    require(ord_of(W) == t, Err::DivisionFailure,
            "higher_slope_parts: ord of the exterior power does not equal h1 + 2h2 + ... "
            "(module not ordinary through this slope)");
    part.psi = t == 0 ? W : make_module(M.q, lmat_divexact_pi(W.B, t));
    part.split = slope_zero_decompose(part.psi);
    require(part.split.h0 == 1, Err::NotOrdinaryAtTruncation,
            "higher_slope_parts: slope layer has unit rank != 1");
    parts.push_back(std::move(part));
  }
  return parts;
}

Normalization normalize_unit_monomial(const SlopeZeroSplit& split) {
  require(split.h0 == 1, Err::BadInput, "normalize_unit_monomial: needs h0 = 1");
  const SigmaModule& M = split.module;
  const RingPtr& R = M.R;
  const long r = M.rank();
  const int n = M.n;
  const int U = M.B[0][0].U();
  const int q = M.q;

  Normalization out;
  out.module = M;

  LMat Bp;  // one-step change of basis with E10^(1) = B10 B00^{-1}
  if (r == 1) {
    Bp = M.B;
  } else {
    const LMat T00 = block_of(M.B, 0, 1, 0, 1);
    const LMat T01 = block_of(M.B, 0, 1, 1, r);
    const LMat T10 = block_of(M.B, 1, r, 0, 1);
    const LMat T11 = block_of(M.B, 1, r, 1, r);
    const LMat E1 = lmat_mul(T10, lmat_inverse(T00));
    const LMat E1s = lmat_sigma(E1, q);
    const LMat Bp00 = lmat_add(T00, lmat_mul(T01, E1s));
    const LMat C = lmat_sub(T11, lmat_mul(E1, T01));  // = pi (B11 - E1 B01)
    const LMat Bp10 = lmat_mul(C, E1s);
    Bp = lmat_zero(R, n, U, r, r);
    for (long i = 0; i < r; ++i)
      for (long jj = 0; jj < r; ++jj) {
        if (i == 0 && jj == 0) Bp[0][0] = Bp00[0][0];
        else if (i == 0) Bp[0][static_cast<size_t>(jj)] = T01[0][static_cast<size_t>(jj - 1)];
        else if (jj == 0) Bp[static_cast<size_t>(i)][0] = Bp10[static_cast<size_t>(i - 1)][0];
        else Bp[static_cast<size_t>(i)][static_cast<size_t>(jj)] =
                 C[static_cast<size_t>(i - 1)][static_cast<size_t>(jj - 1)];
      }
  }

  const TruncatedLaurent& f = Bp[0][0];
  const auto w = f.single_unit_monomial();
  require(w.has_value(), Err::NotMonomialUnit,
          "normalize_unit_monomial: reduced top-left entry is not a single unit monomial");
  out.g = *w;
  out.a = f.coeff(*w);

  Expo gneg(out.g.size());
  for (size_t i = 0; i < gneg.size(); ++i) gneg[i] = -out.g[i];
  const TruncatedLaurent finv =
      TruncatedLaurent::monomial(R, n, U, gneg, out.a.invert_unit());

  LMat psiB = Bp;
  for (auto& row : psiB)
    for (auto& e : row) e = downgrade_over(e * finv);

  require((psiB[0][0] - TruncatedLaurent::constant(R, n, U, PAdicScalar::one(R))).ord() >= 1,
          Err::NotMonomialUnit, "normalize_unit_monomial: top-left entry is not 1 mod pi");
  for (long i = 1; i < r; ++i)
    require(psiB[static_cast<size_t>(i)][0].ord() >= 1, Err::NotMonomialUnit,
            "normalize_unit_monomial: first column below the unit is not divisible by pi");

  out.psi = make_module(q, psiB);
  require(out.psi.h_seq[0] == 1, Err::NotMonomialUnit,
          "normalize_unit_monomial: reduced matrix lost ordinarity");
  for (long jj = 1; jj < r; ++jj)
    require(out.psi.col_level[static_cast<size_t>(jj)] >= 1, Err::NotMonomialUnit,
            "normalize_unit_monomial: non-leading column not divisible by pi");
  return out;
}

FactorizationCheck factorization_check(const SigmaModule& M, const BigInt& k, long D,
                                       TorusContext& ctx, FibreCache& cache) {
  require(k >= 1, Err::BadInput, "factorization_check: k must be a positive integer");
  SlopeZeroSplit split = slope_zero_decompose(M);

  FactorizationCheck out;
  out.lhs = euler_L(M, k, D, ctx, cache);

  // The split modules are locals; keep their fibres out of the shared
  // pointer-keyed cache.
  FibreCache local;
  out.unit_part = euler_L(split.unit_part, k, D, ctx, local);
  if (split.quotient_psi.rank() == 0) {
    out.twisted = ls_one(M.R, D);
    out.twisted.provenance = "scale(pi^k) of empty quotient";
  } else {
    const LSeries Lpsi = euler_L(split.quotient_psi, k, D, ctx, local);
    out.twisted = ls_scale_T(Lpsi, PAdicScalar::pi(M.R).pow(k));
  }
  out.agree = ls_agree(out.lhs, ls_mul(out.unit_part, out.twisted));
  return out;
}

}  // namespace dworklab
