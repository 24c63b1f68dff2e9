#include "dworklab/unit_root.hpp"

#include <algorithm>
#include <memory>

namespace dworklab {

namespace {

TruncatedLaurent lau_pow(TruncatedLaurent base, BigInt e) {
  const RingPtr R = base.ring();
  const int n = base.n(), U = base.U();
  if (e < 0) {
    base = base.invert_unit();
    e = -e;
  }
  TruncatedLaurent acc = TruncatedLaurent::constant(R, n, U, PAdicScalar::one(R));
  while (e > 0) {
    if ((e & 1) != 0) acc = acc * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return acc;
}

// ---- polynomials in the limiting variables f_2, f_3, ... --------------------
// Exponent vectors are over nvar = rank-1 variables (slot i <-> f_{i+2});
// total degree is capped at G, which is exact for the kept block because
// degrees only add.

using FExpo = std::vector<long>;
using FPoly = std::map<FExpo, TruncatedLaurent>;

long fdeg(const FExpo& u) {
  long s = 0;
  for (long v : u) s += v;
  return s;
}

FPoly fp_mul(const FPoly& A, const FPoly& B, int G) {
  FPoly out;
  for (const auto& [ua, ca] : A)
    for (const auto& [ub, cb] : B) {
      FExpo u(ua.size());
      for (size_t i = 0; i < u.size(); ++i) u[i] = ua[i] + ub[i];
      if (fdeg(u) > G) continue;
      TruncatedLaurent term = ca * cb;
      auto it = out.find(u);
      if (it == out.end()) out.emplace(std::move(u), std::move(term));
      else it->second = it->second + term;
    }
  return out;
}

void gen_fbasis(int nvar, int G, FExpo& cur, std::vector<FExpo>& out) {
  if (static_cast<int>(cur.size()) == nvar) {
    out.push_back(cur);
    return;
  }
  long used = fdeg(cur);
  for (long v = 0; v + used <= G; ++v) {
    cur.push_back(v);
    gen_fbasis(nvar, G, cur, out);
    cur.pop_back();
  }
}

// weight w(u) = sum (i+2) u_i; basis ordered by (w, lex) so that increasing
// f-degree comes in blocks compatible with the nuclear level structure.
long fweight(const FExpo& u) {
  long w = 0;
  for (size_t i = 0; i < u.size(); ++i) w += static_cast<long>(i + 2) * u[i];
  return w;
}

LimitingModule build_core(const Normalization& norm, const BigInt& kk, int G,
                          bool finite) {
  const SigmaModule& psi = norm.psi;
  const RingPtr R = psi.R;
  const int n = psi.n, q = psi.q, U = psi.B[0][0].U();
  const long rho = psi.rank();
  const int nvar = static_cast<int>(rho) - 1;
  require(G >= 0, Err::BadInput, "limiting module: G must be >= 0");
  if (finite)
    require(kk >= 1, Err::BadInput, "finite power module: k_m must be positive");

  LimitingModule out;
  out.k = kk;
  out.G = G;
  out.finite = finite;

  FExpo cur;
  gen_fbasis(nvar, G, cur, out.basis);
  std::sort(out.basis.begin(), out.basis.end(), [](const FExpo& a, const FExpo& b) {
    const long wa = fweight(a), wb = fweight(b);
    if (wa != wb) return wa < wb;
    return a < b;
  });
  std::map<FExpo, size_t> index;
  for (size_t i = 0; i < out.basis.size(); ++i) index.emplace(out.basis[i], i);
  const size_t dim = out.basis.size();

  const TruncatedLaurent Lzero = TruncatedLaurent::zero(R, n, U);
  const TruncatedLaurent Lone =
      TruncatedLaurent::constant(R, n, U, PAdicScalar::one(R));
  const FExpo zexp(static_cast<size_t>(nvar), 0);

  const TruncatedLaurent& u00 = psi.B[0][0];
  const TruncatedLaurent uinv = u00.invert_unit();

  // pi Y(e): the f_{i+1}-coordinates of phi(e_1)/u00 below the unit.
  FPoly Z;
  for (long i = 1; i < rho; ++i) {
    TruncatedLaurent c = psi.B[static_cast<size_t>(i)][0] * uinv;
    if (c.is_zero()) continue;
    FExpo u = zexp;
    u[static_cast<size_t>(i - 1)] = 1;
    Z.emplace(std::move(u), std::move(c));
  }

  // Every monomial of Z has f-degree exactly 1, so Z^j lives in f-degree j:
  // the series sum_j C(kk-r, j) Z^j is exact on the degree-<=G block once
  // truncated at j = G (and invisible mod pi^N beyond j = N-1).
  const long jcap = std::min<long>(G, R->N() - 1);
  std::vector<FPoly> Zpow;
  Zpow.push_back({{zexp, Lone}});
  for (long j = 1; j <= jcap; ++j) Zpow.push_back(fp_mul(Zpow.back(), Z, G));

  // column generators P_c = psi[0][c] + sum_{i>=1} psi[i][c] f_{i+1}, c >= 1,
  // and their powers up to G.
  std::vector<std::vector<FPoly>> Pp(static_cast<size_t>(rho));
  for (long c = 1; c < rho; ++c) {
    FPoly P;
    if (!psi.B[0][static_cast<size_t>(c)].is_zero())
      P.emplace(zexp, psi.B[0][static_cast<size_t>(c)]);
    for (long i = 1; i < rho; ++i) {
      const TruncatedLaurent& entry = psi.B[static_cast<size_t>(i)][static_cast<size_t>(c)];
      if (entry.is_zero()) continue;
      FExpo u = zexp;
      u[static_cast<size_t>(i - 1)] = 1;
      P.emplace(std::move(u), entry);
    }
    auto& pows = Pp[static_cast<size_t>(c)];
    pows.push_back({{zexp, Lone}});
    for (int t = 1; t <= G; ++t) pows.push_back(fp_mul(pows.back(), P, G));
  }

  // W(kappa) = u00^kappa * sum_j C(kappa, j) Z^j, shared by columns of equal
  // f-degree; the finite power terminates the binomial at kappa.
  std::vector<std::optional<FPoly>> W(static_cast<size_t>(G) + 1);
  auto W_for = [&](long r) -> const FPoly& {
    auto& slot = W[static_cast<size_t>(r)];
    if (!slot.has_value()) {
      const BigInt kappa = kk - r;
      long jmax = jcap;
      if (finite && BigInt(jmax) > kappa) jmax = kappa.convert_to<long>();
      FPoly series;
      for (long j = 0; j <= jmax; ++j) {
        const PAdicScalar cj = PAdicScalar::from_int(R, binomial(kappa, j));
        if (cj.is_zero()) continue;
        for (const auto& [u, c] : Zpow[static_cast<size_t>(j)]) {
          TruncatedLaurent term = c.mul_scalar(cj);
          auto it = series.find(u);
          if (it == series.end()) series.emplace(u, std::move(term));
          else it->second = it->second + term;
        }
      }
      const TruncatedLaurent upow = lau_pow(u00, kappa);
      FPoly scaled;
      for (const auto& [u, c] : series) scaled.emplace(u, c * upow);
      slot = std::move(scaled);
    }
    return *slot;
  };

  LMat B(dim);
  for (auto& row : B) row.assign(dim, Lzero);
  for (size_t ci = 0; ci < dim; ++ci) {
    const FExpo& u = out.basis[ci];
    const long r = fdeg(u);
    if (finite && BigInt(r) > kk) continue;  // zero-extended beyond degree k_m
    FPoly col = W_for(r);
    for (long c = 1; c < rho; ++c) {
      const long t = u[static_cast<size_t>(c - 1)];
      if (t == 0) continue;
      col = fp_mul(col, Pp[static_cast<size_t>(c)][static_cast<size_t>(t)], G);
    }
    for (const auto& [v, lau] : col) {
      auto it = index.find(v);
      require(it != index.end(), Err::BadInput, "limiting module: basis index missing");
      B[it->second][ci] = lau;
    }
  }

  out.module = make_module(q, B, static_cast<long>(G) + 1);
  return out;
}

LSeries twisted_power_L(const Normalization& norm, const BigInt& k_m, const BigInt& r,
                        long D, TorusContext& ctx, FibreCache& ncache) {
  const SigmaModule& psi = norm.psi;
  require(k_m >= 1, Err::BadInput, "twisted power: k_m must be positive");
  const long rho = psi.rank();
  long imax = rho;
  if (BigInt(rho) > k_m) imax = k_m.convert_to<long>();

  TwistSpec tw;
  tw.unit = norm.a;
  tw.unit_exp = k_m;
  tw.mono = norm.g;
  tw.mono_exp = r;

  LSeries acc = ls_one(psi.R, D);
  for (long i = 1; i <= imax; ++i) {
    std::vector<FactorSpec> parts;
    const BigInt sdeg = k_m - i;
    if (sdeg > 0) {
      FactorSpec fs;
      fs.module = &psi;
      fs.functor = Functor::Sym;
      fs.functor_deg = sdeg.convert_to<int>();
      parts.push_back(fs);
    }
    FactorSpec fe;
    fe.module = &psi;
    fe.functor = Functor::Ext;
    fe.functor_deg = static_cast<int>(i);
    parts.push_back(fe);
    const LSeries Li = euler_product_L(parts, tw, D, ctx, ncache);
    acc = ls_mul(acc, ls_pow(Li, i % 2 == 1 ? i : -i));
  }
  acc.provenance = "twisted sym/ext decomposition";
  return acc;
}

}  // namespace

UnitRootFibreMap unit_root_fibres(const SigmaModule& M, TorusContext& ctx,
                                  FibreCache& cache) {
  require(M.tail_level == kNoTail, Err::BadInput,
          "unit_root_fibres: finite-rank module required");
  UnitRootFibreMap out;
  out.R = ctx.tower->base();
  out.modulus = out.R->N();
  out.source = "hensel unit root of the fibre characteristic polynomial";
  out.alpha0.reserve(ctx.points.size());
  for (size_t idx = 0; idx < ctx.points.size(); ++idx) {
    const NuclearConstMatrix& E = cache.get(M, ctx, static_cast<int>(idx));
    const CharSeries cs = char_series(E, E.dim());
    const PAdicScalar alpha = hensel_unit_root(cs.c);
    out.alpha0.push_back(alpha.descend_to_base(out.R));
    out.modulus = std::min(out.modulus, cs.modulus);
  }
  return out;
}

LSeries unit_root_L(const UnitRootFibreMap& fibres, const BigInt& k, long D,
                    TorusContext& ctx) {
  require(fibres.alpha0.size() == ctx.points.size(), Err::BadInput,
          "unit_root_L: fibre map does not match the point list");
  const RingPtr& R = fibres.R;
  LSeries acc = ls_one(R, D);
  for (size_t idx = 0; idx < ctx.points.size(); ++idx) {
    const long dx = ctx.points[idx].degree;
    if (dx > D) continue;
    const PAdicScalar ak = fibres.alpha0[idx].pow(k);
    std::vector<PAdicScalar> c(static_cast<size_t>(D) + 1, PAdicScalar::zero(R));
    c[0] = PAdicScalar::one(R);
    PAdicScalar run = PAdicScalar::one(R);
    for (long j = 1; j * dx <= D; ++j) {
      run = run * ak;
      c[static_cast<size_t>(j * dx)] = run;
    }
    acc = ls_mul(acc, ls_from_coeffs(R, std::move(c), fibres.modulus, D, "unit-root local"));
  }
  acc.exact_upto = std::min<long>(D, ctx.d_max);
  acc.provenance = "unit-root euler product";
  return acc;
}

std::vector<LimitStep> limiting_sequence_L(const SigmaModule& M, const BigInt& k,
                                           const std::vector<long>& m_list, long D,
                                           TorusContext& ctx, FibreCache& cache) {
  (void)cache;  // split modules are locals; their fibres stay in a local cache
  SlopeZeroSplit split = slope_zero_decompose(M);
  require(split.h0 == 1, Err::BadInput, "limiting_sequence_L: h0 = 1 required");
  const Normalization norm = normalize_unit_monomial(split);

  FibreCache local;
  const UnitRootFibreMap fibres = unit_root_fibres(split.unit_part, ctx, local);
  const LSeries ref = unit_root_L(fibres, k, D, ctx);

  const long p = M.R->p();
  const long q1 = M.q - 1;
  const BigInt r = mod_pos(k, BigInt(q1));

  std::vector<LimitStep> steps;
  steps.reserve(m_list.size());
  for (long m : m_list) {
    require(m >= 0, Err::BadInput, "limiting_sequence_L: m must be >= 0");
    LimitStep st;
    st.m = m;
    st.k_m = k + BigInt(q1) * pow_big(BigInt(p), static_cast<unsigned long>(m));
    st.L = twisted_power_L(norm, st.k_m, r, D, ctx, local);
    st.observed_ord = ls_diff_ord(st.L, ref);
    steps.push_back(std::move(st));
  }
  return steps;
}

std::vector<LimitStep> higher_slope_limit_L(const SigmaModule& M, int j, long k,
                                            const std::vector<long>& m_list, long D,
                                            TorusContext& ctx, FibreCache& cache) {
  (void)cache;
  require(k >= 1, Err::BadInput, "higher_slope_limit_L: k must be a positive integer");
  const std::vector<HigherSlopePart> parts = higher_slope_parts(M, j);

  FibreCache local;
  UnitRootFibreMap ref_map = unit_root_fibres(parts[static_cast<size_t>(j)].psi, ctx, local);
  if (j >= 1) {
    const UnitRootFibreMap below =
        unit_root_fibres(parts[static_cast<size_t>(j) - 1].psi, ctx, local);
    for (size_t idx = 0; idx < ref_map.alpha0.size(); ++idx)
      ref_map.alpha0[idx] = ref_map.alpha0[idx] * below.alpha0[idx].invert_unit();
    ref_map.modulus = std::min(ref_map.modulus, below.modulus);
    ref_map.source = "gamma_j / gamma_{j-1}";
  }
  const LSeries ref = unit_root_L(ref_map, BigInt(k), D, ctx);

  const long p = M.R->p();
  const long q1 = M.q - 1;
  std::vector<LimitStep> steps;
  steps.reserve(m_list.size());
  for (long m : m_list) {
    require(m >= 0, Err::BadInput, "higher_slope_limit_L: m must be >= 0");
    LimitStep st;
    st.m = m;
    const BigInt e2 = BigInt(k) + BigInt(q1) * pow_big(BigInt(p), static_cast<unsigned long>(m));
    st.k_m = e2;
    if (j == 0) {
      st.L = euler_L(parts[0].psi, e2, D, ctx, local);
    } else {
      const BigInt e1 = BigInt(-k) + BigInt(q1) * pow_big(BigInt(p),
                                                          static_cast<unsigned long>(m + k));
      require(e1 >= 1, Err::BadInput, "higher_slope_limit_L: p^{m+k} too small");
      st.L = tensor_powers_L(parts[static_cast<size_t>(j) - 1].psi, e1,
                             parts[static_cast<size_t>(j)].psi, e2, D, ctx, local);
    }
    st.observed_ord = ls_diff_ord(st.L, ref);
    steps.push_back(std::move(st));
  }
  return steps;
}

ContinuityReport continuity_check(const UnitRootFibreMap& fibres, const BigInt& k1,
                                  const BigInt& k2, long m, long D, TorusContext& ctx) {
  const RingPtr& R = fibres.R;
  const long p = R->p(), e = R->e();
  require(m >= 0, Err::BadInput, "continuity_check: m must be >= 0");
  const BigInt step = BigInt(p - 1) * pow_big(BigInt(p), static_cast<unsigned long>(m));
  require(mod_pos(k1 - k2, step) == 0, Err::CongruenceHypothesisViolated,
          "continuity_check: k1 and k2 differ modulo (p-1)p^m");

  ContinuityReport rep;
  rep.claimed = 1 + m * e;
  const LSeries L1 = unit_root_L(fibres, k1, D, ctx);
  const LSeries L2 = unit_root_L(fibres, k2, D, ctx);
  rep.observed = ls_diff_ord(L1, L2);
  rep.compared_at = std::min<long>(rep.claimed, std::min(L1.modulus, L2.modulus));
  rep.pass = rep.observed >= rep.compared_at;
  return rep;
}

LimitingModule build_limiting_module(const Normalization& norm, const BigInt& k, int G) {
  return build_core(norm, k, G, /*finite=*/false);
}

LimitingModule build_finite_power_module(const Normalization& norm, const BigInt& k_m,
                                         int G) {
  return build_core(norm, k_m, G, /*finite=*/true);
}

long mu_schedule(const SigmaModule& psi, const BigInt& k) {
  long mu = psi.R->N();
  const long rho = psi.rank();
  for (long c = 0; c < rho; ++c) {
    if (BigInt(c + 1) <= k) continue;  // basis element e_{c+1} with c+1 > k
    long col = psi.R->N();
    for (long i = 0; i < rho; ++i)
      col = std::min(col, psi.B[static_cast<size_t>(i)][static_cast<size_t>(c)].ord());
    mu = std::min(mu, col);
  }
  return mu;
}

CongruenceReport limiting_congruence_check(const Normalization& norm, const BigInt& k,
                                           long m, int G) {
  const RingPtr& R = norm.psi.R;
  const long p = R->p(), e = R->e(), N = R->N();
  require(m >= 1, Err::BadInput, "limiting_congruence_check: m must be >= 1");
  require(G >= m + 1, Err::CapTooSmall,
          "limiting_congruence_check: need G >= m+1 so the truncation cannot eat the claim");

  CongruenceReport rep;
  rep.k_m = k + pow_big(BigInt(p), static_cast<unsigned long>(m));
  require(rep.k_m >= 1, Err::BadInput, "limiting_congruence_check: k + p^m must be positive");

  const LimitingModule lim = build_limiting_module(norm, k, G);
  const LimitingModule fin = build_finite_power_module(norm, rep.k_m, G);

  long observed = N;
  long comparable = N;
  for (size_t i = 0; i < lim.basis.size(); ++i)
    for (size_t jx = 0; jx < lim.basis.size(); ++jx) {
      const TruncatedLaurent& a = lim.module.B[i][jx];
      const TruncatedLaurent& b = fin.module.B[i][jx];
      observed = std::min(observed, diff_ord(a, b));
      comparable = std::min({comparable, a.scalar_modulus(), b.scalar_modulus()});
    }
  rep.observed = observed;
  rep.claimed = std::min({mu_schedule(norm.psi, rep.k_m), m + 1, comparable});
  rep.pass = observed >= rep.claimed;
  rep.sharpened_applies = e < p - 1;
  rep.sharpened = std::min(1 + m * e, comparable);
  rep.sharpened_pass = rep.sharpened_applies ? observed >= rep.sharpened : rep.pass;
  return rep;
}

LSeries explicit_formula_L(const Normalization& norm, const BigInt& k, long D, int G,
                           TorusContext& ctx, FibreCache& cache,
                           const SigmaModule* extra_twist) {
  (void)cache;
  const SigmaModule& psi = norm.psi;
  const RingPtr& R = psi.R;
  const long rho = psi.rank();
  const long q1 = psi.q - 1;
  const BigInt r = mod_pos(k, BigInt(q1));

  TwistSpec tw;
  tw.unit = norm.a;
  tw.unit_exp = k;
  tw.mono = norm.g;
  tw.mono_exp = r;

  FibreCache local;
  std::vector<std::unique_ptr<LimitingModule>> lims;
  std::vector<std::unique_ptr<SigmaModule>> exts;
  LSeries acc = ls_one(R, D);
  for (long i = 1; i <= rho; ++i) {
    lims.push_back(std::make_unique<LimitingModule>(build_limiting_module(norm, k - i, G)));
    exts.push_back(std::make_unique<SigmaModule>(
        power_algebra(psi, static_cast<int>(i), PowOp::Ext)));
    std::vector<FactorSpec> parts;
    FactorSpec fl;
    fl.module = &lims.back()->module;
    parts.push_back(fl);
    FactorSpec fe;
    fe.module = exts.back().get();
    parts.push_back(fe);
    if (extra_twist != nullptr) {
      FactorSpec fx;
      fx.module = extra_twist;
      parts.push_back(fx);
    }
    const LSeries Li = euler_product_L(parts, tw, D, ctx, local);
    acc = ls_mul(acc, ls_pow(Li, i % 2 == 1 ? i : -i));
  }
  acc.provenance = "limiting-module explicit formula";
  return acc;
}

LSeries explicit_formula_higher_L(const Normalization& norm_prev,
                                  const Normalization& norm_cur, const BigInt& k,
                                  long D, int G, TorusContext& ctx, FibreCache& cache) {
  (void)cache;
  const SigmaModule& A = norm_prev.psi;
  const SigmaModule& C = norm_cur.psi;
  require(A.R->same_as(*C.R), Err::RingMismatch, "explicit_formula_higher_L: mixed rings");
  const RingPtr& R = C.R;
  const long q1 = C.q - 1;
  const BigInt r = mod_pos(k, BigInt(q1));

  TwistSpec tw;
  tw.unit = norm_cur.a * norm_prev.a.invert_unit();
  tw.unit_exp = k;
  Expo g(norm_cur.g.size());
  for (size_t i = 0; i < g.size(); ++i) g[i] = norm_cur.g[i] - norm_prev.g[i];
  tw.mono = g;
  tw.mono_exp = r;

  FibreCache local;
  std::vector<std::unique_ptr<LimitingModule>> lims;
  std::vector<std::unique_ptr<SigmaModule>> exts;
  LSeries acc = ls_one(R, D);
  for (long l1 = 1; l1 <= A.rank(); ++l1)
    for (long l2 = 1; l2 <= C.rank(); ++l2) {
      lims.push_back(
          std::make_unique<LimitingModule>(build_limiting_module(norm_prev, -k - l1, G)));
      const LimitingModule* lim1 = lims.back().get();
      lims.push_back(
          std::make_unique<LimitingModule>(build_limiting_module(norm_cur, k - l2, G)));
      const LimitingModule* lim2 = lims.back().get();
      exts.push_back(std::make_unique<SigmaModule>(
          power_algebra(A, static_cast<int>(l1), PowOp::Ext)));
      const SigmaModule* ext1 = exts.back().get();
      exts.push_back(std::make_unique<SigmaModule>(
          power_algebra(C, static_cast<int>(l2), PowOp::Ext)));
      const SigmaModule* ext2 = exts.back().get();

      std::vector<FactorSpec> parts(4);
      parts[0].module = &lim1->module;
      parts[1].module = ext1;
      parts[2].module = &lim2->module;
      parts[3].module = ext2;
      const LSeries L = euler_product_L(parts, tw, D, ctx, local);
      const long sign = (l1 + l2) % 2 == 0 ? 1 : -1;
      acc = ls_mul(acc, ls_pow(L, sign * l1 * l2));
    }
  acc.provenance = "higher-slope explicit formula";
  return acc;
}

SlopeReport slope_degree_explore(const std::vector<LSeries>& window, long s_max) {
  require(!window.empty(), Err::BadInput, "slope_degree_explore: empty window");

  struct PerSeries {
    std::map<long, long> dlen;
    bool certified = false;
  };
  std::vector<PerSeries> per;
  per.reserve(window.size());

  for (const LSeries& L : window) {
    PerSeries ps;
    const long e = L.R->e();
    std::vector<std::optional<BigRat>> ords;
    for (long jx = 0; jx <= L.exact_upto; ++jx) {
      const long o = L.c[static_cast<size_t>(jx)].ord_pi();
      if (o >= L.modulus) ords.emplace_back(std::nullopt);  // only a lower bound
      else ords.emplace_back(BigRat(o));
    }
    const NewtonPolygon poly = newton_polygon(ords, BigRat(e));  // ord_p units

    for (const auto& [slope, len] : poly.segments) {
      const BigInt num = boost::multiprecision::numerator(slope);
      const BigInt den = boost::multiprecision::denominator(slope);
      if (den == 1 && num >= 0) ps.dlen[num.convert_to<long>()] += len;
    }

    // The apparent polygon is certain when every unknown coefficient sits
    // strictly above the hull: hull(j)*e < modulus for every "at least" slot
    // covered by the hull, and the hull reaches the exact frontier.
    bool cert = !poly.vertices.empty();
    if (cert) {
      const long x_last = poly.vertices.back().first;
      if (x_last < L.exact_upto) cert = false;
      for (long jx = 0; cert && jx <= L.exact_upto; ++jx) {
        if (ords[static_cast<size_t>(jx)].has_value()) continue;
        // envelope value at jx
        BigRat env;
        bool found = false;
        for (size_t v = 0; v + 1 < poly.vertices.size(); ++v) {
          const auto& [x0, y0] = poly.vertices[v];
          const auto& [x1, y1] = poly.vertices[v + 1];
          if (jx < x0 || jx > x1 || x0 == x1) continue;
          env = y0 + (y1 - y0) * BigRat(jx - x0) / BigRat(x1 - x0);
          found = true;
          break;
        }
        if (!found) { cert = false; break; }
        if (env * BigRat(e) >= BigRat(L.modulus)) cert = false;
      }
    }
    ps.certified = cert;
    per.push_back(std::move(ps));
  }

  SlopeReport rep;
  for (long s = 0; s <= s_max; ++s) {
    SlopeRow row;
    row.s = s;
    const auto it = per.back().dlen.find(s);
    row.d_s = it == per.back().dlen.end() ? 0 : it->second;
    row.stable = true;
    for (const PerSeries& ps : per) {
      const auto jt = ps.dlen.find(s);
      const long d = jt == ps.dlen.end() ? 0 : jt->second;
      if (d != row.d_s) row.stable = false;
    }
    row.certified = per.back().certified;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace dworklab
