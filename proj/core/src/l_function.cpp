#include "dworklab/l_function.hpp"

#include <functional>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dworklab/parallel.hpp"

namespace dworklab {

// ---- LSeries ------------------------------------------------------------------

LSeries ls_one(const RingPtr& R, long D) {
  LSeries s;
  s.R = R;
  s.D = D;
  s.c.assign(D + 1, PAdicScalar::zero(R));
  s.c[0] = PAdicScalar::one(R);
  s.modulus = R->N();
  s.exact_upto = D;
  s.provenance = "one";
  return s;
}

LSeries ls_from_coeffs(const RingPtr& R, std::vector<PAdicScalar> c, long modulus,
                       long exact_upto, std::string provenance) {
  LSeries s;
  s.R = R;
  s.D = static_cast<long>(c.size()) - 1;
  require(s.D >= 0, Err::BadInput, "ls_from_coeffs: empty coefficient list");
  require(c[0] == PAdicScalar::one(R), Err::BadInput, "ls_from_coeffs: c_0 must be 1");
  s.c = std::move(c);
  s.modulus = std::min<long>(modulus, R->N());
  s.exact_upto = std::min(exact_upto, s.D);
  s.provenance = std::move(provenance);
  return s;
}

LSeries ls_mul(const LSeries& a, const LSeries& b) {
  require(a.R->same_as(*b.R), Err::RingMismatch, "ls_mul");
  LSeries s;
  s.R = a.R;
  s.D = std::min(a.D, b.D);
  s.c.assign(s.D + 1, PAdicScalar::zero(a.R));
  for (long i = 0; i <= s.D; ++i)
    for (long j = 0; i + j <= s.D && j <= b.D; ++j) {
      if (i > a.D) break;
      s.c[i + j] = s.c[i + j] + a.c[i] * b.c[j];
    }
  s.modulus = std::min(a.modulus, b.modulus);
  s.exact_upto = std::min({a.exact_upto, b.exact_upto, s.D});
  s.provenance = "product-of";
  return s;
}

LSeries ls_inverse(const LSeries& a) {
  require(a.c[0] == PAdicScalar::one(a.R), Err::NotAUnit, "ls_inverse: c_0 must be 1");
  LSeries s = a;
  s.c.assign(a.D + 1, PAdicScalar::zero(a.R));
  s.c[0] = PAdicScalar::one(a.R);
  for (long j = 1; j <= a.D; ++j) {
    PAdicScalar acc = PAdicScalar::zero(a.R);
    for (long m = 1; m <= j; ++m) acc = acc + a.c[m] * s.c[j - m];
    s.c[j] = -acc;
  }
  s.provenance = "inverse-of";
  return s;
}

LSeries ls_pow(const LSeries& a, long e) {
  LSeries base = e < 0 ? ls_inverse(a) : a;
  long n = e < 0 ? -e : e;
  LSeries acc = ls_one(a.R, a.D);
  acc.modulus = a.modulus;
  acc.exact_upto = a.exact_upto;
  for (long i = 0; i < n; ++i) acc = ls_mul(acc, base);
  return acc;
}

LSeries ls_scale_T(const LSeries& a, const PAdicScalar& s) {
  LSeries r = a;
  PAdicScalar pw = PAdicScalar::one(a.R);
  for (long j = 1; j <= a.D; ++j) {
    pw = pw * s;
    r.c[j] = a.c[j] * pw;
  }
  r.provenance = "scaled";
  return r;
}

LSeries ls_truncate(const LSeries& a, long D) {
  require(D <= a.D, Err::BadInput, "ls_truncate: can only shrink");
  LSeries r = a;
  r.D = D;
  r.c.resize(D + 1, PAdicScalar::zero(a.R));
  r.exact_upto = std::min(r.exact_upto, D);
  return r;
}

LAgree ls_agree(const LSeries& a, const LSeries& b) {
  LAgree g;
  g.upto = std::min({a.D, b.D, a.exact_upto, b.exact_upto});
  g.modulus = std::min<long>({a.modulus, b.modulus, a.R->N()});
  g.ok = true;
  for (long j = 0; j <= g.upto; ++j)
    if (!a.c[j].congruent(b.c[j], g.modulus)) {
      g.ok = false;
      g.first_mismatch = j;
      break;
    }
  return g;
}

long ls_diff_ord(const LSeries& a, const LSeries& b) {
  require(a.R->same_as(*b.R), Err::RingMismatch, "ls_diff_ord: mixed rings");
  const long upto = std::min({a.D, b.D, a.exact_upto, b.exact_upto});
  long obs = a.R->N();
  for (long j = 1; j <= upto; ++j) obs = std::min(obs, diff_ord(a.c[j], b.c[j]));
  return obs;
}

// ---- Euler products -------------------------------------------------------------

TorusContext make_torus_context(RingTower& tower, int n, int d_max) {
  TorusContext ctx;
  ctx.n = n;
  ctx.q = tower.base()->p();
  ctx.d_max = d_max;
  ctx.tower = &tower;
  ctx.points = enumerate_closed_points(n, ctx.q, d_max, tower);
  return ctx;
}

const NuclearConstMatrix& FibreCache::get(const SigmaModule& M, TorusContext& ctx,
                                          int idx) {
  require(M.uid >= 0, Err::BadInput, "FibreCache: module was not built by make_module");
  auto key = std::make_pair(M.uid, idx);
  auto it = store.find(key);
  if (it != store.end()) return it->second;
  NuclearConstMatrix F = fibre_frobenius(M, ctx.points[idx], *ctx.tower);
  return store.emplace(key, std::move(F)).first->second;
}

namespace {

NuclearConstMatrix apply_factor(const NuclearConstMatrix& Phi, const FactorSpec& fs) {
  NuclearConstMatrix E = Phi;
  if (fs.functor == Functor::Sym)
    E = ncm_sym(Phi, fs.functor_deg);
  else if (fs.functor == Functor::Ext)
    E = ncm_ext(Phi, fs.functor_deg);
  if (fs.power != 1) E = ncm_pow(E, fs.power);
  return E;
}

PAdicScalar twist_value(const TwistSpec& tw, const ClosedPoint& x, const RingPtr& Rd) {
  PAdicScalar val = PAdicScalar::one(Rd);
  if (tw.unit.has_value())
    val = val * PAdicScalar::embed_base(Rd, *tw.unit).pow(tw.unit_exp * x.degree);
  if (!tw.mono.empty() && tw.mono_exp != 0) {
    for (int s = 0; s < x.degree; ++s) {
      std::vector<PAdicScalar> coords = frobenius_twist(x, s);
      for (int i = 0; i < x.n; ++i) {
        if (tw.mono[i] == 0) continue;
        val = val * coords[i].pow(tw.mono_exp * tw.mono[i]);
      }
    }
  }
  return val;
}

// det(I - w E_1 (x) ... (x) E_r T^{deg x})^{-1} as a base-ring series to T^D,
// using Tr((x) E_i^m) = prod Tr(E_i^m).
LSeries local_euler_factor(const std::vector<NuclearConstMatrix>& Es,
                           const PAdicScalar& w, const ClosedPoint& x,
                           const RingPtr& Rd, const RingPtr& R, long D) {
  long dx = x.degree;
  long Dfac = D / dx;
  long base_mod = Rd->N();
  // The local factor's denominator is the char polynomial of the tensor
  // product, of degree prod dims; stopping the Newton recursion there (the
  // higher coefficients vanish to the certified modulus) avoids spending
  // ledger on divisions that cannot contribute.
  long dim_prod = 1;
  for (const auto& E : Es) {
    base_mod = std::min(base_mod, E.modulus);
    base_mod = std::min(base_mod, E.tail_level);
    dim_prod = std::min<long>(Dfac, dim_prod * std::max(1, E.dim()));
  }
  const long Dpoly = std::min(Dfac, dim_prod);
  std::vector<PAdicScalar> traces;
  traces.reserve(Dpoly);
  std::vector<NuclearConstMatrix> P = Es;
  PAdicScalar wpow = PAdicScalar::one(Rd);
  for (long m = 1; m <= Dpoly; ++m) {
    if (m > 1)
      for (size_t i = 0; i < P.size(); ++i) P[i] = ncm_mul(P[i], Es[i]);
    wpow = wpow * w;
    PAdicScalar tr = wpow;
    for (const auto& Pi : P) tr = tr * ncm_trace(Pi);
    traces.push_back(tr);
  }
  CharSeries cs = char_series_from_traces(Rd, traces, Dpoly, base_mod);
  std::vector<PAdicScalar> den(D + 1, PAdicScalar::zero(R));
  den[0] = PAdicScalar::one(R);
  for (long j = 1; j <= Dpoly; ++j)
    if (j * dx <= D) den[j * dx] = cs.c[j].descend_to_base(R);
  LSeries loc = ls_from_coeffs(R, std::move(den), cs.modulus, D, "euler-factor");
  return ls_inverse(loc);
}

}  // namespace

LSeries euler_product_L(const std::vector<FactorSpec>& parts,
                        const std::optional<TwistSpec>& twist, long D,
                        TorusContext& ctx, FibreCache& cache) {
  require(!parts.empty(), Err::BadInput, "euler_product_L: need at least one factor");
  const RingPtr R = ctx.tower->base();
  // warm the caches sequentially (tower and fibre maps are not thread-safe)
  std::vector<std::vector<const NuclearConstMatrix*>> fibres(ctx.points.size());
  std::vector<RingPtr> rings(ctx.points.size());
  for (size_t idx = 0; idx < ctx.points.size(); ++idx) {
    if (ctx.points[idx].degree > D) continue;
    rings[idx] = ctx.tower->at_degree(ctx.points[idx].degree);
    for (const auto& fs : parts)
      fibres[idx].push_back(&cache.get(*fs.module, ctx, static_cast<int>(idx)));
  }
  std::vector<LSeries> locals = parallel_map<LSeries>(
      ctx.points.size(), [&](size_t idx) -> LSeries {
        const ClosedPoint& x = ctx.points[idx];
        if (x.degree > D) return ls_one(R, D);
        std::vector<NuclearConstMatrix> Es;
        Es.reserve(parts.size());
        for (size_t pi = 0; pi < parts.size(); ++pi)
          Es.push_back(apply_factor(*fibres[idx][pi], parts[pi]));
        PAdicScalar w = twist.has_value() ? twist_value(*twist, x, rings[idx])
                                          : PAdicScalar::one(rings[idx]);
        return local_euler_factor(Es, w, x, rings[idx], R, D);
      });
  LSeries acc = ls_one(R, D);
  for (const auto& f : locals) acc = ls_mul(acc, f);
  acc.exact_upto = std::min<long>(D, ctx.d_max);
  acc.provenance = "euler";
  return acc;
}

LSeries euler_L(const SigmaModule& M, const BigInt& k, long D, TorusContext& ctx,
                FibreCache& cache) {
  FactorSpec fs;
  fs.module = &M;
  fs.power = k;
  return euler_product_L({fs}, std::nullopt, D, ctx, cache);
}

LSeries tensor_powers_L(const SigmaModule& m1, const BigInt& k1, const SigmaModule& m2,
                        const BigInt& k2, long D, TorusContext& ctx, FibreCache& cache) {
  FactorSpec f1, f2;
  f1.module = &m1;
  f1.power = k1;
  f2.module = &m2;
  f2.power = k2;
  return euler_product_L({f1, f2}, std::nullopt, D, ctx, cache);
}

// ---- Dwork trace formula ---------------------------------------------------------

namespace {

void gen_lattice(int n, int U, std::vector<int>& cur, std::vector<Expo>& out) {
  if (static_cast<int>(cur.size()) == n) {
    if (l1(cur) <= U) out.push_back(cur);
    return;
  }
  for (int v = -U; v <= U; ++v) {
    cur.push_back(v);
    gen_lattice(n, U, cur, out);
    cur.pop_back();
  }
}

long computed_UF(const SigmaModule& M) {
  bool exact = true;
  long U_supp = 0;
  for (const auto& row : M.B)
    for (const auto& e : row) {
      if (!e.tail_exact()) exact = false;
      for (const auto& [w, c] : e.support()) U_supp = std::max(U_supp, l1(w));
    }
  if (exact) {
    // nonzero trace cycles are confined to |v| <= U_supp/(q-1)
    return (U_supp + M.q - 2) / (M.q - 1);
  }
  TailCert cert = module_cert(M);
  if (cert.kind == TailCert::Kind::Over) {
    // discarded cycles pass through |v| > U_F and pick up ord >=
    // r (q-1)(U_F + 1) >= N
    BigInt num = boost::multiprecision::numerator(cert.param);
    BigInt den = boost::multiprecision::denominator(cert.param);
    require(num > 0, Err::InsufficientTruncation, "fredholm: OVER rate must be positive");
    BigInt need = BigInt(M.R->N()) * den;
    BigInt scale = num * (M.q - 1);
    BigInt uf = (need + scale - 1) / scale;
    return uf.convert_to<long>();
  }
  fail(Err::InsufficientTruncation,
       "fredholm: clipped module without an OVER certificate cannot bound the "
       "discarded Fredholm blocks");
}

}  // namespace

FredholmResult fredholm_L(const SigmaModule& M, long D, long U_F) {
  const RingPtr& R = M.R;
  if (U_F < 0) U_F = computed_UF(M);
  std::vector<Expo> lattice;
  {
    std::vector<int> cur;
    gen_lattice(M.n, static_cast<int>(U_F), cur, lattice);
    std::sort(lattice.begin(), lattice.end());
  }
  int r = M.rank();
  long dim = static_cast<long>(lattice.size()) * r;
  require(dim <= 4000, Err::BudgetExceeded, "fredholm: truncated matrix too large");
  long entry_mod = R->N();
  for (const auto& row : M.B)
    for (const auto& e : row) entry_mod = std::min(entry_mod, e.eval_modulus());
  // F[(v,i)][(u,j)] = coefficient of B_ij at qu - v
  std::vector<std::vector<PAdicScalar>> F(
      dim, std::vector<PAdicScalar>(dim, PAdicScalar::zero(R)));
  Expo w(M.n, 0);
  for (size_t vi = 0; vi < lattice.size(); ++vi)
    for (size_t ui = 0; ui < lattice.size(); ++ui) {
      for (int t = 0; t < M.n; ++t) w[t] = M.q * lattice[ui][t] - lattice[vi][t];
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
          PAdicScalar cw = M.B[i][j].coeff(w);
          if (!cw.is_zero()) F[vi * r + i][ui * r + j] = std::move(cw);
        }
    }
  NuclearConstMatrix Fm = NuclearConstMatrix::from_entries(R, std::move(F));
  Fm.modulus = entry_mod;
  CharSeries cs = char_series(Fm, D);

  FredholmResult res;
  res.U_F = U_F;
  res.dim = dim;
  res.det = ls_from_coeffs(R, cs.c, cs.modulus, D, "fredholm-det");
  LSeries X = ls_one(R, D);
  for (int j = 0; j <= M.n; ++j) {
    PAdicScalar qj = PAdicScalar::from_int(R, pow_big(BigInt(M.q), BigInt(j)));
    LSeries factor = ls_scale_T(res.det, qj);
    long e = binomial(BigInt(M.n), j).convert_to<long>();
    if (j % 2 == 1) e = -e;
    X = ls_mul(X, ls_pow(factor, e));
  }
  res.L = (M.n % 2 == 1) ? X : ls_inverse(X);
  res.L.provenance = "fredholm";
  res.L.exact_upto = D;
  return res;
}

InvertedCheck fredholm_inverted_check(const SigmaModule& M, long D, TorusContext& ctx,
                                      FibreCache& cache) {
  InvertedCheck chk;
  chk.lhs = fredholm_L(M, D).det;
  LSeries base = euler_L(M, 1, D, ctx, cache);
  LSeries rhs = ls_one(M.R, D);
  int sign = (M.n % 2 == 1) ? 1 : -1;
  // q^j T dies mod pi^N once j >= N / ord_pi(q); j <= N is always enough
  for (long j = 0; j <= M.R->N(); ++j) {
    PAdicScalar qj = PAdicScalar::from_int(M.R, pow_big(BigInt(M.q), BigInt(j)));
    long e = sign * binomial(BigInt(M.n + j - 1), static_cast<long>(j)).convert_to<long>();
    if (e == 0) continue;
    rhs = ls_mul(rhs, ls_pow(ls_scale_T(base, qj), e));
  }
  rhs.exact_upto = std::min<long>(D, ctx.d_max);
  chk.rhs = rhs;
  chk.agree = ls_agree(chk.lhs, chk.rhs);
  return chk;
}

// ---- Newton-Waring ---------------------------------------------------------------

namespace {
PAdicScalar trace_sym(const NuclearConstMatrix& E, long deg) {
  if (deg == 0) return PAdicScalar::one(E.R);
  return ncm_trace(ncm_sym(E, static_cast<int>(deg)));
}
}  // namespace

WaringPair newton_waring_check_41(const NuclearConstMatrix& E, long k) {
  require(k >= 1, Err::BadInput, "newton_waring: k >= 1");
  WaringPair p{ncm_trace(ncm_pow(E, BigInt(k))), PAdicScalar::zero(E.R)};
  for (long i = 1; i <= std::min<long>(k, E.dim()); ++i) {
    PAdicScalar term =
        (trace_sym(E, k - i) * ncm_trace(ncm_ext(E, static_cast<int>(i)))).mul_int(i);
    p.rhs = (i % 2 == 1) ? p.rhs + term : p.rhs - term;
  }
  return p;
}

WaringPair newton_waring_check_42(const NuclearConstMatrix& E, long k) {
  require(k >= 1, Err::BadInput, "newton_waring: k >= 1");
  WaringPair p{ncm_trace(ncm_pow(E, BigInt(k))), trace_sym(E, k)};
  for (long i = 2; i <= std::min<long>(k, E.dim()); ++i) {
    PAdicScalar term =
        (trace_sym(E, k - i) * ncm_trace(ncm_ext(E, static_cast<int>(i)))).mul_int(i - 1);
    p.rhs = (i % 2 == 1) ? p.rhs + term : p.rhs - term;
  }
  return p;
}

namespace {
// Tr(Sym^a E^j) and Tr(Ext^t E^j) for j = 1..D computed on the small matrix:
// e_t = Tr(Ext^t E^j) directly, and h_a = Tr(Sym^a E^j) by inverting
// det(I - T E^j) = sum_t (-1)^t e_t T^t (exact: the constant term is 1).
struct SymExtTable {
  std::vector<std::vector<PAdicScalar>> h;  // h[j-1][a], a <= k
  std::vector<std::vector<PAdicScalar>> e;  // e[j-1][t], t <= dim
};

SymExtTable sym_ext_traces(const NuclearConstMatrix& E, long k, long D) {
  const RingPtr& R = E.R;
  const int dim = E.dim();
  SymExtTable tab;
  NuclearConstMatrix P = E;
  for (long j = 1; j <= D; ++j) {
    if (j > 1) P = ncm_mul(P, E);
    std::vector<PAdicScalar> et(static_cast<size_t>(dim) + 1, PAdicScalar::zero(R));
    et[0] = PAdicScalar::one(R);
    for (int t = 1; t <= dim; ++t) et[t] = ncm_trace(ncm_ext(P, t));
    std::vector<PAdicScalar> ha(static_cast<size_t>(k) + 1, PAdicScalar::zero(R));
    ha[0] = PAdicScalar::one(R);
    for (long a = 1; a <= k; ++a) {
      PAdicScalar s = PAdicScalar::zero(R);
      for (long t = 1; t <= std::min<long>(a, dim); ++t) {
        const PAdicScalar term = et[static_cast<size_t>(t)] * ha[static_cast<size_t>(a - t)];
        s = (t % 2 == 1) ? s + term : s - term;
      }
      ha[static_cast<size_t>(a)] = s;
    }
    tab.e.push_back(std::move(et));
    tab.h.push_back(std::move(ha));
  }
  return tab;
}
}  // namespace

DetDecomp det_power_decomposition_check(const NuclearConstMatrix& E, long k, long D) {
  require(k >= 1, Err::BadInput, "det_power_decomposition: k >= 1");
  const long base = std::min<long>({E.R->N(), E.modulus, E.tail_level});
  const SymExtTable tab = sym_ext_traces(E, k, D);
  const auto series_from = [&](const std::function<PAdicScalar(long)>& trace_at,
                               const char* tag) {
    std::vector<PAdicScalar> traces;
    traces.reserve(static_cast<size_t>(D));
    for (long j = 1; j <= D; ++j) traces.push_back(trace_at(j));
    CharSeries cs = char_series_from_traces(E.R, traces, D, base);
    return ls_from_coeffs(E.R, cs.c, cs.modulus, D, tag);
  };
  DetDecomp d;
  {
    CharSeries cs = char_series(ncm_pow(E, BigInt(k)), D);
    d.lhs = ls_from_coeffs(E.R, cs.c, cs.modulus, D, "det-lhs");
  }
  d.rhs_full = ls_one(E.R, D);
  d.rhs_reduced = series_from(
      [&](long j) { return tab.h[static_cast<size_t>(j - 1)][static_cast<size_t>(k)]; },
      "sym-lead");
  for (long i = 1; i <= std::min<long>(k, E.dim()); ++i) {
    LSeries f = series_from(
        [&](long j) {
          return tab.h[static_cast<size_t>(j - 1)][static_cast<size_t>(k - i)] *
                 tab.e[static_cast<size_t>(j - 1)][static_cast<size_t>(i)];
        },
        "det-rhs-factor");
    long sign = (i % 2 == 1) ? 1 : -1;
    d.rhs_full = ls_mul(d.rhs_full, ls_pow(f, sign * i));
    if (i >= 2) d.rhs_reduced = ls_mul(d.rhs_reduced, ls_pow(f, sign * (i - 1)));
  }
  return d;
}

LDecomp l_power_decomposition(const SigmaModule& M, long k, long D, TorusContext& ctx,
                              FibreCache& cache) {
  require(k >= 1, Err::BadInput, "l_power_decomposition: k >= 1");
  LDecomp d;
  d.lhs = euler_L(M, BigInt(k), D, ctx, cache);
  d.rhs = ls_one(M.R, D);
  for (long i = 1; i <= std::min<long>(k, M.rank()); ++i) {
    FactorSpec sym, ext;
    sym.module = &M;
    sym.functor = Functor::Sym;
    sym.functor_deg = static_cast<int>(k - i);
    ext.module = &M;
    ext.functor = Functor::Ext;
    ext.functor_deg = static_cast<int>(i);
    LSeries Li = euler_product_L({sym, ext}, std::nullopt, D, ctx, cache);
    long sign = (i % 2 == 1) ? 1 : -1;
    d.rhs = ls_mul(d.rhs, ls_pow(Li, sign * i));
  }
  d.rhs.exact_upto = std::min<long>(D, ctx.d_max);
  d.agree = ls_agree(d.lhs, d.rhs);
  return d;
}

// ---- valuation audit ---------------------------------------------------------------

namespace {

// A + gamma * (log_q V - log_q U) >= 0, exactly.  V, U >= 1.
bool log_ineq(long q, const BigRat& A, const BigRat& gamma, const BigInt& V,
              const BigInt& U) {
  BigInt na = boost::multiprecision::numerator(A);
  BigInt da = boost::multiprecision::denominator(A);
  BigInt ng = boost::multiprecision::numerator(gamma);
  BigInt dg = boost::multiprecision::denominator(gamma);
  BigInt E1 = na * dg, E2 = ng * da;  // compare q^{E1} (V/U)^{E2} >= 1
  BigInt lhs = 1, rhs = 1;
  if (E1 >= 0)
    lhs *= pow_big(BigInt(q), E1);
  else
    rhs *= pow_big(BigInt(q), -E1);
  if (E2 >= 0) {
    lhs *= pow_big(V, E2);
    rhs *= pow_big(U, E2);
  } else {
    lhs *= pow_big(U, -E2);
    rhs *= pow_big(V, -E2);
  }
  return lhs >= rhs;
}

}  // namespace

ValuationAuditReport valuation_audit(const SigmaModule& M, const BigRat& c,
                                     const BigRat& eps, int U_F) {
  require(eps > 0 && eps < 2 * c, Err::BadInput, "valuation_audit: need 0 < eps < 2c");
  ValuationAuditReport rep;
  rep.c = c;
  rep.eps = eps;
  const long q = M.q;
  const BigRat gamma = c - eps / 2;   // weight rate of w(u)
  const BigRat target = c - eps;      // column bound (5.3)

  bool tails_exact = true;
  long worst_violation = 0;  // largest |u| where the stored data violates (5.5)
  for (const auto& row : M.B)
    for (const auto& e : row) {
      if (!e.tail_exact()) tails_exact = false;
      for (const auto& [u, coeff] : e.support()) {
        long absu = l1(u);
        if (absu == 0) continue;
        // ord >= gamma log_q |u|  <=>  ord - gamma log|u| + gamma log 1 >= 0
        if (!log_ineq(q, BigRat(coeff.ord_pi()), gamma, 1, BigInt(absu)))
          worst_violation = std::max(worst_violation, absu);
      }
    }
  rep.N_eps = std::max<long>(1, worst_violation);
  if (!tails_exact)
    rep.note = "clipped entries: (5.5) scan limited to the stored support; ";

  // (5.6): smallest x > N_eps with gamma * log_q((qx - N_eps)/x) >= c - eps
  long star = 0;
  for (long x = rep.N_eps + 1; x <= rep.N_eps + 1'000'000; ++x) {
    if (log_ineq(q, -target, gamma, BigInt(q) * x - rep.N_eps, BigInt(x))) {
      star = x;
      break;
    }
  }
  if (star == 0) {
    rep.pass = false;
    rep.note += "no N_eps_star within scan budget (rate too close to c - eps)";
    return rep;
  }
  rep.N_eps_star = star;
  {
    double approx = boost::multiprecision::numerator(gamma).convert_to<double>() /
                    boost::multiprecision::denominator(gamma).convert_to<double>() *
                    std::log(static_cast<double>(star)) / std::log(static_cast<double>(q));
    std::ostringstream os;
    os << "-(c - eps/2)*log_q(N_eps_star) ~= -" << approx;
    rep.floor_desc = os.str();
  }

  // Column scan of the twisted matrix G over block columns |u| <= U_F.
  std::vector<Expo> lattice;
  {
    std::vector<int> cur;
    gen_lattice(M.n, U_F, cur, lattice);
    std::sort(lattice.begin(), lattice.end());
  }
  int r = M.rank();
  rep.pass = true;
  Expo v(M.n, 0);
  for (const Expo& u : lattice)
    for (int j = 0; j < r; ++j) {
      bool col_ok = true;
      bool floor_ok = true;
      long absu = l1(u);
      for (int i = 0; i < r; ++i)
        for (const auto& [w, coeff] : M.B[i][j].support()) {
          for (int t = 0; t < M.n; ++t) v[t] = q * u[t] - w[t];
          BigInt V = std::max<long>(1, l1(v)), Uu = std::max<long>(1, absu);
          // (5.3): ord + w(v) - w(u) >= c - eps
          if (!log_ineq(q, BigRat(coeff.ord_pi()) - target, gamma, V, Uu))
            col_ok = false;
          // (5.4): ord + w(v) - w(u) >= -w(N_eps_star)
          if (!log_ineq(q, BigRat(coeff.ord_pi()), gamma, V * star, Uu))
            floor_ok = false;
        }
      if (!floor_ok) {
        rep.pass = false;
        std::ostringstream os;
        os << "uniform floor (5.4) violated at block column u = (";
        for (size_t t = 0; t < u.size(); ++t) os << (t ? "," : "") << u[t];
        os << "), module column " << j;
        rep.violations.push_back(os.str());
      }
      if (!col_ok) {
        if (absu > rep.N_eps_star) {
          rep.pass = false;
          std::ostringstream os;
          os << "column bound (5.3) fails outside N_eps_star at |u| = " << absu
             << ", module column " << j;
          rep.violations.push_back(os.str());
        }
        rep.exceptional.push_back(AuditColumn{u, j});
      }
    }
  return rep;
}

}  // namespace dworklab
