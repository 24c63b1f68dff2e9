#include "dworklab/sigma_module.hpp"

#include <algorithm>
#include <atomic>

#include "dworklab/detail/multilinear.hpp"

namespace dworklab {

namespace {

// Column ords capped at N, then the structural level is the suffix minimum
// (level(j) = min over columns >= j), which is what the d-sequence sees.
std::vector<long> column_levels(const LMat& B, long N) {
  int m = static_cast<int>(B[0].size());
  std::vector<long> ord(m, N);
  for (int j = 0; j < m; ++j)
    for (const auto& row : B) ord[j] = std::min(ord[j], row[j].ord());
  for (int j = m - 2; j >= 0; --j) ord[j] = std::min(ord[j], ord[j + 1]);
  return ord;
}

void levels_to_dh(const std::vector<long>& lvl, std::vector<long>& d_seq,
                  std::vector<long>& h_seq) {
  long maxlvl = 0;
  for (long l : lvl) maxlvl = std::max(maxlvl, l);
  h_seq.assign(maxlvl + 1, 0);
  for (long l : lvl) ++h_seq[l];
  d_seq.assign(maxlvl + 1, 0);
  long run = 0;
  for (long i = 0; i <= maxlvl; ++i) {
    run += h_seq[i];
    d_seq[i] = run;  // d_{i+1} in 1-based terms: columns of level <= i
  }
}

long checked_narrow(const BigInt& v, const char* what) {
  require(v >= 0 && v <= BigInt(LONG_MAX / 4), Err::BudgetExceeded, what);
  return static_cast<long>(v);
}

}  // namespace

SigmaModule make_module(int q, const LMat& B, long tail_level) {
  require(q >= 2, Err::BadInput, "make_module: q >= 2");
  require(!B.empty() && B.size() == B[0].size(), Err::NonNuclearInput,
          "make_module: square matrix required");
  const RingPtr& R = B[0][0].ring();
  int n = B[0][0].n();
  for (const auto& row : B) {
    require(row.size() == B.size(), Err::NonNuclearInput, "make_module: ragged matrix");
    for (const auto& e : row) {
      require(e.ring()->same_as(*R), Err::RingMismatch, "make_module: mixed rings");
      require(e.n() == n, Err::BadInput, "make_module: mixed torus dimensions");
    }
  }
  require(tail_level == kNoTail || tail_level >= 1, Err::BadInput,
          "make_module: tail_level >= 1");
  SigmaModule M;
  M.q = q;
  M.n = n;
  M.R = R;
  M.B = B;
  M.tail_level = tail_level;
  M.col_level = column_levels(B, R->N());
  levels_to_dh(M.col_level, M.d_seq, M.h_seq);
  static std::atomic<long> next_uid{0};
  M.uid = next_uid.fetch_add(1, std::memory_order_relaxed);
  return M;
}

long ord_of(const SigmaModule& M) { return lmat_ord(M.B); }

TailCert module_cert(const SigmaModule& M) {
  using K = TailCert::Kind;
  bool all_over = true;
  bool first = true;
  BigRat param = 0;
  for (const auto& row : M.B)
    for (const auto& e : row) {
      const TailCert& c = e.cert();
      if (c.kind == K::None) {
        // exact zero entries (never clipped, empty support) impose nothing
        if (e.is_zero() && e.tail_exact()) continue;
        return TailCert::none();
      }
      if (c.kind == K::CLog) all_over = false;
      param = first ? c.param : std::min(param, c.param);
      first = false;
    }
  if (first) return TailCert::none();
  return all_over ? TailCert::over(param) : TailCert::clog(param);
}

SigmaModule change_basis(const SigmaModule& M, const LMat& U) {
  require(U.size() == M.B.size(), Err::BadInput, "change_basis: shape mismatch");
  LMat Ui = lmat_inverse(U);  // requires det U to be a monomial unit
  LMat B2 = lmat_mul(lmat_mul(Ui, M.B), lmat_sigma(U, M.q));
  return make_module(M.q, B2, M.tail_level);
}

SigmaModule module_algebra(const SigmaModule& A, const SigmaModule& B, ModOp op) {
  require(A.q == B.q && A.n == B.n, Err::BadInput, "module_algebra: parameter mismatch");
  require(A.R->same_as(*B.R), Err::RingMismatch, "module_algebra: mixed rings");
  int ra = A.rank(), rb = B.rank();
  int U = 0;
  for (const auto& row : A.B)
    for (const auto& e : row) U = std::max(U, e.U());
  for (const auto& row : B.B)
    for (const auto& e : row) U = std::max(U, e.U());
  TruncatedLaurent zero = TruncatedLaurent::zero(A.R, A.n, U);
  long tail = std::min(A.tail_level, B.tail_level);

  if (op == ModOp::DirectSum) {
    // union basis sorted by (structural level, provenance)
    std::vector<int> idx(ra + rb);
    for (int i = 0; i < ra + rb; ++i) idx[i] = i;
    auto level_of = [&](int i) {
      return i < ra ? A.col_level[i] : B.col_level[i - ra];
    };
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int x, int y) { return level_of(x) < level_of(y); });
    LMat C(ra + rb, std::vector<TruncatedLaurent>(ra + rb, zero));
    for (int i = 0; i < ra + rb; ++i)
      for (int j = 0; j < ra + rb; ++j) {
        int si = idx[i], sj = idx[j];
        if (si < ra && sj < ra)
          C[i][j] = A.B[si][sj];
        else if (si >= ra && sj >= ra)
          C[i][j] = B.B[si - ra][sj - ra];
      }
    return make_module(A.q, C, tail);
  }

  auto basis = detail::tensor_basis(ra, A.col_level, rb, B.col_level);
  LMat C = detail::kron_matrix(A.B, B.B, basis, zero);
  return make_module(A.q, C, tail);
}

SigmaModule power_algebra(const SigmaModule& M, int k, PowOp op) {
  require(k >= 0, Err::BadInput, "power_algebra: k >= 0");
  int m = M.rank();
  int U = 0;
  for (const auto& row : M.B)
    for (const auto& e : row) U = std::max(U, e.U());
  if (k == 0) {
    LMat one{{TruncatedLaurent::constant(M.R, M.n, U, PAdicScalar::one(M.R))}};
    return make_module(M.q, one, kNoTail);
  }
  if (op == PowOp::Ext)
    require(k <= m, Err::BadInput, "power_algebra: Ext^k with k > rank is zero");
  BigInt dim = op == PowOp::Sym ? binomial(BigInt(m + k - 1), k) : binomial(BigInt(m), k);
  checked_narrow(dim, "power_algebra: composite rank too large");
  require(dim <= 5000, Err::BudgetExceeded, "power_algebra: composite rank cap");
  TruncatedLaurent zero = TruncatedLaurent::zero(M.R, M.n, U);
  LMat C;
  if (op == PowOp::Sym) {
    auto basis = detail::sym_basis(m, k, M.col_level);
    C = detail::sym_matrix(M.B, basis, zero);
  } else {
    auto basis = detail::ext_basis(m, k, M.col_level);
    C = detail::ext_matrix(M.B, basis, zero);
  }
  return make_module(M.q, C, M.tail_level);
}

// ---- basis-sequence arithmetic ---------------------------------------------

std::vector<long> h_dsum(const std::vector<long>& a, const std::vector<long>& b) {
  std::vector<long> r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

std::vector<long> h_tensor(const std::vector<long>& a, const std::vector<long>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<long> r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

namespace {
std::vector<long> h_power(const std::vector<long>& h, int k, bool sym) {
  require(k >= 0, Err::BadInput, "h_power: k >= 0");
  // dp[y][s]: number of ways to pick total multiplicity y with level sum s
  std::vector<std::map<long, BigInt>> dp(k + 1);
  dp[0][0] = 1;
  for (size_t lvl = 0; lvl < h.size(); ++lvl) {
    if (h[lvl] == 0) continue;
    std::vector<std::map<long, BigInt>> next = dp;
    long cap = sym ? k : std::min<long>(k, h[lvl]);
    for (long mult = 1; mult <= cap; ++mult) {
      BigInt ways = sym ? binomial(BigInt(h[lvl] + mult - 1), mult)
                        : binomial(BigInt(h[lvl]), mult);
      for (int y = 0; y + mult <= k; ++y)
        for (const auto& [s, cnt] : dp[y])
          next[y + mult][s + static_cast<long>(lvl) * mult] += cnt * ways;
    }
    dp = std::move(next);
  }
  if (dp[k].empty()) return {};
  std::vector<long> out(dp[k].rbegin()->first + 1, 0);
  for (const auto& [s, cnt] : dp[k])
    out[s] = checked_narrow(cnt, "h_power: count overflow");
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}
}  // namespace

std::vector<long> h_sym(const std::vector<long>& h, int k) { return h_power(h, k, true); }
std::vector<long> h_ext(const std::vector<long>& h, int k) { return h_power(h, k, false); }

// ---- fibre level ------------------------------------------------------------

NuclearConstMatrix NuclearConstMatrix::identity(const RingPtr& R, int m) {
  NuclearConstMatrix I;
  I.R = R;
  I.a.assign(m, std::vector<PAdicScalar>(m, PAdicScalar::zero(R)));
  for (int i = 0; i < m; ++i) I.a[i][i] = PAdicScalar::one(R);
  I.col_level.assign(m, 0);
  I.modulus = R->N();
  return I;
}

NuclearConstMatrix NuclearConstMatrix::from_entries(
    const RingPtr& R, std::vector<std::vector<PAdicScalar>> a, long tail_level) {
  NuclearConstMatrix M;
  M.R = R;
  M.modulus = R->N();
  M.tail_level = tail_level;
  int m = static_cast<int>(a.size());
  for (const auto& row : a)
    require(static_cast<int>(row.size()) == m, Err::BadInput, "ncm: square required");
  M.a = std::move(a);
  M.col_level.assign(m, R->N());
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i)
      M.col_level[j] = std::min(M.col_level[j], M.a[i][j].ord_pi());
  for (int j = m - 2; j >= 0; --j)
    M.col_level[j] = std::min(M.col_level[j], M.col_level[j + 1]);
  return M;
}

NuclearConstMatrix ncm_mul(const NuclearConstMatrix& A, const NuclearConstMatrix& B) {
  require(A.dim() == B.dim(), Err::BadInput, "ncm mul: shape");
  require(A.R->same_as(*B.R), Err::RingMismatch, "ncm mul: rings");
  int m = A.dim();
  NuclearConstMatrix C;
  C.R = A.R;
  C.a.assign(m, std::vector<PAdicScalar>(m, PAdicScalar::zero(A.R)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      PAdicScalar s = PAdicScalar::zero(A.R);
      for (int t = 0; t < m; ++t) s = s + A.a[i][t] * B.a[t][j];
      C.a[i][j] = std::move(s);
    }
  C.tail_level = std::min(A.tail_level, B.tail_level);
  // a truncated-infinite product misses paths through omitted columns, whose
  // contributions are divisible by pi^{tail_level}
  C.modulus = std::min({A.modulus, B.modulus, C.tail_level});
  C.col_level.assign(m, 0);
  for (int j = 0; j < m; ++j)
    C.col_level[j] = std::max(A.col_level[j], B.col_level[j]);
  for (int j = m - 2; j >= 0; --j)
    C.col_level[j] = std::min(C.col_level[j], C.col_level[j + 1]);
  return C;
}

NuclearConstMatrix ncm_add(const NuclearConstMatrix& A, const NuclearConstMatrix& B) {
  require(A.dim() == B.dim(), Err::BadInput, "ncm add: shape");
  NuclearConstMatrix C = A;
  for (int i = 0; i < A.dim(); ++i)
    for (int j = 0; j < A.dim(); ++j) C.a[i][j] = A.a[i][j] + B.a[i][j];
  C.tail_level = std::min(A.tail_level, B.tail_level);
  C.modulus = std::min(A.modulus, B.modulus);
  for (int j = 0; j < A.dim(); ++j)
    C.col_level[j] = std::min(A.col_level[j], B.col_level[j]);
  return C;
}

PAdicScalar ncm_trace(const NuclearConstMatrix& A) {
  PAdicScalar t = PAdicScalar::zero(A.R);
  for (int i = 0; i < A.dim(); ++i) t = t + A.a[i][i];
  return t;
}

PAdicScalar ncm_det(const NuclearConstMatrix& A) {
  int m = A.dim();
  require(m <= 12, Err::BudgetExceeded, "ncm det: dimension cap 12");
  if (m == 0) return PAdicScalar::one(A.R);
  std::vector<PAdicScalar> dp(size_t(1) << m, PAdicScalar::zero(A.R));
  dp[0] = PAdicScalar::one(A.R);
  for (unsigned S = 1; S < (1u << m); ++S) {
    int row = __builtin_popcount(S) - 1;
    PAdicScalar acc = PAdicScalar::zero(A.R);
    int seen = 0;
    for (int j = 0; j < m; ++j) {
      if (!(S >> j & 1u)) continue;
      PAdicScalar term = A.a[row][j] * dp[S & ~(1u << j)];
      acc = (seen % 2 == 0) ? acc + term : acc - term;
      ++seen;
    }
    dp[S] = std::move(acc);
  }
  return dp.back();
}

NuclearConstMatrix ncm_inverse(const NuclearConstMatrix& A) {
  require(A.tail_level == kNoTail, Err::BadInput,
          "ncm inverse: truncated-infinite matrices are not invertible");
  int m = A.dim();
  auto M = A.a;
  auto I = NuclearConstMatrix::identity(A.R, m).a;
  for (int col = 0; col < m; ++col) {
    int piv = -1;
    for (int r = col; r < m; ++r)
      if (M[r][col].ord_pi() == 0) {
        piv = r;
        break;
      }
    require(piv >= 0, Err::NotAUnit, "ncm inverse: no unit pivot (det not a unit)");
    std::swap(M[piv], M[col]);
    std::swap(I[piv], I[col]);
    PAdicScalar inv = M[col][col].invert_unit();
    for (int j = 0; j < m; ++j) {
      M[col][j] = M[col][j] * inv;
      I[col][j] = I[col][j] * inv;
    }
    for (int r = 0; r < m; ++r) {
      if (r == col || M[r][col].is_zero()) continue;
      PAdicScalar f = M[r][col];
      for (int j = 0; j < m; ++j) {
        M[r][j] = M[r][j] - f * M[col][j];
        I[r][j] = I[r][j] - f * I[col][j];
      }
    }
  }
  NuclearConstMatrix R = NuclearConstMatrix::from_entries(A.R, std::move(I));
  R.modulus = A.modulus;
  return R;
}

NuclearConstMatrix ncm_pow(const NuclearConstMatrix& A, const BigInt& k) {
  if (k == 0) {
    NuclearConstMatrix I = NuclearConstMatrix::identity(A.R, A.dim());
    I.modulus = A.modulus;
    return I;
  }
  NuclearConstMatrix base = k < 0 ? ncm_inverse(A) : A;
  BigInt e = k < 0 ? BigInt(-k) : k;
  NuclearConstMatrix acc = NuclearConstMatrix::identity(A.R, A.dim());
  acc.modulus = base.modulus;
  acc.tail_level = base.tail_level;
  while (e > 0) {
    if (e % 2 == 1) acc = ncm_mul(acc, base);
    base = ncm_mul(base, base);
    e /= 2;
  }
  return acc;
}

NuclearConstMatrix ncm_kron(const NuclearConstMatrix& A, const NuclearConstMatrix& B) {
  require(A.R->same_as(*B.R), Err::RingMismatch, "ncm kron: rings");
  auto basis = detail::tensor_basis(A.dim(), A.col_level, B.dim(), B.col_level);
  NuclearConstMatrix C;
  C.R = A.R;
  C.a = detail::kron_matrix(A.a, B.a, basis, PAdicScalar::zero(A.R));
  C.col_level = detail::pair_levels(basis, A.col_level, B.col_level);
  C.tail_level = std::min(A.tail_level, B.tail_level);
  C.modulus = std::min(A.modulus, B.modulus);
  return C;
}

NuclearConstMatrix ncm_sym(const NuclearConstMatrix& A, int k) {
  auto basis = detail::sym_basis(A.dim(), k, A.col_level);
  NuclearConstMatrix C;
  C.R = A.R;
  if (k == 0) {
    C = NuclearConstMatrix::identity(A.R, 1);
    C.modulus = A.modulus;
    return C;
  }
  C.a = detail::sym_matrix(A.a, basis, PAdicScalar::zero(A.R));
  C.col_level = detail::basis_levels(basis, A.col_level);
  C.tail_level = A.tail_level;
  C.modulus = A.modulus;
  return C;
}

NuclearConstMatrix ncm_ext(const NuclearConstMatrix& A, int k) {
  require(k >= 0 && k <= A.dim(), Err::BadInput, "ncm ext: 0 <= k <= dim");
  NuclearConstMatrix C;
  C.R = A.R;
  if (k == 0) {
    C = NuclearConstMatrix::identity(A.R, 1);
    C.modulus = A.modulus;
    return C;
  }
  auto basis = detail::ext_basis(A.dim(), k, A.col_level);
  C.a = detail::ext_matrix(A.a, basis, PAdicScalar::zero(A.R));
  C.col_level = detail::basis_levels(basis, A.col_level);
  C.tail_level = A.tail_level;
  C.modulus = A.modulus;
  return C;
}

bool ncm_congruent(const NuclearConstMatrix& A, const NuclearConstMatrix& B, long t) {
  if (A.dim() != B.dim()) return false;
  for (int i = 0; i < A.dim(); ++i)
    for (int j = 0; j < A.dim(); ++j)
      if (!A.a[i][j].congruent(B.a[i][j], t)) return false;
  return true;
}

NuclearConstMatrix fibre_frobenius(const SigmaModule& M, const ClosedPoint& x,
                                   RingTower& tower) {
  require(M.q == x.q, Err::BadInput, "fibre_frobenius: q mismatch");
  require(M.n == x.n, Err::BadInput, "fibre_frobenius: torus dimension mismatch");
  RingPtr Rd = tower.at_degree(x.degree);
  int m = M.rank();
  long eval_mod = M.R->N();
  for (const auto& row : M.B)
    for (const auto& e : row) eval_mod = std::min(eval_mod, e.eval_modulus());
  NuclearConstMatrix acc = NuclearConstMatrix::identity(Rd, m);
  for (int s = 0; s < x.degree; ++s) {
    std::vector<PAdicScalar> coords = frobenius_twist(x, s);
    NuclearConstMatrix F;
    F.R = Rd;
    F.a.assign(m, std::vector<PAdicScalar>(m, PAdicScalar::zero(Rd)));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) F.a[i][j] = M.B[i][j].eval_at(coords, Rd);
    F.col_level = M.col_level;
    F.tail_level = M.tail_level;
    F.modulus = eval_mod;
    acc = s == 0 ? F : ncm_mul(acc, F);
  }
  acc.col_level = M.col_level;
  acc.tail_level = M.tail_level;
  acc.modulus = std::min(acc.modulus, eval_mod);
  return acc;
}

CharSeries char_series_from_traces(const RingPtr& R,
                                   const std::vector<PAdicScalar>& traces, long D,
                                   long base_modulus) {
  require(static_cast<long>(traces.size()) >= D, Err::BadInput,
          "char_series_from_traces: need D traces");
  CharSeries cs;
  cs.c.assign(D + 1, PAdicScalar::zero(R));
  cs.c[0] = PAdicScalar::one(R);
  long eps = std::min<long>(base_modulus, R->N());
  for (long j = 1; j <= D; ++j) {
    PAdicScalar S = PAdicScalar::zero(R);
    for (long m = 1; m <= j; ++m) S = S + traces[m - 1] * cs.c[j - m];
    cs.c[j] = (-S).divexact_int(BigInt(j));
    eps -= R->e() * ord_p(BigInt(j), R->p());
  }
  cs.modulus = std::max<long>(0, eps);
  return cs;
}

CharSeries char_series(const NuclearConstMatrix& E, long D) {
  const RingPtr& R = E.R;
  if (E.dim() == 0) {
    CharSeries cs;
    cs.c.assign(D + 1, PAdicScalar::zero(R));
    cs.c[0] = PAdicScalar::one(R);
    cs.modulus = R->N();
    return cs;
  }
  long base = std::min<long>({R->N(), E.modulus, E.tail_level});
  // det(I - TE) is a polynomial of degree <= dim (beyond that, coefficients of
  // the underlying compact operator are below the certified modulus), so the
  // Newton recursion stops there and higher coefficients are emitted as zeros.
  const long Dcap = std::min<long>(D, E.dim());
  std::vector<PAdicScalar> tr;
  tr.reserve(Dcap);
  NuclearConstMatrix P = E;
  for (long m = 1; m <= Dcap; ++m) {
    if (m > 1) P = ncm_mul(P, E);
    tr.push_back(ncm_trace(P));
  }
  CharSeries cs = char_series_from_traces(R, tr, Dcap, base);
  cs.c.resize(D + 1, PAdicScalar::zero(R));
  if (E.dim() <= 4 && E.tail_level == kNoTail) {
    // independent expansion: det(I - TE) = sum_i (-1)^i Tr(Ext^i E) T^i
    for (long i = 1; i <= std::min<long>(D, E.dim()); ++i) {
      PAdicScalar alt = ncm_trace(ncm_ext(E, static_cast<int>(i)));
      if (i % 2 == 1) alt = -alt;
      require(cs.c[i].congruent(alt, std::min(cs.modulus, E.modulus)), Err::BadInput,
              "char_series: exterior-power cross-check failed");
    }
  }
  return cs;
}

}  // namespace dworklab
