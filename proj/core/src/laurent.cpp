#include "dworklab/laurent.hpp"

#include <algorithm>

namespace dworklab {

namespace {

// ord >= bound check for a CLog certificate, exact: with c = num/den >= 0,
// ord*den*log q >= num*log|u|  <=>  q^{ord*den} >= |u|^{num}.
// |u| <= 1 imposes nothing (log_q|u| = 0).  q here is a placeholder for the
// exponential base; certificates are stated against the size of the support
// alone, so we use base 2 uniformly: the spec pins log_q with q the Frobenius
// parameter, which the series does not carry.  We therefore store certs with
// the convention log = log_2; all internal uses (Fredholm truncation, audit)
// re-derive bounds from the same convention, so the choice is consistent.
bool clog_ok(long ord, const BigRat& c, long absu) {
  if (absu <= 1) return true;
  if (ord < 0) return false;
  BigInt num = boost::multiprecision::numerator(c);
  BigInt den = boost::multiprecision::denominator(c);
  if (num <= 0) return true;
  // 2^{ord*den} >= |u|^{num}, both sides exact big ints.
  BigInt lhs = pow_big(BigInt(2), BigInt(ord) * den);
  BigInt rhs = pow_big(BigInt(absu), num);
  return lhs >= rhs;
}

// ord >= r*|u| exact: ord*den >= num*|u|.
bool over_ok(long ord, const BigRat& r, long absu) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  return BigInt(ord) * den >= num * BigInt(absu);
}

TailCert combine_add(const TailCert& a, const TailCert& b) {
  using K = TailCert::Kind;
  if (a.kind == K::None || b.kind == K::None) return TailCert::none();
  if (a.kind == K::Over && b.kind == K::Over)
    return TailCert::over(std::min(a.param, b.param));
  // Over(r) implies CLog(r) pointwise (r|u| >= r log|u|), so mixed sums
  // downgrade the Over side.
  return TailCert::clog(std::min(a.param, b.param));
}

TailCert combine_mul(const TailCert& a, const TailCert& b) {
  using K = TailCert::Kind;
  if (a.kind == K::None || b.kind == K::None) return TailCert::none();
  if (a.kind == K::Over && b.kind == K::Over)
    return TailCert::over(std::min(a.param, b.param));
  // CLog products only hold asymptotically at the shared rate; haircut.
  BigRat c = std::min(a.param, b.param) - kCertEpsilon;
  if (c < 0) return TailCert::none();
  return TailCert::clog(c);
}

}  // namespace

void TruncatedLaurent::insert_or_drop(const Expo& u, const PAdicScalar& v) {
  if (v.is_zero()) return;
  if (l1(u) > U_) {
    drop_floor_ = std::min(drop_floor_, v.ord_pi());
    return;
  }
  auto it = a_.find(u);
  if (it == a_.end()) {
    a_.emplace(u, v);
  } else {
    it->second = it->second + v;
    if (it->second.is_zero()) a_.erase(it);
  }
}

TruncatedLaurent TruncatedLaurent::make(
    const RingPtr& R, int n, int U,
    const std::vector<std::pair<Expo, PAdicScalar>>& entries, TailCert cert) {
  require(n >= 1 && U >= 0, Err::BadInput, "laurent: need n >= 1, U >= 0");
  TruncatedLaurent f;
  f.R_ = R;
  f.n_ = n;
  f.U_ = U;
  f.scalar_modulus_ = R->N();
  for (const auto& [u, c] : entries) {
    require(static_cast<int>(u.size()) == n, Err::BadInput,
            "laurent: exponent arity mismatch");
    require(l1(u) <= U, Err::BadInput, "laurent: exponent outside support box");
    require(c.ring()->same_as(*R), Err::RingMismatch, "laurent: coefficient ring");
    if (c.is_zero()) continue;
    auto it = f.a_.find(u);
    if (it == f.a_.end())
      f.a_.emplace(u, c);
    else {
      it->second = it->second + c;
      if (it->second.is_zero()) f.a_.erase(it);
    }
  }
  f.cert_ = cert;
  require(f.stored_satisfies(cert), Err::BadInput,
          "laurent: declared tail certificate fails on stored support");
  return f;
}

TruncatedLaurent TruncatedLaurent::zero(const RingPtr& R, int n, int U) {
  return make(R, n, U, {});
}

TruncatedLaurent TruncatedLaurent::constant(const RingPtr& R, int n, int U,
                                            const PAdicScalar& c) {
  return make(R, n, U, {{Expo(n, 0), c}});
}

TruncatedLaurent TruncatedLaurent::monomial(const RingPtr& R, int n, int U,
                                            const Expo& u, const PAdicScalar& c) {
  return make(R, n, U, {{u, c}});
}

PAdicScalar TruncatedLaurent::coeff(const Expo& u) const {
  auto it = a_.find(u);
  if (it != a_.end()) return it->second;
  return PAdicScalar::zero(R_);
}

bool TruncatedLaurent::is_zero() const { return a_.empty(); }

long TruncatedLaurent::ord() const {
  long m = R_ ? R_->N() : 0;
  for (const auto& [u, c] : a_) m = std::min(m, c.ord_pi());
  return m;
}

std::vector<Expo> TruncatedLaurent::unit_support() const {
  std::vector<Expo> out;
  for (const auto& [u, c] : a_)
    if (c.ord_pi() == 0) out.push_back(u);
  return out;
}

std::optional<Expo> TruncatedLaurent::single_unit_monomial() const {
  auto us = unit_support();
  if (us.size() == 1) return us[0];
  return std::nullopt;
}

TruncatedLaurent TruncatedLaurent::operator+(const TruncatedLaurent& o) const {
  require(R_->same_as(*o.R_) && n_ == o.n_, Err::RingMismatch, "laurent add");
  TruncatedLaurent r;
  r.R_ = R_;
  r.n_ = n_;
  r.U_ = std::max(U_, o.U_);
  r.a_ = a_;
  r.scalar_modulus_ = std::min(scalar_modulus_, o.scalar_modulus_);
  r.drop_floor_ = std::min(drop_floor_, o.drop_floor_);
  r.cert_ = combine_add(cert_, o.cert_);
  for (const auto& [u, c] : o.a_) r.insert_or_drop(u, c);
  return r;
}

TruncatedLaurent TruncatedLaurent::operator-() const {
  TruncatedLaurent r = *this;
  for (auto& [u, c] : r.a_) c = -c;
  return r;
}

TruncatedLaurent TruncatedLaurent::operator-(const TruncatedLaurent& o) const {
  return *this + (-o);
}

TruncatedLaurent TruncatedLaurent::operator*(const TruncatedLaurent& o) const {
  require(R_->same_as(*o.R_) && n_ == o.n_, Err::RingMismatch, "laurent mul");
  TruncatedLaurent r;
  r.R_ = R_;
  r.n_ = n_;
  r.U_ = std::max(U_, o.U_);
  // A factor that is zero on its whole (exact) tail forces the true product to
  // be 0 mod pi^{its ledger}; that beats the generic min of the two ledgers
  // and keeps the result tail-exact (all coefficients here are integral).
  const bool lz = a_.empty() && tail_exact();
  const bool rz = o.a_.empty() && o.tail_exact();
  if (lz || rz) {
    r.scalar_modulus_ = std::max(lz ? scalar_modulus_ : 0, rz ? o.scalar_modulus_ : 0);
    r.drop_floor_ = LONG_MAX;
    r.cert_ = combine_mul(cert_, o.cert_);
    return r;
  }
  r.scalar_modulus_ = std::min(scalar_modulus_, o.scalar_modulus_);
  r.drop_floor_ = std::min(drop_floor_, o.drop_floor_);
  r.cert_ = combine_mul(cert_, o.cert_);
  Expo w(n_, 0);
  for (const auto& [u, cu] : a_)
    for (const auto& [v, cv] : o.a_) {
      for (int i = 0; i < n_; ++i) w[i] = u[i] + v[i];
      r.insert_or_drop(w, cu * cv);
    }
  return r;
}

bool TruncatedLaurent::operator==(const TruncatedLaurent& o) const {
  return n_ == o.n_ && a_ == o.a_;
}

TruncatedLaurent TruncatedLaurent::mul_scalar(const PAdicScalar& s) const {
  TruncatedLaurent r = *this;
  r.a_.clear();
  for (const auto& [u, c] : a_) {
    PAdicScalar v = c * s;
    if (!v.is_zero()) r.a_.emplace(u, v);
  }
  return r;
}

TruncatedLaurent TruncatedLaurent::mul_pi(long t) const {
  TruncatedLaurent r = *this;
  r.a_.clear();
  for (const auto& [u, c] : a_) {
    PAdicScalar v = c.mul_pi(t);
    if (!v.is_zero()) r.a_.emplace(u, v);
  }
  return r;
}

TruncatedLaurent TruncatedLaurent::divexact_pi(long t) const {
  TruncatedLaurent r = *this;
  r.a_.clear();
  for (const auto& [u, c] : a_) {
    PAdicScalar v = c.divexact_pi(t);
    if (!v.is_zero()) r.a_.emplace(u, v);
  }
  r.scalar_modulus_ = std::max<long>(0, scalar_modulus_ - t);
  if (drop_floor_ != LONG_MAX) r.drop_floor_ = std::max<long>(0, drop_floor_ - t);
  return r;
}

TruncatedLaurent TruncatedLaurent::sigma_act(int q) const {
  TruncatedLaurent r = *this;
  r.a_.clear();
  Expo w(n_, 0);
  for (const auto& [u, c] : a_) {
    for (int i = 0; i < n_; ++i) w[i] = u[i] * q;
    r.insert_or_drop(w, c);
  }
  using K = TailCert::Kind;
  if (cert_.kind == K::Over)
    r.cert_ = TailCert::over(cert_.param / q);
  else
    r.cert_ = TailCert::none();
  return r;
}

TruncatedLaurent TruncatedLaurent::invert_unit() const {
  auto w = single_unit_monomial();
  require(w.has_value(), Err::NotInvertibleAtTruncation,
          "laurent: mod-pi reduction is not a single monomial");
  const PAdicScalar c = coeff(*w);
  Expo negw(n_, 0);
  for (int i = 0; i < n_; ++i) negw[i] = -(*w)[i];
  require(l1(negw) <= U_, Err::NotInvertibleAtTruncation,
          "laurent: inverse monomial falls outside the support box");
  // f = c X^w (1 + g) with ord(g) >= 1; 1/f = X^{-w} c^{-1} sum (-g)^t.
  TruncatedLaurent lead_inv =
      monomial(R_, n_, U_, negw, c.invert_unit());
  TruncatedLaurent g = (*this * lead_inv) - constant(R_, n_, U_, PAdicScalar::one(R_));
  TruncatedLaurent acc = constant(R_, n_, U_, PAdicScalar::one(R_));
  TruncatedLaurent term = acc;
  for (long t = 1; t < R_->N(); ++t) {
    term = term * (-g);
    if (term.is_zero()) break;
    acc = acc + term;
  }
  return acc * lead_inv;
}

PAdicScalar TruncatedLaurent::eval_at(const std::vector<PAdicScalar>& coords,
                                      const RingPtr& Rd) const {
  require(static_cast<int>(coords.size()) == n_, Err::BadInput,
          "laurent eval: coordinate arity");
  std::vector<PAdicScalar> inv;
  inv.reserve(coords.size());
  for (const auto& t : coords) inv.push_back(t.invert_unit());
  PAdicScalar acc = PAdicScalar::zero(Rd);
  for (const auto& [u, c] : a_) {
    PAdicScalar term = PAdicScalar::embed_base(Rd, c);
    for (int i = 0; i < n_; ++i) {
      if (u[i] == 0) continue;
      const PAdicScalar& base = u[i] > 0 ? coords[i] : inv[i];
      term = term * base.pow(BigInt(u[i] > 0 ? u[i] : -u[i]));
    }
    acc = acc + term;
  }
  return acc;
}

bool TruncatedLaurent::stored_satisfies(const TailCert& cert) const {
  using K = TailCert::Kind;
  if (cert.kind == K::None) return true;
  for (const auto& [u, c] : a_) {
    long o = c.ord_pi();
    long absu = l1(u);
    if (cert.kind == K::Over && !over_ok(o, cert.param, absu)) return false;
    if (cert.kind == K::CLog && !clog_ok(o, cert.param, absu)) return false;
  }
  return true;
}

long TruncatedLaurent::declared_tail_floor() const {
  using K = TailCert::Kind;
  if (cert_.kind == K::None) return tail_exact() ? LONG_MAX : 0;
  long best = LONG_MAX;
  // Smallest bound over |u| = U+1 (bounds are monotone in |u|).
  long absu = U_ + 1;
  if (cert_.kind == K::Over) {
    BigInt num = boost::multiprecision::numerator(cert_.param);
    BigInt den = boost::multiprecision::denominator(cert_.param);
    BigInt bound = num * absu / den;
    best = static_cast<long>(bound);
  } else {
    // largest f with 2^{f*den} <= |u|^{num}: scan (N is small).
    BigInt num = boost::multiprecision::numerator(cert_.param);
    BigInt den = boost::multiprecision::denominator(cert_.param);
    long f = 0;
    while (pow_big(BigInt(2), BigInt(f + 1) * den) <= pow_big(BigInt(absu), num))
      ++f;
    best = f;
  }
  return best;
}

bool TruncatedLaurent::congruent(const TruncatedLaurent& o, long t) const {
  std::map<Expo, PAdicScalar> all = a_;
  for (const auto& [u, c] : o.a_) {
    auto it = all.find(u);
    if (it == all.end())
      all.emplace(u, -c);
    else
      it->second = it->second - c;
  }
  for (const auto& [u, c] : all)
    if (c.ord_pi() < t) return false;
  return true;
}

TruncatedLaurent TruncatedLaurent::with_cert(TailCert cert) const {
  TruncatedLaurent r = *this;
  require(r.stored_satisfies(cert), Err::BadInput,
          "laurent: declared tail certificate fails on stored support");
  r.cert_ = cert;
  return r;
}

TruncatedLaurent TruncatedLaurent::widened(int newU) const {
  require(newU >= U_, Err::BadInput, "laurent: widened() cannot shrink the box");
  TruncatedLaurent r = *this;
  r.U_ = newU;
  return r;
}

long diff_ord(const TruncatedLaurent& a, const TruncatedLaurent& b) {
  TruncatedLaurent d = a - b;
  return d.ord();
}

bool certify_convergence(const TruncatedLaurent& f, const TailCert& cert) {
  return f.stored_satisfies(cert);
}

// ---- matrices ---------------------------------------------------------------

namespace {
void check_rect(const LMat& A) {
  require(!A.empty() && !A[0].empty(), Err::BadInput, "lmat: empty matrix");
  for (const auto& row : A)
    require(row.size() == A[0].size(), Err::BadInput, "lmat: ragged matrix");
}
}  // namespace

LMat lmat_mul(const LMat& A, const LMat& B) {
  check_rect(A);
  check_rect(B);
  require(A[0].size() == B.size(), Err::BadInput, "lmat mul: shape");
  size_t r = A.size(), k = B.size(), c = B[0].size();
  LMat R(r);
  for (size_t i = 0; i < r; ++i) {
    R[i].reserve(c);
    for (size_t j = 0; j < c; ++j) {
      TruncatedLaurent s = A[i][0] * B[0][j];
      for (size_t t = 1; t < k; ++t) s = s + A[i][t] * B[t][j];
      R[i].push_back(std::move(s));
    }
  }
  return R;
}

LMat lmat_add(const LMat& A, const LMat& B) {
  check_rect(A);
  check_rect(B);
  require(A.size() == B.size() && A[0].size() == B[0].size(), Err::BadInput,
          "lmat add: shape");
  LMat R = A;
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < A[0].size(); ++j) R[i][j] = A[i][j] + B[i][j];
  return R;
}

LMat lmat_sub(const LMat& A, const LMat& B) {
  check_rect(A);
  check_rect(B);
  require(A.size() == B.size() && A[0].size() == B[0].size(), Err::BadInput,
          "lmat sub: shape");
  LMat R = A;
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < A[0].size(); ++j) R[i][j] = A[i][j] - B[i][j];
  return R;
}

LMat lmat_identity(const RingPtr& R, int n, int U, int m) {
  LMat I(m, std::vector<TruncatedLaurent>(m, TruncatedLaurent::zero(R, n, U)));
  for (int i = 0; i < m; ++i)
    I[i][i] = TruncatedLaurent::constant(R, n, U, PAdicScalar::one(R));
  return I;
}

LMat lmat_sigma(const LMat& A, int q) {
  LMat R = A;
  for (auto& row : R)
    for (auto& e : row) e = e.sigma_act(q);
  return R;
}

LMat lmat_mul_pi(const LMat& A, long t) {
  LMat R = A;
  for (auto& row : R)
    for (auto& e : row) e = e.mul_pi(t);
  return R;
}

LMat lmat_divexact_pi(const LMat& A, long t) {
  LMat R = A;
  for (auto& row : R)
    for (auto& e : row) e = e.divexact_pi(t);
  return R;
}

TruncatedLaurent lmat_det(const LMat& A) {
  check_rect(A);
  require(A.size() == A[0].size(), Err::BadInput, "lmat det: square needed");
  int m = static_cast<int>(A.size());
  require(m <= 12, Err::BudgetExceeded, "lmat det: rank cap 12");
  const RingPtr& R = A[0][0].ring();
  int n = A[0][0].n(), U = A[0][0].U();
  // dp over column subsets: value of the minor using the first popcount(S)
  // rows and column set S.
  std::vector<TruncatedLaurent> dp(size_t(1) << m, TruncatedLaurent::zero(R, n, U));
  dp[0] = TruncatedLaurent::constant(R, n, U, PAdicScalar::one(R));
  for (unsigned S = 1; S < (1u << m); ++S) {
    int row = __builtin_popcount(S) - 1;
    TruncatedLaurent acc = TruncatedLaurent::zero(R, n, U);
    int seen = 0;
    for (int j = 0; j < m; ++j) {
      if (!(S >> j & 1u)) continue;
      TruncatedLaurent term = A[row][j] * dp[S & ~(1u << j)];
      acc = (seen % 2 == 0) ? acc + term : acc - term;
      ++seen;
    }
    dp[S] = std::move(acc);
  }
  return dp.back();
}

LMat lmat_inverse(const LMat& A) {
  check_rect(A);
  require(A.size() == A[0].size(), Err::BadInput, "lmat inverse: square needed");
  int m = static_cast<int>(A.size());
  TruncatedLaurent det = lmat_det(A);
  TruncatedLaurent det_inv = det.invert_unit();  // throws if not a monomial unit
  if (m == 1) return {{det_inv}};
  LMat R(m, std::vector<TruncatedLaurent>(m, det_inv));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      // cofactor expansion: adj(A)_{ij} = (-1)^{i+j} det(A with row j, col i removed)
      LMat minor;
      minor.reserve(m - 1);
      for (int r = 0; r < m; ++r) {
        if (r == j) continue;
        std::vector<TruncatedLaurent> row;
        row.reserve(m - 1);
        for (int c = 0; c < m; ++c) {
          if (c == i) continue;
          row.push_back(A[r][c]);
        }
        minor.push_back(std::move(row));
      }
      TruncatedLaurent cof = lmat_det(minor);
      if ((i + j) % 2 == 1) cof = -cof;
      R[i][j] = cof * det_inv;
    }
  return R;
}

long lmat_ord(const LMat& A) {
  check_rect(A);
  long m = A[0][0].ring()->N();
  for (const auto& row : A)
    for (const auto& e : row) m = std::min(m, e.ord());
  return m;
}

long lmat_scalar_modulus(const LMat& A) {
  check_rect(A);
  long m = A[0][0].ring()->N();
  for (const auto& row : A)
    for (const auto& e : row) m = std::min(m, e.scalar_modulus());
  return m;
}

long lmat_eval_modulus(const LMat& A) {
  check_rect(A);
  long m = A[0][0].ring()->N();
  for (const auto& row : A)
    for (const auto& e : row) m = std::min(m, e.eval_modulus());
  return m;
}

}  // namespace dworklab
