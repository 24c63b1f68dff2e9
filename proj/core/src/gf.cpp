#include "dworklab/gf.hpp"

#include <algorithm>
#include <numeric>

namespace dworklab {
namespace {

// Dense little-endian polynomials over F_p, only used for setup work
// (irreducibility tests, minimal polynomials), never in inner loops.
using Poly = std::vector<int>;

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly pmul_mod(const Poly& a, const Poly& b, const Poly& mod, int p) {
  Poly r(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  // reduce mod the monic polynomial `mod`
  for (size_t i = r.size(); i-- > 0;) {
    if (i + 1 < mod.size()) break;  // remaining degrees are below deg(mod)
    int c = r[i];
    if (c == 0) continue;
    size_t shift = i - (mod.size() - 1);
    for (size_t j = 0; j < mod.size(); ++j) r[shift + j] = ((r[shift + j] - c * mod[j]) % p + p) % p;
  }
  r.resize(mod.size() - 1, 0);
  return r;
}

Poly ppow_mod(Poly base, BigInt e, const Poly& mod, int p) {
  Poly r(mod.size() - 1, 0);
  r[0] = 1;
  base.resize(mod.size() - 1, 0);
  while (e > 0) {
    if ((e & 1) != 0) r = pmul_mod(r, base, mod, p);
    base = pmul_mod(base, base, mod, p);
    e >>= 1;
  }
  return r;
}

Poly pgcd(Poly a, Poly b, int p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    // a mod b with b made monic on the fly
    int lead_inv = 1;
    for (int t = 1; t < p; ++t)
      if (t * b.back() % p == 1) {
        lead_inv = t;
        break;
      }
    Poly r = a;
    while (r.size() >= b.size()) {
      int c = r.back() * lead_inv % p;
      size_t shift = r.size() - b.size();
      for (size_t j = 0; j < b.size(); ++j) r[shift + j] = ((r[shift + j] - c * b[j]) % p + p) % p;
      trim(r);
      if (r.empty()) break;
    }
    a = b;
    b = r;
  }
  return a;
}

bool is_irreducible(const Poly& f, int p) {
  int m = static_cast<int>(f.size()) - 1;
  if (m == 1) return true;
  Poly x = {0, 1};
  // x^(p^m) == x mod f
  Poly xq = ppow_mod(x, pow_big(p, m), f, p);
  Poly diff = xq;
  diff.resize(std::max<size_t>(diff.size(), 2), 0);
  diff[1] = ((diff[1] - 1) % p + p) % p;
  trim(diff);
  if (!diff.empty()) return false;
  // gcd(x^(p^(m/l)) - x, f) == 1 for every prime l | m
  for (int l = 2; l <= m; ++l) {
    if (m % l != 0) continue;
    bool prime = true;
    for (int t = 2; t * t <= l; ++t)
      if (l % t == 0) prime = false;
    if (!prime) continue;
    Poly xe = ppow_mod(x, pow_big(p, m / l), f, p);
    Poly d = xe;
    d.resize(std::max<size_t>(d.size(), 2), 0);
    d[1] = ((d[1] - 1) % p + p) % p;
    trim(d);
    Poly g = pgcd(f, d, p);
    if (g.size() != 1) return false;
  }
  return true;
}

std::vector<long> prime_factors(long v) {
  std::vector<long> fs;
  for (long t = 2; t * t <= v; ++t) {
    if (v % t == 0) {
      fs.push_back(t);
      while (v % t == 0) v /= t;
    }
  }
  if (v > 1) fs.push_back(v);
  return fs;
}

}  // namespace

std::vector<int> smallest_irreducible(int p, int m) {
  if (m == 1) return {0, 1};  // x itself: F_p[x]/(x) = F_p
  // Scan monic degree-m polynomials in increasing coefficient-word order.
  long count = 1;
  for (int i = 0; i < m; ++i) count *= p;
  for (long w = 0; w < count; ++w) {
    Poly f(m + 1, 0);
    long v = w;
    for (int i = 0; i < m; ++i) {
      f[i] = static_cast<int>(v % p);
      v /= p;
    }
    f[m] = 1;
    if (is_irreducible(f, p)) return f;
  }
  fail(Err::BadInput, "no irreducible polynomial found (unreachable)");
}

GF::GF(int p, int m) : p_(p), m_(m) {
  require(p >= 2 && m >= 1, Err::BadInput, "GF: need p >= 2, m >= 1");
  q_ = 1;
  for (int i = 0; i < m; ++i) {
    q_ *= p;
    require(q_ <= kMaxFieldSize, Err::BudgetExceeded, "GF: field size exceeds table budget");
  }
  modulus_ = smallest_irreducible(p, m);

  // Find a generator of the multiplicative group, smallest code first.
  std::vector<long> factors = prime_factors(q_ - 1);
  long gen = 0;
  for (long c = 2; c < q_ && gen == 0; ++c) {
    bool ok = true;
    for (long l : factors) {
      // order check via repeated squaring on the slow multiply
      long e = (q_ - 1) / l;
      long acc = 1, base = c;
      while (e) {
        if (e & 1) acc = mul_slow(acc, base);
        base = mul_slow(base, base);
        e >>= 1;
      }
      if (acc == 1) {
        ok = false;
        break;
      }
    }
    if (ok) gen = c;
  }
  if (q_ == 2) gen = 1;
  require(gen != 0, Err::BadInput, "GF: no multiplicative generator found");

  exp_.assign(q_ - 1, 0);
  log_.assign(q_, 0);
  long acc = 1;
  for (long i = 0; i < q_ - 1; ++i) {
    exp_[i] = static_cast<int32_t>(acc);
    log_[acc] = static_cast<int32_t>(i);
    acc = mul_slow(acc, gen);
  }

  basis_trace_.assign(m_, 0);
  for (int i = 0; i < m_; ++i) {
    // Tr(x^i) = sum over Frobenius powers of the basis monomial
    Poly xi(m_ + 1, 0);
    Poly acc_poly(m_, 0);
    Poly cur = ppow_mod(Poly{0, 1}, BigInt(i), modulus_, p_);
    for (int j = 0; j < m_; ++j) {
      for (int t = 0; t < m_; ++t) acc_poly[t] = (acc_poly[t] + cur[t]) % p_;
      cur = ppow_mod(cur, BigInt(p_), modulus_, p_);
    }
    for (int t = 1; t < m_; ++t)
      require(acc_poly[t] == 0, Err::BadInput, "GF: basis trace not in prime field");
    basis_trace_[i] = acc_poly.empty() ? 0 : acc_poly[0];
  }
}

long GF::mul_slow(long a, long b) const {
  if (a == 0 || b == 0) return 0;
  std::vector<int> da = digits(a), db = digits(b);
  Poly r = pmul_mod(da, db, modulus_, p_);
  return code_of(r);
}

std::vector<int> GF::digits(long code) const {
  std::vector<int> d(m_, 0);
  for (int i = 0; i < m_; ++i) {
    d[i] = static_cast<int>(code % p_);
    code /= p_;
  }
  return d;
}

long GF::code_of(const std::vector<int>& digits) const {
  long c = 0;
  for (int i = m_ - 1; i >= 0; --i) c = c * p_ + (i < static_cast<int>(digits.size()) ? digits[i] : 0);
  return c;
}

long GF::add(long a, long b) const {
  if (p_ == 2) return a ^ b;
  long r = 0, mult = 1;
  for (int i = 0; i < m_; ++i) {
    int da = static_cast<int>(a % p_), db = static_cast<int>(b % p_);
    r += static_cast<long>((da + db) % p_) * mult;
    a /= p_;
    b /= p_;
    mult *= p_;
  }
  return r;
}

long GF::neg(long a) const {
  if (p_ == 2) return a;
  long r = 0, mult = 1;
  for (int i = 0; i < m_; ++i) {
    int da = static_cast<int>(a % p_);
    r += static_cast<long>((p_ - da) % p_) * mult;
    a /= p_;
    mult *= p_;
  }
  return r;
}

long GF::sub(long a, long b) const { return add(a, neg(b)); }

long GF::mul(long a, long b) const {
  if (a == 0 || b == 0) return 0;
  long e = log_[a] + log_[b];
  if (e >= q_ - 1) e -= q_ - 1;
  return exp_[e];
}

long GF::inv(long a) const {
  require(a != 0, Err::NotAUnit, "GF::inv(0)");
  long e = (q_ - 1 - log_[a]) % (q_ - 1);
  return exp_[e];
}

long GF::pow(long a, const BigInt& e) const {
  if (a == 0) {
    require(e > 0, Err::BadInput, "GF::pow(0, e<=0)");
    return 0;
  }
  BigInt em = mod_pos(e, BigInt(q_ - 1));
  long idx = static_cast<long>((BigInt(log_[a]) * em % (q_ - 1)).convert_to<long>());
  return exp_[idx];
}

long GF::frobenius(long a, long times) const {
  long t = ((times % m_) + m_) % m_;
  return pow(a, pow_big(p_, static_cast<unsigned long>(t)));
}

int GF::trace_to_prime(long a) const {
  long acc = 0;
  long v = a;
  for (int i = 0; i < m_; ++i) {
    acc += static_cast<long>(v % p_) * basis_trace_[i];
    v /= p_;
  }
  return static_cast<int>(acc % p_);
}

int GF::degree_over_prime(long a) const {
  long b = a;
  for (int d = 1; d <= m_; ++d) {
    b = frobenius(b);
    if (b == a && m_ % d == 0) return d;
  }
  return m_;
}

std::vector<int> GF::minimal_poly(long a) const {
  int deg = degree_over_prime(a);
  // product of (x - conjugate) over the Frobenius orbit, coefficients in field
  std::vector<long> coeff(deg + 1, 0);
  coeff[0] = 1;  // constant 1 polynomial, degree grows as we multiply
  int cur_deg = 0;
  long conj = a;
  for (int i = 0; i < deg; ++i) {
    // multiply by (x - conj): new[j] = old[j-1] - conj*old[j]
    std::vector<long> next(deg + 1, 0);
    for (int j = cur_deg; j >= 0; --j) {
      next[j + 1] = add(next[j + 1], coeff[j]);
      next[j] = sub(next[j], mul(conj, coeff[j]));
    }
    coeff = next;
    ++cur_deg;
    conj = frobenius(conj);
  }
  std::vector<int> out(deg + 1, 0);
  for (int j = 0; j <= deg; ++j) {
    // coefficients must lie in the prime field
    long c = coeff[j];
    require(c < p_, Err::BadInput, "minimal_poly: coefficient escaped the prime field");
    out[j] = static_cast<int>(c);
  }
  return out;
}

std::vector<long> GF::roots_of(const std::vector<int>& poly_over_fp) const {
  std::vector<long> roots;
  for (long c = 0; c < q_; ++c) {
    long acc = 0;
    for (size_t j = poly_over_fp.size(); j-- > 0;) acc = add(mul(acc, c), poly_over_fp[j] % p_);
    if (acc == 0) roots.push_back(c);
  }
  return roots;
}

long embed_into(const GF& src, long code, const GF& dst) {
  require(src.p() == dst.p(), Err::RingMismatch, "embed_into: different characteristic");
  require(dst.m() % src.m() == 0, Err::BadInput, "embed_into: no subfield inclusion");
  if (code == 0) return 0;
  std::vector<int> mp = src.minimal_poly(code);
  std::vector<long> roots = dst.roots_of(mp);
  require(!roots.empty(), Err::BadInput, "embed_into: minimal polynomial has no root upstairs");
  return roots.front();
}

}  // namespace dworklab
