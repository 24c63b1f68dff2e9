#include "dworklab/kloosterman.hpp"

#include <sstream>

namespace dworklab {

// ---- exact cyclotomic integers ------------------------------------------------

CyclotomicInt CyclotomicInt::zero(int p) {
  require(p >= 2, Err::BadInput, "CyclotomicInt: p must be >= 2");
  CyclotomicInt z;
  z.p = p;
  z.c.assign(static_cast<size_t>(p - 1), BigInt(0));
  return z;
}

CyclotomicInt CyclotomicInt::one(int p) {
  CyclotomicInt z = zero(p);
  z.c[0] = 1;
  return z;
}

CyclotomicInt CyclotomicInt::zeta_pow(int p, long t) {
  CyclotomicInt z = zero(p);
  long r = t % p;
  if (r < 0) r += p;
  if (r < p - 1) {
    z.c[static_cast<size_t>(r)] = 1;
  } else {  // zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2})
    for (auto& v : z.c) v = -1;
  }
  return z;
}

CyclotomicInt CyclotomicInt::operator+(const CyclotomicInt& o) const {
  require(p == o.p, Err::BadInput, "CyclotomicInt: mixed p");
  CyclotomicInt z = *this;
  for (size_t i = 0; i < z.c.size(); ++i) z.c[i] += o.c[i];
  return z;
}

CyclotomicInt CyclotomicInt::operator-(const CyclotomicInt& o) const {
  require(p == o.p, Err::BadInput, "CyclotomicInt: mixed p");
  CyclotomicInt z = *this;
  for (size_t i = 0; i < z.c.size(); ++i) z.c[i] -= o.c[i];
  return z;
}

CyclotomicInt CyclotomicInt::operator-() const {
  CyclotomicInt z = *this;
  for (auto& v : z.c) v = -v;
  return z;
}

CyclotomicInt CyclotomicInt::operator*(const CyclotomicInt& o) const {
  require(p == o.p, Err::BadInput, "CyclotomicInt: mixed p");
  // convolve in exponents mod p, then fold zeta^{p-1} into the power basis
  std::vector<BigInt> acc(static_cast<size_t>(p), BigInt(0));
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    for (size_t j = 0; j < o.c.size(); ++j) {
      if (o.c[j] == 0) continue;
      acc[(i + j) % static_cast<size_t>(p)] += c[i] * o.c[j];
    }
  }
  CyclotomicInt z = zero(p);
  const BigInt& top = acc[static_cast<size_t>(p - 1)];
  for (size_t t = 0; t + 1 < acc.size(); ++t) z.c[t] = acc[t] - top;
  return z;
}

bool CyclotomicInt::operator==(const CyclotomicInt& o) const {
  return p == o.p && c == o.c;
}

bool CyclotomicInt::is_zero() const {
  for (const auto& v : c)
    if (v != 0) return false;
  return true;
}

bool CyclotomicInt::is_rational(BigInt* value) const {
  for (size_t i = 1; i < c.size(); ++i)
    if (c[i] != 0) return false;
  if (value != nullptr) *value = c[0];
  return true;
}

CyclotomicInt CyclotomicInt::galois(long t) const {
  require(mod_pos(BigInt(t), BigInt(p)) != 0, Err::BadInput,
          "CyclotomicInt::galois: t must be prime to p");
  std::vector<BigInt> acc(static_cast<size_t>(p), BigInt(0));
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    const size_t tgt = static_cast<size_t>(
        mod_pos(BigInt(static_cast<long>(i) * t), BigInt(p)).convert_to<long>());
    acc[tgt] += c[i];
  }
  CyclotomicInt z = zero(p);
  const BigInt& top = acc[static_cast<size_t>(p - 1)];
  for (size_t i = 0; i + 1 < acc.size(); ++i) z.c[i] = acc[i] - top;
  return z;
}

CyclotomicInt CyclotomicInt::divexact_int(const BigInt& m) const {
  require(m != 0, Err::BadInput, "CyclotomicInt::divexact_int: zero divisor");
  CyclotomicInt z = *this;
  for (auto& v : z.c) {
    require(v % m == 0, Err::IntegralityFailure,
            "CyclotomicInt: division does not stay in Z[zeta]");
    v /= m;
  }
  return z;
}

std::string CyclotomicInt::to_string() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < c.size(); ++i) {
    if (i) os << ",";
    os << c[i].str();
  }
  os << "]";
  return os.str();
}

// ---- the exact character sum --------------------------------------------------

CyclotomicInt kloosterman_sum(int n, int p, int Df, long y_code) {
  require(n >= 1, Err::BadInput, "kloosterman_sum: n must be >= 1");
  require(y_code != 0, Err::BadInput, "kloosterman_sum: y must be nonzero");
  GF F(p, Df);
  require(y_code > 0 && y_code < F.q(), Err::BadInput, "kloosterman_sum: bad y code");
  const long units = F.q() - 1;
  require(pow_big(BigInt(units), static_cast<unsigned long>(n)) <= kKloostermanBudget,
          Err::BudgetExceeded, "kloosterman_sum: tuple space beyond the budget");

  // zeta-coefficient accumulator indexed by the trace value; folded once.
  std::vector<BigInt> bucket(static_cast<size_t>(p), BigInt(0));
  std::vector<long> x(static_cast<size_t>(n), 1);
  while (true) {
    long sum = 0, prod = 1;
    for (long xi : x) {
      sum = F.add(sum, xi);
      prod = F.mul(prod, xi);
    }
    const long v = F.add(sum, F.mul(y_code, F.inv(prod)));
    bucket[static_cast<size_t>(F.trace_to_prime(v))] += 1;

    // odometer over nonzero codes, lexicographic
    int pos = n - 1;
    while (pos >= 0) {
      if (++x[static_cast<size_t>(pos)] <= units) break;
      x[static_cast<size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
  }

  CyclotomicInt K = CyclotomicInt::zero(p);
  for (int t = 0; t < p; ++t) {
    if (bucket[static_cast<size_t>(t)] == 0) continue;
    CyclotomicInt term = CyclotomicInt::zeta_pow(p, t);
    for (auto& v : term.c) v *= bucket[static_cast<size_t>(t)];
    K = K + term;
  }
  return K;
}

// ---- fibre polynomial -----------------------------------------------------------

KloostermanFibre fibre_polynomial(int n, const ClosedPoint& point) {
  require(point.n == 1, Err::BadInput, "fibre_polynomial: parameter point must be 1-dim");
  const int p = point.q;
  const int d = point.degree;

  KloostermanFibre out;
  out.point = point;
  out.n = n;

  GF Fd(p, d);
  for (int k = 1; k <= n + 2; ++k) {
    GF Fdk(p, d * k);
    const long y = k == 1 ? point.rep[0] : embed_into(Fd, point.rep[0], Fdk);
    out.sums.push_back(kloosterman_sum(n, p, d * k, y));
  }

  // power sums of the reciprocal roots
  std::vector<CyclotomicInt> s;
  s.push_back(CyclotomicInt::zero(p));  // unused s_0 slot
  for (const auto& K : out.sums) s.push_back(n % 2 == 1 ? -K : K);

  // Newton: k e_k = sum_{t=1..k} (-1)^{t-1} e_{k-t} s_t, exactly in Z[zeta]
  std::vector<CyclotomicInt> e;
  e.push_back(CyclotomicInt::one(p));
  for (int k = 1; k <= n + 1; ++k) {
    CyclotomicInt acc = CyclotomicInt::zero(p);
    for (int t = 1; t <= k; ++t) {
      const CyclotomicInt term = e[static_cast<size_t>(k - t)] * s[static_cast<size_t>(t)];
      acc = t % 2 == 1 ? acc + term : acc - term;
    }
    e.push_back(acc.divexact_int(k));
  }

  // P(T) = prod (1 - alpha_i T) = sum_j (-1)^j e_j T^j
  for (int j = 0; j <= n + 1; ++j)
    out.poly.push_back(j % 2 == 0 ? e[static_cast<size_t>(j)] : -e[static_cast<size_t>(j)]);

  // degree closure: sum_{j=0..n+1} poly[j] * s_{n+2-j} = 0
  CyclotomicInt chk = CyclotomicInt::zero(p);
  for (int j = 0; j <= n + 1; ++j)
    chk = chk + out.poly[static_cast<size_t>(j)] * s[static_cast<size_t>(n + 2 - j)];
  require(chk.is_zero(), Err::DegreeCheckFailure,
          "fibre_polynomial: the (n+2)-nd power sum does not close the degree");
  out.degree_check = true;
  return out;
}

// ---- embedding and the slope staircase ------------------------------------------

PAdicScalar embed_cyclotomic(const CyclotomicInt& z, const RingPtr& R) {
  require(R->d() == 1, Err::BadInput, "embed_cyclotomic: base ring required");
  require(R->p() == z.p, Err::BadInput, "embed_cyclotomic: ring prime mismatch");
  if (z.p == 2) return PAdicScalar::from_int(R, z.c[0]);
  require(R->e() == z.p - 1, Err::BadInput,
          "embed_cyclotomic: odd p needs the cyclotomic ramified ring");
  const PAdicScalar zeta = PAdicScalar::one(R) + PAdicScalar::pi(R);
  PAdicScalar acc = PAdicScalar::from_int(R, z.c.back());
  for (size_t i = z.c.size() - 1; i-- > 0;)
    acc = acc * zeta + PAdicScalar::from_int(R, z.c[i]);
  return acc;
}

int kloosterman_ring_precision(int n, int p, int d) {
  const int e = p == 2 ? 1 : p - 1;
  const long norm = static_cast<long>(d) * e;
  const long need = static_cast<long>(n) * (n + 1) / 2 * norm + norm + 2;
  const long floor_spec = 2L * n * d * (p - 1);
  return static_cast<int>(std::max({8L, need, floor_spec}));
}

SperberReport verify_sperber(const KloostermanFibre& fibre, const RingPtr& R,
                             bool strict) {
  const int p = fibre.sums.empty() ? 0 : fibre.sums[0].p;
  require(p >= 2, Err::BadInput, "verify_sperber: empty fibre");
  const int n = fibre.n;
  const int d = fibre.point.degree;
  const long norm = static_cast<long>(d) * R->e();  // ord_q = ord_pi / norm

  SperberReport rep;
  const long top = static_cast<long>(n) * (n + 1) / 2 * norm;
  require(R->N() > top, Err::InsufficientPrecision,
          "verify_sperber: ring precision cannot certify the top slope ord");

  std::vector<std::optional<BigRat>> ords;
  for (const auto& a : fibre.poly) {
    const long o = embed_cyclotomic(a, R).ord_pi();
    if (o >= R->N()) ords.emplace_back(std::nullopt);
    else ords.emplace_back(BigRat(o));
  }
  rep.polygon = newton_polygon(ords, BigRat(norm));

  rep.pass = static_cast<long>(rep.polygon.segments.size()) == n + 1;
  if (!rep.pass) rep.notes.push_back("segment count != n+1");
  for (long i = 0; rep.pass && i <= n; ++i) {
    const auto& [slope, len] = rep.polygon.segments[static_cast<size_t>(i)];
    if (slope != BigRat(i) || len != 1) {
      rep.pass = false;
      rep.notes.push_back("slope staircase broken at step " + std::to_string(i));
    }
  }

  const long last = embed_cyclotomic(fibre.poly.back(), R).ord_pi();
  rep.product_ord_ok = last == top;
  if (!rep.product_ord_ok)
    rep.notes.push_back("ord_q of the root product is not n(n+1)/2");

  if (strict)
    require(rep.pass && rep.product_ord_ok, Err::SlopeMismatch,
            "verify_sperber: slope staircase {0..n} falsified");
  return rep;
}

UnitRootFibreMap kloosterman_unit_root_map(int n, TorusContext& ctx) {
  require(ctx.n == 1, Err::BadInput,
          "kloosterman_unit_root_map: the parameter space is the 1-torus");
  const RingPtr& R = ctx.tower->base();
  UnitRootFibreMap map;
  map.R = R;
  map.modulus = R->N();
  map.source = "hensel-from-kloosterman";
  map.alpha0.reserve(ctx.points.size());
  for (const ClosedPoint& pt : ctx.points) {
    const KloostermanFibre fibre = fibre_polynomial(n, pt);
    std::vector<PAdicScalar> P;
    P.reserve(fibre.poly.size());
    for (const auto& a : fibre.poly) P.push_back(embed_cyclotomic(a, R));
    map.alpha0.push_back(hensel_unit_root(P));
  }
  return map;
}

}  // namespace dworklab
