#include "dworklab/local_ring.hpp"

#include <algorithm>
#include <sstream>

namespace dworklab {

// ---- LocalRing --------------------------------------------------------------

LocalRing::LocalRing(int p, int d, Ram ram, int N) : p_(p), d_(d), N_(N), ram_(ram) {
  require(p >= 2, Err::BadInput, "LocalRing: p must be prime >= 2");
  for (int t = 2; t * t <= p; ++t) require(p % t != 0, Err::BadInput, "LocalRing: p not prime");
  require(d >= 1, Err::BadInput, "LocalRing: d >= 1");
  require(N >= 1, Err::InsufficientPrecision, "LocalRing: N >= 1");
  e_ = (ram == Ram::Trivial) ? 1 : (p - 1);
  gf_ = std::make_shared<GF>(p, d);
  if (ram == Ram::Cyclotomic) {
    // Phi_p(1+lambda) = sum_j C(p, j+1) lambda^j, Eisenstein since p | C(p,t)
    // for 0 < t < p.  lambda^{p-1} = -(sum_{j<p-1} C(p,j+1) lambda^j).
    eis_.resize(e_);
    for (int j = 0; j < e_; ++j) eis_[j] = binomial(BigInt(p), j + 1);
  }
  Mj_.resize(e_);
  pMj_.resize(e_);
  for (int j = 0; j < e_; ++j) {
    long m = (N_ - j + e_ - 1) / e_;
    if (m < 0) m = 0;
    Mj_[j] = m;
    pMj_[j] = pow_big(p_, static_cast<unsigned long>(m));
  }
}

RingPtr LocalRing::make(int p, int d, Ram ram, int N) {
  return RingPtr(new LocalRing(p, d, ram, N));
}

std::string LocalRing::describe() const {
  std::ostringstream os;
  os << "O(p=" << p_ << ", d=" << d_ << ", "
     << (ram_ == Ram::Trivial ? "pi=p" : "pi=lambda=zeta_p-1") << ", N=" << N_ << ")";
  return os.str();
}

// ---- PAdicScalar ------------------------------------------------------------

namespace {
void check_same_ring(const PAdicScalar& a, const PAdicScalar& b) {
  require(a.valid() && b.valid(), Err::BadInput, "scalar not initialized");
  require(a.ring()->same_as(*b.ring()), Err::RingMismatch,
          "scalars from different rings: " + a.ring()->describe() + " vs " + b.ring()->describe());
}
}  // namespace

void PAdicScalar::canonicalize() {
  const LocalRing& R = *R_;
  for (int i = 0; i < R.d(); ++i)
    for (int j = 0; j < R.e(); ++j) {
      BigInt& v = c_[i * R.e() + j];
      v = mod_pos(v, R.pMj(j));
    }
}

PAdicScalar PAdicScalar::zero(const RingPtr& R) {
  return PAdicScalar(R, std::vector<BigInt>(R->d() * R->e(), BigInt(0)));
}

PAdicScalar PAdicScalar::one(const RingPtr& R) { return from_int(R, 1); }

PAdicScalar PAdicScalar::from_int(const RingPtr& R, const BigInt& v) {
  std::vector<BigInt> c(R->d() * R->e(), BigInt(0));
  c[0] = v;
  PAdicScalar s(R, std::move(c));
  s.canonicalize();
  return s;
}

PAdicScalar PAdicScalar::from_coeffs(const RingPtr& R, std::vector<BigInt> c) {
  require(static_cast<int>(c.size()) == R->d() * R->e(), Err::BadInput,
          "from_coeffs: wrong slot count");
  PAdicScalar s(R, std::move(c));
  s.canonicalize();
  return s;
}

PAdicScalar PAdicScalar::pi(const RingPtr& R) {
  if (R->ram() == Ram::Trivial) return from_int(R, R->p());
  if (R->e() == 1) return from_int(R, -R->eisenstein()[0]);  // p = 2: lambda = -2
  std::vector<BigInt> c(R->d() * R->e(), BigInt(0));
  c[1] = 1;  // omega^0 * lambda^1
  return from_coeffs(R, std::move(c));
}

PAdicScalar PAdicScalar::operator+(const PAdicScalar& o) const {
  check_same_ring(*this, o);
  std::vector<BigInt> c(c_.size());
  for (size_t t = 0; t < c_.size(); ++t) c[t] = c_[t] + o.c_[t];
  PAdicScalar s(R_, std::move(c));
  s.canonicalize();
  return s;
}

PAdicScalar PAdicScalar::operator-(const PAdicScalar& o) const {
  check_same_ring(*this, o);
  std::vector<BigInt> c(c_.size());
  for (size_t t = 0; t < c_.size(); ++t) c[t] = c_[t] - o.c_[t];
  PAdicScalar s(R_, std::move(c));
  s.canonicalize();
  return s;
}

PAdicScalar PAdicScalar::operator-() const {
  std::vector<BigInt> c(c_.size());
  for (size_t t = 0; t < c_.size(); ++t) c[t] = -c_[t];
  PAdicScalar s(R_, std::move(c));
  s.canonicalize();
  return s;
}

PAdicScalar PAdicScalar::operator*(const PAdicScalar& o) const {
  check_same_ring(*this, o);
  const LocalRing& R = *R_;
  const int d = R.d(), e = R.e();
  const int wi = 2 * d - 1, wj = 2 * e - 1;
  // double convolution into an un-reduced workspace
  std::vector<BigInt> w(static_cast<size_t>(wi) * wj, BigInt(0));
  for (int i1 = 0; i1 < d; ++i1)
    for (int j1 = 0; j1 < e; ++j1) {
      const BigInt& a = c_[i1 * e + j1];
      if (a == 0) continue;
      for (int i2 = 0; i2 < d; ++i2)
        for (int j2 = 0; j2 < e; ++j2) {
          const BigInt& b = o.c_[i2 * e + j2];
          if (b == 0) continue;
          w[static_cast<size_t>(i1 + i2) * wj + (j1 + j2)] += a * b;
        }
    }
  // omega-degree reduction by the monic unramified modulus f
  const std::vector<int>& f = R.unram_modulus();
  for (int i = wi - 1; i >= d; --i)
    for (int j = 0; j < wj; ++j) {
      BigInt c = w[static_cast<size_t>(i) * wj + j];
      if (c == 0) continue;
      w[static_cast<size_t>(i) * wj + j] = 0;
      for (int t = 0; t < d; ++t)
        if (f[t] != 0) w[static_cast<size_t>(i - d + t) * wj + j] -= c * f[t];
    }
  // lambda-degree reduction by the Eisenstein relation
  if (e > 1) {
    const std::vector<BigInt>& E = R.eisenstein();
    for (int j = wj - 1; j >= e; --j)
      for (int i = 0; i < d; ++i) {
        BigInt c = w[static_cast<size_t>(i) * wj + j];
        if (c == 0) continue;
        w[static_cast<size_t>(i) * wj + j] = 0;
        for (int t = 0; t < e; ++t)
          if (E[t] != 0) w[static_cast<size_t>(i) * wj + (j - e + t)] -= c * E[t];
      }
  }
  std::vector<BigInt> c(static_cast<size_t>(d) * e);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < e; ++j) c[i * e + j] = std::move(w[static_cast<size_t>(i) * wj + j]);
  PAdicScalar s(R_, std::move(c));
  s.canonicalize();
  return s;
}

bool PAdicScalar::operator==(const PAdicScalar& o) const {
  check_same_ring(*this, o);
  return c_ == o.c_;
}

bool PAdicScalar::is_zero() const {
  for (const BigInt& v : c_)
    if (v != 0) return false;
  return true;
}

long PAdicScalar::ord_pi() const {
  const LocalRing& R = *R_;
  long best = R.N();
  for (int i = 0; i < R.d(); ++i)
    for (int j = 0; j < R.e(); ++j) {
      const BigInt& v = c_[i * R.e() + j];
      if (v == 0) continue;
      long o = j + static_cast<long>(R.e()) * ord_p(v, R.p());
      best = std::min(best, o);
    }
  return best;
}

bool PAdicScalar::congruent(const PAdicScalar& o, long t) const {
  check_same_ring(*this, o);
  require(t <= R_->N(), Err::InsufficientPrecision, "congruent: t exceeds ring precision");
  if (t <= 0) return true;
  return diff_ord(*this, o) >= t;
}

long diff_ord(const PAdicScalar& a, const PAdicScalar& b) { return (a - b).ord_pi(); }

PAdicScalar PAdicScalar::mul_int(const BigInt& v) const {
  std::vector<BigInt> c(c_.size());
  for (size_t t = 0; t < c_.size(); ++t) c[t] = c_[t] * v;
  PAdicScalar s(R_, std::move(c));
  s.canonicalize();
  return s;
}

PAdicScalar PAdicScalar::mul_pi(long t) const {
  require(t >= 0, Err::BadInput, "mul_pi: negative exponent; use divexact_pi");
  PAdicScalar s = *this;
  const LocalRing& R = *R_;
  for (long step = 0; step < t; ++step) {
    if (R.ram() == Ram::Trivial) {
      s = s.mul_int(R.p());
      continue;
    }
    const int d = R.d(), e = R.e();
    const std::vector<BigInt>& E = R.eisenstein();
    std::vector<BigInt> c(static_cast<size_t>(d) * e, BigInt(0));
    for (int i = 0; i < d; ++i) {
      const BigInt& top = s.c_[i * e + (e - 1)];
      for (int j = e - 1; j >= 1; --j) c[i * e + j] = s.c_[i * e + (j - 1)] - E[j] * top;
      c[i * e + 0] = -E[0] * top;
    }
    s = PAdicScalar(R_, std::move(c));
    s.canonicalize();
  }
  return s;
}

PAdicScalar PAdicScalar::divexact_pi(long t) const {
  require(t >= 0, Err::BadInput, "divexact_pi: negative exponent");
  PAdicScalar s = *this;
  const LocalRing& R = *R_;
  for (long step = 0; step < t; ++step) {
    const int d = R.d(), e = R.e();
    std::vector<BigInt> c(static_cast<size_t>(d) * e, BigInt(0));
    if (R.ram() == Ram::Trivial) {
      for (size_t idx = 0; idx < s.c_.size(); ++idx) {
        require(s.c_[idx] % R.p() == 0, Err::DivisionFailure,
                "divexact_pi: residue not divisible by pi");
        c[idx] = s.c_[idx] / R.p();
      }
    } else {
      const std::vector<BigInt>& E = R.eisenstein();
      // a = sum_j a_j lambda^j; need p | a_0, then
      //   a/lambda = sum_{j<e-1} (a_{j+1} - E_{j+1} a_0/p) lambda^j - (a_0/p) lambda^{e-1}.
      for (int i = 0; i < d; ++i) {
        const BigInt& a0 = s.c_[i * e + 0];
        require(a0 % R.p() == 0, Err::DivisionFailure,
                "divexact_pi: residue not divisible by pi");
        BigInt a0p = a0 / R.p();
        for (int j = 0; j + 1 <= e - 1; ++j) c[i * e + j] = s.c_[i * e + (j + 1)] - E[j + 1] * a0p;
        c[i * e + (e - 1)] += -a0p;
      }
    }
    s = PAdicScalar(R_, std::move(c));
    s.canonicalize();
  }
  return s;
}

PAdicScalar PAdicScalar::divexact_int(const BigInt& m) const {
  require(m != 0, Err::DivisionFailure, "divexact_int: division by zero");
  const LocalRing& R = *R_;
  BigInt mm = m < 0 ? BigInt(-m) : m;
  long t = 0;
  while (mm % R.p() == 0) {
    mm /= R.p();
    ++t;
  }
  PAdicScalar s = *this;
  if (mm != 1) {
    // unit part: multiply by its inverse modulo the largest slot modulus
    BigInt u_inv = inv_mod(mm, R.pMj(0));
    s = s.mul_int(u_inv);
  }
  if (t > 0) {
    BigInt pt = pow_big(R.p(), static_cast<unsigned long>(t));
    std::vector<BigInt> c(s.c_.size());
    for (size_t idx = 0; idx < s.c_.size(); ++idx) {
      require(s.c_[idx] % pt == 0, Err::DivisionFailure,
              "divexact_int: residue not divisible by the p-part");
      c[idx] = s.c_[idx] / pt;
    }
    s = PAdicScalar(R_, std::move(c));
    s.canonicalize();
  }
  if (m < 0) s = -s;
  return s;
}

long PAdicScalar::residue_code() const {
  const LocalRing& R = *R_;
  std::vector<int> digits(R.d());
  for (int i = 0; i < R.d(); ++i)
    digits[i] = static_cast<int>(mod_pos(c_[i * R.e() + 0], R.p()).convert_to<long>());
  return R.residue_field().code_of(digits);
}

PAdicScalar PAdicScalar::invert_unit() const {
  const LocalRing& R = *R_;
  long rc = residue_code();
  require(rc != 0, Err::NotAUnit, "invert_unit: residue vanishes mod pi");
  long inv_code = R.residue_field().inv(rc);
  std::vector<int> digits = R.residue_field().digits(inv_code);
  std::vector<BigInt> c(static_cast<size_t>(R.d()) * R.e(), BigInt(0));
  for (int i = 0; i < R.d(); ++i) c[i * R.e() + 0] = digits[i];
  PAdicScalar x = from_coeffs(R_, std::move(c));
  PAdicScalar two = from_int(R_, 2);
  // Newton doubling: x <- x(2 - a x); digits correct mod pi double each pass.
  for (int it = 0; it < 64; ++it) {
    PAdicScalar ax = (*this) * x;
    if (ax == one(R_)) return x;
    x = x * (two - ax);
  }
  fail(Err::InsufficientPrecision, "invert_unit: Newton iteration failed to converge");
}

PAdicScalar PAdicScalar::pow(const BigInt& k) const {
  if (k < 0) return invert_unit().pow(-k);
  PAdicScalar acc = one(R_);
  PAdicScalar base = *this;
  BigInt e = k;
  while (e > 0) {
    if ((e & 1) != 0) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

PAdicScalar PAdicScalar::teichmuller(const RingPtr& R, long gf_code) {
  std::vector<int> digits = R->residue_field().digits(gf_code);
  std::vector<BigInt> c(static_cast<size_t>(R->d()) * R->e(), BigInt(0));
  for (int i = 0; i < R->d(); ++i) c[i * R->e() + 0] = digits[i];
  PAdicScalar t = from_coeffs(R, std::move(c));
  BigInt qd = pow_big(R->p(), static_cast<unsigned long>(R->d()));
  for (int it = 0; it <= R->N() + 2; ++it) {
    PAdicScalar next = t.pow(qd);
    if (next == t) return t;
    t = next;
  }
  fail(Err::InsufficientPrecision, "teichmuller: Frobenius iteration failed to stabilize");
}

PAdicScalar PAdicScalar::embed_base(const RingPtr& target, const PAdicScalar& s) {
  require(s.ring()->d() == 1, Err::BadInput, "embed_base: source must be a base-ring scalar");
  require(s.ring()->p() == target->p() && s.ring()->ram() == target->ram() &&
              s.ring()->N() == target->N(),
          Err::RingMismatch, "embed_base: incompatible rings");
  std::vector<BigInt> c(static_cast<size_t>(target->d()) * target->e(), BigInt(0));
  for (int j = 0; j < target->e(); ++j) c[j] = s.coeffs()[j];
  return from_coeffs(target, std::move(c));
}

PAdicScalar PAdicScalar::descend_to_base(const RingPtr& base) const {
  const LocalRing& R = *R_;
  require(base->d() == 1 && base->p() == R.p() && base->ram() == R.ram() && base->N() == R.N(),
          Err::RingMismatch, "descend_to_base: incompatible base ring");
  for (int i = 1; i < R.d(); ++i)
    for (int j = 0; j < R.e(); ++j)
      require(c_[i * R.e() + j] == 0, Err::CoefficientNotDescendable,
              "descend_to_base: omega coordinates do not vanish");
  std::vector<BigInt> c(base->e());
  for (int j = 0; j < R.e(); ++j) c[j] = c_[j];
  return from_coeffs(base, std::move(c));
}

std::vector<std::string> PAdicScalar::digit_strings() const {
  std::vector<std::string> out;
  out.reserve(c_.size());
  for (const BigInt& v : c_) out.push_back(to_decimal(v));
  return out;
}

std::string PAdicScalar::to_string() const {
  const LocalRing& R = *R_;
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < R.d(); ++i)
    for (int j = 0; j < R.e(); ++j) {
      const BigInt& v = c_[i * R.e() + j];
      if (v == 0) continue;
      if (!first) os << " + ";
      first = false;
      os << v.str();
      if (i > 0) os << "*w^" << i;
      if (j > 0) os << "*L^" << j;
    }
  if (first) os << "0";
  return os.str();
}

// ---- Newton polygon ---------------------------------------------------------

NewtonPolygon newton_polygon(const std::vector<std::optional<BigRat>>& ords,
                             const BigRat& normalization) {
  require(normalization > 0, Err::BadInput, "newton_polygon: normalization must be positive");
  std::vector<std::pair<long, BigRat>> pts;
  for (size_t i = 0; i < ords.size(); ++i)
    if (ords[i]) pts.emplace_back(static_cast<long>(i), *ords[i] / normalization);
  NewtonPolygon np;
  if (pts.empty()) return np;
  // monotone-chain lower hull over points with strictly increasing x
  std::vector<std::pair<long, BigRat>>& hull = np.vertices;
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull[hull.size() - 1];
      // drop b if it lies on or above segment a->pt
      BigRat lhs = (b.second - a.second) * (pt.first - a.first);
      BigRat rhs = (pt.second - a.second) * (b.first - a.first);
      if (lhs >= rhs)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(pt);
  }
  for (size_t i = 0; i + 1 < hull.size(); ++i) {
    BigRat slope = (hull[i + 1].second - hull[i].second) / BigRat(hull[i + 1].first - hull[i].first);
    long len = hull[i + 1].first - hull[i].first;
    if (!np.segments.empty() && np.segments.back().first == slope)
      np.segments.back().second += len;
    else
      np.segments.emplace_back(slope, len);
  }
  return np;
}

// ---- Hensel unit root -------------------------------------------------------

PAdicScalar hensel_unit_root(const std::vector<PAdicScalar>& P) {
  require(!P.empty() && P[0].valid(), Err::BadInput, "hensel_unit_root: empty polynomial");
  const RingPtr R = P[0].ring();
  require(P[0] == PAdicScalar::one(R), Err::BadInput, "hensel_unit_root: constant term must be 1");
  long top = 0;
  long unit_deg = 0;
  for (size_t i = 1; i < P.size(); ++i) {
    if (!P[i].is_zero()) top = static_cast<long>(i);
    if (P[i].ord_pi() == 0) unit_deg = static_cast<long>(i);
  }
  require(unit_deg >= 1, Err::NoUnitRoot, "hensel_unit_root: reduction mod pi is constant");
  require(unit_deg == 1, Err::MultipleUnitRoots,
          "hensel_unit_root: more than one unit reciprocal root at truncation");
  // Reversed polynomial Q(S) = S^top * P(1/S); the unit reciprocal root of P
  // is a simple root of Q mod pi.
  std::vector<PAdicScalar> Q(top + 1);
  for (long i = 0; i <= top; ++i) Q[i] = (static_cast<size_t>(top - i) < P.size()) ? P[top - i] : PAdicScalar::zero(R);
  std::vector<PAdicScalar> Qp(top);  // derivative
  for (long i = 1; i <= top; ++i) Qp[i - 1] = Q[i].mul_int(i);
  auto eval = [&](const std::vector<PAdicScalar>& F, const PAdicScalar& s) {
    PAdicScalar acc = PAdicScalar::zero(R);
    for (size_t i = F.size(); i-- > 0;) acc = acc * s + F[i];
    return acc;
  };
  // start from the residue root: P == 1 - abar T mod pi, abar = -c_1 mod pi
  long neg_c1 = R->residue_field().neg(P[1].residue_code());
  std::vector<int> digits = R->residue_field().digits(neg_c1);
  std::vector<BigInt> c(static_cast<size_t>(R->d()) * R->e(), BigInt(0));
  for (int i = 0; i < R->d(); ++i) c[i * R->e() + 0] = digits[i];
  PAdicScalar s = PAdicScalar::from_coeffs(R, std::move(c));
  for (int it = 0; it <= R->N() + 4; ++it) {
    PAdicScalar v = eval(Q, s);
    if (v.is_zero()) return s;
    PAdicScalar dv = eval(Qp, s);
    s = s - v * dv.invert_unit();
  }
  fail(Err::InsufficientPrecision, "hensel_unit_root: Newton iteration failed to converge");
}

// ---- RingTower --------------------------------------------------------------

RingPtr RingTower::at_degree(int d) {
  require(d >= 1, Err::BadInput, "RingTower: degree >= 1");
  if (d == 1) return base_;
  if (static_cast<size_t>(d) >= cache_.size()) cache_.resize(d + 1);
  if (!cache_[d]) cache_[d] = LocalRing::make(base_->p(), d, base_->ram(), base_->N());
  return cache_[d];
}

}  // namespace dworklab
