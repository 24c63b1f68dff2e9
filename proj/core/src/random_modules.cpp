#include "dworklab/random_modules.hpp"

namespace dworklab {

namespace {

PAdicScalar rand_scalar(const RingPtr& R, ModuleRng& rng, bool unit) {
  const long p = R->p();
  if (unit) return PAdicScalar::from_int(R, 1 + rng.uniform(0, p - 2) + p * rng.uniform(0, 2));
  return PAdicScalar::from_int(R, rng.uniform(-4, 4));
}

Expo rand_expo(int n, int radius, ModuleRng& rng) {
  Expo u(static_cast<size_t>(n));
  for (auto& v : u) v = static_cast<int>(rng.uniform(-radius, radius));
  return u;
}

// small polynomial with 1..3 terms; ord floor applied on top of term choice
TruncatedLaurent rand_poly(const RingPtr& R, int n, int U, ModuleRng& rng, long ord_floor,
                           TailCert cert = TailCert::none()) {
  std::vector<std::pair<Expo, PAdicScalar>> entries;
  const long terms = rng.uniform(1, 3);
  for (long t = 0; t < terms; ++t) {
    const Expo u = rand_expo(n, std::min(U, 2), rng);
    PAdicScalar c = rand_scalar(R, rng, /*unit=*/true);
    long lift = ord_floor;
    if (cert.kind == TailCert::Kind::Over) lift = std::max<long>(lift, l1(u));
    entries.emplace_back(u, c.mul_pi(lift));
  }
  // collapse duplicate exponents additively before construction
  std::map<Expo, PAdicScalar> acc;
  for (auto& [u, c] : entries) {
    auto it = acc.find(u);
    if (it == acc.end()) acc.emplace(u, c);
    else it->second = it->second + c;
  }
  entries.assign(acc.begin(), acc.end());
  return TruncatedLaurent::make(R, n, U, entries, cert);
}

}  // namespace

SigmaModule random_over_module(const RingPtr& R, int q, int n, int rank, int U,
                               uint64_t seed) {
  ModuleRng rng(seed);
  LMat B(static_cast<size_t>(rank));
  for (auto& row : B) row.reserve(static_cast<size_t>(rank));
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) {
      const long col_extra = j / 2;
      TruncatedLaurent e = rand_poly(R, n, U, rng, col_extra, TailCert::over(1));
      B[static_cast<size_t>(i)].push_back(std::move(e));
    }
  // anchor a unit constant so the module has a slope-zero column
  B[0][0] = B[0][0] + TruncatedLaurent::constant(R, n, U, PAdicScalar::one(R))
                          .with_cert(TailCert::over(1));
  return make_module(q, B);
}

NuclearConstMatrix random_nuclear_const(const RingPtr& R, int dim, uint64_t seed) {
  ModuleRng rng(seed);
  std::vector<std::vector<PAdicScalar>> a(static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      a[static_cast<size_t>(i)].push_back(
          rand_scalar(R, rng, /*unit=*/false).mul_pi(j / 2));
  return NuclearConstMatrix::from_entries(R, std::move(a));
}

// The slope-zero fixed point applies sigma repeatedly, so entry support grows
// geometrically while the pi-order of each correction grows linearly, and the
// box clips the corrections at ord ~ log_q(U).  Keeping the upper-right block
// zero makes the unit part T00 and the twisted quotient T11/pi exact (the
// solved correction never enters them), so the factorization identity can be
// certified at the full ring modulus while the slope-zero iteration itself
// still runs on genuinely polynomial data.
SigmaModule random_ordinary_rank2(const RingPtr& R, int q, int n, int U, uint64_t seed) {
  ModuleRng rng(seed);
  const TruncatedLaurent unit_const =
      TruncatedLaurent::constant(R, n, U, rand_scalar(R, rng, /*unit=*/true));
  const auto pi_const = [&] {
    return TruncatedLaurent::constant(R, n, U, rand_scalar(R, rng, /*unit=*/true).mul_pi(1));
  };
  LMat B(2);
  B[0].push_back(unit_const + pi_const() + rand_poly(R, n, U, rng, 1));  // unit block
  B[0].push_back(TruncatedLaurent::zero(R, n, U));
  B[1].push_back(rand_poly(R, n, U, rng, 0));               // free polynomial
  B[1].push_back(pi_const() + rand_poly(R, n, U, rng, 1));  // pi-divisible
  return make_module(q, B);
}

SigmaModule random_normalized_rank2(const RingPtr& R, int q, int n, int U,
                                    uint64_t seed, bool constant_only) {
  ModuleRng rng(seed);
  auto part = [&](long floor) {
    if (!constant_only) return rand_poly(R, n, U, rng, floor);
    return TruncatedLaurent::constant(R, n, U,
                                      rand_scalar(R, rng, /*unit=*/true).mul_pi(floor));
  };
  LMat B(2);
  B[0].push_back(TruncatedLaurent::constant(R, n, U, PAdicScalar::one(R)) + part(1));
  B[0].push_back(part(1));
  B[1].push_back(part(1));
  B[1].push_back(part(1));
  return make_module(q, B);
}

}  // namespace dworklab
