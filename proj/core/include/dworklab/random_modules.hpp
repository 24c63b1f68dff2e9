#pragma once
// Seeded generators for the randomized test families.  Determinism across
// platforms matters more than distribution quality, so raw mt19937_64 draws
// are reduced by modulo instead of std::uniform_int_distribution (whose
// mapping is implementation-defined).

#include <cstdint>
#include <random>

#include "dworklab/sigma_module.hpp"

namespace dworklab {

class ModuleRng {
 public:
  explicit ModuleRng(uint64_t seed) : eng_(seed) {}
  // inclusive on both ends
  long uniform(long lo, long hi) {
    const uint64_t span = static_cast<uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(eng_() % span);
  }

 private:
  std::mt19937_64 eng_;
};

// Exact polynomial supports inside the U box carrying a valid Over(1)
// certificate (coefficient at X^u divisible by pi^{|u|}); column j gets an
// extra pi^{floor(j/2)} so the nuclear level bookkeeping is exercised.
SigmaModule random_over_module(const RingPtr& R, int q, int n, int rank, int U,
                               uint64_t seed);

// dim x dim constant matrix with staircase column levels.
NuclearConstMatrix random_nuclear_const(const RingPtr& R, int dim, uint64_t seed);

// rank 2, ordinary at slope zero: top-left a unit monomial plus pi-noise,
// second column divisible by pi, lower-left unconstrained.
SigmaModule random_ordinary_rank2(const RingPtr& R, int q, int n, int U, uint64_t seed);

// rank 2 in the reduced shape [[1 + pi a, pi b], [pi c, pi d]];
// constant_only freezes the entries to constants (the congruence family).
SigmaModule random_normalized_rank2(const RingPtr& R, int q, int n, int U,
                                    uint64_t seed, bool constant_only = false);

}  // namespace dworklab
