// Micro benchmarks for the hot paths: scalar arithmetic, truncated Laurent
// multiplication, characteristic series, the two L-function pipelines, the
// slope-zero splitting iteration, and raw Kloosterman sums.

#include <benchmark/benchmark.h>

#include "dworklab/hodge_newton.hpp"
#include "dworklab/kloosterman.hpp"
#include "dworklab/l_function.hpp"
#include "dworklab/random_modules.hpp"

using namespace dworklab;

namespace {

RingPtr bench_ring(long p, int d, long N) { return LocalRing::make(p, d, Ram::Trivial, N); }

TruncatedLaurent dense_laurent(const RingPtr& R, int U, uint64_t seed) {
  ModuleRng rng(seed);
  std::vector<std::pair<Expo, PAdicScalar>> entries;
  for (int u = -U; u <= U; ++u)
    entries.emplace_back(Expo{u}, PAdicScalar::from_int(R, rng.uniform(1, 1000)));
  return TruncatedLaurent::make(R, 1, U, entries, TailCert::none());
}

}  // namespace

static void BM_ScalarMul(benchmark::State& state) {
  const RingPtr R = bench_ring(2, static_cast<int>(state.range(0)), 32);
  ModuleRng rng(7);
  PAdicScalar a = PAdicScalar::from_int(R, rng.uniform(1, 1 << 20));
  PAdicScalar b = PAdicScalar::from_int(R, rng.uniform(1, 1 << 20));
  for (auto _ : state) {
    PAdicScalar c = a * b;
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_ScalarMul)->Arg(1)->Arg(2)->Arg(4);

static void BM_LaurentMul(benchmark::State& state) {
  const RingPtr R = bench_ring(2, 1, 12);
  const int U = static_cast<int>(state.range(0));
  const TruncatedLaurent a = dense_laurent(R, U, 11);
  const TruncatedLaurent b = dense_laurent(R, U, 13);
  for (auto _ : state) {
    TruncatedLaurent c = a * b;
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_LaurentMul)->Arg(8)->Arg(32)->Arg(128);

static void BM_CharSeries(benchmark::State& state) {
  const RingPtr R = bench_ring(2, 1, 12);
  const NuclearConstMatrix E = random_nuclear_const(R, static_cast<int>(state.range(0)), 5);
  for (auto _ : state) {
    CharSeries cs = char_series(E, 8);
    benchmark::DoNotOptimize(cs);
  }
}
BENCHMARK(BM_CharSeries)->Arg(2)->Arg(4)->Arg(6);

static void BM_EulerL(benchmark::State& state) {
  const RingPtr R = bench_ring(2, 1, 12);
  RingTower tower(R);
  TorusContext ctx = make_torus_context(tower, 1, 3);
  const SigmaModule M = random_over_module(R, 2, 1, 2, 4, 21);
  for (auto _ : state) {
    FibreCache cache;  // fresh cache: measure the full fibre computation
    LSeries L = euler_L(M, BigInt(1), 6, ctx, cache);
    benchmark::DoNotOptimize(L);
  }
}
BENCHMARK(BM_EulerL);

static void BM_FredholmL(benchmark::State& state) {
  const RingPtr R = bench_ring(2, 1, 12);
  const SigmaModule M = random_over_module(R, 2, 1, 2, 4, 21);
  for (auto _ : state) {
    FredholmResult F = fredholm_L(M, 6);
    benchmark::DoNotOptimize(F);
  }
}
BENCHMARK(BM_FredholmL);

static void BM_SlopeZeroSplit(benchmark::State& state) {
  const RingPtr R = bench_ring(2, 1, 12);
  const SigmaModule M = random_ordinary_rank2(R, 2, 1, static_cast<int>(state.range(0)), 5);
  for (auto _ : state) {
    SlopeZeroSplit S = slope_zero_decompose(M);
    benchmark::DoNotOptimize(S);
  }
}
BENCHMARK(BM_SlopeZeroSplit)->Arg(16)->Arg(64);

static void BM_KloostermanSum(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) {
    CyclotomicInt K = kloosterman_sum(1, p, 2, 1);
    benchmark::DoNotOptimize(K);
  }
}
BENCHMARK(BM_KloostermanSum)->Arg(2)->Arg(3)->Arg(5);

BENCHMARK_MAIN();
