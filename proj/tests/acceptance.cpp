// Acceptance gate: runs the eleven end-to-end criteria and prints one
// PASS/FAIL line per criterion.  Exit code 0 iff every criterion passes.
//
// Usage: dworklab_acceptance <cli-binary-path> <scratch-dir>
// (an empty cli path fails the CLI determinism criterion).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dworklab/kloosterman.hpp"
#include "dworklab/random_modules.hpp"
#include "test_util.hpp"

using namespace dwtest;
namespace fs = std::filesystem;

namespace {

SigmaModule trivial_module(const RingPtr& R, int q) {
  LMat B(1);
  B[0].push_back(lconst(R, 1, 2, 1, TailCert::over(1)));
  return make_module(q, B);
}

SigmaModule worked_example(const RingPtr& R) {
  LMat B(2);
  B[0] = {lconst(R, 1, 2, 1), TruncatedLaurent::zero(R, 1, 2)};
  B[1] = {lconst(R, 1, 2, 1),
          TruncatedLaurent::constant(R, 1, 2, PAdicScalar::pi(R))};
  return make_module(2, B);
}

Normalization reduced_shape(const RingPtr& R, int q, long b, long c, long d) {
  const int U = 4;
  LMat psiB(2);
  psiB[0] = {lconst(R, 1, U, 1), lconst(R, 1, U, b).mul_pi(1)};
  psiB[1] = {lconst(R, 1, U, c).mul_pi(1), lconst(R, 1, U, d).mul_pi(1)};
  Normalization norm;
  norm.module = make_module(q, psiB);
  norm.psi = make_module(q, psiB);
  norm.a = PAdicScalar::one(R);
  norm.g = Expo(1, 0);
  return norm;
}

// --- criterion 1: trivial module, both pipelines, exact zeta ------------------

bool crit_trivial_zeta() {
  for (int q : {2, 3}) {
    const RingPtr R = ring(q, 1, 12);
    RingTower tower(R);
    TorusContext ctx = make_torus_context(tower, 1, 8);
    FibreCache cache;
    const SigmaModule M = trivial_module(R, q);
    const LSeries Le = euler_L(M, BigInt(1), 8, ctx, cache);
    const FredholmResult F = fredholm_L(M, 8);
    for (const LSeries* L : {&Le, &F.L}) {
      if (L->exact_upto < 8) return false;
      for (long j = 0; j <= 8; ++j) {
        const PAdicScalar want = PAdicScalar::from_int(R, zeta_coeff(q, j));
        if (!L->c[static_cast<size_t>(j)].congruent(want, 12)) return false;
      }
    }
  }
  return true;
}

// --- criterion 2: euler == fredholm on random overconvergent modules ----------

bool crit_euler_vs_fredholm() {
  for (int i = 0; i < 20; ++i) {
    const int q = i % 2 == 0 ? 2 : 3;
    const RingPtr R = ring(q, 1, 12);
    RingTower tower(R);
    TorusContext ctx = make_torus_context(tower, 1, 5);
    FibreCache cache;
    const SigmaModule M =
        random_over_module(R, q, 1, 1 + i % 3, 4, 1000 + static_cast<uint64_t>(i));
    const LSeries Le = euler_L(M, BigInt(1), 5, ctx, cache);
    const FredholmResult F = fredholm_L(M, 5);
    const LAgree ag = ls_agree(Le, F.L);
    if (!ag.ok || ag.modulus < 8 || ag.upto < 5) return false;
  }
  return true;
}

// --- criterion 3: trace and determinant identities on nuclear matrices --------

bool crit_power_identities() {
  for (int i = 0; i < 100; ++i) {
    const long p = i % 2 == 0 ? 2 : 3;
    const RingPtr R = ring(p, 1, 16);  // Newton divisions spend up to ord(8!)
    const int dim = 1 + i % 6;
    const long k = 1 + (i / 2) % 6;
    const NuclearConstMatrix E = random_nuclear_const(R, dim, 2000 + static_cast<uint64_t>(i));
    const WaringPair w1 = newton_waring_check_41(E, k);
    if (diff_ord(w1.lhs, w1.rhs) < 8) return false;
    const WaringPair w2 = newton_waring_check_42(E, k);
    if (diff_ord(w2.lhs, w2.rhs) < 8) return false;
    const DetDecomp dd = det_power_decomposition_check(E, k, dim + 2);
    if (ls_diff_ord(dd.lhs, dd.rhs_full) < 8) return false;
    if (ls_diff_ord(dd.lhs, dd.rhs_reduced) < 8) return false;
  }
  // hand case diag(1, 2), k = 2: Tr(E^2) = 5 and det(I - T E^2) = (1-T)(1-4T)
  const RingPtr R = ring(2, 1, 16);
  std::vector<std::vector<PAdicScalar>> a = {
      {PAdicScalar::one(R), PAdicScalar::zero(R)},
      {PAdicScalar::zero(R), PAdicScalar::from_int(R, 2)}};
  const NuclearConstMatrix E = NuclearConstMatrix::from_entries(R, a);
  const WaringPair w = newton_waring_check_41(E, 2);
  if (diff_ord(w.lhs, PAdicScalar::from_int(R, 5)) < 8) return false;
  if (diff_ord(w.lhs, w.rhs) < 8) return false;
  const DetDecomp dd = det_power_decomposition_check(E, 2, 4);
  if (!dd.lhs.c[1].congruent(PAdicScalar::from_int(R, -5), 8)) return false;
  if (!dd.lhs.c[2].congruent(PAdicScalar::from_int(R, 4), 8)) return false;
  if (!dd.lhs.c[3].congruent(PAdicScalar::zero(R), 8)) return false;
  if (ls_diff_ord(dd.lhs, dd.rhs_full) < 8) return false;
  if (ls_diff_ord(dd.lhs, dd.rhs_reduced) < 8) return false;
  return true;
}

// --- criterion 4: L-function power decomposition -------------------------------

bool crit_l_power() {
  const RingPtr R = ring(2, 1, 12);
  RingTower tower(R);
  TorusContext ctx = make_torus_context(tower, 1, 6);
  for (int i = 0; i < 10; ++i) {
    const SigmaModule M =
        random_ordinary_rank2(R, 2, 1, 64, 3000 + static_cast<uint64_t>(i));
    FibreCache cache;
    for (long k : {2L, 3L, 4L}) {
      const LDecomp d = l_power_decomposition(M, k, 6, ctx, cache);
      if (!d.agree.ok || d.agree.modulus < 8 || d.agree.upto < 6) return false;
    }
  }
  return true;
}

// --- criterion 5: slope-zero split and the factorization -----------------------

bool crit_hodge_newton() {
  const RingPtr R = ring(2, 1, 12);
  {
    const SlopeZeroSplit S = slope_zero_decompose(worked_example(R));
    if (S.h0 != 1) return false;
    const PAdicScalar want =
        (PAdicScalar::one(R) - PAdicScalar::pi(R)).invert_unit();
    if (!S.E10[0][0].coeff(Expo(1, 0)).congruent(want, 10)) return false;
    for (size_t t = 1; t < S.residual_history.size(); ++t)
      if (S.residual_history[t] <= S.residual_history[t - 1]) return false;
  }
  RingTower tower(R);
  TorusContext ctx = make_torus_context(tower, 1, 6);
  for (int i = 0; i < 10; ++i) {
    const SigmaModule M =
        random_ordinary_rank2(R, 2, 1, 64, 4000 + static_cast<uint64_t>(i));
    FibreCache cache;
    for (long k = 1; k <= 4; ++k) {
      const FactorizationCheck fc = factorization_check(M, BigInt(k), 6, ctx, cache);
      if (!fc.agree.ok || fc.agree.modulus < 8 || fc.agree.upto < 6) return false;
    }
  }
  return true;
}

// --- criterion 6: kloosterman fibres: degree closure and slope staircase -------

bool crit_kloosterman_fibres() {
  struct Case {
    int p, n;
    Ram ram;
  };
  const std::vector<Case> cases = {
      {2, 1, Ram::Trivial}, {2, 2, Ram::Trivial}, {3, 1, Ram::Cyclotomic}};
  for (const Case& cs : cases) {
    const int N = std::max(12, kloosterman_ring_precision(cs.n, cs.p, 2));
    const RingPtr R = LocalRing::make(cs.p, 1, cs.ram, N);
    RingTower tower(R);
    const auto points = enumerate_closed_points(1, cs.p, 2, tower);
    for (const ClosedPoint& pt : points) {
      const KloostermanFibre f = fibre_polynomial(cs.n, pt);
      if (static_cast<int>(f.poly.size()) != cs.n + 2) return false;
      if (f.poly.back().is_zero()) return false;  // degree exactly n + 1
      if (!f.degree_check) return false;
      const SperberReport rep = verify_sperber(f, R);
      if (!rep.pass || !rep.product_ord_ok) return false;
    }
  }
  return true;
}

// --- criterion 7: unit root zeta, three pipelines -------------------------------

bool crit_unit_root_pipelines() {
  const RingPtr R = ring(2, 1, 12);
  RingTower tower(R);
  TorusContext ctx = make_torus_context(tower, 1, 5);
  const long D = 5;
  for (int i = 0; i < 5; ++i) {
    const SigmaModule M = random_normalized_rank2(
        R, 2, 1, 32, 7000 + static_cast<uint64_t>(i), /*constant_only=*/i < 3);
    FibreCache cache;
    const UnitRootFibreMap fibres = unit_root_fibres(M, ctx, cache);
    const Normalization norm = normalize_unit_monomial(slope_zero_decompose(M));
    for (long k : {1L, 2L, 5L}) {
      const LSeries direct = unit_root_L(fibres, BigInt(k), D, ctx);
      auto steps = limiting_sequence_L(M, BigInt(k), {1, 2, 3, 4}, D, ctx, cache);
      if (steps.back().observed_ord < 6) {
        auto more = limiting_sequence_L(M, BigInt(k), {5}, D, ctx, cache);
        steps.push_back(more.back());
      }
      const LSeries closed = explicit_formula_L(norm, BigInt(k), D, 10, ctx, cache);
      if (steps.back().observed_ord < 6) return false;
      if (ls_diff_ord(closed, direct) < 6) return false;
      if (ls_diff_ord(closed, steps.back().L) < 6) return false;
    }
  }
  return true;
}

// --- criterion 8: limiting module congruence schedule ---------------------------

bool crit_limiting_congruence() {
  for (long p : {2L, 3L}) {
    const RingPtr R = ring(p, 1, 12);
    const Normalization norm = reduced_shape(R, static_cast<int>(p), 3, 5, 7);
    for (long m = 1; m <= 4; ++m) {
      const CongruenceReport rep = limiting_congruence_check(norm, BigInt(2), m, 6);
      if (!rep.pass) return false;
      if (p == 2 && rep.sharpened_applies) return false;  // e = p - 1
      if (p == 3) {
        if (!rep.sharpened_applies) return false;  // e = 1 < p - 1
        if (!rep.sharpened_pass) return false;
      }
    }
  }
  return true;
}

// --- criterion 9: continuity in the exponent on the kloosterman family ---------

bool crit_continuity() {
  const int N = std::max(12, kloosterman_ring_precision(1, 2, 3));
  const RingPtr R = ring(2, 1, N);
  RingTower tower(R);
  TorusContext ctx = make_torus_context(tower, 1, 3);
  const UnitRootFibreMap map = kloosterman_unit_root_map(1, ctx);
  for (long m = 1; m <= 4; ++m) {
    const BigInt k2 = BigInt(2) + pow_big(BigInt(2), static_cast<unsigned long>(m));
    const ContinuityReport rep = continuity_check(map, BigInt(2), k2, m, 3, ctx);
    if (!rep.pass) return false;
  }
  return true;
}

// --- criterion 10: higher-slope limits vs the gamma-ratio product ---------------

bool crit_higher_slope() {
  const RingPtr R = ring(2, 1, 12);
  RingTower tower(R);
  TorusContext ctx = make_torus_context(tower, 1, 4);
  const long D = 4;
  for (long uc : {1L, 5L}) {  // B = diag(1, pi * uc * X)
    const int U = 4;
    LMat B(2);
    B[0] = {lconst(R, 1, U, 1), TruncatedLaurent::zero(R, 1, U)};
    B[1] = {TruncatedLaurent::zero(R, 1, U), lmono(R, 1, U, {1}, uc).mul_pi(1)};
    const SigmaModule M = make_module(2, B);
    FibreCache cache;
    for (long k : {1L, 2L}) {
      // independent reference: gamma_1/gamma_0 from the fibre determinant and
      // the Hensel unit root at every closed point
      LSeries oracle = ls_one(R, D);
      for (const ClosedPoint& x : ctx.points) {
        const long dx = x.degree;
        if (dx > D) continue;
        const NuclearConstMatrix Phi = fibre_frobenius(M, x, tower);
        const CharSeries cs = char_series(Phi, 2);
        const PAdicScalar g0 = hensel_unit_root(cs.c);
        const PAdicScalar alpha =
            (cs.c[2].divexact_pi(dx) * g0.invert_unit()).descend_to_base(R);
        std::vector<PAdicScalar> cf(static_cast<size_t>(D) + 1, PAdicScalar::zero(R));
        cf[0] = PAdicScalar::one(R);
        cf[static_cast<size_t>(dx)] = PAdicScalar::zero(R) - alpha.pow(BigInt(k));
        oracle = ls_mul(oracle, ls_inverse(ls_from_coeffs(R, cf, 12, D, "hand local")));
      }
      const auto steps = higher_slope_limit_L(M, 1, k, {1, 2, 3}, D, ctx, cache);
      if (steps.back().observed_ord < 6) return false;
      if (ls_diff_ord(steps.back().L, oracle) < 6) return false;
    }
  }
  return true;
}

// --- criterion 11: CLI determinism ----------------------------------------------

std::map<std::string, std::string> snapshot_dir(const fs::path& dir) {
  std::map<std::string, std::string> snap;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) {
      std::ifstream in(e.path(), std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      snap.emplace(fs::relative(e.path(), dir).string(), ss.str());
    }
  return snap;
}

bool crit_cli_determinism(const std::string& cli, const fs::path& scratch) {
  if (cli.empty()) return false;
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"trace-check", "--count 5"}, {"identities", "--count 5"},
      {"hodge-newton", "--U 32"},   {"kloosterman", ""},
      {"unitroot", "--U 32 --G 6"}, {"audit", ""},
  };
  for (const auto& [sub, args] : runs) {
    const fs::path dir = scratch / sub;
    std::map<std::string, std::string> first;
    for (int round = 0; round < 2; ++round) {
      fs::remove_all(dir);
      fs::create_directories(dir);
      std::ostringstream cmd;
      cmd << cli << ' ' << sub;
      if (!args.empty()) cmd << ' ' << args;
      cmd << " --out " << (dir / "out").string() << " > "
          << (dir / "stdout.txt").string() << " 2>&1";
      if (std::system(cmd.str().c_str()) != 0) return false;
      auto snap = snapshot_dir(dir);
      if (round == 0) {
        first = std::move(snap);
      } else if (snap != first) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const fs::path scratch = argc > 2 ? fs::path(argv[2]) : fs::path("acceptance_scratch");
  std::error_code ec;
  fs::create_directories(scratch, ec);

  struct Criterion {
    int id;
    const char* label;
    std::function<bool()> fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "trivial module: both pipelines give the exact zeta", crit_trivial_zeta},
      {2, "euler product equals the trace formula on random modules", crit_euler_vs_fredholm},
      {3, "trace and determinant power identities", crit_power_identities},
      {4, "L-function power decomposition", crit_l_power},
      {5, "slope-zero split and unit/twisted factorization", crit_hodge_newton},
      {6, "kloosterman fibres: degree closure and slope staircase", crit_kloosterman_fibres},
      {7, "unit root zeta: three pipelines agree", crit_unit_root_pipelines},
      {8, "limiting module congruence schedule", crit_limiting_congruence},
      {9, "unit root continuity in the exponent", crit_continuity},
      {10, "higher-slope limit matches the gamma-ratio product", crit_higher_slope},
      {11, "CLI subcommands byte-identical across reruns",
       [&] { return crit_cli_determinism(cli, scratch); }},
  };

  bool all = true;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string note;
    try {
      ok = c.fn();
    } catch (const std::exception& e) {
      ok = false;
      note = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("ACCEPTANCE %2d %-55s %s (%.1fs)\n", c.id, c.label,
                ok ? "PASS" : "FAIL", secs);
    if (!note.empty()) std::fprintf(stderr, "  criterion %d threw: %s\n", c.id, note.c_str());
    std::fflush(stdout);
    all = all && ok;
  }
  return all ? 0 : 1;
}
