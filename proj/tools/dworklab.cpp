// dworklab: experiment runner for L-functions of nuclear sigma-modules over
// the torus and their unit root zeta functions.
//
// Subcommands
//   trace-check   Euler product vs Fredholm determinant agreement
//   identities    Newton-Waring trace / determinant identity fuzzing
//   hodge-newton  slope-zero splitting and the k-power factorization
//   kloosterman   fibre polynomials, slope staircase, unit root map
//   unitroot      three-pipeline unit root zeta comparison + continuity
//   audit         log-decay valuation audit of a module matrix
//
// Configuration: flat key=value file via --config, overridden by flags.
// Identical config + seed produce byte-identical artifacts (summary.txt,
// series.json, polygon.csv, congruence.json in --out as applicable).
// Exit status: 0 all checks pass, 1 some check failed, 2 config/budget error.

#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dworklab/kloosterman.hpp"
#include "dworklab/random_modules.hpp"
#include "dworklab/serialize.hpp"
#include "dworklab/unit_root.hpp"

namespace dw = dworklab;
using dw::BigInt;
using dw::BigRat;
using dw::Json;

namespace {

// ---------------------------------------------------------------------------
// configuration

struct Config {
  std::string subcommand;
  std::string id;  // defaults to the subcommand name
  std::string out = "out";
  std::string ram = "auto";  // auto | trivial | cyclotomic
  int p = 2;
  int n = 1;
  int q = 0;   // 0 = same as p (the artifact fixes q = p)
  int dmax = 2;
  int N = 0;   // 0 = auto (12; kloosterman picks its certified precision)
  long D = 6;
  int U = 2;
  long UF = -1;  // Fredholm block radius; -1 = derive from the module
  int G = 6;     // limiting-module monomial degree cap
  int imax = 4;  // exterior-layer cap where a product index must be cut
  std::uint64_t seed = 1;
  // subcommand-specific
  long count = 20;  // identities: number of random matrices; trace-check: modules
  long k = 2;       // unitroot: power of the unit root
  long kmax = 3;    // hodge-newton: factorization checked for k = 1..kmax
  long mmax = 3;    // unitroot: limit steps m = 1..mmax
  long smax = 2;    // unitroot: slope rows explored
  std::string c = "2";      // audit: decay constant (rational "a" or "a/b")
  std::string eps = "1/2";  // audit: slack
  bool example = false;     // hodge-newton: use the constant [[1,0],[1,pi]] case

  dw::Ram ram_choice() const {
    if (ram == "trivial") return dw::Ram::Trivial;
    if (ram == "cyclotomic") return dw::Ram::Cyclotomic;
    // auto: Kloosterman embeddings need zeta_p for odd p; elsewhere stay plain
    if (subcommand == "kloosterman") return p == 2 ? dw::Ram::Trivial : dw::Ram::Cyclotomic;
    return dw::Ram::Trivial;
  }
};

bool is_prime(int p) {
  if (p < 2) return false;
  for (int t = 2; t * t <= p; ++t)
    if (p % t == 0) return false;
  return true;
}

BigRat parse_rat(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return BigRat(BigInt(s));
  const BigInt num(s.substr(0, slash));
  const BigInt den(s.substr(slash + 1));
  dw::require(den > 0, dw::Err::BadInput, "rational denominator must be positive: " + s);
  return BigRat(num, den);
}

void resolve(Config& cfg) {
  dw::require(is_prime(cfg.p) && cfg.p <= 97, dw::Err::BadInput, "p must be a prime <= 97");
  if (cfg.q == 0) cfg.q = cfg.p;
  dw::require(cfg.q == cfg.p, dw::Err::BadInput, "this artifact fixes q = p");
  dw::require(cfg.n >= 1 && cfg.n <= 4, dw::Err::BadInput, "n must be in 1..4");
  dw::require(cfg.dmax >= 1 && cfg.dmax <= 8, dw::Err::BadInput, "dmax must be in 1..8");
  dw::require(cfg.D >= 1 && cfg.D <= 64, dw::Err::BadInput, "D must be in 1..64");
  dw::require(cfg.U >= 1 && cfg.U <= 1024, dw::Err::BadInput, "U must be in 1..1024");
  double box = 1;
  for (int i = 0; i < cfg.n; ++i) box *= 2.0 * cfg.U + 1;
  dw::require(box <= 2e6, dw::Err::BudgetExceeded, "support box (2U+1)^n too large");
  dw::require(cfg.G >= 2 && cfg.G <= 24, dw::Err::BadInput, "G must be in 2..24");
  dw::require(cfg.imax >= 1, dw::Err::BadInput, "imax must be positive");
  dw::require(cfg.count >= 1 && cfg.count <= 10000, dw::Err::BadInput, "count must be in 1..10000");
  dw::require(cfg.kmax >= 1 && cfg.mmax >= 1 && cfg.smax >= 0, dw::Err::BadInput,
              "kmax/mmax must be positive, smax nonnegative");
  if (cfg.id.empty()) cfg.id = cfg.subcommand;
  if (cfg.subcommand == "kloosterman") {
    const dw::Ram r = cfg.ram_choice();
    dw::require((cfg.p == 2 && r == dw::Ram::Trivial) || (cfg.p > 2 && r == dw::Ram::Cyclotomic),
                dw::Err::BadInput,
                "kloosterman embeddings need trivial ramification for p = 2 and "
                "cyclotomic for odd p");
    if (cfg.N == 0) cfg.N = dw::kloosterman_ring_precision(cfg.n, cfg.p, cfg.dmax);
  }
  if (cfg.N == 0) cfg.N = 12;
  dw::require(cfg.N >= 2 && cfg.N <= 256, dw::Err::BadInput, "N must be in 2..256");
  if (cfg.ram == "auto") cfg.ram = cfg.ram_choice() == dw::Ram::Trivial ? "trivial" : "cyclotomic";
}

Json config_to_json(const Config& cfg) {
  Json j;
  j["subcommand"] = cfg.subcommand;
  j["id"] = cfg.id;
  j["p"] = cfg.p;
  j["ram"] = cfg.ram;
  j["N"] = cfg.N;
  j["n"] = cfg.n;
  j["q"] = cfg.q;
  j["dmax"] = cfg.dmax;
  j["D"] = cfg.D;
  j["U"] = cfg.U;
  j["UF"] = cfg.UF;
  j["G"] = cfg.G;
  j["imax"] = cfg.imax;
  j["seed"] = cfg.seed;
  j["count"] = cfg.count;
  j["k"] = cfg.k;
  j["kmax"] = cfg.kmax;
  j["mmax"] = cfg.mmax;
  j["smax"] = cfg.smax;
  j["c"] = cfg.c;
  j["eps"] = cfg.eps;
  j["example"] = cfg.example;
  j["out"] = cfg.out;
  return j;
}

std::string config_block(const Config& cfg) {
  std::ostringstream os;
  os << "[config]\n";
  const Json j = config_to_json(cfg);
  for (const auto& [key, value] : j.items())
    os << "  " << key << " = " << (value.is_string() ? value.get<std::string>() : value.dump())
       << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// report accumulation

struct Report {
  explicit Report(const Config& cfg) : cfg_(cfg) {
    text_ << config_block(cfg) << "\n";
    series_json_["config"] = config_to_json(cfg);
    series_json_["series"] = Json::array();
    cong_json_["config"] = config_to_json(cfg);
  }

  void line(const std::string& s) { text_ << s << "\n"; }

  void check(const std::string& label, bool ok) {
    text_ << (ok ? "PASS" : "FAIL") << "  " << label << "\n";
    if (!ok) any_fail_ = true;
  }

  // Prints the ledger in the summary and appends the full series to JSON.
  void series(const std::string& name, const dw::LSeries& L) {
    text_ << "[series " << name << "]  modulus=pi^" << L.modulus << "  exact_upto=T^"
          << L.exact_upto << "  D=" << L.D << "  provenance=" << L.provenance << "\n";
    std::ostringstream cs;
    for (long j = 0; j <= L.D; ++j) cs << (j ? ", " : "") << L.c[static_cast<size_t>(j)].to_string();
    text_ << "  coeffs: " << cs.str() << "\n";
    Json item = dw::lseries_to_json(L);
    item["name"] = name;
    series_json_["series"].push_back(std::move(item));
  }

  Json& congruence() { return cong_json_; }
  bool any_fail() const { return any_fail_; }

  void write(bool with_series, bool with_polygon, bool with_congruence,
             const std::string& polygon_csv = {}) const {
    namespace fs = std::filesystem;
    fs::create_directories(cfg_.out);
    const fs::path base(cfg_.out);
    dw::write_text_file((base / "summary.txt").string(),
                        text_.str() + (any_fail_ ? "\nRESULT: FAIL\n" : "\nRESULT: PASS\n"));
    if (with_series) dw::write_text_file((base / "series.json").string(), series_json_.dump(2) + "\n");
    if (with_polygon) dw::write_text_file((base / "polygon.csv").string(), polygon_csv);
    if (with_congruence)
      dw::write_text_file((base / "congruence.json").string(), cong_json_.dump(2) + "\n");
  }

 private:
  const Config& cfg_;
  std::ostringstream text_;
  Json series_json_;
  Json cong_json_;
  bool any_fail_ = false;
};

dw::RingPtr base_ring(const Config& cfg) {
  return dw::LocalRing::make(cfg.p, 1, cfg.ram_choice(), cfg.N);
}

// Apparent Newton polygon of an L-series, slopes in ord_p units per T-degree.
dw::NewtonPolygon series_polygon(const dw::LSeries& L) {
  std::vector<std::optional<BigRat>> ords;
  for (long j = 0; j <= L.exact_upto; ++j) {
    const long o = L.c[static_cast<size_t>(j)].ord_pi();
    if (o >= L.modulus) ords.emplace_back(std::nullopt);
    else ords.emplace_back(BigRat(o));
  }
  return dw::newton_polygon(ords, BigRat(L.R->e()));
}

// ---------------------------------------------------------------------------
// subcommands

int run_trace_check(const Config& cfg) {
  Report rep(cfg);
  const dw::RingPtr R = base_ring(cfg);
  dw::RingTower tower(R);
  dw::TorusContext ctx = dw::make_torus_context(tower, cfg.n, cfg.dmax);
  dw::FibreCache cache;

  // the trivial module: B = [1]; its L-function is the zeta of the torus
  const dw::LMat B1{{dw::TruncatedLaurent::constant(R, cfg.n, cfg.U, dw::PAdicScalar::one(R))}};
  const dw::SigmaModule triv = dw::make_module(cfg.q, B1);
  const dw::LSeries le = dw::euler_L(triv, BigInt(1), cfg.D, ctx, cache);
  const dw::FredholmResult fr = dw::fredholm_L(triv, cfg.D, cfg.UF);
  const dw::LAgree ag = dw::ls_agree(le, fr.L);
  rep.series("euler/trivial", le);
  rep.series("fredholm/trivial", fr.L);
  rep.line("trivial agree: upto=T^" + std::to_string(ag.upto) + " modulus=pi^" +
           std::to_string(ag.modulus) + " first_mismatch=" + std::to_string(ag.first_mismatch));
  rep.check("trivial module: euler == fredholm", ag.ok);

  if (cfg.n == 1) {
    // closed form (1 - T)/(1 - pT): a_0 = 1, a_j = p^j - p^{j-1}
    bool closed = true;
    for (long j = 0; j <= fr.L.D; ++j) {
      BigInt a = j == 0 ? BigInt(1)
                        : dw::pow_big(BigInt(cfg.p), j) - dw::pow_big(BigInt(cfg.p), j - 1);
      const dw::PAdicScalar want = dw::PAdicScalar::from_int(R, a);
      if (dw::diff_ord(fr.L.c[static_cast<size_t>(j)], want) < fr.L.modulus) closed = false;
    }
    rep.check("fredholm matches (1-T)/(1-" + std::to_string(cfg.p) + "T) mod pi^" +
                  std::to_string(fr.L.modulus),
              closed);
  }

  for (long i = 0; i < cfg.count; ++i) {
    const int rank = 1 + static_cast<int>(i % 3);
    const dw::SigmaModule M =
        dw::random_over_module(R, cfg.q, cfg.n, rank, cfg.U, cfg.seed + static_cast<std::uint64_t>(i));
    const dw::LSeries a = dw::euler_L(M, BigInt(1), cfg.D, ctx, cache);
    const dw::FredholmResult b = dw::fredholm_L(M, cfg.D, cfg.UF);
    const dw::LAgree g = dw::ls_agree(a, b.L);
    rep.check("random OVER module #" + std::to_string(i) + " rank " + std::to_string(rank) +
                  ": euler == fredholm (T^" + std::to_string(g.upto) + ", pi^" +
                  std::to_string(g.modulus) + ")",
              g.ok);
    if (i == 0) {
      rep.series("euler/random0", a);
      rep.series("fredholm/random0", b.L);
    }
  }
  rep.write(/*series=*/true, /*polygon=*/false, /*congruence=*/false);
  return rep.any_fail() ? 1 : 0;
}

int run_identities(const Config& cfg) {
  Report rep(cfg);
  const dw::RingPtr R = base_ring(cfg);
  const long tol = std::min<long>(8, cfg.N);

  // hand case: E = diag(1, 2), k = 2 -> Tr(E^2) = 5, det(I - T E^2) = (1-T)(1-4T)
  {
    std::vector<std::vector<dw::PAdicScalar>> a(2, std::vector<dw::PAdicScalar>());
    a[0] = {dw::PAdicScalar::one(R), dw::PAdicScalar::zero(R)};
    a[1] = {dw::PAdicScalar::zero(R), dw::PAdicScalar::from_int(R, BigInt(2))};
    const dw::NuclearConstMatrix E = dw::NuclearConstMatrix::from_entries(R, a);
    const dw::WaringPair w = dw::newton_waring_check_41(E, 2);
    rep.check("diag(1,2) k=2: Tr(E^2) = 5",
              w.lhs == dw::PAdicScalar::from_int(R, BigInt(5)) && w.lhs == w.rhs);
    const dw::DetDecomp d = dw::det_power_decomposition_check(E, 2, 3);
    bool det_ok = d.lhs.c[0] == dw::PAdicScalar::one(R) &&
                  d.lhs.c[1] == dw::PAdicScalar::from_int(R, BigInt(-5)) &&
                  d.lhs.c[2] == dw::PAdicScalar::from_int(R, BigInt(4)) && d.lhs.c[3].is_zero();
    rep.check("diag(1,2) k=2: det(I - T E^2) = (1-T)(1-4T)", det_ok);
    rep.series("det/diag12", d.lhs);
  }

  long passed = 0;
  Json cases = Json::array();
  for (long i = 0; i < cfg.count; ++i) {
    dw::ModuleRng pick(cfg.seed * 1000003ULL + static_cast<std::uint64_t>(i));
    const int dim = static_cast<int>(pick.uniform(1, 6));
    const long k = pick.uniform(1, 6);
    const dw::NuclearConstMatrix E =
        dw::random_nuclear_const(R, dim, cfg.seed + 7919ULL * static_cast<std::uint64_t>(i));
    const dw::WaringPair w1 = dw::newton_waring_check_41(E, k);
    const dw::WaringPair w2 = dw::newton_waring_check_42(E, k);
    const dw::DetDecomp dd = dw::det_power_decomposition_check(E, k, std::min<long>(cfg.D, dim + 2));
    const dw::LAgree full = dw::ls_agree(dd.lhs, dd.rhs_full);
    const dw::LAgree red = dw::ls_agree(dd.lhs, dd.rhs_reduced);
    const long o1 = dw::diff_ord(w1.lhs, w1.rhs);
    const long o2 = dw::diff_ord(w2.lhs, w2.rhs);
    const bool ok = o1 >= tol && o2 >= tol && full.ok && full.modulus >= tol && red.ok &&
                    red.modulus >= tol;
    if (ok) ++passed;
    else rep.check("matrix #" + std::to_string(i) + " dim=" + std::to_string(dim) +
                       " k=" + std::to_string(k),
                   false);
    Json entry;
    entry["i"] = i;
    entry["dim"] = dim;
    entry["k"] = k;
    entry["trace_identity_ord"] = o1;
    entry["trace_identity_reduced_ord"] = o2;
    entry["det_full"] = dw::agree_to_json(full);
    entry["det_reduced"] = dw::agree_to_json(red);
    entry["ok"] = ok;
    cases.push_back(std::move(entry));
  }
  rep.congruence()["cases"] = std::move(cases);
  rep.line(std::to_string(passed) + "/" + std::to_string(cfg.count) +
           " random nuclear matrices passed all identities mod pi^" + std::to_string(tol));
  rep.check("identity fuzz suite", passed == cfg.count);
  rep.write(/*series=*/true, /*polygon=*/false, /*congruence=*/true);
  return rep.any_fail() ? 1 : 0;
}

int run_hodge_newton(const Config& cfg) {
  Report rep(cfg);
  const dw::RingPtr R = base_ring(cfg);
  dw::RingTower tower(R);
  dw::TorusContext ctx = dw::make_torus_context(tower, cfg.n, cfg.dmax);
  dw::FibreCache cache;

  dw::SigmaModule M = [&] {
    if (!cfg.example) return dw::random_ordinary_rank2(R, cfg.q, cfg.n, cfg.U, cfg.seed);
    const auto c = [&](long v) {
      return dw::TruncatedLaurent::constant(R, cfg.n, cfg.U, dw::PAdicScalar::from_int(R, BigInt(v)));
    };
    const auto pi1 =
        dw::TruncatedLaurent::constant(R, cfg.n, cfg.U, dw::PAdicScalar::one(R).mul_pi(1));
    return dw::make_module(cfg.q, dw::LMat{{c(1), c(0)}, {c(1), pi1}});
  }();

  const dw::SlopeZeroSplit split = dw::slope_zero_decompose(M);
  {
    std::ostringstream os;
    os << "slope-zero split: h0=" << split.h0 << "  residual_ord=pi^" << split.residual_ord
       << "  history=";
    for (size_t t = 0; t < split.residual_history.size(); ++t)
      os << (t ? "," : "") << split.residual_history[t];
    rep.line(os.str());
  }
  bool gains = true;
  for (size_t t = 1; t < split.residual_history.size(); ++t)
    gains = gains && split.residual_history[t] > split.residual_history[t - 1];
  rep.check("residual gains at least one pi power per iteration", gains);
  if (cfg.example) {
    // closed form: E10 = (1 - pi)^{-1} = 1 + pi + pi^2 + ...
    dw::PAdicScalar want = dw::PAdicScalar::one(R) - dw::PAdicScalar::one(R).mul_pi(1);
    want = want.invert_unit();
    const auto got = split.E10[0][0].coeff(dw::Expo(static_cast<size_t>(cfg.n), 0));
    const long o = dw::diff_ord(got, want);
    rep.check("example E10 == (1-pi)^{-1} to ledger (ord " + std::to_string(o) + ")",
              o >= std::min<long>(10, split.E10[0][0].scalar_modulus()));
  }

  Json factors = Json::array();
  for (long k = 1; k <= cfg.kmax; ++k) {
    const dw::FactorizationCheck fc = dw::factorization_check(M, BigInt(k), cfg.D, ctx, cache);
    rep.check("L(phi^" + std::to_string(k) + ",T) = L(phi_0^k,T) * L(psi^k,pi^k T)  (T^" +
                  std::to_string(fc.agree.upto) + ", pi^" + std::to_string(fc.agree.modulus) + ")",
              fc.agree.ok);
    if (k == 1) {
      rep.series("lhs/k1", fc.lhs);
      rep.series("unit/k1", fc.unit_part);
      rep.series("twisted/k1", fc.twisted);
    }
    Json row;
    row["k"] = k;
    row["agree"] = dw::agree_to_json(fc.agree);
    factors.push_back(std::move(row));
  }
  rep.congruence()["residual_history"] = split.residual_history;
  rep.congruence()["factorization"] = std::move(factors);
  rep.write(/*series=*/true, /*polygon=*/false, /*congruence=*/true);
  return rep.any_fail() ? 1 : 0;
}

int run_kloosterman(const Config& cfg) {
  Report rep(cfg);
  const dw::RingPtr R = base_ring(cfg);
  dw::RingTower tower(R);
  // parameter space: the 1-torus of ybar values
  dw::TorusContext ctx = dw::make_torus_context(tower, 1, cfg.dmax);
  rep.line("ring: " + R->describe());
  rep.line("parameter fibres of degree <= " + std::to_string(cfg.dmax) + ": " +
           std::to_string(ctx.points.size()));

  std::ostringstream csv;
  csv << "fibre,degree,x,y_num,y_den\n";
  for (size_t i = 0; i < ctx.points.size(); ++i) {
    const dw::KloostermanFibre fibre = dw::fibre_polynomial(cfg.n, ctx.points[i]);
    const dw::SperberReport sp = dw::verify_sperber(fibre, R);
    std::ostringstream os;
    os << "fibre #" << i << " deg=" << fibre.point.degree << " rep=";
    for (size_t c = 0; c < fibre.point.rep.size(); ++c)
      os << (c ? "," : "") << fibre.point.rep[c];
    os << "  P(T)=";
    for (size_t j = 0; j < fibre.poly.size(); ++j)
      os << (j ? " + (" : "(") << fibre.poly[j].to_string() << ")T^" << j;
    rep.line(os.str());
    rep.check("fibre #" + std::to_string(i) + ": degree closure (deg P = n+1)",
              fibre.degree_check);
    rep.check("fibre #" + std::to_string(i) + ": slope staircase {0..n}, unit-ord total",
              sp.pass && sp.product_ord_ok);
    for (const std::string& note : sp.notes) rep.line("  note: " + note);
    for (const auto& [x, y] : sp.polygon.vertices)
      csv << i << ',' << fibre.point.degree << ',' << x << ','
          << dw::to_decimal(boost::multiprecision::numerator(y)) << ','
          << dw::to_decimal(boost::multiprecision::denominator(y)) << '\n';
  }

  const dw::UnitRootFibreMap roots = dw::kloosterman_unit_root_map(cfg.n, ctx);
  rep.line("unit root map: source=" + roots.source + " modulus=pi^" +
           std::to_string(roots.modulus));
  for (long k : {1L, cfg.k}) {
    const dw::LSeries L = dw::unit_root_L(roots, BigInt(k), cfg.D, ctx);
    rep.series("unitroot/k" + std::to_string(k), L);
    if (k == cfg.k) break;  // avoid duplicating k = 1 when cfg.k == 1
  }
  rep.write(/*series=*/true, /*polygon=*/true, /*congruence=*/false, csv.str());
  return rep.any_fail() ? 1 : 0;
}

int run_unitroot(const Config& cfg) {
  Report rep(cfg);
  const dw::RingPtr R = base_ring(cfg);
  dw::RingTower tower(R);
  dw::TorusContext ctx = dw::make_torus_context(tower, cfg.n, cfg.dmax);
  dw::FibreCache cache;

  const dw::SigmaModule M = dw::random_normalized_rank2(R, cfg.q, cfg.n, cfg.U, cfg.seed);
  const dw::SlopeZeroSplit split = dw::slope_zero_decompose(M);
  const dw::Normalization norm = dw::normalize_unit_monomial(split);
  rep.line("module: seeded normalized rank-2, h0=" + std::to_string(split.h0));

  // pipeline 1: direct Euler product over Hensel unit roots
  const dw::UnitRootFibreMap roots = dw::unit_root_fibres(M, ctx, cache);
  const dw::LSeries L1 = dw::unit_root_L(roots, BigInt(cfg.k), cfg.D, ctx);
  rep.series("direct/k" + std::to_string(cfg.k), L1);

  // pipeline 2: limit of L(phi^{k_m}, T)
  std::vector<long> m_list;
  for (long m = 1; m <= cfg.mmax; ++m) m_list.push_back(m);
  const auto steps = dw::limiting_sequence_L(M, BigInt(cfg.k), m_list, cfg.D, ctx, cache);
  std::vector<dw::LSeries> window;
  Json steps_json = Json::array();
  for (const auto& st : steps) {
    rep.line("limit m=" + std::to_string(st.m) + "  k_m=" + dw::to_decimal(st.k_m) +
             "  observed agreement ord=" + std::to_string(st.observed_ord) +
             "  (claim >= " + std::to_string(std::min<long>(st.m + 1, st.L.modulus)) + ")");
    window.push_back(st.L);
    Json row;
    row["m"] = st.m;
    row["k_m"] = dw::big_to_json(st.k_m);
    row["observed_ord"] = st.observed_ord;
    row["claimed_ord"] = std::min<long>(st.m + 1, st.L.modulus);
    steps_json.push_back(std::move(row));
  }
  bool limit_ok = true;
  for (const auto& st : steps)
    limit_ok = limit_ok && st.observed_ord >= std::min<long>(st.m + 1, st.L.modulus);
  rep.check("limiting sequence converges at the claimed rate", limit_ok);
  if (!steps.empty()) rep.series("limit/last", steps.back().L);

  // pipeline 3: closed-form product over limiting modules
  const dw::LSeries L3 = dw::explicit_formula_L(norm, BigInt(cfg.k), cfg.D, cfg.G, ctx, cache);
  rep.series("explicit/k" + std::to_string(cfg.k), L3);
  const long target13 = std::min({6L, L1.modulus, L3.modulus});
  const long o13 = dw::ls_diff_ord(L1, L3);
  rep.check("direct == explicit formula mod pi^" + std::to_string(target13) + " (observed " +
                std::to_string(o13) + ")",
            o13 >= target13);

  // continuity table on the unit root map
  Json cont = Json::array();
  bool cont_ok = true;
  for (long m = 1; m <= cfg.mmax; ++m) {
    const BigInt k2 = BigInt(cfg.k) + BigInt(cfg.p - 1) * dw::pow_big(BigInt(cfg.p), m);
    const dw::ContinuityReport cr = dw::continuity_check(roots, BigInt(cfg.k), k2, m, cfg.D, ctx);
    rep.line("continuity m=" + std::to_string(m) + ": claimed=" + std::to_string(cr.claimed) +
             " observed=" + std::to_string(cr.observed) + " compared_at=" +
             std::to_string(cr.compared_at) + (cr.pass ? " PASS" : " FAIL"));
    cont_ok = cont_ok && cr.pass;
    Json row;
    row["m"] = m;
    row["claimed"] = cr.claimed;
    row["observed"] = cr.observed;
    row["compared_at"] = cr.compared_at;
    row["pass"] = cr.pass;
    cont.push_back(std::move(row));
  }
  rep.check("continuity of k -> L_unit(k, T)", cont_ok);

  // limiting-module congruence table
  Json congr = Json::array();
  bool congr_ok = true;
  for (long m = 1; m <= std::min<long>(cfg.mmax, cfg.G - 1); ++m) {
    const dw::CongruenceReport cg = dw::limiting_congruence_check(norm, BigInt(cfg.k), m, cfg.G);
    rep.line("limiting congruence m=" + std::to_string(m) + ": k_m=" + dw::to_decimal(cg.k_m) +
             " claimed=" + std::to_string(cg.claimed) + " observed=" + std::to_string(cg.observed) +
             (cg.pass ? " PASS" : " FAIL"));
    congr_ok = congr_ok && cg.pass && (!cg.sharpened_applies || cg.sharpened_pass);
    Json row;
    row["m"] = m;
    row["k_m"] = dw::big_to_json(cg.k_m);
    row["claimed"] = cg.claimed;
    row["observed"] = cg.observed;
    row["pass"] = cg.pass;
    row["sharpened_applies"] = cg.sharpened_applies;
    row["sharpened"] = cg.sharpened;
    row["sharpened_pass"] = cg.sharpened_pass;
    congr.push_back(std::move(row));
  }
  rep.check("limiting-module congruence bound", congr_ok);

  // slope explorer over the limit window
  const dw::SlopeReport sl = dw::slope_degree_explore(window, cfg.smax);
  for (const auto& row : sl.rows)
    rep.line("slope s=" + std::to_string(row.s) + ": d_s=" + std::to_string(row.d_s) +
             (row.stable ? " stable" : " unstable") + (row.certified ? " certified" : ""));

  rep.congruence()["limit_steps"] = std::move(steps_json);
  rep.congruence()["continuity"] = std::move(cont);
  rep.congruence()["limiting_congruence"] = std::move(congr);

  std::ostringstream csv;
  const dw::NewtonPolygon poly = series_polygon(L1);
  csv << dw::polygon_to_csv(poly);
  rep.write(/*series=*/true, /*polygon=*/true, /*congruence=*/true, csv.str());
  return rep.any_fail() ? 1 : 0;
}

int run_audit(const Config& cfg) {
  Report rep(cfg);
  const dw::RingPtr R = base_ring(cfg);
  const BigRat c = parse_rat(cfg.c);
  const BigRat eps = parse_rat(cfg.eps);
  dw::require(c > 0 && eps > 0 && eps < c, dw::Err::BadInput, "audit needs 0 < eps < c");

  // construction saturating the bound: coefficient at X^u is pi^{ceil(c log_q |u|)}
  const BigInt cnum = boost::multiprecision::numerator(c);
  const BigInt cden = boost::multiprecision::denominator(c);
  const auto ceil_c_log = [&](long m) {  // smallest t >= 0 with q^{t*cden} >= m^{cnum}
    if (m <= 1) return 0L;
    const BigInt rhs = dw::pow_big(BigInt(m), cnum);
    long t = 0;
    while (dw::pow_big(BigInt(cfg.q), BigInt(t) * cden) < rhs) ++t;
    return t;
  };
  std::vector<std::pair<dw::Expo, dw::PAdicScalar>> entries;
  dw::Expo u(static_cast<size_t>(cfg.n), 0);
  const std::function<void(size_t)> fill = [&](size_t pos) {
    if (pos == u.size()) {
      const long o = std::min<long>(ceil_c_log(dw::l1(u)), cfg.N);
      entries.emplace_back(u, dw::PAdicScalar::one(R).mul_pi(o));
      return;
    }
    for (int v = -cfg.U; v <= cfg.U; ++v) {
      u[pos] = v;
      fill(pos + 1);
    }
    u[pos] = 0;
  };
  fill(0);
  const dw::TruncatedLaurent f =
      dw::TruncatedLaurent::make(R, cfg.n, cfg.U, entries, dw::TailCert::clog(c));
  const dw::SigmaModule M = dw::make_module(cfg.q, dw::LMat{{f}});

  const dw::ValuationAuditReport audit =
      dw::valuation_audit(M, c, eps, cfg.UF >= 0 ? static_cast<int>(cfg.UF) : 4 * cfg.U);
  rep.line("audit: c=" + cfg.c + " eps=" + cfg.eps + " N_eps=" + std::to_string(audit.N_eps) +
           " N_eps*=" + std::to_string(audit.N_eps_star));
  rep.line("floor: " + audit.floor_desc);
  rep.line("exceptional small columns: " + std::to_string(audit.exceptional.size()));
  for (const std::string& v : audit.violations) rep.line("violation: " + v);
  if (!audit.note.empty()) rep.line("note: " + audit.note);
  rep.check("log-decay valuation audit", audit.pass);

  Json aj;
  aj["pass"] = audit.pass;
  aj["c"] = dw::rat_to_json(audit.c);
  aj["eps"] = dw::rat_to_json(audit.eps);
  aj["N_eps"] = audit.N_eps;
  aj["N_eps_star"] = audit.N_eps_star;
  aj["floor"] = audit.floor_desc;
  aj["exceptional_count"] = audit.exceptional.size();
  aj["violations"] = audit.violations;
  rep.congruence()["audit"] = std::move(aj);
  rep.write(/*series=*/false, /*polygon=*/false, /*congruence=*/true);
  return rep.any_fail() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  CLI::App app{
      "dworklab: L-functions of nuclear sigma-modules over the torus, unit root "
      "zeta functions, and their cross-validation pipelines"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value configuration file (flags override)");

  app.add_option("--p", cfg.p, "prime p (the artifact fixes q = p)")->capture_default_str();
  app.add_option("--ram", cfg.ram, "ramification: auto|trivial|cyclotomic")
      ->check(CLI::IsMember({"auto", "trivial", "cyclotomic"}))
      ->capture_default_str();
  app.add_option("--N", cfg.N, "pi-adic working precision (0 = auto)")->capture_default_str();
  app.add_option("--n", cfg.n, "torus dimension")->capture_default_str();
  app.add_option("--q", cfg.q, "residue field size (0 = p)")->capture_default_str();
  app.add_option("--dmax", cfg.dmax, "closed points up to this degree")->capture_default_str();
  app.add_option("--D", cfg.D, "T-adic truncation of every series")->capture_default_str();
  app.add_option("--U", cfg.U, "Laurent support box radius")->capture_default_str();
  app.add_option("--UF", cfg.UF, "Fredholm block radius (-1 = derive)")->capture_default_str();
  app.add_option("--G", cfg.G, "limiting-module monomial degree cap")->capture_default_str();
  app.add_option("--imax", cfg.imax, "exterior-layer cap")->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for randomized module generation")
      ->capture_default_str();
  app.add_option("--out", cfg.out, "output directory")->capture_default_str();
  app.add_option("--id", cfg.id, "experiment id (default: subcommand)")->capture_default_str();
  app.add_option("--count", cfg.count, "number of random instances")->capture_default_str();
  app.add_option("--k", cfg.k, "unit root power")->capture_default_str();
  app.add_option("--kmax", cfg.kmax, "factorization checked for k = 1..kmax")
      ->capture_default_str();
  app.add_option("--mmax", cfg.mmax, "limit steps m = 1..mmax")->capture_default_str();
  app.add_option("--smax", cfg.smax, "slope rows explored")->capture_default_str();
  app.add_option("--c", cfg.c, "audit decay constant, rational a or a/b")->capture_default_str();
  app.add_option("--eps", cfg.eps, "audit slack, rational")->capture_default_str();
  app.add_flag("--example", cfg.example, "hodge-newton: use the constant [[1,0],[1,pi]] case");

  const std::vector<std::pair<std::string, std::string>> subs = {
      {"trace-check", "Euler product vs Fredholm determinant agreement"},
      {"identities", "Newton-Waring trace and determinant identity fuzzing"},
      {"hodge-newton", "slope-zero splitting and the k-power factorization"},
      {"kloosterman", "fibre polynomials, slope staircase, unit root map"},
      {"unitroot", "three-pipeline unit root zeta comparison"},
      {"audit", "log-decay valuation audit"}};
  for (const auto& [name, desc] : subs) app.add_subcommand(name, desc)->fallthrough();

  CLI11_PARSE(app, argc, argv);
  for (const auto& [name, desc] : subs)
    if (app.get_subcommand(name)->parsed()) cfg.subcommand = name;

  try {
    resolve(cfg);
    if (cfg.subcommand == "trace-check") return run_trace_check(cfg);
    if (cfg.subcommand == "identities") return run_identities(cfg);
    if (cfg.subcommand == "hodge-newton") return run_hodge_newton(cfg);
    if (cfg.subcommand == "kloosterman") return run_kloosterman(cfg);
    if (cfg.subcommand == "unitroot") return run_unitroot(cfg);
    if (cfg.subcommand == "audit") return run_audit(cfg);
    std::cerr << "unknown subcommand\n";
    return 2;
  } catch (const dw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
