#pragma once
// Nuclear sigma-modules over the truncated Laurent ring: a square matrix B
// whose column j gives the coordinates of phi(e_j), phi semilinear over
// sigma(X^u) = X^{qu}.  Nuclearity bookkeeping is the d/h data: d_i = last
// column index not yet divisible by pi^i, h_i = number of columns of level i,
// where level(j) = min over columns >= j of the column ord (suffix minimum, so
// the sequence is usable even when the basis is not perfectly сorted).
//
// Algebra operations (direct sum, tensor, Sym^k, Ext^k) produce bases sorted
// by (total structural level, lex), which keeps the fibre/functor diagrams
// commuting entry-for-entry, and their h-sequences are reproduced by the
// combinatorial rules h_dsum / h_tensor / h_sym / h_ext.
//
// NuclearConstMatrix is the fibre-level object (plain p-adic entries, possibly
// over an unramified extension): same nuclear bookkeeping, plus trace/det/
// inverse/power and the characteristic power series det(I - T E) computed by
// Newton's identities with an explicit precision ledger.

#include <climits>
#include <vector>

#include "dworklab/laurent.hpp"
#include "dworklab/torus_points.hpp"

namespace dworklab {

inline constexpr long kNoTail = LONG_MAX;

struct SigmaModule {
  int q = 0;
  int n = 0;
  RingPtr R;
  LMat B;
  std::vector<long> d_seq;      // d_1, d_2, ... (0-indexed storage)
  std::vector<long> h_seq;      // h_0, h_1, ...
  std::vector<long> col_level;  // structural level per column
  long tail_level = kNoTail;    // divisibility floor of omitted columns
  long uid = -1;                // identity for fibre caching; set by make_module

  int rank() const { return B.empty() ? 0 : static_cast<int>(B[0].size()); }
};

// Builds the module and computes d/h/levels from the stored matrix.
// tail_level != kNoTail marks a truncated-infinite module: the matrix shown is
// the block on columns of level <= tail_level-1, everything omitted is
// divisible by pi^{tail_level}.
SigmaModule make_module(int q, const LMat& B, long tail_level = kNoTail);

// min ord over all entries (== min column ord).
long ord_of(const SigmaModule& M);

// Weakest tail certificate uniformly valid for every entry of B.
TailCert module_cert(const SigmaModule& M);

// B' = U^{-1} B sigma(U); det U must reduce to a single monomial mod pi.
SigmaModule change_basis(const SigmaModule& M, const LMat& U);

enum class ModOp { DirectSum, Tensor };
SigmaModule module_algebra(const SigmaModule& A, const SigmaModule& B, ModOp op);

enum class PowOp { Sym, Ext };
SigmaModule power_algebra(const SigmaModule& M, int k, PowOp op);

// ---- basis-sequence arithmetic ---------------------------------------------
std::vector<long> h_dsum(const std::vector<long>& a, const std::vector<long>& b);
std::vector<long> h_tensor(const std::vector<long>& a, const std::vector<long>& b);
std::vector<long> h_sym(const std::vector<long>& h, int k);
std::vector<long> h_ext(const std::vector<long>& h, int k);

// ---- fibre level ------------------------------------------------------------

struct NuclearConstMatrix {
  RingPtr R;
  std::vector<std::vector<PAdicScalar>> a;
  std::vector<long> col_level;
  long tail_level = kNoTail;
  long modulus = 0;  // entries certified mod pi^modulus

  int dim() const { return static_cast<int>(a.size()); }
  static NuclearConstMatrix identity(const RingPtr& R, int m);
  static NuclearConstMatrix from_entries(const RingPtr& R,
                                         std::vector<std::vector<PAdicScalar>> a,
                                         long tail_level = kNoTail);
};

NuclearConstMatrix ncm_mul(const NuclearConstMatrix& A, const NuclearConstMatrix& B);
NuclearConstMatrix ncm_add(const NuclearConstMatrix& A, const NuclearConstMatrix& B);
PAdicScalar ncm_trace(const NuclearConstMatrix& A);
PAdicScalar ncm_det(const NuclearConstMatrix& A);  // Laplace memo, dim <= 12
NuclearConstMatrix ncm_inverse(const NuclearConstMatrix& A);  // Gauss, unit pivots
NuclearConstMatrix ncm_pow(const NuclearConstMatrix& A, const BigInt& k);
NuclearConstMatrix ncm_kron(const NuclearConstMatrix& A, const NuclearConstMatrix& B);
NuclearConstMatrix ncm_sym(const NuclearConstMatrix& A, int k);
NuclearConstMatrix ncm_ext(const NuclearConstMatrix& A, int k);
bool ncm_congruent(const NuclearConstMatrix& A, const NuclearConstMatrix& B, long t);

// Frobenius at a closed point of degree d over F_q: the twisted product
// B(x) B(x^q) ... B(x^{q^{d-1}}) with entries in the degree-(a*d) unramified
// extension (q = p^a).  Inherits the module's structural levels.
NuclearConstMatrix fibre_frobenius(const SigmaModule& M, const ClosedPoint& x,
                                   RingTower& tower);

// det(I - T E) mod T^{D+1} by the Newton-identity recursion on traces of
// powers; modulus ledger accounts for the exact divisions by j and for the
// truncated-infinite tail.  Cross-checked against the exterior-power
// expansion whenever dim <= 4.
struct CharSeries {
  std::vector<PAdicScalar> c;  // c[0] = 1, length D+1
  long modulus = 0;
};
CharSeries char_series(const NuclearConstMatrix& E, long D);

// Same series, but with Tr(E^m) supplied by a callback — used to exploit
// Tr((A (x) B)^m) = Tr(A^m) Tr(B^m) without forming Kronecker products.
CharSeries char_series_from_traces(const RingPtr& R,
                                   const std::vector<PAdicScalar>& traces,
                                   long D, long base_modulus);

}  // namespace dworklab
