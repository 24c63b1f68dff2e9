#pragma once
// Finite fields F_{p^m} with a deterministic modulus choice: the monic
// irreducible of degree m over F_p whose coefficient word (c_0 + c_1 p + ...
// + c_m p^m) is numerically smallest.  No lookup tables are shipped; the
// modulus is recomputed, so every run of every binary agrees on it.
//
// Elements are integer codes in [0, p^m): code = sum_i c_i p^i for the
// residue sum_i c_i x^i.  The code order doubles as the canonical total
// order used when a "smallest" element must be picked deterministically.

#include <memory>
#include <vector>

#include "dworklab/ints.hpp"

namespace dworklab {

class GF {
 public:
  // Table construction is O(q log q)-ish; refuse absurd sizes loudly.
  static constexpr long kMaxFieldSize = 1L << 22;

  GF(int p, int m);

  int p() const { return p_; }
  int m() const { return m_; }
  long q() const { return q_; }  // p^m
  const std::vector<int>& modulus() const { return modulus_; }

  long add(long a, long b) const;
  long sub(long a, long b) const;
  long neg(long a) const;
  long mul(long a, long b) const;
  long inv(long a) const;
  long pow(long a, const BigInt& e) const;
  // x -> x^(p^times), the arithmetic Frobenius iterated.
  long frobenius(long a, long times = 1) const;
  // Tr_{F_{p^m}/F_p}, returned as an integer in [0, p).
  int trace_to_prime(long a) const;

  std::vector<int> digits(long code) const;          // little-endian base-p
  long code_of(const std::vector<int>& digits) const;

  // Minimal polynomial over F_p of the element (monic, little-endian coeffs).
  std::vector<int> minimal_poly(long a) const;
  // All roots in this field of a polynomial with F_p coefficients, sorted by
  // code.  Scans the field; fine at the sizes this library accepts.
  std::vector<long> roots_of(const std::vector<int>& poly_over_fp) const;

  // Degree of the element over F_p (size of its Frobenius orbit).
  int degree_over_prime(long a) const;

 private:
  int p_;
  int m_;
  long q_;
  std::vector<int> modulus_;      // c_0..c_m, monic
  std::vector<int32_t> log_;      // log_[a] for a != 0, base g
  std::vector<int32_t> exp_;      // exp_[i] = g^i, i in [0, q-1)
  std::vector<int> basis_trace_;  // Tr(x^i) for i < m

  long mul_slow(long a, long b) const;  // polynomial mult, used to seed tables
};

// The deterministic modulus described above, little-endian, monic.
std::vector<int> smallest_irreducible(int p, int m);

// Embed an element of F_{p^src.m} into F_{p^dst.m} (src.m must divide dst.m):
// the image is the smallest root (code order) in dst of the element's minimal
// polynomial over F_p.  Any root gives a field embedding of the generated
// subfield; smallest-root keeps runs reproducible.
long embed_into(const GF& src, long code, const GF& dst);

}  // namespace dworklab
