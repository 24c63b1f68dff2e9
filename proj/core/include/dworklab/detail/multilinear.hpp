#pragma once
// Shared machinery for Sym^k / Ext^k / tensor constructions, templated over
// the entry type (p-adic scalars at fibres, truncated Laurent series at the
// module level).  Bases are sorted by (total structural level, lex) so that
// applying a functor and specialising to a fibre commute entry-for-entry.

#include <algorithm>
#include <map>
#include <vector>

#include "dworklab/ints.hpp"

namespace dworklab::detail {

template <class Elem>
using Mat = std::vector<std::vector<Elem>>;

// Nondecreasing k-tuples from {0..m-1} (Sym) sorted by (level sum, lex).
std::vector<std::vector<int>> sym_basis(int m, int k, const std::vector<long>& lvl);
// Strictly increasing k-tuples (Ext), same order.
std::vector<std::vector<int>> ext_basis(int m, int k, const std::vector<long>& lvl);
// Pairs (i, j) for A (x) B, sorted by (lvlA[i] + lvlB[j], (i, j)).
std::vector<std::pair<int, int>> tensor_basis(int ma, const std::vector<long>& la,
                                              int mb, const std::vector<long>& lb);

template <class Elem>
Mat<Elem> sym_matrix(const Mat<Elem>& M, const std::vector<std::vector<int>>& basis,
                     const Elem& zero) {
  std::map<std::vector<int>, int> index_of;
  for (int i = 0; i < static_cast<int>(basis.size()); ++i) index_of[basis[i]] = i;
  int m = static_cast<int>(M.size());
  Mat<Elem> R(basis.size(), std::vector<Elem>(basis.size(), zero));
  for (size_t col = 0; col < basis.size(); ++col) {
    // expand prod_t phi(e_{b_t}) as a sum over row multisets
    std::map<std::vector<int>, Elem> acc;
    for (int r = 0; r < m; ++r)
      if (!(M[r][basis[col][0]] == zero)) acc.emplace(std::vector<int>{r}, M[r][basis[col][0]]);
    for (size_t t = 1; t < basis[col].size(); ++t) {
      std::map<std::vector<int>, Elem> next;
      for (const auto& [ms, val] : acc)
        for (int r = 0; r < m; ++r) {
          const Elem& f = M[r][basis[col][t]];
          if (f == zero) continue;
          std::vector<int> key = ms;
          key.insert(std::upper_bound(key.begin(), key.end(), r), r);
          Elem term = val * f;
          auto it = next.find(key);
          if (it == next.end())
            next.emplace(std::move(key), std::move(term));
          else
            it->second = it->second + term;
        }
      acc = std::move(next);
    }
    for (const auto& [ms, val] : acc) R[index_of.at(ms)][col] = val;
  }
  return R;
}

template <class Elem>
Mat<Elem> ext_matrix(const Mat<Elem>& M, const std::vector<std::vector<int>>& basis,
                     const Elem& zero) {
  std::map<std::vector<int>, int> index_of;
  for (int i = 0; i < static_cast<int>(basis.size()); ++i) index_of[basis[i]] = i;
  int m = static_cast<int>(M.size());
  Mat<Elem> R(basis.size(), std::vector<Elem>(basis.size(), zero));
  for (size_t col = 0; col < basis.size(); ++col) {
    // terms carry (sorted subset, coefficient); wedging e_r on the right picks
    // up (-1)^{#elements > r}
    std::map<std::vector<int>, Elem> acc;
    for (int r = 0; r < m; ++r)
      if (!(M[r][basis[col][0]] == zero)) acc.emplace(std::vector<int>{r}, M[r][basis[col][0]]);
    for (size_t t = 1; t < basis[col].size(); ++t) {
      std::map<std::vector<int>, Elem> next;
      for (const auto& [sub, val] : acc)
        for (int r = 0; r < m; ++r) {
          const Elem& f = M[r][basis[col][t]];
          if (f == zero) continue;
          if (std::binary_search(sub.begin(), sub.end(), r)) continue;
          auto pos = std::upper_bound(sub.begin(), sub.end(), r);
          int greater = static_cast<int>(sub.end() - pos);
          std::vector<int> key = sub;
          key.insert(key.begin() + (pos - sub.begin()), r);
          Elem term = val * f;
          if (greater % 2 == 1) term = -term;
          auto it = next.find(key);
          if (it == next.end())
            next.emplace(std::move(key), std::move(term));
          else
            it->second = it->second + term;
        }
      acc = std::move(next);
    }
    for (const auto& [sub, val] : acc) R[index_of.at(sub)][col] = val;
  }
  return R;
}

template <class Elem>
Mat<Elem> kron_matrix(const Mat<Elem>& A, const Mat<Elem>& B,
                      const std::vector<std::pair<int, int>>& basis, const Elem& zero) {
  Mat<Elem> R(basis.size(), std::vector<Elem>(basis.size(), zero));
  for (size_t r = 0; r < basis.size(); ++r)
    for (size_t c = 0; c < basis.size(); ++c)
      R[r][c] = A[basis[r].first][basis[c].first] * B[basis[r].second][basis[c].second];
  return R;
}

// Structural level of each composite basis element (sum of parent levels).
std::vector<long> basis_levels(const std::vector<std::vector<int>>& basis,
                               const std::vector<long>& lvl);
std::vector<long> pair_levels(const std::vector<std::pair<int, int>>& basis,
                              const std::vector<long>& la, const std::vector<long>& lb);

}  // namespace dworklab::detail
