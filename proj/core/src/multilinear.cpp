#include "dworklab/detail/multilinear.hpp"

namespace dworklab::detail {

namespace {
void gen_tuples(int m, int k, int start, bool strict, std::vector<int>& cur,
                std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < m; ++i) {
    cur.push_back(i);
    gen_tuples(m, k, strict ? i + 1 : i, strict, cur, out);
    cur.pop_back();
  }
}

void sort_by_level(std::vector<std::vector<int>>& basis, const std::vector<long>& lvl) {
  std::stable_sort(basis.begin(), basis.end(),
                   [&](const std::vector<int>& a, const std::vector<int>& b) {
                     long la = 0, lb = 0;
                     for (int i : a) la += lvl[i];
                     for (int i : b) lb += lvl[i];
                     return la < lb;
                   });
}
}  // namespace

std::vector<std::vector<int>> sym_basis(int m, int k, const std::vector<long>& lvl) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  gen_tuples(m, k, 0, false, cur, out);
  sort_by_level(out, lvl);
  return out;
}

std::vector<std::vector<int>> ext_basis(int m, int k, const std::vector<long>& lvl) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  gen_tuples(m, k, 0, true, cur, out);
  sort_by_level(out, lvl);
  return out;
}

std::vector<std::pair<int, int>> tensor_basis(int ma, const std::vector<long>& la,
                                              int mb, const std::vector<long>& lb) {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<size_t>(ma) * mb);
  for (int i = 0; i < ma; ++i)
    for (int j = 0; j < mb; ++j) out.emplace_back(i, j);
  std::stable_sort(out.begin(), out.end(),
                   [&](const std::pair<int, int>& x, const std::pair<int, int>& y) {
                     return la[x.first] + lb[x.second] < la[y.first] + lb[y.second];
                   });
  return out;
}

std::vector<long> basis_levels(const std::vector<std::vector<int>>& basis,
                               const std::vector<long>& lvl) {
  std::vector<long> out;
  out.reserve(basis.size());
  for (const auto& b : basis) {
    long s = 0;
    for (int i : b) s += lvl[i];
    out.push_back(s);
  }
  return out;
}

std::vector<long> pair_levels(const std::vector<std::pair<int, int>>& basis,
                              const std::vector<long>& la, const std::vector<long>& lb) {
  std::vector<long> out;
  out.reserve(basis.size());
  for (const auto& [i, j] : basis) out.push_back(la[i] + lb[j]);
  return out;
}

}  // namespace dworklab::detail
