#include "dworklab/torus_points.hpp"

#include <algorithm>
#include <map>

namespace dworklab {

std::vector<ClosedPoint> enumerate_closed_points(int n, int q, int d_max, RingTower& tower) {
  require(n >= 1, Err::BadInput, "enumerate_closed_points: n >= 1");
  require(q == tower.base()->p(), Err::BadInput,
          "enumerate_closed_points: this artifact restricts q = p of the working ring");
  require(d_max >= 1, Err::BadInput, "enumerate_closed_points: d_max >= 1");
  {
    double tuples = 1.0;
    for (int i = 0; i < n * d_max; ++i) tuples *= q;
    require(tuples <= static_cast<double>(kPointEnumBudget), Err::BudgetExceeded,
            "enumerate_closed_points: (q^d_max)^n exceeds the enumeration budget");
  }

  std::vector<ClosedPoint> out;
  for (int d = 1; d <= d_max; ++d) {
    RingPtr Rd = tower.at_degree(d);
    const GF& F = Rd->residue_field();
    const long qd = F.q();
    // Walk all tuples of nonzero elements; keep tuples that are the lex-min of
    // an orbit of size exactly d (coordinates generating lcm degree d).
    std::vector<long> tup(n, 1);
    std::vector<ClosedPoint> found;
    while (true) {
      // orbit scan: apply coordinatewise Frobenius d times
      bool is_min = true;
      int orbit = 0;
      std::vector<long> cur = tup;
      for (int s = 1; s <= d; ++s) {
        for (int i = 0; i < n; ++i) cur[i] = F.frobenius(cur[i]);
        if (cur == tup) {
          orbit = s;
          break;
        }
        if (std::lexicographical_compare(cur.begin(), cur.end(), tup.begin(), tup.end()))
          is_min = false;  // a smaller representative exists in the orbit
      }
      if (orbit == d && is_min) {
        ClosedPoint pt;
        pt.n = n;
        pt.q = q;
        pt.degree = d;
        pt.rep = tup;
        pt.teich.reserve(n);
        for (int i = 0; i < n; ++i) pt.teich.push_back(PAdicScalar::teichmuller(Rd, tup[i]));
        found.push_back(std::move(pt));
      }
      // next tuple of nonzero codes, odometer style
      int pos = n - 1;
      while (pos >= 0) {
        ++tup[pos];
        if (tup[pos] < qd) break;
        tup[pos] = 1;
        --pos;
      }
      if (pos < 0) break;
    }
    std::sort(found.begin(), found.end(),
              [](const ClosedPoint& a, const ClosedPoint& b) { return a.rep < b.rep; });
    for (auto& pt : found) out.push_back(std::move(pt));
  }
  return out;
}

std::vector<PAdicScalar> frobenius_twist(const ClosedPoint& x, long i) {
  long s = ((i % x.degree) + x.degree) % x.degree;
  BigInt e = pow_big(x.q, static_cast<unsigned long>(s));
  std::vector<PAdicScalar> out;
  out.reserve(x.teich.size());
  for (const PAdicScalar& t : x.teich) out.push_back(t.pow(e));
  return out;
}

}  // namespace dworklab
