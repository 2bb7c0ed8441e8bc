#ifndef RACEBAR_GOODNESS_HPP
#define RACEBAR_GOODNESS_HPP

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <vector>

#include <boost/rational.hpp>

#include "racebar/residue_group.hpp"

namespace racebar {

using Fraction = boost::rational<Int>;

/// 1/3 < d1 <= d2 < 1/2, or one of the two exceptional pairs.
inline bool spacing_ok(const Fraction& d1, const Fraction& d2) {
  if (d1 == Fraction(6, 19) && d2 == Fraction(9, 19)) return true;
  if (d1 == Fraction(12, 37) && d2 == Fraction(16, 37)) return true;
  return Fraction(1, 3) < d1 && d1 <= d2 && d2 < Fraction(1, 2);
}

/// Same test with d1, d2 given in units of 1/m.
inline bool spacing_ok_units(Int lo, Int hi, Int m, bool strict = false) {
  if (!strict) {
    if (19 * lo == 6 * m && 19 * hi == 9 * m) return true;
    if (37 * lo == 12 * m && 37 * hi == 16 * m) return true;
  }
  return 3 * lo > m && lo <= hi && 2 * hi < m;
}

enum class WitnessKind { Coincidence, Spacing };

struct Witness {
  Int k;
  WitnessKind kind;
  /// the chosen pair of gaps (units of 1/m), ascending; zero for Coincidence
  Int lo = 0;
  Int hi = 0;
};

/// Circular gaps between the points 0, x/m, y/m (units of 1/m), summing to m.
inline std::array<Int, 3> circular_gaps(Int x, Int y, Int m) {
  std::array<Int, 3> p{0, floor_mod(x, m), floor_mod(y, m)};
  std::sort(p.begin(), p.end());
  return {p[1] - p[0], p[2] - p[1], m - p[2] + p[0]};
}

/// Checks whether k works for (m, j). With strict, only the (1/3, 1/2) branch counts.
inline std::optional<Witness> check_witness(Int m, Int j, Int k, bool strict = false) {
  const Int x = floor_mod(k, m);
  const Int y = mul_mod(x, floor_mod(j, m), m);
  const int equal_pairs = (x == 0) + (y == 0) + (x == y);
  if (equal_pairs == 3) return std::nullopt;
  if (equal_pairs == 1) {
    if (strict) return std::nullopt;
    return Witness{k, WitnessKind::Coincidence};
  }
  const auto g = circular_gaps(x, y, m);
  for (auto [a, b] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
    Int lo = std::min(g[a], g[b]), hi = std::max(g[a], g[b]);
    if (spacing_ok_units(lo, hi, m, strict)) return Witness{k, WitnessKind::Spacing, lo, hi};
  }
  return std::nullopt;
}

/// Smallest k in [1, m-1] making (0, k/m, kj/m) acceptable, if any.
inline std::optional<Witness> witness_for(Int m, Int j, bool strict = false) {
  detail::require(m >= 3 && m % 2 == 1, "witness_for: m must be odd and >= 3");
  detail::require(j >= 1 && j <= m - 1, "witness_for: j must lie in [1, m-1]");
  for (Int k = 1; k < m; ++k)
    if (auto w = check_witness(m, j, k, strict)) return w;
  return std::nullopt;
}

struct GoodnessCertificate {
  Int m = 0;
  bool good = false;
  std::map<Int, Witness> witnesses;
  std::vector<Int> failing_j;
};

/// Decides goodness of odd m using j in [2, (m+1)/2].
inline GoodnessCertificate is_good(Int m, bool strict = false) {
  detail::require(m >= 3 && m % 2 == 1, "is_good: m must be odd and >= 3");
  GoodnessCertificate cert;
  cert.m = m;
  for (Int j = 2; j <= (m + 1) / 2; ++j) {
    if (auto w = witness_for(m, j, strict))
      cert.witnesses.emplace(j, *w);
    else
      cert.failing_j.push_back(j);
  }
  cert.good = cert.failing_j.empty();
  return cert;
}

/// Failing j over [2, m-1], obtained through j -> m+1-j.
inline std::vector<Int> full_range_failing(const GoodnessCertificate& cert) {
  std::vector<Int> out(cert.failing_j);
  for (Int j : cert.failing_j)
    if (cert.m + 1 - j != j) out.push_back(cert.m + 1 - j);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace racebar

#endif  // RACEBAR_GOODNESS_HPP
