#ifndef RACEBAR_CYCLOTOMIC_HPP
#define RACEBAR_CYCLOTOMIC_HPP

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <span>
#include <vector>

#include "racebar/residue_group.hpp"

namespace racebar {

/// e(k/n) in long double, with the exact fractional part taken first.
inline std::complex<long double> unit_root(Int k, Int n) {
  k = floor_mod(k, n);
  if (k == 0) return {1.0L, 0.0L};
  if (2 * k == n) return {-1.0L, 0.0L};
  if (4 * k == n) return {0.0L, 1.0L};
  if (4 * k == 3 * n) return {0.0L, -1.0L};
  // symmetric range (-1/2, 1/2] keeps the argument small
  Int centered = 2 * k > n ? k - n : k;
  long double angle = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(centered) /
                      static_cast<long double>(n);
  return {std::cos(angle), std::sin(angle)};
}

/**
 * Exact arithmetic in Z[zeta_n]. Elements are kept as integer coefficient
 * vectors over the power basis 1, zeta, ..., zeta^{n-1}; equality is decided
 * by reducing modulo the n-th cyclotomic polynomial.
 */
class Cyclotomic {
 public:
  using Element = std::vector<Int>;

  explicit Cyclotomic(Int n) : n_(n) {
    detail::require(n >= 1, "cyclotomic order must be positive");
    phi_poly_ = cyclotomic_polynomial(n);
  }

  Int order() const { return n_; }
  std::size_t degree() const { return phi_poly_.size() - 1; }
  const std::vector<Int>& polynomial() const { return phi_poly_; }

  Element zero() const { return Element(static_cast<std::size_t>(n_), 0); }

  void add_root(Element& x, Int k, Int multiplicity = 1) const {
    x[static_cast<std::size_t>(floor_mod(k, n_))] += multiplicity;
  }

  /// Remainder modulo Phi_n, a vector of length degree().
  Element reduce(std::span<const Int> x) const {
    std::vector<Int> r(x.begin(), x.end());
    const std::size_t d = degree();
    for (std::size_t i = r.size(); i-- > d;) {
      Int lead = r[i];
      if (lead == 0) continue;
      // Phi_n is monic
      for (std::size_t j = 0; j <= d; ++j) r[i - d + j] -= lead * phi_poly_[j];
    }
    r.resize(d);
    return r;
  }

  bool is_zero(std::span<const Int> x) const {
    for (Int c : reduce(x))
      if (c != 0) return false;
    return true;
  }

  bool equal(std::span<const Int> x, std::span<const Int> y) const {
    Element diff(x.begin(), x.end());
    for (std::size_t i = 0; i < y.size(); ++i) diff[i] -= y[i];
    return is_zero(diff);
  }

  std::complex<long double> to_complex(std::span<const Int> x) const {
    std::complex<long double> s{0.0L, 0.0L};
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x[k] != 0) s += static_cast<long double>(x[k]) * unit_root(static_cast<Int>(k), n_);
    return s;
  }

  static std::vector<Int> cyclotomic_polynomial(Int n) {
    // Phi_d for every divisor d of n in increasing order:
    // Phi_d = (x^d - 1) / prod_{e | d, e < d} Phi_e
    std::vector<Int> divisors;
    for (Int d = 1; d <= n; ++d)
      if (n % d == 0) divisors.push_back(d);
    std::map<Int, std::vector<Int>> known;
    for (Int d : divisors) {
      std::vector<Int> num(static_cast<std::size_t>(d) + 1, 0);
      num[0] = -1;
      num.back() = 1;
      for (const auto& [e, poly] : known)
        if (d % e == 0) num = divide_exact(num, poly);
      known.emplace(d, std::move(num));
    }
    return known.at(n);
  }

 private:
  static std::vector<Int> divide_exact(std::vector<Int> num, const std::vector<Int>& den) {
    const std::size_t dn = den.size() - 1;
    std::vector<Int> quot(num.size() - dn, 0);
    for (std::size_t i = num.size(); i-- > dn;) {
      Int c = num[i];  // den is monic
      quot[i - dn] = c;
      if (c == 0) continue;
      for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
    }
    return quot;
  }

  Int n_;
  std::vector<Int> phi_poly_;
};

}  // namespace racebar

#endif  // RACEBAR_CYCLOTOMIC_HPP
