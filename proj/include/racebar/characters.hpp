#ifndef RACEBAR_CHARACTERS_HPP
#define RACEBAR_CHARACTERS_HPP

#include <algorithm>
#include <compare>
#include <complex>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "racebar/cyclotomic.hpp"
#include "racebar/residue_group.hpp"

namespace racebar {

/// The unit complex number e(num/den), stored reduced with 0 <= num < den.
class RationalAngle {
 public:
  RationalAngle() = default;
  RationalAngle(Int num, Int den) {
    detail::require(den > 0, "angle denominator must be positive");
    num = floor_mod(num, den);
    Int g = std::gcd(num, den);
    if (g == 0) g = den;
    num_ = num / g;
    den_ = den / g;
  }

  Int num() const { return num_; }
  Int den() const { return den_; }
  bool is_zero() const { return num_ == 0; }

  long double turns() const {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
  }
  std::complex<long double> to_complex() const { return unit_root(num_, den_); }

  friend RationalAngle operator+(const RationalAngle& a, const RationalAngle& b) {
    Int l = std::lcm(a.den_, b.den_);
    return {a.num_ * (l / a.den_) + b.num_ * (l / b.den_), l};
  }
  friend RationalAngle operator-(const RationalAngle& a) { return {-a.num_, a.den_}; }
  friend RationalAngle operator-(const RationalAngle& a, const RationalAngle& b) {
    return a + (-b);
  }
  friend RationalAngle operator*(Int k, const RationalAngle& a) {
    return {mul_mod(floor_mod(k, a.den_), a.num_, a.den_), a.den_};
  }

  friend bool operator==(const RationalAngle&, const RationalAngle&) = default;
  friend std::strong_ordering operator<=>(const RationalAngle& a, const RationalAngle& b) {
    return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
  }

  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

 private:
  Int num_ = 0;
  Int den_ = 1;
};

/**
 * A Dirichlet character mod q, given by exponents (h_1..h_t) on the basis of
 * UnitGroup: chi(g_i) = e(h_i / s_i).
 */
class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const UnitGroup> group, std::vector<Int> exponents)
      : group_(std::move(group)), h_(std::move(exponents)) {
    detail::require(group_ != nullptr, "character needs a unit group");
    detail::require(h_.size() == group_->rank(), "character exponent vector has wrong length");
    for (std::size_t i = 0; i < h_.size(); ++i) h_[i] = floor_mod(h_[i], group_->generators()[i].order);
  }

  static DirichletCharacter principal(std::shared_ptr<const UnitGroup> group) {
    std::vector<Int> zeros(group->rank(), 0);
    return {std::move(group), std::move(zeros)};
  }

  /// Character with the given row-major index.
  static DirichletCharacter from_index(std::shared_ptr<const UnitGroup> group, std::size_t index) {
    auto h = group->unflatten(index);
    return {std::move(group), std::move(h)};
  }

  const std::shared_ptr<const UnitGroup>& group() const { return group_; }
  Int modulus() const { return group_->modulus(); }
  const std::vector<Int>& exponents() const { return h_; }

  std::size_t index() const {
    std::size_t idx = 0;
    const auto& g = group_->generators();
    for (std::size_t i = 0; i < h_.size(); ++i)
      idx = idx * static_cast<std::size_t>(g[i].order) + static_cast<std::size_t>(h_[i]);
    return idx;
  }

  /// k with chi(a) = e(k / exponent()); a must be a unit.
  Int root_index(Int a) const {
    const auto f = group_->dlog(a);
    const auto& g = group_->generators();
    const Int n = group_->exponent();
    Int k = 0;
    for (std::size_t i = 0; i < h_.size(); ++i)
      k = floor_mod(k + mul_mod(mul_mod(h_[i], f[i], n), n / g[i].order, n), n);
    return k;
  }

  RationalAngle operator()(Int a) const { return {root_index(a), group_->exponent()}; }
  RationalAngle evaluate(Int a) const { return (*this)(a); }
  std::complex<long double> value(Int a) const { return unit_root(root_index(a), group_->exponent()); }

  bool is_principal() const {
    return std::all_of(h_.begin(), h_.end(), [](Int h) { return h == 0; });
  }

  Int order() const {
    Int o = 1;
    const auto& g = group_->generators();
    for (std::size_t i = 0; i < h_.size(); ++i) o = std::lcm(o, g[i].order / std::gcd(h_[i], g[i].order));
    return o;
  }

  DirichletCharacter pow(Int k) const {
    std::vector<Int> h(h_);
    const auto& g = group_->generators();
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = mul_mod(h[i], floor_mod(k, g[i].order), g[i].order);
    return {group_, std::move(h)};
  }
  DirichletCharacter conj() const { return pow(-1); }

  friend DirichletCharacter operator*(const DirichletCharacter& a, const DirichletCharacter& b) {
    detail::require(a.modulus() == b.modulus(), "characters have different moduli");
    std::vector<Int> h(a.h_);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] += b.h_[i];
    return {a.group_, std::move(h)};
  }

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.modulus() == b.modulus() && a.h_ == b.h_;
  }

  std::string str() const {
    std::string s = "chi[";
    for (std::size_t i = 0; i < h_.size(); ++i) s += (i ? "," : "") + std::to_string(h_[i]);
    return s + "]";
  }

 private:
  std::shared_ptr<const UnitGroup> group_;
  std::vector<Int> h_;
};

/// All phi(q) characters mod q in canonical (row-major) order; index 0 is principal.
class CharacterGroup {
 public:
  explicit CharacterGroup(std::shared_ptr<const UnitGroup> group) : group_(std::move(group)) {
    chars_.reserve(static_cast<std::size_t>(group_->phi()));
    for (std::size_t i = 0; i < static_cast<std::size_t>(group_->phi()); ++i)
      chars_.push_back(DirichletCharacter::from_index(group_, i));
  }
  explicit CharacterGroup(Int q) : CharacterGroup(UnitGroup::make(q)) {}

  const std::shared_ptr<const UnitGroup>& group() const { return group_; }
  Int modulus() const { return group_->modulus(); }
  std::size_t size() const { return chars_.size(); }
  const DirichletCharacter& operator[](std::size_t i) const { return chars_[i]; }
  const std::vector<DirichletCharacter>& all() const { return chars_; }

  /// C_q: every character except the principal one.
  std::vector<DirichletCharacter> nonprincipal() const {
    return {chars_.begin() + 1, chars_.end()};
  }

 private:
  std::shared_ptr<const UnitGroup> group_;
  std::vector<DirichletCharacter> chars_;
};

/**
 * A character with chi(b) = e(1/m), m = ord_q(b).
 *
 * With b = prod g_i^{f_i}, s_i' = s_i / (f_i, s_i) and f_i' = f_i / (f_i, s_i),
 * the numbers m and f_i' m / s_i' are coprime, so integers h_i with
 * sum h_i f_i' m / s_i' = 1 (mod m) exist; chi(g_i) = e(h_i / s_i) works.
 */
inline DirichletCharacter character_with_unit_value(const std::shared_ptr<const UnitGroup>& group,
                                                    Int b) {
  const auto f = group->dlog(b);
  const auto& gens = group->generators();
  const Int m = group->order_of(b);
  std::vector<Int> coeff(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    Int g = std::gcd(f[i], gens[i].order);
    Int s_prime = gens[i].order / g;
    Int f_prime = f[i] / g;
    coeff[i] = floor_mod(f_prime * (m / s_prime), m);
  }
  // Bezout over (m, coeff_1, ..., coeff_t): running gcd with cofactors
  // running = A*m + sum h_i coeff_i; only h mod m matters
  std::vector<Int> h(f.size(), 0);
  Int running = m;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (coeff[i] == 0) continue;
    auto [g, x, y] = ext_gcd(running, coeff[i]);
    for (std::size_t j = 0; j < i; ++j) h[j] = mul_mod(h[j], floor_mod(x, m), m);
    h[i] = floor_mod(y, m);
    running = g;
  }
  detail::ensure(m == 1 || running == 1, "character_with_unit_value: coefficients not coprime");
  DirichletCharacter chi(group, std::move(h));
  detail::ensure(chi(b) == RationalAngle(1, m), "character_with_unit_value: post-condition failed");
  return chi;
}

/**
 * A character with chi(b) = e(1/r) and chi(c)^r = 1. Requires r | ord(b) and,
 * for every p^a || r, p^{a+1} not dividing ord(c).
 */
inline DirichletCharacter character_pair_constraint(const std::shared_ptr<const UnitGroup>& group,
                                                    Int b, Int c, Int r) {
  detail::require(r >= 1, "character_pair_constraint: r must be positive");
  const Int s1 = group->order_of(b);
  const Int s2 = group->order_of(c);
  detail::require(s1 % r == 0, "character_pair_constraint: r = " + std::to_string(r) +
                                   " does not divide ord(b) = " + std::to_string(s1));
  for (const auto& pp : factorize(r)) {
    detail::require(s2 % (pp.value * pp.p) != 0,
                    "character_pair_constraint: " + std::to_string(pp.p) + "^" +
                        std::to_string(pp.exponent + 1) + " divides ord(c) = " + std::to_string(s2) +
                        " (offending prime power " + std::to_string(pp.p) + "^" +
                        std::to_string(pp.exponent) + " || r)");
  }
  const auto chi1 = character_with_unit_value(group, b);
  const auto chi2 = chi1.pow(s1 / r);  // chi2(b) = e(1/r)
  // s2 = v * u with v | r and (u, r) = 1
  Int u = s2;
  for (Int g = std::gcd(u, r); g > 1; g = std::gcd(u, r)) u /= g;
  Int x = r == 1 ? 0 : inverse_mod(u % r, r);
  auto chi = chi2.pow(x * u);
  detail::ensure(chi(b) == RationalAngle(1, r), "character_pair_constraint: chi(b) != e(1/r)");
  detail::ensure((r * chi(c)).is_zero(), "character_pair_constraint: chi(c)^r != 1");
  return chi;
}

}  // namespace racebar

#endif  // RACEBAR_CHARACTERS_HPP
