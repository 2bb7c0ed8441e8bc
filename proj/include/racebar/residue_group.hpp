#ifndef RACEBAR_RESIDUE_GROUP_HPP
#define RACEBAR_RESIDUE_GROUP_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "racebar/errors.hpp"

namespace racebar {

using Int = std::int64_t;

/// Largest modulus accepted; discrete logs come from a full power table.
inline constexpr Int kMaxModulus = 1'000'000;

// ---------------------------------------------------------------------------
// small integer helpers

inline Int floor_mod(Int a, Int m) {
  Int r = a % m;
  return r < 0 ? r + m : r;
}

inline Int mul_mod(Int a, Int b, Int m) {
  return static_cast<Int>((static_cast<__int128>(a) * b) % m);
}

inline Int pow_mod(Int base, Int exp, Int m) {
  Int result = 1 % m;
  base = floor_mod(base, m);
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Returns (g, x, y) with a*x + b*y = g = gcd(a, b).
inline std::tuple<Int, Int, Int> ext_gcd(Int a, Int b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Int quot = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - quot * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - quot * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - quot * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

inline Int inverse_mod(Int a, Int m) {
  auto [g, x, y] = ext_gcd(floor_mod(a, m), m);
  (void)y;
  detail::require(g == 1, "inverse_mod: " + std::to_string(a) + " is not invertible mod " +
                              std::to_string(m));
  return floor_mod(x, m);
}

struct PrimePower {
  Int p;
  int exponent;
  Int value;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

inline std::vector<PrimePower> factorize(Int n) {
  std::vector<PrimePower> out;
  for (Int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    PrimePower pp{p, 0, 1};
    while (n % p == 0) {
      n /= p;
      ++pp.exponent;
      pp.value *= p;
    }
    out.push_back(pp);
  }
  if (n > 1) out.push_back({n, 1, n});
  return out;
}

inline Int euler_phi(Int n) {
  Int result = n;
  for (const auto& f : factorize(n)) result = result / f.p * (f.p - 1);
  return result;
}

inline int valuation(Int n, Int p) {
  int v = 0;
  while (n != 0 && n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

// ---------------------------------------------------------------------------

/// A modulus q with q = 5 or q >= 7 (so phi(q) >= 4 and three distinct units exist).
class Modulus {
 public:
  explicit Modulus(Int q) : q_(q) {
    detail::require(q == 5 || q >= 7, "modulus must satisfy q = 5 or q >= 7 (got " +
                                          std::to_string(q) + ")");
    detail::require(q <= kMaxModulus, "modulus exceeds the configured cap of " +
                                          std::to_string(kMaxModulus));
  }
  Int value() const { return q_; }
  operator Int() const { return q_; }

 private:
  Int q_;
};

struct Generator {
  Int residue;
  Int order;
  friend bool operator==(const Generator&, const Generator&) = default;
};

/// Multiplicative order of b modulo q by repeated multiplication.
inline Int ord(Int q, Int b) {
  detail::require(q >= 2, "ord: modulus must be >= 2");
  b = floor_mod(b, q);
  detail::require(std::gcd(b, q) == 1,
                  "ord: " + std::to_string(b) + " is not coprime to " + std::to_string(q));
  Int m = 1;
  for (Int x = b; x != 1 % q; x = mul_mod(x, b, q)) ++m;
  return m;
}

/// a / b modulo q.
inline Int mod_div(Int q, Int a, Int b) {
  detail::require(std::gcd(floor_mod(a, q), q) == 1, "mod_div: numerator not a unit");
  return mul_mod(floor_mod(a, q), inverse_mod(b, q), q);
}

/**
 * Structure of (Z/qZ)^*: an ordered basis g_1..g_t with orders s_1..s_t such
 * that every unit is g_1^f_1 ... g_t^f_t for exactly one vector 0 <= f_i < s_i.
 *
 * The basis is built from the prime-power factors of q. Powers of two
 * contribute the pair (-1, 5) (or just -1 when 4 || q), lifted by CRT. Each odd
 * prime power p^a contributes its smallest primitive root lifted by CRT; that
 * lift is then replaced by the smallest residue of the same order that still
 * completes a basis. Discrete logs come from a full table over the exponent box.
 */
class UnitGroup {
 public:
  explicit UnitGroup(Modulus modulus) : q_(modulus.value()) {
    phi_ = euler_phi(q_);
    build_generators();
    build_table();
  }

  static std::shared_ptr<const UnitGroup> make(Int q) {
    return std::make_shared<const UnitGroup>(Modulus(q));
  }

  Int modulus() const { return q_; }
  Int phi() const { return phi_; }
  /// lcm of the generator orders.
  Int exponent() const { return exponent_; }
  const std::vector<Generator>& generators() const { return gens_; }
  std::size_t rank() const { return gens_.size(); }
  bool is_cyclic() const { return gens_.size() == 1; }

  bool is_unit(Int b) const {
    Int r = floor_mod(b, q_);
    return index_of_[static_cast<std::size_t>(r)] >= 0;
  }

  /// Position of the unit in row-major order of its exponent vector.
  std::size_t flat_index(Int b) const {
    Int r = floor_mod(b, q_);
    auto idx = index_of_[static_cast<std::size_t>(r)];
    detail::require(idx >= 0, std::to_string(b) + " is not a unit modulo " + std::to_string(q_));
    return static_cast<std::size_t>(idx);
  }

  Int residue_at(std::size_t flat) const { return residues_.at(flat); }

  /// All units in increasing order.
  std::vector<Int> units() const {
    std::vector<Int> out(residues_);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<Int> dlog(Int b) const { return unflatten(flat_index(b)); }

  Int from_exponents(std::span<const Int> f) const {
    detail::require(f.size() == gens_.size(), "exponent vector has wrong length");
    Int x = 1;
    for (std::size_t i = 0; i < f.size(); ++i)
      x = mul_mod(x, pow_mod(gens_[i].residue, floor_mod(f[i], gens_[i].order), q_), q_);
    return x;
  }

  Int order_of(Int b) const { return ord(q_, b); }

  Int divide(Int a, Int b) const { return mod_div(q_, a, b); }

  std::vector<Int> unflatten(std::size_t flat) const {
    std::vector<Int> f(gens_.size());
    for (std::size_t i = gens_.size(); i-- > 0;) {
      f[i] = static_cast<Int>(flat % static_cast<std::size_t>(gens_[i].order));
      flat /= static_cast<std::size_t>(gens_[i].order);
    }
    return f;
  }

 private:
  Int crt_lift(Int residue, Int part) const {
    // x = residue (mod part), x = 1 (mod q / part)
    Int rest = q_ / part;
    if (rest == 1) return floor_mod(residue, q_);
    Int k = mul_mod(floor_mod(residue - 1, part), inverse_mod(rest % part, part), part);
    return floor_mod(1 + rest * k, q_);
  }

  static Int smallest_primitive_root(Int pa, Int p) {
    Int phi = pa / p * (p - 1);
    auto ps = factorize(phi);
    for (Int g = 2; g < pa; ++g) {
      if (g % p == 0) continue;
      bool ok = std::all_of(ps.begin(), ps.end(),
                            [&](const PrimePower& f) { return pow_mod(g, phi / f.p, pa) != 1; });
      if (ok) return g;
    }
    return 1;  // only for pa == 2, which never reaches here
  }

  Int subgroup_size(const std::vector<Int>& gens) const {
    std::vector<char> seen(static_cast<std::size_t>(q_), 0);
    std::vector<Int> members{1};
    seen[1] = 1;
    for (Int g : gens) {
      std::vector<Int> fresh;
      for (Int h : members) {
        for (Int x = mul_mod(h, g, q_); !seen[static_cast<std::size_t>(x)];
             x = mul_mod(x, g, q_)) {
          seen[static_cast<std::size_t>(x)] = 1;
          fresh.push_back(x);
        }
      }
      members.insert(members.end(), fresh.begin(), fresh.end());
    }
    return static_cast<Int>(members.size());
  }

  void build_generators() {
    std::vector<bool> canonicalize;
    for (const auto& f : factorize(q_)) {
      if (f.p == 2) {
        if (f.exponent >= 2) {
          gens_.push_back({crt_lift(f.value - 1, f.value), 2});
          canonicalize.push_back(false);
        }
        if (f.exponent >= 3) {
          gens_.push_back({crt_lift(5, f.value), f.value / 4});
          canonicalize.push_back(false);
        }
      } else {
        Int g = smallest_primitive_root(f.value, f.p);
        gens_.push_back({crt_lift(g, f.value), f.value / f.p * (f.p - 1)});
        canonicalize.push_back(true);
      }
    }
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      if (!canonicalize[i]) continue;
      std::vector<Int> trial;
      for (const auto& g : gens_) trial.push_back(g.residue);
      for (Int x = 2; x < gens_[i].residue; ++x) {
        if (std::gcd(x, q_) != 1 || ord(q_, x) != gens_[i].order) continue;
        trial[i] = x;
        if (subgroup_size(trial) == phi_) {
          gens_[i].residue = x;
          break;
        }
      }
    }
    exponent_ = 1;
    for (const auto& g : gens_) exponent_ = std::lcm(exponent_, g.order);
  }

  void build_table() {
    index_of_.assign(static_cast<std::size_t>(q_), -1);
    residues_.assign(static_cast<std::size_t>(phi_), 0);
    // Odometer over the exponent box, last coordinate fastest.
    std::vector<Int> f(gens_.size(), 0);
    std::vector<Int> partial(gens_.size() + 1, 1);
    auto refresh = [&](std::size_t from) {
      for (std::size_t i = from; i < gens_.size(); ++i)
        partial[i + 1] = mul_mod(partial[i], pow_mod(gens_[i].residue, f[i], q_), q_);
    };
    refresh(0);
    for (std::size_t flat = 0; flat < static_cast<std::size_t>(phi_); ++flat) {
      Int x = partial[gens_.size()];
      detail::ensure(index_of_[static_cast<std::size_t>(x)] < 0,
                     "unit group basis is not independent");
      index_of_[static_cast<std::size_t>(x)] = static_cast<std::int32_t>(flat);
      residues_[flat] = x;
      std::size_t i = gens_.size();
      while (i-- > 0) {
        if (++f[i] < gens_[i].order) break;
        f[i] = 0;
      }
      if (i < gens_.size()) refresh(i);
    }
  }

  Int q_;
  Int phi_ = 0;
  Int exponent_ = 1;
  std::vector<Generator> gens_;
  std::vector<std::int32_t> index_of_;
  std::vector<Int> residues_;
};

}  // namespace racebar

#endif  // RACEBAR_RESIDUE_GROUP_HPP
