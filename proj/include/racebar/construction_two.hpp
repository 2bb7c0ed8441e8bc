#ifndef RACEBAR_CONSTRUCTION_TWO_HPP
#define RACEBAR_CONSTRUCTION_TWO_HPP

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <variant>

#include "racebar/envelope.hpp"
#include "racebar/goodness.hpp"
#include "racebar/separating_set.hpp"

namespace racebar {

struct Verify34 {
  bool holds;
  long double margin;  // pi (d1 + d2) - (z1 + z2)
  long double lambda1, lambda2, z1, z2;
};

inline Verify34 verify_34(Int c1, Int c2, const Fraction& d1, const Fraction& d2) {
  detail::require(c1 > 0 && c2 > 0, "verify_34: multiplicities must be positive");
  constexpr long double pi = std::numbers::pi_v<long double>;
  auto as_ld = [](const Fraction& f) {
    return static_cast<long double>(f.numerator()) / static_cast<long double>(f.denominator());
  };
  Verify34 r{};
  long double ratio = static_cast<long double>(c2) / static_cast<long double>(c1);
  r.lambda1 = ratio * std::cos(pi * as_ld(d1));
  r.lambda2 = ratio * std::cos(pi * as_ld(d2));
  detail::require(r.lambda1 > 0.0L && r.lambda1 < 1.0L && r.lambda2 > 0.0L && r.lambda2 < 1.0L,
                  "verify_34: lambda outside (0, 1)");
  r.z1 = v_lambda(r.lambda1);
  r.z2 = v_lambda(r.lambda2);
  r.margin = pi * (as_ld(d1) + as_ld(d2)) - (r.z1 + r.z2);
  r.holds = r.margin > 0.0L;
  return r;
}

/// Multiplicities (c1, c2) for the spacing d1 of an admissible configuration.
inline std::pair<Int, Int> spacing_multiplicities(const Fraction& d1) {
  if (d1 > Fraction(1, 3)) return {1, 2};
  if (d1 == Fraction(6, 19)) return {5, 9};
  if (d1 == Fraction(12, 37)) return {3, 5};
  throw ValidationError("spacing_multiplicities: d1 is not an admissible spacing");
}

/// chi(a_i) = e(r_i), 0 <= r1 < r2 < r3 < r1 + 1 on the labeled triple.
struct SpacingCharacter {
  Permutation relabeling;
  RaceTriple labeled;
  DirichletCharacter chi;
  Fraction d1, d2;
  Int c1, c2;
  std::string route;
};

namespace detail {

inline Fraction to_fraction(const RationalAngle& a) { return {a.num(), a.den()}; }

/// First relabeling (then chi before its conjugate) whose gaps are admissible spacings.
inline std::optional<SpacingCharacter> place_spacing(const RaceTriple& D, const DirichletCharacter& chi,
                                                     const std::string& route) {
  for (const auto& p : kPermutations) {
    auto t = D.relabel(p);
    for (const auto& x : {chi, chi.conj()}) {
      auto r1 = x(t.a[0]);
      Fraction e2 = to_fraction(x(t.a[1]) - r1);
      Fraction e3 = to_fraction(x(t.a[2]) - r1);
      if (!(Fraction(0) < e2 && e2 < e3)) continue;
      Fraction d1 = e2, d2 = e3 - e2;
      if (!spacing_ok(d1, d2)) continue;
      auto [c1, c2] = spacing_multiplicities(d1);
      return SpacingCharacter{p, t, x, d1, d2, c1, c2, route};
    }
  }
  return std::nullopt;
}

/// First case of the spacing search for chi: relabel so that chi(a1) = chi(a2) != chi(a3).
inline std::optional<SeparatingSet> coincidence_set(const RaceTriple& D, const CharacterGroup& cg,
                                                 const DirichletCharacter& chi) {
  for (const auto& p : kPermutations) {
    auto t = D.relabel(p);
    if (chi(t.a[0]) == chi(t.a[1]) && chi(t.a[0]) != chi(t.a[2]))
      return SeparatingSet{p, t, {chi}, first_separating(cg, t.a[0], t.a[1]), "spacing-coincidence"};
  }
  return std::nullopt;
}

inline bool is_prime(Int n) {
  auto f = factorize(n);
  return n >= 2 && f.size() == 1 && f[0].exponent == 1;
}

}  // namespace detail

using SpacingResult = std::variant<SpacingCharacter, SeparatingSet>;

/**
 * Spacing search. With s_i the orders of a2/a1, a3/a2, a1/a3:
 * a prime power p^w exactly dividing some s_i (w maximal, p^w not 3, 7, 13)
 * gives chi1(a2/a1) = e(1/p^w), chi1(a3/a2)^{p^w} = 1; for p = 2 a real
 * power of chi1 lands in case (i), for odd p a power chi2 with
 * chi2(a2/a1) = e(1/m), m = p or p^2, and a goodness witness k give chi2^k.
 * Otherwise every s_i divides 273 and one of them is 39, 91 or 273, which
 * is used directly as m. Case (i) outcomes are returned as a SeparatingSet.
 */
inline std::optional<SpacingResult> find_spacing_character(const RaceTriple& D, const CharacterGroup& cg) {
  const auto& group = cg.group();
  auto orders = [&](const RaceTriple& t) {
    return std::array<Int, 3>{group->order_of(group->divide(t.a[1], t.a[0])),
                              group->order_of(group->divide(t.a[2], t.a[1])),
                              group->order_of(group->divide(t.a[0], t.a[2]))};
  };
  const auto s = orders(D);

  // chi with chi(a2/a1) = e(1/m) and chi(a3/a1) = e(j/m): power by a witness
  auto from_root = [&](const RaceTriple& t, const Permutation& p, const DirichletCharacter& chi, Int m,
                       const std::string& route) -> std::optional<SpacingResult> {
    (void)p;
    Int j = floor_mod(chi.root_index(group->divide(t.a[2], t.a[0])) * m / group->exponent(), m);
    if (j == 0 || j == 1) {
      if (auto c = detail::coincidence_set(D, cg, chi)) return SpacingResult{*c};
      return std::nullopt;
    }
    auto w = witness_for(m, j);
    if (!w) return std::nullopt;
    auto powered = chi.pow(w->k);
    if (w->kind == WitnessKind::Coincidence) {
      if (auto c = detail::coincidence_set(D, cg, powered)) return SpacingResult{*c};
      return std::nullopt;
    }
    if (auto sc = detail::place_spacing(D, powered, route)) return SpacingResult{*sc};
    return std::nullopt;
  };

  std::vector<Int> primes;
  for (Int x : s)
    for (const auto& f : factorize(x))
      if (std::find(primes.begin(), primes.end(), f.p) == primes.end()) primes.push_back(f.p);
  std::sort(primes.begin(), primes.end());

  for (Int p : primes) {
    int w = 0;
    for (Int x : s) w = std::max(w, valuation(x, p));
    Int pw = 1;
    for (int i = 0; i < w; ++i) pw *= p;
    if (pw == 3 || pw == 7 || pw == 13) continue;
    for (const auto& perm : kPermutations) {
      auto t = D.relabel(perm);
      auto st = orders(t);
      if (valuation(st[0], p) != w) continue;
      Int b = group->divide(t.a[1], t.a[0]);
      Int c = group->divide(t.a[2], t.a[1]);
      auto chi1 = character_pair_constraint(group, b, c, pw);
      if (p == 2) {
        auto chi = chi1.pow(pw / 2);
        if (auto cs = detail::coincidence_set(D, cg, chi)) return SpacingResult{*cs};
        break;
      }
      bool exceptional = p == 3 || p == 7 || p == 13;
      Int m = exceptional ? p * p : p;
      auto chi2 = chi1.pow(pw / m);
      if (auto r = from_root(t, perm, chi2, m, "prime-power " + std::to_string(p) + "^" + std::to_string(w)))
        return r;
      break;
    }
  }

  bool all_divide = std::all_of(s.begin(), s.end(), [](Int x) { return 273 % x == 0; });
  if (all_divide) {
    for (const auto& perm : kPermutations) {
      auto t = D.relabel(perm);
      Int r = orders(t)[0];
      if (r != 39 && r != 91 && r != 273) continue;
      auto chi1 = character_pair_constraint(group, group->divide(t.a[1], t.a[0]),
                                            group->divide(t.a[2], t.a[1]), r);
      if (auto res = from_root(t, perm, chi1, r, "composite " + std::to_string(r))) return res;
    }
  }
  return std::nullopt;
}

inline std::optional<SpacingResult> find_spacing_character(const RaceTriple& D) {
  return find_spacing_character(D, CharacterGroup(D.q));
}

namespace detail {

/// verify_34 and envelope_min, memoized per (c1, c2, d1, d2).
inline std::pair<Verify34, Extremum> spacing_analysis(Int c1, Int c2, const Fraction& d1, const Fraction& d2) {
  using Key = std::array<Int, 6>;
  static std::mutex mu;
  static std::map<Key, std::pair<Verify34, Extremum>> cache;
  Key key{c1, c2, d1.numerator(), d1.denominator(), d2.numerator(), d2.denominator()};
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto as_ld = [](const Fraction& f) {
    return static_cast<long double>(f.numerator()) / static_cast<long double>(f.denominator());
  };
  std::pair<Verify34, Extremum> r{verify_34(c1, c2, d1, d2), {0.0L, 0.0L}};
  if (r.first.holds)
    r.second = envelope_min(as_ld(d1), as_ld(d2), static_cast<long double>(c1), static_cast<long double>(c2));
  std::lock_guard lock(mu);
  cache.emplace(key, r);
  return r;
}

}  // namespace detail

/**
 * Zeros of order c1 at alpha + i gamma for chi and of order c2 at
 * alpha + 2 i gamma for chi^2. pi(a3) > pi(a2) > pi(a1) is excluded.
 * gamma is doubled until the envelope depth delta dominates the 1/gamma^2
 * correction of the two-term approximation.
 */
inline Barrier construction_two(const RaceTriple& D, const SpacingCharacter& sc, const BarrierParams& params) {
  const long double alpha = params.sigma1;
  detail::require(params.beta1 >= 0.5L && params.beta1 < alpha, "construction II needs 1/2 <= beta1 < alpha");
  detail::require(alpha <= params.sigma_cap, "construction II needs alpha <= sigma");
  detail::require(params.gamma > 0.0L, "construction II needs gamma > 0");
  detail::require(sc.labeled == D.relabel(sc.relabeling), "construction II: character does not match the triple");
  detail::require(spacing_ok(sc.d1, sc.d2), "construction II: spacing is not admissible");
  auto chi_sq = sc.chi.pow(2);
  if (chi_sq.is_principal()) throw ConstructionError("construction II: chi^2 is principal");

  auto [v34, env] = detail::spacing_analysis(sc.c1, sc.c2, sc.d1, sc.d2);
  detail::ensure(v34.holds, "construction II: envelope inequality fails");
  auto as_ld = [](const Fraction& f) {
    return static_cast<long double>(f.numerator()) / static_cast<long double>(f.denominator());
  };
  detail::ensure(env.value > 0.0L, "construction II: envelope does not go negative");

  long double gamma = params.gamma;
  while (gamma <= params.tau) gamma *= 2.0L;
  auto correction = [&](long double g) {
    return (static_cast<long double>(sc.c1) + static_cast<long double>(sc.c2) / 4.0L) * alpha / g;
  };
  for (int i = 0; env.value <= 2.0L * correction(gamma); ++i) {
    if (i > 60) throw ConstructionError("construction II: no admissible gamma");
    gamma *= 2.0L;
  }

  Barrier b;
  b.triple = D;
  b.relabeling = sc.relabeling;
  b.labeled = sc.labeled;
  b.construction = Construction::II;
  b.beta1 = params.beta1;
  b.zeros = {{sc.chi, alpha, gamma, sc.c1}, {chi_sq, alpha, 2.0L * gamma, sc.c2}};
  b.excluded = {2, 1, 0};
  b.verification_u = verification_window(b.beta1, b.sigma_min(), b.gamma_max());
  b.parameters = {{"alpha", static_cast<double>(alpha)},
                  {"beta1", static_cast<double>(params.beta1)},
                  {"gamma", static_cast<double>(gamma)},
                  {"d1", static_cast<double>(as_ld(sc.d1))},
                  {"d2", static_cast<double>(as_ld(sc.d2))},
                  {"c1", static_cast<double>(sc.c1)},
                  {"c2", static_cast<double>(sc.c2)}};
  b.margins = {{"verify_34", static_cast<double>(v34.margin)},
               {"delta", static_cast<double>(env.value)},
               {"envelope_argmax", static_cast<double>(env.arg)}};
  check_barrier(b);
  detail::ensure(b.size() <= 14, "construction II: |B| > 14");
  detail::ensure(sc.d1 <= Fraction(1, 3) || b.size() <= 3, "construction II: |B| > 3 although d1 > 1/3");
  return b;
}

}  // namespace racebar

#endif  // RACEBAR_CONSTRUCTION_TWO_HPP
