#ifndef RACEBAR_SEPARATING_SET_HPP
#define RACEBAR_SEPARATING_SET_HPP

#include <bit>
#include <optional>
#include <string>
#include <vector>

#include "racebar/barrier.hpp"
#include "racebar/cyclotomic.hpp"

namespace racebar {

/// Full subset enumeration is used only when phi(q) is at most this.
inline constexpr Int kSubsetSearchMaxPhi = 17;

/// A set S with sum_S chi(a1) = sum_S chi(a2) != sum_S chi(a3) (labeled triple).
struct SeparatingSet {
  Permutation relabeling;
  RaceTriple labeled;
  std::vector<DirichletCharacter> S;
  /// First character (canonical order) with chi2(a1) != chi2(a2).
  DirichletCharacter chi2;
  std::string family;
};

namespace detail {

/// sum_S chi(a) as a vector over zeta_N, N the group exponent.
inline Cyclotomic::Element character_sum(const Cyclotomic& cyc,
                                         const std::vector<DirichletCharacter>& S, Int a) {
  auto x = cyc.zero();
  for (const auto& chi : S) cyc.add_root(x, chi.root_index(a));
  return x;
}

inline bool separating_holds(const std::vector<DirichletCharacter>& S, const RaceTriple& t) {
  if (S.empty()) return false;
  Cyclotomic cyc(S.front().group()->exponent());
  auto s1 = character_sum(cyc, S, t.a[0]);
  auto s2 = character_sum(cyc, S, t.a[1]);
  auto s3 = character_sum(cyc, S, t.a[2]);
  return cyc.equal(s1, s2) && !cyc.equal(s1, s3);
}

inline DirichletCharacter first_separating(const CharacterGroup& cg, Int a1, Int a2) {
  for (const auto& chi : cg.all())
    if (chi.root_index(a1) != chi.root_index(a2)) return chi;
  throw VerificationError("no character separates distinct residues");
}

inline std::vector<DirichletCharacter> power_family(const DirichletCharacter& chi) {
  std::vector<DirichletCharacter> out;
  for (Int j = 1; j < chi.order(); ++j) out.push_back(chi.pow(j));
  return out;
}

}  // namespace detail

/**
 * Searches, family by family, for a set S satisfying the separating-set condition
 * under some relabeling: the primitive-root shortcut, singletons, conjugate
 * pairs, full power families <chi> \ {1}, and (for phi(q) <= 17) all subsets.
 */
inline std::optional<SeparatingSet> find_separating_set(const RaceTriple& D, const CharacterGroup& cg) {
  detail::require(cg.modulus() == D.q, "find_separating_set: character group modulus mismatch");
  const auto& group = cg.group();
  const Int n = group->exponent();

  auto finish = [&](const Permutation& p, std::vector<DirichletCharacter> S,
                    std::string family) -> std::optional<SeparatingSet> {
    auto t = D.relabel(p);
    detail::ensure(detail::separating_holds(S, t), "find_separating_set: " + family + " failed exact check");
    auto chi2 = detail::first_separating(cg, t.a[0], t.a[1]);
    return SeparatingSet{p, t, std::move(S), chi2, std::move(family)};
  };

  // primitive-root shortcut
  if (group->is_cyclic()) {
    const Int phi = group->phi();
    for (const auto& p : kPermutations) {
      auto t = D.relabel(p);
      Int ratio = group->divide(t.a[1], t.a[0]);
      Int next = group->divide(t.a[2], t.a[1]);
      Int f = group->dlog(ratio)[0];
      Int g = std::gcd(f, phi);
      // <a2/a1> = <g^(f, phi)>, so membership is divisibility of the log
      if (group->dlog(next)[0] % g == 0) continue;
      return finish(p, {DirichletCharacter(group, {phi / g})}, "primitive-root");
    }
  }

  const auto chars = cg.nonprincipal();

  for (const auto& p : kPermutations) {
    auto t = D.relabel(p);
    for (const auto& chi : chars) {
      Int k1 = chi.root_index(t.a[0]), k2 = chi.root_index(t.a[1]), k3 = chi.root_index(t.a[2]);
      if (k1 == k2 && k1 != k3) return finish(p, {chi}, "singleton");
    }
  }

  auto same_cos = [n](Int x, Int y) { return floor_mod(x - y, n) == 0 || floor_mod(x + y, n) == 0; };
  for (const auto& p : kPermutations) {
    auto t = D.relabel(p);
    for (const auto& chi : chars) {
      auto bar = chi.conj();
      if (bar == chi || bar.index() < chi.index()) continue;
      Int k1 = chi.root_index(t.a[0]), k2 = chi.root_index(t.a[1]), k3 = chi.root_index(t.a[2]);
      if (same_cos(k1, k2) && !same_cos(k1, k3)) return finish(p, {chi, bar}, "conjugate-pair");
    }
  }

  // sum over <chi> \ {1} at a is ord(chi) - 1 if chi(a) = 1, else -1
  for (const auto& p : kPermutations) {
    auto t = D.relabel(p);
    for (const auto& chi : chars) {
      if (chi.order() <= 2) continue;  // already a singleton
      bool z1 = chi.root_index(t.a[0]) == 0, z2 = chi.root_index(t.a[1]) == 0,
           z3 = chi.root_index(t.a[2]) == 0;
      if (z1 == z2 && z1 != z3) return finish(p, detail::power_family(chi), "power-family");
    }
  }

  if (group->phi() > kSubsetSearchMaxPhi) return std::nullopt;

  Cyclotomic cyc(n);
  const std::size_t m = chars.size();
  for (const auto& p : kPermutations) {
    auto t = D.relabel(p);
    std::vector<Cyclotomic::Element> d12(m), d13(m);
    for (std::size_t i = 0; i < m; ++i) {
      auto x = cyc.zero(), y = cyc.zero();
      cyc.add_root(x, chars[i].root_index(t.a[0]));
      cyc.add_root(x, chars[i].root_index(t.a[1]), -1);
      cyc.add_root(y, chars[i].root_index(t.a[0]));
      cyc.add_root(y, chars[i].root_index(t.a[2]), -1);
      d12[i] = cyc.reduce(x);
      d13[i] = cyc.reduce(y);
    }
    // Gray code walk; keep the smallest qualifying subset
    Cyclotomic::Element s12(cyc.degree(), 0), s13(cyc.degree(), 0);
    std::uint64_t mask = 0, best = 0;
    int best_count = 1 << 30;
    for (std::uint64_t step = 1; step < (std::uint64_t{1} << m); ++step) {
      std::size_t bit = static_cast<std::size_t>(std::countr_zero(step));
      int sign = (mask >> bit) & 1 ? -1 : 1;
      mask ^= std::uint64_t{1} << bit;
      for (std::size_t j = 0; j < s12.size(); ++j) {
        s12[j] += sign * d12[bit][j];
        s13[j] += sign * d13[bit][j];
      }
      bool eq12 = std::all_of(s12.begin(), s12.end(), [](Int v) { return v == 0; });
      bool eq13 = std::all_of(s13.begin(), s13.end(), [](Int v) { return v == 0; });
      int count = std::popcount(mask);
      if (eq12 && !eq13 && (count < best_count || (count == best_count && mask < best))) {
        best = mask;
        best_count = count;
      }
    }
    if (best != 0) {
      std::vector<DirichletCharacter> S;
      for (std::size_t i = 0; i < m; ++i)
        if ((best >> i) & 1) S.push_back(chars[i]);
      return finish(p, std::move(S), "subset");
    }
  }
  return std::nullopt;
}

inline std::optional<SeparatingSet> find_separating_set(const RaceTriple& D) {
  return find_separating_set(D, CharacterGroup(D.q));
}

}  // namespace racebar

#endif  // RACEBAR_SEPARATING_SET_HPP
