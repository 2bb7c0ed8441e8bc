#ifndef RACEBAR_BARRIER_HPP
#define RACEBAR_BARRIER_HPP

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "racebar/characters.hpp"

namespace racebar {

/// labeled[i] = original[perm[i]].
using Permutation = std::array<int, 3>;

/// The six permutations of {0,1,2} in lexicographic order.
inline constexpr std::array<Permutation, 6> kPermutations{{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

inline std::size_t permutation_rank(const Permutation& p) {
  for (std::size_t i = 0; i < kPermutations.size(); ++i)
    if (kPermutations[i] == p) return i;
  throw ValidationError("not a permutation of {0,1,2}");
}

struct RaceTriple {
  Int q = 0;
  std::array<Int, 3> a{};

  RaceTriple() = default;
  RaceTriple(Int modulus, Int a1, Int a2, Int a3) : q(Modulus(modulus).value()) {
    a = {floor_mod(a1, q), floor_mod(a2, q), floor_mod(a3, q)};
    for (Int x : a)
      detail::require(std::gcd(x, q) == 1,
                      "residue " + std::to_string(x) + " is not coprime to " + std::to_string(q));
    detail::require(a[0] != a[1] && a[0] != a[2] && a[1] != a[2],
                    "residues must be pairwise distinct modulo q");
  }

  RaceTriple relabel(const Permutation& p) const {
    RaceTriple r = *this;
    for (int i = 0; i < 3; ++i) r.a[i] = a[p[i]];
    return r;
  }

  std::string str() const {
    return "(" + std::to_string(q) + "; " + std::to_string(a[0]) + ", " + std::to_string(a[1]) +
           ", " + std::to_string(a[2]) + ")";
  }
  friend bool operator==(const RaceTriple&, const RaceTriple&) = default;
};

struct ZeroSpec {
  DirichletCharacter character;
  long double sigma;
  long double gamma;
  Int multiplicity;
};

enum class Construction { I, II, III, GSH };

inline std::string to_string(Construction c) {
  switch (c) {
    case Construction::I: return "I";
    case Construction::II: return "II";
    case Construction::III: return "III";
    case Construction::GSH: return "GSH";
  }
  return "?";
}

inline Construction construction_from_string(const std::string& s) {
  if (s == "I") return Construction::I;
  if (s == "II") return Construction::II;
  if (s == "III") return Construction::III;
  if (s == "GSH") return Construction::GSH;
  throw ValidationError("unknown construction tag '" + s + "'");
}

/**
 * A finite set of hypothetical zeros and the ordering it excludes.
 * `excluded` lists positions in the labeled triple, largest first:
 * {1,2,0} means pi(a2) > pi(a3) > pi(a1) does not occur.
 */
struct Barrier {
  RaceTriple triple;    // as given
  Permutation relabeling{0, 1, 2};
  RaceTriple labeled;   // triple.relabel(relabeling)
  Construction construction = Construction::I;
  long double beta1 = 0.5L;
  std::vector<ZeroSpec> zeros;
  Permutation excluded{0, 1, 2};
  /// Start of the window where the main terms dominate every error term.
  long double verification_u = 0.0L;
  std::map<std::string, double> parameters;
  std::map<std::string, double> margins;

  Int q() const { return triple.q; }

  Int size() const {
    Int n = 0;
    for (const auto& z : zeros) n += z.multiplicity;
    return n;
  }

  std::array<Int, 3> excluded_residues() const {
    return {labeled.a[excluded[0]], labeled.a[excluded[1]], labeled.a[excluded[2]]};
  }

  long double sigma_min() const {
    long double s = 2.0L;
    for (const auto& z : zeros) s = std::min(s, z.sigma);
    return s;
  }
  long double sigma_max() const {
    long double s = 0.0L;
    for (const auto& z : zeros) s = std::max(s, z.sigma);
    return s;
  }
  long double gamma_max() const {
    long double g = 0.0L;
    for (const auto& z : zeros) g = std::max(g, z.gamma);
    return g;
  }
};

/// Numeric parameters shared by the finite constructions.
struct BarrierParams {
  long double sigma_cap = 0.501;  // every zero has real part <= sigma_cap
  long double tau = 0.0;          // every zero has imaginary part > tau
  long double sigma1 = 0.501;
  long double sigma2 = 0.5005;
  long double beta1 = 0.5;
  long double t = 1000.0;         // construction I height
  long double gamma = 1000.0;     // constructions II and III height
  long double epsilon = 1e-3;     // construction III rationalization error
};

/// Smallest u = 50 * 2^k with e^{(beta1 - sigma_min) u} u^3 gamma_max <= tol.
inline long double verification_window(long double beta1, long double sigma_min,
                                       long double gamma_max, long double tol = 1e-6L) {
  detail::require(sigma_min > beta1, "verification_window: zeros must lie right of beta1");
  long double u = 50.0L;
  for (int k = 0; k < 60; ++k, u *= 2.0L) {
    long double lhs = (beta1 - sigma_min) * u + 3.0L * std::log(u) + std::log(std::max(gamma_max, 1.0L));
    if (lhs <= std::log(tol) && std::exp(u) >= gamma_max) return u;
  }
  throw ConstructionError("verification_window: no admissible u below 50 * 2^60");
}

/// Structural checks shared by every finite construction.
inline void check_barrier(const Barrier& b) {
  detail::ensure(b.labeled == b.triple.relabel(b.relabeling), "barrier: labeled triple mismatch");
  detail::ensure(b.beta1 >= 0.5L, "barrier: beta1 below 1/2");
  detail::ensure(!b.zeros.empty(), "barrier: no zeros");
  permutation_rank(b.excluded);
  for (const auto& z : b.zeros) {
    detail::ensure(z.character.modulus() == b.q(), "barrier: character modulus mismatch");
    detail::ensure(!z.character.is_principal(), "barrier: zero attached to the principal character");
    detail::ensure(z.sigma > b.beta1 && z.sigma <= 1.0L, "barrier: zero real part outside (beta1, 1]");
    detail::ensure(z.gamma > 0.0L, "barrier: zero imaginary part must be positive");
    detail::ensure(z.multiplicity >= 1, "barrier: multiplicity must be positive");
  }
}

}  // namespace racebar

#endif  // RACEBAR_BARRIER_HPP
