#ifndef RACEBAR_TESTS_SUPPORT_HPP
#define RACEBAR_TESTS_SUPPORT_HPP

#include <algorithm>
#include <random>
#include <vector>

#include "racebar/find_barrier.hpp"
#include "racebar/race_simulator.hpp"

namespace racebar::support {

inline std::vector<Int> sweep_moduli(Int qmax = 50) {
  std::vector<Int> qs{5};
  for (Int q = 7; q <= qmax; ++q) qs.push_back(q);
  return qs;
}

/// Every ordered triple of distinct units for q in {5} and [7, qmax].
inline std::vector<RaceTriple> all_triples(Int qmax = 50) {
  std::vector<RaceTriple> out;
  for (Int q : sweep_moduli(qmax)) {
    auto units = UnitGroup::make(q)->units();
    for (Int a : units)
      for (Int b : units)
        for (Int c : units)
          if (a != b && a != c && b != c) out.emplace_back(q, a, b, c);
  }
  return out;
}

inline std::vector<RaceTriple> sample_triples(std::size_t count, std::uint64_t seed, Int qmax = 50) {
  auto all = all_triples(qmax);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  std::vector<RaceTriple> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(all[pick(rng)]);
  return out;
}

inline bool agrees_on_triple(const DirichletCharacter& x, const DirichletCharacter& y, const RaceTriple& t) {
  return std::all_of(t.a.begin(), t.a.end(), [&](Int a) { return x(a) == y(a); });
}

/**
 * Even kinds drop a random zero; odd kinds give the largest-multiplicity zero
 * a non-principal character that differs from its own on the triple.
 */
inline Barrier mutate(const Barrier& b, int kind, std::mt19937_64& rng) {
  Barrier m = b;
  if (kind % 2 == 0) {
    std::uniform_int_distribution<std::size_t> pick(0, m.zeros.size() - 1);
    m.zeros.erase(m.zeros.begin() + static_cast<std::ptrdiff_t>(pick(rng)));
    return m;
  }
  auto& z = *std::max_element(m.zeros.begin(), m.zeros.end(),
                              [](const auto& x, const auto& y) { return x.multiplicity < y.multiplicity; });
  CharacterGroup cg(b.q());
  std::uniform_int_distribution<std::size_t> pick(1, cg.size() - 1);
  std::size_t c;
  do c = pick(rng);
  while (agrees_on_triple(cg[c], z.character, m.labeled));
  z.character = cg[c];
  return m;
}

/// Simulates a mutant over the window of the barrier it came from.
inline RaceProfile simulate_mutant(const Barrier& original, const Barrier& mutant, std::size_t n) {
  auto [u0, u1] = default_window(original);
  MainTermConfig cfg(mutant.zeros.empty() ? UnitGroup::make(mutant.q()) : mutant.zeros.front().character.group(),
                     mutant.zeros, mutant.beta1);
  return simulate(cfg, mutant.labeled, mutant.excluded, u0, u1, n);
}

}  // namespace racebar::support

#endif
