#ifndef RACEBAR_RACE_SIMULATOR_HPP
#define RACEBAR_RACE_SIMULATOR_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "racebar/barrier.hpp"
#include "racebar/cyclotomic.hpp"

namespace racebar {

/// Constant in front of the |rho|^-2 remainder of f(rho), after normalization.
inline constexpr long double kRemainderConstant = 4.0L;

/**
 * Zeros grouped by (sigma, gamma), with multiplicities per character.
 * Values are normalized by e^{sigma_max u} / u.
 */
class MainTermConfig {
 public:
  struct Level {
    long double sigma;
    long double gamma;
    std::vector<std::pair<DirichletCharacter, Int>> chars;
  };

  MainTermConfig(std::shared_ptr<const UnitGroup> group, const std::vector<ZeroSpec>& zeros,
                 long double beta1)
      : group_(std::move(group)), beta1_(beta1) {
    std::map<std::pair<long double, long double>, std::size_t> where;
    for (const auto& z : zeros) {
      detail::require(z.character.modulus() == group_->modulus(), "zero belongs to another modulus");
      auto key = std::make_pair(z.sigma, z.gamma);
      auto it = where.find(key);
      if (it == where.end()) {
        it = where.emplace(key, levels_.size()).first;
        levels_.push_back({z.sigma, z.gamma, {}});
      }
      levels_[it->second].chars.emplace_back(z.character, z.multiplicity);
      sigma_max_ = std::max(sigma_max_, z.sigma);
      gamma_max_ = std::max(gamma_max_, z.gamma);
    }
  }

  explicit MainTermConfig(const Barrier& b)
      : MainTermConfig(b.zeros.empty() ? UnitGroup::make(b.q()) : b.zeros.front().character.group(),
                       b.zeros, b.beta1) {}

  const std::shared_ptr<const UnitGroup>& group() const { return group_; }
  const std::vector<Level>& levels() const { return levels_; }
  bool empty() const { return levels_.empty(); }
  long double sigma_max() const { return sigma_max_; }
  long double gamma_max() const { return gamma_max_; }
  long double beta1() const { return beta1_; }

 private:
  std::shared_ptr<const UnitGroup> group_;
  long double beta1_;
  std::vector<Level> levels_;
  long double sigma_max_ = 0.0L;
  long double gamma_max_ = 0.0L;
};

/**
 * phi(q)(pi(x; a) - pi(x; b)) main term for one pair of residues:
 * d(u) = -2 Re sum_g c_g e^{(sigma_g - sigma_max) u} e^{i gamma_g u} / rho_g,
 * with c_g = sum n(chi) (conj chi(a) - conj chi(b)) computed exactly, so
 * levels whose coefficient vanishes drop out entirely.
 */
class PairEvaluator {
 public:
  PairEvaluator(const MainTermConfig& config, Int a, Int b)
      : sigma_max_(config.sigma_max()), beta1_(config.beta1()), empty_(config.empty()) {
    if (config.empty()) return;
    const Int n = config.group()->exponent();
    Cyclotomic cyc(n);
    for (const auto& level : config.levels()) {
      auto x = cyc.zero();
      for (const auto& [chi, mult] : level.chars) {
        cyc.add_root(x, -chi.root_index(a), mult);
        cyc.add_root(x, -chi.root_index(b), -mult);
      }
      if (cyc.is_zero(x)) continue;
      Term term;
      term.c = cyc.to_complex(x);
      term.sigma = level.sigma;
      term.gamma = level.gamma;
      term.rho = {level.sigma, level.gamma};
      terms_.push_back(term);
    }
  }

  long double value(long double u) const {
    long double s = 0.0L;
    for (const auto& t : terms_) {
      std::complex<long double> phase{std::cos(t.gamma * u), std::sin(t.gamma * u)};
      s += std::exp((t.sigma - sigma_max_) * u) * (t.c * phase / t.rho).real();
    }
    return -2.0L * s;
  }

  /// Bound on the neglected |rho|^-2 terms and the zeros left of beta1.
  long double remainder(long double u) const {
    if (empty_) return 0.0L;
    long double r = 0.0L;
    for (const auto& t : terms_)
      r += 2.0L * std::abs(t.c) * std::exp((t.sigma - sigma_max_) * u) / (std::norm(t.rho) * u);
    return kRemainderConstant * r + std::exp((beta1_ - sigma_max_) * u) * u * u * u;
  }

  bool identically_zero() const { return terms_.empty(); }

 private:
  struct Term {
    std::complex<long double> c;
    long double sigma, gamma;
    std::complex<long double> rho;
  };
  std::vector<Term> terms_;
  long double sigma_max_, beta1_;
  bool empty_;
};

inline long double main_term_pair_diff(const MainTermConfig& config, Int a, Int b, long double u) {
  detail::require(u > 0.0L, "main_term_pair_diff: u must be positive");
  return PairEvaluator(config, a, b).value(u);
}

/// Index into the histogram of orderings: permutation rank, or 6 for a tie.
inline constexpr std::size_t kTieBucket = 6;

/// Positions of the three values, largest first, or nullopt on any tie.
inline std::optional<Permutation> ordering_of(long double p1, long double p2, long double p3) {
  if (p1 == p2 || p1 == p3 || p2 == p3) return std::nullopt;
  std::array<long double, 3> v{p1, p2, p3};
  Permutation order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int i, int j) { return v[i] > v[j]; });
  return order;
}

struct RaceProfile {
  std::vector<long double> u;
  std::vector<long double> D1;  // phi(q)(pi(a1) - pi(a2)), normalized
  std::vector<long double> D2;  // phi(q)(pi(a3) - pi(a2)), normalized
  std::vector<std::size_t> ordering;
  std::array<std::size_t, 7> histogram{};
  Permutation excluded{0, 1, 2};
  /// min over samples of the slack certifying that `excluded` fails there
  long double margin = 0.0L;
  /// same with the remainder bound ignored
  long double main_margin = 0.0L;
  std::optional<long double> first_counterexample;
  std::size_t crossings = 0;
  bool verified = false;

  std::size_t excluded_count() const { return histogram[permutation_rank(excluded)]; }
};

/**
 * Evaluates the main terms on n evenly spaced samples of [u0, u1] for the
 * labeled triple. A point certifies that the chain X > Y > Z fails there when
 * for one of the pairs (X,Y), (Y,Z), (X,Z) the main term is below minus its
 * remainder bound. Besides the grid, every sign change of a pairwise
 * difference is bisected down to adjacent long doubles and both ends are
 * checked: near such a crossing two functions tie and the remaining pairs
 * decide which middle placement is possible.
 */
inline RaceProfile simulate(const MainTermConfig& config, const RaceTriple& labeled,
                            const Permutation& excluded, long double u0, long double u1, std::size_t n) {
  detail::require(n >= 2, "simulate: need at least two samples");
  detail::require(u0 > 0.0L && u1 > u0, "simulate: need 0 < u0 < u1");
  detail::require(u0 >= 10.0L, "simulate: u0 must be at least 10");
  detail::require(config.empty() || std::exp(u0) >= config.gamma_max(),
                  "simulate: u0 is below log of the largest zero height");
  permutation_rank(excluded);
  const auto& a = labeled.a;
  // pair p = (i, j) evaluates pi(a_i) - pi(a_j)
  constexpr std::array<std::pair<int, int>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};
  std::vector<PairEvaluator> ev;
  for (auto [i, j] : kPairs) ev.emplace_back(config, a[i], a[j]);
  auto pair_index = [&](int i, int j) -> std::pair<std::size_t, long double> {
    for (std::size_t p = 0; p < 3; ++p) {
      if (kPairs[p] == std::pair{i, j}) return {p, 1.0L};
      if (kPairs[p] == std::pair{j, i}) return {p, -1.0L};
    }
    return {0, 0.0L};
  };
  const auto [X, Y, Z] = excluded;
  std::array<std::pair<std::size_t, long double>, 3> chain{pair_index(X, Y), pair_index(Y, Z), pair_index(X, Z)};

  RaceProfile prof;
  prof.excluded = excluded;
  prof.margin = std::numeric_limits<long double>::infinity();
  prof.main_margin = std::numeric_limits<long double>::infinity();
  auto check = [&](long double u, const std::array<long double, 3>& v) {
    long double slack = -std::numeric_limits<long double>::infinity();
    long double main = -std::numeric_limits<long double>::infinity();
    for (auto [p, sign] : chain) {
      long double d = sign * v[p];
      slack = std::max(slack, -d - ev[p].remainder(u));
      main = std::max(main, -d);
    }
    prof.margin = std::min(prof.margin, slack);
    prof.main_margin = std::min(prof.main_margin, main);
    if (slack <= 0.0L && (!prof.first_counterexample || u < *prof.first_counterexample))
      prof.first_counterexample = u;
  };
  auto values = [&](long double u) {
    return std::array<long double, 3>{ev[0].value(u), ev[1].value(u), ev[2].value(u)};
  };

  std::array<long double, 3> prev{};
  long double prev_u = u0;
  for (std::size_t k = 0; k < n; ++k) {
    long double u = u0 + (u1 - u0) * static_cast<long double>(k) / static_cast<long double>(n - 1);
    auto v = values(u);
    long double d1 = v[0];        // pi(a1) - pi(a2)
    long double d2 = v[2] * -1;   // pi(a3) - pi(a2)
    auto ord = ordering_of(d1, 0.0L, d2);
    std::size_t bucket = ord ? permutation_rank(*ord) : kTieBucket;
    prof.u.push_back(u);
    prof.D1.push_back(d1);
    prof.D2.push_back(d2);
    prof.ordering.push_back(bucket);
    ++prof.histogram[bucket];
    check(u, v);
    if (k > 0) {
      for (std::size_t p = 0; p < 3; ++p) {
        if ((prev[p] < 0.0L) == (v[p] < 0.0L)) continue;
        long double lo = prev_u, hi = u;
        bool lo_neg = prev[p] < 0.0L;
        for (int it = 0; it < 200; ++it) {
          long double mid = lo + (hi - lo) / 2.0L;
          if (mid <= lo || mid >= hi) break;
          if ((ev[p].value(mid) < 0.0L) == lo_neg) lo = mid; else hi = mid;
        }
        check(lo, values(lo));
        check(hi, values(hi));
        ++prof.crossings;
      }
    }
    prev = v;
    prev_u = u;
  }
  prof.verified = prof.margin > 0.0L;
  return prof;
}

inline RaceProfile simulate(const Barrier& b, long double u0, long double u1, std::size_t n) {
  detail::require(!b.zeros.empty(), "simulate: barrier has no zeros");
  return simulate(MainTermConfig(b), b.labeled, b.excluded, u0, u1, n);
}

/// Default window: ten periods of the lowest frequency from verification_u.
inline std::pair<long double, long double> default_window(const Barrier& b) {
  long double gmin = std::numeric_limits<long double>::infinity();
  for (const auto& z : b.zeros) gmin = std::min(gmin, z.gamma);
  long double u0 = std::max(b.verification_u, 50.0L);
  return {u0, u0 + 20.0L * std::numbers::pi_v<long double> / gmin};
}

struct IndependenceProfile {
  std::size_t functions = 0;    // phi(q)
  std::size_t samples = 0;
  std::size_t distinct_orderings = 0;
  long double possible_orderings = 0;  // phi(q)!
};

/**
 * One simple zero sigma + i gamma_chi per non-principal character; counts the
 * distinct orderings of all phi(q) functions pi(x; a) over the grid.
 */
inline IndependenceProfile independence_scenario(Int q, long double sigma,
                                                 const std::map<std::size_t, long double>& gammas,
                                                 long double u0, long double u1, std::size_t n) {
  CharacterGroup cg(q);
  detail::require(gammas.size() == cg.size() - 1, "independence_scenario: need one gamma per non-principal character");
  std::vector<long double> seen_gamma;
  for (const auto& [idx, g] : gammas) {
    detail::require(idx >= 1 && idx < cg.size(), "independence_scenario: bad character index");
    detail::require(g > 0.0L, "independence_scenario: gamma must be positive");
    seen_gamma.push_back(g);
  }
  std::sort(seen_gamma.begin(), seen_gamma.end());
  detail::require(std::adjacent_find(seen_gamma.begin(), seen_gamma.end()) == seen_gamma.end(),
                  "independence_scenario: gamma values must be distinct");
  detail::require(n >= 2 && u1 > u0, "independence_scenario: bad grid");

  const auto units = cg.group()->units();
  // w[a][chi] = conj chi(a) / rho_chi
  std::vector<std::vector<std::complex<long double>>> w(units.size());
  std::vector<long double> gam;
  for (const auto& [idx, g] : gammas) gam.push_back(g);
  for (std::size_t i = 0; i < units.size(); ++i)
    for (const auto& [idx, g] : gammas)
      w[i].push_back(std::conj(cg[idx].value(units[i])) / std::complex<long double>(sigma, g));

  std::unordered_set<std::string> orders;
  std::vector<long double> v(units.size());
  std::vector<std::size_t> idx(units.size());
  for (std::size_t k = 0; k < n; ++k) {
    long double u = u0 + (u1 - u0) * static_cast<long double>(k) / static_cast<long double>(n - 1);
    std::vector<std::complex<long double>> e;
    for (long double g : gam) e.emplace_back(std::cos(g * u), std::sin(g * u));
    for (std::size_t i = 0; i < units.size(); ++i) {
      std::complex<long double> s = 0;
      for (std::size_t c = 0; c < gam.size(); ++c) s += w[i][c] * e[c];
      v[i] = -2.0L * s.real();
    }
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return v[x] > v[y]; });
    orders.emplace(reinterpret_cast<const char*>(idx.data()), idx.size() * sizeof(std::size_t));
  }
  IndependenceProfile out;
  out.functions = units.size();
  out.samples = n;
  out.distinct_orderings = orders.size();
  out.possible_orderings = std::tgamma(static_cast<long double>(units.size()) + 1.0L);
  return out;
}

}  // namespace racebar

#endif  // RACEBAR_RACE_SIMULATOR_HPP
