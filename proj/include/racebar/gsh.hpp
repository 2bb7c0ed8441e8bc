#ifndef RACEBAR_GSH_HPP
#define RACEBAR_GSH_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "racebar/construction_one.hpp"
#include "racebar/race_simulator.hpp"

namespace racebar {

struct GshParams {
  long double t = 1000.0;
  long double sigma1 = 0.75;
  long double sigma2 = 0.7;
  long double beta = 0.5;
  std::size_t J = 10000;
};

/**
 * One simple zero at sigma1 + it for chi1 and an infinite family
 * sigma2 - delta_j + i gamma_j for chi2, truncated at j <= J.
 * Index j - 1 of h, gamma, delta holds the j-th zero.
 */
struct GshBarrier {
  RaceTriple triple;
  Permutation relabeling;
  RaceTriple labeled;
  DirichletCharacter chi1, chi2;
  long double t, sigma1, sigma2, beta;
  std::size_t J;
  long double c_delta;
  std::vector<Int> h;
  std::vector<long double> gamma, delta;
  std::vector<long double> xi;  // gamma_j - 2 t h_j, kept apart for precision
  std::complex<long double> Z, W;
  long double alpha, beta_phase;
  Permutation excluded{1, 2, 0};

  Int gap_bound() const { return static_cast<Int>(std::floor(10.0L * t)) + 1; }
};

inline long double dist_to_int(long double x) { return std::fabs(x - std::nearbyint(x)); }

inline bool in_H(Int h, long double alpha, long double beta_phase) {
  return dist_to_int(static_cast<long double>(h) * alpha + beta_phase) <= 0.2L;
}

/// Longest run of consecutive integers in [lo, hi] outside H.
inline Int longest_h_gap(long double alpha, long double beta_phase, Int lo, Int hi) {
  Int best = 0, run = 0;
  for (Int h = lo; h <= hi; ++h) {
    run = in_H(h, alpha, beta_phase) ? 0 : run + 1;
    best = std::max(best, run);
  }
  return best;
}

/// First n primes.
inline std::vector<Int> first_primes(std::size_t n) {
  double x = std::max(16.0, static_cast<double>(n));
  auto bound = static_cast<std::size_t>(x * (std::log(x) + std::log(std::log(x)))) + 16;
  std::vector<bool> composite(bound + 1, false);
  std::vector<Int> out;
  for (std::size_t p = 2; p <= bound && out.size() < n; ++p) {
    if (composite[p]) continue;
    out.push_back(static_cast<Int>(p));
    for (std::size_t m = p * p; m <= bound; m += p) composite[m] = true;
  }
  return out;
}

/**
 * Searches relabelings and characters for chi1(a1) = chi1(a2) != chi1(a3)
 * with chi2(a1) != chi2(a2). t is doubled until 1/(10t) <= ||alpha|| <=
 * 1/2 - 1/(10t). h_j is the least element of H with h_j >= j^2 and
 * h_j > h_{j-1}; delta_j = c j^-3 with c = (sigma2 - beta)/2 and
 * gamma_j = 2 t h_j + j^-10 frac(sqrt(p_j)).
 */
inline GshBarrier construction_gsh(const RaceTriple& D, const CharacterGroup& cg, const GshParams& params) {
  detail::require(params.beta >= 0.5L && params.beta < params.sigma2 && params.sigma2 < params.sigma1 &&
                      params.sigma1 <= 1.0L,
                  "GSH construction needs 1/2 <= beta < sigma2 < sigma1 <= 1");
  detail::require(params.t > 0.0L, "GSH construction needs t > 0");
  detail::require(params.J >= 1, "GSH construction needs J >= 1");

  std::optional<GshBarrier> found;
  for (const auto& p : kPermutations) {
    auto t = D.relabel(p);
    for (const auto& chi : cg.nonprincipal()) {
      if (chi(t.a[0]) != chi(t.a[1]) || chi(t.a[0]) == chi(t.a[2])) continue;
      auto chi2 = detail::first_separating(cg, t.a[0], t.a[1]);
      found = GshBarrier{D, p, t, chi, chi2, 0, 0, 0, 0, 0, 0, {}, {}, {}, {}, {}, {}, 0, 0};
      break;
    }
    if (found) break;
  }
  if (!found) throw ConstructionError("no characters with chi1(a1) = chi1(a2) != chi1(a3) for " + D.str());
  auto g = std::move(*found);
  const auto& a = g.labeled.a;
  constexpr long double pi = std::numbers::pi_v<long double>;

  g.sigma1 = params.sigma1;
  g.sigma2 = params.sigma2;
  g.beta = params.beta;
  g.J = params.J;
  g.Z = std::conj(g.chi1.value(a[1])) - std::conj(g.chi1.value(a[2]));
  g.W = std::conj(g.chi2.value(a[1])) - std::conj(g.chi2.value(a[0]));
  g.beta_phase = std::arg(g.W) / (2.0L * pi) - 0.25L;
  g.t = params.t;
  for (int it = 0;; ++it) {
    detail::ensure(it < 64, "GSH construction: no admissible t");
    g.alpha = -(std::atan(g.sigma1 / g.t) + std::arg(g.Z)) / pi;
    long double na = dist_to_int(g.alpha), slack = 1.0L / (10.0L * g.t);
    if (na >= slack && na <= 0.5L - slack) break;
    g.t *= 2.0L;
  }

  auto primes = first_primes(g.J);
  g.c_delta = (g.sigma2 - g.beta) / 2.0L;
  g.h.reserve(g.J);
  g.gamma.reserve(g.J);
  g.delta.reserve(g.J);
  g.xi.reserve(g.J);
  Int prev = -1;
  for (std::size_t j = 1; j <= g.J; ++j) {
    auto jj = static_cast<Int>(j);
    Int h = std::max(jj * jj, prev + 1);
    for (Int steps = 0; !in_H(h, g.alpha, g.beta_phase); ++h, ++steps)
      detail::ensure(steps <= g.gap_bound(), "GSH construction: gap in H exceeds 10t");
    prev = h;
    long double jl = static_cast<long double>(j);
    long double root = std::sqrt(static_cast<long double>(primes[j - 1]));
    g.h.push_back(h);
    g.xi.push_back(std::pow(jl, -10.0L) * frac(root));
    g.gamma.push_back(2.0L * g.t * static_cast<long double>(h) + g.xi.back());
    g.delta.push_back(g.c_delta / (jl * jl * jl));
  }
  return g;
}

inline GshBarrier construction_gsh(const RaceTriple& D, const GshParams& params = {}) {
  return construction_gsh(D, CharacterGroup(D.q), params);
}

/// Checks the structural invariants; returns the first violation or empty.
inline std::string check_gsh(const GshBarrier& g) {
  if (!(g.beta >= 0.5L && g.beta < g.sigma2 && g.sigma2 < g.sigma1)) return "parameter order";
  if (g.h.size() != g.J || g.gamma.size() != g.J || g.delta.size() != g.J || g.xi.size() != g.J)
    return "sequence lengths";
  long double na = dist_to_int(g.alpha), slack = 1.0L / (10.0L * g.t);
  if (na < slack || na > 0.5L - slack) return "||alpha|| out of range";
  for (std::size_t i = 0; i < g.J; ++i) {
    auto j = static_cast<Int>(i + 1);
    long double jl = static_cast<long double>(j);
    if (!in_H(g.h[i], g.alpha, g.beta_phase)) return "h_" + std::to_string(j) + " not in H";
    if (i > 0 && g.h[i] <= g.h[i - 1]) return "h not increasing at " + std::to_string(j);
    if (static_cast<long double>(j) >= 10.0L * g.t && (g.h[i] < j * j || g.h[i] > j * j + j))
      return "h_" + std::to_string(j) + " outside [j^2, j^2 + j]";
    if (!(g.delta[i] > 0.0L && g.delta[i] < g.sigma2 - g.beta)) return "delta out of range";
    if (!(g.xi[i] > 0.0L && g.xi[i] <= std::pow(jl, -10.0L)))
      return "gamma_" + std::to_string(j) + " too far from 2 t h_j";
  }
  return {};
}

/// sum_j e^{-delta_j u} / gamma_j^2
inline long double gsh_tail_sum(const GshBarrier& g, long double u) {
  long double s = 0.0L;
  for (std::size_t i = g.J; i-- > 0;) s += std::exp(-g.delta[i] * u) / (g.gamma[i] * g.gamma[i]);
  return s;
}

struct TailFit {
  long double C = 0.0L;  // max of u^{3/4} T(u) over the grid
  long double last_ratio = 0.0L;
  std::vector<long double> u, tail;
};

/// Tail sums on n log-spaced points of [u0, u1].
inline TailFit gsh_tail_fit(const GshBarrier& g, long double u0, long double u1, std::size_t n) {
  detail::require(n >= 2 && u0 > 0.0L && u1 > u0, "tail fit needs n >= 2 and 0 < u0 < u1");
  TailFit fit;
  for (std::size_t k = 0; k < n; ++k) {
    long double u = u0 * std::pow(u1 / u0, static_cast<long double>(k) / static_cast<long double>(n - 1));
    long double s = gsh_tail_sum(g, u);
    fit.u.push_back(u);
    fit.tail.push_back(s);
    fit.last_ratio = std::pow(u, 0.75L) * s;
    fit.C = std::max(fit.C, fit.last_ratio);
  }
  return fit;
}

struct GshProfile {
  RaceProfile profile;
  std::vector<int> regime;          // 1 or 2
  std::vector<long double> d1_main; // D1 normalized by x^sigma2 / u
  std::vector<long double> d2_main; // chi1 term of D2 normalized by x^sigma1 / u
  std::size_t regime1 = 0, regime2 = 0;
  std::size_t regime1_dominant = 0;  // |D2| exceeds the chi2 terms
  std::size_t regime2_positive = 0;  // D1 > 0
  std::size_t window_terms = 0, window_phase_ok = 0;
  long double max_window_phase = 0.0L;
  long double min_window_ratio = 1.0L;  // sum Re B_j / sum |B_j| over the window
};

/// ||tu/pi - alpha||
inline long double gsh_phase_offset(const GshBarrier& g, long double u) {
  return dist_to_int(g.t * u / std::numbers::pi_v<long double> - g.alpha);
}

/**
 * D2 from the chi1 zero and D1 from the chi2 zeros with gamma_j <= e^u,
 * both with the leading term x^rho/(rho u) only. Samples are split into
 * ||tu/pi - alpha|| > u^-0.9 (a3 is extreme when |D2| dominates) and the
 * rest (D1 > 0). Window statistics use B_j = W e^{(-delta_j + i gamma_j)u} /
 * (i gamma_j) for u^{1/4} <= j <= u^{2/5}.
 */
inline GshProfile gsh_evaluate(const GshBarrier& g, std::span<const long double> us) {
  constexpr long double pi = std::numbers::pi_v<long double>;
  const auto& a = g.labeled.a;
  const std::complex<long double> W3 = std::conj(g.chi2.value(a[1])) - std::conj(g.chi2.value(a[2]));
  const std::complex<long double> rho1(g.sigma1, g.t);
  GshProfile out;
  auto& prof = out.profile;
  prof.excluded = g.excluded;
  bool all_certified = true;
  long double margin = std::numeric_limits<long double>::infinity();
  for (long double u : us) {
    detail::require(u >= 10.0L, "GSH simulation needs u >= 10");
    long double cut = u < 11000.0L ? std::exp(u) : std::numeric_limits<long double>::infinity();
    long double lo = std::pow(u, 0.25L), hi = std::pow(u, 0.4L);
    detail::require(static_cast<long double>(g.J) >= hi, "GSH truncation J is below u^{2/5}");
    long double turns = frac(g.t * u / pi);  // 2 t h u / (2 pi) = h * turns (mod 1)

    std::complex<long double> e1 = std::polar(1.0L, 2.0L * pi * frac(g.t * u / (2.0L * pi)));
    long double d2 = 2.0L * std::real(e1 * g.Z / rho1);

    long double s1 = 0.0L, s3 = 0.0L, win_re = 0.0L, win_abs = 0.0L;
    bool reg2 = gsh_phase_offset(g, u) <= std::pow(u, -0.9L);
    for (std::size_t i = 0; i < g.J && g.gamma[i] <= cut; ++i) {
      auto th = static_cast<double>(2.0L * pi * frac(static_cast<long double>(g.h[i]) * turns) + g.xi[i] * u);
      auto damp = std::exp(-static_cast<double>(g.delta[i] * u));
      std::complex<long double> e(damp * std::cos(th), damp * std::sin(th));
      std::complex<long double> rho(g.sigma2 - g.delta[i], g.gamma[i]);
      s1 += 2.0L * std::real(g.W * e / rho);
      s3 += 2.0L * std::real(W3 * e / rho);
      long double j = static_cast<long double>(i + 1);
      if (reg2 && j >= lo && j <= hi) {
        std::complex<long double> B = g.W * e / std::complex<long double>(0.0L, g.gamma[i]);
        long double ph = dist_to_int(std::arg(B) / (2.0L * pi));
        ++out.window_terms;
        if (ph <= 0.21L) ++out.window_phase_ok;
        out.max_window_phase = std::max(out.max_window_phase, ph);
        win_re += std::real(B);
        win_abs += std::abs(B);
      }
    }
    long double scale = std::exp((g.sigma2 - g.sigma1) * u);
    long double D1 = s1 * scale, D2 = d2 + s3 * scale;
    auto ord = ordering_of(D1, 0.0L, D2);
    std::size_t bucket = ord ? permutation_rank(*ord) : kTieBucket;
    prof.u.push_back(u);
    prof.D1.push_back(D1);
    prof.D2.push_back(D2);
    prof.ordering.push_back(bucket);
    ++prof.histogram[bucket];
    out.d1_main.push_back(s1);
    out.d2_main.push_back(d2);
    out.regime.push_back(reg2 ? 2 : 1);
    if (reg2) {
      ++out.regime2;
      if (s1 > 0.0L) ++out.regime2_positive;
      else all_certified = false;
      margin = std::min(margin, s1);
      if (win_abs > 0.0L) out.min_window_ratio = std::min(out.min_window_ratio, win_re / win_abs);
    } else {
      ++out.regime1;
      long double slack = std::fabs(d2) - std::fabs(s3) * scale - std::fabs(s1) * scale;
      if (slack > 0.0L) ++out.regime1_dominant;
      else all_certified = false;
      margin = std::min(margin, slack);
    }
  }
  prof.margin = prof.main_margin = us.empty() ? 0.0L : margin;
  prof.verified = all_certified && prof.excluded_count() == 0;
  return out;
}

inline GshProfile gsh_simulate(const GshBarrier& g, long double u0, long double u1, std::size_t n) {
  detail::require(n >= 2 && u1 > u0, "GSH simulation needs n >= 2 and u0 < u1");
  std::vector<long double> us(n);
  for (std::size_t k = 0; k < n; ++k)
    us[k] = u0 + (u1 - u0) * static_cast<long double>(k) / static_cast<long double>(n - 1);
  return gsh_evaluate(g, us);
}

/// n points of [u0, u1] with ||tu/pi - alpha|| <= u^-0.9, spread over the offset range.
inline std::vector<long double> gsh_regime2_points(const GshBarrier& g, long double u0, long double u1,
                                                   std::size_t n) {
  detail::require(n >= 2 && u1 > u0, "regime 2 sampling needs n >= 2 and u0 < u1");
  constexpr long double pi = std::numbers::pi_v<long double>;
  std::vector<long double> us;
  for (std::size_t k = 0; k < n; ++k) {
    long double f = static_cast<long double>(k) / static_cast<long double>(n - 1);
    long double target = u0 + (u1 - u0) * f;
    long double m = std::nearbyint(g.t * target / pi - g.alpha);
    long double s = 2.0L * frac(0.6180339887498948482L * static_cast<long double>(k)) - 1.0L;
    long double base = pi * (m + g.alpha) / g.t;
    long double u = pi * (m + g.alpha + 0.999L * s * std::pow(base, -0.9L)) / g.t;
    if (u >= u0 && u <= u1) us.push_back(u);
  }
  return us;
}

}  // namespace racebar

#endif
