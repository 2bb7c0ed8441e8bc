#ifndef RACEBAR_CONSTRUCTION_ONE_HPP
#define RACEBAR_CONSTRUCTION_ONE_HPP

#include <cmath>
#include <complex>
#include <numbers>

#include "racebar/separating_set.hpp"

namespace racebar {

/// arg z in [-pi, pi).
inline long double arg_half_open(std::complex<long double> z) {
  long double a = std::arg(z);
  return a >= std::numbers::pi_v<long double> ? a - 2.0L * std::numbers::pi_v<long double> : a;
}

inline long double frac(long double x) { return x - std::floor(x); }

struct PhaseData {
  std::complex<long double> W, Z;
  long double B;        // {(arg W - 2 arg Z)/pi} - 1/2
  long double B_shift;  // B + 1/2
  long double F;        // 2 atan(sigma1/t) - atan(sigma2/(2t))
  long double C0;       // phase of the D1 term where the D2 term vanishes
};

inline PhaseData construction_one_phases(const SeparatingSet& s, long double sigma1, long double sigma2,
                                         long double t) {
  const auto& a = s.labeled.a;
  PhaseData ph;
  ph.W = std::conj(s.chi2.value(a[1])) - std::conj(s.chi2.value(a[0]));
  ph.Z = 0;
  for (const auto& chi : s.S) ph.Z += std::conj(chi.value(a[1])) - std::conj(chi.value(a[2]));
  constexpr long double pi = std::numbers::pi_v<long double>;
  long double phi = arg_half_open(ph.W) - 2.0L * arg_half_open(ph.Z);
  ph.B_shift = frac(phi / pi);
  ph.B = ph.B_shift - 0.5L;
  ph.F = 2.0L * std::atan(sigma1 / t) - std::atan(sigma2 / (2.0L * t));
  ph.C0 = phi - pi / 2.0L - ph.F;
  return ph;
}

/**
 * Simple zeros at sigma1 + it for each chi in S and at sigma2 + 2it for chi2.
 * t is doubled from params.t until the phase of the D1 term at the zeros of
 * the D2 term stays clear of pi/2 (mod pi).
 */
inline Barrier construction_one(const RaceTriple& D, const SeparatingSet& s, const BarrierParams& params) {
  const long double s1 = params.sigma1, s2 = params.sigma2;
  detail::require(params.beta1 >= 0.5L && params.beta1 < s2 && s2 < s1,
                  "construction I needs 1/2 <= beta1 < sigma2 < sigma1");
  detail::require(s1 <= std::min(params.sigma_cap, static_cast<long double>(0.501)), "construction I needs sigma1 <= min(sigma, 0.501)");
  detail::require(params.t > 0.0L, "construction I needs t > 0");
  detail::require(s.labeled == D.relabel(s.relabeling), "construction I: set does not match the triple");
  detail::ensure(detail::separating_holds(s.S, s.labeled), "construction I: S fails the separating-set condition");
  detail::ensure(s.chi2.root_index(s.labeled.a[0]) != s.chi2.root_index(s.labeled.a[1]),
                 "construction I: chi2 does not separate a1 and a2");

  constexpr long double tiny = 1e-12L;
  long double t = std::max(params.t, 1.0L);
  while (t <= params.tau) t *= 2.0L;
  PhaseData ph;
  for (int iter = 0;; ++iter) {
    if (iter > 60) throw ConstructionError("construction I: no admissible t found");
    ph = construction_one_phases(s, s1, s2, t);
    if (std::abs(ph.W) < tiny || std::abs(ph.Z) < tiny)
      throw ConstructionError("construction I: W or Z vanishes");
    bool b_ok = std::abs(ph.B) < tiny || std::abs(ph.B) > 2.0L / t;
    bool shift_ok = ph.B_shift < tiny || ph.B_shift > 1.0L - tiny || ph.B_shift > 2.0L / t;
    bool cos_ok = std::abs(std::cos(ph.C0)) > 1.0L / (4.0L * t);
    if (b_ok && shift_ok && cos_ok) break;
    t *= 2.0L;
  }

  Barrier b;
  b.triple = D;
  b.relabeling = s.relabeling;
  b.labeled = s.labeled;
  b.construction = Construction::I;
  b.beta1 = params.beta1;
  for (const auto& chi : s.S) b.zeros.push_back({chi, s1, t, 1});
  b.zeros.push_back({s.chi2, s2, 2.0L * t, 1});
  // cos C0 > 0: D1 > 0 wherever D2 changes sign, so a2 > a3 > a1 never happens
  b.excluded = std::cos(ph.C0) > 0.0L ? Permutation{1, 2, 0} : Permutation{0, 2, 1};
  b.verification_u = verification_window(b.beta1, b.sigma_min(), b.gamma_max());
  b.parameters = {{"sigma1", static_cast<double>(s1)},
                  {"sigma2", static_cast<double>(s2)},
                  {"beta1", static_cast<double>(params.beta1)},
                  {"t", static_cast<double>(t)}};
  b.margins = {{"B", static_cast<double>(ph.B)},
               {"B_shift", static_cast<double>(ph.B_shift)},
               {"F", static_cast<double>(ph.F)},
               {"cos_C0", static_cast<double>(std::cos(ph.C0))}};
  check_barrier(b);
  detail::ensure(b.size() == static_cast<Int>(s.S.size()) + 1, "construction I: |B| != |S| + 1");
  return b;
}

}  // namespace racebar

#endif  // RACEBAR_CONSTRUCTION_ONE_HPP
