#ifndef RACEBAR_CONSTRUCTION_THREE_HPP
#define RACEBAR_CONSTRUCTION_THREE_HPP

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "racebar/envelope.hpp"
#include "racebar/separating_set.hpp"

namespace racebar {

struct Order7Character {
  DirichletCharacter chi;
  Int h, k;
};

namespace detail {

/// The two sides of the real-part condition (powers 1 and 2) or the imaginary-part condition
/// (powers h and k), with chi^e(a_j) = e(e * n_j / N).
template <class T>
std::pair<T, T> determinant_sides(const std::array<Int, 3>& n, Int N, Int e1, Int e2, bool imaginary) {
  using std::cos, std::sin;
  const T two_pi = T(2) * boost::math::constants::pi<T>();
  auto part = [&](Int e, int j) {
    T ang = two_pi * T(floor_mod(e * n[j], N)) / T(N);
    return imaginary ? sin(ang) : cos(ang);
  };
  T lhs = (part(e1, 2) - part(e1, 1)) * (part(e2, 1) - part(e2, 0));
  T rhs = (part(e1, 1) - part(e1, 0)) * (part(e2, 2) - part(e2, 1));
  return {lhs, rhs};
}

/// Decides lhs != rhs: long double with slack, then 50 digits on near ties.
inline bool sides_differ(const std::array<Int, 3>& n, Int N, Int e1, Int e2, bool imaginary) {
  auto [l, r] = determinant_sides<long double>(n, N, e1, e2, imaginary);
  if (std::abs(l - r) > 1e-9L) return true;
  using Big = boost::multiprecision::cpp_bin_float_50;
  auto [bl, br] = determinant_sides<Big>(n, N, e1, e2, imaginary);
  return abs(bl - br) > Big("1e-40");
}

}  // namespace detail

/**
 * First character (canonical order) with chi(a1) != chi(a2) satisfying the order-7
 * phase conditions for the first (h, k) among (1,2), (1,3), (2,3).
 */
inline Order7Character find_order7_character(const RaceTriple& D, const CharacterGroup& cg) {
  const Int N = cg.group()->exponent();
  for (const auto& chi : cg.nonprincipal()) {
    std::array<Int, 3> n{chi.root_index(D.a[0]), chi.root_index(D.a[1]), chi.root_index(D.a[2])};
    if (n[0] == n[1]) continue;
    if (!detail::sides_differ(n, N, 1, 2, false)) continue;
    for (auto [h, k] : {std::pair<Int, Int>{1, 2}, {1, 3}, {2, 3}}) {
      if (!detail::sides_differ(n, N, h, k, true)) continue;
      detail::ensure(chi.order() >= 7, "find_order7_character: character of order below 7; a separating set exists");
      return {chi, h, k};
    }
  }
  throw ConstructionError("find_order7_character: no character satisfies the order-7 phase conditions");
}

/// lambda indexed by character index; the principal entry is unused and 0.
struct LambdaSolution {
  std::vector<long double> lambda;
  long double shift;     // y
  long double residual;  // max error in the weight system
};

/// The two sums of the weight system for weights w over the labeled triple.
inline std::pair<std::complex<long double>, std::complex<long double>> lambda_sums(
    const RaceTriple& D, const CharacterGroup& cg, const std::vector<long double>& w) {
  std::complex<long double> s1 = 0, s2 = 0;
  for (std::size_t i = 1; i < cg.size(); ++i) {
    if (w[i] == 0.0L) continue;
    auto v1 = std::conj(cg[i].value(D.a[0])), v2 = std::conj(cg[i].value(D.a[1])),
         v3 = std::conj(cg[i].value(D.a[2]));
    s1 += w[i] * (v2 - v1);
    s2 += w[i] * (v3 - v2);
  }
  return {s1, s2};
}

/**
 * Non-negative lambda_chi with
 *   z1 = sum lambda_chi (conj chi(a2) - conj chi(a1)),
 *   z2 = sum lambda_chi (conj chi(a3) - conj chi(a2)).
 * Real parts come from chi0, chi0^2 and their conjugates, imaginary parts
 * from chi0^h, chi0^k and their conjugates (weight -l on chi0^e, +l on the
 * conjugate, as conj(w) - w = -2i Im w); then everything is shifted by
 * y = max(0, -min theta), which is harmless because sum_{C_q} chi(a) = -1.
 */
inline LambdaSolution solve_lambda_system(const RaceTriple& D, const CharacterGroup& cg,
                                          const Order7Character& o, std::complex<long double> z1,
                                          std::complex<long double> z2) {
  const auto& chi0 = o.chi;
  auto val = [&](Int e, int j) { return chi0.pow(e).value(D.a[j]); };
  auto solve2 = [](long double a11, long double a12, long double a21, long double a22, long double b1,
                   long double b2) {
    long double det = a11 * a22 - a12 * a21;
    detail::ensure(std::abs(det) > 1e-14L, "solve_lambda_system: singular 2x2 system");
    return std::pair{(b1 * a22 - a12 * b2) / det, (a11 * b2 - b1 * a21) / det};
  };
  auto [l1, l2] = solve2((val(1, 1) - val(1, 0)).real(), (val(2, 1) - val(2, 0)).real(),
                         (val(1, 2) - val(1, 1)).real(), (val(2, 2) - val(2, 1)).real(), z1.real() / 2.0L,
                         z2.real() / 2.0L);
  auto [l3, l4] = solve2((val(o.h, 1) - val(o.h, 0)).imag(), (val(o.k, 1) - val(o.k, 0)).imag(),
                         (val(o.h, 2) - val(o.h, 1)).imag(), (val(o.k, 2) - val(o.k, 1)).imag(),
                         z1.imag() / 2.0L, z2.imag() / 2.0L);
  std::vector<long double> theta(cg.size(), 0.0L);
  auto add = [&](const DirichletCharacter& c, long double x) { theta[c.index()] += x; };
  add(chi0, l1);
  add(chi0.conj(), l1);
  add(chi0.pow(2), l2);
  add(chi0.pow(2).conj(), l2);
  add(chi0.pow(o.h), -l3);
  add(chi0.pow(o.h).conj(), l3);
  add(chi0.pow(o.k), -l4);
  add(chi0.pow(o.k).conj(), l4);

  LambdaSolution sol;
  long double lowest = 0.0L;
  for (std::size_t i = 1; i < theta.size(); ++i) lowest = std::min(lowest, theta[i]);
  sol.shift = -lowest;
  sol.lambda = theta;
  sol.lambda[0] = 0.0L;
  for (std::size_t i = 1; i < theta.size(); ++i) sol.lambda[i] = std::max(0.0L, theta[i] + sol.shift);
  for (Int a : D.a) detail::ensure(a != 1, "solve_lambda_system: a residue is 1, the shift identity fails");
  auto [s1, s2] = lambda_sums(D, cg, sol.lambda);
  sol.residual = std::max(std::abs(s1 - z1), std::abs(s2 - z2));
  long double scale = std::max(1.0L, std::abs(z1) + std::abs(z2));
  detail::ensure(sol.residual < 1e-10L * scale, "solve_lambda_system: residual of the weight system too large");
  return sol;
}

struct Rationalization {
  Int Q;
  std::vector<Int> N;   // per character index
  long double error;    // max |nu - N/Q|
};

/// Smallest power of ten Q <= 10^6 with max |nu - round(Q nu)/Q| < epsilon.
inline Rationalization rationalize(const std::vector<std::vector<long double>>& nus, long double epsilon) {
  detail::require(epsilon > 0.0L, "rationalize: epsilon must be positive");
  long double best = std::numeric_limits<long double>::infinity();
  for (Int Q = 1; Q <= 1'000'000; Q *= 10) {
    long double err = 0.0L;
    for (const auto& nu : nus)
      for (long double x : nu) err = std::max(err, std::abs(x - std::round(x * Q) / Q));
    best = std::min(best, err);
    if (err < epsilon) return {Q, {}, err};
  }
  throw ConstructionError("construction III: epsilon too small for Q <= 10^6; best achievable error is " +
                          std::to_string(static_cast<double>(best)));
}

/**
 * Zeros at sigma1 + i k gamma (k = 1, 2) of order N^{(k)}_chi for each chi,
 * where N^{(k)} / Q approximates weights nu^{(k)} solving the weight system with targets
 * (i, -i) and (i, i). pi(a1) > pi(a2) > pi(a3) is excluded.
 */
inline Barrier construction_three(const RaceTriple& D, const CharacterGroup& cg, const BarrierParams& params) {
  const long double s1 = params.sigma1;
  detail::require(params.beta1 >= 0.5L && params.beta1 < s1 && s1 <= params.sigma_cap,
                  "construction III needs 1/2 <= beta1 < sigma1 <= sigma");
  detail::require(params.gamma > 0.0L, "construction III needs gamma > 0");
  const std::complex<long double> I{0.0L, 1.0L};
  auto o = find_order7_character(D, cg);
  auto nu1 = solve_lambda_system(D, cg, o, I, -I);
  auto nu2 = solve_lambda_system(D, cg, o, I, I);
  auto rat = rationalize({nu1.lambda, nu2.lambda}, params.epsilon);
  const Int Q = rat.Q;
  std::array<std::vector<Int>, 2> N;
  std::array<std::vector<long double>, 2> w;
  for (int k = 0; k < 2; ++k) {
    const auto& nu = k == 0 ? nu1.lambda : nu2.lambda;
    for (long double x : nu) {
      N[k].push_back(static_cast<Int>(std::llround(x * Q)));
      w[k].push_back(static_cast<long double>(N[k].back()) / static_cast<long double>(Q));
    }
  }
  auto [P1, R1] = lambda_sums(D, cg, w[0]);
  auto [P2, R2] = lambda_sums(D, cg, w[1]);
  long double dev = std::max({std::abs(P1 - I), std::abs(R1 + I), std::abs(P2 - I), std::abs(R2 - I)});
  // normalized by Q / gamma: D1 ~ 2 Re(-i P1 e^{iy}) + Re(-i P2 e^{2iy}), D2 likewise with R
  auto f = [&](long double y, std::complex<long double> A, std::complex<long double> B) {
    std::complex<long double> e1{std::cos(y), std::sin(y)}, e2{std::cos(2 * y), std::sin(2 * y)};
    return 2.0L * (-I * A * e1).real() + (-I * B * e2).real();
  };
  auto env = maximize_periodic([&](long double y) { return std::min(f(y, P1, P2), f(y, R1, R2)); });
  detail::ensure(env.value <= -1.0L + 3.0L * dev + 1e-12L,
                 "construction III: envelope exceeds -1 + 3 * deviation");
  detail::ensure(env.value < 0.0L, "construction III: envelope is not negative");

  long double gamma = params.gamma;
  while (gamma <= params.tau) gamma *= 2.0L;
  long double spread = 2.0L * (std::abs(P1) + std::abs(R1)) + std::abs(P2) + std::abs(R2);
  for (int i = 0; -env.value <= 2.0L * spread * s1 / gamma; ++i) {
    if (i > 60) throw ConstructionError("construction III: no admissible gamma");
    gamma *= 2.0L;
  }

  Barrier b;
  b.triple = D;
  b.relabeling = {0, 1, 2};
  b.labeled = D;
  b.construction = Construction::III;
  b.beta1 = params.beta1;
  for (int k = 0; k < 2; ++k)
    for (std::size_t i = 1; i < cg.size(); ++i)
      if (N[k][i] > 0) b.zeros.push_back({cg[i], s1, static_cast<long double>(k + 1) * gamma, N[k][i]});
  b.excluded = {0, 1, 2};
  b.verification_u = verification_window(b.beta1, b.sigma_min(), b.gamma_max());
  b.parameters = {{"sigma1", static_cast<double>(s1)},
                  {"beta1", static_cast<double>(params.beta1)},
                  {"gamma", static_cast<double>(gamma)},
                  {"epsilon", static_cast<double>(params.epsilon)},
                  {"Q", static_cast<double>(Q)},
                  {"chi0", static_cast<double>(o.chi.index())},
                  {"h", static_cast<double>(o.h)},
                  {"k", static_cast<double>(o.k)}};
  b.margins = {{"rationalization_error", static_cast<double>(rat.error)},
               {"target_deviation", static_cast<double>(dev)},
               {"envelope_max", static_cast<double>(env.value)},
               {"lambda_residual", static_cast<double>(std::max(nu1.residual, nu2.residual))}};
  check_barrier(b);
  return b;
}

}  // namespace racebar

#endif  // RACEBAR_CONSTRUCTION_THREE_HPP
