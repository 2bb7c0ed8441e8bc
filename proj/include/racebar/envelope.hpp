#ifndef RACEBAR_ENVELOPE_HPP
#define RACEBAR_ENVELOPE_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>

#include "racebar/errors.hpp"

namespace racebar {

/// The crossing point of h(y; lambda) = cos y + lambda cos 2y on [0, pi].
template <class T>
T v_lambda_t(const T& lambda) {
  using std::acos, std::sqrt;
  return acos((T(-1) + sqrt(T(8) * lambda * lambda + T(1))) / (T(4) * lambda));
}

inline long double v_lambda(long double lambda) {
  detail::require(lambda > 0.0L && lambda < 1.0L, "v_lambda: lambda must lie in (0, 1)");
  return v_lambda_t<long double>(lambda);
}

inline long double h_lambda(long double y, long double lambda) {
  return std::cos(y) + lambda * std::cos(2.0L * y);
}

/// g_j(y) = c1 sin(pi d) cos y + (c2/2) sin(2 pi d) cos 2y.
inline long double g_envelope(long double y, long double d, long double c1, long double c2) {
  constexpr long double pi = std::numbers::pi_v<long double>;
  return c1 * std::sin(pi * d) * std::cos(y) + 0.5L * c2 * std::sin(2.0L * pi * d) * std::cos(2.0L * y);
}

struct Extremum {
  long double value;
  long double arg;
};

/// max over one period [0, 2 pi) of a continuous function: grid plus zooming.
inline Extremum maximize_periodic(const std::function<long double(long double)>& f,
                                  std::size_t grid = 1 << 16) {
  constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  Extremum best{-std::numeric_limits<long double>::infinity(), 0.0L};
  for (std::size_t i = 0; i < grid; ++i) {
    long double y = two_pi * static_cast<long double>(i) / static_cast<long double>(grid);
    long double v = f(y);
    if (v > best.value) best = {v, y};
  }
  long double step = two_pi / static_cast<long double>(grid);
  for (int round = 0; round < 40 && step > 1e-18L; ++round) {
    Extremum local = best;
    for (int i = -32; i <= 32; ++i) {
      long double y = best.arg + step * static_cast<long double>(i) / 16.0L;
      long double v = f(y);
      if (v > local.value) local = {v, y};
    }
    best = local;
    step /= 8.0L;
  }
  best.arg = std::fmod(best.arg, two_pi);
  if (best.arg < 0.0L) best.arg += two_pi;
  return best;
}

/// delta = -max_y min(g1(y), g2(y - pi(d1 + d2))), with the maximizing y.
inline Extremum envelope_min(long double d1, long double d2, long double c1, long double c2) {
  constexpr long double pi = std::numbers::pi_v<long double>;
  for (long double d : {d1, d2}) {
    long double lambda = (c2 / c1) * std::cos(pi * d);
    detail::require(lambda > 0.0L && lambda < 1.0L, "envelope_min: lambda outside (0, 1)");
  }
  long double shift = pi * (d1 + d2);
  auto f = [&](long double y) {
    return std::min(g_envelope(y, d1, c1, c2), g_envelope(y - shift, d2, c1, c2));
  };
  auto m = maximize_periodic(f);
  return {-m.value, m.arg};
}

/// max_u min(2 cos u + cos 2u, -2 cos u + cos 2u) on an n-point grid of one period.
inline Extremum cosine_envelope_max(std::size_t n) {
  constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  Extremum best{-std::numeric_limits<long double>::infinity(), 0.0L};
  for (std::size_t i = 0; i < n; ++i) {
    long double u = two_pi * static_cast<long double>(i) / static_cast<long double>(n);
    long double c = std::cos(u), c2 = std::cos(2.0L * u);
    long double v = std::min(2.0L * c + c2, -2.0L * c + c2);
    if (v > best.value) best = {v, u};
  }
  return best;
}

}  // namespace racebar

#endif  // RACEBAR_ENVELOPE_HPP
