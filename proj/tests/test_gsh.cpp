#include <gtest/gtest.h>

#include "racebar/gsh.hpp"

using namespace racebar;

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

long double nearest_int_distance(long double x) { return std::fabs(x - std::round(x)); }

bool member(Int h, long double alpha, long double beta_phase) {
  return nearest_int_distance(static_cast<long double>(h) * alpha + beta_phase) <= 0.2L;
}

std::complex<long double> conj_root(const RationalAngle& r) {
  long double t = 2 * kPi * r.turns();
  return {std::cos(t), -std::sin(t)};
}

const GshBarrier& seven() {
  static const GshBarrier g = construction_gsh(RaceTriple(7, 1, 2, 5));
  return g;
}

}  // namespace

TEST(Gsh, Structure) {
  for (const auto& D : {RaceTriple(7, 1, 2, 5), RaceTriple(13, 1, 3, 2)}) {
    auto g = construction_gsh(D);
    EXPECT_EQ(check_gsh(g), "") << D.str();
    const auto& a = g.labeled.a;
    EXPECT_EQ(g.chi1(a[0]), g.chi1(a[1]));
    EXPECT_NE(g.chi1(a[1]), g.chi1(a[2]));
    EXPECT_NE(g.chi2(a[0]), g.chi2(a[1]));
    EXPECT_GE(g.t, 1000.0L);
    EXPECT_EQ(g.h.size(), 10000u);
    EXPECT_EQ(g.excluded, (Permutation{1, 2, 0}));
    // phases recomputed from the character angles
    auto Z = conj_root(g.chi1(a[1])) - conj_root(g.chi1(a[2]));
    auto W = conj_root(g.chi2(a[1])) - conj_root(g.chi2(a[0]));
    long double alpha = -(std::atan(g.sigma1 / g.t) + std::arg(Z)) / kPi;
    EXPECT_NEAR(g.alpha, alpha, 1e-15L);
    EXPECT_NEAR(g.beta_phase, std::arg(W) / (2 * kPi) - 0.25L, 1e-15L);
    long double na = nearest_int_distance(alpha);
    EXPECT_GE(na, 1.0L / (10.0L * g.t));
    EXPECT_LE(na, 0.5L - 1.0L / (10.0L * g.t));
  }
}

TEST(Gsh, HeightsAreLeastAdmissible) {
  const auto& g = seven();
  Int prev = -1;
  for (std::size_t i = 0; i < g.h.size(); ++i) {
    auto j = static_cast<Int>(i + 1);
    Int from = std::max(j * j, prev + 1);
    ASSERT_TRUE(member(g.h[i], g.alpha, g.beta_phase)) << j;
    ASSERT_GE(g.h[i], from);
    if (i < 200)
      for (Int h = from; h < g.h[i]; ++h) ASSERT_FALSE(member(h, g.alpha, g.beta_phase)) << j;
    long double jl = static_cast<long double>(j);
    EXPECT_NEAR(g.delta[i], g.c_delta / (jl * jl * jl), 1e-18L);
    EXPECT_GT(g.gamma[i], 2 * g.t * static_cast<long double>(g.h[i]) - 1e-6L);
    prev = g.h[i];
  }
  EXPECT_NEAR(g.c_delta, (g.sigma2 - g.beta) / 2, 1e-18L);
}

TEST(Gsh, HeightGapBelowTenT) {
  for (const auto& D : {RaceTriple(7, 1, 2, 5), RaceTriple(13, 1, 3, 2)}) {
    auto g = construction_gsh(D);
    Int gap = 0, run = 0;
    for (Int h = 0; h <= 1000000; ++h) {
      run = member(h, g.alpha, g.beta_phase) ? 0 : run + 1;
      gap = std::max(gap, run);
    }
    EXPECT_LE(gap, static_cast<Int>(10.0L * g.t)) << D.str();
    EXPECT_EQ(gap, longest_h_gap(g.alpha, g.beta_phase, 0, 1000000));
  }
}

TEST(Gsh, RegimeTwoPositivity) {
  const auto& g = seven();
  auto us = gsh_regime2_points(g, 1e5L, 1e6L, 200);
  ASSERT_GT(us.size(), 150u);
  for (long double u : us) EXPECT_LE(nearest_int_distance(g.t * u / kPi - g.alpha), std::pow(u, -0.9L));
  auto prof = gsh_evaluate(g, us);
  EXPECT_EQ(prof.regime2, us.size());
  EXPECT_EQ(prof.regime2_positive, prof.regime2);
}

TEST(Gsh, RegimeOneDominance) {
  const auto& g = seven();
  auto prof = gsh_simulate(g, 1e5L, 1.001e5L, 400);
  EXPECT_GT(prof.regime1, 0u);
  EXPECT_EQ(prof.regime1_dominant, prof.regime1);
  EXPECT_EQ(prof.profile.excluded_count(), 0u);
}

TEST(Gsh, TailDecay) {
  const auto& g = seven();
  auto fit = gsh_tail_fit(g, 10.0L, 1e9L, 33);
  ASSERT_EQ(fit.u.size(), 33u);
  for (std::size_t k = 1; k < fit.tail.size(); ++k) EXPECT_LT(fit.tail[k], fit.tail[k - 1]);
  for (std::size_t k = 0; k < fit.u.size(); ++k) EXPECT_LE(fit.tail[k] * std::pow(fit.u[k], 0.75L), fit.C * (1 + 1e-12L));
  EXPECT_GT(fit.C, 0.0L);
  EXPECT_LT(fit.C, 1e-6L);
  long double direct = 0;
  for (std::size_t i = 0; i < g.J; ++i) {
    long double gm = 2 * g.t * static_cast<long double>(g.h[i]) + g.xi[i];
    direct += std::exp(-g.delta[i] * 1e4L) / (gm * gm);
  }
  EXPECT_NEAR(gsh_tail_sum(g, 1e4L), direct, 1e-12L * direct);
}

TEST(Gsh, Errors) {
  EXPECT_THROW(construction_gsh(RaceTriple(11, 1, 3, 5)), ConstructionError);
  const auto& g = seven();
  EXPECT_THROW(gsh_simulate(g, 5.0L, 20.0L, 10), ValidationError);
  GshParams p;
  p.J = 10;
  auto small = construction_gsh(RaceTriple(7, 1, 2, 5), p);
  EXPECT_THROW(gsh_simulate(small, 1e5L, 2e5L, 10), ValidationError);
}
