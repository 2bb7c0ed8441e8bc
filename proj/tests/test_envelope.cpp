#include <gtest/gtest.h>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "racebar/construction_two.hpp"

using namespace racebar;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

// pi (d1 + d2) - v(l1) - v(l2) with v(l) = acos((sqrt(8 l^2 + 1) - 1) / (4 l)), 50 digits.
Big margin_oracle(int c1, int c2, int n1, int m1, int n2, int m2) {
  const Big pi = boost::math::constants::pi<Big>();
  Big d1 = Big(n1) / m1, d2 = Big(n2) / m2;
  auto v = [](const Big& l) { return acos((sqrt(8 * l * l + 1) - 1) / (4 * l)); };
  Big l1 = Big(c2) / c1 * cos(pi * d1), l2 = Big(c2) / c1 * cos(pi * d2);
  return pi * (d1 + d2) - v(l1) - v(l2);
}

}  // namespace

TEST(VLambda, Endpoints) {
  EXPECT_NEAR(v_lambda_t<long double>(1.0L), kPi / 3.0L, 1e-15L);
  // v = pi/2 - lambda + O(lambda^3)
  EXPECT_NEAR(v_lambda(1e-8L), kPi / 2.0L - 1e-8L, 1e-12L);
  EXPECT_THROW(v_lambda(1.0L), ValidationError);
  EXPECT_THROW(v_lambda(0.0L), ValidationError);
}

TEST(VLambda, Decreasing) {
  long double prev = kPi / 2.0L;
  for (int i = 1; i < 1000; ++i) {
    long double v = v_lambda(i / 1000.0L);
    EXPECT_LT(v, prev);
    EXPECT_GT(v, kPi / 3.0L);
    prev = v;
  }
}

TEST(VLambda, SignStructure) {
  for (long double lambda : {0.05L, 0.3L, 0.618L, 0.97L}) {
    long double v = v_lambda(lambda);
    EXPECT_NEAR(h_lambda(v, lambda), 0.0L, 1e-15L);
    for (int i = 0; i <= 400; ++i) {
      long double y = kPi * i / 400.0L;
      if (y < v - 1e-9L) EXPECT_GT(h_lambda(y, lambda), 0.0L) << y;
      if (y > v + 1e-9L) EXPECT_LT(h_lambda(y, lambda), 0.0L) << y;
    }
  }
}

TEST(Verify34, SpecialPairsAgainstOracle) {
  struct Case {
    int c1, c2, n1, m1, n2, m2;
    const char* expected;
  };
  for (const auto& c : {Case{5, 9, 6, 19, 9, 19, "0.0022809497852887524221"},
                        Case{3, 5, 12, 37, 16, 37, "0.0284878889069421376529"}}) {
    auto r = verify_34(c.c1, c.c2, Fraction(c.n1, c.m1), Fraction(c.n2, c.m2));
    Big oracle = margin_oracle(c.c1, c.c2, c.n1, c.m1, c.n2, c.m2);
    EXPECT_TRUE(r.holds);
    EXPECT_GT(oracle, 0);
    EXPECT_LT(abs(oracle - Big(c.expected)), Big("1e-22"));
    EXPECT_LT(abs(Big(r.margin) - oracle), Big("1e-17"));
  }
}

TEST(Verify34, GenericBranch) {
  // d1 > 1/3 forces z_j < pi d_j for each j
  auto r = verify_34(1, 2, Fraction(7, 20), Fraction(2, 5));
  EXPECT_TRUE(r.holds);
  EXPECT_LT(r.z1, kPi * 0.35L);
  EXPECT_LT(r.z2, kPi * 0.40L);
  for (int m = 7; m <= 101; m += 2)
    for (int a = 1; a < m; ++a)
      for (int b = a; a + b < m; ++b) {
        Fraction d1(a, m), d2(b, m);
        if (!(Fraction(1, 3) < d1 && d2 < Fraction(1, 2))) continue;
        auto v = verify_34(1, 2, d1, d2);
        EXPECT_TRUE(v.holds) << a << "/" << m << " " << b << "/" << m;
        EXPECT_GT(v.margin, 0.0L);
        EXPECT_NEAR(static_cast<double>(v.margin),
                    static_cast<double>(margin_oracle(1, 2, a, m, b, m)), 1e-15);
      }
}

TEST(Envelope, DeltaMatchesGrid) {
  struct Case {
    long double d1, d2, c1, c2;
  };
  for (const auto& c : {Case{0.35L, 0.40L, 1, 2}, Case{6.0L / 19, 9.0L / 19, 5, 9}, Case{12.0L / 37, 16.0L / 37, 3, 5},
                        Case{0.4L, 0.45L, 1, 2}}) {
    auto env = envelope_min(c.d1, c.d2, c.c1, c.c2);
    EXPECT_GT(env.value, 0.0L);
    // independent grid, then golden-section search around the best cell
    auto f = [&](long double y) {
      long double g1 = c.c1 * std::sin(kPi * c.d1) * std::cos(y) +
                       c.c2 / 2.0L * std::sin(2.0L * kPi * c.d1) * std::cos(2.0L * y);
      long double z = y - kPi * (c.d1 + c.d2);
      long double g2 = c.c1 * std::sin(kPi * c.d2) * std::cos(z) +
                       c.c2 / 2.0L * std::sin(2.0L * kPi * c.d2) * std::cos(2.0L * z);
      return std::min(g1, g2);
    };
    const int n = 200000;
    const long double step = 2.0L * kPi / n;
    long double best_y = 0.0L, worst = -1e9L;
    for (int i = 0; i < n; ++i)
      if (long double v = f(step * i); v > worst) worst = v, best_y = step * i;
    EXPECT_LE(worst, -env.value + 1e-12L);
    long double lo = best_y - step, hi = best_y + step;
    const long double r = (std::sqrt(5.0L) - 1.0L) / 2.0L;
    for (int it = 0; it < 200; ++it) {
      long double a = hi - r * (hi - lo), b = lo + r * (hi - lo);
      if (f(a) < f(b)) lo = a; else hi = b;
    }
    long double refined = f((lo + hi) / 2.0L);
    EXPECT_LE(refined, -env.value + 1e-12L);
    EXPECT_NEAR(static_cast<double>(refined), static_cast<double>(-env.value), 1e-12);
  }
}

TEST(Envelope, CosineIdentity) {
  auto m = cosine_envelope_max(1000000);
  EXPECT_NEAR(m.value, -1.0L, 1e-9L);
  // the maximum -1 is attained where cos u is 0 or +-1, in particular at pi/2
  auto f = [](long double u) { return std::min(2 * std::cos(u) + std::cos(2 * u), -2 * std::cos(u) + std::cos(2 * u)); };
  EXPECT_NEAR(f(kPi / 2.0L), m.value, 1e-9L);
  EXPECT_LT(f(kPi / 2.0L + 0.1L), -1.0L);
  EXPECT_LT(f(kPi / 2.0L - 0.1L), -1.0L);
  // min(2c + c2, -2c + c2) = 2c^2 - 2|c| - 1 <= -1 on |c| <= 1
  for (int i = 0; i <= 1000; ++i) {
    long double c = -1.0L + i / 500.0L;
    long double v = std::min(2 * c + (2 * c * c - 1), -2 * c + (2 * c * c - 1));
    EXPECT_NEAR(v, 2 * c * c - 2 * std::fabs(c) - 1, 1e-15L);
    EXPECT_LE(v, -1.0L + 1e-15L);
  }
}

TEST(Envelope, RejectsLambdaOutsideUnitInterval) {
  EXPECT_THROW(envelope_min(0.2L, 0.45L, 1, 2), ValidationError);  // 2 cos(0.2 pi) > 1
  EXPECT_THROW(verify_34(1, 2, Fraction(1, 5), Fraction(2, 5)), ValidationError);
}
