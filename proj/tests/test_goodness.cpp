#include <gtest/gtest.h>

#include "racebar/goodness.hpp"

using namespace racebar;

namespace {

// Independent oracle on rational points: sort the three points, take the
// three arcs, and try every ordered pair of arcs.
bool oracle_ok(Int m, Int j, Int k) {
  std::vector<Fraction> pts{Fraction(0), Fraction(k % m, m), Fraction((k * j) % m, m)};
  int eq = (pts[0] == pts[1]) + (pts[0] == pts[2]) + (pts[1] == pts[2]);
  if (eq == 1) return true;
  if (eq == 3) return false;
  std::sort(pts.begin(), pts.end());
  std::vector<Fraction> d{pts[1] - pts[0], pts[2] - pts[1], Fraction(1) - pts[2] + pts[0]};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b && spacing_ok(d[a], d[b])) return true;
  return false;
}

std::optional<Int> oracle_witness(Int m, Int j) {
  for (Int k = 1; k < m; ++k)
    if (oracle_ok(m, j, k)) return k;
  return std::nullopt;
}

}  // namespace

TEST(SpacingOk, Examples) {
  EXPECT_FALSE(spacing_ok(Fraction(1, 3), Fraction(1, 3)));
  EXPECT_TRUE(spacing_ok(Fraction(6, 19), Fraction(9, 19)));
  EXPECT_TRUE(spacing_ok(Fraction(12, 37), Fraction(16, 37)));
  EXPECT_TRUE(spacing_ok(Fraction(2, 5), Fraction(2, 5)));
  EXPECT_FALSE(spacing_ok(Fraction(9, 19), Fraction(6, 19)));
  EXPECT_FALSE(spacing_ok(Fraction(2, 5), Fraction(1, 2)));
  EXPECT_FALSE(spacing_ok(Fraction(5, 12), Fraction(2, 5)));
}

TEST(WitnessFor, Examples) {
  for (Int m : {3, 7, 13, 101}) {
    auto w = witness_for(m, 1);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->k, 1);
    EXPECT_EQ(w->kind, WitnessKind::Coincidence);
  }
  EXPECT_FALSE(witness_for(3, 2));
  EXPECT_FALSE(witness_for(7, 3));
  EXPECT_FALSE(witness_for(7, 5));
  EXPECT_TRUE(witness_for(7, 2));
  EXPECT_THROW(witness_for(8, 2), ValidationError);
  EXPECT_THROW(witness_for(7, 7), ValidationError);
}

TEST(WitnessFor, MatchesOracle) {
  for (Int m = 3; m <= 151; m += 2)
    for (Int j = 1; j < m; ++j) {
      auto w = witness_for(m, j);
      auto o = oracle_witness(m, j);
      ASSERT_EQ(w.has_value(), o.has_value()) << m << " " << j;
      if (w) EXPECT_EQ(w->k, *o) << m << " " << j;
    }
}

TEST(IsGood, Examples) {
  auto c3 = is_good(3);
  EXPECT_FALSE(c3.good);
  EXPECT_EQ(c3.failing_j, (std::vector<Int>{2}));
  EXPECT_TRUE(is_good(9).good);
  auto c13 = is_good(13);
  EXPECT_FALSE(c13.good);
  EXPECT_EQ(c13.failing_j, (std::vector<Int>{3, 5, 6}));
  EXPECT_EQ(full_range_failing(c13), (std::vector<Int>{3, 5, 6, 8, 9, 11}));
  auto c7 = is_good(7);
  EXPECT_EQ(full_range_failing(c7), (std::vector<Int>{3, 5}));
  auto c21 = is_good(21);
  EXPECT_EQ(c21.failing_j, (std::vector<Int>{5}));
  EXPECT_EQ(full_range_failing(c21), (std::vector<Int>{5, 17}));
}

TEST(IsGood, SquaresOfExceptionalPrimesAreGood) {
  for (Int m : {9, 49, 169}) EXPECT_TRUE(is_good(m).good) << m;
}

TEST(IsGood, SymmetryUpTo500) {
  for (Int m = 3; m <= 500; m += 2)
    for (Int j = 2; j < m; ++j) {
      auto a = witness_for(m, j);
      auto b = witness_for(m, m + 1 - j);
      ASSERT_EQ(a.has_value(), b.has_value()) << m << " " << j;
      if (a) EXPECT_TRUE(check_witness(m, m + 1 - j, a->k)) << m << " " << j;
    }
}

TEST(IsGood, PrimesFrom85To1000WithStrictBranch) {
  for (Int p = 85; p <= 1000; ++p) {
    if (factorize(p).size() != 1 || factorize(p)[0].exponent != 1 || p == 2) continue;
    auto cert = is_good(p, true);
    EXPECT_TRUE(cert.good) << p;
  }
}

TEST(IsGood, WitnessesReverify) {
  for (Int m = 3; m <= 301; m += 2) {
    auto cert = is_good(m);
    EXPECT_EQ(cert.good, cert.failing_j.empty());
    for (const auto& [j, w] : cert.witnesses) EXPECT_TRUE(oracle_ok(m, j, w.k)) << m << " " << j;
  }
}
