#include <gtest/gtest.h>

#include <set>

#include "racebar/residue_group.hpp"

using namespace racebar;

namespace {

// brute-force oracle: smallest m with b^m = 1 by repeated multiplication
Int slow_ord(Int q, Int b) {
  Int x = b % q, m = 1;
  while (x != 1) {
    x = x * b % q;
    ++m;
  }
  return m;
}

std::vector<std::pair<Int, Int>> gens_of(Int q) {
  std::vector<std::pair<Int, Int>> out;
  UnitGroup group{Modulus(q)};
  for (const auto& g : group.generators()) out.emplace_back(g.residue, g.order);
  return out;
}

}  // namespace

TEST(Modulus, RejectsSmallAndBad) {
  for (Int q : {-1, 0, 1, 2, 3, 4, 6}) EXPECT_THROW(Modulus{q}, ValidationError) << q;
  EXPECT_THROW(Modulus{kMaxModulus + 1}, ValidationError);
  EXPECT_NO_THROW(Modulus{5});
  EXPECT_NO_THROW(Modulus{7});
}

TEST(UnitGroup, Examples) {
  using V = std::vector<std::pair<Int, Int>>;
  EXPECT_EQ(gens_of(5), (V{{2, 4}}));
  EXPECT_EQ(gens_of(8), (V{{7, 2}, {5, 2}}));
  EXPECT_EQ(gens_of(15), (V{{11, 2}, {2, 4}}));
  EXPECT_EQ(gens_of(7), (V{{3, 6}}));
}

TEST(UnitGroup, BasisCoversGroupExactlyOnce) {
  for (Int q = 5; q <= 400; ++q) {
    if (q == 6) continue;
    UnitGroup g{Modulus(q)};
    Int prod = 1;
    for (const auto& gen : g.generators()) {
      prod *= gen.order;
      EXPECT_EQ(slow_ord(q, gen.residue), gen.order) << q;
    }
    EXPECT_EQ(prod, euler_phi(q)) << q;
    std::set<Int> seen;
    for (Int b = 1; b < q; ++b) {
      if (std::gcd(b, q) != 1) {
        EXPECT_FALSE(g.is_unit(b));
        continue;
      }
      auto f = g.dlog(b);
      for (std::size_t i = 0; i < f.size(); ++i) {
        EXPECT_GE(f[i], 0);
        EXPECT_LT(f[i], g.generators()[i].order);
      }
      EXPECT_EQ(g.from_exponents(f), b) << q;
      seen.insert(static_cast<Int>(g.flat_index(b)));
    }
    EXPECT_EQ(static_cast<Int>(seen.size()), g.phi());
  }
}

TEST(Ord, Examples) {
  EXPECT_EQ(ord(11, 1), 1);
  EXPECT_EQ(ord(7, 2), 3);
  EXPECT_EQ(ord(5, 2), 4);
  EXPECT_THROW(ord(9, 3), ValidationError);
}

TEST(Ord, MatchesOracleAndIsMinimal) {
  for (Int q : {5, 7, 12, 29, 45, 64, 91, 97}) {
    for (Int b = 1; b < q; ++b) {
      if (std::gcd(b, q) != 1) continue;
      Int m = ord(q, b);
      EXPECT_EQ(m, slow_ord(q, b));
      EXPECT_EQ(pow_mod(b, m, q), 1);
      EXPECT_EQ(euler_phi(q) % m, 0);
    }
  }
}

TEST(Dlog, Examples) {
  EXPECT_EQ(UnitGroup(Modulus(5)).dlog(3), (std::vector<Int>{3}));
  EXPECT_EQ(UnitGroup(Modulus(7)).dlog(2), (std::vector<Int>{2}));
  UnitGroup g{Modulus(15)};
  EXPECT_EQ(g.dlog(1), (std::vector<Int>{0, 0}));
  EXPECT_THROW(g.dlog(5), ValidationError);
}

TEST(ModDiv, Examples) {
  EXPECT_EQ(mod_div(7, 5, 2), 6);
  EXPECT_EQ(mod_div(9, 7, 4), 4);
  for (Int q : {10, 21, 50}) {
    for (Int a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      EXPECT_EQ(mod_div(q, a, a), 1);
      for (Int b = 1; b < q; ++b)
        if (std::gcd(b, q) == 1) EXPECT_EQ(mod_div(q, a, b) * b % q, a);
    }
  }
  EXPECT_THROW(mod_div(9, 7, 3), ValidationError);
}
