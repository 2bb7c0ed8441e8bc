#include <gtest/gtest.h>

#include "racebar/find_barrier.hpp"
#include "racebar/race_simulator.hpp"

using namespace racebar;

namespace {

RaceProfile run(const Barrier& b, std::size_t n = 100000) {
  auto [u0, u1] = default_window(b);
  return simulate(b, u0, u1, n);
}

// a1 = 1 and units a2, a3 with chi(a2) = e(n2/m), chi(a3) = e(n3/m) for chi of order m
SpacingCharacter special_spacing(Int q, Int m, Int n2, Int n3, Int c1, Int c2, const Fraction& d1,
                                 const Fraction& d2) {
  CharacterGroup cg(q);
  for (const auto& chi : cg.all()) {
    if (chi.order() != m) continue;
    Int a2 = 0, a3 = 0;
    for (Int a : cg.group()->units()) {
      if (chi(a) == RationalAngle(n2, m)) a2 = a;
      if (chi(a) == RationalAngle(n3, m)) a3 = a;
    }
    if (a2 && a3) {
      RaceTriple t(q, 1, a2, a3);
      return {{0, 1, 2}, t, chi, d1, d2, c1, c2, "test"};
    }
  }
  throw std::logic_error("no character of the requested order");
}

}  // namespace

TEST(SpacingCharacter, PrimeRouteModEleven) {
  auto r = find_spacing_character(RaceTriple(11, 1, 3, 9));
  ASSERT_TRUE(r);
  const auto& sc = std::get<SpacingCharacter>(*r);
  EXPECT_EQ(sc.d1, Fraction(2, 5));
  EXPECT_EQ(sc.d2, Fraction(2, 5));
  EXPECT_EQ(sc.chi.order(), 5);
  EXPECT_EQ(sc.c1, 1);
  EXPECT_EQ(sc.c2, 2);
  EXPECT_TRUE(spacing_ok(sc.d1, sc.d2));
}

TEST(SpacingCharacter, TwoPowerDefersToSeparatingSet) {
  auto r = find_spacing_character(RaceTriple(16, 1, 3, 9));
  ASSERT_TRUE(r);
  ASSERT_EQ(r->index(), 1u);
  const auto& s = std::get<SeparatingSet>(*r);
  EXPECT_TRUE(detail::separating_holds(s.S, s.labeled));
}

TEST(SpacingCharacter, NoneWhenAllOrdersExceptional) {
  // all three ratios have order 7
  EXPECT_FALSE(find_spacing_character(RaceTriple(29, 2, 3, 11)));
}

TEST(SpacingCharacter, Multiplicities) {
  EXPECT_EQ(spacing_multiplicities(Fraction(2, 5)), std::make_pair(Int{1}, Int{2}));
  EXPECT_EQ(spacing_multiplicities(Fraction(6, 19)), std::make_pair(Int{5}, Int{9}));
  EXPECT_EQ(spacing_multiplicities(Fraction(12, 37)), std::make_pair(Int{3}, Int{5}));
  EXPECT_THROW(spacing_multiplicities(Fraction(1, 4)), ValidationError);
  EXPECT_TRUE(spacing_ok(Fraction(6, 19), Fraction(9, 19)));
  EXPECT_TRUE(spacing_ok(Fraction(12, 37), Fraction(16, 37)));
  EXPECT_FALSE(spacing_ok(Fraction(6, 19), Fraction(10, 19)));
  EXPECT_FALSE(spacing_ok(Fraction(1, 3), Fraction(2, 5)));
}

TEST(ConstructionOne, ModSeven) {
  RaceTriple D(7, 1, 2, 5);
  auto s = find_separating_set(D);
  ASSERT_TRUE(s);
  auto b = construction_one(D, *s, BarrierParams{});
  EXPECT_EQ(b.construction, Construction::I);
  EXPECT_EQ(b.size(), static_cast<Int>(s->S.size()) + 1);
  EXPECT_EQ(b.size(), 2);
  long double t = b.parameters.at("t");
  for (std::size_t i = 0; i + 1 < b.zeros.size(); ++i) {
    EXPECT_EQ(b.zeros[i].gamma, t);
    EXPECT_EQ(b.zeros[i].sigma, static_cast<long double>(0.501));
  }
  EXPECT_EQ(b.zeros.back().gamma, 2 * t);
  EXPECT_EQ(b.zeros.back().sigma, static_cast<long double>(0.5005));
  EXPECT_GT(std::fabs(b.margins.at("cos_C0")), 1.0 / (4 * t));
  auto prof = run(b);
  EXPECT_TRUE(prof.verified);
  EXPECT_EQ(prof.excluded_count(), 0u);
  EXPECT_GT(prof.crossings, 0u);
}

TEST(ConstructionOne, OppositeOrderingIsRefuted) {
  for (const auto& D : {RaceTriple(7, 1, 2, 5), RaceTriple(9, 4, 7, 1), RaceTriple(16, 1, 3, 5)}) {
    auto b = find_barrier(D);
    ASSERT_EQ(b.construction, Construction::I);
    auto [u0, u1] = default_window(b);
    EXPECT_TRUE(simulate(b, u0, u1, 100000).verified) << D.str();
    // the other candidate a1 > a3 > a2 / a2 > a3 > a1 must not be certified
    Permutation other = b.excluded == Permutation{1, 2, 0} ? Permutation{0, 2, 1} : Permutation{1, 2, 0};
    EXPECT_FALSE(simulate(MainTermConfig(b), b.labeled, other, u0, u1, 100000).verified) << D.str();
  }
}

TEST(ConstructionOne, RejectsBadParameters) {
  RaceTriple D(7, 1, 2, 5);
  auto s = *find_separating_set(D);
  BarrierParams p;
  p.sigma1 = 0.6;
  EXPECT_THROW(construction_one(D, s, p), ValidationError);
  p = {};
  p.beta1 = 0.5005;
  EXPECT_THROW(construction_one(D, s, p), ValidationError);
}

TEST(ConstructionTwo, GenericSpacing) {
  RaceTriple D(23, 2, 3, 4);
  auto b = find_barrier(D);
  EXPECT_EQ(b.construction, Construction::II);
  EXPECT_EQ(b.size(), 3);
  EXPECT_GT(b.margins.at("delta"), 0.0);
  EXPECT_GT(b.margins.at("delta"), 2.0 * (1 + 2 / 4.0) * b.parameters.at("alpha") / b.parameters.at("gamma"));
  auto prof = run(b);
  EXPECT_TRUE(prof.verified);
  EXPECT_EQ(prof.excluded_count(), 0u);
  // refinement stability
  auto [u0, u1] = default_window(b);
  auto fine = simulate(b, u0, u1, 200000);
  EXPECT_EQ(fine.verified, prof.verified);
  EXPECT_EQ(fine.excluded_count(), 0u);
}

TEST(ConstructionTwo, SpecialSpacings) {
  struct Case {
    Int q, m, n2, n3, c1, c2;
    Fraction d1, d2;
    Int size;
  };
  for (const auto& c : {Case{191, 19, 6, 15, 5, 9, Fraction(6, 19), Fraction(9, 19), 14},
                        Case{149, 37, 12, 28, 3, 5, Fraction(12, 37), Fraction(16, 37), 8}}) {
    auto sc = special_spacing(c.q, c.m, c.n2, c.n3, c.c1, c.c2, c.d1, c.d2);
    auto b = construction_two(sc.labeled, sc, BarrierParams{});
    EXPECT_EQ(b.size(), c.size);
    EXPECT_LE(b.size(), 14);
    EXPECT_GT(b.margins.at("verify_34"), 0.0);
    auto prof = run(b);
    EXPECT_TRUE(prof.verified) << c.q;
    EXPECT_EQ(prof.excluded_count(), 0u);
  }
}

TEST(ConstructionTwo, DirectExpansionMatchesMainTerm) {
  // D1 = (4/gamma) sum_l (c_l / l) sin(d1 l pi) cos(l gamma u - (r1 + r2) pi l) + O(1/gamma^2)
  RaceTriple D(11, 1, 3, 9);
  auto sc = std::get<SpacingCharacter>(*find_spacing_character(D));
  auto b = construction_two(D, sc, BarrierParams{});
  MainTermConfig cfg(b);
  const auto& a = b.labeled.a;
  long double gamma = b.parameters.at("gamma"), pi = std::numbers::pi_v<long double>;
  long double r1 = sc.chi(a[0]).turns(), r2 = sc.chi(a[1]).turns(), r3 = sc.chi(a[2]).turns();
  if (r2 < r1) r2 += 1;
  if (r3 < r1) r3 += 1;
  long double d1 = r2 - r1, d2 = r3 - r2;
  for (int i = 0; i < 200; ++i) {
    long double u = 200000.0L + i * 0.0007L;
    long double expect1 = 0, expect2 = 0;
    for (int l = 1; l <= 2; ++l) {
      long double c = l == 1 ? sc.c1 : sc.c2;
      expect1 += c / l * std::sin(d1 * l * pi) * std::cos(l * gamma * u - (r1 + r2) * pi * l);
      expect2 += c / l * std::sin(d2 * l * pi) * std::cos(l * gamma * u - (r2 + r3) * pi * l);
    }
    expect1 *= 4.0L / gamma;
    expect2 *= 4.0L / gamma;
    // normalized main terms of pi(a2) - pi(a1) and pi(a3) - pi(a2)
    long double got1 = main_term_pair_diff(cfg, a[1], a[0], u);
    long double got2 = main_term_pair_diff(cfg, a[2], a[1], u);
    EXPECT_NEAR(got1, expect1, 10.0L / (gamma * gamma));
    EXPECT_NEAR(got2, expect2, 10.0L / (gamma * gamma));
  }
}

TEST(ConstructionThree, OrderSevenTriple) {
  RaceTriple D(29, 2, 3, 11);
  CharacterGroup cg(29);
  auto b = construction_three(D, cg, BarrierParams{});
  EXPECT_EQ(b.construction, Construction::III);
  EXPECT_GE(b.parameters.at("Q"), 1.0);
  EXPECT_LT(b.margins.at("rationalization_error"), 1e-3);
  EXPECT_LE(b.margins.at("envelope_max"), -1.0 + 3.0 * b.margins.at("target_deviation") + 1e-12);
  for (const auto& z : b.zeros) {
    EXPECT_GE(z.multiplicity, 1);
    EXPECT_EQ(z.sigma, static_cast<long double>(0.501));
  }
  auto o = find_order7_character(D, cg);
  EXPECT_GE(o.chi.order(), 7);
  EXPECT_LT(o.h, o.k);
  EXPECT_LE(o.k, 3);
  auto prof = run(b, 20000);
  EXPECT_TRUE(prof.verified);
  EXPECT_EQ(prof.excluded_count(), 0u);
}

TEST(ConstructionThree, MainTermMatchesCosineShape) {
  RaceTriple D(29, 2, 3, 11);
  auto b = find_barrier(D);
  ASSERT_EQ(b.construction, Construction::III);
  MainTermConfig cfg(b);
  long double Q = b.parameters.at("Q"), gamma = b.parameters.at("gamma");
  long double tol = 2.0L * b.margins.at("target_deviation") * 3 + 40.0L / gamma;
  const auto& a = b.labeled.a;
  for (int i = 0; i < 500; ++i) {
    long double u = 110000.0L + i * 0.00123L;
    long double c1 = std::cos(gamma * u), c2 = std::cos(2 * gamma * u);
    long double d1 = main_term_pair_diff(cfg, a[0], a[1], u) * gamma / Q;
    long double d2 = main_term_pair_diff(cfg, a[1], a[2], u) * gamma / Q;
    EXPECT_NEAR(d1, 2 * c1 + c2, tol);
    EXPECT_NEAR(d2, -2 * c1 + c2, tol);
  }
}

TEST(FindBarrier, Examples) {
  auto b7 = find_barrier(RaceTriple(7, 1, 2, 5));
  EXPECT_EQ(b7.construction, Construction::I);
  EXPECT_EQ(b7.size(), 2);
  // a1 = 1 makes the power family a valid set
  EXPECT_EQ(find_barrier(RaceTriple(29, 1, 16, 24)).construction, Construction::I);
  EXPECT_EQ(find_barrier(RaceTriple(29, 2, 3, 11)).construction, Construction::III);
  EXPECT_EQ(find_barrier(RaceTriple(23, 2, 3, 4)).construction, Construction::II);
}

TEST(FindBarrier, ForcedChoices) {
  EXPECT_THROW(find_barrier(RaceTriple(29, 2, 3, 11), {}, ConstructionChoice::I), ConstructionError);
  EXPECT_THROW(find_barrier(RaceTriple(29, 2, 3, 11), {}, ConstructionChoice::II), ConstructionError);
  EXPECT_THROW(find_barrier(RaceTriple(7, 1, 2, 5), {}, ConstructionChoice::III), ConstructionError);
  EXPECT_EQ(find_barrier(RaceTriple(11, 1, 3, 9), {}, ConstructionChoice::II).construction, Construction::II);
  EXPECT_EQ(construction_choice_from_string("auto"), ConstructionChoice::Auto);
  EXPECT_THROW(construction_choice_from_string("IV"), ValidationError);
}

TEST(FindBarrier, RespectsSigmaAndTau) {
  BarrierParams p;
  p.tau = 50000;
  p.sigma_cap = 0.501;
  for (const auto& D : {RaceTriple(7, 1, 2, 5), RaceTriple(23, 2, 3, 4), RaceTriple(29, 2, 3, 11)}) {
    auto b = find_barrier(D, p);
    for (const auto& z : b.zeros) {
      EXPECT_GT(z.gamma, 50000.0L);
      EXPECT_LE(z.sigma, p.sigma_cap);
      EXPECT_GT(z.sigma, b.beta1);
    }
  }
}

TEST(FindBarrier, EveryTripleUpToThirteen) {
  for (Int q : {5, 7, 8, 9, 10, 11, 12, 13}) {
    CharacterGroup cg(q);
    auto units = cg.group()->units();
    for (Int a : units)
      for (Int b : units)
        for (Int c : units) {
          if (a == b || a == c || b == c) continue;
          RaceTriple D(q, a, b, c);
          auto bar = find_barrier(D, cg, BarrierParams{});
          EXPECT_NO_THROW(check_barrier(bar));
          if (bar.construction == Construction::II) {
            EXPECT_LE(bar.size(), 14);
          }
        }
  }
}
