#include <gtest/gtest.h>

#include "gsieve/dihedral.hpp"

using namespace gsieve;

namespace {

// D_3 acting on itself by left multiplication. Element s^a r^b is point 3a + b;
// r * s^a r^b = s^a r^{b + (a ? -1 : 1)}, s * s^a r^b = s^{a+1} r^b.
DihedralActionSpec d3_regular() {
  DihedralActionSpec spec{3, 6, {}, {}};
  for (u32 a = 0; a < 2; ++a)
    for (u32 b = 0; b < 3; ++b) {
      const u32 nb = a == 0 ? (b + 1) % 3 : (b + 2) % 3;
      spec.r_map.push_back(3 * a + nb);
      spec.s_map.push_back(3 * (1 - a) + b);
    }
  return spec;
}

// D_4 on the two diagonals of a square: r swaps them, s (a reflection through vertex 0) fixes both.
DihedralActionSpec d4_diagonals() { return {4, 2, {1, 0}, {0, 1}}; }

DihedralActionSpec triangle() { return {3, 3, {1, 2, 0}, {0, 2, 1}}; }

MultiPoly poly2(u32 n, std::vector<RawTerm> raw) { return MultiPoly::normalize(dihedral_profile(n), raw); }

}  // namespace

TEST(DihedralValidate, Relations) {
  EXPECT_FALSE(validate_action(triangle()).has_value());
  EXPECT_FALSE(validate_action(d3_regular()).has_value());
  EXPECT_EQ(validate_action(DihedralActionSpec{2, 3, {1, 2, 0}, {0, 1, 2}})->kind, ActionIssueKind::OrderDoesNotDivide);
  EXPECT_EQ(validate_action(DihedralActionSpec{3, 3, {1, 2, 0}, {1, 2, 0}})->kind, ActionIssueKind::OrderDoesNotDivide);
  // r = 4-cycle, s = transposition (0 1): (rs)^2 fails
  EXPECT_EQ(validate_action(DihedralActionSpec{4, 4, {1, 2, 3, 0}, {1, 0, 2, 3}})->kind, ActionIssueKind::NotCommuting);
  EXPECT_THROW(DihedralAction(DihedralActionSpec{3, 2, {1, 0}, {0, 1}}), InvalidAction);
}

TEST(ClassifyOrbit, Examples) {
  const auto tri = classify_orbit(triangle(), 0);
  EXPECT_EQ(tri.n1, 3u);
  EXPECT_EQ(tri.kind, DihedralOrbitKind::SizeN1);
  EXPECT_EQ(tri.twist, 0u);

  const auto reg = classify_orbit(d3_regular(), 0);
  EXPECT_EQ(reg.n1, 3u);
  EXPECT_EQ(reg.kind, DihedralOrbitKind::Size2N1);
  EXPECT_EQ(reg.size(), 6u);

  const auto diag = classify_orbit(d4_diagonals(), 0);
  EXPECT_EQ(diag.n1, 2u);
  EXPECT_EQ(diag.kind, DihedralOrbitKind::SizeN1);
  EXPECT_EQ(diag.twist, 0u);
}

TEST(ClassifyOrbit, TwistFollowsLabeling) {
  // square vertices with s the reflection fixing the edge midpoint between 0 and 1: s(0) = 1
  const DihedralActionSpec sq{4, 4, {1, 2, 3, 0}, {1, 0, 3, 2}};
  ASSERT_FALSE(validate_action(sq).has_value());
  const auto o = classify_orbit(sq, 0);
  EXPECT_EQ(o.twist, 1u);
}

TEST(FixedPoints, Examples) {
  const auto tri = classify_orbit(triangle(), 0);
  EXPECT_EQ(dihedral_fixed_points(tri, 1, 0), 1u);
  const auto sq = classify_orbit(dihedral_orbit_shape(4, 4, DihedralOrbitKind::SizeN1, 0), 0);
  EXPECT_EQ(dihedral_fixed_points(sq, 0, 2), 0u);
  const auto reg = classify_orbit(d3_regular(), 0);
  EXPECT_EQ(dihedral_fixed_points(reg, 0, 0), 6u);
}

TEST(FixedPoints, AgreeWithBruteForceOnShapes) {
  for (u32 n = 1; n <= 12; ++n)
    for (u64 n1 : divisors(n))
      for (u32 t = 0; t < n1; ++t)
        for (auto kind : {DihedralOrbitKind::SizeN1, DihedralOrbitKind::Size2N1}) {
          const DihedralAction action(dihedral_orbit_shape(n, static_cast<u32>(n1), kind, t));
          const auto o = classify_orbit(action.spec(), 0);
          for (u32 i = 0; i < 2; ++i)
            for (u32 j = 0; j < n; ++j)
              EXPECT_EQ(dihedral_fixed_points(o, i, j), brute_force_fixed_points(action, i, j))
                  << n << " " << n1 << " " << t << " " << i << " " << j;
        }
}

TEST(OrbitPolynomial, Examples) {
  const auto one = [](u32 n) { return MultiPoly::constant(dihedral_profile(n), Rational(1)); };
  const auto x = [](u32 n) { return poly2(n, {{{1, 0}, 1}}); };
  const auto ysum = [](u32 n) { return geometric_factor(dihedral_profile(n), std::vector<i64>{0, 1}, n); };

  const auto reg = classify_orbit(d3_regular(), 0);
  EXPECT_EQ(dihedral_orbit_polynomial(reg, 3), (one(3) + x(3)) * ysum(3));

  const auto tri = classify_orbit(triangle(), 0);
  const Rational half(1, 2);
  EXPECT_EQ(dihedral_orbit_polynomial(tri, 3), (one(3) + x(3)) * ysum(3) * half + (one(3) - x(3)) * half);

  const auto sq = classify_orbit(dihedral_orbit_shape(4, 4, DihedralOrbitKind::SizeN1, 0), 0);
  const auto y2 = poly2(4, {{{0, 0}, 1}, {{0, 2}, 1}});
  EXPECT_EQ(dihedral_orbit_polynomial(sq, 4), (one(4) + x(4)) * ysum(4) * half + (one(4) - x(4)) * y2 * half);
}

TEST(LiteralFormulas, BHoldsOnlyForFullRotationOrbits) {
  const auto full = classify_orbit(d3_regular(), 0);
  EXPECT_EQ(dihedral_orbit_polynomial(full, 3), literal_formula_b(3));
  const auto partial = classify_orbit(dihedral_orbit_shape(6, 3, DihedralOrbitKind::Size2N1), 0);
  EXPECT_NE(dihedral_orbit_polynomial(partial, 6), literal_formula_b(6));
  const i64 pt[2] = {0, 3};
  // r^3 fixes the whole 6-point orbit, the printed formula gives 0
  EXPECT_EQ(dihedral_fixed_points(partial, 0, 3), 6u);
  EXPECT_EQ(Evaluator(literal_formula_b(6)).rational_value(pt), Rational(0));
}

TEST(LiteralFormulas, AFailsOnOddReflections) {
  const auto tri = classify_orbit(triangle(), 0);
  // t - j = 0 is even, n1 = 3 odd: printed formula gives 0, one vertex is fixed
  EXPECT_EQ(literal_formula_a(tri, 3, 1, 0), Rational(0));
  EXPECT_EQ(dihedral_fixed_points(tri, 1, 0), 1u);
  // odd t - j agrees
  EXPECT_EQ(literal_formula_a(tri, 3, 1, 1), Rational(1));
  EXPECT_EQ(literal_formula_a(tri, 3, 0, 0), Rational(3));
}

TEST(DihedralActionPolynomial, Examples) {
  const auto trivial = dihedral_action_polynomial(DihedralAction(DihedralActionSpec{1, 1, {0}, {0}}));
  EXPECT_EQ(trivial.polynomial, MultiPoly::constant(dihedral_profile(1), Rational(1)));
  EXPECT_TRUE(trivial.verified());

  const auto tri = dihedral_action_polynomial(DihedralAction(triangle()));
  ASSERT_TRUE(tri.verified());
  std::vector<u64> counts;
  for (const auto& v : tri.verdicts) counts.push_back(v.expected);
  EXPECT_EQ(counts, (std::vector<u64>{3, 0, 0, 1, 1, 1}));
  EXPECT_TRUE(tri.discrepancies.empty());
  EXPECT_FALSE(dihedral_action_polynomial(DihedralAction(triangle()), true).discrepancies.empty());
}

TEST(DihedralActionPolynomial, RandomActionsVerify) {
  for (u64 seed = 1; seed <= 60; ++seed) {
    const DihedralAction action(random_dihedral_action(default_random_params(GroupKind::Dihedral, seed)));
    const auto r = dihedral_action_polynomial(action);
    EXPECT_TRUE(r.verified()) << seed;
    const i64 id[2] = {0, 0};
    EXPECT_EQ(Evaluator(r.polynomial).rational_value(id), Rational(static_cast<long>(action.set_size())));
    u64 total = 0;
    for (const auto& o : r.dihedral_orbits) {
      total += o.orbit.size();
      EXPECT_TRUE(o.orbit.size() == o.orbit.n1 || o.orbit.size() == 2ull * o.orbit.n1);
    }
    EXPECT_EQ(total, action.set_size());
  }
}

TEST(DihedralActionPolynomial, ConjugacyClassConsistency) {
  for (u64 seed = 1; seed <= 40; ++seed) {
    const DihedralAction action(random_dihedral_action(default_random_params(GroupKind::Dihedral, seed)));
    const u32 n = action.n();
    for (u32 j = 0; j < n; ++j) {
      // r^j ~ r^{-j}, s r^j ~ s r^{j+2}
      EXPECT_EQ(brute_force_fixed_points(action, 0, j), brute_force_fixed_points(action, 0, (n - j) % n));
      EXPECT_EQ(brute_force_fixed_points(action, 1, j), brute_force_fixed_points(action, 1, (j + 2) % n));
    }
  }
}
