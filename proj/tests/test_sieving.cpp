#include <gtest/gtest.h>

#include "gsieve/sieving.hpp"
#include "oracles.hpp"

using namespace gsieve;

namespace {

GroupElement el(std::vector<u32> c) { return GroupElement{std::move(c)}; }

MultiPoly geo(const VariableProfile& p, std::vector<i64> mono, u64 count) { return geometric_factor(p, mono, count); }

AbelianActionSpec final_example() {
  std::vector<GroupElement> h1{el({2, 0, 0}), el({0, 1, 3})}, h2{el({0, 1, 0})};
  std::vector<AbelianActionSpec> parts{coset_action({4, 3, 9}, h1), coset_action({4, 3, 9}, h2)};
  return disjoint_union(parts);
}

// Fixed-point counts on the grid of G, straight from the generator maps.
std::vector<Rational> walked_counts(const AbelianActionSpec& spec) {
  std::vector<std::vector<unsigned>> maps(spec.generator_maps.begin(), spec.generator_maps.end());
  const MixedRadix grid(spec.moduli);
  std::vector<Rational> out;
  std::vector<u32> b(spec.moduli.size(), 0);
  do out.emplace_back(oracle::fixed_points(maps, std::vector<long>(b.begin(), b.end())));
  while (grid.next(b));
  return out;
}

}  // namespace

TEST(CyclicCsp, Examples) {
  const VariableProfile z2({2}), z4({4});
  EXPECT_EQ(cyclic_csp_polynomial(AbelianAction({{2}, 2, {{1, 0}}})), geo(z2, {1}, 2));
  EXPECT_EQ(cyclic_csp_polynomial(AbelianAction({{2}, 3, {{1, 0, 2}}})),
            geo(z2, {1}, 2) + MultiPoly::constant(z2, Rational(1)));
  EXPECT_EQ(cyclic_csp_polynomial(AbelianAction({{4}, 4, {{1, 2, 3, 0}}})), geo(z4, {1}, 4));
  EXPECT_THROW(cyclic_csp_polynomial(AbelianAction({{2, 2}, 1, {{0}, {0}}})), std::invalid_argument);
}

TEST(FreeOrbit, Examples) {
  const std::vector<u32> orders{2, 3};
  const VariableProfile p(orders);
  const auto f = free_orbit_polynomial(orders);
  EXPECT_EQ(f.poly, geo(p, {1, 0}, 2) * geo(p, {0, 1}, 3));
  EXPECT_EQ(f.orbit_size, 6u);
  EXPECT_EQ(evaluate(f.poly, {{0, 0}}).as_rational(), Rational(6));
  EXPECT_EQ(evaluate(f.poly, {{1, 0}}).as_rational(), Rational(0));
}

TEST(SingleGenerator, DiagonalZ4) {
  const std::vector<u32> orders{4, 4};
  const VariableProfile p(orders);
  const auto f = single_generator_polynomial(el({2, 2}), orders);
  EXPECT_EQ(f.poly, geo(p, {2, 0}, 2) * geo(p, {1, 1}, 4));
  EXPECT_EQ(f.orbit_size, 8u);
}

TEST(SingleGenerator, Z16Z32) {
  const std::vector<u32> orders{16, 32};
  const VariableProfile p(orders);
  const auto f = single_generator_polynomial(el({4, 2}), orders);
  EXPECT_EQ(f.poly, geo(p, {4, 0}, 4) * geo(p, {3, 4}, 8));
  EXPECT_EQ(f.orbit_size, 32u);
}

TEST(SingleGenerator, FinalExampleSecondGenerator) {
  const std::vector<u32> orders{4, 3, 9};
  const VariableProfile p(orders);
  const auto factors = single_generator_factors(el({0, 1, 3}), orders, ChainReading::Corrected);
  // leading factor has count p^{r_1} = 1, chained factor 1 + x2^2 x3 + ... + x2^16 x3^8, full factor on x1
  ASSERT_EQ(factors.size(), 3u);
  EXPECT_EQ(factors[0].count, 1u);
  EXPECT_EQ(factors[1].monomial, (std::vector<i64>{0, 2, 1}));
  EXPECT_EQ(factors[1].count, 9u);
  EXPECT_EQ(factors[2].monomial, (std::vector<i64>{1, 0, 0}));
  EXPECT_EQ(factors[2].count, 4u);
  EXPECT_EQ(single_generator_polynomial(el({0, 1, 3}), orders).poly, geo(p, {1, 0, 0}, 4) * geo(p, {0, 2, 1}, 9));
}

TEST(SingleGenerator, MixedPrimesRejected) {
  const std::vector<u32> orders{4, 9};
  EXPECT_THROW(single_generator_polynomial(el({2, 3}), orders), std::invalid_argument);
  EXPECT_THROW(single_generator_polynomial(el({0, 0}), orders), std::invalid_argument);
}

TEST(SingleGenerator, ChainReadingsDifferOnThreeLinks) {
  // t - r = (1, 2, 4): corrected per-link exponents 2 and 4, printed reading repeats 2
  const std::vector<u32> orders{2, 4, 16};
  const auto corrected = single_generator_factors(el({1, 1, 1}), orders, ChainReading::Corrected);
  const auto printed = single_generator_factors(el({1, 1, 1}), orders, ChainReading::Printed);
  EXPECT_EQ(corrected[2].monomial, (std::vector<i64>{0, 3, 4}));
  EXPECT_EQ(printed[2].monomial, (std::vector<i64>{0, 3, 2}));
}

TEST(Tor, EmptyDelegatesToFree) {
  const std::vector<u32> orders{2, 3};
  EXPECT_EQ(tor_polynomial(orders, {}).poly, free_orbit_polynomial(orders).poly);
}

TEST(Tor, SingleElementEqualsSingleGenerator) {
  const std::vector<u32> orders{4, 4};
  const std::vector<GroupElement> t{el({2, 2})};
  EXPECT_EQ(tor_polynomial(orders, t).poly, single_generator_polynomial(el({2, 2}), orders).poly);
}

TEST(Tor, FinalExampleExpressionStructure) {
  const std::vector<u32> orders{4, 3, 9};
  const VariableProfile p(orders);
  const std::vector<GroupElement> t{el({2, 0, 0}), el({0, 1, 3})};
  const auto h1 = geo(p, {2, 0, 0}, 2) * geo(p, {0, 1, 0}, 3) * geo(p, {0, 0, 1}, 9);
  const auto h2 = geo(p, {1, 0, 0}, 4) * geo(p, {0, 2, 1}, 9);
  const auto c = [&](long v) { return MultiPoly::constant(p, Rational(v)); };
  const auto expected = c(18) - (c(54) - h1) * (c(36) - h2) * Rational(1, 108);
  const auto f = tor_polynomial(orders, t);
  EXPECT_EQ(f.poly, expected);
  EXPECT_EQ(f.orbit_size, 18u);
}

TEST(Tor, LiteralFinalExampleMissesSumOfGenerators) {
  // (2,1,3) = (2,0,0) + (0,1,3) lies in the stabilizer but both h factors vanish there
  const std::vector<u32> orders{4, 3, 9};
  const std::vector<GroupElement> t{el({2, 0, 0}), el({0, 1, 3})};
  const auto f = tor_polynomial(orders, t);
  const i64 pt[3] = {2, 1, 3};
  EXPECT_EQ(Evaluator(f.poly).rational_value(pt), Rational(0));
  const i64 g1[3] = {2, 0, 0}, g2[3] = {0, 1, 3}, id[3] = {0, 0, 0};
  EXPECT_EQ(Evaluator(f.poly).rational_value(g1), Rational(18));
  EXPECT_EQ(Evaluator(f.poly).rational_value(g2), Rational(18));
  EXPECT_EQ(Evaluator(f.poly).rational_value(id), Rational(18));
}

TEST(CharacterSum, Examples) {
  StabilizerData trivial = analyze_stabilizer({2, 3}, {el({0, 0})});
  EXPECT_EQ(character_sum_polynomial(trivial).poly, free_orbit_polynomial(std::vector<u32>{2, 3}).poly);

  StabilizerData diag = analyze_stabilizer({4, 4}, {el({0, 0}), el({2, 2})});
  EXPECT_EQ(character_sum_polynomial(diag).poly, single_generator_polynomial(el({2, 2}), diag.reduced_orders).poly);

  std::vector<GroupElement> all;
  for (u32 a = 0; a < 2; ++a)
    for (u32 b = 0; b < 2; ++b) all.push_back(el({a, b}));
  const auto full = analyze_stabilizer({2, 2}, all);
  EXPECT_EQ(character_sum_polynomial(full).poly, MultiPoly::constant(VariableProfile({2, 2}), Rational(1)));
}

TEST(Interpolate, Examples) {
  const VariableProfile z2({2});
  EXPECT_TRUE(interpolate_polynomial(z2, std::vector<Rational>{0, 0}).is_zero());
  EXPECT_EQ(interpolate_polynomial(z2, std::vector<Rational>{2, 0}), geo(z2, {1}, 2));

  std::vector<GroupElement> h{el({2, 2})};
  const auto spec = coset_action({4, 4}, h);
  const auto values = walked_counts(spec);
  EXPECT_EQ(interpolate_polynomial(VariableProfile({4, 4}), values),
            single_generator_polynomial(el({2, 2}), std::vector<u32>{4, 4}).poly);
}

TEST(Interpolate, RoundTripsArbitraryRationalPolynomial) {
  const VariableProfile p({3, 3});
  const auto f = MultiPoly::normalize(p, std::vector<RawTerm>{{{1, 2}, Rational(5, 7)}, {{2, 0}, -2}, {{0, 0}, 9}});
  // adding the conjugate makes every grid value rational (cube roots have rational real parts)
  const auto g = f + f.substitute(p, std::vector<VariableImage>{{0, 2}, {1, 2}});
  std::vector<Rational> values;
  std::vector<u32> b(2, 0);
  do values.push_back(*evaluate(g, {{b[0], b[1]}}).as_rational());
  while (p.radix().next(b));
  EXPECT_EQ(interpolate_polynomial(p, values), g);
}

TEST(Interpolate, NonRationalCoefficientReported) {
  // values 0,1,0 on Z3 come from (1 + w^2 x + w x^2)/3, not a rational polynomial
  const VariableProfile z3({3});
  try {
    interpolate_polynomial(z3, std::vector<Rational>{0, 1, 0});
    FAIL() << "expected NonRationalCoefficient";
  } catch (const NonRationalCoefficient& e) {
    EXPECT_EQ(e.exponents, std::vector<u32>{1});
    EXPECT_FALSE(e.value.as_rational().has_value());
  }
}

TEST(ActionPolynomial, TrivialAndIdentity) {
  const auto r = action_polynomial(AbelianAction({{2}, 1, {{0}}}));
  EXPECT_EQ(r.polynomial, MultiPoly::constant(VariableProfile({2}), Rational(1)));
  EXPECT_TRUE(r.verified());
  for (u64 seed = 1; seed <= 10; ++seed) {
    const AbelianAction action(random_abelian_action(default_random_params(GroupKind::Abelian, seed)));
    const auto rep = action_polynomial(action);
    const std::vector<i64> zero(action.rank(), 0);
    EXPECT_EQ(Evaluator(rep.polynomial).rational_value(zero), Rational(static_cast<long>(action.set_size())));
  }
}

TEST(ActionPolynomial, FinalExample) {
  const AbelianAction action(final_example());
  const auto r = action_polynomial(action);
  ASSERT_EQ(r.abelian_orbits.size(), 2u);
  EXPECT_TRUE(r.verified());
  EXPECT_EQ(r.verdicts.size(), 108u);
  EXPECT_FALSE(r.closed_form_diverged());
  const VariableProfile q({4, 3, 9});
  // second orbit: free over reduced (4,1,9), reinstated as (1+x1+x1^2+x1^3)(1+x3+...+x3^8)
  const auto second = geo(q, {1, 0, 0}, 4) * geo(q, {0, 0, 1}, 9);
  const auto& o2 = r.abelian_orbits[1];
  EXPECT_EQ(o2.used, ConstructionTag::Free);
  const VariableImage img[3] = {{0, 1}, {1, 3}, {2, 1}};
  EXPECT_EQ(o2.closed_form.poly->substitute(q, img), second);
  // first orbit over reduced (2,3,9), x1 -> x1^2
  const auto first = geo(q, {2, 0, 0}, 2) * geo(q, {0, 2, 1}, 9);
  EXPECT_EQ(r.polynomial, first + second);
  const auto walked = walked_counts(action.spec());
  for (std::size_t k = 0; k < walked.size(); ++k) EXPECT_EQ(r.verdicts[k].expected, walked[k].numerator().get_ui());
}

TEST(ActionPolynomial, SpecializesToCyclic) {
  for (u64 seed = 1; seed <= 40; ++seed) {
    auto params = default_random_params(GroupKind::Abelian, seed);
    params.max_moduli = 1;
    const AbelianAction action(random_abelian_action(params));
    EXPECT_EQ(action_polynomial(action).polynomial, cyclic_csp_polynomial(action)) << seed;
  }
}

TEST(ActionPolynomial, CompositeModulusSplits) {
  // Z12 acting on Z12 / <4>: orbit of size 4, value 4 at multiples of 4
  std::vector<GroupElement> h{el({4})};
  const AbelianAction action(coset_action({12}, h));
  const auto r = action_polynomial(action);
  EXPECT_TRUE(r.verified());
  EXPECT_EQ(r.polynomial, geo(VariableProfile({12}), {3}, 4));
  EXPECT_EQ(r.polynomial, cyclic_csp_polynomial(action));
}

TEST(ActionPolynomial, Example1728ReportsDivergenceWithWitness) {
  std::vector<GroupElement> h{el({2, 4, 0, 0, 0}), el({0, 4, 4, 0, 0}), el({0, 0, 0, 6, 3})};
  const AbelianAction action(coset_action({4, 8, 8, 9, 9}, h));
  const auto r = action_polynomial(action);
  EXPECT_TRUE(r.verified());
  EXPECT_TRUE(r.character_sum_verified);
  EXPECT_TRUE(r.interpolated_verified);
  ASSERT_EQ(r.discrepancies.size(), 1u);
  const auto& d = r.discrepancies[0];
  EXPECT_EQ(d.construction, "tor/corrected");
  EXPECT_EQ(d.expected, 1728u);
  ASSERT_TRUE(d.got.has_value());
  EXPECT_NE(*d.got, Rational(1728));
  EXPECT_EQ(r.abelian_orbits[0].used, ConstructionTag::CharacterSum);
}

TEST(ActionPolynomial, ConstructionsAgreeWhereClosedFormPasses) {
  for (u64 seed = 200; seed < 260; ++seed) {
    const AbelianAction action(random_abelian_action(default_random_params(GroupKind::Abelian, seed)));
    const auto r = action_polynomial(action);
    EXPECT_TRUE(r.verified()) << seed;
    for (const auto& o : r.abelian_orbits) {
      EXPECT_EQ(o.character_sum, o.interpolated) << seed;
      if (o.closed_form.agrees) EXPECT_EQ(*o.closed_form.poly, o.interpolated) << seed;
      else EXPECT_TRUE(o.closed_form.witness.has_value() || !o.closed_form.error.empty()) << seed;
    }
  }
}
