#include <gtest/gtest.h>

#include <set>

#include "gsieve/abelian_action.hpp"
#include "gsieve/oracle.hpp"
#include "oracles.hpp"

using namespace gsieve;

namespace {

GroupElement el(std::vector<u32> c) { return GroupElement{std::move(c)}; }

AbelianActionSpec final_example() {
  std::vector<GroupElement> h1{el({2, 0, 0}), el({0, 1, 3})}, h2{el({0, 1, 0})};
  std::vector<AbelianActionSpec> parts{coset_action({4, 3, 9}, h1), coset_action({4, 3, 9}, h2)};
  return disjoint_union(parts);
}

}  // namespace

TEST(Validate, AcceptsSwap) { EXPECT_FALSE(validate_action(AbelianActionSpec{{2}, 2, {{1, 0}}}).has_value()); }

TEST(Validate, RejectsOrder) {
  auto issue = validate_action(AbelianActionSpec{{2}, 3, {{1, 2, 0}}});
  ASSERT_TRUE(issue);
  EXPECT_EQ(issue->kind, ActionIssueKind::OrderDoesNotDivide);
  EXPECT_NE(issue->message.find("order 3 which does not divide 2"), std::string::npos);
}

TEST(Validate, RejectsNonCommuting) {
  auto issue = validate_action(AbelianActionSpec{{2, 2}, 3, {{1, 0, 2}, {0, 2, 1}}});
  ASSERT_TRUE(issue);
  EXPECT_EQ(issue->kind, ActionIssueKind::NotCommuting);
  EXPECT_EQ(issue->witness, 0u);
}

TEST(Validate, RejectsNonBijectionAndShape) {
  EXPECT_EQ(validate_action(AbelianActionSpec{{2}, 2, {{0, 0}}})->kind, ActionIssueKind::NotBijective);
  EXPECT_EQ(validate_action(AbelianActionSpec{{2}, 3, {{1, 0}}})->kind, ActionIssueKind::Malformed);
  EXPECT_EQ(validate_action(AbelianActionSpec{{2, 2}, 2, {{1, 0}}})->kind, ActionIssueKind::Malformed);
  EXPECT_EQ(validate_action(AbelianActionSpec{{1}, 1, {{0}}})->kind, ActionIssueKind::Malformed);
  EXPECT_THROW(AbelianAction({{2}, 3, {{1, 2, 0}}}), InvalidAction);
}

TEST(Orbits, Examples) {
  const AbelianAction trivial({{3}, 4, {{0, 1, 2, 3}}});
  const auto t = compute_orbits(trivial);
  ASSERT_EQ(t.size(), 4u);
  for (u32 i = 0; i < 4; ++i) EXPECT_EQ(t[i].members, std::vector<u32>{i});

  const AbelianAction cyc({{4}, 4, {{1, 2, 3, 0}}});
  ASSERT_EQ(compute_orbits(cyc).size(), 1u);
  EXPECT_EQ(compute_orbits(cyc)[0].members.size(), 4u);

  const AbelianAction two(final_example());
  const auto o = compute_orbits(two);
  ASSERT_EQ(o.size(), 2u);
  EXPECT_EQ(o[0].members.size(), 18u);
  EXPECT_EQ(o[1].members.size(), 36u);
}

TEST(Orbits, PartitionClosedUnderGenerators) {
  for (u64 seed = 1; seed <= 30; ++seed) {
    const AbelianAction action(random_abelian_action(default_random_params(GroupKind::Abelian, seed)));
    std::vector<int> owner(action.set_size(), -1);
    const auto orbits = compute_orbits(action);
    for (std::size_t k = 0; k < orbits.size(); ++k) {
      EXPECT_EQ(orbits[k].base_point, orbits[k].members.front());
      for (u32 x : orbits[k].members) {
        EXPECT_EQ(owner[x], -1);
        owner[x] = static_cast<int>(k);
      }
    }
    for (u32 x = 0; x < action.set_size(); ++x) {
      ASSERT_NE(owner[x], -1);
      for (const auto& g : action.spec().generator_maps) EXPECT_EQ(owner[g[x]], owner[x]);
    }
  }
}

TEST(ElementIndex, Examples) {
  const std::vector<u32> orders{4, 8, 8, 9, 9};
  EXPECT_EQ(element_index(el({2, 4, 0, 0, 0}), orders), 2u);
  EXPECT_EQ(element_index(el({0, 0, 0, 6, 3}), orders), 3u);
  EXPECT_EQ(element_index(el({0, 0, 0, 0, 0}), orders), 1u);
  EXPECT_EQ(element_index(el({1, 0, 0, 0, 3}), orders), 12u);
}

TEST(ElementIndex, MatchesRepeatedAddition) {
  const std::vector<u32> orders{4, 6, 9};
  const MixedRadix grid(orders);
  std::vector<u32> g(3, 0);
  do {
    u64 t = 1;
    for (;; ++t) {
      bool zero = true;
      for (std::size_t i = 0; i < 3; ++i) zero = zero && (t * g[i]) % orders[i] == 0;
      if (zero) break;
    }
    EXPECT_EQ(element_index(g, orders), t);
  } while (grid.next(g));
}

TEST(Stabilizer, FreeOrbit) {
  const AbelianAction action({{2, 3}, 6, {{3, 4, 5, 0, 1, 2}, {1, 2, 0, 4, 5, 3}}});
  const auto data = stabilizer_data(action, compute_orbits(action)[0]);
  EXPECT_EQ(data.reduced_orders, (std::vector<u32>{2, 3}));
  ASSERT_EQ(data.minimal_elements.size(), 1u);
  EXPECT_TRUE(data.minimal_elements[0].is_identity());
  EXPECT_TRUE(data.generating_set.empty());
  EXPECT_EQ(orbit_size_formula(data), 6u);
}

TEST(Stabilizer, DiagonalCoset) {
  std::vector<GroupElement> h{el({2, 2})};
  const AbelianAction action(coset_action({4, 4}, h));
  const auto data = stabilizer_data(action, compute_orbits(action)[0]);
  EXPECT_EQ(data.reduced_orders, (std::vector<u32>{4, 4}));
  EXPECT_EQ(data.stabilizer_elements, (std::vector<GroupElement>{el({0, 0}), el({2, 2})}));
  EXPECT_EQ(data.generating_set, (std::vector<GroupElement>{el({2, 2})}));
  EXPECT_EQ(data.indices, (std::vector<u64>{2}));
}

TEST(Stabilizer, Example1728) {
  std::vector<GroupElement> h{el({2, 4, 0, 0, 0}), el({0, 4, 4, 0, 0}), el({0, 0, 0, 6, 3})};
  const AbelianAction action(coset_action({4, 8, 8, 9, 9}, h));
  const auto orbits = compute_orbits(action);
  ASSERT_EQ(orbits.size(), 1u);
  EXPECT_EQ(orbits[0].members.size(), 1728u);
  const auto data = stabilizer_data(action, orbits[0]);
  EXPECT_EQ(data.reduced_orders, (std::vector<u32>{4, 8, 8, 9, 9}));
  EXPECT_EQ(data.stabilizer_elements.size(), 12u);
  EXPECT_EQ(data.generating_set.size(), 3u);
  std::multiset<u64> idx(data.indices.begin(), data.indices.end());
  EXPECT_EQ(idx, (std::multiset<u64>{2, 2, 3}));
  EXPECT_EQ(orbit_size_formula(data), 1728u);
  std::multiset<u64> given;
  for (const auto& g : h) given.insert(element_index(g, data.reduced_orders));
  EXPECT_EQ(given, (std::multiset<u64>{2, 2, 3}));
}

TEST(Stabilizer, FinalExampleReducesFirstGenerator) {
  const AbelianAction action(final_example());
  const auto orbits = compute_orbits(action);
  const auto first = stabilizer_data(action, orbits[0]);
  EXPECT_EQ(first.reduced_orders, (std::vector<u32>{2, 3, 9}));
  EXPECT_EQ(first.generating_set, (std::vector<GroupElement>{el({0, 1, 3})}));
  EXPECT_EQ(orbit_size_formula(first), 18u);
  const auto second = stabilizer_data(action, orbits[1]);
  EXPECT_EQ(second.reduced_orders, (std::vector<u32>{4, 1, 9}));
  EXPECT_TRUE(second.generating_set.empty());
  EXPECT_EQ(orbit_size_formula(second), 36u);
}

TEST(Stabilizer, SizeFormulaUnreducedFinalExample) {
  StabilizerData d;
  d.reduced_orders = {4, 3, 9};
  d.indices = {element_index(el({2, 0, 0}), d.reduced_orders), element_index(el({0, 1, 3}), d.reduced_orders)};
  EXPECT_EQ(d.indices, (std::vector<u64>{2, 3}));
  EXPECT_EQ(orbit_size_formula(d), 18u);
}

TEST(Stabilizer, MinimalElementsMatchBruteForce) {
  // H = <(1,1), (0,4)> in Z8 + Z8, checked against k * h scanning over all pairs
  const std::vector<u32> orders{8, 8};
  const MixedRadix grid(orders);
  std::vector<GroupElement> gens{el({1, 1}), el({0, 4})};
  const auto member = subgroup_closure(grid, gens);
  std::vector<GroupElement> h;
  for (u64 i = 0; i < grid.size(); ++i)
    if (member[i]) h.push_back(GroupElement{grid.decode(i)});
  ASSERT_EQ(h.size(), 16u);
  const auto data = analyze_stabilizer(orders, h);

  std::vector<GroupElement> expected;
  for (const auto& g : h) {
    bool multiple = false;
    for (const auto& base : h) {
      if (base.is_identity()) continue;
      for (u32 k = 2; k <= 8 && !multiple; ++k)
        multiple = k * base.coords[0] == g.coords[0] && k * base.coords[1] == g.coords[1];
    }
    if (!multiple) expected.push_back(g);
  }
  EXPECT_EQ(data.minimal_elements, expected);
  for (const auto& g : h) {
    if (!g.is_identity()) {
      EXPECT_EQ(minimal_divisor_count(data, g), 1u);
    }
  }
  EXPECT_EQ(subgroup_size(grid, data.generating_set), 16u);
  EXPECT_EQ(orbit_size_formula(data), 4u);
}

TEST(Stabilizer, GeneratingSetIsInclusionMinimal) {
  for (u64 seed = 1; seed <= 40; ++seed) {
    const AbelianAction action(random_abelian_action(default_random_params(GroupKind::Abelian, seed)));
    for (const auto& orbit : compute_orbits(action)) {
      const auto data = stabilizer_data(action, orbit);
      const MixedRadix grid(data.reduced_orders);
      EXPECT_EQ(subgroup_size(grid, data.generating_set), data.stabilizer_elements.size());
      for (std::size_t i = 0; i < data.generating_set.size(); ++i) {
        auto without = data.generating_set;
        without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
        EXPECT_LT(subgroup_size(grid, without), data.stabilizer_elements.size());
      }
    }
  }
}

TEST(Stabilizer, NonDividingIndicesReported) {
  StabilizerData d;
  d.reduced_orders = {4};
  d.indices = {3};
  EXPECT_THROW(orbit_size_formula(d), InternalInconsistency);
}

TEST(Canonical, CrtSplitRoundTrip) {
  // Z6 acting on itself splits into Z2 + Z3
  const AbelianAction action({{6}, 6, {{1, 2, 3, 4, 5, 0}}});
  ASSERT_EQ(action.factors().size(), 2u);
  EXPECT_EQ(action.canonical_moduli(), (std::vector<u32>{2, 3}));
  for (u32 b = 0; b < 6; ++b) {
    const std::vector<u32> orig{b};
    EXPECT_EQ(action.to_original(action.to_canonical(orig)), orig);
    for (u32 x = 0; x < 6; ++x) EXPECT_EQ(action.apply_canonical(action.to_canonical(orig), x), (x + b) % 6);
  }
}

TEST(Canonical, OracleAgreesWithWalking) {
  for (u64 seed = 100; seed < 110; ++seed) {
    const auto spec = random_abelian_action(default_random_params(GroupKind::Abelian, seed));
    const AbelianAction action(spec);
    std::vector<std::vector<unsigned>> maps(spec.generator_maps.begin(), spec.generator_maps.end());
    const MixedRadix grid(spec.moduli);
    std::vector<u32> b(spec.moduli.size(), 0);
    do {
      EXPECT_EQ(static_cast<long>(brute_force_fixed_points(action, GroupElement{b})),
                oracle::fixed_points(maps, std::vector<long>(b.begin(), b.end())));
    } while (grid.next(b));
  }
}
