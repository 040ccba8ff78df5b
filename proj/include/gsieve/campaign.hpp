#pragma once

// Seeded verification campaigns over random actions.

#include <chrono>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "gsieve/dihedral.hpp"
#include "gsieve/oracle.hpp"
#include "gsieve/sieving.hpp"

namespace gsieve {

struct CampaignFailure {
  u64 seed = 0;
  std::size_t orbit = 0;
  std::string what;
  std::vector<u32> witness;
  u64 expected = 0;
  std::optional<Rational> got;
};

struct AbelianCampaignStats {
  u64 actions = 0;
  u64 elements = 0;
  u64 orbits = 0;
  u64 assembled_pass = 0;   // elements passing with the reported polynomial
  u64 independent_pass = 0; // actions whose character-sum and interpolation assemblies both pass
  u64 constructions_agree = 0;  // orbits where character sum == interpolation
  u64 closed_form_agree = 0;          // orbits where the selected reading matches
  u64 closed_form_alternate_agree = 0;
  u64 size_formula_holds = 0;
  u64 unique_minimal_divisor = 0;  // orbits where every stabilizer element has exactly one minimal divisor
  u64 single_prime_stabilizer = 0; // orbits whose stabilizer elements each use one prime
  u64 burnside_holds = 0;
  double seconds = 0;
  std::vector<CampaignFailure> independent_failures;  // must stay empty
  std::vector<CampaignFailure> closed_form_divergences;
  std::vector<CampaignFailure> property_violations;
};

struct DihedralCampaignStats {
  u64 actions = 0;
  u64 elements = 0;
  u64 orbits = 0;
  u64 interpolated_pass = 0;
  u64 burnside_holds = 0;
  u64 formula_b_full = 0;        // Size2N1 orbits with n1 = n
  u64 formula_b_full_agree = 0;
  u64 formula_b_partial = 0;     // Size2N1 orbits with n1 < n
  u64 formula_b_partial_agree = 0;
  u64 formula_a_orbits = 0;
  u64 formula_a_agree = 0;
  std::vector<bool> n_covered = std::vector<bool>(13, false);
  double seconds = 0;
  std::vector<CampaignFailure> interpolation_failures;  // must stay empty
  std::vector<CampaignFailure> formula_b_counterexamples;
  std::vector<CampaignFailure> formula_a_counterexamples;
};

inline bool burnside_holds(std::span<const VerificationVerdict> verdicts, u64 group_order, u64 orbits) {
  u64 sum = 0;
  for (const auto& v : verdicts) sum += v.expected;
  return sum == group_order * orbits;
}

inline AbelianCampaignStats run_abelian_campaign(RandomActionParams params, u64 count,
                                                 const SieveOptions& options = {}, std::size_t keep = 20) {
  AbelianCampaignStats stats;
  const auto start = std::chrono::steady_clock::now();
  const u64 first = params.seed;
  params.kind = GroupKind::Abelian;
  for (u64 k = 0; k < count; ++k) {
    params.seed = first + k;
    const AbelianAction action(random_abelian_action(params));
    const SieveReport report = action_polynomial(action, options);
    ++stats.actions;
    stats.elements += report.verdicts.size();
    for (const auto& v : report.verdicts) stats.assembled_pass += v.pass ? 1 : 0;
    if (report.character_sum_verified && report.interpolated_verified) ++stats.independent_pass;
    else if (stats.independent_failures.size() < keep)
      stats.independent_failures.push_back({params.seed, 0, "independent assembly failed", {}, 0, std::nullopt});
    if (burnside_holds(report.verdicts, action.group_order(), report.abelian_orbits.size())) ++stats.burnside_holds;
    else if (stats.property_violations.size() < keep)
      stats.property_violations.push_back({params.seed, 0, "burnside", {}, 0, std::nullopt});

    for (std::size_t o = 0; o < report.abelian_orbits.size(); ++o) {
      const auto& entry = report.abelian_orbits[o];
      const auto& data = entry.stabilizer;
      ++stats.orbits;
      if (entry.independent_constructions_agree) ++stats.constructions_agree;
      else if (stats.independent_failures.size() < keep)
        stats.independent_failures.push_back({params.seed, o, "character sum != interpolation", {}, 0, std::nullopt});
      if (entry.closed_form_alternate.agrees) ++stats.closed_form_alternate_agree;
      if (entry.closed_form.agrees) {
        ++stats.closed_form_agree;
      } else if (stats.closed_form_divergences.size() < keep) {
        CampaignFailure f{params.seed, o, entry.closed_form.label, {}, 0, std::nullopt};
        if (entry.closed_form.witness) {
          f.witness = action.to_original(entry.closed_form.witness->element);
          f.expected = entry.closed_form.witness->expected;
          f.got = entry.closed_form.witness->got;
        } else {
          f.what += ": " + entry.closed_form.error;
        }
        stats.closed_form_divergences.push_back(std::move(f));
      }
      if (entry.formula_size && *entry.formula_size == entry.orbit.members.size()) ++stats.size_formula_holds;
      else if (stats.property_violations.size() < keep)
        stats.property_violations.push_back({params.seed, o, "orbit size formula: " + entry.formula_error, {}, 0,
                                             std::nullopt});

      std::optional<GroupElement> not_unique, mixed;
      for (const auto& h : data.stabilizer_elements) {
        if (h.is_identity()) continue;
        if (!not_unique && minimal_divisor_count(data, h) != 1) not_unique = h;
        if (!mixed && !single_prime_support(h, data.reduced_orders)) mixed = h;
      }
      if (!not_unique) ++stats.unique_minimal_divisor;
      else if (stats.property_violations.size() < keep)
        stats.property_violations.push_back({params.seed, o, "minimal divisor not unique", not_unique->coords, 0,
                                             std::nullopt});
      if (!mixed) ++stats.single_prime_stabilizer;
      else if (stats.property_violations.size() < keep)
        stats.property_violations.push_back({params.seed, o, "stabilizer element mixes primes", mixed->coords, 0,
                                             std::nullopt});
    }
  }
  stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

// Sweeps n = 1..max_n in turn so every n is covered at least once when
// count >= max_n.
inline DihedralCampaignStats run_dihedral_campaign(RandomActionParams params, u64 count, std::size_t keep = 20) {
  DihedralCampaignStats stats;
  stats.n_covered.assign(params.max_n + 1, false);
  const auto start = std::chrono::steady_clock::now();
  const u64 first = params.seed;
  params.kind = GroupKind::Dihedral;
  for (u64 k = 0; k < count; ++k) {
    params.seed = first + k;
    params.fixed_n = static_cast<u32>(k % params.max_n) + 1;
    const DihedralAction action(random_dihedral_action(params));
    const SieveReport report = dihedral_action_polynomial(action, true);
    ++stats.actions;
    stats.n_covered[action.n()] = true;
    stats.elements += report.verdicts.size();
    for (const auto& v : report.verdicts) {
      if (v.pass) ++stats.interpolated_pass;
      else if (stats.interpolation_failures.size() < keep)
        stats.interpolation_failures.push_back({params.seed, 0, "verdict", v.element, v.expected, v.got});
    }
    if (burnside_holds(report.verdicts, action.group_order(), report.dihedral_orbits.size())) ++stats.burnside_holds;

    for (std::size_t o = 0; o < report.dihedral_orbits.size(); ++o) {
      const auto& entry = report.dihedral_orbits[o];
      ++stats.orbits;
      if (entry.orbit.kind == DihedralOrbitKind::SizeN1) {
        ++stats.formula_a_orbits;
        if (*entry.formula_a_agrees) ++stats.formula_a_agree;
        else if (stats.formula_a_counterexamples.size() < keep)
          stats.formula_a_counterexamples.push_back(
              {params.seed, o,
               "n=" + std::to_string(action.n()) + " n1=" + std::to_string(entry.orbit.n1) +
                   " t=" + std::to_string(entry.orbit.twist),
               entry.formula_a_witness->element, entry.formula_a_witness->expected, entry.formula_a_witness->got});
        continue;
      }
      const bool full = entry.orbit.n1 == action.n();
      (full ? stats.formula_b_full : stats.formula_b_partial) += 1;
      if (*entry.formula_b_agrees) {
        (full ? stats.formula_b_full_agree : stats.formula_b_partial_agree) += 1;
      } else if (stats.formula_b_counterexamples.size() < keep) {
        stats.formula_b_counterexamples.push_back(
            {params.seed, o, "n=" + std::to_string(action.n()) + " n1=" + std::to_string(entry.orbit.n1),
             entry.formula_b_witness->element, entry.formula_b_witness->expected, entry.formula_b_witness->got});
      }
    }
  }
  stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

}  // namespace gsieve
