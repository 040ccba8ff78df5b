#pragma once

// Sieving for dihedral actions. Elements are written s^i r^j and the
// polynomial f(x, y) is evaluated at ((-1)^i, zeta_n^j).

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "gsieve/dihedral_action.hpp"
#include "gsieve/multipoly.hpp"
#include "gsieve/oracle.hpp"
#include "gsieve/report.hpp"
#include "gsieve/sieving.hpp"

namespace gsieve {

// Labels the orbit of `base` as x_j = r^j(base) and checks the structure
// equations. A violation would mean the action is not a D_n action.
inline DihedralOrbitData classify_orbit(const DihedralActionSpec& spec, u32 base) {
  DihedralOrbitData orbit;
  orbit.n1 = static_cast<u32>(point_order(spec.r_map, base));
  const u32 n1 = orbit.n1;
  for (u32 j = 0, x = base; j < n1; ++j, x = spec.r_map[x]) orbit.xs.push_back(x);

  auto fail = [&](const std::string& what) {
    return InternalInconsistency("dihedral orbit of " + std::to_string(base) + ": " + what);
  };
  const auto it = std::find(orbit.xs.begin(), orbit.xs.end(), spec.s_map[base]);
  if (it != orbit.xs.end()) {
    orbit.kind = DihedralOrbitKind::SizeN1;
    orbit.twist = static_cast<u32>(it - orbit.xs.begin());
    for (u32 j = 0; j < n1; ++j) {
      const u32 want = orbit.xs[static_cast<std::size_t>(floor_mod(static_cast<i64>(orbit.twist) - j, n1))];
      if (spec.s_map[orbit.xs[j]] != want) throw fail("s(x_j) != x_{t-j} at j = " + std::to_string(j));
    }
    return orbit;
  }
  orbit.kind = DihedralOrbitKind::Size2N1;
  for (u32 j = 0; j < n1; ++j) {
    const u32 y = spec.s_map[orbit.xs[j]];
    if (std::find(orbit.xs.begin(), orbit.xs.end(), y) != orbit.xs.end())
      throw fail("s maps x_" + std::to_string(j) + " back into the rotation layer");
    orbit.ys.push_back(y);
  }
  for (u32 j = 0; j < n1; ++j) {
    if (spec.r_map[orbit.ys[j]] != orbit.ys[(j + n1 - 1) % n1])
      throw fail("r(y_i) != y_{i-1} at i = " + std::to_string(j));
  }
  return orbit;
}

// Fixed points of s^i r^j on one classified orbit, by the solution count of
// 2k = t - j (mod n1) for reflections.
inline u64 dihedral_fixed_points(const DihedralOrbitData& orbit, u32 i, i64 j) {
  const i64 n1 = orbit.n1;
  const bool rotation_trivial = floor_mod(j, n1) == 0;
  if (orbit.kind == DihedralOrbitKind::Size2N1) {
    if (i % 2 == 1) return 0;
    return rotation_trivial ? 2 * orbit.n1 : 0;
  }
  if (i % 2 == 0) return rotation_trivial ? orbit.n1 : 0;
  if (n1 % 2 == 1) return 1;
  return floor_mod(static_cast<i64>(orbit.twist) - j, 2) == 0 ? 2 : 0;
}

inline std::vector<Rational> dihedral_counts(const DihedralOrbitData& orbit, u32 n) {
  std::vector<Rational> values;
  for (u32 i = 0; i < 2; ++i)
    for (u32 j = 0; j < n; ++j) values.emplace_back(static_cast<long>(dihedral_fixed_points(orbit, i, j)));
  return values;
}

inline MultiPoly dihedral_orbit_polynomial(const DihedralOrbitData& orbit, u32 n) {
  return interpolate_polynomial(dihedral_profile(n), dihedral_counts(orbit, n));
}

// The printed size-n1 formula, evaluated pointwise because its correction
// term depends on j and t directly:
//   1/2 ((1+x)(1+y+...+y^{n-1}) + (1-x)(1 + 1/2 (1+(-1)^{t-j}) (-1)^{n1}))
inline Rational literal_formula_a(const DihedralOrbitData& orbit, u32 n, u32 i, u32 j) {
  const Rational x(i % 2 == 0 ? 1 : -1);
  const Rational y_sum(j % n == 0 ? static_cast<long>(n) : 0);
  const long parity_t_j = floor_mod(static_cast<i64>(orbit.twist) - j, 2) == 0 ? 1 : -1;
  const long sign_n1 = orbit.n1 % 2 == 0 ? 1 : -1;
  const Rational correction = Rational(1) + Rational(1, 2) * Rational(1 + parity_t_j) * Rational(sign_n1);
  return Rational(1, 2) * ((Rational(1) + x) * y_sum + (Rational(1) - x) * correction);
}

// The printed size-2n1 formula (1+x)(1+y+...+y^{n-1}).
inline MultiPoly literal_formula_b(u32 n) {
  const VariableProfile profile = dihedral_profile(n);
  const i64 x[2] = {1, 0}, y[2] = {0, 1};
  return geometric_factor(profile, x, 2) * geometric_factor(profile, y, n);
}

namespace detail {

inline std::vector<u32> dihedral_orbit_bases(const DihedralActionSpec& spec) {
  std::vector<bool> seen(spec.set_size, false);
  std::vector<u32> bases;
  for (u32 x = 0; x < spec.set_size; ++x) {
    if (seen[x]) continue;
    bases.push_back(x);
    std::vector<u32> stack{x};
    seen[x] = true;
    while (!stack.empty()) {
      const u32 v = stack.back();
      stack.pop_back();
      for (u32 w : {spec.r_map[v], spec.s_map[v]}) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
  }
  return bases;
}

}  // namespace detail

// Sums the interpolated orbit polynomials and verifies all 2n elements.
// The printed formulas are always compared per orbit; their divergences are
// listed as discrepancies only when `printed_literal` is set.
inline SieveReport dihedral_action_polynomial(const DihedralAction& action, bool printed_literal = false) {
  const u32 n = action.n();
  SieveReport report;
  report.kind = GroupKind::Dihedral;
  report.profile = dihedral_profile(n);
  report.polynomial = MultiPoly(report.profile);
  const MultiPoly formula_b = literal_formula_b(n);
  const Evaluator eval_b(formula_b);

  const auto bases = detail::dihedral_orbit_bases(action.spec());
  for (std::size_t o = 0; o < bases.size(); ++o) {
    DihedralOrbitReport entry;
    entry.orbit = classify_orbit(action.spec(), bases[o]);
    for (u32 i = 0; i < 2; ++i)
      for (u32 j = 0; j < n; ++j) entry.counts.push_back(dihedral_fixed_points(entry.orbit, i, j));
    entry.poly = dihedral_orbit_polynomial(entry.orbit, n);

    std::optional<Witness> witness;
    for (u32 i = 0; i < 2 && !witness; ++i) {
      for (u32 j = 0; j < n && !witness; ++j) {
        const u64 want = entry.counts[i * n + j];
        std::optional<Rational> got;
        if (entry.orbit.kind == DihedralOrbitKind::SizeN1) {
          got = literal_formula_a(entry.orbit, n, i, j);
        } else {
          const i64 pt[2] = {i, j};
          got = eval_b.rational_value(pt);
        }
        if (!got || *got != Rational(static_cast<long>(want))) witness = Witness{{i, j}, want, got};
      }
    }
    const bool agrees = !witness.has_value();
    if (entry.orbit.kind == DihedralOrbitKind::SizeN1) {
      entry.formula_a_agrees = agrees;
      entry.formula_a_witness = witness;
    } else {
      entry.formula_b_agrees = agrees;
      entry.formula_b_witness = witness;
    }
    if (printed_literal && witness) {
      const bool a = entry.orbit.kind == DihedralOrbitKind::SizeN1;
      report.discrepancies.push_back(
          {a ? "dihedral_formula_a" : "dihedral_formula_b", o, witness->element, witness->expected, witness->got,
           "printed formula disagrees with the fixed-point count (n1 = " + std::to_string(entry.orbit.n1) +
               (a ? ", t = " + std::to_string(entry.orbit.twist) : std::string()) + ")"});
    }
    report.polynomial += entry.poly;
    report.dihedral_orbits.push_back(std::move(entry));
  }
  report.verdicts = verify_polynomial(action, report.polynomial);
  return report;
}

}  // namespace gsieve
