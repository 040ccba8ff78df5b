#pragma once

// Ground truth by brute force: fixed-point counts obtained by applying
// composed generator maps, exhaustive verification of polynomials, and
// seeded generation of valid actions.

#include <random>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "gsieve/abelian_action.hpp"
#include "gsieve/dihedral_action.hpp"
#include "gsieve/multipoly.hpp"

namespace gsieve {

// Counts fixed points of original-coordinate group elements using the
// generator maps as given (no canonical split involved).
class FixedPointOracle {
 public:
  explicit FixedPointOracle(const AbelianAction& action) : action_(&action) {
    const auto& spec = action.spec();
    for (std::size_t i = 0; i < spec.moduli.size(); ++i) {
      std::vector<Permutation> table;
      if (static_cast<u64>(spec.moduli[i]) * spec.set_size <= (1u << 22)) {
        table.push_back(identity_permutation(spec.set_size));
        for (u32 k = 1; k < spec.moduli[i]; ++k) table.push_back(compose(spec.generator_maps[i], table.back()));
      }
      powers_.push_back(std::move(table));
    }
  }

  u32 apply(std::span<const u32> element, u32 x) const {
    const auto& spec = action_->spec();
    for (std::size_t i = 0; i < element.size(); ++i) {
      u32 k = element[i] % spec.moduli[i];
      if (!powers_[i].empty()) {
        x = powers_[i][k][x];
      } else {
        for (u32 step = 0; step < k; ++step) x = spec.generator_maps[i][x];
      }
    }
    return x;
  }

  u64 count(std::span<const u32> element) const {
    u64 fixed = 0;
    for (u32 x = 0; x < action_->set_size(); ++x)
      if (apply(element, x) == x) ++fixed;
    return fixed;
  }

 private:
  const AbelianAction* action_;
  std::vector<std::vector<Permutation>> powers_;
};

inline u64 brute_force_fixed_points(const AbelianAction& action, const GroupElement& element) {
  return FixedPointOracle(action).count(element.coords);
}

// Fixed points of s^i r^j.
inline u64 brute_force_fixed_points(const DihedralAction& action, u32 i, i64 j) {
  const auto& spec = action.spec();
  const Permutation rj = power(spec.r_map, static_cast<u64>(floor_mod(j, spec.n)));
  u64 fixed = 0;
  for (u32 x = 0; x < spec.set_size; ++x) {
    u32 y = rj[x];
    if (i % 2 == 1) y = spec.s_map[y];
    if (y == x) ++fixed;
  }
  return fixed;
}

struct VerificationVerdict {
  std::vector<u32> element;    // abelian: original coordinates; dihedral: (i, j)
  u64 expected = 0;
  std::optional<Rational> got;  // nullopt when the evaluation is not rational
  bool pass = false;
};

inline bool all_pass(std::span<const VerificationVerdict> verdicts) {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

inline VerificationVerdict make_verdict(std::vector<u32> element, u64 expected, std::optional<Rational> got) {
  bool pass = got.has_value() && *got == Rational(static_cast<long>(expected));
  return {std::move(element), expected, std::move(got), pass};
}

inline std::vector<VerificationVerdict> verify_polynomial(const AbelianAction& action, const MultiPoly& poly) {
  if (poly.profile().orders() != action.spec().moduli)
    throw ProfileMismatch("polynomial profile does not match the group moduli");
  const FixedPointOracle oracle(action);
  const Evaluator eval(poly);
  const MixedRadix& radix = poly.profile().radix();
  std::vector<VerificationVerdict> out;
  out.reserve(radix.size());
  std::vector<u32> b(radix.rank(), 0);
  std::vector<i64> point(radix.rank());
  do {
    std::copy(b.begin(), b.end(), point.begin());
    out.push_back(make_verdict(b, oracle.count(b), eval.rational_value(point)));
  } while (radix.next(b));
  return out;
}

inline VariableProfile dihedral_profile(u32 n) { return VariableProfile({2u, n}); }

inline std::vector<VerificationVerdict> verify_polynomial(const DihedralAction& action, const MultiPoly& poly) {
  if (!(poly.profile() == dihedral_profile(action.n())))
    throw ProfileMismatch("dihedral polynomial profile must be (2, n)");
  const Evaluator eval(poly);
  std::vector<VerificationVerdict> out;
  for (u32 i = 0; i < 2; ++i) {
    for (u32 j = 0; j < action.n(); ++j) {
      const i64 point[2] = {i, j};
      out.push_back(make_verdict({i, j}, brute_force_fixed_points(action, i, j), eval.rational_value(point)));
    }
  }
  return out;
}

// Z_{q_1} + ... + Z_{q_m} acting on the cosets of H = <subgroup_gens> by
// translation. Cosets are numbered in order of their smallest element.
inline AbelianActionSpec coset_action(const std::vector<u32>& moduli, std::span<const GroupElement> subgroup_gens) {
  const MixedRadix radix(moduli);
  const auto in_h = subgroup_closure(radix, subgroup_gens);
  std::vector<u64> h_elems;
  for (u64 idx = 0; idx < radix.size(); ++idx)
    if (in_h[idx]) h_elems.push_back(idx);

  std::vector<u32> label(radix.size(), ~u32{0});
  std::vector<u64> reps;
  std::vector<u32> g(moduli.size()), h(moduli.size()), sum(moduli.size());
  for (u64 idx = 0; idx < radix.size(); ++idx) {
    if (label[idx] != ~u32{0}) continue;
    const u32 id = static_cast<u32>(reps.size());
    reps.push_back(idx);
    radix.decode(idx, g);
    for (u64 hidx : h_elems) {
      radix.decode(hidx, h);
      for (std::size_t i = 0; i < moduli.size(); ++i) sum[i] = (g[i] + h[i]) % moduli[i];
      label[radix.encode(sum)] = id;
    }
  }
  AbelianActionSpec spec;
  spec.moduli = moduli;
  spec.set_size = static_cast<u32>(reps.size());
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    Permutation map(reps.size());
    for (std::size_t c = 0; c < reps.size(); ++c) {
      radix.decode(reps[c], g);
      g[i] = (g[i] + 1) % moduli[i];
      map[c] = label[radix.encode(g)];
    }
    spec.generator_maps.push_back(std::move(map));
  }
  return spec;
}

// Disjoint union of actions of the same group; points are relabeled by offset.
inline AbelianActionSpec disjoint_union(std::span<const AbelianActionSpec> parts) {
  if (parts.empty()) throw std::invalid_argument("disjoint_union: no parts");
  AbelianActionSpec out;
  out.moduli = parts.front().moduli;
  out.generator_maps.resize(out.moduli.size());
  for (const auto& part : parts) {
    if (part.moduli != out.moduli) throw std::invalid_argument("disjoint_union: moduli differ");
    for (std::size_t i = 0; i < out.moduli.size(); ++i)
      for (u32 v : part.generator_maps[i]) out.generator_maps[i].push_back(v + out.set_size);
    out.set_size += part.set_size;
  }
  return out;
}

// Canonical orbit of D_n per the orbit structure theorem: points x_0..x_{n1-1}
// with r(x_j) = x_{j+1}, and either s(x_j) = x_{t-j} (SizeN1) or a second
// layer y_i = s(x_i) with r(y_i) = y_{i-1} (Size2N1).
inline DihedralActionSpec dihedral_orbit_shape(u32 n, u32 n1, DihedralOrbitKind kind, u32 twist = 0) {
  if (n1 == 0 || n % n1 != 0) throw std::invalid_argument("dihedral orbit: n1 must divide n");
  DihedralActionSpec spec;
  spec.n = n;
  if (kind == DihedralOrbitKind::SizeN1) {
    spec.set_size = n1;
    for (u32 j = 0; j < n1; ++j) {
      spec.r_map.push_back((j + 1) % n1);
      spec.s_map.push_back(static_cast<u32>(floor_mod(static_cast<i64>(twist) - j, n1)));
    }
  } else {
    spec.set_size = 2 * n1;
    spec.r_map.resize(2 * n1);
    spec.s_map.resize(2 * n1);
    for (u32 j = 0; j < n1; ++j) {
      spec.r_map[j] = (j + 1) % n1;
      spec.r_map[n1 + j] = n1 + (j + n1 - 1) % n1;
      spec.s_map[j] = n1 + j;
      spec.s_map[n1 + j] = j;
    }
  }
  return spec;
}

inline DihedralActionSpec disjoint_union(std::span<const DihedralActionSpec> parts) {
  if (parts.empty()) throw std::invalid_argument("disjoint_union: no parts");
  DihedralActionSpec out;
  out.n = parts.front().n;
  for (const auto& part : parts) {
    if (part.n != out.n) throw std::invalid_argument("disjoint_union: n differs");
    for (u32 v : part.r_map) out.r_map.push_back(v + out.set_size);
    for (u32 v : part.s_map) out.s_map.push_back(v + out.set_size);
    out.set_size += part.set_size;
  }
  return out;
}

enum class GroupKind { Abelian, Dihedral };

struct RandomActionParams {
  u64 seed = 0;
  GroupKind kind = GroupKind::Abelian;
  u32 max_moduli = 3;
  std::vector<u32> modulus_choices = {2, 3, 4, 8, 9, 16, 27};
  u32 modulus_bound = 27;
  u32 max_set = 200;
  u32 max_n = 12;
  std::optional<u32> fixed_n;  // dihedral: use this n instead of sampling one
};

inline RandomActionParams default_random_params(GroupKind kind, u64 seed) {
  RandomActionParams p;
  p.seed = seed;
  p.kind = kind;
  if (kind == GroupKind::Dihedral) p.max_set = 48;
  return p;
}

namespace detail {

// Uniform in [lo, hi] from raw engine output; avoids the
// implementation-defined std::uniform_int_distribution.
inline u64 uniform(std::mt19937_64& rng, u64 lo, u64 hi) {
  const u64 range = hi - lo + 1;
  if (range == 0) return rng();
  const u64 limit = std::numeric_limits<u64>::max() - std::numeric_limits<u64>::max() % range;
  u64 v;
  do v = rng(); while (v >= limit);
  return lo + v % range;
}

// Conjugates every map by a bijection: point x is renamed to relabel[x].
inline Permutation conjugate_map(const Permutation& map, const Permutation& relabel) {
  Permutation out(map.size());
  for (std::size_t x = 0; x < map.size(); ++x) out[relabel[x]] = relabel[map[x]];
  return out;
}

inline Permutation random_permutation(std::mt19937_64& rng, std::size_t n) {
  Permutation p = identity_permutation(n);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[uniform(rng, 0, i - 1)]);
  return p;
}

}  // namespace detail

// Disjoint union of coset actions G/H for randomly generated subgroups H.
inline AbelianActionSpec random_abelian_action(const RandomActionParams& params) {
  std::vector<u32> choices;
  for (u32 q : params.modulus_choices)
    if (q >= 2 && q <= params.modulus_bound) choices.push_back(q);
  if (choices.empty() || params.max_moduli == 0 || params.max_set == 0)
    throw std::invalid_argument("random_action: bounds admit no abelian group");
  std::mt19937_64 rng(params.seed);
  const u64 m = detail::uniform(rng, 1, params.max_moduli);
  std::vector<u32> moduli;
  for (u64 i = 0; i < m; ++i) moduli.push_back(choices[detail::uniform(rng, 0, choices.size() - 1)]);
  const MixedRadix radix(moduli);
  const u64 target = detail::uniform(rng, 1, params.max_set);

  std::vector<AbelianActionSpec> parts;
  u64 total = 0;
  while (total < target) {
    const u64 room = params.max_set - total;
    std::vector<GroupElement> gens;
    auto random_element = [&] {
      GroupElement g{std::vector<u32>(m)};
      for (u64 i = 0; i < m; ++i) g.coords[i] = static_cast<u32>(detail::uniform(rng, 0, moduli[i] - 1));
      return g;
    };
    const u64 initial = detail::uniform(rng, 0, 2);
    for (u64 k = 0; k < initial; ++k) gens.push_back(random_element());
    u64 index = radix.size() / subgroup_size(radix, gens);
    for (int attempt = 0; index > room && attempt < 64; ++attempt) {
      gens.push_back(random_element());
      index = radix.size() / subgroup_size(radix, gens);
    }
    if (index > room) {
      gens.clear();
      for (u64 i = 0; i < m; ++i) {
        GroupElement e{std::vector<u32>(m, 0)};
        e.coords[i] = 1;
        gens.push_back(std::move(e));
      }
      index = 1;
    }
    parts.push_back(coset_action(moduli, gens));
    total += parts.back().set_size;
  }
  AbelianActionSpec spec = disjoint_union(parts);
  const Permutation relabel = detail::random_permutation(rng, spec.set_size);
  for (auto& g : spec.generator_maps) g = detail::conjugate_map(g, relabel);
  return spec;
}

// Disjoint union of canonical SizeN1 / Size2N1 dihedral orbits.
inline DihedralActionSpec random_dihedral_action(const RandomActionParams& params) {
  if (params.max_set == 0 || (params.max_n == 0 && !params.fixed_n))
    throw std::invalid_argument("random_action: bounds admit no dihedral action");
  std::mt19937_64 rng(params.seed);
  const u32 n = params.fixed_n ? *params.fixed_n : static_cast<u32>(detail::uniform(rng, 1, params.max_n));
  if (n == 0) throw std::invalid_argument("random_action: n must be >= 1");
  const auto divs = divisors(n);
  const u64 target = detail::uniform(rng, 1, params.max_set);
  std::vector<DihedralActionSpec> parts;
  u64 total = 0;
  while (total < target) {
    const u64 room = params.max_set - total;
    struct Option { u32 n1; DihedralOrbitKind kind; };
    std::vector<Option> options;
    for (u64 d : divs) {
      if (d <= room) options.push_back({static_cast<u32>(d), DihedralOrbitKind::SizeN1});
      if (2 * d <= room) options.push_back({static_cast<u32>(d), DihedralOrbitKind::Size2N1});
    }
    if (options.empty()) break;
    const Option pick = options[detail::uniform(rng, 0, options.size() - 1)];
    const u32 twist = static_cast<u32>(detail::uniform(rng, 0, pick.n1 - 1));
    parts.push_back(dihedral_orbit_shape(n, pick.n1, pick.kind, twist));
    total += parts.back().set_size;
  }
  DihedralActionSpec spec = disjoint_union(parts);
  const Permutation relabel = detail::random_permutation(rng, spec.set_size);
  spec.r_map = detail::conjugate_map(spec.r_map, relabel);
  spec.s_map = detail::conjugate_map(spec.s_map, relabel);
  return spec;
}

inline std::variant<AbelianActionSpec, DihedralActionSpec> random_action(const RandomActionParams& params) {
  if (params.kind == GroupKind::Abelian) return random_abelian_action(params);
  return random_dihedral_action(params);
}

}  // namespace gsieve
