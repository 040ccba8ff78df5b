#pragma once

// Finite abelian group actions Z_{q_1} + ... + Z_{q_m} on {0, ..., N-1}:
// validation, prime-power canonicalization, orbits, and per-orbit
// stabilizer structure (reduced orders, indices, minimal elements).

#include <algorithm>
#include <compare>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsieve/numeric.hpp"
#include "gsieve/permutation.hpp"

namespace gsieve {

struct AbelianActionSpec {
  std::vector<u32> moduli;
  u32 set_size = 0;
  std::vector<Permutation> generator_maps;

  friend bool operator==(const AbelianActionSpec&, const AbelianActionSpec&) = default;
};

struct GroupElement {
  std::vector<u32> coords;

  bool is_identity() const {
    return std::all_of(coords.begin(), coords.end(), [](u32 c) { return c == 0; });
  }
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

enum class ActionIssueKind { Malformed, NotBijective, OrderDoesNotDivide, NotCommuting };

struct ActionIssue {
  ActionIssueKind kind;
  std::size_t generator = 0;
  std::size_t other = 0;
  u32 witness = 0;
  u64 order = 0;
  std::string message;
};

struct InvalidAction : std::invalid_argument {
  explicit InvalidAction(ActionIssue i) : std::invalid_argument(i.message), issue(std::move(i)) {}
  ActionIssue issue;
};

// A computed quantity contradicts an identity the construction relies on.
struct InternalInconsistency : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// First violated invariant, or nullopt when the spec is a valid action.
inline std::optional<ActionIssue> validate_action(const AbelianActionSpec& spec) {
  const std::size_t m = spec.moduli.size();
  if (m == 0)
    return ActionIssue{ActionIssueKind::Malformed, 0, 0, 0, 0, "at least one generator is required"};
  if (spec.generator_maps.size() != m)
    return ActionIssue{ActionIssueKind::Malformed, 0, 0, 0, 0,
                       "expected " + std::to_string(m) + " generator maps, got " +
                           std::to_string(spec.generator_maps.size())};
  for (std::size_t i = 0; i < m; ++i) {
    if (spec.moduli[i] < 2)
      return ActionIssue{ActionIssueKind::Malformed, i, 0, 0, 0,
                         "modulus of generator " + std::to_string(i) + " must be >= 2"};
    const auto& g = spec.generator_maps[i];
    if (g.size() != spec.set_size)
      return ActionIssue{ActionIssueKind::Malformed, i, 0, 0, 0,
                         "generator " + std::to_string(i) + " has " + std::to_string(g.size()) +
                             " images, expected " + std::to_string(spec.set_size)};
    if (!is_bijection(g))
      return ActionIssue{ActionIssueKind::NotBijective, i, 0, 0, 0,
                         "generator " + std::to_string(i) + " is not a bijection"};
    u64 order = permutation_order(g);
    if (spec.moduli[i] % order != 0)
      return ActionIssue{ActionIssueKind::OrderDoesNotDivide, i, 0, 0, order,
                         "generator " + std::to_string(i) + " has order " + std::to_string(order) +
                             " which does not divide " + std::to_string(spec.moduli[i])};
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const auto& a = spec.generator_maps[i];
      const auto& b = spec.generator_maps[j];
      for (u32 x = 0; x < spec.set_size; ++x) {
        if (a[b[x]] != b[a[x]])
          return ActionIssue{ActionIssueKind::NotCommuting, i, j, x, 0,
                             "generators " + std::to_string(i) + " and " + std::to_string(j) +
                                 " do not commute at point " + std::to_string(x)};
      }
    }
  }
  return std::nullopt;
}

// One prime-power factor Z_{p^a} of a source generator Z_q.
struct SplitFactor {
  std::size_t source;
  u64 prime;
  unsigned exponent;
  u32 modulus;     // p^a
  u32 idempotent;  // u = 1 mod p^a, 0 mod q / p^a; the factor's generator is g^u
};

class AbelianAction {
 public:
  explicit AbelianAction(AbelianActionSpec spec, u64 enumeration_limit = 1'000'000)
      : spec_(std::move(spec)), enumeration_limit_(enumeration_limit) {
    if (auto issue = validate_action(spec_)) throw InvalidAction(*issue);
    for (std::size_t i = 0; i < spec_.moduli.size(); ++i) {
      const u64 q = spec_.moduli[i];
      for (auto [p, a] : factorize(q)) {
        const u64 pa = ipow(p, a), rest = q / pa;
        // rest * (rest^-1 mod pa) is the idempotent
        u64 u = 0;
        for (u64 k = 0; k < pa; ++k) {
          if ((rest * k) % pa == 1 % pa) {
            u = (rest * k) % q;
            break;
          }
        }
        factors_.push_back({i, p, a, static_cast<u32>(pa), static_cast<u32>(u)});
        canonical_maps_.push_back(power(spec_.generator_maps[i], u));
      }
    }
    for (const auto& g : canonical_maps_) cycles_.emplace_back(g);
  }

  const AbelianActionSpec& spec() const { return spec_; }
  u32 set_size() const { return spec_.set_size; }
  std::size_t rank() const { return spec_.moduli.size(); }
  u64 group_order() const { return product_of(spec_.moduli); }
  u64 enumeration_limit() const { return enumeration_limit_; }

  const std::vector<SplitFactor>& factors() const { return factors_; }
  std::vector<u32> canonical_moduli() const {
    std::vector<u32> out;
    for (const auto& f : factors_) out.push_back(f.modulus);
    return out;
  }
  const Permutation& canonical_generator(std::size_t j) const { return canonical_maps_[j]; }

  // g_j^k(x) for the j-th canonical (prime-power) generator.
  u32 apply_canonical(std::size_t j, u64 k, u32 x) const { return cycles_[j].apply(k, x); }

  u32 apply_canonical(std::span<const u32> coords, u32 x) const {
    for (std::size_t j = 0; j < coords.size(); ++j) x = cycles_[j].apply(coords[j], x);
    return x;
  }

  // Original coordinates -> canonical coordinates (b mod p^a per factor).
  std::vector<u32> to_canonical(std::span<const u32> original) const {
    std::vector<u32> out;
    for (const auto& f : factors_) out.push_back(original[f.source] % f.modulus);
    return out;
  }

  // Canonical coordinates -> original coordinates by CRT recombination.
  std::vector<u32> to_original(std::span<const u32> canonical) const {
    std::vector<u64> acc(rank(), 0);
    for (std::size_t j = 0; j < factors_.size(); ++j) {
      const auto& f = factors_[j];
      acc[f.source] = (acc[f.source] + static_cast<u64>(canonical[j]) * f.idempotent) %
                      spec_.moduli[f.source];
    }
    return {acc.begin(), acc.end()};
  }

  u32 apply(std::span<const u32> original, u32 x) const {
    return apply_canonical(to_canonical(original), x);
  }

 private:
  // Cycle decomposition of one bijection; powers applied in O(1).
  struct CycleTable {
    explicit CycleTable(const Permutation& p) : cycle_of(p.size()), position(p.size()) {
      std::vector<bool> seen(p.size(), false);
      for (u32 x = 0; x < p.size(); ++x) {
        if (seen[x]) continue;
        cycles.emplace_back();
        for (u32 y = x; !seen[y]; y = p[y]) {
          seen[y] = true;
          cycle_of[y] = static_cast<u32>(cycles.size() - 1);
          position[y] = static_cast<u32>(cycles.back().size());
          cycles.back().push_back(y);
        }
      }
    }
    u32 apply(u64 k, u32 x) const {
      const auto& c = cycles[cycle_of[x]];
      return c[(position[x] + k) % c.size()];
    }
    std::vector<std::vector<u32>> cycles;
    std::vector<u32> cycle_of, position;
  };

  AbelianActionSpec spec_;
  u64 enumeration_limit_;
  std::vector<SplitFactor> factors_;
  std::vector<Permutation> canonical_maps_;
  std::vector<CycleTable> cycles_;
};

struct OrbitData {
  std::vector<u32> members;
  u32 base_point = 0;
};

// Orbits of the full group, ordered by smallest member.
inline std::vector<OrbitData> compute_orbits(const AbelianAction& action) {
  const u32 n = action.set_size();
  std::vector<bool> seen(n, false);
  std::vector<OrbitData> out;
  for (u32 x = 0; x < n; ++x) {
    if (seen[x]) continue;
    OrbitData orbit;
    orbit.base_point = x;
    std::deque<u32> queue{x};
    seen[x] = true;
    while (!queue.empty()) {
      u32 y = queue.front();
      queue.pop_front();
      orbit.members.push_back(y);
      for (const auto& g : action.spec().generator_maps) {
        if (!seen[g[y]]) {
          seen[g[y]] = true;
          queue.push_back(g[y]);
        }
      }
    }
    std::sort(orbit.members.begin(), orbit.members.end());
    out.push_back(std::move(orbit));
  }
  return out;
}

// Smallest t >= 1 with t * g = 0, i.e. lcm_i(n_i / gcd(n_i, a_i)).
inline u64 element_index(std::span<const u32> coords, std::span<const u32> orders) {
  u64 out = 1;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    u64 n = orders[i];
    out = std::lcm(out, n / std::gcd(n, static_cast<u64>(coords[i] % n)));
  }
  return out;
}

inline u64 element_index(const GroupElement& g, std::span<const u32> orders) {
  return element_index(g.coords, orders);
}

// Membership mask (over mixed-radix indices) of the subgroup generated by gens.
inline std::vector<bool> subgroup_closure(const MixedRadix& radix, std::span<const GroupElement> gens) {
  std::vector<bool> member(radix.size(), false);
  const auto& orders = radix.radices();
  std::vector<u64> queue{0};
  member[0] = true;
  std::vector<u32> cur(orders.size()), nxt(orders.size());
  for (std::size_t head = 0; head < queue.size(); ++head) {
    radix.decode(queue[head], cur);
    for (const auto& g : gens) {
      for (std::size_t i = 0; i < orders.size(); ++i) nxt[i] = (cur[i] + g.coords[i]) % orders[i];
      u64 idx = radix.encode(nxt);
      if (!member[idx]) {
        member[idx] = true;
        queue.push_back(idx);
      }
    }
  }
  return member;
}

inline std::size_t subgroup_size(const MixedRadix& radix, std::span<const GroupElement> gens) {
  auto mask = subgroup_closure(radix, gens);
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
}

struct StabilizerData {
  std::vector<u32> reduced_orders;
  std::vector<GroupElement> stabilizer_elements;  // lexicographic
  std::vector<GroupElement> minimal_elements;     // lexicographic, identity first
  std::vector<GroupElement> generating_set;       // T
  std::vector<u64> indices;                       // g_ind for each element of T
};

// Minimal elements and a minimal generating set of a stabilizer subgroup H
// of Z_{n_1} + ... + Z_{n_m}. An element is minimal when it is not k * h for
// an integer k >= 2 and h in H, reading coordinates as nonnegative integers.
// T is chosen greedily over the nonzero minimal elements in lexicographic
// order, then pruned back to an inclusion-minimal set.
inline StabilizerData analyze_stabilizer(std::vector<u32> reduced_orders,
                                         std::vector<GroupElement> stabilizer) {
  StabilizerData data;
  data.reduced_orders = std::move(reduced_orders);
  std::sort(stabilizer.begin(), stabilizer.end());
  data.stabilizer_elements = std::move(stabilizer);
  const MixedRadix radix(data.reduced_orders);
  const std::size_t m = data.reduced_orders.size();

  std::vector<bool> in_h(radix.size(), false);
  for (const auto& h : data.stabilizer_elements) in_h[radix.encode(h.coords)] = true;

  std::vector<u32> part(m);
  for (const auto& h : data.stabilizer_elements) {
    u64 g = 0;
    for (u32 c : h.coords) g = std::gcd(g, static_cast<u64>(c));
    bool minimal = true;
    for (u64 k = 2; k <= g && minimal; ++k) {
      if (g % k != 0) continue;
      for (std::size_t i = 0; i < m; ++i) part[i] = static_cast<u32>(h.coords[i] / k);
      if (in_h[radix.encode(part)]) minimal = false;
    }
    if (minimal) data.minimal_elements.push_back(h);
  }

  const std::size_t target = data.stabilizer_elements.size();
  std::vector<GroupElement> chosen;
  std::vector<bool> generated = subgroup_closure(radix, chosen);
  for (const auto& g : data.minimal_elements) {
    if (g.is_identity() || generated[radix.encode(g.coords)]) continue;
    chosen.push_back(g);
    generated = subgroup_closure(radix, chosen);
  }
  for (std::size_t i = 0; i < chosen.size();) {
    std::vector<GroupElement> without = chosen;
    without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
    if (subgroup_size(radix, without) == target) chosen = std::move(without);
    else ++i;
  }
  data.generating_set = std::move(chosen);
  for (const auto& g : data.generating_set) data.indices.push_back(element_index(g, data.reduced_orders));
  return data;
}

// Stabilizer structure of an orbit's base point in canonical coordinates.
inline StabilizerData stabilizer_data(const AbelianAction& action, const OrbitData& orbit) {
  const u32 x = orbit.base_point;
  const std::size_t m = action.factors().size();
  std::vector<u32> orders(m);
  for (std::size_t j = 0; j < m; ++j)
    orders[j] = static_cast<u32>(point_order(action.canonical_generator(j), x));
  const MixedRadix radix(orders);
  if (radix.size() > action.enumeration_limit())
    throw std::length_error("reduced group of order " + std::to_string(radix.size()) +
                            " exceeds the enumeration limit");
  std::vector<GroupElement> stab;
  std::vector<u32> b(m, 0);
  do {
    if (action.apply_canonical(b, x) == x) stab.push_back(GroupElement{b});
  } while (radix.next(b));
  return analyze_stabilizer(std::move(orders), std::move(stab));
}

// prod n_i / prod_{g in T} g_ind.
inline u64 orbit_size_formula(const StabilizerData& data) {
  u64 num = product_of(data.reduced_orders), den = 1;
  for (u64 ind : data.indices) den = checked_mul(den, ind);
  if (den == 0 || num % den != 0)
    throw InternalInconsistency("orbit size formula: " + std::to_string(num) + " is not divisible by " +
                                std::to_string(den));
  return num / den;
}

// Number of nonzero minimal elements g with h = k * g as integer tuples, k >= 1.
inline std::size_t minimal_divisor_count(const StabilizerData& data, const GroupElement& h) {
  std::size_t count = 0;
  for (const auto& g : data.minimal_elements) {
    if (g.is_identity()) continue;
    std::optional<u64> k;
    bool ok = true;
    for (std::size_t i = 0; i < h.coords.size() && ok; ++i) {
      if (g.coords[i] == 0) {
        ok = h.coords[i] == 0;
        continue;
      }
      if (h.coords[i] % g.coords[i] != 0) { ok = false; continue; }
      u64 ki = h.coords[i] / g.coords[i];
      if (k && *k != ki) ok = false;
      k = ki;
    }
    if (ok && k && *k >= 1) ++count;
  }
  return count;
}

// True when every nonzero coordinate sits at a position whose order is a
// power of one common prime.
inline bool single_prime_support(const GroupElement& g, std::span<const u32> orders) {
  std::optional<u64> prime;
  for (std::size_t i = 0; i < g.coords.size(); ++i) {
    if (g.coords[i] == 0) continue;
    auto pp = as_prime_power(orders[i]);
    if (!pp) return false;
    if (prime && *prime != pp->prime) return false;
    prime = pp->prime;
  }
  return true;
}

}  // namespace gsieve
