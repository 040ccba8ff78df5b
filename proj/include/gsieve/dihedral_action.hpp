#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "gsieve/abelian_action.hpp"
#include "gsieve/permutation.hpp"

namespace gsieve {

// D_n = <r, s | r^n, s^2, (rs)^2> acting on {0, ..., N-1}.
struct DihedralActionSpec {
  u32 n = 1;
  u32 set_size = 0;
  Permutation r_map;
  Permutation s_map;

  friend bool operator==(const DihedralActionSpec&, const DihedralActionSpec&) = default;
};

inline std::optional<ActionIssue> validate_action(const DihedralActionSpec& spec) {
  if (spec.n < 1) return ActionIssue{ActionIssueKind::Malformed, 0, 0, 0, 0, "n must be >= 1"};
  if (spec.r_map.size() != spec.set_size || spec.s_map.size() != spec.set_size)
    return ActionIssue{ActionIssueKind::Malformed, 0, 0, 0, 0,
                       "r and s must each have " + std::to_string(spec.set_size) + " images"};
  if (!is_bijection(spec.r_map))
    return ActionIssue{ActionIssueKind::NotBijective, 0, 0, 0, 0, "r is not a bijection"};
  if (!is_bijection(spec.s_map))
    return ActionIssue{ActionIssueKind::NotBijective, 1, 0, 0, 0, "s is not a bijection"};
  u64 r_order = permutation_order(spec.r_map);
  if (spec.n % r_order != 0)
    return ActionIssue{ActionIssueKind::OrderDoesNotDivide, 0, 0, 0, r_order,
                       "r has order " + std::to_string(r_order) + " which does not divide " +
                           std::to_string(spec.n)};
  u64 s_order = permutation_order(spec.s_map);
  if (2 % s_order != 0)
    return ActionIssue{ActionIssueKind::OrderDoesNotDivide, 1, 0, 0, s_order,
                       "s has order " + std::to_string(s_order) + " which does not divide 2"};
  for (u32 x = 0; x < spec.set_size; ++x) {
    u32 once = spec.r_map[spec.s_map[x]];
    if (spec.r_map[spec.s_map[once]] != x)
      return ActionIssue{ActionIssueKind::NotCommuting, 0, 1, x, 0,
                         "(rs)^2 is not the identity at point " + std::to_string(x)};
  }
  return std::nullopt;
}

enum class DihedralOrbitKind { SizeN1, Size2N1 };

// An orbit labeled as x_j = r^j(base). SizeN1: s(x_j) = x_{t-j}. Size2N1:
// y_i = s(x_i) and r(y_i) = y_{i-1}. Indices are mod n1.
struct DihedralOrbitData {
  u32 n1 = 1;
  DihedralOrbitKind kind = DihedralOrbitKind::SizeN1;
  u32 twist = 0;
  std::vector<u32> xs;
  std::vector<u32> ys;

  u64 size() const { return xs.size() + ys.size(); }
};

class DihedralAction {
 public:
  explicit DihedralAction(DihedralActionSpec spec) : spec_(std::move(spec)) {
    if (auto issue = validate_action(spec_)) throw InvalidAction(*issue);
  }

  const DihedralActionSpec& spec() const { return spec_; }
  u32 n() const { return spec_.n; }
  u32 set_size() const { return spec_.set_size; }
  u64 group_order() const { return 2ull * spec_.n; }

 private:
  DihedralActionSpec spec_;
};

}  // namespace gsieve
