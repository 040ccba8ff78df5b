#pragma once

#include <numeric>
#include <span>
#include <vector>

#include "gsieve/numeric.hpp"

namespace gsieve {

// Image array of a map on {0, ..., N-1}.
using Permutation = std::vector<u32>;

inline Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), u32{0});
  return p;
}

inline bool is_bijection(std::span<const u32> map) {
  std::vector<bool> seen(map.size(), false);
  for (u32 v : map) {
    if (v >= map.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

// (a o b)(x) = a(b(x))
inline Permutation compose(std::span<const u32> a, std::span<const u32> b) {
  Permutation out(b.size());
  for (std::size_t x = 0; x < b.size(); ++x) out[x] = a[b[x]];
  return out;
}

inline Permutation power(std::span<const u32> p, u64 k) {
  Permutation out = identity_permutation(p.size());
  Permutation base(p.begin(), p.end());
  while (k > 0) {
    if (k & 1u) out = compose(base, out);
    base = compose(base, base);
    k >>= 1u;
  }
  return out;
}

// Order of a bijection: lcm of its cycle lengths.
inline u64 permutation_order(std::span<const u32> p) {
  std::vector<bool> seen(p.size(), false);
  u64 order = 1;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (seen[x]) continue;
    u64 len = 0;
    for (std::size_t y = x; !seen[y]; y = p[y]) {
      seen[y] = true;
      ++len;
    }
    order = std::lcm(order, len);
  }
  return order;
}

// Smallest k >= 1 with p^k(x) = x.
inline u64 point_order(std::span<const u32> p, u32 x) {
  u64 k = 1;
  for (u32 y = p[x]; y != x; y = p[y]) ++k;
  return k;
}

}  // namespace gsieve
