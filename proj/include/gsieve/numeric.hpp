#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gsieve {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

inline u64 checked_mul(u64 a, u64 b) {
  u64 out;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("integer overflow in product");
  return out;
}

inline u64 ipow(u64 base, unsigned exp) {
  u64 out = 1;
  while (exp-- > 0) out = checked_mul(out, base);
  return out;
}

// Prime factorization as (prime, exponent) pairs in increasing prime order.
inline std::vector<std::pair<u64, unsigned>> factorize(u64 n) {
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) { n /= p; ++e; }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1u);
  return out;
}

struct PrimePower {
  u64 prime;
  unsigned exponent;
};

// n = p^e with e >= 1, else nullopt.
inline std::optional<PrimePower> as_prime_power(u64 n) {
  if (n < 2) return std::nullopt;
  auto f = factorize(n);
  if (f.size() != 1) return std::nullopt;
  return PrimePower{f[0].first, f[0].second};
}

inline unsigned valuation(u64 n, u64 p) {
  unsigned v = 0;
  while (n != 0 && n % p == 0) { n /= p; ++v; }
  return v;
}

inline u64 lcm_of(std::span<const u32> values) {
  u64 out = 1;
  for (u32 v : values) out = std::lcm(out, static_cast<u64>(v));
  return out;
}

inline u64 product_of(std::span<const u32> values) {
  u64 out = 1;
  for (u32 v : values) out = checked_mul(out, v);
  return out;
}

inline std::vector<u64> divisors(u64 n) {
  std::vector<u64> small, large;
  for (u64 d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

inline i64 floor_mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

// Mixed-radix encoding with the first coordinate most significant, so index
// order coincides with lexicographic order of coordinate tuples.
class MixedRadix {
 public:
  MixedRadix() = default;
  explicit MixedRadix(std::vector<u32> radices) : radices_(std::move(radices)) {
    size_ = 1;
    for (u32 r : radices_) {
      if (r == 0) throw std::invalid_argument("MixedRadix: zero radix");
      size_ = checked_mul(size_, r);
    }
  }

  u64 size() const { return size_; }
  std::size_t rank() const { return radices_.size(); }
  const std::vector<u32>& radices() const { return radices_; }

  u64 encode(std::span<const u32> digits) const {
    u64 idx = 0;
    for (std::size_t i = 0; i < radices_.size(); ++i) idx = idx * radices_[i] + digits[i];
    return idx;
  }

  void decode(u64 idx, std::span<u32> digits) const {
    for (std::size_t i = radices_.size(); i-- > 0;) {
      digits[i] = static_cast<u32>(idx % radices_[i]);
      idx /= radices_[i];
    }
  }

  std::vector<u32> decode(u64 idx) const {
    std::vector<u32> digits(radices_.size());
    decode(idx, digits);
    return digits;
  }

  // Odometer increment; returns false after wrapping past the last tuple.
  bool next(std::span<u32> digits) const {
    for (std::size_t i = radices_.size(); i-- > 0;) {
      if (++digits[i] < radices_[i]) return true;
      digits[i] = 0;
    }
    return false;
  }

 private:
  std::vector<u32> radices_;
  u64 size_ = 1;
};

}  // namespace gsieve
