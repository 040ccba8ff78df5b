#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_L). Values are residues of
// rational polynomials modulo the L-th cyclotomic polynomial, which makes
// the coefficient vector a canonical form.

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsieve/numeric.hpp"
#include "gsieve/rational.hpp"

namespace gsieve {

struct OrderMismatch : std::invalid_argument {
  OrderMismatch(u64 a, u64 b)
      : std::invalid_argument("cyclotomic order mismatch: " + std::to_string(a) + " vs " +
                              std::to_string(b)) {}
};

namespace detail {

// Exact quotient of num by a monic den; throws if the remainder is nonzero.
inline std::vector<i64> divide_monic(std::vector<i64> num, const std::vector<i64>& den) {
  const std::size_t n = num.size() - 1, k = den.size() - 1;
  if (n < k) throw std::logic_error("divide_monic: degree too small");
  std::vector<i64> quot(n - k + 1, 0);
  for (std::size_t i = n + 1; i-- > k;) {
    i64 c = num[i];
    quot[i - k] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= k; ++j) {
      i64 prod;
      if (__builtin_mul_overflow(c, den[j], &prod) ||
          __builtin_sub_overflow(num[i - k + j], prod, &num[i - k + j]))
        throw std::overflow_error("cyclotomic polynomial coefficients overflow");
    }
  }
  for (std::size_t i = 0; i < k; ++i)
    if (num[i] != 0) throw std::logic_error("divide_monic: inexact division");
  return quot;
}

template <typename T>
class MemoTable {
 public:
  template <typename Make>
  const T& get(u64 key, Make make) {
    {
      std::lock_guard lock(mutex_);
      if (auto it = table_.find(key); it != table_.end()) return *it->second;
    }
    // Built unlocked: construction may recurse into the same table.
    auto built = std::make_unique<T>(make());
    std::lock_guard lock(mutex_);
    auto [it, inserted] = table_.try_emplace(key, std::move(built));
    return *it->second;
  }

 private:
  std::mutex mutex_;
  std::map<u64, std::unique_ptr<T>> table_;
};

}  // namespace detail

// Integer coefficients of Phi_L, lowest degree first. Memoized per process.
inline const std::vector<i64>& cyclotomic_polynomial(u64 order) {
  if (order == 0) throw std::invalid_argument("cyclotomic_polynomial: order must be >= 1");
  static detail::MemoTable<std::vector<i64>> memo;
  return memo.get(order, [order] {
    std::vector<i64> poly(order + 1, 0);
    poly[0] = -1;
    poly[order] = 1;
    for (u64 d : divisors(order)) {
      if (d == order) continue;
      poly = detail::divide_monic(std::move(poly), cyclotomic_polynomial(d));
    }
    return poly;
  });
}

inline std::size_t euler_phi(u64 order) { return cyclotomic_polynomial(order).size() - 1; }

// Residues of x^k modulo Phi_L for 0 <= k < L, stored sparsely.
struct ResidueTable {
  u64 order = 1;
  std::size_t phi = 1;
  std::vector<std::vector<std::pair<u32, i64>>> powers;
};

inline const ResidueTable& residue_table(u64 order) {
  static detail::MemoTable<ResidueTable> memo;
  return memo.get(order, [order] {
    const auto& phi_poly = cyclotomic_polynomial(order);
    ResidueTable t;
    t.order = order;
    t.phi = phi_poly.size() - 1;
    t.powers.resize(order);
    std::vector<i64> cur(t.phi, 0);
    cur[0] = 1;
    for (u64 k = 0; k < order; ++k) {
      auto& sparse = t.powers[k];
      for (std::size_t i = 0; i < t.phi; ++i)
        if (cur[i] != 0) sparse.emplace_back(static_cast<u32>(i), cur[i]);
      // multiply by x and fold x^phi back using the monic relation
      i64 top = cur[t.phi - 1];
      for (std::size_t i = t.phi; i-- > 1;) cur[i] = cur[i - 1];
      cur[0] = 0;
      if (top != 0) {
        for (std::size_t i = 0; i < t.phi; ++i) {
          i64 prod;
          if (__builtin_mul_overflow(top, phi_poly[i], &prod) ||
              __builtin_sub_overflow(cur[i], prod, &cur[i]))
            throw std::overflow_error("residue table overflow");
        }
      }
    }
    return t;
  });
}

class CyclotomicNumber {
 public:
  explicit CyclotomicNumber(u64 order = 1) : order_(order), coeffs_(euler_phi(order)) {}

  CyclotomicNumber(u64 order, std::vector<Rational> coeffs) : order_(order), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != euler_phi(order))
      throw std::invalid_argument("CyclotomicNumber: coefficient count must equal phi(order)");
  }

  static CyclotomicNumber from_rational(u64 order, const Rational& r) {
    CyclotomicNumber out(order);
    out.coeffs_[0] = r;
    return out;
  }

  // Sum of c_k * zeta^k for arbitrary integer exponents k.
  static CyclotomicNumber from_powers(u64 order, std::span<const std::pair<i64, Rational>> terms) {
    const auto& table = residue_table(order);
    CyclotomicNumber out(order);
    for (const auto& [k, c] : terms) {
      if (c.is_zero()) continue;
      for (auto [i, v] : table.powers[floor_mod(k, static_cast<i64>(order))])
        out.coeffs_[i] += c * Rational(v);
    }
    return out;
  }

  u64 order() const { return order_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (!c.is_zero()) return false;
    return true;
  }

  std::optional<Rational> as_rational() const {
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
      if (!coeffs_[i].is_zero()) return std::nullopt;
    return coeffs_[0];
  }

  CyclotomicNumber& operator+=(const CyclotomicNumber& o) {
    require_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  CyclotomicNumber& operator-=(const CyclotomicNumber& o) {
    require_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  CyclotomicNumber& operator*=(const Rational& r) {
    for (auto& c : coeffs_) c *= r;
    return *this;
  }

  friend CyclotomicNumber operator+(CyclotomicNumber a, const CyclotomicNumber& b) { return a += b; }
  friend CyclotomicNumber operator-(CyclotomicNumber a, const CyclotomicNumber& b) { return a -= b; }
  friend CyclotomicNumber operator*(CyclotomicNumber a, const Rational& r) { return a *= r; }
  friend CyclotomicNumber operator*(const Rational& r, CyclotomicNumber a) { return a *= r; }
  friend CyclotomicNumber operator-(CyclotomicNumber a) { return a *= Rational(-1); }

  friend CyclotomicNumber operator*(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    a.require_same(b);
    std::vector<std::pair<i64, Rational>> prod;
    prod.reserve(a.coeffs_.size() * b.coeffs_.size());
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
        if (b.coeffs_[j].is_zero()) continue;
        prod.emplace_back(static_cast<i64>(i + j), a.coeffs_[i] * b.coeffs_[j]);
      }
    }
    return from_powers(a.order_, prod);
  }
  CyclotomicNumber& operator*=(const CyclotomicNumber& o) { return *this = *this * o; }

  // Throws OrderMismatch for different fields; callers lift with embed first.
  friend bool operator==(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    a.require_same(b);
    return a.coeffs_ == b.coeffs_;
  }

  // Floating-point image under zeta_L -> exp(2 pi i / L); debugging cross-check only.
  std::complex<double> to_complex() const {
    std::complex<double> out{0.0, 0.0};
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (coeffs_[k].is_zero()) continue;
      double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(order_);
      out += coeffs_[k].to_double() * std::polar(1.0, angle);
    }
    return out;
  }

  std::string to_string() const {
    std::string out;
    const std::string z = "zeta" + std::to_string(order_);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      const Rational& c = coeffs_[k];
      if (c.is_zero()) continue;
      bool neg = c.sign() < 0;
      Rational mag = neg ? -c : c;
      if (out.empty()) out += neg ? "-" : "";
      else out += neg ? " - " : " + ";
      if (k == 0) { out += mag.to_string(); continue; }
      if (mag != Rational(1)) out += mag.to_string() + "*";
      out += z;
      if (k > 1) out += "^" + std::to_string(k);
    }
    return out.empty() ? "0" : out;
  }

 private:
  void require_same(const CyclotomicNumber& o) const {
    if (order_ != o.order_) throw OrderMismatch(order_, o.order_);
  }

  u64 order_;
  std::vector<Rational> coeffs_;
};

inline CyclotomicNumber root_power(u64 order, i64 k) {
  if (order == 0) throw std::invalid_argument("root_power: order must be >= 1");
  std::pair<i64, Rational> term{k, Rational(1)};
  return CyclotomicNumber::from_powers(order, std::span(&term, 1));
}

// Value-preserving lift Q(zeta_L1) -> Q(zeta_L2), zeta_L1 -> zeta_L2^(L2/L1).
inline CyclotomicNumber embed(const CyclotomicNumber& a, u64 target_order) {
  if (target_order == 0 || target_order % a.order() != 0)
    throw std::invalid_argument("embed: " + std::to_string(target_order) + " is not a multiple of " +
                                std::to_string(a.order()));
  const i64 scale = static_cast<i64>(target_order / a.order());
  std::vector<std::pair<i64, Rational>> terms;
  for (std::size_t k = 0; k < a.coeffs().size(); ++k)
    if (!a.coeffs()[k].is_zero()) terms.emplace_back(static_cast<i64>(k) * scale, a.coeffs()[k]);
  return CyclotomicNumber::from_powers(target_order, terms);
}

inline std::optional<Rational> as_rational(const CyclotomicNumber& a) { return a.as_rational(); }

// Integer-coefficient accumulator for sums of c * zeta_L^k. Used on hot paths
// (evaluation, interpolation); callers fall back to exact Rational arithmetic
// when overflowed() reports true.
class IntegerAccumulator {
 public:
  explicit IntegerAccumulator(u64 order) : table_(&residue_table(order)), acc_(table_->phi, 0) {}

  void reset() {
    std::fill(acc_.begin(), acc_.end(), 0);
    overflow_ = false;
  }

  void add_power(u64 k, i64 c) {
    if (c == 0) return;
    for (auto [i, v] : table_->powers[k % table_->order]) {
      i64 prod;
      if (__builtin_mul_overflow(c, v, &prod) || __builtin_add_overflow(acc_[i], prod, &acc_[i]))
        overflow_ = true;
    }
  }

  bool overflowed() const { return overflow_; }
  bool is_rational() const {
    for (std::size_t i = 1; i < acc_.size(); ++i)
      if (acc_[i] != 0) return false;
    return true;
  }
  i64 constant() const { return acc_[0]; }
  std::span<const i64> coeffs() const { return acc_; }
  u64 order() const { return table_->order; }

  CyclotomicNumber to_number(const mpz_class& denominator) const {
    std::vector<Rational> coeffs;
    coeffs.reserve(acc_.size());
    for (i64 v : acc_) coeffs.emplace_back(mpz_class(static_cast<long>(v)), denominator);
    return CyclotomicNumber(table_->order, std::move(coeffs));
  }

 private:
  const ResidueTable* table_;
  std::vector<i64> acc_;
  bool overflow_ = false;
};

}  // namespace gsieve
