#pragma once

// Sparse multivariate polynomials with rational coefficients in
// Q[x_1..x_m] / <x_i^{n_i} - 1>, and exact evaluation at roots of unity.

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gsieve/cyclotomic.hpp"
#include "gsieve/numeric.hpp"
#include "gsieve/rational.hpp"

namespace gsieve {

struct ProfileMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Orders (n_1, ..., n_m) of the relations x_i^{n_i} = 1.
class VariableProfile {
 public:
  VariableProfile() = default;
  explicit VariableProfile(std::vector<u32> orders) : radix_(std::move(orders)) {}

  const std::vector<u32>& orders() const { return radix_.radices(); }
  std::size_t size() const { return radix_.rank(); }
  u64 grid_size() const { return radix_.size(); }
  u64 field_order() const { return lcm_of(orders()); }
  const MixedRadix& radix() const { return radix_; }

  friend bool operator==(const VariableProfile& a, const VariableProfile& b) {
    return a.orders() == b.orders();
  }

 private:
  MixedRadix radix_;
};

// Variable i takes the value zeta_{n_i}^{exponents[i]}.
struct EvaluationPoint {
  std::vector<i64> exponents;
};

struct RawTerm {
  std::vector<i64> exponents;
  Rational coeff;
};

// Where a source variable goes under substitution: x_j -> y_target^multiplier.
struct VariableImage {
  std::size_t target;
  u64 multiplier;
};

class MultiPoly {
 public:
  MultiPoly() = default;
  explicit MultiPoly(VariableProfile profile) : profile_(std::move(profile)) {}

  static MultiPoly constant(VariableProfile profile, const Rational& c) {
    MultiPoly p(std::move(profile));
    p.add_term(0, c);
    return p;
  }

  static MultiPoly monomial(VariableProfile profile, std::span<const i64> exponents,
                            const Rational& c = Rational(1)) {
    MultiPoly p(std::move(profile));
    p.add_term(p.reduce_index(exponents), c);
    return p;
  }

  // Reduces exponents mod n_i, combines like terms and drops zeros.
  static MultiPoly normalize(VariableProfile profile, std::span<const RawTerm> raw) {
    MultiPoly p(std::move(profile));
    for (const auto& t : raw) p.add_term(p.reduce_index(t.exponents), t.coeff);
    return p;
  }

  const VariableProfile& profile() const { return profile_; }
  const std::map<u64, Rational>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Rational coefficient(std::span<const u32> exponents) const {
    auto it = terms_.find(profile_.radix().encode(exponents));
    return it == terms_.end() ? Rational(0) : it->second;
  }

  // f(exponents, coeff) in lexicographic exponent order.
  template <typename F>
  void for_each_term(F&& f) const {
    std::vector<u32> exps(profile_.size());
    for (const auto& [idx, c] : terms_) {
      profile_.radix().decode(idx, exps);
      f(std::span<const u32>(exps), c);
    }
  }

  MultiPoly& operator+=(const MultiPoly& o) {
    require_same(o);
    for (const auto& [idx, c] : o.terms_) add_term(idx, c);
    return *this;
  }
  MultiPoly& operator-=(const MultiPoly& o) {
    require_same(o);
    for (const auto& [idx, c] : o.terms_) add_term(idx, -c);
    return *this;
  }
  MultiPoly& operator*=(const Rational& r) {
    if (r.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [idx, c] : terms_) c *= r;
    return *this;
  }

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, const Rational& r) { return a *= r; }
  friend MultiPoly operator*(const Rational& r, MultiPoly a) { return a *= r; }
  friend MultiPoly operator-(MultiPoly a) { return a *= Rational(-1); }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.require_same(b);
    const auto& radix = a.profile_.radix();
    const auto& orders = a.profile_.orders();
    const std::size_t m = orders.size();
    std::vector<u32> flat_b;
    flat_b.reserve(b.terms_.size() * m);
    std::vector<u32> exps(m), sum(m);
    for (const auto& [idx, c] : b.terms_) {
      radix.decode(idx, exps);
      flat_b.insert(flat_b.end(), exps.begin(), exps.end());
    }
    std::unordered_map<u64, Rational> acc;
    acc.reserve(std::min<u64>(a.profile_.grid_size(), a.terms_.size() * b.terms_.size()));
    for (const auto& [ia, ca] : a.terms_) {
      radix.decode(ia, exps);
      std::size_t row = 0;
      for (const auto& [ib, cb] : b.terms_) {
        for (std::size_t i = 0; i < m; ++i) {
          u32 s = exps[i] + flat_b[row + i];
          sum[i] = s >= orders[i] ? s - orders[i] : s;
        }
        row += m;
        acc[radix.encode(sum)] += ca * cb;
      }
    }
    MultiPoly out(a.profile_);
    for (auto& [idx, c] : acc)
      if (!c.is_zero()) out.terms_.emplace(idx, std::move(c));
    return out;
  }
  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

  // Structural equality of normal forms.
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    a.require_same(b);
    return a.terms_ == b.terms_;
  }

  // Re-expresses the polynomial in another profile via x_j -> y_{target}^{multiplier}.
  MultiPoly substitute(const VariableProfile& target, std::span<const VariableImage> images) const {
    if (images.size() != profile_.size())
      throw std::invalid_argument("substitute: one image per source variable required");
    std::vector<RawTerm> raw;
    raw.reserve(terms_.size());
    for_each_term([&](std::span<const u32> exps, const Rational& c) {
      RawTerm t{std::vector<i64>(target.size(), 0), c};
      for (std::size_t j = 0; j < exps.size(); ++j) {
        if (images[j].target >= target.size())
          throw std::invalid_argument("substitute: target variable out of range");
        t.exponents[images[j].target] += static_cast<i64>(exps[j] * images[j].multiplier);
      }
      raw.push_back(std::move(t));
    });
    return normalize(target, raw);
  }

  std::string to_text(const std::vector<std::string>& names = {}) const {
    return render(names, false);
  }
  std::string to_latex(const std::vector<std::string>& names = {}) const {
    return render(names, true);
  }

 private:
  void require_same(const MultiPoly& o) const {
    if (!(profile_ == o.profile_)) throw ProfileMismatch("polynomial profiles differ");
  }

  u64 reduce_index(std::span<const i64> exponents) const {
    if (exponents.size() != profile_.size())
      throw std::invalid_argument("exponent tuple length does not match profile");
    std::vector<u32> reduced(exponents.size());
    for (std::size_t i = 0; i < exponents.size(); ++i)
      reduced[i] = static_cast<u32>(floor_mod(exponents[i], profile_.orders()[i]));
    return profile_.radix().encode(reduced);
  }

  void add_term(u64 idx, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(idx, c);
    if (inserted) return;
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  std::string render(const std::vector<std::string>& names, bool latex) const {
    if (terms_.empty()) return "0";
    auto name = [&](std::size_t i) {
      if (i < names.size()) return names[i];
      return latex ? "x_{" + std::to_string(i + 1) + "}" : "x" + std::to_string(i + 1);
    };
    std::string out;
    for_each_term([&](std::span<const u32> exps, const Rational& c) {
      bool neg = c.sign() < 0;
      Rational mag = neg ? -c : c;
      if (out.empty()) out += neg ? "-" : "";
      else out += neg ? " - " : " + ";
      std::string mono;
      for (std::size_t i = 0; i < exps.size(); ++i) {
        if (exps[i] == 0) continue;
        if (!mono.empty()) mono += latex ? " " : "*";
        mono += name(i);
        if (exps[i] > 1)
          mono += latex ? "^{" + std::to_string(exps[i]) + "}" : "^" + std::to_string(exps[i]);
      }
      std::string coeff;
      if (mono.empty() || mag != Rational(1)) {
        if (latex && !mag.is_integer())
          coeff = "\\frac{" + mag.numerator().get_str() + "}{" + mag.denominator().get_str() + "}";
        else
          coeff = mag.to_string();
      }
      if (mono.empty()) out += coeff;
      else if (coeff.empty()) out += mono;
      else out += coeff + (latex ? " " : "*") + mono;
    });
    return out;
  }

  VariableProfile profile_;
  std::map<u64, Rational> terms_;
};

// Sum_{j=0}^{count-1} s^j for the monomial s, normalized.
inline MultiPoly geometric_factor(const VariableProfile& profile, std::span<const i64> monomial,
                                  u64 count) {
  if (count == 0) throw std::invalid_argument("geometric_factor: count must be >= 1");
  std::vector<RawTerm> raw;
  raw.reserve(count);
  for (u64 j = 0; j < count; ++j) {
    RawTerm t{std::vector<i64>(monomial.size()), Rational(1)};
    for (std::size_t i = 0; i < monomial.size(); ++i)
      t.exponents[i] = floor_mod(monomial[i] * static_cast<i64>(j), profile.orders()[i]);
    raw.push_back(std::move(t));
  }
  return MultiPoly::normalize(profile, raw);
}

// Evaluates one polynomial at many points of its root-of-unity grid. The
// value lives in Q(zeta_L) with L = lcm(n_i); integer arithmetic is used
// when the scaled coefficients fit, exact rationals otherwise.
class Evaluator {
 public:
  explicit Evaluator(const MultiPoly& p)
      : profile_(p.profile()), order_(profile_.field_order()), denominator_(1) {
    const std::size_t m = profile_.size();
    for (u32 n : profile_.orders()) step_.push_back(order_ / n);
    exps_.reserve(p.term_count() * m);
    for (const auto& [idx, c] : p.terms()) denominator_ = lcm(denominator_, c.denominator());
    p.for_each_term([&](std::span<const u32> e, const Rational& c) {
      exps_.insert(exps_.end(), e.begin(), e.end());
      coeffs_.push_back(c);
      mpz_class scaled = c.numerator() * (denominator_ / c.denominator());
      if (!scaled.fits_slong_p()) integral_ = false;
      scaled_.push_back(integral_ ? scaled.get_si() : 0);
    });
  }

  u64 field_order() const { return order_; }

  CyclotomicNumber value(std::span<const i64> point) const {
    auto ks = bucket_indices(point);
    if (integral_) {
      IntegerAccumulator acc(order_);
      for (std::size_t t = 0; t < ks.size(); ++t) acc.add_power(ks[t], scaled_[t]);
      if (!acc.overflowed()) return acc.to_number(denominator_);
    }
    std::vector<std::pair<i64, Rational>> terms;
    terms.reserve(ks.size());
    for (std::size_t t = 0; t < ks.size(); ++t) terms.emplace_back(static_cast<i64>(ks[t]), coeffs_[t]);
    return CyclotomicNumber::from_powers(order_, terms);
  }

  // The value if it is rational, nullopt otherwise; skips building the full number.
  std::optional<Rational> rational_value(std::span<const i64> point) const {
    if (integral_) {
      auto ks = bucket_indices(point);
      IntegerAccumulator acc(order_);
      for (std::size_t t = 0; t < ks.size(); ++t) acc.add_power(ks[t], scaled_[t]);
      if (!acc.overflowed()) {
        if (!acc.is_rational()) return std::nullopt;
        return Rational(mpz_class(static_cast<long>(acc.constant())), denominator_);
      }
    }
    return value(point).as_rational();
  }

 private:
  std::vector<u64> bucket_indices(std::span<const i64> point) const {
    const std::size_t m = profile_.size();
    if (point.size() != m) throw std::invalid_argument("evaluation point length does not match profile");
    std::vector<u64> w(m);
    for (std::size_t i = 0; i < m; ++i)
      w[i] = static_cast<u64>(floor_mod(point[i], profile_.orders()[i])) * step_[i];
    std::vector<u64> ks(coeffs_.size());
    for (std::size_t t = 0; t < ks.size(); ++t) {
      u64 k = 0;
      for (std::size_t i = 0; i < m; ++i) k = (k + exps_[t * m + i] * w[i]) % order_;
      ks[t] = k;
    }
    return ks;
  }

  VariableProfile profile_;
  u64 order_;
  std::vector<u64> step_;
  std::vector<u32> exps_;
  std::vector<Rational> coeffs_;
  std::vector<i64> scaled_;
  mpz_class denominator_;
  bool integral_ = true;
};

inline CyclotomicNumber evaluate(const MultiPoly& p, const EvaluationPoint& pt) {
  return Evaluator(p).value(pt.exponents);
}

}  // namespace gsieve
