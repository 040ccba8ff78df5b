#pragma once

// JSON, text and LaTeX forms of actions, polynomials and reports, plus a
// small expression parser for polynomials typed by hand.

#include <cctype>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gsieve/dihedral.hpp"
#include "gsieve/report.hpp"
#include "gsieve/sieving.hpp"

namespace gsieve {

using json = nlohmann::json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using ActionSpec = std::variant<AbelianActionSpec, DihedralActionSpec>;

namespace detail {

// nlohmann converts -1 to 4294967295 without complaint.
inline void require_natural(const json& j, const std::string& what) {
  if (j.is_array()) {
    for (const auto& e : j) require_natural(e, what);
    return;
  }
  if (!j.is_number_unsigned() || j.get<unsigned long long>() > std::numeric_limits<u32>::max())
    throw ParseError(what + " must hold non-negative 32-bit integers, got " + j.dump());
}

}  // namespace detail

// ---- rationals and cyclotomic values ----

inline json integer_to_json(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

inline mpz_class integer_from_json(const json& j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  if (j.is_number_unsigned()) return mpz_class(std::to_string(j.get<unsigned long long>()));
  if (j.is_string()) {
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) != 0) throw ParseError("not an integer: " + j.get<std::string>());
    return z;
  }
  throw ParseError("expected an integer, got " + j.dump());
}

inline json rational_to_json(const Rational& r) {
  return json::array({integer_to_json(r.numerator()), integer_to_json(r.denominator())});
}

inline Rational rational_from_json(const json& j) {
  if (j.is_array() && j.size() == 2) {
    mpz_class den = integer_from_json(j[1]);
    if (den == 0) throw ParseError("zero denominator");
    return Rational(integer_from_json(j[0]), den);
  }
  if (j.is_number_integer() || j.is_string()) return Rational(integer_from_json(j));
  throw ParseError("expected [num, den], got " + j.dump());
}

inline json cyclotomic_to_json(const CyclotomicNumber& z) {
  json coeffs = json::array();
  for (const auto& c : z.coeffs()) coeffs.push_back(rational_to_json(c));
  json out{{"order", z.order()}, {"coeffs", coeffs}};
  if (auto r = z.as_rational()) out["rational"] = rational_to_json(*r);
  return out;
}

// ---- polynomials ----

inline json poly_to_json(const MultiPoly& p) {
  json terms = json::array();
  p.for_each_term([&](std::span<const u32> exps, const Rational& c) {
    terms.push_back({{"coeff", rational_to_json(c)}, {"exps", std::vector<u32>(exps.begin(), exps.end())}});
  });
  return {{"orders", p.profile().orders()}, {"terms", terms}};
}

inline MultiPoly poly_from_json(const json& j) {
  try {
    detail::require_natural(j.at("orders"), "orders");
    const auto orders = j.at("orders").get<std::vector<u32>>();
    for (u32 n : orders)
      if (n == 0) throw ParseError("variable orders must be positive");
    const VariableProfile profile(orders);
    std::vector<RawTerm> raw;
    for (const auto& t : j.at("terms")) {
      const auto exps = t.at("exps").get<std::vector<i64>>();
      if (exps.size() != orders.size()) throw ParseError("term has the wrong number of exponents");
      raw.push_back({exps, rational_from_json(t.at("coeff"))});
    }
    return MultiPoly::normalize(profile, raw);
  } catch (const json::exception& ex) {
    throw ParseError(std::string("polynomial JSON: ") + ex.what());
  }
}

namespace detail {

// expr   := ['+'|'-'] term (('+'|'-') term)*
// term   := factor ('*' factor)*
// factor := primary ['^' integer]
// primary:= integer ['/' integer] | name | '(' expr ')'
class PolyParser {
 public:
  PolyParser(std::string text, VariableProfile profile, std::vector<std::vector<std::string>> names)
      : text_(std::move(text)), profile_(std::move(profile)), names_(std::move(names)) {}

  MultiPoly parse() {
    MultiPoly p = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("polynomial text, column " + std::to_string(pos_ + 1) + ": " + what);
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::string digits() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return text_.substr(start, pos_ - start);
  }

  MultiPoly expr() {
    MultiPoly acc(profile_);
    bool first = true;
    for (;;) {
      bool neg = false;
      if (eat('-')) neg = true;
      else if (!eat('+') && !first) break;
      MultiPoly t = term();
      acc += neg ? -t : t;
      first = false;
    }
    return acc;
  }

  MultiPoly term() {
    MultiPoly acc = factor();
    while (eat('*')) acc *= factor();
    return acc;
  }

  MultiPoly factor() {
    MultiPoly base = primary();
    if (!eat('^')) return base;
    const std::string e = digits();
    if (e.size() > 9) fail("exponent too large");
    MultiPoly out = MultiPoly::constant(profile_, Rational(1));
    for (unsigned long k = std::stoul(e); k > 0; --k) out *= base;
    return out;
  }

  MultiPoly primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      MultiPoly inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mpz_class num(digits());
      mpz_class den(1);
      if (eat('/')) den = mpz_class(digits());
      if (den == 0) fail("zero denominator");
      return MultiPoly::constant(profile_, Rational(num, den));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      for (std::size_t i = 0; i < names_.size(); ++i) {
        for (const auto& alias : names_[i]) {
          if (alias != name) continue;
          std::vector<i64> e(profile_.size(), 0);
          e[i] = 1;
          const RawTerm t{e, Rational(1)};
          return MultiPoly::normalize(profile_, std::span<const RawTerm>(&t, 1));
        }
      }
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string text_;
  std::size_t pos_ = 0;
  VariableProfile profile_;
  std::vector<std::vector<std::string>> names_;
};

}  // namespace detail

// Variables are x1..xm; "x" also names x1 when m = 1. For dihedral groups
// pass dihedral = true to name the two variables x and y.
inline MultiPoly parse_polynomial_text(const std::string& text, const VariableProfile& profile,
                                       bool dihedral = false) {
  std::vector<std::vector<std::string>> names(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) names[i].push_back("x" + std::to_string(i + 1));
  if (dihedral && profile.size() == 2) {
    names[0].push_back("x");
    names[1].push_back("y");
  } else if (profile.size() == 1) {
    names[0].push_back("x");
  }
  return detail::PolyParser(text, profile, std::move(names)).parse();
}

inline std::vector<std::string> variable_names(GroupKind kind, std::size_t m, bool latex = false) {
  if (kind == GroupKind::Dihedral) return {"x", "y"};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m; ++i)
    names.push_back(latex ? "x_{" + std::to_string(i + 1) + "}" : "x" + std::to_string(i + 1));
  return names;
}

// ---- action files ----

inline ActionSpec action_from_json(const json& j) {
  try {
    const json& group = j.at("group");
    const std::string kind = group.at("kind").get<std::string>();
    detail::require_natural(j.at("set_size"), "set_size");
    detail::require_natural(j.at("generators"), "generators");
    const u32 n_points = j.at("set_size").get<u32>();
    const auto gens = j.at("generators").get<std::vector<std::vector<u32>>>();
    if (kind == "abelian") {
      AbelianActionSpec spec;
      detail::require_natural(group.at("moduli"), "moduli");
      spec.moduli = group.at("moduli").get<std::vector<u32>>();
      spec.set_size = n_points;
      spec.generator_maps = gens;
      return spec;
    }
    if (kind == "dihedral") {
      DihedralActionSpec spec;
      detail::require_natural(group.at("n"), "n");
      spec.n = group.at("n").get<u32>();
      spec.set_size = n_points;
      if (gens.size() != 2) throw ParseError("dihedral actions need exactly two generators [r, s]");
      spec.r_map = gens[0];
      spec.s_map = gens[1];
      return spec;
    }
    throw ParseError("unknown group kind '" + kind + "'");
  } catch (const json::exception& ex) {
    throw ParseError(std::string("action file: ") + ex.what());
  }
}

inline ActionSpec parse_action_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw ParseError(std::string("action file: ") + ex.what());
  }
  return action_from_json(j);
}

inline json action_to_json(const ActionSpec& spec) {
  if (const auto* a = std::get_if<AbelianActionSpec>(&spec))
    return {{"group", {{"kind", "abelian"}, {"moduli", a->moduli}}},
            {"set_size", a->set_size},
            {"generators", a->generator_maps}};
  const auto& d = std::get<DihedralActionSpec>(spec);
  return {{"group", {{"kind", "dihedral"}, {"n", d.n}}},
          {"set_size", d.set_size},
          {"generators", json::array({d.r_map, d.s_map})}};
}

// ---- reports ----

inline json witness_to_json(const std::optional<Witness>& w) {
  if (!w) return nullptr;
  return {{"element", w->element}, {"expected", w->expected},
          {"got", w->got ? rational_to_json(*w->got) : json(nullptr)}};
}

inline json elements_to_json(const std::vector<GroupElement>& elems) {
  json out = json::array();
  for (const auto& g : elems) out.push_back(g.coords);
  return out;
}

inline json check_to_json(const ConstructionCheck& c) {
  json out{{"label", c.label}, {"tag", to_string(c.tag)}, {"agrees", c.agrees}, {"witness", witness_to_json(c.witness)}};
  if (!c.error.empty()) out["error"] = c.error;
  return out;
}

inline json report_to_json(const SieveReport& r) {
  const bool dihedral = r.kind == GroupKind::Dihedral;
  const auto names = variable_names(r.kind, r.profile.size());
  json verdicts = json::array();
  for (const auto& v : r.verdicts)
    verdicts.push_back({{"element", v.element}, {"expected", v.expected},
                        {"got", v.got ? rational_to_json(*v.got) : json(nullptr)}, {"pass", v.pass}});
  json discrepancies = json::array();
  for (const auto& d : r.discrepancies)
    discrepancies.push_back({{"construction", d.construction}, {"orbit", d.orbit}, {"witness", d.witness},
                             {"expected", d.expected}, {"got", d.got ? rational_to_json(*d.got) : json(nullptr)},
                             {"note", d.note}});
  json orbits = json::array();
  for (const auto& o : r.abelian_orbits) {
    const auto& s = o.stabilizer;
    json entry{{"base_point", o.orbit.base_point},
               {"size", o.orbit.members.size()},
               {"reduced_orders", s.reduced_orders},
               {"stabilizer_size", s.stabilizer_elements.size()},
               {"minimal_elements", elements_to_json(s.minimal_elements)},
               {"generating_set", elements_to_json(s.generating_set)},
               {"indices", s.indices},
               {"formula_size", o.formula_size ? json(*o.formula_size) : json(nullptr)},
               {"closed_form", check_to_json(o.closed_form)},
               {"closed_form_alternate", check_to_json(o.closed_form_alternate)},
               {"character_sum_matches_interpolation", o.independent_constructions_agree},
               {"used", to_string(o.used)},
               {"polynomial", poly_to_json(o.used == ConstructionTag::CharacterSum ? o.character_sum
                                                                                   : *o.closed_form.poly)}};
    if (!o.formula_error.empty()) entry["formula_error"] = o.formula_error;
    orbits.push_back(std::move(entry));
  }
  for (const auto& o : r.dihedral_orbits) {
    json entry{{"base_point", o.orbit.xs.front()},
               {"size", o.orbit.size()},
               {"n1", o.orbit.n1},
               {"kind", o.orbit.kind == DihedralOrbitKind::SizeN1 ? "size_n1" : "size_2n1"},
               {"counts", o.counts},
               {"polynomial", poly_to_json(o.poly)}};
    if (o.orbit.kind == DihedralOrbitKind::SizeN1) {
      entry["twist"] = o.orbit.twist;
      entry["formula_a_agrees"] = *o.formula_a_agrees;
      entry["formula_a_witness"] = witness_to_json(o.formula_a_witness);
    } else {
      entry["formula_b_agrees"] = *o.formula_b_agrees;
      entry["formula_b_witness"] = witness_to_json(o.formula_b_witness);
    }
    orbits.push_back(std::move(entry));
  }
  json out{{"kind", dihedral ? "dihedral" : "abelian"},
           {"profile", r.profile.orders()},
           {"polynomial", poly_to_json(r.polynomial)},
           {"polynomial_text", r.polynomial.to_text(names)},
           {"verified", r.verified()},
           {"closed_form_diverged", r.closed_form_diverged()},
           {"orbits", orbits},
           {"discrepancies", discrepancies},
           {"verdicts", verdicts}};
  if (!dihedral) {
    out["character_sum_verified"] = r.character_sum_verified;
    out["interpolation_verified"] = r.interpolated_verified;
  }
  return out;
}

inline std::string join_coords(std::span<const u32> c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + ")";
}

inline std::string got_to_string(const std::optional<Rational>& got) {
  return got ? got->to_string() : std::string("non-rational");
}

inline std::string report_summary(const SieveReport& r) {
  std::ostringstream os;
  std::size_t passed = 0;
  for (const auto& v : r.verdicts) passed += v.pass ? 1 : 0;
  os << "verdicts: " << passed << "/" << r.verdicts.size() << " pass\n";
  if (r.kind == GroupKind::Abelian) {
    os << "character-sum assembly: " << (r.character_sum_verified ? "pass" : "FAIL") << "\n";
    os << "interpolation assembly: " << (r.interpolated_verified ? "pass" : "FAIL") << "\n";
    for (std::size_t k = 0; k < r.abelian_orbits.size(); ++k) {
      const auto& o = r.abelian_orbits[k];
      os << "orbit " << k << " (size " << o.orbit.members.size() << "): " << o.closed_form.label << " "
         << (o.closed_form.agrees ? "agrees" : "diverges") << ", " << o.closed_form_alternate.label << " "
         << (o.closed_form_alternate.agrees ? "agrees" : "diverges") << ", used " << to_string(o.used) << "\n";
    }
  } else {
    for (std::size_t k = 0; k < r.dihedral_orbits.size(); ++k) {
      const auto& o = r.dihedral_orbits[k];
      const bool a = o.orbit.kind == DihedralOrbitKind::SizeN1;
      os << "orbit " << k << " (size " << o.orbit.size() << ", n1 " << o.orbit.n1;
      if (a) os << ", t " << o.orbit.twist;
      os << "): printed formula " << (a ? "(a) " : "(b) ")
         << ((a ? *o.formula_a_agrees : *o.formula_b_agrees) ? "agrees" : "diverges") << "\n";
    }
  }
  for (const auto& d : r.discrepancies) {
    os << "discrepancy [" << d.construction << "] orbit " << d.orbit;
    if (!d.witness.empty())
      os << " at " << join_coords(d.witness) << ": expected " << d.expected << ", got " << got_to_string(d.got);
    if (!d.note.empty()) os << " (" << d.note << ")";
    os << "\n";
  }
  for (const auto& v : r.verdicts)
    if (!v.pass)
      os << "FAIL at " << join_coords(v.element) << ": expected " << v.expected << ", got " << got_to_string(v.got)
         << "\n";
  return os.str();
}

inline std::string report_to_text(const SieveReport& r) {
  return r.polynomial.to_text(variable_names(r.kind, r.profile.size())) + "\n" + report_summary(r);
}

inline std::string report_to_latex(const SieveReport& r) {
  std::ostringstream os;
  os << "f = " << r.polynomial.to_latex(variable_names(r.kind, r.profile.size(), true)) << "\n";
  std::istringstream summary(report_summary(r));
  for (std::string line; std::getline(summary, line);) os << "% " << line << "\n";
  return os.str();
}

}  // namespace gsieve
