// gsieve: sieving polynomials for abelian and dihedral group actions.
//
// Exit codes: 0 pass, 1 divergence or failed verification, 2 parse error,
// 3 invalid action or profile mismatch.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gsieve/campaign.hpp"
#include "gsieve/io.hpp"

using namespace gsieve;

namespace {

enum Exit { kPass = 0, kDiverged = 1, kParse = 2, kInvalid = 3 };

struct Config {
  std::string input;
  std::string poly_input;
  std::string format = "text";
  std::string output;
  std::string kind = "abelian";
  u64 seed = 42;
  u64 count = 0;
  u32 max_set = 0;
  u32 max_moduli = 3;
  u32 modulus_bound = 27;
  u32 max_n = 12;
  bool printed_literal = false;
  bool emit_action = false;
  std::vector<i64> at;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const Config& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output);
  if (!out) throw std::runtime_error("cannot write " + cfg.output);
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

SieveReport build_report(const ActionSpec& spec, bool printed_literal) {
  if (const auto* a = std::get_if<AbelianActionSpec>(&spec)) {
    const AbelianAction action(*a);
    SieveOptions options;
    if (printed_literal) options.reading = ChainReading::Printed;
    return action_polynomial(action, options);
  }
  return dihedral_action_polynomial(DihedralAction(std::get<DihedralActionSpec>(spec)), printed_literal);
}

std::string render_report(const SieveReport& r, const std::string& format) {
  if (format == "json") return dump(report_to_json(r));
  if (format == "latex") return report_to_latex(r);
  return report_to_text(r);
}

int cmd_orbits(const Config& cfg) {
  const ActionSpec spec = parse_action_text(read_file(cfg.input));
  int code = kPass;
  if (const auto* d = std::get_if<DihedralActionSpec>(&spec)) {
    const DihedralAction action(*d);
    json orbits = json::array();
    std::ostringstream text;
    for (u32 base : detail::dihedral_orbit_bases(action.spec())) {
      const auto o = classify_orbit(action.spec(), base);
      const bool a = o.kind == DihedralOrbitKind::SizeN1;
      json entry{{"base_point", base}, {"size", o.size()}, {"n1", o.n1}, {"kind", a ? "size_n1" : "size_2n1"},
                 {"members", o.xs}};
      if (a) entry["twist"] = o.twist;
      else entry["reflected_members"] = o.ys;
      orbits.push_back(entry);
      text << "orbit at " << base << ": size " << o.size() << ", n1 " << o.n1
           << (a ? ", s(x_0) = x_" + std::to_string(o.twist) : std::string(", two layers")) << "\n";
    }
    write_output(cfg, cfg.format == "json" ? dump(json{{"orbits", orbits}}) : text.str());
    return code;
  }

  const AbelianAction action(std::get<AbelianActionSpec>(spec));
  json orbits = json::array();
  std::ostringstream text;
  std::vector<std::size_t> sizes;
  for (const auto& orbit : compute_orbits(action)) {
    const auto data = stabilizer_data(action, orbit);
    std::optional<u64> formula;
    std::string error;
    try {
      formula = orbit_size_formula(data);
    } catch (const InternalInconsistency& ex) {
      error = ex.what();
    }
    const bool agrees = formula && *formula == orbit.members.size();
    if (!agrees) code = kDiverged;
    sizes.push_back(orbit.members.size());
    orbits.push_back({{"base_point", orbit.base_point},
                      {"size", orbit.members.size()},
                      {"members", orbit.members},
                      {"reduced_orders", data.reduced_orders},
                      {"stabilizer_size", data.stabilizer_elements.size()},
                      {"minimal_elements", elements_to_json(data.minimal_elements)},
                      {"generating_set", elements_to_json(data.generating_set)},
                      {"indices", data.indices},
                      {"formula_size", formula ? json(*formula) : json(nullptr)},
                      {"formula_agrees", agrees}});
    text << "orbit at " << orbit.base_point << ": size " << orbit.members.size() << ", reduced orders "
         << join_coords(data.reduced_orders) << ", T = {";
    for (std::size_t k = 0; k < data.generating_set.size(); ++k)
      text << (k ? ", " : "") << join_coords(data.generating_set[k].coords);
    text << "}, indices " << join_coords(std::vector<u32>(data.indices.begin(), data.indices.end()))
         << ", formula " << (formula ? std::to_string(*formula) : error) << (agrees ? "" : " MISMATCH") << "\n";
  }
  text << "sizes:";
  for (auto s : sizes) text << " " << s;
  text << "\n";
  write_output(cfg, cfg.format == "json" ? dump(json{{"orbits", orbits}}) : text.str());
  return code;
}

int cmd_poly(const Config& cfg) {
  const SieveReport report = build_report(parse_action_text(read_file(cfg.input)), cfg.printed_literal);
  write_output(cfg, render_report(report, cfg.format));
  return report.verified() && !report.closed_form_diverged() ? kPass : kDiverged;
}

MultiPoly load_polynomial(const std::string& path, const VariableProfile& profile, bool dihedral) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& ex) {
      throw ParseError(std::string("polynomial file: ") + ex.what());
    }
    // accept either a bare polynomial or a full poly report
    return poly_from_json(j.contains("terms") ? j : j.at("polynomial"));
  }
  return parse_polynomial_text(text, profile, dihedral);
}

int cmd_verify(const Config& cfg) {
  const ActionSpec spec = parse_action_text(read_file(cfg.input));
  std::vector<VerificationVerdict> verdicts;
  GroupKind kind = GroupKind::Abelian;
  if (const auto* a = std::get_if<AbelianActionSpec>(&spec)) {
    const AbelianAction action(*a);
    verdicts = verify_polynomial(action, load_polynomial(cfg.poly_input, VariableProfile(a->moduli), false));
  } else {
    const DihedralAction action(std::get<DihedralActionSpec>(spec));
    kind = GroupKind::Dihedral;
    verdicts = verify_polynomial(action, load_polynomial(cfg.poly_input, dihedral_profile(action.n()), true));
  }
  const bool pass = all_pass(verdicts);
  if (cfg.format == "json") {
    json out = json::array();
    for (const auto& v : verdicts)
      out.push_back({{"element", v.element}, {"expected", v.expected},
                     {"got", v.got ? rational_to_json(*v.got) : json(nullptr)}, {"pass", v.pass}});
    write_output(cfg, dump(json{{"pass", pass}, {"kind", kind == GroupKind::Abelian ? "abelian" : "dihedral"},
                                {"verdicts", out}}));
  } else {
    std::ostringstream os;
    for (const auto& v : verdicts)
      os << join_coords(v.element) << " expected " << v.expected << " got " << got_to_string(v.got) << " "
         << (v.pass ? "pass" : "FAIL") << "\n";
    os << (pass ? "PASS" : "FAIL") << "\n";
    write_output(cfg, os.str());
  }
  return pass ? kPass : kDiverged;
}

json failures_to_json(const std::vector<CampaignFailure>& fs) {
  json out = json::array();
  for (const auto& f : fs)
    out.push_back({{"seed", f.seed}, {"orbit", f.orbit}, {"what", f.what}, {"witness", f.witness},
                   {"expected", f.expected}, {"got", f.got ? rational_to_json(*f.got) : json(nullptr)}});
  return out;
}

std::string failures_to_text(const std::string& title, const std::vector<CampaignFailure>& fs) {
  std::ostringstream os;
  for (const auto& f : fs) {
    os << "  " << title << " seed " << f.seed << " orbit " << f.orbit << ": " << f.what;
    if (!f.witness.empty())
      os << " at " << join_coords(f.witness) << " expected " << f.expected << " got " << got_to_string(f.got);
    os << "\n";
  }
  return os.str();
}

std::string percent(u64 a, u64 b) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << (b == 0 ? 100.0 : 100.0 * static_cast<double>(a) / static_cast<double>(b)) << "%";
  return os.str();
}

int cmd_random(const Config& cfg) {
  const GroupKind kind = cfg.kind == "dihedral" ? GroupKind::Dihedral : GroupKind::Abelian;
  RandomActionParams params = default_random_params(kind, cfg.seed);
  params.max_moduli = cfg.max_moduli;
  params.modulus_bound = cfg.modulus_bound;
  params.max_n = cfg.max_n;
  if (cfg.max_set != 0) params.max_set = cfg.max_set;

  if (cfg.emit_action) {
    write_output(cfg, dump(action_to_json(random_action(params))));
    return kPass;
  }

  if (kind == GroupKind::Abelian) {
    SieveOptions options;
    if (cfg.printed_literal) options.reading = ChainReading::Printed;
    const auto s = run_abelian_campaign(params, cfg.count == 0 ? 500 : cfg.count, options);
    const bool ok = s.independent_failures.empty() && s.burnside_holds == s.actions;
    const bool printed_ok = s.closed_form_divergences.empty();
    if (cfg.format == "json") {
      write_output(cfg, dump(json{{"kind", "abelian"},
                                  {"first_seed", cfg.seed},
                                  {"actions", s.actions},
                                  {"elements", s.elements},
                                  {"orbits", s.orbits},
                                  {"assembled_pass", s.assembled_pass},
                                  {"independent_pass", s.independent_pass},
                                  {"constructions_agree", s.constructions_agree},
                                  {"closed_form_agree", s.closed_form_agree},
                                  {"closed_form_alternate_agree", s.closed_form_alternate_agree},
                                  {"size_formula_holds", s.size_formula_holds},
                                  {"unique_minimal_divisor", s.unique_minimal_divisor},
                                  {"single_prime_stabilizer", s.single_prime_stabilizer},
                                  {"burnside_holds", s.burnside_holds},
                                  {"independent_failures", failures_to_json(s.independent_failures)},
                                  {"closed_form_divergences", failures_to_json(s.closed_form_divergences)},
                                  {"property_violations", failures_to_json(s.property_violations)}}));
    } else {
      std::ostringstream os;
      os << "abelian campaign: " << s.actions << " actions from seed " << cfg.seed << ", " << s.elements
         << " group elements, " << s.orbits << " orbits\n";
      os << "assembled polynomial verdicts: " << percent(s.assembled_pass, s.elements) << "\n";
      os << "character-sum and interpolation assemblies: " << percent(s.independent_pass, s.actions) << "\n";
      os << "character sum == interpolation per orbit: " << percent(s.constructions_agree, s.orbits) << "\n";
      os << "closed-form construction (" << to_string(cfg.printed_literal ? ChainReading::Printed : ChainReading::Corrected)
         << "): " << percent(s.closed_form_agree, s.orbits) << ", other reading: "
         << percent(s.closed_form_alternate_agree, s.orbits) << "\n";
      os << "orbit size formula: " << percent(s.size_formula_holds, s.orbits)
         << ", unique minimal divisor: " << percent(s.unique_minimal_divisor, s.orbits)
         << ", single-prime stabilizers: " << percent(s.single_prime_stabilizer, s.orbits) << "\n";
      os << "burnside: " << s.burnside_holds << "/" << s.actions << "\n";
      os << failures_to_text("independent failure", s.independent_failures);
      os << failures_to_text("closed-form divergence", s.closed_form_divergences);
      os << failures_to_text("property violation", s.property_violations);
      os << (ok ? "PASS" : "FAIL") << "\n";
      write_output(cfg, os.str());
    }
    return ok && (printed_ok || !cfg.printed_literal) ? kPass : kDiverged;
  }

  const auto s = run_dihedral_campaign(params, cfg.count == 0 ? 200 : cfg.count);
  const bool ok = s.interpolation_failures.empty() && s.burnside_holds == s.actions;
  const bool printed_ok = s.formula_a_counterexamples.empty() && s.formula_b_counterexamples.empty();
  if (cfg.format == "json") {
    write_output(cfg, dump(json{{"kind", "dihedral"},
                                {"first_seed", cfg.seed},
                                {"actions", s.actions},
                                {"elements", s.elements},
                                {"orbits", s.orbits},
                                {"interpolated_pass", s.interpolated_pass},
                                {"burnside_holds", s.burnside_holds},
                                {"formula_b_full", s.formula_b_full},
                                {"formula_b_full_agree", s.formula_b_full_agree},
                                {"formula_b_partial", s.formula_b_partial},
                                {"formula_b_partial_agree", s.formula_b_partial_agree},
                                {"formula_a_orbits", s.formula_a_orbits},
                                {"formula_a_agree", s.formula_a_agree},
                                {"interpolation_failures", failures_to_json(s.interpolation_failures)},
                                {"formula_a_counterexamples", failures_to_json(s.formula_a_counterexamples)},
                                {"formula_b_counterexamples", failures_to_json(s.formula_b_counterexamples)}}));
  } else {
    std::ostringstream os;
    os << "dihedral campaign: " << s.actions << " actions from seed " << cfg.seed << ", " << s.elements
       << " group elements, " << s.orbits << " orbits\n";
    os << "interpolated verdicts: " << percent(s.interpolated_pass, s.elements) << "\n";
    os << "burnside: " << s.burnside_holds << "/" << s.actions << "\n";
    os << "printed formula (b), n1 = n: " << s.formula_b_full_agree << "/" << s.formula_b_full
       << "; n1 < n: " << s.formula_b_partial_agree << "/" << s.formula_b_partial << "\n";
    os << "printed formula (a): " << s.formula_a_agree << "/" << s.formula_a_orbits << "\n";
    os << failures_to_text("interpolation failure", s.interpolation_failures);
    os << failures_to_text("formula (b) counterexample", s.formula_b_counterexamples);
    os << failures_to_text("formula (a) counterexample", s.formula_a_counterexamples);
    os << (ok ? "PASS" : "FAIL") << "\n";
    write_output(cfg, os.str());
  }
  return ok && (printed_ok || !cfg.printed_literal) ? kPass : kDiverged;
}

int cmd_eval(const Config& cfg) {
  const std::string text = read_file(cfg.input);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw ParseError(std::string("input: ") + ex.what());
  }
  std::optional<MultiPoly> poly;
  std::optional<u64> count;
  if (j.contains("terms")) {
    poly = poly_from_json(j);
  } else {
    const ActionSpec spec = action_from_json(j);
    const SieveReport report = build_report(spec, false);
    poly = report.polynomial;
    if (cfg.at.size() == report.profile.size()) {
      if (const auto* a = std::get_if<AbelianActionSpec>(&spec)) {
        const AbelianAction action(*a);
        GroupElement g{std::vector<u32>(cfg.at.size())};
        for (std::size_t i = 0; i < cfg.at.size(); ++i)
          g.coords[i] = static_cast<u32>(floor_mod(cfg.at[i], a->moduli[i]));
        count = brute_force_fixed_points(action, g);
      } else {
        count = brute_force_fixed_points(DihedralAction(std::get<DihedralActionSpec>(spec)),
                                         static_cast<u32>(floor_mod(cfg.at[0], 2)), cfg.at[1]);
      }
    }
  }
  if (cfg.at.size() != poly->profile().size())
    throw ProfileMismatch("--at needs " + std::to_string(poly->profile().size()) + " exponents");
  const CyclotomicNumber value = evaluate(*poly, EvaluationPoint{cfg.at});
  if (cfg.format == "json") {
    json out{{"point", cfg.at}, {"value", cyclotomic_to_json(value)}};
    if (count) out["fixed_points"] = *count;
    write_output(cfg, dump(out));
  } else {
    std::string line = value.to_string();
    if (count) line += "  (fixed points: " + std::to_string(*count) + ")";
    write_output(cfg, line + "\n");
  }
  if (count) {
    const auto r = value.as_rational();
    return r && *r == Rational(static_cast<long>(*count)) ? kPass : kDiverged;
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sieving polynomials for abelian and dihedral group actions"};
  app.require_subcommand(1);
  Config cfg;
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "text, json or latex")
        ->check(CLI::IsMember({"text", "json", "latex"}));
    sub->add_option("--output,-o", cfg.output, "write to this file instead of stdout");
  };

  auto* orbits = app.add_subcommand("orbits", "orbit census with stabilizer data");
  orbits->add_option("file", cfg.input, "action file")->required();
  add_format(orbits);

  auto* poly = app.add_subcommand("poly", "sieving polynomial with verification report");
  poly->add_option("file", cfg.input, "action file")->required();
  poly->add_flag("--paper-literal", cfg.printed_literal, "use the formulas exactly as printed");
  add_format(poly);

  auto* verify = app.add_subcommand("verify", "check a polynomial against brute-force counts");
  verify->add_option("file", cfg.input, "action file")->required();
  verify->add_option("polynomial", cfg.poly_input, "polynomial file (JSON or expression)")->required();
  add_format(verify);

  auto* random = app.add_subcommand("random", "seeded random verification campaign");
  random->add_option("--kind", cfg.kind, "abelian or dihedral")->check(CLI::IsMember({"abelian", "dihedral"}));
  random->add_option("--seed", cfg.seed, "first seed");
  random->add_option("--count", cfg.count, "number of actions (default 500 abelian, 200 dihedral)");
  random->add_option("--max-set", cfg.max_set, "largest set size (default 200 abelian, 48 dihedral)");
  random->add_option("--max-moduli", cfg.max_moduli, "most cyclic factors")->check(CLI::Range(1u, 8u));
  random->add_option("--modulus-bound", cfg.modulus_bound, "largest cyclic factor order");
  random->add_option("--max-n", cfg.max_n, "largest dihedral n")->check(CLI::Range(1u, 64u));
  random->add_flag("--paper-literal", cfg.printed_literal, "printed reading; divergences fail the run");
  random->add_flag("--emit-action", cfg.emit_action, "print the action for --seed and stop");
  add_format(random);

  auto* eval = app.add_subcommand("eval", "exact value at a root-of-unity point");
  eval->add_option("file", cfg.input, "action file or polynomial JSON")->required();
  eval->add_option("--at", cfg.at, "exponents b_1 ... b_m")->required()->expected(1, 64);
  add_format(eval);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParse;
  }

  try {
    if (*orbits) return cmd_orbits(cfg);
    if (*poly) return cmd_poly(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*random) return cmd_random(cfg);
    if (*eval) return cmd_eval(cfg);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const InvalidAction& e) {
    std::cerr << "invalid action: " << e.what() << "\n";
    return kInvalid;
  } catch (const ProfileMismatch& e) {
    std::cerr << "profile mismatch: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kParse;
}
