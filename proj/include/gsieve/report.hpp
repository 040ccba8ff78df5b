#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gsieve/abelian_action.hpp"
#include "gsieve/dihedral_action.hpp"
#include "gsieve/multipoly.hpp"
#include "gsieve/oracle.hpp"

namespace gsieve {

enum class ConstructionTag { Cyclic, Free, Single, Tor, CharacterSum, Interpolated };

inline std::string to_string(ConstructionTag tag) {
  switch (tag) {
    case ConstructionTag::Cyclic: return "cyclic";
    case ConstructionTag::Free: return "free";
    case ConstructionTag::Single: return "single";
    case ConstructionTag::Tor: return "tor";
    case ConstructionTag::CharacterSum: return "character_sum";
    case ConstructionTag::Interpolated: return "interpolated";
  }
  return "unknown";
}

// Exponent of the second variable in each chained factor of the
// single-generator product: per-link differences (corrected) or the fixed
// first-link difference exactly as printed.
enum class ChainReading { Corrected, Printed };

inline std::string to_string(ChainReading r) { return r == ChainReading::Corrected ? "corrected" : "printed"; }

struct OrbitPolynomial {
  MultiPoly poly;
  u64 orbit_size = 0;
  ConstructionTag tag = ConstructionTag::Free;
};

struct Witness {
  std::vector<u32> element;
  u64 expected = 0;
  std::optional<Rational> got;
};

// Outcome of one construction on one orbit, checked against oracle counts.
struct ConstructionCheck {
  std::string label;
  ConstructionTag tag = ConstructionTag::Tor;
  std::optional<MultiPoly> poly;  // empty when the construction itself failed
  std::string error;
  bool agrees = false;
  std::optional<Witness> witness;  // reduced (canonical) coordinates
};

struct Discrepancy {
  std::string construction;
  std::size_t orbit = 0;
  std::vector<u32> witness;  // original coordinates, or (i, j) for dihedral groups
  u64 expected = 0;
  std::optional<Rational> got;
  std::string note;
};

struct AbelianOrbitReport {
  OrbitData orbit;
  StabilizerData stabilizer;
  std::optional<u64> formula_size;
  std::string formula_error;
  ConstructionCheck closed_form;            // reading selected by the options
  ConstructionCheck closed_form_alternate;  // the other chain reading
  MultiPoly character_sum;
  MultiPoly interpolated;
  bool independent_constructions_agree = false;
  ConstructionTag used = ConstructionTag::Tor;
};

struct DihedralOrbitReport {
  DihedralOrbitData orbit;
  MultiPoly poly;                // interpolated from counting semantics
  std::vector<u64> counts;       // index i * n + j
  std::optional<bool> formula_a_agrees;  // SizeN1 orbits only
  std::optional<Witness> formula_a_witness;
  std::optional<bool> formula_b_agrees;  // Size2N1 orbits only
  std::optional<Witness> formula_b_witness;
};

struct SieveReport {
  GroupKind kind = GroupKind::Abelian;
  VariableProfile profile;
  MultiPoly polynomial;
  std::vector<VerificationVerdict> verdicts;
  std::vector<Discrepancy> discrepancies;
  std::vector<AbelianOrbitReport> abelian_orbits;
  std::vector<DihedralOrbitReport> dihedral_orbits;

  // Independent constructions assembled over the full group (abelian only).
  std::optional<MultiPoly> character_sum_polynomial;
  std::optional<MultiPoly> interpolated_polynomial;
  bool character_sum_verified = false;
  bool interpolated_verified = false;

  bool verified() const { return all_pass(verdicts); }
  bool closed_form_diverged() const { return !discrepancies.empty(); }
};

}  // namespace gsieve
