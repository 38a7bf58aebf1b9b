#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hodgefan/cones.hpp"
#include "hodgefan/hodge.hpp"
#include "hodgefan/report.hpp"

namespace hodgefan {

// The construction pipeline needs the finite witness list; an empty list
// leaves the orbit side of the family unspecified.
struct MissingWitnessError : std::domain_error {
  explicit MissingWitnessError(const std::string& what) : std::domain_error(what) {}
};

// The declared admissible-type set includes a type for which no finiteness
// reduction is available, so the construction refuses to certify anything.
struct MixedRegimeError : std::domain_error {
  explicit MixedRegimeError(const std::string& what) : std::domain_error(what) {}
};

// An integral symmetry of the polarized lattice.
struct GroupElement {
  std::string name;
  Mat<Rat> matrix;

  // Throws std::invalid_argument unless the matrix is integral and preserves
  // the form exactly.
  void validate(const Mat<Rat>& q) const;
};

struct NamedCone {
  std::string name;
  NilpotentCone cone;
};

// Finite presentation of a cone system: generating cones, the group elements
// standing in for the (typically infinite) symmetry group, the admissible
// LMHS type tags, and per-cone limit filtrations certifying that the cone's
// limit set is nonempty. The zero cone is implicitly a member of every
// system and is never listed.
struct ConeSystem {
  SymplecticLattice lattice;
  std::vector<NamedCone> generating_cones;
  std::vector<GroupElement> witnesses;
  // Admissible LMHS type tags ("HT", "I_1", "IV_2", ...); empty means no
  // type restriction.
  std::set<std::string> phi;
  // Limit filtrations by cone name. A listed filtration is the certificate
  // that the named cone admits a limit of the declared kind.
  std::map<std::string, HodgeFiltration> orbit_witnesses;

  // Structural validity: lattice, distinct nonempty names, every cone a
  // commuting nilpotent family compatible with the form, every witness
  // integral and form-preserving, orbit-witness keys naming listed cones and
  // their filtrations living on the lattice flag variety. Throws
  // std::invalid_argument.
  void validate() const;

  const NamedCone* find(const std::string& name) const;
};

// Reports carry one named item per axiom; the alias keeps this module's
// vocabulary aligned with its operations.
using FanReport = Report;

// Verdict of the limit-set meet test: Shared means a common limit filtration
// exists for both cones, No means none can, Unknown is the honest answer
// outside the decided regimes.
enum class MeetDecision { Shared, No, Unknown };

struct MeetResult {
  MeetDecision decision = MeetDecision::Unknown;
  std::string detail;
  // True when the pair is certified impossible for honest inputs (distinct
  // meeting cones whose quotient images coincide); `certificate` records the
  // computation that exhibits the contradiction.
  bool ill_formed = false;
  std::vector<std::string> certificate;
};

// Explicit contradiction certificate for a meeting pair of distinct type-IV
// cones with equal quotient images: exhibits N1 in one cone and not the
// other, N2 in the second cone with the same quotient image, a common
// relative-interior element N3, and a top splitting vector v on which the
// configuration violates commutation, form nondegeneracy, or the interior
// action's faithfulness. `fired` is false when the preconditions do not hold
// or no contradiction could be exhibited.
struct BracketCertificate {
  bool fired = false;
  std::string mode;  // "bracket", "duality", or "interior_injectivity"
  std::vector<std::string> lines;
};

BracketCertificate type_iv_bracket_certificate(const NilpotentCone& sigma,
                                               const NilpotentCone& tau,
                                               const HodgeFiltration& f_sigma,
                                               const SymplecticLattice& lattice);

// Decides whether the two cones can share a limit filtration, using the
// system's lattice and admissible-type set. Decided regimes: weight 1;
// weight 3 with both cones of type I; weight 3 with both cones of type IV
// (via the quotient criterion, with the bracket certificate for the
// impossible equal-quotient configuration). Everywhere else the verdict is
// Unknown.
MeetResult btilde_meet(const NilpotentCone& sigma, const std::optional<HodgeFiltration>& f_sigma,
                       const NilpotentCone& tau, const std::optional<HodgeFiltration>& f_tau,
                       const ConeSystem& system);

// Lookup-by-name convenience: cones and their orbit witnesses come from the
// system. Throws std::invalid_argument for an unknown name.
MeetResult btilde_meet(const std::string& sigma, const std::string& tau, const ConeSystem& system);

// Checks, per generating cone, that every generator N admits a positive
// integer k <= 24 with exp(kN) integral, and re-validates the witness
// translates of every cone (closure under the full group is definitional
// for orbit-generated systems and recorded as such).
FanReport strong_compatibility(const ConeSystem& system);

// Enumerates the pairs (sigma, Ad_gamma tau) over generating cones and
// witnesses (the identity is always included); for each meeting pair of
// distinct cones evaluates btilde_meet restricted to the admissible types.
// The compatibility axiom holds iff no such pair shares a limit; undecided
// meeting pairs and certified ill-formed pairs fail their own report items.
// The strict fan property of the face closure is reported informationally.
FanReport weak_fan_check(const ConeSystem& system);

struct BuildResult {
  ConeSystem refined;
  FanReport report;
};

// The construction pipeline: assembles the generating cones and their
// witness translates, face-closes, and refines by chamber subdivision per
// family of cones sharing a weight filtration; families in the type-IV
// shape are subdivided on the quotient and pulled back. The refined system
// keeps the input witnesses and type set, pieces inherit their parent's
// orbit witness, and the attached report is weak_fan_check on the output.
// Throws MissingWitness when the witness list is empty and MixedRegime when
// the type set includes an unsupported type.
BuildResult build_weak_fan(const ConeSystem& system);

}  // namespace hodgefan
