#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hodgefan/cones.hpp"
#include "hodgefan/filtration.hpp"
#include "hodgefan/lattice.hpp"
#include "hodgefan/matrix.hpp"

namespace hodgefan {

// The supplied complex is not a fan subdividing the closed source cone: it
// fails the fan axioms, leaves the source, or does not cover it.
struct NotARefinementError : std::domain_error {
  explicit NotARefinementError(const std::string& what) : std::domain_error(what) {}
};

// The target is an honest refinement but is not produced by star
// subdivisions at its own new rays in lexicographic order. Auxiliary rays
// are never inserted to force the issue; the caller must re-subdivide.
struct NotReachableByStarsError : std::domain_error {
  explicit NotReachableByStarsError(const std::string& what) : std::domain_error(what) {}
};

// A blow-up center applied to a chart whose monodromy cone does not
// contain it.
struct CenterOutsideError : std::domain_error {
  explicit CenterOutsideError(const std::string& what) : std::domain_error(what) {}
};

// A boundary-orbit query against a chart that stores no limit filtration.
struct MissingLimitError : std::domain_error {
  explicit MissingLimitError(const std::string& what) : std::domain_error(what) {}
};

// A purely symbolic polydisk chart: `dim` labelled coordinates, of which
// the first logs.size() are boundary divisors carrying commuting monodromy
// logarithms. The only analytic datum carried along is the optional value
// of the limit filtration at the chart's origin; everything else about the
// chart is the labels and, across blow-ups, monomial substitution rules.
struct LocalChart {
  std::string name;
  int dim = 0;
  std::vector<std::string> divisors;  // one label per coordinate
  std::vector<Mat<Rat>> logs;         // log of the monodromy around divisor i
  std::optional<HodgeFiltration> psi0;

  // Throws std::invalid_argument unless the label count matches dim, there
  // are at most dim logs, and the logs are square nilpotent matrices of a
  // common size that pairwise commute and exponentiate integrally.
  void validate() const;
};

// One chart produced by a star blow-up: the subdivided parent, the child's
// cone in the coordinates the plan works in, and the exponent matrix E of
// the monomial substitution expressing the parent coordinates in the
// child's:  x_j = prod_i t_i^{E(j,i)}.  Column i of E is the i-th ray of
// the child cone written in the parent's ray basis.
struct ChartSubstitution {
  std::string parent;
  std::string name;
  Cone cone;
  Mat<Rat> exponents;
};

// A single (weighted) star blow-up: the primitive center ray, the first
// top-dimensional chart whose closed cone contains it, the center's
// coordinates in that chart's ray basis (the blow-up weights), and one
// substitution per top-dimensional child of every subdivided chart.
struct BlowupStep {
  Vec<Rat> center;
  std::string affected;
  std::vector<Rat> weights;
  std::vector<ChartSubstitution> charts;
};

// A finite ordered sequence of star blow-ups carrying the face closure of
// a simplicial cone onto a target fan.
struct SubdivisionPlan {
  Cone source;
  std::vector<BlowupStep> steps;
  ConeComplex final_fan;
};

// The label attached to a boundary stratum: the cone spanned by the logs
// of the divisors cutting the stratum out, paired with the chart's limit
// filtration. The label is relative to the chart's fixed coordinates.
struct OrbitLabel {
  NilpotentCone cone;
  HodgeFiltration psi0;
};

// Express `target` -- a fan subdividing the closed simplicial cone
// `sigma` -- as star blow-ups at the target's new rays, taken in
// lexicographic order on primitive generators. Top-dimensional pieces are
// named deterministically: the source cone is chart "c0" and the children
// of a subdivided chart append ".0", ".1", ... in lexicographic order of
// their canonical generators. All weights and exponent matrices are
// relative to the canonical generator order of the cone involved, so a
// chart driven by the plan must list divisor i against the cone's i-th
// canonical ray. Throws NotARefinementError when `target` is
// not a fan refinement of `sigma`, and NotReachableByStarsError when the
// star sequence at the new rays produces a different fan.
SubdivisionPlan subdivision_to_blowups(const Cone& sigma, const ConeComplex& target);

// Apply one blow-up step to a local chart. A chart the step does not
// involve comes back unchanged, as a singleton list. Otherwise the chart
// is replaced by one child per top-dimensional piece: the substituted
// coordinates keep their parent divisor labels where a ray survives, the
// exceptional coordinate is labelled "E(w1,...,wk)" from the center's
// weights in the parent's ray basis and carries the weighted sum of the
// parent logs, and the limit filtration is carried over. When the step
// names this chart but lists no substitutions for it, the children are
// synthesized from the weights alone, so a hand-built step can drive a
// single blow-up without a plan. Throws CenterOutsideError when the
// weights leave the chart's monodromy cone.
std::vector<LocalChart> blowup_chart(const LocalChart& chart, const BlowupStep& step);

// Label the boundary stratum cut out by the named divisors of `chart` with
// its nilpotent-orbit data. Generators follow the chart's coordinate
// order, regardless of the order the names are listed in. Throws
// MissingLimitError when the chart stores no limit filtration, and
// std::invalid_argument for an unknown label or one whose divisor carries
// no monodromy log.
OrbitLabel boundary_orbit(const LocalChart& chart, const std::vector<std::string>& stratum);

// Same, but additionally run the nilpotent-orbit test against `lattice`
// and throw std::domain_error naming the failed check when the label is
// not an honest orbit.
OrbitLabel boundary_orbit(const LocalChart& chart, const std::vector<std::string>& stratum,
                          const SymplecticLattice& lattice);

// Serialize a plan: the JSON form mirrors the structs field by field; the
// script form is a human-readable listing of centers, weights, and chart
// maps, one blow-up per stanza.
nlohmann::ordered_json plan_to_json(const SubdivisionPlan& plan);
std::string plan_to_script(const SubdivisionPlan& plan);

}  // namespace hodgefan
