#pragma once

#include <optional>

#include "hodgefan/filtration.hpp"

namespace hodgefan {

struct RayOutsideError : std::domain_error {
  explicit RayOutsideError(const std::string& what) : std::domain_error(what) {}
};

struct NotFaceClosedError : std::domain_error {
  explicit NotFaceClosedError(const std::string& what) : std::domain_error(what) {}
};

struct FormNotPreservedError : std::domain_error {
  explicit FormNotPreservedError(const std::string& what) : std::domain_error(what) {}
};

// Hyperplane description of a relatively open cone: the solution set of
// {e . x = 0 for all equalities} ∩ {f . x > 0 for all inequalities}.
// Equalities cut out the span, inequalities are the facet forms; both lists
// hold primitive integer covectors in a deterministic order.
struct HRep {
  std::vector<Vec<Rat>> equalities;
  std::vector<Vec<Rat>> inequalities;
};

// Relatively open rational polyhedral cone, always pointed: the relative
// interior of the closed cone spanned by its generators. Canonical form:
// generators are the primitive extreme rays of the closure, sorted
// lexicographically; the zero cone has no generators.
struct Cone {
  int ambient = 0;
  std::vector<Vec<Rat>> generators;
  HRep h;

  // Canonicalizes an arbitrary finite generating set (redundant generators
  // welcome). Throws std::invalid_argument on a zero generator, an ambient
  // mismatch, or a non-pointed span of rays.
  static Cone from_generators(const std::vector<Vec<Rat>>& gens, int ambient);

  static Cone zero(int ambient) { return from_generators({}, ambient); }

  int dim() const;
  bool is_zero() const { return generators.empty(); }

  // Sum of the canonical generators: a relative-interior point (the origin
  // for the zero cone).
  Vec<Rat> interior_point() const;

  bool relint_contains(const Vec<Rat>& v) const;
  bool closure_contains(const Vec<Rat>& v) const;

  friend bool operator==(const Cone& a, const Cone& b) {
    return a.ambient == b.ambient && a.generators == b.generators;
  }
  friend bool operator!=(const Cone& a, const Cone& b) { return !(a == b); }
};

// Deterministic strict ordering on canonical cones (dimension, then
// generator lists lexicographically).
bool cone_less(const Cone& a, const Cone& b);

struct ConeComplex {
  int ambient = 0;
  std::vector<Cone> cones;

  bool contains(const Cone& c) const;
  // Sorts and removes duplicates.
  void canonicalize();

  friend bool operator==(const ConeComplex& a, const ConeComplex& b) {
    return a.ambient == b.ambient && a.cones == b.cones;
  }
};

// Minimal hyperplane representation (cached on the cone at construction).
const HRep& hrep(const Cone& c);

// Intersection of relative interiors; std::nullopt when they miss.
std::optional<Cone> intersect_cones(const Cone& a, const Cone& b);

// Closure of the relatively open solution set {x : e . x = 0 for every
// equality, f . x > 0 for every inequality}, as a canonical cone; nullopt
// when the set is empty. Throws std::logic_error when the set contains a
// line (callers are expected to pin the set inside a pointed cone).
std::optional<Cone> cone_from_strict_system(int ambient, const std::vector<Vec<Rat>>& eqs,
                                            const std::vector<Vec<Rat>>& ineqs);

// All faces of the closure of c, each as a relatively open cone, including
// c itself and the zero cone; canonically sorted.
ConeComplex faces(const Cone& c);

// The complex with every face of every cone added (deduplicated, sorted).
ConeComplex face_closure(const ConeComplex& complex);

// Star subdivision of the closed cone at a ray of its closure, returned as
// relatively open pieces whose disjoint union is the closed cone. Throws
// RayOutsideError when the ray is not in the closure.
ConeComplex star_subdivision(const Cone& c, const Vec<Rat>& ray);

// Refines a face-closed complex along the arrangement of all of its cones'
// hyperplanes: every relatively open sign-vector chamber inside the support
// is returned; the output is a fan with the same support refining every
// input cone. Throws NotFaceClosedError when the input misses a face.
ConeComplex chamber_subdivision(const ConeComplex& complex);

struct FanDecision {
  bool ok = true;
  std::string detail;  // names the missing face or the offending pair
  int first = -1;      // indices of the violating pair, when applicable
  int second = -1;
};

// Fan test for relatively open cones: face-closed, and distinct cones have
// disjoint relative interiors.
FanDecision is_fan(const ConeComplex& complex);

// Matrix-level transport: generators gamma N gamma^{-1}. Throws
// FormNotPreservedError unless gamma is integral and preserves q.
NilpotentCone transport_cone(const Mat<Rat>& gamma, const Mat<Rat>& q, const NilpotentCone& cone);

// Fixed basis of the span of a commuting nilpotent family; the bridge
// between matrix generators and cone coordinates.
struct AmbientSpan {
  std::vector<Mat<Rat>> basis;

  int dim() const { return static_cast<int>(basis.size()); }
  int matrix_size() const { return basis.empty() ? 0 : basis.front().rows; }

  Mat<Rat> to_matrix(const Vec<Rat>& coords) const;
  bool try_coords(const Mat<Rat>& m, Vec<Rat>& out) const;
  // Throws std::domain_error when m lies outside the span.
  Vec<Rat> to_coords(const Mat<Rat>& m) const;

  // Greedy maximal linearly independent subset, in input order.
  static AmbientSpan from_matrices(const std::vector<Mat<Rat>>& mats);
};

// Coordinates of a matrix-generated cone inside a fixed span.
Cone embed_cone(const AmbientSpan& span, const NilpotentCone& nc);

}  // namespace hodgefan
