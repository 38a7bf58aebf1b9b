#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <vector>

#include "hodgefan/cones.hpp"
#include "hodgefan/exact_core.hpp"
#include "test_util.hpp"

using namespace hodgefan;
using tu::M;
using tu::V;

namespace {

Cone mk(int ambient, std::vector<Vec<Rat>> gens) {
  return Cone::from_generators(gens, ambient);
}

bool has_cone(const std::vector<Cone>& cs, const Cone& c) {
  return std::find(cs.begin(), cs.end(), c) != cs.end();
}

bool has_cone(const ConeComplex& cc, const Cone& c) { return has_cone(cc.cones, c); }

}  // namespace

TEST_CASE("cone canonicalization") {
  // Duplicate rays collapse; generators become primitive and sorted.
  Cone r = mk(2, {V({2, 0}), V({3, 0})});
  REQUIRE(r.generators.size() == 1);
  CHECK(r.generators[0] == V({1, 0}));
  // A redundant interior generator is dropped.
  Cone q = mk(2, {V({1, 0}), V({0, 1}), V({1, 1})});
  REQUIRE(q.generators.size() == 2);
  CHECK(q.generators[0] == V({0, 1}));
  CHECK(q.generators[1] == V({1, 0}));
  // Fractions scale to primitive integer rays.
  Cone f = mk(2, {{rat_from_string("2/3"), rat_from_string("4/3")}});
  CHECK(f.generators[0] == V({1, 2}));
  CHECK(f.dim() == 1);
  // Generator order does not matter.
  CHECK(mk(2, {V({0, 1}), V({1, 0})}) == mk(2, {V({1, 0}), V({0, 1})}));
}

TEST_CASE("zero cone and rejection of non-pointed input") {
  Cone z = Cone::zero(2);
  CHECK(z.is_zero());
  CHECK(z.dim() == 0);
  CHECK(z.relint_contains(V({0, 0})));
  CHECK_FALSE(z.relint_contains(V({1, 0})));
  CHECK_THROWS(mk(2, {V({1, 0}), V({-1, 0})}));
  CHECK_THROWS(mk(2, {V({0, 0})}));
}

TEST_CASE("facet description: single ray") {
  Cone r = mk(2, {V({1, 0})});
  const HRep& h = hrep(r);
  REQUIRE(h.equalities.size() == 1);
  CHECK(h.equalities[0] == V({0, 1}));
  REQUIRE(h.inequalities.size() == 1);
  CHECK(h.inequalities[0] == V({1, 0}));
}

TEST_CASE("facet description: open quadrant") {
  Cone q = mk(2, {V({1, 0}), V({0, 1})});
  const HRep& h = hrep(q);
  CHECK(h.equalities.empty());
  REQUIRE(h.inequalities.size() == 2);
  CHECK(h.inequalities[0] == V({0, 1}));
  CHECK(h.inequalities[1] == V({1, 0}));
}

TEST_CASE("facet description: narrow cone") {
  Cone c = mk(2, {V({2, 1}), V({1, 2})});
  const HRep& h = hrep(c);
  CHECK(h.equalities.empty());
  REQUIRE(h.inequalities.size() == 2);
  CHECK(h.inequalities[0] == V({-1, 2}));  // 2y - x >= 0
  CHECK(h.inequalities[1] == V({2, -1}));  // 2x - y >= 0
}

TEST_CASE("membership predicates") {
  Cone c = mk(2, {V({2, 1}), V({1, 2})});
  CHECK(c.relint_contains(V({1, 1})));
  CHECK_FALSE(c.relint_contains(V({2, 1})));  // boundary ray
  CHECK(c.closure_contains(V({2, 1})));
  CHECK_FALSE(c.closure_contains(V({1, 0})));
  Vec<Rat> ip = c.interior_point();
  CHECK(c.relint_contains(ip));
}

TEST_CASE("intersection of relatively open cones") {
  Cone q = mk(2, {V({1, 0}), V({0, 1})});
  Cone c = mk(2, {V({2, 1}), V({1, 2})});
  // Idempotence.
  auto self = intersect_cones(q, q);
  REQUIRE(self.has_value());
  CHECK(*self == q);
  // The narrow cone sits inside the quadrant.
  auto cap = intersect_cones(q, c);
  REQUIRE(cap.has_value());
  CHECK(*cap == c);
  // Disjoint open rays.
  CHECK_FALSE(intersect_cones(mk(2, {V({1, 0})}), mk(2, {V({0, 1})})).has_value());
  // A boundary ray misses the open quadrant.
  CHECK_FALSE(intersect_cones(mk(2, {V({1, 0})}), q).has_value());
  // Two overlapping 2-cones meet in a 2-cone.
  Cone wide = mk(2, {V({1, 1}), V({-1, 1})});
  auto m = intersect_cones(wide, q);
  REQUIRE(m.has_value());
  CHECK(*m == mk(2, {V({1, 1}), V({0, 1})}));
  // A cone in the other half plane misses the quadrant.
  Cone left = mk(2, {V({0, 1}), V({-1, 1})});
  CHECK_FALSE(intersect_cones(left, q).has_value());
}

TEST_CASE("faces of cones") {
  Cone r = mk(2, {V({1, 0})});
  CHECK(faces(r).cones.size() == 2);  // zero cone and the ray
  Cone q = mk(2, {V({1, 0}), V({0, 1})});
  auto fq = faces(q);
  CHECK(fq.cones.size() == 4);
  CHECK(has_cone(fq, Cone::zero(2)));
  CHECK(has_cone(fq, mk(2, {V({1, 0})})));
  CHECK(has_cone(fq, mk(2, {V({0, 1})})));
  CHECK(has_cone(fq, q));
  Cone s = mk(3, {V({1, 0, 0}), V({0, 1, 0}), V({0, 0, 1})});
  CHECK(faces(s).cones.size() == 8);
  // Faces of a face are faces.
  for (const auto& f : fq.cones) {
    for (const auto& g : faces(f).cones) CHECK(has_cone(fq, g));
  }
}

TEST_CASE("star subdivision at an interior ray") {
  Cone q = mk(2, {V({1, 0}), V({0, 1})});
  auto pieces = star_subdivision(q, V({1, 1}));
  CHECK(pieces.cones.size() == 6);
  CHECK(has_cone(pieces, mk(2, {V({1, 0}), V({1, 1})})));
  CHECK(has_cone(pieces, mk(2, {V({1, 1}), V({0, 1})})));
  CHECK(has_cone(pieces, mk(2, {V({1, 1})})));
  CHECK(has_cone(pieces, mk(2, {V({1, 0})})));
  CHECK(has_cone(pieces, mk(2, {V({0, 1})})));
  CHECK(has_cone(pieces, Cone::zero(2)));
  // The pieces partition the closed cone: spot-check coverage counts.
  auto covered = [&](const Vec<Rat>& v) {
    int cnt = 0;
    for (const auto& p : pieces.cones)
      if (p.relint_contains(v)) ++cnt;
    return cnt;
  };
  CHECK(covered(V({1, 1})) == 1);
  CHECK(covered(V({2, 1})) == 1);
  CHECK(covered(V({1, 2})) == 1);
  CHECK(covered(V({1, 0})) == 1);
  CHECK(covered(V({0, 0})) == 1);
}

TEST_CASE("star subdivision at an existing generator changes nothing") {
  Cone q = mk(2, {V({1, 0}), V({0, 1})});
  auto pieces = star_subdivision(q, V({1, 0}));
  auto fq = faces(q);
  CHECK(pieces.cones.size() == fq.cones.size());
  for (const auto& f : fq.cones) CHECK(has_cone(pieces, f));
}

TEST_CASE("star subdivision of a 3-cone at the barycenter") {
  Cone s = mk(3, {V({1, 0, 0}), V({0, 1, 0}), V({0, 0, 1})});
  auto pieces = star_subdivision(s, V({1, 1, 1}));
  int top = 0;
  for (const auto& p : pieces.cones)
    if (p.dim() == 3) ++top;
  CHECK(top == 3);
  CHECK(has_cone(pieces, mk(3, {V({1, 0, 0}), V({0, 1, 0}), V({1, 1, 1})})));
  // All proper faces of the original survive.
  for (const auto& f : faces(s).cones) {
    if (f.dim() < 3) CHECK(has_cone(pieces, f));
  }
  // 3 top cells + 3 new walls + the new ray + 7 proper faces of the original.
  CHECK(pieces.cones.size() == 14);
}

TEST_CASE("star subdivision rejects rays outside the closure") {
  Cone q = mk(2, {V({1, 0}), V({0, 1})});
  CHECK_THROWS_AS(star_subdivision(q, V({-1, 1})), RayOutsideError);
}

TEST_CASE("chamber subdivision of two overlapping 2-cones") {
  Cone q = mk(2, {V({1, 0}), V({0, 1})});
  Cone c = mk(2, {V({2, 1}), V({1, 2})});
  ConeComplex in;
  in.ambient = 2;
  in.cones = {q, c};
  for (const auto& f : faces(q).cones) in.cones.push_back(f);
  for (const auto& f : faces(c).cones) in.cones.push_back(f);
  in.canonicalize();
  auto out = chamber_subdivision(in);
  // Common refinement: three top cells, four rays, the origin.
  CHECK(out.cones.size() == 8);
  CHECK(has_cone(out, mk(2, {V({1, 0}), V({2, 1})})));
  CHECK(has_cone(out, mk(2, {V({2, 1}), V({1, 2})})));
  CHECK(has_cone(out, mk(2, {V({1, 2}), V({0, 1})})));
  CHECK(has_cone(out, mk(2, {V({1, 0})})));
  CHECK(has_cone(out, mk(2, {V({2, 1})})));
  CHECK(has_cone(out, mk(2, {V({1, 2})})));
  CHECK(has_cone(out, mk(2, {V({0, 1})})));
  CHECK(has_cone(out, Cone::zero(2)));
  auto fan = is_fan(out);
  INFO(fan.detail);
  CHECK(fan.ok);
}

TEST_CASE("chamber subdivision leaves a fan unchanged") {
  Cone q = mk(2, {V({1, 0}), V({0, 1})});
  ConeComplex in = faces(q);
  auto out = chamber_subdivision(in);
  CHECK(out.cones.size() == in.cones.size());
  for (const auto& cn : in.cones) CHECK(has_cone(out, cn));
}

TEST_CASE("chamber subdivision with no crossings returns the inputs") {
  // Disjoint cones chosen so that no hyperplane of either cone's
  // representation (facet lines, ray spans, or ray normals) meets the
  // other cone's relative interior.
  Cone a = mk(2, {V({1, 0}), V({3, 1})});
  Cone b = mk(2, {V({-3, 1}), V({-2, 1})});
  ConeComplex in;
  in.ambient = 2;
  in.cones = {a, b};
  for (const auto& f : faces(a).cones) in.cones.push_back(f);
  for (const auto& f : faces(b).cones) in.cones.push_back(f);
  in.canonicalize();
  auto out = chamber_subdivision(in);
  CHECK(out.cones.size() == in.cones.size());
  CHECK(has_cone(out, a));
  CHECK(has_cone(out, b));
}

TEST_CASE("chamber subdivision requires a face-closed input") {
  Cone q = mk(2, {V({1, 0}), V({0, 1})});
  ConeComplex in;
  in.ambient = 2;
  in.cones = {q};  // faces missing
  CHECK_THROWS_AS(chamber_subdivision(in), NotFaceClosedError);
}

TEST_CASE("face closure completes a complex") {
  Cone q = mk(2, {V({1, 0}), V({0, 1})});
  ConeComplex in;
  in.ambient = 2;
  in.cones = {q};
  auto closed = face_closure(in);
  CHECK(closed == faces(q));
}

TEST_CASE("fan predicate") {
  ConeComplex zero;
  zero.ambient = 2;
  zero.cones = {Cone::zero(2)};
  CHECK(is_fan(zero).ok);
  Cone q = mk(2, {V({1, 0}), V({0, 1})});
  ConeComplex good = faces(q);
  CHECK(is_fan(good).ok);
  // Overlapping pair: the narrow cone's interior meets the quadrant's.
  ConeComplex badc = faces(q);
  Cone c = mk(2, {V({2, 1}), V({1, 2})});
  for (const auto& f : faces(c).cones) badc.cones.push_back(f);
  badc.canonicalize();
  auto r = is_fan(badc);
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.detail.empty());
  // Missing face.
  ConeComplex miss;
  miss.ambient = 2;
  miss.cones = {q, mk(2, {V({1, 0})}), Cone::zero(2)};
  miss.canonicalize();
  CHECK_FALSE(is_fan(miss).ok);
}

TEST_CASE("ambient span charts") {
  // Two commuting block generators span a 2-dimensional ambient space.
  Mat<Rat> nx(4, 4), ny(4, 4);
  nx.at(0, 2) = Rat(1);
  ny.at(1, 3) = Rat(1);
  AmbientSpan span = AmbientSpan::from_matrices({nx, ny});
  CHECK(span.dim() == 2);
  auto cx = span.to_coords(nx);
  auto cy = span.to_coords(ny);
  CHECK(span.to_matrix(cx) == nx);
  CHECK(span.to_matrix(cy) == ny);
  Mat<Rat> sum = Rat(2) * nx + Rat(3) * ny;
  auto cs = span.to_coords(sum);
  CHECK(cs == V({2, 3}));
  CHECK(span.to_matrix(cs) == sum);
  // A matrix outside the span has no coordinates.
  Mat<Rat> other(4, 4);
  other.at(2, 0) = Rat(1);
  Vec<Rat> dummy;
  CHECK_FALSE(span.try_coords(other, dummy));
  CHECK_THROWS(span.to_coords(other));
  NilpotentCone nc;
  nc.generators = {nx, ny};
  Cone emb = embed_cone(span, nc);
  CHECK(emb == mk(2, {V({1, 0}), V({0, 1})}));
}

TEST_CASE("transporting cones by a group element") {
  // Weight-1 block lattice; gamma = exp(nx) fixes both generators of the
  // commuting cone, so the cone is carried to itself.
  Mat<Rat> q(4, 4);
  q.at(2, 0) = Rat(1);
  q.at(0, 2) = Rat(-1);
  q.at(3, 1) = Rat(1);
  q.at(1, 3) = Rat(-1);
  Mat<Rat> nx(4, 4), ny(4, 4);
  nx.at(0, 2) = Rat(1);
  ny.at(1, 3) = Rat(1);
  NilpotentCone c;
  c.generators = {nx, ny};
  Mat<Rat> g = exp_nilpotent(nx);
  REQUIRE(preserves_form(g, q));
  auto moved = transport_cone(g, q, c);
  REQUIRE(moved.generators.size() == 2);
  CHECK(moved.generators[0] == nx);
  CHECK(moved.generators[1] == ny);
  // Group action property: transporting by g then h equals transporting by h*g.
  Mat<Rat> m(4, 4);
  m.at(1, 2) = Rat(1);
  m.at(0, 3) = Rat(1);
  REQUIRE(in_symplectic_lie_algebra(m, q));
  Mat<Rat> h = exp_nilpotent(m);
  auto once = transport_cone(h, q, transport_cone(g, q, c));
  auto both = transport_cone(h * g, q, c);
  REQUIRE(once.generators.size() == both.generators.size());
  for (size_t i = 0; i < once.generators.size(); ++i) {
    CHECK(once.generators[i] == both.generators[i]);
  }
  // Transport by a non-isometry is rejected.
  Mat<Rat> stretch = Mat<Rat>::identity(4);
  stretch.at(0, 0) = Rat(2);
  CHECK_THROWS_AS(transport_cone(stretch, q, c), FormNotPreservedError);
  // A form-preserving but non-integral element is rejected too: the Levi
  // block diag(2, 1/2, 2, 1/2) scales dual coordinate pairs and keeps q,
  // yet does not stabilize the lattice.
  Mat<Rat> levi(4, 4);
  levi.at(0, 0) = Rat(2);
  levi.at(1, 1) = Rat(2);
  levi.at(2, 2) = Rat(1, 2);
  levi.at(3, 3) = Rat(1, 2);
  REQUIRE(preserves_form(levi, q));
  CHECK_THROWS_AS(transport_cone(levi, q, c), FormNotPreservedError);
}
