#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hodgefan/exact_core.hpp"
#include "hodgefan/rational.hpp"
#include "hodgefan/subspace.hpp"
#include "test_util.hpp"

using namespace hodgefan;
using tu::GV;
using tu::M;
using tu::Mq;
using tu::V;

TEST_CASE("rational parsing canonicalizes") {
  CHECK(rat_to_string(rat_from_string("2/4")) == "1/2");
  CHECK(rat_to_string(rat_from_string("-6/4")) == "-3/2");
  CHECK(rat_to_string(rat_from_string("0/7")) == "0");
  CHECK(rat_to_string(rat_from_string("5")) == "5");
  CHECK_THROWS(rat_from_string("1/0"));
  CHECK_THROWS(rat_from_string("abc"));
}

TEST_CASE("gaussian rational parse/format round trip") {
  CHECK(gauss_to_string(gauss_from_string("1/2+3/4 i")) == "1/2+3/4 i");
  CHECK(gauss_to_string(gauss_from_string("0-1 i")) == "0-1 i");
  CHECK(gauss_to_string(gauss_from_string("-2/3")) == "-2/3");
  CHECK(gauss_to_string(gauss_from_string("0+1 i")) == "0+1 i");
  GaussRat z = gauss_from_string("1/2-2 i");
  CHECK(z.conj().im == Rat(2));
  CHECK(z.conj().re == z.re);
  // i^k cycle
  CHECK(gauss_i_pow(0) == GaussRat(Rat(1), Rat(0)));
  CHECK(gauss_i_pow(1) == gauss_i());
  CHECK(gauss_i_pow(2) == GaussRat(Rat(-1), Rat(0)));
  CHECK(gauss_i_pow(-1) == GaussRat(Rat(0), Rat(-1)));
}

TEST_CASE("gaussian rational field ops") {
  GaussRat a = gauss_from_string("1+2 i");
  GaussRat b = gauss_from_string("3-1 i");
  GaussRat p = a;
  p *= b;  // (1+2i)(3-i) = 3 - i + 6i + 2 = 5 + 5i
  CHECK(gauss_to_string(p) == "5+5 i");
  GaussRat q = a;
  q /= b;  // (1+2i)/(3-i) = (1+2i)(3+i)/10 = (1+7i)/10
  CHECK(gauss_to_string(q) == "1/10+7/10 i");
  GaussRat r = q;
  r *= b;
  CHECK(r == a);
}

TEST_CASE("denominator lcm accumulator") {
  DenominatorLcm l;
  l.accumulate(rat_from_string("1/2"));
  l.accumulate(rat_from_string("1/3"));
  l.accumulate(rat_from_string("5"));
  CHECK(l.value == 6);
}

TEST_CASE("canonical_subspace basics") {
  // Empty generating set gives the zero subspace.
  auto z = canonical_subspace<Rat>(2, {});
  CHECK(z.dim() == 0);
  // Dependent generators collapse.
  auto s = canonical_subspace<Rat>(2, {V({1, 0}), V({2, 0})});
  CHECK(s.dim() == 1);
  CHECK(s.basis.at(0, 0) == Rat(1));
  CHECK(s.basis.at(0, 1) == Rat(0));
  // Independent generators span the plane: det [[1,2],[3,4]] = -2 != 0.
  auto f = canonical_subspace<Rat>(2, {V({1, 2}), V({3, 4})});
  CHECK(f.dim() == 2);
  CHECK(f == Subspace<Rat>::full(2));
}

TEST_CASE("canonical_subspace is idempotent and order-insensitive") {
  std::vector<Vec<Rat>> gens = {V({1, 2, 3}), V({0, 1, 1}), V({1, 3, 4})};
  auto a = canonical_subspace<Rat>(3, gens);
  std::vector<Vec<Rat>> rev(gens.rbegin(), gens.rend());
  auto b = canonical_subspace<Rat>(3, rev);
  CHECK(a == b);
  // Re-canonicalizing the canonical basis rows is the identity.
  std::vector<Vec<Rat>> rows;
  for (int i = 0; i < a.basis.rows; ++i) rows.push_back(a.basis.row(i));
  CHECK(canonical_subspace<Rat>(3, rows) == a);
  CHECK(a.dim() == 2);
}

TEST_CASE("subspace sum and intersection") {
  auto u = canonical_subspace<Rat>(3, {V({1, 0, 0}), V({0, 1, 0})});
  auto w = canonical_subspace<Rat>(3, {V({0, 1, 0}), V({0, 0, 1})});
  auto cap = intersect(u, w);
  CHECK(cap.dim() == 1);
  CHECK(cap.contains(V({0, 1, 0})));
  auto s = sum(u, w);
  CHECK(s == Subspace<Rat>::full(3));
  // Modular identity sanity: dim(U)+dim(W) = dim(U+W)+dim(U∩W).
  CHECK(u.dim() + w.dim() == s.dim() + cap.dim());
}

TEST_CASE("subspace intersection matches containment tests on random-ish data") {
  auto u = canonical_subspace<Rat>(4, {V({1, 2, 0, 1}), V({0, 1, 1, 0})});
  auto w = canonical_subspace<Rat>(4, {V({1, 3, 1, 1}), V({2, 4, 0, 3})});
  auto cap = intersect(u, w);
  // v = (1,3,1,1) = (1,2,0,1)+(0,1,1,0) lies in both.
  CHECK(cap.contains(V({1, 3, 1, 1})));
  for (int i = 0; i < cap.basis.rows; ++i) {
    CHECK(u.contains(cap.basis.row(i)));
    CHECK(w.contains(cap.basis.row(i)));
  }
}

TEST_CASE("image, kernel, preimage, annihilator") {
  // n maps e1 -> e2 -> e3 -> 0 (columns are images of basis vectors).
  Mat<Rat> n = M({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
  auto img = image_subspace(n);
  CHECK(img.dim() == 2);
  CHECK(img.contains(V({0, 1, 0})));
  CHECK(img.contains(V({0, 0, 1})));
  auto ker = kernel_subspace(n);
  CHECK(ker.dim() == 1);
  CHECK(ker.contains(V({0, 0, 1})));
  auto pre = preimage(n, canonical_subspace<Rat>(3, {V({0, 0, 1})}));
  CHECK(pre.dim() == 2);
  CHECK(pre.contains(V({0, 1, 0})));
  CHECK(pre.contains(V({0, 0, 1})));
  // preimage of full is full, preimage of zero is the kernel.
  CHECK(preimage(n, Subspace<Rat>::full(3)) == Subspace<Rat>::full(3));
  CHECK(preimage(n, Subspace<Rat>::zero(3)) == ker);
}

TEST_CASE("orthogonal complement under a symplectic form") {
  // Standard rank-2 form Q(e^1, e_1) = 1 in basis (e_1, e^1).
  Mat<Rat> q = M({{0, -1}, {1, 0}});
  auto l = canonical_subspace<Rat>(2, {V({1, 0})});
  auto perp = orthogonal_complement(l, q);
  CHECK(perp == l);  // a line is Lagrangian in the plane
  CHECK(orthogonal_complement(Subspace<Rat>::zero(2), q) == Subspace<Rat>::full(2));
  CHECK(orthogonal_complement(Subspace<Rat>::full(2), q) == Subspace<Rat>::zero(2));
}

TEST_CASE("log of identity is zero, exp of zero is identity") {
  Mat<Rat> id = Mat<Rat>::identity(3);
  CHECK(log_unipotent(id).is_zero());
  CHECK(exp_nilpotent(Mat<Rat>::zero(3, 3)) == id);
}

TEST_CASE("exp/log on the 2x2 shear") {
  Mat<Rat> n = M({{0, 1}, {0, 0}});
  Mat<Rat> t = M({{1, 1}, {0, 1}});
  CHECK(exp_nilpotent(n) == t);
  CHECK(log_unipotent(t) == n);
}

TEST_CASE("log_unipotent uses the full series on a 4x4 example") {
  // n: principal nilpotent, (t - id)^3 != 0 so three series terms matter.
  Mat<Rat> n(4, 4);
  n.at(1, 0) = Rat(1);
  n.at(2, 1) = Rat(1);
  n.at(3, 2) = Rat(1);
  Mat<Rat> t = exp_nilpotent(n);
  // exp of the principal nilpotent has 1/2 and 1/6 entries.
  CHECK(t.at(2, 0) == rat_from_string("1/2"));
  CHECK(t.at(3, 0) == rat_from_string("1/6"));
  CHECK(log_unipotent(t) == n);
  Mat<Rat> u = t - Mat<Rat>::identity(4);
  CHECK_FALSE(mat_pow(u, 3).is_zero());
}

TEST_CASE("exp/log round trips both ways") {
  Mat<Rat> n = M({{0, 2, -1, 0}, {0, 0, 3, 1}, {0, 0, 0, -2}, {0, 0, 0, 0}});
  Mat<Rat> t = exp_nilpotent(n);
  CHECK(log_unipotent(t) == n);
  Mat<Rat> u = Mq({{"1", "1/2", "0"}, {"0", "1", "-2/3"}, {"0", "0", "1"}});
  CHECK(exp_nilpotent(log_unipotent(u)) == u);
}

TEST_CASE("exp is a homomorphism on commuting arguments") {
  Mat<Rat> j(4, 4);
  j.at(1, 0) = Rat(1);
  j.at(2, 1) = Rat(1);
  j.at(3, 2) = Rat(1);
  Mat<Rat> a = mat_pow(j, 2);
  Mat<Rat> b = mat_pow(j, 3);
  CHECK(commute(a, b));
  CHECK(exp_nilpotent(a + b) == exp_nilpotent(a) * exp_nilpotent(b));
}

TEST_CASE("exp/log reject bad input") {
  Mat<Rat> notnil = M({{1, 0}, {0, 0}});
  CHECK_THROWS_AS(exp_nilpotent(notnil), NotNilpotentError);
  Mat<Rat> notuni = M({{2, 0}, {0, 1}});
  CHECK_THROWS_AS(log_unipotent(notuni), NotUnipotentError);
}

TEST_CASE("bracket and commute") {
  Mat<Rat> a = M({{0, 1}, {0, 0}});
  Mat<Rat> b = M({{0, 0}, {1, 0}});
  Mat<Rat> h = bracket(a, b);
  CHECK(h == M({{1, 0}, {0, -1}}));
  CHECK_FALSE(commute(a, b));
  CHECK(commute(a, a));
}

TEST_CASE("symplectic Lie algebra membership") {
  // Basis (e_1, e^1), Q(e^1, e_1) = 1.
  Mat<Rat> q = M({{0, -1}, {1, 0}});
  Mat<Rat> n = M({{0, 1}, {0, 0}});  // e^1 -> e_1
  CHECK(in_symplectic_lie_algebra(n, q));
  Mat<Rat> bad = M({{1, 0}, {0, 1}});
  CHECK_FALSE(in_symplectic_lie_algebra(bad, q));
  // exp of an sp element preserves the form; a one-sided stretch does not
  // (diag(2, 1/2) would, since it has determinant one).
  CHECK(preserves_form(exp_nilpotent(n), q));
  CHECK(preserves_form(Mq({{"2", "0"}, {"0", "1/2"}}), q));
  Mat<Rat> stretch = M({{2, 0}, {0, 1}});
  CHECK_FALSE(preserves_form(stretch, q));
}

TEST_CASE("adjoint action") {
  Mat<Rat> q = M({{0, -1}, {1, 0}});
  Mat<Rat> n = M({{0, 1}, {0, 0}});
  Mat<Rat> g = exp_nilpotent(n);
  // Ad_g fixes n (g = exp(n) commutes with n).
  CHECK(ad_action(g, n) == n);
  Mat<Rat> m = M({{0, 0}, {1, 0}});
  Mat<Rat> adm = ad_action(g, m);
  CHECK(in_symplectic_lie_algebra(adm, q));
  CHECK_FALSE(adm == m);
  // Ad is an action: Ad_{gh} = Ad_g Ad_h.
  Mat<Rat> h = exp_nilpotent(m);
  CHECK(ad_action(g * h, m) == ad_action(g, ad_action(h, m)));
}

TEST_CASE("nilpotency index") {
  // Convention: the largest k with n^k != 0, so a square-zero map has
  // index 1 and the zero map has index 0.
  Mat<Rat> j(4, 4);
  j.at(1, 0) = Rat(1);
  j.at(2, 1) = Rat(1);
  j.at(3, 2) = Rat(1);
  CHECK(nilpotency_index(j) == 3);
  CHECK(nilpotency_index(mat_pow(j, 2)) == 1);
  CHECK(nilpotency_index(Mat<Rat>::zero(3, 3)) == 0);
}

TEST_CASE("integrality and primitive rays") {
  CHECK(mat_is_integral(M({{1, -3}, {0, 7}})));
  CHECK_FALSE(mat_is_integral(Mq({{"1/2"}})));
  Vec<Rat> r = {rat_from_string("2/3"), rat_from_string("4/3")};
  auto p = primitive_ray(r);
  CHECK(p[0] == Rat(1));
  CHECK(p[1] == Rat(2));
  // Already-primitive vectors are fixed.
  Vec<Rat> s = V({3, -5});
  CHECK(primitive_ray(s) == s);
}

TEST_CASE("matrix string serialization round trip") {
  Mat<Rat> m = Mq({{"1/2", "-3"}, {"0", "7/5"}});
  auto strs = mat_to_strings(m);
  CHECK(strs[0][0] == "1/2");
  CHECK(strs[1][1] == "7/5");
  CHECK(mat_from_strings(strs) == m);
  Mat<GaussRat> g(1, 2);
  g.at(0, 0) = gauss_from_string("1/2+1 i");
  g.at(0, 1) = GaussRat(Rat(-2), Rat(0));
  auto gs = mat_to_strings(g);
  CHECK(gs[0][0] == "1/2+1 i");
  CHECK(gs[0][1] == "-2");
  CHECK(gauss_mat_from_strings(gs) == g);
}

TEST_CASE("complex subspace conjugation") {
  auto s = canonical_subspace<GaussRat>(2, {GV({"0+1 i", "1"})});
  auto c = conj_subspace(s);
  CHECK(c.contains(GV({"0-1 i", "1"})));
  CHECK_FALSE(c == s);
  CHECK(conj_subspace(c) == s);
  // A subspace with a real basis is self-conjugate.
  auto r = canonical_subspace<GaussRat>(2, {GV({"1", "2"})});
  CHECK(conj_subspace(r) == r);
}

TEST_CASE("coordinates_in recovers coefficients") {
  auto s = canonical_subspace<Rat>(3, {V({1, 0, 1}), V({0, 1, 1})});
  Vec<Rat> v = V({2, 3, 5});
  auto c = coordinates_in(s, v);
  REQUIRE(c.has_value());
  Vec<Rat> back = vec_scale((*c)[0], s.basis.row(0));
  back = vec_add(back, vec_scale((*c)[1], s.basis.row(1)));
  CHECK(back == v);
  CHECK_FALSE(coordinates_in(s, V({0, 0, 1})).has_value());
}
