#include "hodgefan/cones.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace hodgefan {

namespace {

Rat dot(const Vec<Rat>& a, const Vec<Rat>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot length mismatch");
  Rat s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Primitive representative with the first nonzero entry positive (canonical
// form for a hyperplane through the origin).
Vec<Rat> sign_canonical(const Vec<Rat>& v) {
  Vec<Rat> p = primitive_ray(v);
  for (const Rat& x : p) {
    if (x == 0) continue;
    if (x < 0) {
      for (Rat& y : p) y = -y;
    }
    break;
  }
  return p;
}

struct DDRay {
  Vec<Rat> v;
  std::set<int> tight;  // indices of processed rows vanishing on v
};

struct DDResult {
  std::vector<Vec<Rat>> lineality;
  std::vector<DDRay> rays;
};

// Double description: extreme rays and lineality of {x : row . x >= 0 for
// every row}. Incremental insertion with the combinatorial adjacency test.
DDResult double_description(const std::vector<Vec<Rat>>& rows, int d) {
  DDResult st;
  for (int i = 0; i < d; ++i) {
    Vec<Rat> e(static_cast<std::size_t>(d), Rat(0));
    e[static_cast<std::size_t>(i)] = Rat(1);
    st.lineality.push_back(e);
  }
  for (int k = 0; k < static_cast<int>(rows.size()); ++k) {
    const Vec<Rat>& a = rows[static_cast<std::size_t>(k)];
    int li = -1;
    for (std::size_t i = 0; i < st.lineality.size(); ++i) {
      if (dot(a, st.lineality[i]) != 0) {
        li = static_cast<int>(i);
        break;
      }
    }
    if (li >= 0) {
      Vec<Rat> l0 = st.lineality[static_cast<std::size_t>(li)];
      Rat al0 = dot(a, l0);
      if (al0 < 0) {
        for (Rat& x : l0) x = -x;
        al0 = -al0;
      }
      std::vector<Vec<Rat>> newlin;
      for (std::size_t i = 0; i < st.lineality.size(); ++i) {
        if (static_cast<int>(i) == li) continue;
        Rat c = dot(a, st.lineality[i]) / al0;
        newlin.push_back(vec_sub(st.lineality[i], vec_scale(c, l0)));
      }
      for (DDRay& r : st.rays) {
        Rat c = dot(a, r.v) / al0;
        r.v = vec_sub(r.v, vec_scale(c, l0));
        if (!vec_is_zero(r.v)) r.v = primitive_ray(r.v);
        r.tight.insert(k);
      }
      DDRay nr;
      nr.v = primitive_ray(l0);
      for (int i = 0; i < k; ++i) nr.tight.insert(i);
      st.rays.push_back(nr);
      st.lineality = newlin;
      continue;
    }
    std::vector<DDRay> pos, zero, neg;
    for (DDRay& r : st.rays) {
      Rat val = dot(a, r.v);
      if (val > 0) {
        pos.push_back(r);
      } else if (val == 0) {
        r.tight.insert(k);
        zero.push_back(r);
      } else {
        neg.push_back(r);
      }
    }
    if (neg.empty()) {
      st.rays.clear();
      for (DDRay& r : pos) st.rays.push_back(r);
      for (DDRay& r : zero) st.rays.push_back(r);
      continue;
    }
    auto adjacent = [&](const DDRay& p, const DDRay& n) {
      std::set<int> t;
      std::set_intersection(p.tight.begin(), p.tight.end(), n.tight.begin(), n.tight.end(),
                            std::inserter(t, t.begin()));
      for (const DDRay& r : st.rays) {
        if (r.v == p.v || r.v == n.v) continue;
        if (std::includes(r.tight.begin(), r.tight.end(), t.begin(), t.end())) return false;
      }
      return true;
    };
    std::vector<DDRay> next = pos;
    for (DDRay& r : next) {
      (void)r;  // tight sets of strictly positive rays are unchanged
    }
    for (const DDRay& r : zero) next.push_back(r);
    for (const DDRay& p : pos) {
      for (const DDRay& n : neg) {
        if (!adjacent(p, n)) continue;
        Rat ap = dot(a, p.v);
        Rat an = dot(a, n.v);
        Vec<Rat> w = vec_sub(vec_scale(ap, n.v), vec_scale(an, p.v));
        if (vec_is_zero(w)) continue;
        w = primitive_ray(w);
        bool dup = false;
        for (const DDRay& r : next) {
          if (r.v == w) {
            dup = true;
            break;
          }
        }
        if (dup) continue;
        DDRay nr;
        nr.v = w;
        for (int i = 0; i <= k; ++i) {
          if (dot(rows[static_cast<std::size_t>(i)], w) == 0) nr.tight.insert(i);
        }
        next.push_back(nr);
      }
    }
    st.rays = next;
  }
  std::sort(st.rays.begin(), st.rays.end(),
            [](const DDRay& x, const DDRay& y) { return vec_lex_compare(x.v, y.v) < 0; });
  return st;
}

struct CellRays {
  std::vector<Vec<Rat>> lineality;
  std::vector<Vec<Rat>> rays;
};

CellRays cell_rays(const std::vector<Vec<Rat>>& eqs, const std::vector<Vec<Rat>>& ineqs, int d) {
  std::vector<Vec<Rat>> rows;
  for (const Vec<Rat>& e : eqs) {
    rows.push_back(e);
    Vec<Rat> ne = e;
    for (Rat& x : ne) x = -x;
    rows.push_back(ne);
  }
  for (const Vec<Rat>& f : ineqs) rows.push_back(f);
  DDResult dd = double_description(rows, d);
  CellRays out;
  out.lineality = dd.lineality;
  for (const DDRay& r : dd.rays) out.rays.push_back(r.v);
  return out;
}

// A cell {eqs = 0, ineqs > 0} is nonempty iff the sum of the extreme rays of
// its closure satisfies every strict form.
bool cell_feasible(const CellRays& cell, const std::vector<Vec<Rat>>& ineqs, int d) {
  Vec<Rat> s(static_cast<std::size_t>(d), Rat(0));
  for (const Vec<Rat>& r : cell.rays) s = vec_add(s, r);
  for (const Vec<Rat>& f : ineqs) {
    if (!(dot(f, s) > 0)) return false;
  }
  return true;
}

}  // namespace

Cone Cone::from_generators(const std::vector<Vec<Rat>>& gens, int ambient) {
  Cone c;
  c.ambient = ambient;
  for (const Vec<Rat>& g : gens) {
    if (static_cast<int>(g.size()) != ambient) {
      throw std::invalid_argument("generator/ambient mismatch");
    }
    if (vec_is_zero(g)) throw std::invalid_argument("zero vector is not a cone generator");
  }
  if (gens.empty()) {
    for (int i = 0; i < ambient; ++i) {
      Vec<Rat> e(static_cast<std::size_t>(ambient), Rat(0));
      e[static_cast<std::size_t>(i)] = Rat(1);
      c.h.equalities.push_back(e);
    }
    return c;
  }
  Subspace<Rat> span = Subspace<Rat>::from_vectors(gens, ambient);
  const Mat<Rat>& s = span.basis;
  const int sd = s.rows;
  // Coordinate chart of the span: coords(v) = (S S^T)^{-1} S v.
  Mat<Rat> gram = s * s.transpose();
  Mat<Rat> gram_inv;
  if (!mat_inverse(gram, gram_inv)) throw std::logic_error("span gram matrix singular");
  Mat<Rat> chart = gram_inv * s;  // sd x ambient
  std::vector<Vec<Rat>> gcoords;
  for (const Vec<Rat>& g : gens) gcoords.push_back(mat_vec(chart, g));
  DDResult dual = double_description(gcoords, sd);
  if (!dual.lineality.empty()) throw std::logic_error("dual cone has unexpected lineality");
  std::vector<Vec<Rat>> facet_forms;
  for (const DDRay& r : dual.rays) facet_forms.push_back(r.v);
  DDResult primal = double_description(facet_forms, sd);
  if (!primal.lineality.empty()) {
    throw std::invalid_argument("generators span a non-pointed cone");
  }
  for (const DDRay& r : primal.rays) {
    Vec<Rat> lift(static_cast<std::size_t>(ambient), Rat(0));
    for (int i = 0; i < sd; ++i) {
      lift = vec_add(lift, vec_scale(r.v[static_cast<std::size_t>(i)], s.row(i)));
    }
    c.generators.push_back(primitive_ray(lift));
  }
  std::sort(c.generators.begin(), c.generators.end(),
            [](const Vec<Rat>& x, const Vec<Rat>& y) { return vec_lex_compare(x, y) < 0; });
  c.generators.erase(std::unique(c.generators.begin(), c.generators.end()), c.generators.end());
  // hrep: span equalities from the annihilator, facet forms lifted through
  // the chart.
  Subspace<Rat> ann = kernel_subspace(s);
  for (int i = 0; i < ann.basis.rows; ++i) {
    c.h.equalities.push_back(sign_canonical(ann.basis.row(i)));
  }
  for (const Vec<Rat>& g : facet_forms) {
    Vec<Rat> lifted(static_cast<std::size_t>(ambient), Rat(0));
    for (int i = 0; i < sd; ++i) {
      lifted = vec_add(lifted, vec_scale(g[static_cast<std::size_t>(i)], chart.row(i)));
    }
    c.h.inequalities.push_back(primitive_ray(lifted));
  }
  std::sort(c.h.inequalities.begin(), c.h.inequalities.end(),
            [](const Vec<Rat>& x, const Vec<Rat>& y) { return vec_lex_compare(x, y) < 0; });
  return c;
}

int Cone::dim() const {
  if (generators.empty()) return 0;
  return Subspace<Rat>::from_vectors(generators, ambient).dim();
}

Vec<Rat> Cone::interior_point() const {
  Vec<Rat> s(static_cast<std::size_t>(ambient), Rat(0));
  for (const Vec<Rat>& g : generators) s = vec_add(s, g);
  return s;
}

bool Cone::relint_contains(const Vec<Rat>& v) const {
  for (const Vec<Rat>& e : h.equalities) {
    if (dot(e, v) != 0) return false;
  }
  for (const Vec<Rat>& f : h.inequalities) {
    if (!(dot(f, v) > 0)) return false;
  }
  return true;
}

bool Cone::closure_contains(const Vec<Rat>& v) const {
  for (const Vec<Rat>& e : h.equalities) {
    if (dot(e, v) != 0) return false;
  }
  for (const Vec<Rat>& f : h.inequalities) {
    if (dot(f, v) < 0) return false;
  }
  return true;
}

bool cone_less(const Cone& a, const Cone& b) {
  if (a.dim() != b.dim()) return a.dim() < b.dim();
  if (a.generators.size() != b.generators.size()) {
    return a.generators.size() < b.generators.size();
  }
  for (std::size_t i = 0; i < a.generators.size(); ++i) {
    int c = vec_lex_compare(a.generators[i], b.generators[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

bool ConeComplex::contains(const Cone& c) const {
  for (const Cone& x : cones) {
    if (x == c) return true;
  }
  return false;
}

void ConeComplex::canonicalize() {
  std::sort(cones.begin(), cones.end(), cone_less);
  cones.erase(std::unique(cones.begin(), cones.end()), cones.end());
}

const HRep& hrep(const Cone& c) { return c.h; }

std::optional<Cone> intersect_cones(const Cone& a, const Cone& b) {
  if (a.ambient != b.ambient) throw std::invalid_argument("ambient mismatch in intersection");
  std::vector<Vec<Rat>> eqs = a.h.equalities;
  eqs.insert(eqs.end(), b.h.equalities.begin(), b.h.equalities.end());
  std::vector<Vec<Rat>> ineqs = a.h.inequalities;
  ineqs.insert(ineqs.end(), b.h.inequalities.begin(), b.h.inequalities.end());
  return cone_from_strict_system(a.ambient, eqs, ineqs);
}

std::optional<Cone> cone_from_strict_system(int ambient, const std::vector<Vec<Rat>>& eqs,
                                            const std::vector<Vec<Rat>>& ineqs) {
  CellRays cell = cell_rays(eqs, ineqs, ambient);
  if (!cell_feasible(cell, ineqs, ambient)) return std::nullopt;
  if (!cell.lineality.empty()) {
    throw std::logic_error("strict system solution set contains a line");
  }
  return Cone::from_generators(cell.rays, ambient);
}

ConeComplex faces(const Cone& c) {
  ConeComplex out;
  out.ambient = c.ambient;
  std::vector<Cone> stack{c};
  out.cones.push_back(c);
  while (!stack.empty()) {
    Cone cur = stack.back();
    stack.pop_back();
    for (const Vec<Rat>& f : cur.h.inequalities) {
      std::vector<Vec<Rat>> tight;
      for (const Vec<Rat>& g : cur.generators) {
        if (dot(f, g) == 0) tight.push_back(g);
      }
      Cone face = Cone::from_generators(tight, c.ambient);
      if (!out.contains(face)) {
        out.cones.push_back(face);
        stack.push_back(face);
      }
    }
  }
  out.canonicalize();
  return out;
}

ConeComplex face_closure(const ConeComplex& complex) {
  ConeComplex out;
  out.ambient = complex.ambient;
  for (const Cone& c : complex.cones) {
    ConeComplex fc = faces(c);
    for (const Cone& f : fc.cones) out.cones.push_back(f);
  }
  out.canonicalize();
  return out;
}

ConeComplex star_subdivision(const Cone& c, const Vec<Rat>& ray_in) {
  if (static_cast<int>(ray_in.size()) != c.ambient || vec_is_zero(ray_in)) {
    throw RayOutsideError("subdivision ray must be a nonzero ambient vector");
  }
  Vec<Rat> ray = primitive_ray(ray_in);
  if (!c.closure_contains(ray)) {
    throw RayOutsideError("subdivision ray lies outside the closed cone");
  }
  ConeComplex fc = faces(c);
  ConeComplex out;
  out.ambient = c.ambient;
  for (const Cone& face : fc.cones) {
    if (face.closure_contains(ray)) continue;
    out.cones.push_back(face);
    std::vector<Vec<Rat>> gens = face.generators;
    gens.push_back(ray);
    out.cones.push_back(Cone::from_generators(gens, c.ambient));
  }
  out.canonicalize();
  return out;
}

ConeComplex chamber_subdivision(const ConeComplex& complex) {
  for (std::size_t i = 0; i < complex.cones.size(); ++i) {
    ConeComplex fc = faces(complex.cones[i]);
    for (const Cone& f : fc.cones) {
      if (!complex.contains(f)) {
        throw NotFaceClosedError("input cone " + std::to_string(i) +
                                 " has a face missing from the complex");
      }
    }
  }
  const int d = complex.ambient;
  std::vector<Vec<Rat>> forms;
  auto add_form = [&](const Vec<Rat>& f) {
    Vec<Rat> canon = sign_canonical(f);
    for (const Vec<Rat>& g : forms) {
      if (g == canon) return;
    }
    forms.push_back(canon);
  };
  for (const Cone& c : complex.cones) {
    for (const Vec<Rat>& e : c.h.equalities) add_form(e);
    for (const Vec<Rat>& f : c.h.inequalities) add_form(f);
  }
  std::sort(forms.begin(), forms.end(),
            [](const Vec<Rat>& x, const Vec<Rat>& y) { return vec_lex_compare(x, y) < 0; });
  const int m = static_cast<int>(forms.size());

  // Sign requirements per input cone: 0 for its equalities, +/- for its
  // facet forms, free otherwise.
  struct Req {
    std::map<int, int> sign;  // form index -> required sign
  };
  std::vector<Req> reqs;
  for (const Cone& c : complex.cones) {
    Req r;
    for (const Vec<Rat>& e : c.h.equalities) {
      Vec<Rat> canon = sign_canonical(e);
      for (int i = 0; i < m; ++i) {
        if (forms[static_cast<std::size_t>(i)] == canon) r.sign[i] = 0;
      }
    }
    for (const Vec<Rat>& f : c.h.inequalities) {
      Vec<Rat> canon = sign_canonical(f);
      int want = canon == primitive_ray(f) ? 1 : -1;
      for (int i = 0; i < m; ++i) {
        if (forms[static_cast<std::size_t>(i)] == canon) r.sign[i] = want;
      }
    }
    reqs.push_back(std::move(r));
  }

  ConeComplex out;
  out.ambient = d;
  std::vector<int> signs(static_cast<std::size_t>(m), 0);
  std::vector<Vec<Rat>> eqs, ineqs;

  auto cone_alive = [&](std::size_t ci, int depth) {
    for (const auto& [idx, want] : reqs[ci].sign) {
      if (idx < depth && signs[static_cast<std::size_t>(idx)] != want) return false;
    }
    return true;
  };

  std::function<void(int)> walk = [&](int depth) {
    CellRays cell = cell_rays(eqs, ineqs, d);
    if (!cell_feasible(cell, ineqs, d)) return;
    bool any_alive = false;
    for (std::size_t ci = 0; ci < reqs.size(); ++ci) {
      if (cone_alive(ci, depth)) {
        any_alive = true;
        break;
      }
    }
    if (!any_alive) return;
    if (depth == m) {
      if (!cell.lineality.empty()) {
        throw std::logic_error("support chamber has lineality");
      }
      out.cones.push_back(Cone::from_generators(cell.rays, d));
      return;
    }
    const Vec<Rat>& f = forms[static_cast<std::size_t>(depth)];
    Vec<Rat> nf = f;
    for (Rat& x : nf) x = -x;
    signs[static_cast<std::size_t>(depth)] = 1;
    ineqs.push_back(f);
    walk(depth + 1);
    ineqs.pop_back();
    signs[static_cast<std::size_t>(depth)] = -1;
    ineqs.push_back(nf);
    walk(depth + 1);
    ineqs.pop_back();
    signs[static_cast<std::size_t>(depth)] = 0;
    eqs.push_back(f);
    walk(depth + 1);
    eqs.pop_back();
  };
  walk(0);
  out.canonicalize();
  FanDecision fd = is_fan(out);
  if (!fd.ok) throw std::logic_error("chamber subdivision failed to produce a fan: " + fd.detail);
  return out;
}

FanDecision is_fan(const ConeComplex& complex) {
  FanDecision dec;
  for (std::size_t i = 0; i < complex.cones.size(); ++i) {
    ConeComplex fc = faces(complex.cones[i]);
    for (const Cone& f : fc.cones) {
      if (!complex.contains(f)) {
        dec.ok = false;
        dec.first = static_cast<int>(i);
        dec.detail = "cone " + std::to_string(i) + " has a face missing from the complex";
        return dec;
      }
    }
  }
  for (std::size_t i = 0; i < complex.cones.size(); ++i) {
    for (std::size_t j = i + 1; j < complex.cones.size(); ++j) {
      if (complex.cones[i] == complex.cones[j]) continue;
      if (intersect_cones(complex.cones[i], complex.cones[j]).has_value()) {
        dec.ok = false;
        dec.first = static_cast<int>(i);
        dec.second = static_cast<int>(j);
        dec.detail = "cones " + std::to_string(i) + " and " + std::to_string(j) +
                     " have distinct relative interiors that meet";
        return dec;
      }
    }
  }
  return dec;
}

NilpotentCone transport_cone(const Mat<Rat>& gamma, const Mat<Rat>& q,
                             const NilpotentCone& cone) {
  if (!mat_is_integral(gamma)) {
    throw FormNotPreservedError("transport element is not integral");
  }
  if (!preserves_form(gamma, q)) {
    throw FormNotPreservedError("transport element does not preserve the form");
  }
  Mat<Rat> inv;
  if (!mat_inverse(gamma, inv)) {
    throw FormNotPreservedError("transport element is singular");
  }
  NilpotentCone out;
  for (const Mat<Rat>& n : cone.generators) out.generators.push_back(gamma * n * inv);
  return out;
}

Mat<Rat> AmbientSpan::to_matrix(const Vec<Rat>& coords) const {
  if (coords.size() != basis.size()) throw std::invalid_argument("coordinate length mismatch");
  Mat<Rat> m(matrix_size(), matrix_size());
  for (std::size_t i = 0; i < basis.size(); ++i) m = m + coords[i] * basis[i];
  return m;
}

bool AmbientSpan::try_coords(const Mat<Rat>& m, Vec<Rat>& out) const {
  const int n2 = matrix_size() * matrix_size();
  Mat<Rat> cols(n2, dim());
  for (int j = 0; j < dim(); ++j) {
    for (int k = 0; k < n2; ++k) cols.at(k, j) = basis[static_cast<std::size_t>(j)].a[static_cast<std::size_t>(k)];
  }
  Vec<Rat> rhs(static_cast<std::size_t>(n2));
  for (int k = 0; k < n2; ++k) rhs[static_cast<std::size_t>(k)] = m.a[static_cast<std::size_t>(k)];
  if (!mat_solve(cols, rhs, out)) return false;
  return to_matrix(out) == m;
}

Vec<Rat> AmbientSpan::to_coords(const Mat<Rat>& m) const {
  Vec<Rat> out;
  if (!try_coords(m, out)) throw std::domain_error("matrix lies outside the ambient span");
  return out;
}

AmbientSpan AmbientSpan::from_matrices(const std::vector<Mat<Rat>>& mats) {
  AmbientSpan span;
  if (mats.empty()) return span;
  const int n = mats.front().rows;
  Subspace<Rat> seen = Subspace<Rat>::zero(n * n);
  for (const Mat<Rat>& m : mats) {
    Vec<Rat> flat(m.a.begin(), m.a.end());
    if (seen.contains(flat)) continue;
    seen = sum(seen, Subspace<Rat>::from_vectors({flat}, n * n));
    span.basis.push_back(m);
  }
  return span;
}

Cone embed_cone(const AmbientSpan& span, const NilpotentCone& nc) {
  std::vector<Vec<Rat>> coords;
  for (const Mat<Rat>& g : nc.generators) coords.push_back(span.to_coords(g));
  return Cone::from_generators(coords, span.dim());
}

}  // namespace hodgefan
