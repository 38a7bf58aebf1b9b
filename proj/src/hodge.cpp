#include "hodgefan/hodge.hpp"

#include <sstream>

namespace hodgefan {

namespace {

std::string pq_str(int p, int q) {
  return "(" + std::to_string(p) + "," + std::to_string(q) + ")";
}

}  // namespace

std::vector<std::pair<int, int>> DeligneSplitting::support() const {
  std::vector<std::pair<int, int>> s;
  for (const auto& [pq, sub] : components) {
    if (sub.dim() > 0) s.push_back(pq);
  }
  return s;
}

DeligneSplitting deligne_splitting(const WeightFiltration& w, const HodgeFiltration& f) {
  const int n = w.ambient();
  if (f.ambient() != n) throw std::invalid_argument("filtration ambient mismatch");
  DeligneSplitting out;
  out.ambient = n;
  auto wc = [&](int k) { return promote_subspace(w.at(k)); };
  const int plo = f.lo;
  for (int p = plo; p <= f.top_index(); ++p) {
    for (int m = w.lo; m <= w.top_index(); ++m) {
      const int q = m - p;
      Subspace<GaussRat> second = intersect(conj_subspace(f.at(q)), wc(m));
      for (int j = 1;; ++j) {
        Subspace<GaussRat> wpart = wc(m - j - 1);
        if (q - j < plo) {
          // conj F^{q-j} is the full space from here on, and the later
          // W-terms are contained in this one, so it closes the sum.
          second = sum(second, wpart);
          break;
        }
        if (wpart.dim() == 0) break;
        second = sum(second, intersect(conj_subspace(f.at(q - j)), wpart));
      }
      Subspace<GaussRat> ipq = intersect(intersect(f.at(p), wc(m)), second);
      if (ipq.dim() > 0) out.components[{p, q}] = ipq;
    }
  }
  int total = 0;
  std::vector<Vec<GaussRat>> allrows;
  for (const auto& [pq, sub] : out.components) {
    total += sub.dim();
    for (int i = 0; i < sub.basis.rows; ++i) allrows.push_back(sub.basis.row(i));
  }
  Subspace<GaussRat> joint = Subspace<GaussRat>::from_vectors(allrows, n);
  if (total != n || joint.dim() != n) {
    throw NotMHSError("components do not direct-sum to the full space (total " +
                      std::to_string(total) + ", span " + std::to_string(joint.dim()) +
                      ", ambient " + std::to_string(n) + ")");
  }
  for (int k = w.lo - 1; k <= w.top_index(); ++k) {
    Subspace<GaussRat> acc = Subspace<GaussRat>::zero(n);
    for (const auto& [pq, sub] : out.components) {
      if (pq.first + pq.second <= k) acc = sum(acc, sub);
    }
    if (acc != wc(k)) {
      throw NotMHSError("weight step W_" + std::to_string(k) +
                        " is not the sum of its splitting components");
    }
  }
  for (int p = plo; p <= f.top_index() + 1; ++p) {
    Subspace<GaussRat> acc = Subspace<GaussRat>::zero(n);
    for (const auto& [pq, sub] : out.components) {
      if (pq.first >= p) acc = sum(acc, sub);
    }
    if (acc != f.at(p)) {
      throw NotMHSError("hodge step F^" + std::to_string(p) +
                        " is not the sum of its splitting components");
    }
  }
  return out;
}

PolarizationReport is_polarized_mhs(const WeightFiltration& w, const HodgeFiltration& f,
                                    const Mat<Rat>& n, int l, const Mat<Rat>& q) {
  PolarizationReport rep;
  WeightFiltration wn = jm_weight_filtration(n).shifted(l);
  const bool w_ok = wn == w;
  rep.checks.push_back({"weight_filtration_match", w_ok,
                        w_ok ? "" : "supplied W differs from the JM filtration of N centered at " +
                                        std::to_string(l)});

  Mat<GaussRat> nc = promote(n);
  bool t_ok = true;
  std::string t_detail;
  for (int p = f.lo; p <= f.top_index(); ++p) {
    if (!f.at(p - 1).contains(apply_map(nc, f.at(p)))) {
      t_ok = false;
      t_detail = "N F^" + std::to_string(p) + " is not inside F^" + std::to_string(p - 1);
      break;
    }
  }
  rep.checks.push_back({"transversality", t_ok, t_detail});

  auto skip_rest = [&](const std::string& why) {
    rep.checks.push_back({"graded_hodge_decomposition", false, why});
    rep.checks.push_back({"primitive_first_relation", false, "not evaluated: " + why});
    rep.checks.push_back({"primitive_positivity", false, "not evaluated: " + why});
  };

  if (!w_ok) {
    skip_rest("weight filtration mismatch");
    rep.ok = false;
    return rep;
  }

  DeligneSplitting split;
  try {
    split = deligne_splitting(w, f);
  } catch (const NotMHSError& e) {
    skip_rest(std::string("splitting failed: ") + e.what());
    rep.ok = false;
    return rep;
  }

  bool g_ok = true;
  std::string g_detail;
  for (const auto& [pq, sub] : split.components) {
    Subspace<GaussRat> wlow = promote_subspace(w.at(pq.first + pq.second - 1));
    auto it = split.components.find({pq.second, pq.first});
    Subspace<GaussRat> mirror =
        it == split.components.end() ? Subspace<GaussRat>::zero(split.ambient) : it->second;
    if (sum(conj_subspace(sub), wlow) != sum(mirror, wlow)) {
      g_ok = false;
      g_detail = "conj(I^" + pq_str(pq.first, pq.second) + ") does not match I^" +
                 pq_str(pq.second, pq.first) + " modulo lower weight";
      break;
    }
  }
  rep.checks.push_back({"graded_hodge_decomposition", g_ok, g_detail});

  bool fr_ok = true;
  std::string fr_detail;
  bool pos_ok = true;
  std::string pos_detail;
  Mat<GaussRat> qc = promote(q);
  for (int k = 0; l + k <= w.top_index(); ++k) {
    const int m = l + k;
    Mat<GaussRat> nk = mat_pow(nc, k);
    Mat<GaussRat> nk1 = nk * nc;
    Subspace<GaussRat> wtarget = promote_subspace(w.at(l - k - 3));
    struct Tagged {
      int p;
      int q;
      Vec<GaussRat> v;
    };
    std::vector<Tagged> basis;
    for (const auto& [pq, sub] : split.components) {
      if (pq.first + pq.second != m) continue;
      Subspace<GaussRat> prim = intersect(sub, preimage(nk1, wtarget));
      for (int i = 0; i < prim.basis.rows; ++i) {
        basis.push_back({pq.first, pq.second, prim.basis.row(i)});
      }
    }
    if (basis.empty()) continue;
    const int d = static_cast<int>(basis.size());

    // First bilinear relation: Q_k pairs primitive blocks to zero whenever
    // p + p' >= m + 1.
    for (int a = 0; a < d && fr_ok; ++a) {
      for (int b = 0; b < d && fr_ok; ++b) {
        if (basis[static_cast<std::size_t>(a)].p + basis[static_cast<std::size_t>(b)].p < m + 1) {
          continue;
        }
        Vec<GaussRat> qnb = mat_vec(qc * nk, basis[static_cast<std::size_t>(b)].v);
        GaussRat val(0);
        for (std::size_t i = 0; i < qnb.size(); ++i) {
          val += basis[static_cast<std::size_t>(a)].v[i] * qnb[i];
        }
        if (!val.is_zero()) {
          fr_ok = false;
          fr_detail = "Q_" + std::to_string(k) + " does not vanish on F-orthogonal primitive blocks " +
                      pq_str(basis[static_cast<std::size_t>(a)].p, basis[static_cast<std::size_t>(a)].q) +
                      " x " +
                      pq_str(basis[static_cast<std::size_t>(b)].p, basis[static_cast<std::size_t>(b)].q);
        }
      }
    }

    // gram(a,b) = (C v_a)^T qc nk conj(v_b), C the Weil scalar i^{p-q}.
    Mat<GaussRat> gram(d, d);
    for (int a = 0; a < d; ++a) {
      const Tagged& ta = basis[static_cast<std::size_t>(a)];
      GaussRat weil = gauss_i_pow(ta.p - ta.q);
      for (int b = 0; b < d; ++b) {
        Vec<GaussRat> vb(basis[static_cast<std::size_t>(b)].v.size());
        for (std::size_t i = 0; i < vb.size(); ++i) {
          vb[i] = scalar_conj(basis[static_cast<std::size_t>(b)].v[i]);
        }
        Vec<GaussRat> rhs = mat_vec(qc * nk, vb);
        GaussRat val(0);
        for (std::size_t i = 0; i < rhs.size(); ++i) val += ta.v[i] * rhs[i];
        GaussRat v2 = weil * val;
        gram.at(a, b) = v2;
      }
    }
    if (!(gram == gram.conjugate().transpose())) {
      fr_ok = false;
      if (fr_detail.empty()) {
        fr_detail = "Hermitian Gram of Q_" + std::to_string(k) + " is not conjugate-symmetric";
      }
    }
    if (fr_ok) {
      for (int t = 1; t <= d && pos_ok; ++t) {
        Mat<GaussRat> minor(t, t);
        for (int a = 0; a < t; ++a) {
          for (int b = 0; b < t; ++b) minor.at(a, b) = gram.at(a, b);
        }
        GaussRat det = mat_det(minor);
        if (!(det.im == 0 && det.re > 0)) {
          pos_ok = false;
          pos_detail = "leading principal minor " + std::to_string(t) + " of the Q_" +
                       std::to_string(k) + " Gram matrix is " + gauss_to_string(det) +
                       ", not positive";
        }
      }
    } else if (pos_ok) {
      pos_ok = false;
      pos_detail = "not evaluated: first bilinear relation failed at k = " + std::to_string(k);
    }
  }
  rep.checks.push_back({"primitive_first_relation", fr_ok, fr_detail});
  rep.checks.push_back({"primitive_positivity", pos_ok, pos_detail});

  rep.ok = true;
  for (const SubCheck& c : rep.checks) rep.ok = rep.ok && c.ok;
  return rep;
}

OrbitReport is_nilpotent_orbit(const NilpotentCone& cone, const HodgeFiltration& f, int l,
                               const Mat<Rat>& q) {
  OrbitReport rep;
  cone.validate(&q);
  WeightFiltration w;
  try {
    w = cone_weight_filtration(cone).shifted(l);
  } catch (const InteriorDisagreementError& e) {
    rep.ok = false;
    rep.polarization.ok = false;
    rep.polarization.checks.push_back({"weight_filtration_match", false, e.what()});
    return rep;
  }
  bool all_t = true;
  for (std::size_t i = 0; i < cone.generators.size(); ++i) {
    Mat<GaussRat> nc = promote(cone.generators[i]);
    bool ok = true;
    std::string detail;
    for (int p = f.lo; p <= f.top_index(); ++p) {
      if (!f.at(p - 1).contains(apply_map(nc, f.at(p)))) {
        ok = false;
        detail = "generator " + std::to_string(i) + ": N F^" + std::to_string(p) +
                 " is not inside F^" + std::to_string(p - 1);
        break;
      }
    }
    rep.transversality.push_back({"transversality[" + std::to_string(i) + "]", ok, detail});
    all_t = all_t && ok;
  }
  rep.polarization = is_polarized_mhs(w, f, cone.interior_point(), l, q);
  rep.ok = all_t && rep.polarization.ok;
  return rep;
}

std::string LMHSType::tag() const {
  switch (kind) {
    case LMHSKind::Pure: return "pure";
    case LMHSKind::HodgeTate: return "HT";
    case LMHSKind::I: return "I_" + std::to_string(a);
    case LMHSKind::II: return "II";
    case LMHSKind::III: return "III";
    case LMHSKind::IV: return "IV_" + std::to_string(a);
    case LMHSKind::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

using Table = std::map<std::pair<int, int>, int>;

Table splitting_table(const DeligneSplitting& s) {
  Table t;
  for (const auto& [pq, sub] : s.components) {
    if (sub.dim() > 0) t[pq] = sub.dim();
  }
  return t;
}

Table drop_zeros(Table t) {
  for (auto it = t.begin(); it != t.end();) {
    if (it->second == 0) {
      it = t.erase(it);
    } else {
      ++it;
    }
  }
  return t;
}

}  // namespace

LMHSType classify_splitting(const DeligneSplitting& s, const SymplecticLattice& lattice) {
  Table t = splitting_table(s);
  LMHSType out;
  for (const auto& [pq, d] : t) out.h_table.push_back({pq, d});
  const int l = lattice.weight;
  if (l == 1) {
    const int g = lattice.hodge_number(1);
    const int a = s.h(1, 1);
    Table tpl = drop_zeros({{{1, 1}, a}, {{0, 0}, a}, {{1, 0}, g - a}, {{0, 1}, g - a}});
    if (t == tpl && a >= 0 && a <= g) {
      if (a == 0) {
        out.kind = LMHSKind::Pure;
      } else if (a == g) {
        out.kind = LMHSKind::HodgeTate;
        out.a = a;
      } else {
        out.kind = LMHSKind::I;
        out.a = a;
      }
      return out;
    }
    out.kind = LMHSKind::Unknown;
    return out;
  }
  const int h = lattice.hodge_number(2);
  {
    Table tpl = drop_zeros({{{3, 0}, 1}, {{0, 3}, 1}, {{2, 1}, h}, {{1, 2}, h}});
    if (t == tpl) {
      out.kind = LMHSKind::Pure;
      return out;
    }
  }
  if (s.h(3, 0) == 1) {
    const int a = s.h(2, 2);
    Table tpl = drop_zeros({{{3, 0}, 1},
                            {{0, 3}, 1},
                            {{2, 2}, a},
                            {{1, 1}, a},
                            {{2, 1}, h - a},
                            {{1, 2}, h - a}});
    if (t == tpl && a >= 1 && a <= h) {
      out.kind = LMHSKind::I;
      out.a = a;
      return out;
    }
  }
  if (s.h(0, 0) == 1) {
    const int a = s.h(1, 1);
    Table tpl = drop_zeros({{{3, 3}, 1},
                            {{0, 0}, 1},
                            {{2, 2}, a},
                            {{1, 1}, a},
                            {{2, 1}, h - a},
                            {{1, 2}, h - a}});
    if (t == tpl && a >= 1 && a <= h) {
      out.kind = LMHSKind::IV;
      out.a = a;
      return out;
    }
  }
  if (s.h(2, 0) == 1) {
    const int c = s.h(2, 2);
    Table tpl = drop_zeros({{{3, 1}, 1},
                            {{1, 3}, 1},
                            {{2, 0}, 1},
                            {{0, 2}, 1},
                            {{2, 2}, c},
                            {{1, 1}, c},
                            {{2, 1}, h - 1 - c},
                            {{1, 2}, h - 1 - c}});
    if (t == tpl && c >= 0 && c <= h - 1) {
      out.kind = LMHSKind::II;
      out.a = c;
      return out;
    }
  }
  if (s.h(1, 0) == 1) {
    const int b = s.h(2, 2);
    Table tpl = drop_zeros({{{3, 2}, 1},
                            {{2, 3}, 1},
                            {{1, 0}, 1},
                            {{0, 1}, 1},
                            {{2, 2}, b},
                            {{1, 1}, b},
                            {{2, 1}, h - 1 - b},
                            {{1, 2}, h - 1 - b}});
    if (t == tpl && b >= 0 && b <= h - 1) {
      out.kind = LMHSKind::III;
      out.a = b;
      return out;
    }
  }
  out.kind = LMHSKind::Unknown;
  return out;
}

LMHSType classify_lmhs(const NilpotentCone& cone, const HodgeFiltration& f,
                       const SymplecticLattice& lattice, std::uint64_t seed) {
  WeightFiltration w = cone_weight_filtration(cone, seed).shifted(lattice.weight);
  DeligneSplitting s = deligne_splitting(w, f);
  return classify_splitting(s, lattice);
}

}  // namespace hodgefan
