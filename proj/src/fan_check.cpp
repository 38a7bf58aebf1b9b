#include "hodgefan/fan_check.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <utility>

#include "hodgefan/exact_core.hpp"
#include "hodgefan/reductions.hpp"

namespace hodgefan {

namespace {

std::string fmt_mat(const Mat<Rat>& m) {
  auto rows = mat_to_strings(m);
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << (i ? ", [" : "[");
    for (std::size_t j = 0; j < rows[i].size(); ++j) out << (j ? ", " : "") << rows[i][j];
    out << "]";
  }
  out << "]";
  return out.str();
}

std::string fmt_vec(const Vec<GaussRat>& v) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << gauss_to_string(v[i]);
  out << "]";
  return out.str();
}

// Equality of matrix cones as subsets of the ambient matrix space.
bool same_matrix_cone(const NilpotentCone& a, const NilpotentCone& b) {
  if (a.generators.empty() || b.generators.empty())
    return a.generators.empty() && b.generators.empty();
  std::vector<Mat<Rat>> pool = a.generators;
  pool.insert(pool.end(), b.generators.begin(), b.generators.end());
  AmbientSpan span = AmbientSpan::from_matrices(pool);
  return embed_cone(span, a) == embed_cone(span, b);
}

// Does the closure of the matrix cone contain the matrix?
bool closure_contains_matrix(const NilpotentCone& c, const Mat<Rat>& m) {
  if (m.is_zero()) return true;
  if (c.generators.empty()) return false;
  AmbientSpan span = AmbientSpan::from_matrices(c.generators);
  Vec<Rat> coords;
  if (!span.try_coords(m, coords)) return false;
  return embed_cone(span, c).closure_contains(coords);
}

// Relative-interior meet of two matrix cones; `interior` is an interior
// matrix of the meet when they do.
struct MatrixMeet {
  bool meets = false;
  Mat<Rat> interior;
};

MatrixMeet matrix_meet(const NilpotentCone& a, const NilpotentCone& b) {
  if (a.generators.empty() && b.generators.empty()) return {true, Mat<Rat>(0, 0)};
  if (a.generators.empty() || b.generators.empty()) return {false, Mat<Rat>(0, 0)};
  std::vector<Mat<Rat>> pool = a.generators;
  pool.insert(pool.end(), b.generators.begin(), b.generators.end());
  AmbientSpan span = AmbientSpan::from_matrices(pool);
  auto meet = intersect_cones(embed_cone(span, a), embed_cone(span, b));
  if (!meet) return {false, Mat<Rat>(0, 0)};
  return {true, span.to_matrix(meet->interior_point())};
}

// The cone generated by the nonzero quotient images of the cone's
// generators, paired with the originals that survive.
struct QuotientImage {
  std::vector<Mat<Rat>> originals;
  std::vector<Mat<Rat>> reduced;
};

QuotientImage quotient_image(const TypeIVQuotient& qm, const NilpotentCone& c) {
  QuotientImage out;
  for (const auto& g : c.generators) {
    Mat<Rat> r = qm.reduce_map(g);
    if (!r.is_zero()) {
      out.originals.push_back(g);
      out.reduced.push_back(r);
    }
  }
  return out;
}

bool equal_matrix_lists_as_cones(const std::vector<Mat<Rat>>& a, const std::vector<Mat<Rat>>& b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty();
  std::vector<Mat<Rat>> pool = a;
  pool.insert(pool.end(), b.begin(), b.end());
  AmbientSpan span = AmbientSpan::from_matrices(pool);
  auto embed = [&span](const std::vector<Mat<Rat>>& ms) {
    std::vector<Vec<Rat>> vs;
    vs.reserve(ms.size());
    for (const auto& m : ms) vs.push_back(span.to_coords(m));
    return Cone::from_generators(vs, span.dim());
  };
  return embed(a) == embed(b);
}

}  // namespace

void GroupElement::validate(const Mat<Rat>& q) const {
  if (name.empty()) throw std::invalid_argument("a witness has an empty name");
  if (!matrix.is_square() || matrix.rows != q.rows)
    throw std::invalid_argument("witness " + name + ": matrix size does not match the lattice");
  if (!mat_is_integral(matrix))
    throw std::invalid_argument("witness " + name + ": matrix is not integral");
  if (!preserves_form(matrix, q))
    throw std::invalid_argument("witness " + name + ": matrix does not preserve the form");
}

void ConeSystem::validate() const {
  lattice.validate();
  std::set<std::string> names;
  for (const auto& nc : generating_cones) {
    if (nc.name.empty()) throw std::invalid_argument("a generating cone has an empty name");
    if (!names.insert(nc.name).second)
      throw std::invalid_argument("duplicate cone name " + nc.name);
    if (nc.cone.generators.empty())
      throw std::invalid_argument("cone " + nc.name +
                                  ": the zero cone is implicit and is never listed");
    for (const auto& g : nc.cone.generators)
      if (!g.is_square() || g.rows != lattice.rank)
        throw std::invalid_argument("cone " + nc.name +
                                    ": generator size does not match the lattice");
    try {
      nc.cone.validate(&lattice.Q);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("cone " + nc.name + ": " + e.what());
    }
  }
  std::set<std::string> wnames;
  for (const auto& w : witnesses) {
    if (!wnames.insert(w.name).second)
      throw std::invalid_argument("duplicate witness name " + w.name);
    w.validate(lattice.Q);
  }
  for (const auto& [cname, f] : orbit_witnesses) {
    if (!find(cname))
      throw std::invalid_argument("orbit witness for unknown cone " + cname);
    try {
      f.validate(lattice);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("orbit witness for " + cname + ": " + e.what());
    }
  }
}

const NamedCone* ConeSystem::find(const std::string& name) const {
  for (const auto& nc : generating_cones)
    if (nc.name == name) return &nc;
  return nullptr;
}

namespace {

BracketCertificate certificate_impl(const NilpotentCone& sigma, const NilpotentCone& tau,
                                    const HodgeFiltration& f_sigma,
                                    const SymplecticLattice& lattice) {
  BracketCertificate cert;
  auto fail = [&cert](const std::string& line) {
    cert.lines.push_back(line);
    return cert;
  };
  if (sigma.generators.empty() || tau.generators.empty())
    return fail("both cones must be nonzero");

  WeightFiltration w = cone_weight_filtration(sigma);
  if (!(cone_weight_filtration(tau) == w))
    return fail("the cones do not induce the same weight filtration");

  std::vector<Mat<Rat>> pool = sigma.generators;
  pool.insert(pool.end(), tau.generators.begin(), tau.generators.end());
  AmbientSpan span = AmbientSpan::from_matrices(pool);
  Cone cs = embed_cone(span, sigma);
  Cone ct = embed_cone(span, tau);
  if (cs == ct) return fail("the cones coincide");
  auto meet = intersect_cones(cs, ct);
  if (!meet) return fail("the relative interiors do not meet");
  Mat<Rat> n3 = span.to_matrix(meet->interior_point());

  std::optional<TypeIVQuotient> qm;
  try {
    qm = type_iv_quotient_map(w, lattice.Q);
  } catch (const WrongShapeError& e) {
    return fail(std::string("the shared weight filtration is not in the quotient shape: ") +
                e.what());
  }
  QuotientImage qs = quotient_image(*qm, sigma);
  QuotientImage qt = quotient_image(*qm, tau);
  if (!equal_matrix_lists_as_cones(qs.reduced, qt.reduced))
    return fail("the quotient images differ");

  // A splitting vector for the top (3,3) component of the limit structure.
  DeligneSplitting ds = deligne_splitting(w.shifted(3), f_sigma);
  auto it = ds.components.find({3, 3});
  if (it == ds.components.end() || it->second.dim() != 1)
    return fail("the limit splitting has no one-dimensional (3,3) component");
  Vec<GaussRat> v = it->second.basis.row(0);

  // N1: an element of one cone outside the other's closure (the interior
  // point if possible, else a generator; roles swap if needed).
  const NilpotentCone* first = &sigma;
  const NilpotentCone* second = &tau;
  auto pick_outside = [](const NilpotentCone& from,
                         const NilpotentCone& avoid) -> std::optional<Mat<Rat>> {
    std::vector<Mat<Rat>> cands;
    cands.push_back(from.interior_point());
    for (const auto& g : from.generators) cands.push_back(g);
    for (const auto& c : cands)
      if (!closure_contains_matrix(avoid, c)) return c;
    return std::nullopt;
  };
  bool swapped = false;
  auto n1o = pick_outside(sigma, tau);
  if (!n1o) {
    n1o = pick_outside(tau, sigma);
    std::swap(first, second);
    swapped = true;
  }
  if (!n1o) return fail("each closure contains the other cone; the cones coincide");
  Mat<Rat> n1 = *n1o;

  // N2: an element of the other cone with the same quotient image.
  const int n = lattice.rank;
  Mat<Rat> r1 = qm->reduce_map(n1);
  Mat<Rat> n2(n, n);
  if (!r1.is_zero()) {
    QuotientImage qi = quotient_image(*qm, *second);
    if (qi.reduced.empty()) return fail("the second cone has no matching element");
    AmbientSpan qspan = AmbientSpan::from_matrices(qi.reduced);
    Vec<Rat> b;
    if (!qspan.try_coords(r1, b)) return fail("the quotient images differ on the chosen element");
    Mat<Rat> a(qspan.dim(), static_cast<int>(qi.reduced.size()));
    for (std::size_t j = 0; j < qi.reduced.size(); ++j) {
      Vec<Rat> col = qspan.to_coords(qi.reduced[j]);
      for (int i = 0; i < a.rows; ++i) a.at(i, static_cast<int>(j)) = col[i];
    }
    Vec<Rat> coeff;
    bool solved = mat_solve(a, b, coeff);
    if (solved)
      for (const auto& c : coeff)
        if (rat_sign(c) < 0) solved = false;
    if (!solved) {
      // Fall back to a single generator positively proportional to r1.
      for (std::size_t j = 0; j < qi.reduced.size() && !solved; ++j) {
        Vec<Rat> rj = qspan.to_coords(qi.reduced[j]);
        Rat lambda;
        bool prop = true;
        bool seen = false;
        for (std::size_t i = 0; i < rj.size() && prop; ++i) {
          if (scalar_is_zero(b[i]) != scalar_is_zero(rj[i])) prop = false;
          else if (!scalar_is_zero(b[i]) && !seen) {
            lambda = rj[i] / b[i];
            seen = true;
          }
        }
        if (!prop || !seen || rat_sign(lambda) <= 0) continue;
        if (vec_scale(Rat(1 / lambda), rj) == b) {
          coeff.assign(qi.reduced.size(), Rat(0));
          coeff[j] = Rat(1 / lambda);
          solved = true;
        }
      }
    }
    if (!solved)
      return fail("no nonnegative combination of the other cone's generators matches the "
                  "chosen element's quotient image");
    for (std::size_t j = 0; j < qi.originals.size(); ++j)
      if (!scalar_is_zero(coeff[j])) n2 = n2 + Rat(coeff[j]) * qi.originals[j];
  }

  Mat<Rat> d = n1 - n2;
  if (d.is_zero()) return fail("the matched elements coincide");

  cert.lines.push_back("shared weight filtration; relative interiors meet; quotient images "
                       "coincide");
  cert.lines.push_back("N1 = " + fmt_mat(n1) + " lies in " +
                       (swapped ? "the second cone" : "the first cone") +
                       " but not in the other closure");
  cert.lines.push_back("N2 = " + fmt_mat(n2) + " lies in the other cone with the same quotient "
                       "image");
  cert.lines.push_back("N3 = " + fmt_mat(n3) + " lies in both relative interiors");
  cert.lines.push_back("v = " + fmt_vec(v) + " spans the (3,3) component of the limit splitting");

  Mat<GaussRat> dz = promote(d);
  Mat<GaussRat> n3z = promote(n3);
  Vec<GaussRat> dv = mat_vec(dz, v);
  Vec<GaussRat> lhs = mat_vec(dz, mat_vec(n3z, v));
  Vec<GaussRat> rhs = mat_vec(n3z, dv);
  if (!(lhs == rhs)) {
    cert.mode = "bracket";
    cert.lines.push_back("(N1 - N2) N3 v != N3 (N1 - N2) v: the difference fails to commute "
                         "with the common interior element on v, although both sides would lie "
                         "in one commuting family for honest data");
  } else if (vec_is_zero(dv)) {
    cert.mode = "duality";
    cert.lines.push_back("(N1 - N2) v = 0: a nonzero difference with zero quotient image also "
                         "annihilating the top vector must vanish, because the form pairs the "
                         "deepest line against the top line nondegenerately");
  } else if (vec_is_zero(mat_vec(n3z, dv))) {
    cert.mode = "interior_injectivity";
    cert.lines.push_back("N3 (N1 - N2) v = 0 while (N1 - N2) v != 0: the common interior "
                         "element annihilates a nonzero vector produced from the top line, "
                         "although the interior action is faithful there for honest data");
  } else {
    return fail("no contradiction was exhibited on the top splitting vector");
  }
  cert.fired = true;
  return cert;
}

}  // namespace

BracketCertificate type_iv_bracket_certificate(const NilpotentCone& sigma,
                                               const NilpotentCone& tau,
                                               const HodgeFiltration& f_sigma,
                                               const SymplecticLattice& lattice) {
  try {
    return certificate_impl(sigma, tau, f_sigma, lattice);
  } catch (const std::exception& e) {
    BracketCertificate cert;
    cert.lines.push_back(std::string("certificate construction failed: ") + e.what());
    return cert;
  }
}

MeetResult btilde_meet(const NilpotentCone& sigma, const std::optional<HodgeFiltration>& f_sigma,
                       const NilpotentCone& tau, const std::optional<HodgeFiltration>& f_tau,
                       const ConeSystem& system) {
  MeetResult r;
  const SymplecticLattice& lat = system.lattice;

  if (same_matrix_cone(sigma, tau)) {
    if (f_sigma && f_tau) {
      r.decision = MeetDecision::Shared;
      r.detail = "identical cones with limit certificates";
    } else {
      r.detail = "identical cones without a limit certificate";
    }
    return r;
  }
  if (sigma.generators.empty() || tau.generators.empty()) {
    r.decision = MeetDecision::No;
    r.detail = "distinct weight filtrations (only the zero cone induces the trivial one)";
    return r;
  }
  WeightFiltration ws = cone_weight_filtration(sigma);
  WeightFiltration wt = cone_weight_filtration(tau);
  if (!(ws == wt)) {
    r.decision = MeetDecision::No;
    r.detail = "distinct weight filtrations";
    return r;
  }
  if (!matrix_meet(sigma, tau).meets) {
    r.detail = "the relative interiors do not meet; the meet criteria apply to meeting pairs";
    return r;
  }
  if (!f_sigma || !f_tau) {
    r.detail = std::string("missing limit certificate for the ") +
               (!f_sigma ? "first" : "second") + " cone";
    return r;
  }

  LMHSType t1, t2;
  try {
    t1 = classify_lmhs(sigma, *f_sigma, lat);
    t2 = classify_lmhs(tau, *f_tau, lat);
  } catch (const std::exception& e) {
    r.detail = std::string("a limit certificate does not define a mixed structure: ") + e.what();
    return r;
  }
  if (!system.phi.empty() &&
      (system.phi.count(t1.tag()) == 0 || system.phi.count(t2.tag()) == 0)) {
    r.detail = "LMHS type " +
               (system.phi.count(t1.tag()) == 0 ? t1.tag() : t2.tag()) +
               " lies outside the admissible type set";
    return r;
  }

  if (lat.weight == 1) {
    r.decision = MeetDecision::Shared;
    r.detail = "meeting weight-1 cones with limit certificates share a limit filtration";
    return r;
  }

  if (t1.kind == LMHSKind::I && t2.kind == LMHSKind::I) {
    r.decision = MeetDecision::Shared;
    r.detail = "meeting type-I cones with limit certificates share a limit filtration";
    return r;
  }
  if (t1.kind == LMHSKind::IV && t2.kind == LMHSKind::IV) {
    try {
      TypeIVQuotient qm = type_iv_quotient_map(ws, lat.Q);
      QuotientImage qa = quotient_image(qm, sigma);
      QuotientImage qb = quotient_image(qm, tau);
      if (!equal_matrix_lists_as_cones(qa.reduced, qb.reduced)) {
        r.decision = MeetDecision::Shared;
        r.detail = "meeting type-IV cones with limit certificates and distinct quotient images "
                   "share a limit filtration";
        return r;
      }
      BracketCertificate cert = type_iv_bracket_certificate(sigma, tau, *f_sigma, lat);
      if (cert.fired) {
        r.decision = MeetDecision::No;
        r.ill_formed = true;
        r.detail = "distinct meeting type-IV cones with equal quotient images are impossible "
                   "for honest data (certificate mode: " + cert.mode + ")";
        r.certificate = cert.lines;
      } else {
        r.detail = "equal quotient images on a distinct meeting pair, but no contradiction "
                   "was exhibited";
        r.certificate = cert.lines;
      }
      return r;
    } catch (const std::exception& e) {
      r.detail = std::string("quotient comparison failed: ") + e.what();
      return r;
    }
  }

  r.detail = "no decision procedure for LMHS types " + t1.tag() + " and " + t2.tag();
  return r;
}

MeetResult btilde_meet(const std::string& sigma, const std::string& tau,
                       const ConeSystem& system) {
  const NamedCone* a = system.find(sigma);
  const NamedCone* b = system.find(tau);
  if (!a) throw std::invalid_argument("unknown cone " + sigma);
  if (!b) throw std::invalid_argument("unknown cone " + tau);
  auto lookup = [&system](const std::string& n) -> std::optional<HodgeFiltration> {
    auto it = system.orbit_witnesses.find(n);
    if (it == system.orbit_witnesses.end()) return std::nullopt;
    return it->second;
  };
  return btilde_meet(a->cone, lookup(sigma), b->cone, lookup(tau), system);
}

FanReport strong_compatibility(const ConeSystem& system) {
  system.validate();
  Report r;
  r.command = "strong_compatibility";
  r.qualifiers.push_back("verdicts are relative to the supplied witness list");

  nlohmann::ordered_json table = nlohmann::ordered_json::array();
  for (const auto& nc : system.generating_cones) {
    std::vector<int> exponents;
    bool all = true;
    std::string detail;
    for (std::size_t gi = 0; gi < nc.cone.generators.size(); ++gi) {
      int found = 0;
      for (int k = 1; k <= 24 && !found; ++k)
        if (mat_is_integral(exp_nilpotent(Rat(k) * nc.cone.generators[gi]))) found = k;
      exponents.push_back(found);
      if (!found) {
        all = false;
        if (detail.empty())
          detail = "generator " + std::to_string(gi + 1) +
                   " admits no integral exponential for k <= 24";
      }
    }
    if (all) {
      std::ostringstream out;
      out << "integral exponentials at k = [";
      for (std::size_t i = 0; i < exponents.size(); ++i) out << (i ? ", " : "") << exponents[i];
      out << "]";
      detail = out.str();
    }
    r.add("integral_exponent[" + nc.name + "]", all, detail);
    table.push_back({{"cone", nc.name}, {"exponents", exponents}});
  }

  bool closed = true;
  std::string closure_detail =
      "witness translates of every generating cone are valid commuting nilpotent cones";
  for (const auto& w : system.witnesses) {
    for (const auto& nc : system.generating_cones) {
      try {
        NilpotentCone moved = transport_cone(w.matrix, system.lattice.Q, nc.cone);
        moved.validate(&system.lattice.Q);
      } catch (const std::exception& e) {
        closed = false;
        closure_detail = "witness " + w.name + " on cone " + nc.name + ": " + e.what();
      }
      if (!closed) break;
    }
    if (!closed) break;
  }
  r.add("ad_closure", closed, closure_detail);
  r.add_informational("ad_closure_scope", true,
                      "closure under the full group is definitional for orbit-generated "
                      "systems; only the supplied witnesses are checked");
  r.payload["integral_exponents"] = table;
  r.recompute();
  return r;
}

namespace {

// A member of the assembled family: a generating cone or a witness
// translate, with its inherited limit certificate.
struct FamilyEntry {
  std::string name;
  NilpotentCone cone;
  std::optional<HodgeFiltration> f;
};

std::optional<HodgeFiltration> lookup_witness(const ConeSystem& system, const std::string& name) {
  auto it = system.orbit_witnesses.find(name);
  if (it == system.orbit_witnesses.end()) return std::nullopt;
  return it->second;
}

// Generating cones plus their witness translates, deduplicated as matrix
// cones (first listing wins).
std::vector<FamilyEntry> assemble_family(const ConeSystem& system) {
  std::vector<FamilyEntry> fam;
  for (const auto& nc : system.generating_cones)
    fam.push_back({nc.name, nc.cone, lookup_witness(system, nc.name)});
  for (const auto& w : system.witnesses) {
    for (const auto& nc : system.generating_cones) {
      FamilyEntry e;
      e.name = "Ad[" + w.name + "]" + nc.name;
      e.cone = transport_cone(w.matrix, system.lattice.Q, nc.cone);
      e.f = lookup_witness(system, nc.name);
      if (e.f) e.f = transport(w.matrix, *e.f);
      bool dup = false;
      for (const auto& ex : fam)
        if (same_matrix_cone(ex.cone, e.cone)) {
          dup = true;
          break;
        }
      if (!dup) fam.push_back(std::move(e));
    }
  }
  return fam;
}

// Span of every generator in the family.
AmbientSpan family_span(const std::vector<FamilyEntry>& fam) {
  std::vector<Mat<Rat>> pool;
  for (const auto& e : fam)
    pool.insert(pool.end(), e.cone.generators.begin(), e.cone.generators.end());
  return AmbientSpan::from_matrices(pool);
}

NilpotentCone matrix_cone(const AmbientSpan& span, const Cone& c) {
  NilpotentCone out;
  for (const auto& g : c.generators) out.generators.push_back(span.to_matrix(g));
  return out;
}

// Every face of every entry added as its own entry (deduplicated); faces
// inherit the parent's limit certificate.
void face_close_family(std::vector<FamilyEntry>& fam) {
  const std::size_t initial = fam.size();
  for (std::size_t i = 0; i < initial; ++i) {
    const FamilyEntry e = fam[i];
    if (e.cone.generators.empty()) continue;
    AmbientSpan sp = AmbientSpan::from_matrices(e.cone.generators);
    Cone self = embed_cone(sp, e.cone);
    ConeComplex fc = faces(self);
    int counter = 0;
    for (const Cone& f : fc.cones) {
      if (f.is_zero() || f == self) continue;
      NilpotentCone nf = matrix_cone(sp, f);
      bool dup = false;
      for (const auto& ex : fam)
        if (same_matrix_cone(ex.cone, nf)) {
          dup = true;
          break;
        }
      if (!dup) fam.push_back({e.name + "#f" + std::to_string(counter++), nf, e.f});
    }
  }
}

}  // namespace

FanReport weak_fan_check(const ConeSystem& system) {
  system.validate();
  Report r;
  r.command = "weak_fan_check";
  r.qualifiers.push_back("verdicts are relative to the supplied witness list");
  r.footnotes.push_back(
      "finiteness of the required translate set is an input-data contract: the supplied "
      "witnesses are taken to be exactly the translates that require checking");

  std::vector<FamilyEntry> fam = assemble_family(system);
  const std::size_t base = system.generating_cones.size();
  r.add_informational("assembly", true,
                      std::to_string(base) + " generating cones and " +
                          std::to_string(fam.size() - base) + " distinct witness translates");

  // Common coordinates for meet tests and the face/fan diagnostics.
  AmbientSpan span = family_span(fam);
  std::vector<Cone> embedded;
  embedded.reserve(fam.size());
  for (const auto& e : fam) embedded.push_back(embed_cone(span, e.cone));

  // Face closure: every face of every family cone must itself be listed
  // (the zero cone is implicit).
  bool faces_ok = true;
  std::string face_detail = "every face of every family cone is listed";
  for (std::size_t i = 0; i < fam.size() && faces_ok; ++i) {
    ConeComplex fc = faces(embedded[i]);
    for (const Cone& f : fc.cones) {
      if (f.is_zero() || f == embedded[i]) continue;
      bool present = false;
      for (const auto& c : embedded)
        if (c == f) {
          present = true;
          break;
        }
      if (!present) {
        faces_ok = false;
        face_detail = "cone " + fam[i].name + " is missing a face of dimension " +
                      std::to_string(f.dim());
        break;
      }
    }
  }
  r.add("face_closure", faces_ok, face_detail);

  // Pairs (sigma, Ad_gamma tau): the left side ranges over the generating
  // cones, the right side over the whole family; distinct meeting pairs are
  // decided by the meet test.
  struct PairRow {
    std::string left, right;
    MeetResult result;
  };
  std::vector<PairRow> meeting;
  std::size_t enumerated = 0, shared = 0, denied = 0, unknown = 0, certified = 0;
  std::string first_violation, first_unknown, first_certified;
  for (std::size_t i = 0; i < base; ++i) {
    for (std::size_t j = i + 1; j < fam.size(); ++j) {
      ++enumerated;
      if (embedded[i] == embedded[j]) continue;  // equal cones comply trivially
      if (!intersect_cones(embedded[i], embedded[j])) continue;
      MeetResult mr = btilde_meet(fam[i].cone, fam[i].f, fam[j].cone, fam[j].f, system);
      meeting.push_back({fam[i].name, fam[j].name, mr});
      const std::string pair_label = fam[i].name + " and " + fam[j].name;
      if (mr.ill_formed) {
        ++certified;
        if (first_certified.empty()) first_certified = pair_label;
      }
      switch (mr.decision) {
        case MeetDecision::Shared:
          ++shared;
          if (first_violation.empty()) first_violation = pair_label;
          break;
        case MeetDecision::No:
          ++denied;
          break;
        case MeetDecision::Unknown:
          ++unknown;
          if (first_unknown.empty()) first_unknown = pair_label + " (" + mr.detail + ")";
          break;
      }
    }
  }
  r.add("weak_fan_axiom", shared == 0,
        shared == 0 ? "no meeting pair shares a limit without being equal"
                    : "cones " + first_violation + " meet and share a limit but are not equal");
  r.add("undecided_pairs", unknown == 0,
        unknown == 0 ? "every meeting pair was decided"
                     : std::to_string(unknown) + " meeting pair(s) undecided; first: " +
                           first_unknown);
  r.add("certified_pairs", certified == 0,
        certified == 0 ? "no pair was certified ill-formed"
                       : std::to_string(certified) +
                             " pair(s) certified ill-formed; first: " + first_certified);

  ConeComplex cc{span.dim(), embedded};
  cc.canonicalize();
  FanDecision fd = is_fan(face_closure(cc));
  r.add_informational("strict_fan", fd.ok, fd.detail);

  nlohmann::ordered_json family_json = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < fam.size(); ++i)
    family_json.push_back({{"name", fam[i].name},
                           {"dim", embedded[i].dim()},
                           {"limit_certificate", fam[i].f.has_value()}});
  nlohmann::ordered_json pairs_json = nlohmann::ordered_json::array();
  nlohmann::ordered_json certificates = nlohmann::ordered_json::array();
  for (const auto& p : meeting) {
    const char* decision = p.result.decision == MeetDecision::Shared  ? "shared"
                           : p.result.decision == MeetDecision::No    ? "no"
                                                                      : "unknown";
    pairs_json.push_back({{"left", p.left},
                          {"right", p.right},
                          {"decision", decision},
                          {"ill_formed", p.result.ill_formed},
                          {"detail", p.result.detail}});
    if (p.result.ill_formed)
      certificates.push_back(
          {{"left", p.left}, {"right", p.right}, {"lines", p.result.certificate}});
  }
  r.payload["family"] = family_json;
  r.payload["pairs"] = pairs_json;
  r.payload["pair_counts"] = {{"enumerated", enumerated},
                              {"meeting", meeting.size()},
                              {"shared", shared},
                              {"no", denied},
                              {"unknown", unknown},
                              {"certified", certified}};
  if (!certificates.empty()) r.payload["certificates"] = certificates;
  r.recompute();
  return r;
}

namespace {

// Hyperplane-canonical representative of a covector: primitive with a
// positive leading entry, so covectors cutting the same hyperplane collapse
// to one form.
Vec<Rat> hyperplane_form(const Vec<Rat>& f) {
  Vec<Rat> p = primitive_ray(f);
  for (const Rat& x : p) {
    const long s = rat_sign(x);
    if (s > 0) break;
    if (s < 0) {
      for (Rat& y : p) y = Rat(-y);
      break;
    }
  }
  return p;
}

// Gram matrix of the coordinate basis under the entrywise (trace) pairing of
// the underlying matrices. It gives the coordinate space an inner product
// that does not depend on how the basis was chosen from the family.
Mat<Rat> span_gram(const AmbientSpan& span) {
  const int k = span.dim();
  Mat<Rat> g(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      Rat s(0);
      const Mat<Rat>& a = span.basis[static_cast<std::size_t>(i)];
      const Mat<Rat>& b = span.basis[static_cast<std::size_t>(j)];
      for (int r = 0; r < a.rows; ++r)
        for (int c = 0; c < a.cols; ++c) s += a.at(r, c) * b.at(r, c);
      g.at(i, j) = s;
      g.at(j, i) = s;
    }
  }
  return g;
}

// Facet covector of a lower-dimensional cone, precomposed with the
// Gram-orthogonal projection onto the cone's span. A facet inequality of
// such a cone is only determined modulo the cone's equalities; projecting
// pins the one hyperplane through the facet that is orthogonal to the span,
// which depends on the geometry alone and not on the stored representation.
std::optional<Vec<Rat>> gram_canonical_facet(const Cone& c, const Vec<Rat>& f,
                                             const Mat<Rat>& gram) {
  Subspace<Rat> sp = Subspace<Rat>::from_vectors(c.generators, c.ambient);
  const int k = sp.dim();
  if (k == 0) return std::nullopt;
  Mat<Rat> s(c.ambient, k);
  for (int j = 0; j < k; ++j) {
    Vec<Rat> row = sp.basis.row(j);
    for (int i = 0; i < c.ambient; ++i) s.at(i, j) = row[static_cast<std::size_t>(i)];
  }
  Mat<Rat> sg = gram * s;
  Mat<Rat> normal = s.transpose() * sg;
  Vec<Rat> rhs(static_cast<std::size_t>(k), Rat(0));
  for (int j = 0; j < k; ++j) {
    Rat acc(0);
    for (int i = 0; i < c.ambient; ++i) acc += s.at(i, j) * f[static_cast<std::size_t>(i)];
    rhs[static_cast<std::size_t>(j)] = acc;
  }
  Vec<Rat> z;
  if (!mat_solve(normal, rhs, z)) return std::nullopt;
  Vec<Rat> out = mat_vec(sg, z);
  if (vec_is_zero(out)) return std::nullopt;
  return out;
}

// Canonical sign-vector cells of a face-closed complex, restricted to its
// support. The arrangement uses the span equalities of every cone, the facet
// hyperplanes of full-dimensional cones, and the Gram-canonicalized facet
// covectors of lower-dimensional ones, so the cell set is a function of the
// geometry: re-running it on its own output reproduces that output.
std::vector<Cone> canonical_cells(int dim, const std::vector<Cone>& closed,
                                  const Mat<Rat>& gram) {
  std::vector<Vec<Rat>> forms;
  auto add = [&forms](const Vec<Rat>& raw) {
    if (vec_is_zero(raw)) return;
    Vec<Rat> h = hyperplane_form(raw);
    for (const Vec<Rat>& g : forms)
      if (g == h) return;
    forms.push_back(std::move(h));
  };
  for (const Cone& c : closed) {
    if (c.is_zero()) continue;
    const HRep& h = hrep(c);
    for (const Vec<Rat>& e : h.equalities) add(e);
    if (c.dim() == dim) {
      for (const Vec<Rat>& f : h.inequalities) add(f);
    } else {
      for (const Vec<Rat>& f : h.inequalities) {
        auto fc = gram_canonical_facet(c, f, gram);
        if (fc) add(*fc);
      }
    }
  }
  std::sort(forms.begin(), forms.end(),
            [](const Vec<Rat>& a, const Vec<Rat>& b) { return vec_lex_compare(a, b) < 0; });

  std::vector<Cone> cells;
  std::vector<Vec<Rat>> eqs, ineqs;
  std::function<void(std::size_t)> walk = [&](std::size_t depth) {
    std::optional<Cone> probe;
    bool lineal = false;
    try {
      probe = cone_from_strict_system(dim, eqs, ineqs);
    } catch (const std::logic_error&) {
      lineal = true;  // nonempty but not pointed; deeper forms may still cut it
    }
    if (!lineal && !probe) return;
    if (depth == forms.size()) {
      if (lineal) return;  // a cell with lineality lies in no pointed member
      bool inside = false;
      for (const Cone& c : closed) {
        bool all = true;
        for (const Vec<Rat>& g : probe->generators)
          if (!c.closure_contains(g)) {
            all = false;
            break;
          }
        if (all) {
          inside = true;
          break;
        }
      }
      if (inside) cells.push_back(std::move(*probe));
      return;
    }
    const Vec<Rat>& f = forms[depth];
    ineqs.push_back(f);
    walk(depth + 1);
    ineqs.pop_back();
    Vec<Rat> nf = f;
    for (Rat& x : nf) x = Rat(-x);
    ineqs.push_back(std::move(nf));
    walk(depth + 1);
    ineqs.pop_back();
    eqs.push_back(f);
    walk(depth + 1);
    eqs.pop_back();
  };
  walk(0);
  return cells;
}

// One refinement pass: face-close the family, group by induced weight
// filtration, chamber-subdivide each group that is not already a fan (on the
// quotient for groups in the type-IV shape), and emit the cells matching
// each entry's dimension. Returns true when the pass changed the family.
bool refine_pass(std::vector<FamilyEntry>& fam, const SymplecticLattice& lattice,
                 const AmbientSpan& global, std::vector<std::string>& routes) {
  face_close_family(fam);

  // Signature of the incoming family for the fixpoint test.
  auto signature = [&global](const std::vector<FamilyEntry>& entries) {
    std::vector<Cone> sig;
    sig.reserve(entries.size());
    for (const auto& e : entries) sig.push_back(embed_cone(global, e.cone));
    std::sort(sig.begin(), sig.end(), cone_less);
    return sig;
  };
  std::vector<Cone> before = signature(fam);

  // Group entries by the weight filtration of their relative interior.
  std::vector<WeightFiltration> group_w;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    WeightFiltration w = cone_weight_filtration(fam[i].cone);
    bool placed = false;
    for (std::size_t g = 0; g < group_w.size(); ++g)
      if (group_w[g] == w) {
        groups[g].push_back(i);
        placed = true;
        break;
      }
    if (!placed) {
      group_w.push_back(std::move(w));
      groups.push_back({i});
    }
  }

  std::vector<FamilyEntry> pieces;
  auto emit = [&pieces](FamilyEntry&& e) {
    for (const auto& ex : pieces)
      if (same_matrix_cone(ex.cone, e.cone)) return;
    pieces.push_back(std::move(e));
  };

  for (std::size_t g = 0; g < groups.size(); ++g) {
    const std::vector<std::size_t>& members = groups[g];
    std::vector<Mat<Rat>> pool;
    for (std::size_t idx : members)
      pool.insert(pool.end(), fam[idx].cone.generators.begin(),
                  fam[idx].cone.generators.end());
    AmbientSpan vg = AmbientSpan::from_matrices(pool);
    std::vector<Cone> embedded;
    embedded.reserve(members.size());
    for (std::size_t idx : members) embedded.push_back(embed_cone(vg, fam[idx].cone));

    // A group whose face closure is already a fan needs no subdivision; this
    // also makes the pass a no-op on its own output.
    ConeComplex group_cc{vg.dim(), embedded};
    group_cc.canonicalize();
    ConeComplex group_closed = face_closure(group_cc);
    if (is_fan(group_closed).ok) {
      for (std::size_t idx : members) {
        FamilyEntry copy = fam[idx];
        emit(std::move(copy));
      }
      routes.push_back("fan");
      continue;
    }

    // Emits the subdivision pieces of one entry from a list of cells in the
    // group coordinates: the cells of the entry's own dimension covered by
    // its closure.
    auto emit_from_cells = [&](std::size_t local, const std::vector<Cone>& cells) {
      const FamilyEntry& entry = fam[members[local]];
      const Cone& self = embedded[local];
      int counter = 0;
      for (const Cone& cell : cells) {
        if (cell.is_zero() || cell.dim() != self.dim()) continue;
        bool covered = true;
        for (const auto& gen : cell.generators)
          if (!self.closure_contains(gen)) {
            covered = false;
            break;
          }
        if (!covered) continue;
        FamilyEntry piece;
        piece.cone = matrix_cone(vg, cell);
        piece.f = entry.f;
        piece.name = same_matrix_cone(piece.cone, entry.cone)
                         ? entry.name
                         : entry.name + "." + std::to_string(counter++);
        emit(std::move(piece));
      }
    };

    // Quotient route for weight-3 groups in the type-IV shape: subdivide the
    // quotient images and pull the cells back through the projection.
    bool quotient_route = false;
    if (lattice.weight == 3) {
      try {
        TypeIVQuotient qm = type_iv_quotient_map(group_w[g], lattice.Q);
        std::vector<QuotientImage> images;
        images.reserve(members.size());
        std::vector<Mat<Rat>> qpool;
        for (std::size_t idx : members) {
          images.push_back(quotient_image(qm, fam[idx].cone));
          qpool.insert(qpool.end(), images.back().reduced.begin(), images.back().reduced.end());
        }
        if (!qpool.empty()) {
          AmbientSpan vq = AmbientSpan::from_matrices(qpool);
          ConeComplex qcc{vq.dim(), {}};
          for (std::size_t k = 0; k < members.size(); ++k) {
            if (images[k].reduced.empty()) continue;
            std::vector<Vec<Rat>> gens;
            for (const auto& m : images[k].reduced) gens.push_back(vq.to_coords(m));
            qcc.cones.push_back(Cone::from_generators(gens, vq.dim()));
          }
          qcc.canonicalize();
          std::vector<Cone> qcells =
              canonical_cells(vq.dim(), face_closure(qcc).cones, span_gram(vq));
          // Projection matrix in group/quotient coordinates.
          Mat<Rat> p(vq.dim(), vg.dim());
          for (int col = 0; col < vg.dim(); ++col) {
            Vec<Rat> red = vq.to_coords(qm.reduce_map(vg.basis[col]));
            for (int row = 0; row < p.rows; ++row) p.at(row, col) = red[row];
          }
          Mat<Rat> pt = p.transpose();
          for (std::size_t k = 0; k < members.size(); ++k) {
            if (images[k].reduced.empty()) {
              // Vertical entries have zero quotient image and pass through.
              FamilyEntry whole = fam[members[k]];
              emit(std::move(whole));
              continue;
            }
            std::vector<Cone> cells;
            for (const Cone& qcell : qcells) {
              if (qcell.is_zero()) continue;
              std::vector<Vec<Rat>> eqs = hrep(embedded[k]).equalities;
              std::vector<Vec<Rat>> ineqs = hrep(embedded[k]).inequalities;
              for (const auto& e : qcell.h.equalities) eqs.push_back(mat_vec(pt, e));
              for (const auto& f : qcell.h.inequalities) ineqs.push_back(mat_vec(pt, f));
              auto piece = cone_from_strict_system(vg.dim(), eqs, ineqs);
              if (piece) cells.push_back(*piece);
            }
            emit_from_cells(k, cells);
          }
          quotient_route = true;
        }
      } catch (const std::exception&) {
        quotient_route = false;  // fall back to the direct route
      }
    }
    if (!quotient_route) {
      std::vector<Cone> cells =
          canonical_cells(vg.dim(), group_closed.cones, span_gram(vg));
      for (std::size_t k = 0; k < members.size(); ++k) emit_from_cells(k, cells);
      routes.push_back("direct");
    } else {
      routes.push_back("quotient");
    }
  }

  std::vector<Cone> after = signature(pieces);
  bool changed = !(before == after);
  fam = std::move(pieces);
  return changed;
}

}  // namespace

BuildResult build_weak_fan(const ConeSystem& system) {
  system.validate();
  if (system.witnesses.empty())
    throw MissingWitnessError(
        "the construction needs an explicit witness list; include at least the identity");
  for (const auto& tag : system.phi)
    if (tag.rfind("II", 0) == 0)
      throw MixedRegimeError("admissible type " + tag +
                             " has no finiteness reduction; the construction covers the "
                             "weight-1, I, and IV regimes");

  std::vector<FamilyEntry> fam = assemble_family(system);
  const std::size_t assembled = fam.size();

  // The family only refines, so one span covers every round.
  {
    std::vector<FamilyEntry> closed = fam;
    face_close_family(closed);
    fam = std::move(closed);
  }
  AmbientSpan global = family_span(fam);

  int rounds = 0;
  std::vector<std::string> routes;
  for (; rounds < 8; ++rounds) {
    if (!refine_pass(fam, system.lattice, global, routes)) break;
  }

  ConeSystem refined;
  refined.lattice = system.lattice;
  refined.witnesses = system.witnesses;
  refined.phi = system.phi;
  for (const auto& e : fam) {
    refined.generating_cones.push_back({e.name, e.cone});
    if (e.f) refined.orbit_witnesses.emplace(e.name, *e.f);
  }

  Report report = weak_fan_check(refined);
  report.command = "build_weak_fan";
  report.add_informational(
      "refinement", true,
      std::to_string(assembled) + " assembled cone(s) refined into " +
          std::to_string(fam.size()) + " cone(s) in " + std::to_string(rounds + 1) +
          " pass(es)");
  nlohmann::ordered_json refinement;
  refinement["assembled_cones"] = assembled;
  refinement["output_cones"] = fam.size();
  refinement["passes"] = rounds + 1;
  refinement["group_routes"] = routes;
  report.payload["refinement"] = refinement;
  report.recompute();
  return {std::move(refined), std::move(report)};
}

}  // namespace hodgefan
