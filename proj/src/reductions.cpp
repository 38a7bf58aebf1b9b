#include "hodgefan/reductions.hpp"

#include <algorithm>

#include "hodgefan/cones.hpp"
#include "hodgefan/exact_core.hpp"
#include "hodgefan/subspace.hpp"

namespace hodgefan {

namespace {

Rat form_pair(const Mat<Rat>& q, const Vec<Rat>& x, const Vec<Rat>& y) {
  Vec<Rat> qy = mat_vec(q, y);
  Rat acc(0);
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * qy[i];
  return acc;
}

Mat<Rat> mat_from_cols(const std::vector<Vec<Rat>>& cols, int n) {
  Mat<Rat> m(n, static_cast<int>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (static_cast<int>(cols[j].size()) != n) throw std::invalid_argument("column size mismatch");
    for (int i = 0; i < n; ++i) m.at(i, static_cast<int>(j)) = cols[j][i];
  }
  return m;
}

void accumulate_mat(DenominatorLcm& acc, const Mat<Rat>& m) {
  for (const Rat& x : m.a) acc.accumulate(x);
}

// Flag-block id of each adapted column (consecutive steps of the weight
// filtration; the middle hyperbolic pairs form a single block).
std::vector<int> flag_blocks(const AdaptedBasis& b) {
  std::vector<int> out;
  if (b.has_omega()) {
    out.push_back(0);
    out.insert(out.end(), static_cast<std::size_t>(b.a), 1);
    out.insert(out.end(), static_cast<std::size_t>(2 * b.m), 2);
    out.insert(out.end(), static_cast<std::size_t>(b.a), 3);
    out.push_back(4);
  } else {
    out.insert(out.end(), static_cast<std::size_t>(b.a), 0);
    out.insert(out.end(), static_cast<std::size_t>(2 * b.m), 1);
    out.insert(out.end(), static_cast<std::size_t>(b.a), 2);
  }
  return out;
}

LMHSType pure_type() {
  LMHSType t;
  t.kind = LMHSKind::Pure;
  t.a = 0;
  return t;
}

ReducedScenario degenerate_scenario(const std::string& source, const std::string& method,
                                    const LMHSType& input_type, int ambient) {
  ReducedScenario out;
  out.lattice.rank = 0;
  out.lattice.weight = 1;
  out.lattice.Q = Mat<Rat>(0, 0);
  out.lattice.hodge_numbers = {0, 0};
  out.source = source;
  out.method = method;
  out.input_type = input_type;
  out.reduced_type = pure_type();
  out.projection = Mat<Rat>(0, ambient);
  return out;
}

}  // namespace

std::vector<std::string> AdaptedBasis::labels() const {
  std::vector<std::string> out;
  if (has_omega()) out.push_back("w-");
  for (int i = 1; i <= a; ++i) out.push_back("e" + std::to_string(i));
  for (int t = 1; t <= m; ++t) out.push_back("f" + std::to_string(t));
  for (int t = m; t >= 1; --t) out.push_back("f^" + std::to_string(t));
  for (int i = a; i >= 1; --i) out.push_back("e^" + std::to_string(i));
  if (has_omega()) out.push_back("w+");
  return out;
}

Mat<Rat> AdaptedBasis::reference_form() const {
  const int n = rank();
  const Rat s(sign);
  Mat<Rat> g(n, n);
  for (int i = 1; i <= a; ++i) {
    g.at(e_dual_col(i), e_col(i)) = s;
    g.at(e_col(i), e_dual_col(i)) = -s;
  }
  for (int t = 1; t <= m; ++t) {
    g.at(f_dual_col(t), f_col(t)) = s;
    g.at(f_col(t), f_dual_col(t)) = -s;
  }
  if (has_omega()) {
    g.at(omega_plus_col(), omega_minus_col()) = s;
    g.at(omega_minus_col(), omega_plus_col()) = -s;
  }
  return g;
}

AdaptedBasis adapted_symplectic_basis(const WeightFiltration& w, const Mat<Rat>& q,
                                      ReductionKind kind, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  const int n = w.ambient();
  if (n == 0) throw WrongShapeError("empty filtration");
  if (q.rows != n || q.cols != n) throw std::invalid_argument("form/filtration size mismatch");
  const Rat s(sign);
  const bool omega = kind == ReductionKind::CY3TypeIV;

  AdaptedBasis out;
  out.kind = kind;
  out.sign = sign;

  std::vector<Vec<Rat>> cols;  // adapted vectors in final column order
  Subspace<Rat> deep = Subspace<Rat>::zero(n);
  Subspace<Rat> low, mid, high;

  if (omega) {
    if (w.at(-4).dim() != 0) throw WrongShapeError("W_{-4} is nonzero");
    if (w.at(-3).dim() != 1) throw WrongShapeError("W_{-3} is not a line");
    if (w.at(-2) != w.at(-3)) throw WrongShapeError("W_{-2} differs from W_{-3}");
    if (w.at(3).dim() != n) throw WrongShapeError("W_3 is not the full space");
    if (w.at(2) != w.at(1)) throw WrongShapeError("W_2 differs from W_1");
    deep = w.at(-2);
    low = w.at(-1);
    mid = w.at(0);
    high = w.at(1);
    if (high != orthogonal_complement(deep, q)) {
      throw WrongShapeError("W_1 is not the form-annihilator of W_{-2}");
    }
    out.a = low.dim() - 1;
  } else {
    if (w.at(-2).dim() != 0) throw WrongShapeError("W_{-2} is nonzero");
    if (w.at(1).dim() != n) throw WrongShapeError("W_1 is not the full space");
    low = w.at(-1);
    mid = w.at(0);
    high = Subspace<Rat>::full(n);
    out.a = low.dim();
  }
  if (mid != orthogonal_complement(low, q)) {
    throw WrongShapeError("W_0 is not the form-annihilator of W_{-1}");
  }
  const int twom = mid.dim() - low.dim();
  if (twom % 2 != 0) throw WrongShapeError("middle graded piece has odd dimension");
  out.m = twom / 2;
  const int a = out.a;
  const int m = out.m;

  // Deepest line (type IV only), then the e-block spanning low/deep.
  Vec<Rat> omega_minus;
  if (omega) {
    omega_minus = primitive_ray(deep.basis.row(0));
    cols.push_back(omega_minus);
  }
  Mat<Rat> erows = extend_basis(deep, low.basis, low);
  std::vector<Vec<Rat>> evecs;
  for (int i = 0; i < erows.rows; ++i) evecs.push_back(erows.row(i));
  if (static_cast<int>(evecs.size()) != a) throw WrongShapeError("deep step dimension mismatch");
  for (const Vec<Rat>& e : evecs) cols.push_back(e);

  // Middle hyperbolic pairs by symplectic Gram-Schmidt over the echelon
  // complement of low in mid.
  Mat<Rat> midrows = extend_basis(low, mid.basis, mid);
  std::vector<Vec<Rat>> remaining;
  for (int i = 0; i < midrows.rows; ++i) remaining.push_back(midrows.row(i));
  std::vector<Vec<Rat>> fvecs, fduals;
  Subspace<Rat> used = low;
  if (omega) used = sum(used, deep);
  while (true) {
    remaining.erase(std::remove_if(remaining.begin(), remaining.end(),
                                   [&](const Vec<Rat>& v) { return used.contains(v); }),
                    remaining.end());
    if (remaining.empty()) break;
    Vec<Rat> ft = remaining.front();
    remaining.erase(remaining.begin());
    int partner = -1;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      if (form_pair(q, remaining[i], ft) != 0) {
        partner = static_cast<int>(i);
        break;
      }
    }
    if (partner < 0) {
      throw WrongShapeError("the form degenerates on the middle graded piece");
    }
    Vec<Rat> u = remaining[static_cast<std::size_t>(partner)];
    remaining.erase(remaining.begin() + partner);
    Rat p = form_pair(q, u, ft);
    Vec<Rat> fdual = vec_scale(Rat(s / p), u);
    for (Vec<Rat>& v : remaining) {
      Rat c1 = form_pair(q, v, ft) / s;
      Rat c2 = form_pair(q, v, fdual) / s;
      v = vec_add(vec_sub(v, vec_scale(c1, fdual)), vec_scale(c2, ft));
    }
    fvecs.push_back(ft);
    fduals.push_back(fdual);
    used = sum(used, Subspace<Rat>::from_vectors({ft, fdual}, n));
  }
  if (static_cast<int>(fvecs.size()) != m) {
    throw WrongShapeError("middle graded piece pair count mismatch");
  }
  for (const Vec<Rat>& v : fvecs) cols.push_back(v);
  for (int t = m - 1; t >= 0; --t) cols.push_back(fduals[static_cast<std::size_t>(t)]);

  // Dual block: solve the pairing equations inside `high`, then correct to
  // make the block isotropic.
  Mat<Rat> highann = annihilator_rows(high);
  auto pairing_rows = [&](std::vector<Vec<Rat>>& rows, std::vector<Rat>& rhs) {
    for (int j = 0; j < a; ++j) {
      rows.push_back(mat_vec(q, evecs[static_cast<std::size_t>(j)]));
      rhs.push_back(Rat(0));
    }
    for (int t = 0; t < m; ++t) {
      rows.push_back(mat_vec(q, fvecs[static_cast<std::size_t>(t)]));
      rhs.push_back(Rat(0));
      rows.push_back(mat_vec(q, fduals[static_cast<std::size_t>(t)]));
      rhs.push_back(Rat(0));
    }
  };
  std::vector<Vec<Rat>> xs;
  for (int i = 0; i < a; ++i) {
    std::vector<Vec<Rat>> rows;
    std::vector<Rat> rhs;
    pairing_rows(rows, rhs);
    rhs[static_cast<std::size_t>(i)] = s;  // q(x, e_j) = s δ_ij
    for (int r = 0; r < highann.rows; ++r) {
      rows.push_back(highann.row(r));
      rhs.push_back(Rat(0));
    }
    Mat<Rat> sys(static_cast<int>(rows.size()), n);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (int c = 0; c < n; ++c) sys.at(static_cast<int>(r), c) = rows[r][c];
    }
    Vec<Rat> x;
    if (!mat_solve(sys, rhs, x)) {
      throw WrongShapeError("dual vector system inconsistent; the filtration is not self-dual");
    }
    xs.push_back(x);
  }
  std::vector<Vec<Rat>> eduals = xs;
  for (int i = 0; i < a; ++i) {
    for (int k = 0; k < a; ++k) {
      Rat c = form_pair(q, xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(k)]);
      if (c == 0) continue;
      eduals[static_cast<std::size_t>(i)] = vec_add(
          eduals[static_cast<std::size_t>(i)],
          vec_scale(Rat(c / (2 * s)), evecs[static_cast<std::size_t>(k)]));
    }
  }
  for (int i = a - 1; i >= 0; --i) cols.push_back(eduals[static_cast<std::size_t>(i)]);

  if (omega) {
    std::vector<Vec<Rat>> rows;
    std::vector<Rat> rhs;
    rows.push_back(mat_vec(q, omega_minus));
    rhs.push_back(s);  // q(w+, w-) = s
    pairing_rows(rows, rhs);
    for (int j = 0; j < a; ++j) {
      rows.push_back(mat_vec(q, eduals[static_cast<std::size_t>(j)]));
      rhs.push_back(Rat(0));
    }
    Mat<Rat> sys(static_cast<int>(rows.size()), n);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (int c = 0; c < n; ++c) sys.at(static_cast<int>(r), c) = rows[r][c];
    }
    Vec<Rat> x;
    if (!mat_solve(sys, rhs, x)) {
      throw WrongShapeError("dual line system inconsistent; the filtration is not self-dual");
    }
    cols.push_back(x);
  }

  out.change = mat_from_cols(cols, n);
  if (!mat_inverse(out.change, out.change_inv)) {
    throw std::logic_error("adapted basis is singular");
  }
  Mat<Rat> gram = out.change.transpose() * q * out.change;
  if (gram != out.reference_form()) {
    throw std::logic_error("adapted basis fails to realize the reference form");
  }
  DenominatorLcm acc;
  accumulate_mat(acc, out.change);
  out.index_denominator = acc.value;
  return out;
}

LeviDecomposition levi_decompose(const Mat<Rat>& gamma, const AdaptedBasis& basis) {
  const int n = basis.rank();
  if (gamma.rows != n || gamma.cols != n) throw std::invalid_argument("element size mismatch");
  Mat<Rat> ref = basis.reference_form();
  Mat<Rat> g_ad = basis.change_inv * gamma * basis.change;
  if (!preserves_form(g_ad, ref)) {
    throw std::invalid_argument("the element does not preserve the form");
  }
  std::vector<int> blocks = flag_blocks(basis);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (blocks[static_cast<std::size_t>(i)] > blocks[static_cast<std::size_t>(j)] &&
          g_ad.at(i, j) != 0) {
        throw NotParabolicError("adapted entry (" + std::to_string(i) + "," + std::to_string(j) +
                                ") below the filtration blocks is nonzero");
      }
    }
  }
  Mat<Rat> l_ad(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (blocks[static_cast<std::size_t>(i)] == blocks[static_cast<std::size_t>(j)]) {
        l_ad.at(i, j) = g_ad.at(i, j);
      }
    }
  }
  Mat<Rat> l_inv;
  if (!mat_inverse(l_ad, l_inv)) throw std::logic_error("singular block-diagonal part");
  Mat<Rat> u_ad = l_inv * g_ad;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      int bi = blocks[static_cast<std::size_t>(i)];
      int bj = blocks[static_cast<std::size_t>(j)];
      Rat expect = i == j ? Rat(1) : Rat(0);
      if (bi == bj && u_ad.at(i, j) != expect) {
        throw std::logic_error("unipotent factor is not unipotent");
      }
    }
  }
  if (!preserves_form(l_ad, ref)) {
    throw std::logic_error("block-diagonal factor lost the form");
  }
  LeviDecomposition out;
  out.levi = basis.change * l_ad * basis.change_inv;
  out.unipotent = basis.change * u_ad * basis.change_inv;
  if (out.levi * out.unipotent != gamma) {
    throw std::logic_error("decomposition does not multiply back");
  }
  return out;
}

Mat<Rat> TypeIVQuotient::reduce_map(const Mat<Rat>& m) const {
  const int n = basis.rank();
  if (m.rows != n || m.cols != n) throw std::invalid_argument("map size mismatch");
  Mat<Rat> m_ad = basis.change_inv * m * basis.change;
  for (int r = 1; r < n; ++r) {
    if (m_ad.at(r, 0) != 0) {
      throw std::invalid_argument("the map does not preserve the deepest line W_{-2}");
    }
  }
  for (int c = 0; c + 1 < n; ++c) {
    if (m_ad.at(n - 1, c) != 0) {
      throw std::invalid_argument("the map does not preserve W_1");
    }
  }
  Mat<Rat> out(n - 2, n - 2);
  for (int r = 0; r < n - 2; ++r) {
    for (int c = 0; c < n - 2; ++c) out.at(r, c) = m_ad.at(r + 1, c + 1);
  }
  return out;
}

NilpotentCone TypeIVQuotient::reduce_cone(const NilpotentCone& c) const {
  std::vector<Mat<Rat>> images;
  for (const Mat<Rat>& g : c.generators) {
    Mat<Rat> img = reduce_map(g);
    if (!img.is_zero()) images.push_back(img);
  }
  NilpotentCone out;
  if (images.empty()) return out;
  AmbientSpan span = AmbientSpan::from_matrices(images);
  std::vector<Vec<Rat>> coords;
  for (const Mat<Rat>& img : images) coords.push_back(span.to_coords(img));
  Cone cone = Cone::from_generators(coords, span.dim());
  if (static_cast<int>(cone.generators.size()) != cone.dim()) {
    throw std::invalid_argument("quotient cone is not simplicial");
  }
  for (const Vec<Rat>& ray : cone.generators) out.generators.push_back(span.to_matrix(ray));
  out.validate(&reduced.Q);
  return out;
}

TypeIVQuotient type_iv_quotient_map(const WeightFiltration& w, const Mat<Rat>& q, int sign) {
  TypeIVQuotient out;
  out.basis = adapted_symplectic_basis(w, q, ReductionKind::CY3TypeIV, sign);
  const int n = out.basis.rank();
  const int mid = n - 2;
  out.proj = Mat<Rat>(mid, n);
  for (int r = 0; r < mid; ++r) {
    for (int c = 0; c < n; ++c) out.proj.at(r, c) = out.basis.change_inv.at(r + 1, c);
  }
  Mat<Rat> ref = out.basis.reference_form();
  Mat<Rat> rq(mid, mid);
  for (int r = 0; r < mid; ++r) {
    for (int c = 0; c < mid; ++c) rq.at(r, c) = ref.at(r + 1, c + 1);
  }
  out.reduced.rank = mid;
  out.reduced.Q = rq;
  out.reduced.weight = 1;
  out.reduced.hodge_numbers = {mid / 2, mid / 2};
  out.reduced.validate();
  return out;
}

namespace {

// Slot map for the type-I corner reduction: reduced position k corresponds
// to the adapted column of e^{k+1} for k < a and of e_{2a-k} for k >= a
// (reduced order β_1..β_a, e_a..e_1).
std::vector<int> corner_slots(const AdaptedBasis& basis) {
  const int a = basis.a;
  std::vector<int> slots;
  for (int k = 0; k < a; ++k) slots.push_back(basis.e_dual_col(k + 1));
  for (int k = a; k < 2 * a; ++k) slots.push_back(basis.e_col(2 * a - k));
  return slots;
}

Mat<Rat> corner_submatrix(const Mat<Rat>& m_ad, const std::vector<int>& slots) {
  const int d = static_cast<int>(slots.size());
  Mat<Rat> out(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      out.at(r, c) = m_ad.at(slots[static_cast<std::size_t>(r)], slots[static_cast<std::size_t>(c)]);
    }
  }
  return out;
}

}  // namespace

ReducedScenario type_I_restrict(const NilpotentCone& cone, const HodgeFiltration& f,
                                const SymplecticLattice& lattice,
                                const std::vector<std::pair<std::string, Mat<Rat>>>& witnesses,
                                const std::string& source, int sign) {
  const int n = lattice.rank;
  if (lattice.weight != 3) {
    throw NotTypeIError("the restriction applies to weight-3 scenarios");
  }
  if (cone.generators.empty()) {
    return degenerate_scenario(source, "type_I_restrict", pure_type(), n);
  }
  LMHSType t = classify_lmhs(cone, f, lattice);
  if (t.kind == LMHSKind::Pure) {
    return degenerate_scenario(source, "type_I_restrict", t, n);
  }
  if (t.kind != LMHSKind::I) {
    throw NotTypeIError("the pair classifies as " + t.tag() + ", not I_a");
  }
  const Mat<Rat>& q = lattice.Q;
  WeightFiltration w = cone_weight_filtration(cone);
  AdaptedBasis basis = adapted_symplectic_basis(w, q, ReductionKind::CY3TypeI, sign);
  const int a = basis.a;
  if (a != t.a) throw std::logic_error("adapted shape disagrees with the classification");

  DeligneSplitting split = deligne_splitting(w.shifted(lattice.weight), f);
  auto it22 = split.components.find({2, 2});
  auto it11 = split.components.find({1, 1});
  if (it22 == split.components.end() || it22->second.dim() != a || it11 == split.components.end()) {
    throw std::logic_error("splitting table disagrees with the classification");
  }
  const Subspace<GaussRat>& h22 = it22->second;
  Subspace<GaussRat> h2 = sum(h22, it11->second);

  // Adapted coordinates of the distinguished component; normalize so that the
  // i-th spanning vector is α_i = e^i + (middle part) + Σ_j z_ij e_j.
  Mat<GaussRat> coords22 = h22.basis * promote(basis.change_inv).transpose();
  Mat<GaussRat> c(a, a);
  for (int r = 0; r < a; ++r) {
    for (int i = 0; i < a; ++i) c.at(r, i) = coords22.at(r, basis.e_dual_col(i + 1));
  }
  Mat<GaussRat> c_inv;
  if (!mat_inverse(c, c_inv)) {
    throw RealityFailureError(
        "dual_block_projection: the distinguished component does not project onto the dual block");
  }
  Mat<GaussRat> alpha_ad = c_inv * coords22;  // row i = α_{i+1} in adapted coordinates

  // The restriction sublattice: β_i = Re(α_i) followed by e_a..e_1.
  std::vector<Vec<Rat>> ecols;
  for (int i = 0; i < a; ++i) {
    Vec<Rat> beta_ad = real_part(alpha_ad.row(i));
    ecols.push_back(mat_vec(basis.change, beta_ad));
  }
  for (int j = a; j >= 1; --j) ecols.push_back(basis.change.col(basis.e_col(j)));
  Mat<Rat> emb = mat_from_cols(ecols, n);
  for (int i = 0; i < a; ++i) {
    if (!h2.contains(promote_vec(emb.col(i)))) {
      throw RealityFailureError("reality: Re(α_" + std::to_string(i + 1) +
                                ") leaves the middle Hodge component");
    }
  }
  if (mat_rank(emb) != 2 * a) {
    throw RealityFailureError("independence: the restriction vectors do not span rank 2a");
  }
  const Rat s(sign);
  Mat<Rat> rq(2 * a, 2 * a);
  for (int k = 0; k < a; ++k) {
    rq.at(k, 2 * a - 1 - k) = s;
    rq.at(2 * a - 1 - k, k) = -s;
  }
  if (emb.transpose() * q * emb != rq) {
    throw RealityFailureError("induced_form: the restricted pairing is not the reference form");
  }

  // Generators act through the distinguished corner block only.
  std::vector<int> slots = corner_slots(basis);
  std::vector<bool> is_ecol(static_cast<std::size_t>(n), false);
  std::vector<bool> is_edual(static_cast<std::size_t>(n), false);
  for (int i = 1; i <= a; ++i) {
    is_ecol[static_cast<std::size_t>(basis.e_col(i))] = true;
    is_edual[static_cast<std::size_t>(basis.e_dual_col(i))] = true;
  }
  std::vector<Mat<Rat>> rgens;
  for (std::size_t gi = 0; gi < cone.generators.size(); ++gi) {
    Mat<Rat> n_ad = basis.change_inv * cone.generators[gi] * basis.change;
    for (int r = 0; r < n; ++r) {
      for (int col = 0; col < n; ++col) {
        bool allowed = is_ecol[static_cast<std::size_t>(r)] && is_edual[static_cast<std::size_t>(col)];
        if (!allowed && n_ad.at(r, col) != 0) {
          throw RealityFailureError("corner_block: generator " + std::to_string(gi) +
                                    " acts outside the distinguished corner");
        }
      }
    }
    rgens.push_back(corner_submatrix(n_ad, slots));
  }
  NilpotentCone rcone;
  rcone.generators = rgens;
  rcone.validate(&rq);

  // Reduced Hodge line: coordinates of the α_i in the restriction basis.
  Mat<GaussRat> emb_c = promote(emb);
  std::vector<Vec<GaussRat>> f1rows;
  for (int i = 0; i < a; ++i) {
    Vec<GaussRat> alpha = mat_vec(promote(basis.change), alpha_ad.row(i));
    Vec<GaussRat> x;
    if (!mat_solve(emb_c, alpha, x)) {
      throw std::logic_error("distinguished vector escapes the restriction sublattice");
    }
    f1rows.push_back(x);
  }
  std::map<int, Subspace<GaussRat>> fsteps;
  fsteps[1] = Subspace<GaussRat>::from_vectors(f1rows, 2 * a);
  fsteps[0] = Subspace<GaussRat>::full(2 * a);
  HodgeFiltration rf = HodgeFiltration::from_steps(fsteps, 2 * a);

  SymplecticLattice rlat;
  rlat.rank = 2 * a;
  rlat.Q = rq;
  rlat.weight = 1;
  rlat.hodge_numbers = {a, a};
  rlat.validate();

  DenominatorLcm acc;
  accumulate_mat(acc, emb);
  for (const Mat<Rat>& g : rgens) accumulate_mat(acc, g);

  std::vector<std::pair<std::string, Mat<Rat>>> rwit;
  for (const auto& [name, gamma] : witnesses) {
    LeviDecomposition ld;
    try {
      ld = levi_decompose(gamma, basis);
    } catch (const NotParabolicError& e) {
      throw NotParabolicError("witness " + name + ": " + e.what());
    }
    Mat<Rat> l_ad = basis.change_inv * ld.levi * basis.change;
    Mat<Rat> rg = corner_submatrix(l_ad, slots);
    if (!preserves_form(rg, rq)) {
      throw std::logic_error("reduced witness lost the form");
    }
    accumulate_mat(acc, rg);
    rwit.emplace_back(name, rg);
  }

  LMHSType rt = classify_lmhs(rcone, rf, rlat);
  if (rt.kind != LMHSKind::HodgeTate) {
    throw RealityFailureError("reduced_classification: expected a maximal weight-1 degeneration, got " +
                              rt.tag());
  }

  // Linear extension of the restriction coordinates, killing the middle
  // hyperbolic block.
  std::vector<Vec<Rat>> extcols = ecols;
  for (int tcol = 1; tcol <= basis.m; ++tcol) extcols.push_back(basis.change.col(basis.f_col(tcol)));
  for (int tcol = basis.m; tcol >= 1; --tcol) {
    extcols.push_back(basis.change.col(basis.f_dual_col(tcol)));
  }
  Mat<Rat> ext = mat_from_cols(extcols, n);
  Mat<Rat> ext_inv;
  if (!mat_inverse(ext, ext_inv)) throw std::logic_error("restriction extension is singular");
  Mat<Rat> proj(2 * a, n);
  for (int r = 0; r < 2 * a; ++r) {
    for (int col = 0; col < n; ++col) proj.at(r, col) = ext_inv.at(r, col);
  }

  ReducedScenario out;
  out.lattice = rlat;
  out.cones.emplace_back(source, rcone);
  out.filtration = rf;
  out.witnesses = rwit;
  out.source = source;
  out.method = "type_I_restrict";
  out.input_type = t;
  out.reduced_type = rt;
  out.index_denominator = acc.value;
  out.basis = basis;
  out.projection = proj;
  return out;
}

ReducedScenario type_IV_quotient(const NilpotentCone& cone, const HodgeFiltration& f,
                                 const SymplecticLattice& lattice,
                                 const std::vector<std::pair<std::string, Mat<Rat>>>& witnesses,
                                 const std::string& source, int sign) {
  if (lattice.weight != 3) {
    throw NotTypeIVError("the quotient applies to weight-3 scenarios");
  }
  if (cone.generators.empty()) {
    throw NotTypeIVError("the empty cone classifies as pure, not IV_a");
  }
  LMHSType t = classify_lmhs(cone, f, lattice);
  if (t.kind != LMHSKind::IV) {
    throw NotTypeIVError("the pair classifies as " + t.tag() + ", not IV_a");
  }
  WeightFiltration w = cone_weight_filtration(cone);
  TypeIVQuotient qm = type_iv_quotient_map(w, lattice.Q, sign);
  if (qm.basis.a != t.a) throw std::logic_error("adapted shape disagrees with the classification");
  const int n = lattice.rank;
  const int h = (n - 2) / 2;

  NilpotentCone rcone = qm.reduce_cone(cone);

  Subspace<GaussRat> w1 = promote_subspace(w.at(1));
  if (intersect(f.at(3), w1).dim() != 0) {
    throw RealityFailureError("top_line: F^3 meets W_1");
  }
  Subspace<GaussRat> descent = intersect(f.at(2), w1);
  if (descent.dim() != h) {
    throw RealityFailureError("filtration_descent: dim(F^2 ∩ W_1) = " +
                              std::to_string(descent.dim()) + ", expected " + std::to_string(h));
  }
  Subspace<GaussRat> rf1 = apply_map(promote(qm.proj), descent);
  if (rf1.dim() != h) {
    throw RealityFailureError("filtration_descent: the projected step drops dimension");
  }
  std::map<int, Subspace<GaussRat>> fsteps;
  fsteps[1] = rf1;
  fsteps[0] = Subspace<GaussRat>::full(n - 2);
  HodgeFiltration rf = HodgeFiltration::from_steps(fsteps, n - 2);

  DenominatorLcm acc;
  accumulate_mat(acc, qm.proj);
  for (const Mat<Rat>& g : rcone.generators) accumulate_mat(acc, g);

  std::vector<std::pair<std::string, Mat<Rat>>> rwit;
  for (const auto& [name, gamma] : witnesses) {
    Mat<Rat> rg;
    try {
      rg = qm.reduce_map(gamma);
    } catch (const std::invalid_argument& e) {
      throw NotParabolicError("witness " + name + ": " + e.what());
    }
    if (!preserves_form(rg, qm.reduced.Q)) {
      throw std::logic_error("reduced witness lost the form");
    }
    accumulate_mat(acc, rg);
    rwit.emplace_back(name, rg);
  }

  LMHSType rt = classify_lmhs(rcone, rf, qm.reduced);
  bool expected = (t.a == h) ? (rt.kind == LMHSKind::HodgeTate && rt.a == h)
                             : (rt.kind == LMHSKind::I && rt.a == t.a);
  if (!expected) {
    throw RealityFailureError("reduced_classification: expected the weight-1 type with parameter " +
                              std::to_string(t.a) + ", got " + rt.tag());
  }

  ReducedScenario out;
  out.lattice = qm.reduced;
  out.cones.emplace_back(source, rcone);
  out.filtration = rf;
  out.witnesses = rwit;
  out.source = source;
  out.method = "type_IV_quotient";
  out.input_type = t;
  out.reduced_type = rt;
  out.index_denominator = acc.value;
  out.basis = qm.basis;
  out.projection = qm.proj;
  out.q_sign = -1;
  return out;
}

}  // namespace hodgefan
