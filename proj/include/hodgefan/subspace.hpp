#pragma once

#include <optional>

#include "hodgefan/matrix.hpp"

namespace hodgefan {

// Linear subspace of K^n in canonical form: `basis` is in reduced row
// echelon form with one basis vector per row and no zero rows. Two
// subspaces are equal iff their canonical forms compare equal entrywise.
template <typename K>
struct Subspace {
  int ambient = 0;
  Mat<K> basis;  // RREF; basis.rows == dim, basis.cols == ambient

  static Subspace zero(int n) {
    Subspace s;
    s.ambient = n;
    s.basis = Mat<K>(0, n);
    return s;
  }

  static Subspace full(int n) {
    Subspace s;
    s.ambient = n;
    s.basis = Mat<K>::identity(n);
    return s;
  }

  // Span of the rows of m (vectors given as rows).
  static Subspace from_rows(const Mat<K>& m) {
    Mat<K> r = m;
    std::vector<int> piv = rref_in_place(r);
    Subspace s;
    s.ambient = m.cols;
    s.basis = Mat<K>(static_cast<int>(piv.size()), m.cols);
    for (int i = 0; i < s.basis.rows; ++i) {
      for (int j = 0; j < m.cols; ++j) s.basis.at(i, j) = r.at(i, j);
    }
    return s;
  }

  // Span of the columns of m (e.g. the image of a linear map).
  static Subspace from_cols(const Mat<K>& m) { return from_rows(m.transpose()); }

  static Subspace from_vectors(const std::vector<Vec<K>>& vs, int ambient) {
    Mat<K> m(static_cast<int>(vs.size()), ambient);
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (static_cast<int>(vs[i].size()) != ambient) {
        throw std::invalid_argument("vector/ambient mismatch");
      }
      for (int j = 0; j < ambient; ++j) m.at(static_cast<int>(i), j) = vs[i][j];
    }
    return from_rows(m);
  }

  int dim() const { return basis.rows; }

  bool contains(const Vec<K>& v) const {
    if (static_cast<int>(v.size()) != ambient) throw std::invalid_argument("ambient mismatch");
    Vec<K> r = v;
    for (int i = 0; i < basis.rows; ++i) {
      int p = -1;
      for (int j = 0; j < ambient; ++j) {
        if (!scalar_is_zero(basis.at(i, j))) {
          p = j;
          break;
        }
      }
      if (p < 0) continue;
      if (scalar_is_zero(r[p])) continue;
      K f = r[p];
      for (int j = 0; j < ambient; ++j) {
        K v2 = r[j] - f * basis.at(i, j);
        r[j] = v2;
      }
    }
    return vec_is_zero(r);
  }

  bool contains(const Subspace& other) const {
    for (int i = 0; i < other.basis.rows; ++i) {
      if (!contains(other.basis.row(i))) return false;
    }
    return true;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient == b.ambient && a.basis == b.basis;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }
};

template <typename K>
Subspace<K> sum(const Subspace<K>& a, const Subspace<K>& b) {
  if (a.ambient != b.ambient) throw std::invalid_argument("ambient mismatch in sum");
  Mat<K> st(a.basis.rows + b.basis.rows, a.ambient);
  for (int i = 0; i < a.basis.rows; ++i) {
    for (int j = 0; j < a.ambient; ++j) st.at(i, j) = a.basis.at(i, j);
  }
  for (int i = 0; i < b.basis.rows; ++i) {
    for (int j = 0; j < a.ambient; ++j) st.at(a.basis.rows + i, j) = b.basis.at(i, j);
  }
  return Subspace<K>::from_rows(st);
}

// Zassenhaus: row-reduce [U|U; W|0]; rows with zero left half carry the
// intersection basis in the right half.
template <typename K>
Subspace<K> intersect(const Subspace<K>& a, const Subspace<K>& b) {
  if (a.ambient != b.ambient) throw std::invalid_argument("ambient mismatch in intersect");
  const int n = a.ambient;
  Mat<K> z(a.basis.rows + b.basis.rows, 2 * n);
  for (int i = 0; i < a.basis.rows; ++i) {
    for (int j = 0; j < n; ++j) {
      z.at(i, j) = a.basis.at(i, j);
      z.at(i, n + j) = a.basis.at(i, j);
    }
  }
  for (int i = 0; i < b.basis.rows; ++i) {
    for (int j = 0; j < n; ++j) z.at(a.basis.rows + i, j) = b.basis.at(i, j);
  }
  rref_in_place(z);
  std::vector<Vec<K>> rows;
  for (int i = 0; i < z.rows; ++i) {
    bool left_zero = true;
    for (int j = 0; j < n && left_zero; ++j) {
      if (!scalar_is_zero(z.at(i, j))) left_zero = false;
    }
    if (!left_zero) continue;
    Vec<K> v(n);
    bool nonzero = false;
    for (int j = 0; j < n; ++j) {
      v[j] = z.at(i, n + j);
      if (!scalar_is_zero(v[j])) nonzero = true;
    }
    if (nonzero) rows.push_back(std::move(v));
  }
  return Subspace<K>::from_vectors(rows, n);
}

// Image of s under the linear map m (acting on columns).
template <typename K>
Subspace<K> apply_map(const Mat<K>& m, const Subspace<K>& s) {
  if (m.cols != s.ambient) throw std::invalid_argument("map/ambient mismatch");
  return Subspace<K>::from_rows(s.basis * m.transpose());
}

// Functionals cutting out s: rows e with e . v = 0 for all v in s.
template <typename K>
Mat<K> annihilator_rows(const Subspace<K>& s) {
  return mat_kernel(s.basis).transpose();
}

// Preimage {x : m x in s}.
template <typename K>
Subspace<K> preimage(const Mat<K>& m, const Subspace<K>& s) {
  if (m.rows != s.ambient) throw std::invalid_argument("map/ambient mismatch");
  Mat<K> eq = annihilator_rows(s) * m;
  return Subspace<K>::from_cols(mat_kernel(eq));
}

template <typename K>
Subspace<K> kernel_subspace(const Mat<K>& m) {
  return Subspace<K>::from_cols(mat_kernel(m));
}

template <typename K>
Subspace<K> image_subspace(const Mat<K>& m) {
  return Subspace<K>::from_cols(m);
}

// {v : (s_i)^T q v = 0 for every basis vector s_i} — the q-orthogonal
// complement (q bilinear, applied as Q(s, v) = s^T q v).
template <typename K>
Subspace<K> orthogonal_complement(const Subspace<K>& s, const Mat<K>& q) {
  if (q.rows != s.ambient || q.cols != s.ambient) {
    throw std::invalid_argument("form/ambient mismatch");
  }
  Mat<K> eq = s.basis * q;
  return Subspace<K>::from_cols(mat_kernel(eq));
}

// Entrywise conjugate of the subspace (complex conjugation over GaussRat).
inline Subspace<GaussRat> conj_subspace(const Subspace<GaussRat>& s) {
  return Subspace<GaussRat>::from_rows(s.basis.conjugate());
}

inline Subspace<GaussRat> promote_subspace(const Subspace<Rat>& s) {
  Subspace<GaussRat> g;
  g.ambient = s.ambient;
  g.basis = promote(s.basis);
  return g;
}

// Coordinates of v in the row basis of s; empty when v is outside s.
template <typename K>
std::optional<Vec<K>> coordinates_in(const Subspace<K>& s, const Vec<K>& v) {
  Vec<K> x;
  if (!mat_solve(s.basis.transpose(), v, x)) return std::nullopt;
  return x;
}

// Pivot-greedy extension: vectors from `pool` (rows) that extend `inside` to
// a basis of `target`; returned vectors are rows of the result.
template <typename K>
Mat<K> extend_basis(const Subspace<K>& inside, const Mat<K>& pool, const Subspace<K>& target) {
  Subspace<K> cur = inside;
  std::vector<Vec<K>> chosen;
  for (int i = 0; i < pool.rows && cur.dim() < target.dim(); ++i) {
    Vec<K> cand = pool.row(i);
    if (!target.contains(cand) || cur.contains(cand)) continue;
    chosen.push_back(cand);
    cur = sum(cur, Subspace<K>::from_vectors({cand}, inside.ambient));
  }
  if (cur.dim() != target.dim()) throw std::domain_error("pool does not span target");
  Mat<K> out(static_cast<int>(chosen.size()), inside.ambient);
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    for (int j = 0; j < inside.ambient; ++j) out.at(static_cast<int>(i), j) = chosen[i][j];
  }
  return out;
}

}  // namespace hodgefan
