#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "hodgefan/rational.hpp"

namespace hodgefan {

inline Rat scalar_conj(const Rat& r) { return r; }
inline GaussRat scalar_conj(const GaussRat& g) { return g.conj(); }
inline bool scalar_is_zero(const Rat& r) { return r == 0; }
inline bool scalar_is_zero(const GaussRat& g) { return g.is_zero(); }

template <typename K>
using Vec = std::vector<K>;

// Dense matrix over an exact field K (Rat or GaussRat), row-major. Vectors
// are columns; matrices act on the left.
template <typename K>
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<K> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, K(0)) {}
  Mat(std::initializer_list<std::initializer_list<K>> init) {
    rows = static_cast<int>(init.size());
    cols = rows == 0 ? 0 : static_cast<int>(init.begin()->size());
    a.reserve(static_cast<std::size_t>(rows) * cols);
    for (const auto& row : init) {
      if (static_cast<int>(row.size()) != cols) {
        throw std::invalid_argument("ragged matrix initializer");
      }
      for (const auto& x : row) a.push_back(x);
    }
  }

  static Mat zero(int r, int c) { return Mat(r, c); }
  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = K(1);
    return m;
  }

  K& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const K& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  bool is_zero() const {
    for (const K& x : a) {
      if (!scalar_is_zero(x)) return false;
    }
    return true;
  }

  bool is_square() const { return rows == cols; }

  Mat transpose() const {
    Mat t(cols, rows);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    }
    return t;
  }

  Mat conjugate() const {
    Mat c(rows, cols);
    for (std::size_t k = 0; k < a.size(); ++k) c.a[k] = scalar_conj(a[k]);
    return c;
  }

  Vec<K> row(int i) const {
    Vec<K> r(cols);
    for (int j = 0; j < cols; ++j) r[j] = at(i, j);
    return r;
  }

  Vec<K> col(int j) const {
    Vec<K> c(rows);
    for (int i = 0; i < rows; ++i) c[i] = at(i, j);
    return c;
  }

  friend bool operator==(const Mat& x, const Mat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
  friend bool operator!=(const Mat& x, const Mat& y) { return !(x == y); }
};

template <typename K>
Mat<K> operator+(const Mat<K>& x, const Mat<K>& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("matrix shape mismatch");
  Mat<K> z(x.rows, x.cols);
  for (std::size_t k = 0; k < z.a.size(); ++k) {
    K v = x.a[k] + y.a[k];
    z.a[k] = v;
  }
  return z;
}

template <typename K>
Mat<K> operator-(const Mat<K>& x, const Mat<K>& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("matrix shape mismatch");
  Mat<K> z(x.rows, x.cols);
  for (std::size_t k = 0; k < z.a.size(); ++k) {
    K v = x.a[k] - y.a[k];
    z.a[k] = v;
  }
  return z;
}

template <typename K>
Mat<K> operator*(const Mat<K>& x, const Mat<K>& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matrix shape mismatch in product");
  Mat<K> z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i) {
    for (int k = 0; k < x.cols; ++k) {
      const K& xv = x.at(i, k);
      if (scalar_is_zero(xv)) continue;
      for (int j = 0; j < y.cols; ++j) {
        K v = z.at(i, j) + xv * y.at(k, j);
        z.at(i, j) = v;
      }
    }
  }
  return z;
}

template <typename K>
Mat<K> operator*(const K& s, const Mat<K>& x) {
  Mat<K> z(x.rows, x.cols);
  for (std::size_t k = 0; k < z.a.size(); ++k) {
    K v = s * x.a[k];
    z.a[k] = v;
  }
  return z;
}

template <typename K>
Mat<K> operator-(const Mat<K>& x) {
  return K(-1) * x;
}

template <typename K>
Vec<K> mat_vec(const Mat<K>& m, const Vec<K>& v) {
  if (m.cols != static_cast<int>(v.size())) throw std::invalid_argument("matrix/vector shape mismatch");
  Vec<K> out(m.rows, K(0));
  for (int i = 0; i < m.rows; ++i) {
    K acc(0);
    for (int j = 0; j < m.cols; ++j) {
      K v2 = m.at(i, j) * v[j];
      acc += v2;
    }
    out[i] = acc;
  }
  return out;
}

template <typename K>
Vec<K> vec_add(const Vec<K>& x, const Vec<K>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vector size mismatch");
  Vec<K> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    K v = x[i] + y[i];
    z[i] = v;
  }
  return z;
}

template <typename K>
Vec<K> vec_sub(const Vec<K>& x, const Vec<K>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vector size mismatch");
  Vec<K> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    K v = x[i] - y[i];
    z[i] = v;
  }
  return z;
}

template <typename K>
Vec<K> vec_scale(const K& s, const Vec<K>& x) {
  Vec<K> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    K v = s * x[i];
    z[i] = v;
  }
  return z;
}

template <typename K>
bool vec_is_zero(const Vec<K>& x) {
  for (const K& v : x) {
    if (!scalar_is_zero(v)) return false;
  }
  return true;
}

template <typename K>
Mat<K> mat_pow(Mat<K> m, int e) {
  if (!m.is_square()) throw std::invalid_argument("power of non-square matrix");
  Mat<K> r = Mat<K>::identity(m.rows);
  while (e > 0) {
    if (e & 1) r = r * m;
    m = m * m;
    e >>= 1;
  }
  return r;
}

// Reduced row echelon form in place; returns the pivot column indices.
// Canonical: leading entries are 1, pivot columns are cleared, rows with
// pivots come first in pivot-column order, zero rows are at the bottom.
template <typename K>
std::vector<int> rref_in_place(Mat<K>& m) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int p = -1;
    for (int i = r; i < m.rows; ++i) {
      if (!scalar_is_zero(m.at(i, c))) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    if (p != r) {
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(p, j), m.at(r, j));
    }
    K inv = K(1) / m.at(r, c);
    for (int j = c; j < m.cols; ++j) {
      K v = inv * m.at(r, j);
      m.at(r, j) = v;
    }
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || scalar_is_zero(m.at(i, c))) continue;
      K f = m.at(i, c);
      for (int j = c; j < m.cols; ++j) {
        K v = m.at(i, j) - f * m.at(r, j);
        m.at(i, j) = v;
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <typename K>
int mat_rank(Mat<K> m) {
  return static_cast<int>(rref_in_place(m).size());
}

// Basis of the null space {x : m x = 0}, as columns collected in a matrix
// (cols = nullity). Deterministic: free columns in increasing order.
template <typename K>
Mat<K> mat_kernel(Mat<K> m) {
  std::vector<int> piv = rref_in_place(m);
  std::vector<bool> is_piv(m.cols, false);
  for (int c : piv) is_piv[c] = true;
  int nullity = m.cols - static_cast<int>(piv.size());
  Mat<K> ker(m.cols, nullity);
  int k = 0;
  for (int c = 0; c < m.cols; ++c) {
    if (is_piv[c]) continue;
    ker.at(c, k) = K(1);
    for (std::size_t r = 0; r < piv.size(); ++r) {
      K v = -m.at(static_cast<int>(r), c);
      ker.at(piv[r], k) = v;
    }
    ++k;
  }
  return ker;
}

// Solve m x = b; returns false when inconsistent. When the system is
// underdetermined the particular solution sets free variables to 0.
template <typename K>
bool mat_solve(const Mat<K>& m, const Vec<K>& b, Vec<K>& x) {
  if (m.rows != static_cast<int>(b.size())) throw std::invalid_argument("solve shape mismatch");
  Mat<K> aug(m.rows, m.cols + 1);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols) = b[static_cast<std::size_t>(i)];
  }
  std::vector<int> piv = rref_in_place(aug);
  if (!piv.empty() && piv.back() == m.cols) return false;
  x.assign(m.cols, K(0));
  for (std::size_t r = 0; r < piv.size(); ++r) {
    x[piv[r]] = aug.at(static_cast<int>(r), m.cols);
  }
  return true;
}

template <typename K>
bool mat_inverse(const Mat<K>& m, Mat<K>& inv) {
  if (!m.is_square()) throw std::invalid_argument("inverse of non-square matrix");
  int n = m.rows;
  Mat<K> aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = K(1);
  }
  std::vector<int> piv = rref_in_place(aug);
  if (static_cast<int>(piv.size()) != n || piv[n - 1] != n - 1) return false;
  inv = Mat<K>(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
  }
  return true;
}

template <typename K>
K mat_det(Mat<K> m) {
  if (!m.is_square()) throw std::invalid_argument("determinant of non-square matrix");
  int n = m.rows;
  K det(1);
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i) {
      if (!scalar_is_zero(m.at(i, c))) {
        p = i;
        break;
      }
    }
    if (p < 0) return K(0);
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(m.at(p, j), m.at(c, j));
      det = -det;
    }
    det *= m.at(c, c);
    K inv = K(1) / m.at(c, c);
    for (int i = c + 1; i < n; ++i) {
      if (scalar_is_zero(m.at(i, c))) continue;
      K f = inv * m.at(i, c);
      for (int j = c; j < n; ++j) {
        K v = m.at(i, j) - f * m.at(c, j);
        m.at(i, j) = v;
      }
    }
  }
  return det;
}

bool mat_is_integral(const Mat<Rat>& m);
bool mat_is_nilpotent(const Mat<Rat>& m);

// Smallest mu >= 0 with m^(mu+1) = 0; throws std::domain_error when m is not
// nilpotent.
int nilpotency_index(const Mat<Rat>& m);

Mat<GaussRat> promote(const Mat<Rat>& m);
Vec<GaussRat> promote_vec(const Vec<Rat>& v);
Vec<Rat> real_part(const Vec<GaussRat>& v);
Vec<Rat> imag_part(const Vec<GaussRat>& v);

// Lexicographic vector comparison (entry by entry).
int vec_lex_compare(const Vec<Rat>& x, const Vec<Rat>& y);

// Scale a nonzero rational vector to the unique primitive integer vector on
// the same ray (positive multiple, coprime integer entries).
Vec<Rat> primitive_ray(const Vec<Rat>& v);

std::vector<std::vector<std::string>> mat_to_strings(const Mat<Rat>& m);
std::vector<std::vector<std::string>> mat_to_strings(const Mat<GaussRat>& m);
Mat<Rat> mat_from_strings(const std::vector<std::vector<std::string>>& s);
Mat<GaussRat> gauss_mat_from_strings(const std::vector<std::vector<std::string>>& s);

}  // namespace hodgefan
