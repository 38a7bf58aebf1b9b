#include "hodgefan/matrix.hpp"

namespace hodgefan {

bool mat_is_integral(const Mat<Rat>& m) {
  for (const Rat& x : m.a) {
    if (mpz_cmp_ui(mpq_denref(x.get_mpq_t()), 1) != 0) return false;
  }
  return true;
}

bool mat_is_nilpotent(const Mat<Rat>& m) {
  if (!m.is_square()) return false;
  Mat<Rat> p = m;
  for (int k = 1; k <= m.rows; ++k) {
    if (p.is_zero()) return true;
    p = p * m;
  }
  return p.is_zero();
}

int nilpotency_index(const Mat<Rat>& m) {
  if (!m.is_square()) throw std::domain_error("nilpotency index of non-square matrix");
  Mat<Rat> p = Mat<Rat>::identity(m.rows);
  for (int mu = 0; mu <= m.rows; ++mu) {
    p = p * m;
    if (p.is_zero()) return mu;
  }
  throw std::domain_error("matrix is not nilpotent");
}

Mat<GaussRat> promote(const Mat<Rat>& m) {
  Mat<GaussRat> g(m.rows, m.cols);
  for (std::size_t k = 0; k < m.a.size(); ++k) g.a[k] = GaussRat(m.a[k]);
  return g;
}

Vec<GaussRat> promote_vec(const Vec<Rat>& v) {
  Vec<GaussRat> g(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) g[k] = GaussRat(v[k]);
  return g;
}

Vec<Rat> real_part(const Vec<GaussRat>& v) {
  Vec<Rat> r(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) r[k] = v[k].re;
  return r;
}

Vec<Rat> imag_part(const Vec<GaussRat>& v) {
  Vec<Rat> r(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) r[k] = v[k].im;
  return r;
}

int vec_lex_compare(const Vec<Rat>& x, const Vec<Rat>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("lex compare of different lengths");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < y[i]) return -1;
    if (x[i] > y[i]) return 1;
  }
  return 0;
}

Vec<Rat> primitive_ray(const Vec<Rat>& v) {
  if (vec_is_zero(v)) throw std::invalid_argument("primitive ray of zero vector");
  mpz_class den(1);
  for (const Rat& x : v) {
    mpz_class d(mpq_denref(x.get_mpq_t()));
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
  }
  std::vector<mpz_class> num(v.size());
  mpz_class g(0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rat scaled = v[i] * Rat(den);
    num[i] = mpz_class(mpq_numref(scaled.get_mpq_t()));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num[i].get_mpz_t());
  }
  Vec<Rat> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), num[i].get_mpz_t(), g.get_mpz_t());
    out[i] = Rat(q);
  }
  return out;
}

std::vector<std::vector<std::string>> mat_to_strings(const Mat<Rat>& m) {
  std::vector<std::vector<std::string>> s(m.rows, std::vector<std::string>(m.cols));
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) s[i][j] = rat_to_string(m.at(i, j));
  }
  return s;
}

std::vector<std::vector<std::string>> mat_to_strings(const Mat<GaussRat>& m) {
  std::vector<std::vector<std::string>> s(m.rows, std::vector<std::string>(m.cols));
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) s[i][j] = gauss_to_string(m.at(i, j));
  }
  return s;
}

Mat<Rat> mat_from_strings(const std::vector<std::vector<std::string>>& s) {
  int rows = static_cast<int>(s.size());
  int cols = rows == 0 ? 0 : static_cast<int>(s[0].size());
  Mat<Rat> m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(s[i].size()) != cols) throw std::invalid_argument("ragged matrix rows");
    for (int j = 0; j < cols; ++j) m.at(i, j) = rat_from_string(s[i][j]);
  }
  return m;
}

Mat<GaussRat> gauss_mat_from_strings(const std::vector<std::vector<std::string>>& s) {
  int rows = static_cast<int>(s.size());
  int cols = rows == 0 ? 0 : static_cast<int>(s[0].size());
  Mat<GaussRat> m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(s[i].size()) != cols) throw std::invalid_argument("ragged matrix rows");
    for (int j = 0; j < cols; ++j) m.at(i, j) = gauss_from_string(s[i][j]);
  }
  return m;
}

}  // namespace hodgefan
