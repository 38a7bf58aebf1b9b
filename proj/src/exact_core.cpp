#include "hodgefan/exact_core.hpp"

namespace hodgefan {

Mat<Rat> exp_nilpotent(const Mat<Rat>& n) {
  if (!n.is_square()) throw std::invalid_argument("exp of non-square matrix");
  if (!mat_is_nilpotent(n)) throw NotNilpotentError();
  Mat<Rat> result = Mat<Rat>::identity(n.rows);
  Mat<Rat> term = Mat<Rat>::identity(n.rows);
  for (int k = 1; k <= n.rows; ++k) {
    term = term * n;
    if (term.is_zero()) break;
    Rat coeff(1);
    for (int j = 2; j <= k; ++j) coeff /= j;
    result = result + coeff * term;
  }
  return result;
}

Mat<Rat> log_unipotent(const Mat<Rat>& t) {
  if (!t.is_square()) throw std::invalid_argument("log of non-square matrix");
  Mat<Rat> u = t - Mat<Rat>::identity(t.rows);
  if (!mat_is_nilpotent(u)) throw NotUnipotentError();
  Mat<Rat> result(t.rows, t.rows);
  Mat<Rat> power = Mat<Rat>::identity(t.rows);
  for (int k = 1; k <= t.rows; ++k) {
    power = power * u;
    if (power.is_zero()) break;
    Rat coeff(k % 2 == 1 ? 1 : -1);
    coeff /= k;
    result = result + coeff * power;
  }
  return result;
}

Mat<Rat> bracket(const Mat<Rat>& a, const Mat<Rat>& b) { return a * b - b * a; }

bool commute(const Mat<Rat>& a, const Mat<Rat>& b) { return bracket(a, b).is_zero(); }

bool in_symplectic_lie_algebra(const Mat<Rat>& n, const Mat<Rat>& q) {
  return (q * n + n.transpose() * q).is_zero();
}

bool preserves_form(const Mat<Rat>& g, const Mat<Rat>& q) {
  return g.transpose() * q * g == q;
}

Mat<Rat> ad_action(const Mat<Rat>& g, const Mat<Rat>& n) {
  Mat<Rat> inv;
  if (!mat_inverse(g, inv)) throw std::domain_error("adjoint action by singular matrix");
  return g * n * inv;
}

}  // namespace hodgefan
