#pragma once

#include "hodgefan/subspace.hpp"

namespace hodgefan {

struct NotNilpotentError : std::domain_error {
  NotNilpotentError() : std::domain_error("matrix is not nilpotent") {}
};

struct NotUnipotentError : std::domain_error {
  NotUnipotentError() : std::domain_error("matrix is not unipotent") {}
};

// Span of the given vectors in canonical (RREF) form. Order-insensitive,
// idempotent on its own output basis.
template <typename K>
Subspace<K> canonical_subspace(int ambient_dim, const std::vector<Vec<K>>& vectors) {
  return Subspace<K>::from_vectors(vectors, ambient_dim);
}

// Finite-series exponential of a nilpotent matrix; throws NotNilpotentError.
Mat<Rat> exp_nilpotent(const Mat<Rat>& n);

// Finite-series logarithm of a unipotent matrix (T - I nilpotent, checked by
// powering up to the ambient dimension); throws NotUnipotentError.
Mat<Rat> log_unipotent(const Mat<Rat>& t);

// Lie bracket a*b - b*a.
Mat<Rat> bracket(const Mat<Rat>& a, const Mat<Rat>& b);

bool commute(const Mat<Rat>& a, const Mat<Rat>& b);

// Lie-algebra membership for the form q: q*n + n^T*q = 0.
bool in_symplectic_lie_algebra(const Mat<Rat>& n, const Mat<Rat>& q);

// Group membership for the form q: g^T*q*g = q.
bool preserves_form(const Mat<Rat>& g, const Mat<Rat>& q);

// Adjoint action g*n*g^{-1}; throws std::domain_error when g is singular.
Mat<Rat> ad_action(const Mat<Rat>& g, const Mat<Rat>& n);

}  // namespace hodgefan
