#pragma once

#include "hodgefan/matrix.hpp"

namespace hodgefan {

// Integral symplectic lattice (H, Q) with a declared weight and Hodge-number
// shape: weight 1 carries (g, g), weight 3 the Calabi-Yau shape (1, h, h, 1).
struct SymplecticLattice {
  int rank = 0;
  Mat<Rat> Q;                      // integral, antisymmetric, nondegenerate
  int weight = 1;                  // 1 or 3
  std::vector<int> hodge_numbers;  // h^{l,0},...,h^{0,l}; sums to rank

  // Throws std::invalid_argument when any structural invariant fails.
  void validate() const;

  int hodge_number(int p) const {
    if (p < 0 || p > weight) return 0;
    return hodge_numbers[static_cast<std::size_t>(weight - p)];
  }

  // Expected dim F^p = sum_{r >= p} h^{r, weight-r}.
  int expected_filtration_dim(int p) const {
    int d = 0;
    for (int r = p; r <= weight; ++r) d += hodge_number(r);
    return d;
  }
};

// Block antisymmetric form [[0, E], [-E, 0]] of rank 2g (the weight-1
// reference shape).
Mat<Rat> standard_symplectic_form(int g);

}  // namespace hodgefan
