#include "hodgefan/lattice.hpp"

namespace hodgefan {

void SymplecticLattice::validate() const {
  if (rank <= 0 || rank % 2 != 0) throw std::invalid_argument("lattice rank must be even positive");
  if (Q.rows != rank || Q.cols != rank) throw std::invalid_argument("form size mismatch");
  if (!mat_is_integral(Q)) throw std::invalid_argument("form must be integral");
  if (!(Q.transpose() == -Q)) throw std::invalid_argument("form must be antisymmetric");
  Rat d = mat_det(Q);
  if (d == 0) throw std::invalid_argument("form must be nondegenerate");
  if (weight != 1 && weight != 3) throw std::invalid_argument("weight must be 1 or 3");
  if (static_cast<int>(hodge_numbers.size()) != weight + 1) {
    throw std::invalid_argument("hodge number list must have weight+1 entries");
  }
  int total = 0;
  for (std::size_t i = 0; i < hodge_numbers.size(); ++i) {
    if (hodge_numbers[i] < 0) throw std::invalid_argument("negative hodge number");
    if (hodge_numbers[i] != hodge_numbers[hodge_numbers.size() - 1 - i]) {
      throw std::invalid_argument("hodge numbers must be symmetric");
    }
    total += hodge_numbers[i];
  }
  if (total != rank) throw std::invalid_argument("hodge numbers must sum to rank");
  if (weight == 3 && (hodge_numbers[0] != 1 || hodge_numbers[3] != 1)) {
    throw std::invalid_argument("weight-3 lattice must have shape (1,h,h,1)");
  }
}

Mat<Rat> standard_symplectic_form(int g) {
  Mat<Rat> q(2 * g, 2 * g);
  for (int i = 0; i < g; ++i) {
    q.at(i, g + i) = Rat(1);
    q.at(g + i, i) = Rat(-1);
  }
  return q;
}

}  // namespace hodgefan
