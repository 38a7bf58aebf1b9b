#pragma once

#include <cstdint>
#include <map>

#include "hodgefan/exact_core.hpp"
#include "hodgefan/lattice.hpp"

namespace hodgefan {

struct InteriorDisagreementError : std::domain_error {
  explicit InteriorDisagreementError(const std::string& what) : std::domain_error(what) {}
};

// Increasing exhaustive filtration W_k of the rational lattice. Normal form:
// `w[i]` is W_{lo+i}; W_k = 0 for k < lo, and the last stored step is the
// first one equal to the full space (W_k = full for k >= top_index()).
struct WeightFiltration {
  int center = 0;
  int lo = 0;
  std::vector<Subspace<Rat>> w;

  int ambient() const { return w.empty() ? 0 : w.back().ambient; }
  int top_index() const { return lo + static_cast<int>(w.size()) - 1; }

  Subspace<Rat> at(int k) const {
    if (w.empty()) throw std::logic_error("empty weight filtration");
    if (k < lo) return Subspace<Rat>::zero(ambient());
    if (k > top_index()) return w.back();
    return w[static_cast<std::size_t>(k - lo)];
  }

  // Shifted filtration W[-s]: index k holds the old W_{k-s}.
  WeightFiltration shifted(int s) const {
    WeightFiltration out = *this;
    out.lo += s;
    out.center += s;
    return out;
  }

  // Build from explicit steps; trims leading zero steps and trailing
  // duplicates of the full space, and checks monotonicity/exhaustiveness.
  static WeightFiltration from_steps(int center, const std::map<int, Subspace<Rat>>& steps,
                                     int ambient);

  friend bool operator==(const WeightFiltration& a, const WeightFiltration& b) {
    return a.center == b.center && a.lo == b.lo && a.w == b.w;
  }
  friend bool operator!=(const WeightFiltration& a, const WeightFiltration& b) {
    return !(a == b);
  }
};

// Decreasing filtration F^p of the complexified lattice. Normal form: `f[i]`
// is F^{lo+i}; F^p = full for p <= lo, and the last stored step is the last
// nonzero one (F^p = 0 for p > top_index()).
struct HodgeFiltration {
  int lo = 0;
  std::vector<Subspace<GaussRat>> f;

  int ambient() const { return f.empty() ? 0 : f.front().ambient; }
  int top_index() const { return lo + static_cast<int>(f.size()) - 1; }

  Subspace<GaussRat> at(int p) const {
    if (f.empty()) throw std::logic_error("empty hodge filtration");
    if (p < lo) return Subspace<GaussRat>::full(ambient());
    if (p > top_index()) return Subspace<GaussRat>::zero(ambient());
    return f[static_cast<std::size_t>(p - lo)];
  }

  static HodgeFiltration from_steps(const std::map<int, Subspace<GaussRat>>& steps, int ambient);

  // Structural membership in the flag variety of the lattice: step dimensions
  // match the Hodge numbers and Q(F^p, F^{l+1-p}) = 0.
  void validate(const SymplecticLattice& lattice) const;

  friend bool operator==(const HodgeFiltration& a, const HodgeFiltration& b) {
    return a.lo == b.lo && a.f == b.f;
  }
  friend bool operator!=(const HodgeFiltration& a, const HodgeFiltration& b) { return !(a == b); }
};

// Commuting, linearly independent nilpotent generators; the cone they span
// is always understood as the relatively open positive span.
struct NilpotentCone {
  std::vector<Mat<Rat>> generators;

  int ambient() const { return generators.empty() ? 0 : generators.front().rows; }

  // Checks nilpotency, pairwise commutation, linear independence, and (when
  // a form is supplied) infinitesimal antisymmetry. Throws
  // std::invalid_argument naming the failing property.
  void validate(const Mat<Rat>* q = nullptr) const;

  Mat<Rat> interior_point() const;
};

// Center-0 Jacobson-Morozov weight filtration of a nilpotent matrix, via
// W_k = sum_j img(N^j) ∩ ker(N^{j+k+1}).
WeightFiltration jm_weight_filtration(const Mat<Rat>& n);

// Weight filtration of the cone: computed at the generator sum, then
// recomputed at `samples` random rational interior points and required to
// agree; disagreement throws InteriorDisagreementError.
WeightFiltration cone_weight_filtration(const NilpotentCone& cone, std::uint64_t seed = 2026,
                                        int samples = 3);

// gamma . W: transport of each step by an invertible matrix.
WeightFiltration transport(const Mat<Rat>& g, const WeightFiltration& w);
HodgeFiltration transport(const Mat<Rat>& g, const HodgeFiltration& f);

}  // namespace hodgefan
