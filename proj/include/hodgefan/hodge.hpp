#pragma once

#include "hodgefan/filtration.hpp"

namespace hodgefan {

struct NotMHSError : std::domain_error {
  explicit NotMHSError(const std::string& what) : std::domain_error(what) {}
};

// Two-variable splitting I^{p,q} of a mixed Hodge structure, with the
// derived dimension table h^{p,q}.
struct DeligneSplitting {
  int ambient = 0;
  std::map<std::pair<int, int>, Subspace<GaussRat>> components;

  int h(int p, int q) const {
    auto it = components.find({p, q});
    return it == components.end() ? 0 : it->second.dim();
  }

  // All (p,q) with h^{p,q} > 0, sorted.
  std::vector<std::pair<int, int>> support() const;
};

// I^{p,q} = F^p ∩ W_{p+q} ∩ (conj F^q ∩ W_{p+q} + Σ_{j≥1} conj F^{q-j} ∩
// W_{p+q-j-1}); throws NotMHS when the computed components fail to direct-sum
// to the full space.
DeligneSplitting deligne_splitting(const WeightFiltration& w, const HodgeFiltration& f);

struct SubCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct PolarizationReport {
  bool ok = false;
  std::vector<SubCheck> checks;

  const SubCheck* find(const std::string& name) const {
    for (const SubCheck& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

// Decides whether (W, F, N) is an N-polarized mixed Hodge structure of
// weight l for the lattice form: (i) W equals the JM filtration of N shifted
// to center l, (ii) N shifts F by one step, (iii) each primitive graded
// piece is polarized by Q(·, N^k ·), decided exactly via leading principal
// minors of the Hermitian Gram matrix. Sub-check names:
//   weight_filtration_match, transversality, graded_hodge_decomposition,
//   primitive_first_relation, primitive_positivity.
PolarizationReport is_polarized_mhs(const WeightFiltration& w, const HodgeFiltration& f,
                                    const Mat<Rat>& n, int l, const Mat<Rat>& q);

struct OrbitReport {
  bool ok = false;
  // One entry per generator; `ok` of entry i says N_i F^p ⊆ F^{p-1}.
  std::vector<SubCheck> transversality;
  PolarizationReport polarization;
};

// Thm-style orbit test: per-generator transversality plus polarized MHS at
// the canonical interior point (generator sum).
OrbitReport is_nilpotent_orbit(const NilpotentCone& cone, const HodgeFiltration& f, int l,
                               const Mat<Rat>& q);

enum class LMHSKind { Pure, HodgeTate, I, II, III, IV, Unknown };

struct LMHSType {
  LMHSKind kind = LMHSKind::Unknown;
  int a = 0;  // parameter for I(a) / IV(a); diagonal size for II/III labels
  // Dimension table kept for surfacing UnknownDiagram verbatim.
  std::vector<std::pair<std::pair<int, int>, int>> h_table;

  // "pure", "HT", "I_1", "II", "III", "IV_2", "unknown".
  std::string tag() const;

  friend bool operator==(const LMHSType& x, const LMHSType& y) {
    return x.kind == y.kind && x.a == y.a;
  }
  friend bool operator!=(const LMHSType& x, const LMHSType& y) { return !(x == y); }
};

// Maps the Deligne-splitting dimension table of (W(σ)[-l], F) to the LMHS
// template tag. Requires is_nilpotent_orbit to hold (pre), callers pass the
// lattice for the weight and Hodge numbers.
LMHSType classify_lmhs(const NilpotentCone& cone, const HodgeFiltration& f,
                       const SymplecticLattice& lattice, std::uint64_t seed = 2026);

// Classification of an already-computed splitting table.
LMHSType classify_splitting(const DeligneSplitting& s, const SymplecticLattice& lattice);

}  // namespace hodgefan
