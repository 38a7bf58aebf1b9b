#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hodgefan/hodge.hpp"

namespace hodgefan {

// The supplied weight filtration does not have the step dimensions / duality
// shape the requested reduction needs.
struct WrongShapeError : std::domain_error {
  explicit WrongShapeError(const std::string& what) : std::domain_error(what) {}
};

// A group element fails to preserve the relevant steps of the weight
// filtration, so it induces nothing on the reduced side.
struct NotParabolicError : std::domain_error {
  explicit NotParabolicError(const std::string& what) : std::domain_error(what) {}
};

struct NotTypeIError : std::domain_error {
  explicit NotTypeIError(const std::string& what) : std::domain_error(what) {}
};

struct NotTypeIVError : std::domain_error {
  explicit NotTypeIVError(const std::string& what) : std::domain_error(what) {}
};

// The defining reality / rationality / shape conditions of a reduction fail
// on the supplied data; the message names the first failing sub-check.
struct RealityFailureError : std::domain_error {
  explicit RealityFailureError(const std::string& what) : std::domain_error(what) {}
};

// Which reduction shape the adapted basis targets. Weight1 and CY3TypeI share
// the three-step shape 0 ⊂ W_{-1} ⊂ W_0 ⊂ W_1 = H; CY3TypeIV expects the
// five-step shape with one-dimensional W_{-2} = W_{-3} and W_1 = W_2 of
// corank one.
enum class ReductionKind { Weight1, CY3TypeI, CY3TypeIV };

// Ordered basis adapted to a weight filtration, with the form brought to the
// fixed reference shape. Column order:
//   Weight1 / CY3TypeI: e_1..e_a | f_1..f_m | f^m..f^1 | e^a..e^1
//   CY3TypeIV:          w- | e_1..e_a | f_1..f_m | f^m..f^1 | e^a..e^1 | w+
// where e spans the deepest nontrivial step, the f-pairs span the middle
// graded piece, and Q(e^i, e_j) = s δ_ij, Q(f^t, f_t) = s δ_st,
// Q(w+, w-) = s, all other reference pairings zero (s = sign).
struct AdaptedBasis {
  ReductionKind kind = ReductionKind::Weight1;
  int a = 0;     // dual pairs bridging the deepest and shallowest steps
  int m = 0;     // hyperbolic pairs in the middle graded piece
  int sign = 1;  // s in the reference pairings
  Mat<Rat> change;      // columns are the adapted vectors, in order
  Mat<Rat> change_inv;  // cached inverse (adapted coordinates of a vector)
  mpz_class index_denominator{1};  // lcm of denominators across `change`

  int rank() const { return change.rows; }
  bool has_omega() const { return kind == ReductionKind::CY3TypeIV; }

  // 1-based column positions of the labeled vectors.
  int e_col(int i) const { return (has_omega() ? 1 : 0) + (i - 1); }
  int f_col(int t) const { return (has_omega() ? 1 : 0) + a + (t - 1); }
  int f_dual_col(int t) const { return (has_omega() ? 1 : 0) + a + 2 * m - t; }
  int e_dual_col(int i) const { return (has_omega() ? 1 : 0) + a + 2 * m + (a - i); }
  int omega_minus_col() const { return 0; }
  int omega_plus_col() const { return rank() - 1; }

  // Display labels in column order ("w-", "e1", ..., "f^1", "e^1", "w+").
  std::vector<std::string> labels() const;

  // The Gram matrix the adapted vectors realize: change^T Q change equals
  // this exactly.
  Mat<Rat> reference_form() const;
};

// Deterministic adapted basis for (W, Q): the deepest step is spanned by its
// reduced row echelon basis, middle pairs come from symplectic Gram-Schmidt
// over the echelon complement, dual vectors solve the pairing equations with
// an exact correction making the dual block isotropic. Throws WrongShape when
// the filtration does not have the requested shape or is not Q-self-dual.
AdaptedBasis adapted_symplectic_basis(const WeightFiltration& w, const Mat<Rat>& q,
                                      ReductionKind kind, int sign = 1);

// gamma = levi * unipotent with levi block-diagonal and unipotent block-upper
// unipotent in the adapted coordinates.
struct LeviDecomposition {
  Mat<Rat> levi;
  Mat<Rat> unipotent;
};

// Requires gamma to preserve the form realized by `basis` and to be
// block-upper-triangular in adapted coordinates (throws NotParabolic
// otherwise, naming the offending entry).
LeviDecomposition levi_decompose(const Mat<Rat>& gamma, const AdaptedBasis& basis);

// The weight-1 structure induced on W_1/W_{-2} by a type-IV-shaped weight
// filtration: projection to the middle adapted coordinates, the induced form,
// and the induced action of filtration-compatible endomorphisms.
struct TypeIVQuotient {
  AdaptedBasis basis;
  SymplecticLattice reduced;  // weight 1, rank = input rank - 2
  Mat<Rat> proj;              // (rank-2) x rank: middle adapted coordinates

  // Induced endomorphism on the quotient; requires m(W_{-2}) ⊆ W_{-2} and
  // m(W_1) ⊆ W_1 (throws std::invalid_argument naming the failure).
  Mat<Rat> reduce_map(const Mat<Rat>& m) const;

  // Image cone in the quotient, re-expressed by its extreme rays. Throws
  // std::invalid_argument when the image is not simplicial.
  NilpotentCone reduce_cone(const NilpotentCone& c) const;
};

TypeIVQuotient type_iv_quotient_map(const WeightFiltration& w, const Mat<Rat>& q, int sign = 1);

// A reduction's output: a standalone weight-1 scenario plus the bookkeeping
// tying it back to its source. `degenerate()` marks the parameter-zero case
// where nothing survives the reduction; such outputs carry no cones or
// filtration and are excluded from downstream fan decisions.
struct ReducedScenario {
  SymplecticLattice lattice;
  std::vector<std::pair<std::string, NilpotentCone>> cones;
  std::optional<HodgeFiltration> filtration;
  std::vector<std::pair<std::string, Mat<Rat>>> witnesses;

  // Provenance.
  std::string source;      // label of the input scenario/cone
  std::string method;      // "type_I_restrict" or "type_IV_quotient"
  LMHSType input_type;
  LMHSType reduced_type;
  mpz_class index_denominator{1};  // denominator slack of the reduced data
  AdaptedBasis basis;              // adapted basis of the input
  Mat<Rat> projection;             // input coordinates -> reduced coordinates

  // Positivity convention carried by the reduced form: the sign ε such that
  // ε·Q̃ polarizes the reduced structure whenever the declared source form
  // polarizes the input. The restriction route keeps the source convention
  // (ε = +1); the quotient route flips it (ε = -1), because pairing against a
  // single power of N on the quotient picks up Q(Nv, N²v) = -Q(v, N³v).
  // Everything except positivity (weight filtrations, classification,
  // commutation, form antisymmetry) is ε-independent.
  int q_sign = 1;

  bool degenerate() const { return lattice.rank == 0; }
};

// Type-I reduction: restricts the structure to the rank-2a sublattice spanned
// by the real vectors β_i = Re(α_i) and the deepest-step basis e_1..e_a,
// where α_i spans the distinguished splitting component over the dual block.
// Requires (cone, f) to classify as I(a); a pure classification returns the
// degenerate scenario. Throws NotTypeI otherwise, RealityFailure when the
// defining reality/pairing conditions fail, NotParabolic for a witness that
// does not preserve the filtration.
ReducedScenario type_I_restrict(const NilpotentCone& cone, const HodgeFiltration& f,
                                const SymplecticLattice& lattice,
                                const std::vector<std::pair<std::string, Mat<Rat>>>& witnesses = {},
                                const std::string& source = "cone", int sign = 1);

// Type-IV reduction: passes to W_1/W_{-2} with the induced form, filtration
// F̃^1 = image of F^2 ∩ W_1, and induced cone/witness actions. Requires
// (cone, f) to classify as IV(a); throws NotTypeIV otherwise.
ReducedScenario type_IV_quotient(const NilpotentCone& cone, const HodgeFiltration& f,
                                 const SymplecticLattice& lattice,
                                 const std::vector<std::pair<std::string, Mat<Rat>>>& witnesses = {},
                                 const std::string& source = "cone", int sign = 1);

}  // namespace hodgefan
