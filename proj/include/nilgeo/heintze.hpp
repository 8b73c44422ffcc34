#pragma once

#include <vector>

#include "nilgeo/lie_algebra.hpp"

namespace nilgeo {

// Eigenvalue layering 0 < lambda_1 < ... < lambda_r of a diagonalizable
// derivation, with the eigenspaces in the same (ascending) order.
struct LayerDecomposition {
  std::vector<Rational> eigenvalues;
  std::vector<SubspaceQ> layers;
};

// A nilpotent Lie algebra together with a derivation that is diagonalizable
// over Q with positive eigenvalues. Construction verifies the derivation
// identity exactly, then certifies every eigenvalue/eigenspace with exact
// kernel computations (float eigensolver output is only used as a hint).
class DiagonalHeintzePair {
public:
  DiagonalHeintzePair(LieAlgebra algebra, MatQ derivation);

  const LieAlgebra &algebra() const { return algebra_; }
  const MatQ &derivation() const { return derivation_; }
  const LayerDecomposition &layering() const { return layering_; }
  int layer_count() const { return static_cast<int>(layering_.layers.size()); }
  const Rational &smallest_eigenvalue() const {
    return layering_.eigenvalues.front();
  }

  // Projector onto layer j along the other layers, exact.
  const MatQ &layer_projector(int j) const;

  bool carnot() const { return carnot_; }

private:
  LieAlgebra algebra_;
  MatQ derivation_;
  LayerDecomposition layering_;
  std::vector<MatQ> projectors_;
  bool carnot_ = false;
};

DiagonalHeintzePair layer_decomposition(const LieAlgebra &L, const MatQ &D);

// True iff the first layer generates the algebra and the eigenvalue ratios
// lambda_j / lambda_1 run through 1..r, i.e. the derivation is a positive
// multiple of a Carnot grading derivation.
bool is_carnot_type(const DiagonalHeintzePair &pair);

// Q = sum_j j * dim V_j for a Carnot-type pair (layer index after rescaling
// by lambda_1).
long homogeneous_dimension(const DiagonalHeintzePair &pair);

// One step of the preserved flag: the quotient of consecutive chain members
// with its induced derivation data.
struct FlagStep {
  LieAlgebra quotient_algebra;
  MatQ induced_derivation;
  std::vector<Rational> quotient_eigenvalues; // ascending
  Rational lambda_min;                        // smallest quotient eigenvalue
  int carnot_layer_count = 0;
};

// The canonical derivation-invariant flag 0 = n_0 < n_1 < ... < n_s = n with
// Carnot-type quotients.
struct PreservedFlag {
  std::vector<SubspaceQ> chain; // s + 1 members including 0 and the algebra
  std::vector<FlagStep> steps;  // s members

  int length() const { return static_cast<int>(steps.size()); }
};

// Builds the flag: the subalgebra generated by the first layer, its
// normalizer tower, and recursive refinement of every non-Carnot-type
// quotient pulled back through the quotient projection.
PreservedFlag preserved_sequence(const DiagonalHeintzePair &pair);

// The quotient pair n_i / n_{i-1} of the flag, 1-based index.
DiagonalHeintzePair induced_pair(const DiagonalHeintzePair &pair,
                                 const PreservedFlag &flag, int i);

} // namespace nilgeo
