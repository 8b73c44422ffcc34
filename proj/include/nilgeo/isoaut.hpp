#pragma once

#include <string>
#include <vector>

#include "nilgeo/heintze.hpp"
#include "nilgeo/metric.hpp"
#include "nilgeo/quadfield.hpp"

namespace nilgeo {

using MatX = Mat<QuadExt>;
using VecX = std::vector<QuadExt>;
using SubspaceX = Subspace<QuadExt>;

// Bracket extended linearly to coefficients in Q(sqrt2, sqrt3).
VecX bracket(const LieAlgebra &L, const VecX &x, const VecX &y);

// Rank of ad(X): v -> [X, v], exact.
int rank_ad(const LieAlgebra &L, const VecQ &x);
int rank_ad(const LieAlgebra &L, const VecX &x);

// Inner products on the layered algebra are given by a full Gram matrix with
// mutually orthogonal layers; entries may involve sqrt2 and sqrt3.
void check_layered_gram(const DiagonalHeintzePair &pair, const MatX &gram);

// True iff A is a Lie algebra automorphism, preserves every layer, and
// preserves the inner product: on the first layer always, and on every layer
// when the pair is not of Carnot type (the quasi-norm then reads each layer
// separately).
bool is_isometric_graded_auto(const DiagonalHeintzePair &pair,
                              const MatX &gram, const MatX &a);
bool is_isometric_graded_auto(const DiagonalHeintzePair &pair,
                              const DInnerProduct &ip, const MatQ &a);

struct IsoAutReport {
  std::vector<MatX> elements; // closed under composition and inverse
  int order = 0;
  std::string group_label; // "(Z2^3):Z2", "Z2^k", or "order N"
};

// Complete exact enumeration when the isometric graded automorphism group is
// finite. The rank-ad level sets of the first layer are decomposed into
// distinguished planes; every candidate permutes the planes, which forces
// invariant lines through iterated orthogonal complements; the remaining
// scales and signs are solved against the Gram and bracket conditions.
// Throws NotFinite when a continuous family remains.
IsoAutReport enumerate_finite_IA(const DiagonalHeintzePair &pair,
                                 const MatX &gram);

// Dimension of the Lie algebra of the isometric graded automorphism group:
// layer-preserving derivations that are skew with respect to the inner
// product (on the first layer for Carnot pairs, on every layer otherwise).
int identity_component_dim(const DiagonalHeintzePair &pair, const MatX &gram);

struct ConjugationVerdict {
  int dim1 = 0;
  int dim2 = 0;
  int order1 = -1; // -1 when the group is not finite
  int order2 = -1;
  std::string group1;
  std::string group2;
  std::string verdict; // "IMPOSSIBLE" or "INCONCLUSIVE"
};

// Counting obstruction to conjugating the first isometry group into the
// second: IMPOSSIBLE when dim IA_1 > dim IA_2, or when both are finite and
// |IA_1| > |IA_2|; otherwise INCONCLUSIVE.
ConjugationVerdict no_conjugation_verdict(const DiagonalHeintzePair &pair,
                                          const MatX &gram1,
                                          const MatX &gram2);

} // namespace nilgeo
