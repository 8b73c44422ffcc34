#pragma once

#include <cstdint>
#include <vector>

#include "nilgeo/heintze.hpp"
#include "nilgeo/linalg.hpp"
#include "nilgeo/rational.hpp"

namespace nilgeo {

// Polynomial in delta with nonnegative rational coefficients; coeff[k]
// multiplies delta^k.
struct DeltaPoly {
  std::vector<Rational> coeff;

  Rational eval(const Rational &delta) const;
  bool is_zero() const;
};

// Box ring around the slab C0 = {x_slab = 0, |x_i| <= half_widths[i]}.
// lambda holds the per-coordinate stretches of the diagonal map carrying
// the ring, non-increasing inside each layer, and delta is the squeezed
// thickness. Built through make_box_ring, which also records the integer
// layer weight of every coordinate.
struct BoxRing {
  DiagonalHeintzePair pair;
  std::vector<Rational> half_widths;
  std::vector<Rational> lambda;
  Rational delta;
  int slab = 0;
  std::vector<int> weights;
};

// Validates widths, stretches, and the smallness of delta; the pair must
// have integer layer weights and coordinate-aligned layers.
BoxRing make_box_ring(const DiagonalHeintzePair &pair,
                      const std::vector<Rational> &half_widths,
                      const std::vector<Rational> &lambda,
                      const Rational &delta);

// Modulus of one family of parallel segments of height delta/lambda11 over
// the slab, and the doubled lower bound obtained from the two families on
// both sides of the slab.
struct SegmentModulus {
  Rational per_family;
  Rational lower_bound;
};

SegmentModulus segment_family_modulus(const BoxRing &ring);

// Volume bound J * slice(F) * 2 (delta/lambda11) / delta^Q for the image
// ring, with the slice padded additively per coordinate. The overload
// without explicit padding uses the bounds from padding_polynomials.
Rational upper_volume_bound(const BoxRing &ring, const Rational &j_det,
                            const std::vector<Rational> &padding);
Rational upper_volume_bound(const BoxRing &ring, const Rational &j_det);

// For products w = y * z with |y_i| <= lambda_i (zero on the slab) and
// |z_i| <= delta^{weight_i}, returns per-coordinate polynomials P with
// |w_i - y_i| <= lambda_i P_i(delta). No P has a constant term; bracket
// terms always carry at least one z factor.
std::vector<DeltaPoly> padding_polynomials(const DiagonalHeintzePair &pair,
                                           const std::vector<Rational> &lambda);

struct InclusionReport {
  bool ok = true;
  int coordinate = -1;
  VecQ y, z, w;
};

// Samples products y * z against the padded image box and reports the
// first escape, if any. Corner configurations are swept before random
// samples so violations are found deterministically. The overload with an
// explicit table only overrides the padding of the higher layers; the
// first-layer padding is forced by the box geometry.
InclusionReport inclusion_check(const BoxRing &ring, int samples,
                                std::uint64_t seed);
InclusionReport inclusion_check(const BoxRing &ring, int samples,
                                std::uint64_t seed,
                                const std::vector<DeltaPoly> &higher_padding);

// Determinant bound for a diagonal graded automorphism: J = |det A| never
// exceeds lambda11^Q, the top first-layer stretch raised to the
// homogeneous dimension, with equality exactly for similarities.
struct RigidityReport {
  Rational j_det;
  Rational lambda11;
  Rational bound;
  bool bound_holds = false;
  bool is_similarity = false;
};

RigidityReport rigidity_check(const DiagonalHeintzePair &pair, const MatQ &a);

} // namespace nilgeo
