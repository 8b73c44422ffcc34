#pragma once

#include <functional>
#include <vector>

#include "nilgeo/heintze.hpp"
#include "nilgeo/metric.hpp"
#include "nilgeo/spd.hpp"

namespace nilgeo {

// Exact matrix of the dilation that scales layer V_{lambda_j} by
// scale^{lambda_j}. Requires an integer eigenvalue ladder unless scale == 1.
MatQ dilation_matrix_exact(const DiagonalHeintzePair &pair,
                           const Rational &scale);

// x -> translation * (linear x) with a layer-preserving graded automorphism
// as linear part. Similarities and their affine conjugates both live here.
struct GradedAffine {
  VecQ translation;
  MatQ linear;

  friend bool operator==(const GradedAffine &a, const GradedAffine &b) {
    return a.translation == b.translation && a.linear == b.linear;
  }
};

GradedAffine graded_affine(const DiagonalHeintzePair &pair, VecQ translation,
                           MatQ linear);
GradedAffine affine_identity(const DiagonalHeintzePair &pair);
GradedAffine compose(const DiagonalHeintzePair &pair, const GradedAffine &a,
                     const GradedAffine &b);
GradedAffine invert(const DiagonalHeintzePair &pair, const GradedAffine &a);
GradedAffine conjugate(const DiagonalHeintzePair &pair, const GradedAffine &f,
                       const GradedAffine &g);
VecQ apply(const DiagonalHeintzePair &pair, const GradedAffine &a,
           const VecQ &x);

// Element x -> n * e^{tD}(A x) of the similarity group, with the dilation
// stored through its multiplicative scale s = e^t.
class SimilarityElement {
public:
  SimilarityElement(const DiagonalHeintzePair &pair, VecQ translation,
                    Rational scale, MatQ graded);

  const DiagonalHeintzePair &pair() const { return *pair_; }
  const VecQ &translation() const { return translation_; }
  const Rational &scale() const { return scale_; }
  const MatQ &graded() const { return graded_; }

  MatQ linear_part() const;
  GradedAffine affine() const;
  VecQ apply(const VecQ &x) const;

private:
  const DiagonalHeintzePair *pair_;
  VecQ translation_;
  Rational scale_;
  MatQ graded_;
};

SimilarityElement similarity_identity(const DiagonalHeintzePair &pair);
SimilarityElement compose(const SimilarityElement &a,
                          const SimilarityElement &b);
SimilarityElement invert(const SimilarityElement &a);

// Matrix of a layer-preserving map restricted to V_1, in the basis given by
// the rows of the first layer.
MatQ v1_block(const DiagonalHeintzePair &pair, const MatQ &linear);
Mat<double> v1_block(const DiagonalHeintzePair &pair,
                     const Mat<double> &linear);

// f*mu(x) = (Df(x)|V1)^T [mu(f x)].
SpdPoint pullback(const DiagonalHeintzePair &pair, const GradedAffine &f,
                  const SpdPoint &mu_at_image);
SpdPoint pullback(const DiagonalHeintzePair &pair,
                  const Mat<double> &differential,
                  const SpdPoint &mu_at_image);

struct GeneratedGroup {
  const DiagonalHeintzePair *pair = nullptr;
  std::vector<GradedAffine> generators;
};

using StructureField = std::function<SpdPoint(const VecQ &)>;

struct ConformalPoint {
  VecQ base;
  SpdPoint value;
};

struct OrbitResult {
  std::vector<SpdPoint> points;
  double diameter = 0;
  bool closed = false;
  int cap_used = 0;
};

// M_x = {g*mu0(x) : g a word of length <= word_cap in the generators and
// their inverses}, deduplicated within 1e-9 and sorted by a canonical key.
OrbitResult orbit_structure(const GeneratedGroup &group,
                            const StructureField &mu0, const VecQ &x,
                            int word_cap = 6);

// Circumcenter of the orbit. Throws OrbitNotStable when the orbit diameter
// still changes by >= tol between caps word_cap and word_cap + 1.
ConformalPoint invariant_structure(const GeneratedGroup &group,
                                   const StructureField &mu0, const VecQ &x,
                                   int word_cap = 6, double tol = 1e-10);

struct BlowupStep {
  Rational scale;
  double dilatation_value = 0;
};

struct BlowupReport {
  std::vector<BlowupStep> steps;
  double limit_dilatation = 0;
};

// K of the V1 differential of e^{s_j D} h_j g h_j^{-1} e^{-s_j D} at the
// sample points, measured in the inner product of the metric.
BlowupReport blowup_demo(const DiagonalHeintzePair &pair,
                         const DInnerProduct &ip,
                         const std::vector<GradedAffine> &h,
                         const std::vector<Rational> &scales,
                         const GradedAffine &g,
                         const std::vector<VecQ> &samples);

} // namespace nilgeo
