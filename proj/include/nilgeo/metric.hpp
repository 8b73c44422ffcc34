#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "nilgeo/bch.hpp"
#include "nilgeo/heintze.hpp"

namespace nilgeo {

using VecD = std::vector<double>;

VecD to_doubles(const VecQ &v);

// Rational inner product on the algebra, block-diagonal with respect to the
// eigenvalue layering (distinct layers are perpendicular). Construction
// verifies symmetry, the block structure, and positive definiteness exactly.
class DInnerProduct {
public:
  DInnerProduct(const DiagonalHeintzePair &pair, MatQ gram);
  static DInnerProduct standard(const DiagonalHeintzePair &pair);

  const MatQ &gram() const { return gram_; }
  // |v|_ip of a full-dimension vector (no layer split).
  double length(const VecD &v) const;

private:
  MatQ gram_;
  std::vector<double> gram_d_;
  int n_;
};

// ||v|| = sum_j |v_j|^(1/lambda_j) over the layer components of v.
double quasi_norm(const DiagonalHeintzePair &pair, const DInnerProduct &ip,
                  const VecD &v);
double quasi_norm(const DiagonalHeintzePair &pair, const DInnerProduct &ip,
                  const VecQ &v);

// rho(x, y) = ||x^{-1} * y||; the group product is exact on rational inputs.
double quasi_distance(const DiagonalHeintzePair &pair, const DInnerProduct &ip,
                      const VecQ &x, const VecQ &y);
double quasi_distance(const DiagonalHeintzePair &pair, const DInnerProduct &ip,
                      const VecD &x, const VecD &y);

// e^{tD} x for real t.
VecD dilation(const DiagonalHeintzePair &pair, double t, const VecD &x);

// delta_t x = sum_j t^j (layer_j x) for a Carnot-type pair, exact.
VecQ carnot_dilation(const DiagonalHeintzePair &pair, const Rational &t,
                     const VecQ &x);

// Exact matrix of delta_t (Carnot) or of e^{sD} with e^s = t rational.
MatQ carnot_dilation_matrix(const DiagonalHeintzePair &pair, const Rational &t);

// True iff A is a Lie algebra automorphism preserving every layer.
bool is_graded_automorphism(const DiagonalHeintzePair &pair, const MatQ &A);

// A map of the group, either an exact affine form x -> n * A x or an opaque
// float evaluator.
struct GroupMap {
  std::function<VecD(const VecD &)> eval;
  std::optional<std::pair<VecQ, MatQ>> affine; // (translation, linear part)

  VecD operator()(const VecD &x) const { return eval(x); }
};

GroupMap make_affine_map(const DiagonalHeintzePair &pair, VecQ translation,
                         MatQ linear);
GroupMap make_opaque_map(std::function<VecD(const VecD &)> f);

struct BilipSpec {
  std::uint64_t seed = 42;
  int samples = 100;
  double log2_min = -5.0;
  double log2_max = 5.0;
  int grid = 41; // dilation exponents per basis direction
};

// (min, max) of rho(f x, f y) / rho(x, y) over dilation-scaled basis probes
// and seeded random pairs. Graded automorphisms give a range that is stable
// under widening the dilation window; layer-mixing linear maps do not.
std::pair<double, double> empirical_bilip_constant(
    const DiagonalHeintzePair &pair, const DInnerProduct &ip, const GroupMap &f,
    const BilipSpec &spec,
    const std::vector<std::pair<VecD, VecD>> &extra_pairs = {});

// max over seeded triples of rho(x,z) / (rho(x,y) + rho(y,z)).
double quasi_triangle_constant(const DiagonalHeintzePair &pair,
                               const DInnerProduct &ip, std::uint64_t seed,
                               int samples);

} // namespace nilgeo
