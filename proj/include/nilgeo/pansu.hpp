#pragma once

#include <optional>

#include "nilgeo/metric.hpp"

namespace nilgeo {

using MatD = Mat<double>;

// delta_t x = sum_j t^j (layer_j x) for real t > 0, Carnot-type pairs only.
VecD carnot_dilation(const DiagonalHeintzePair &pair, double t, const VecD &x);

struct PansuResult {
  std::vector<double> t_list;
  std::vector<MatD> per_scale; // linearization of the rescaled map at each t
  MatD limit;                  // Richardson extrapolation of the tail
  double cauchy_estimate = 0;  // max entry change over the last step
  std::optional<MatQ> exact;   // set on the affine-with-graded-part fast path
};

// Blow-up differential: for each t the map v -> delta_{1/t}(f(p)^{-1} *
// f(p * delta_t v)) is sampled at +-basis points and linearized by central
// differences; the limit is Richardson-extrapolated from the two smallest
// scales. Throws NonConvergent when the tail keeps moving by more than tol
// (or blows up), which is how a map without a blow-up limit at p reports.
PansuResult pansu_differential(const DiagonalHeintzePair &pair,
                               const GroupMap &f, const VecD &p,
                               const std::vector<double> &t_list,
                               double tol = 1e-8);

// Exact differential of an affine map: the layer-diagonal part of the linear
// part, provided no component maps a lower layer into a higher one (those
// blow up under conjugation by dilations).
MatQ affine_differential(const DiagonalHeintzePair &pair, const GroupMap &f);

} // namespace nilgeo
