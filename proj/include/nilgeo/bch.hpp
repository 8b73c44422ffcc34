#pragma once

#include <functional>
#include <vector>

#include "nilgeo/lie_algebra.hpp"

namespace nilgeo {

// One word of the Dynkin series for log(exp X exp Y): a letter sequence
// (false = X, true = Y) with its rational coefficient. Words longer than the
// nilpotency class are never emitted; their brackets vanish identically.
struct DynkinWord {
  std::vector<bool> letters;
  Rational coefficient;
};

// Enumerates all words of total degree 2..max_degree with nonzero bracket
// potential (the degree-1 part X + Y is handled by callers). Deterministic
// order. Cached per max_degree.
const std::vector<DynkinWord> &dynkin_words(int max_degree);

// Truncated group product in exponential coordinates of the first kind.
// Exact for nilpotent algebras: all dropped brackets vanish identically.
VecQ bch_multiply(const LieAlgebra &L, const VecQ &x, const VecQ &y);

inline VecQ group_inverse(const VecQ &x) {
  VecQ y(x.size());
  for (size_t i = 0; i < x.size(); ++i)
    y[i] = -x[i];
  return y;
}

// Float mirror of the structure table for numeric paths.
struct FloatGroup {
  int n = 0;
  int cls = 1;
  std::vector<double> table; // [i][j][k]

  explicit FloatGroup(const LieAlgebra &L);

  std::vector<double> bracket(const std::vector<double> &x,
                              const std::vector<double> &y) const;
  std::vector<double> multiply(const std::vector<double> &x,
                               const std::vector<double> &y) const;
};

} // namespace nilgeo
