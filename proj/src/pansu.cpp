#include "nilgeo/pansu.hpp"

#include <cmath>

#include "nilgeo/errors.hpp"

namespace nilgeo {

VecD carnot_dilation(const DiagonalHeintzePair &pair, double t, const VecD &x) {
  if (!pair.carnot())
    throw InputError("carnot dilation requires a Carnot-type pair");
  if (t <= 0)
    throw InputError("dilation parameter must be positive");
  int n = pair.algebra().dim();
  VecD out(x.size(), 0.0);
  for (int j = 0; j < pair.layer_count(); ++j) {
    double f = std::pow(t, j + 1);
    const MatQ &p = pair.layer_projector(j);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        out[r] += f * to_double(p(r, c)) * x[c];
  }
  return out;
}

namespace {

VecD negate(const VecD &x) {
  VecD y(x.size());
  for (size_t i = 0; i < x.size(); ++i)
    y[i] = -x[i];
  return y;
}

MatD linearize_at_scale(const DiagonalHeintzePair &pair, const FloatGroup &G,
                        const GroupMap &f, const VecD &p, double t) {
  int n = pair.algebra().dim();
  VecD fp_inv = negate(f(p));
  auto rescaled = [&](const VecD &v) {
    VecD moved = G.multiply(p, carnot_dilation(pair, t, v));
    return carnot_dilation(pair, 1.0 / t, G.multiply(fp_inv, f(moved)));
  };
  MatD A(n, n);
  for (int j = 0; j < n; ++j) {
    VecD e(n, 0.0);
    e[j] = 1.0;
    VecD plus = rescaled(e);
    e[j] = -1.0;
    VecD minus = rescaled(e);
    for (int i = 0; i < n; ++i)
      A(i, j) = (plus[i] - minus[i]) / 2.0;
  }
  return A;
}

double max_entry_diff(const MatD &a, const MatD &b) {
  double m = 0;
  for (size_t k = 0; k < a.a.size(); ++k)
    m = std::max(m, std::abs(a.a[k] - b.a[k]));
  return m;
}

// Layer-diagonal part of A. The (i,j) block of delta_{1/t} A delta_t scales
// by t^{j-i}, so any block with target layer i above source layer j must
// vanish for the t -> 0 limit to exist.
MatQ graded_part_checked(const DiagonalHeintzePair &pair, const MatQ &A) {
  int n = pair.algebra().dim();
  MatQ diag(n, n);
  for (int j = 0; j < pair.layer_count(); ++j)
    for (int i = 0; i < pair.layer_count(); ++i) {
      MatQ block = pair.layer_projector(i) * A * pair.layer_projector(j);
      bool zero = std::all_of(block.a.begin(), block.a.end(),
                              [](const Rational &x) { return x == 0; });
      if (i == j)
        diag = diag + block;
      else if (i > j && !zero)
        throw NonConvergent("affine map raises layer " + std::to_string(j + 1) +
                            " into layer " + std::to_string(i + 1) +
                            "; the blow-up diverges");
    }
  return diag;
}

} // namespace

MatQ affine_differential(const DiagonalHeintzePair &pair, const GroupMap &f) {
  if (!f.affine)
    throw InputError("map carries no exact affine data");
  MatQ diff = graded_part_checked(pair, f.affine->second);
  if (!is_graded_automorphism(pair, diff))
    throw NonConvergent("blow-up limit is not a graded automorphism");
  return diff;
}

PansuResult pansu_differential(const DiagonalHeintzePair &pair,
                               const GroupMap &f, const VecD &p,
                               const std::vector<double> &t_list, double tol) {
  if (!pair.carnot())
    throw InputError("pansu differential requires a Carnot-type pair");
  if (t_list.size() < 2)
    throw InputError("need at least two scales");
  for (size_t k = 1; k < t_list.size(); ++k)
    if (!(t_list[k] < t_list[k - 1]) || t_list[k] <= 0)
      throw InputError("scales must decrease strictly to 0");

  PansuResult result;
  result.t_list = t_list;
  FloatGroup G(pair.algebra());
  for (double t : t_list) {
    MatD A = linearize_at_scale(pair, G, f, p, t);
    for (double v : A.a)
      if (!std::isfinite(v) || std::abs(v) > 1e12)
        throw NonConvergent("rescaled maps blow up as t -> 0");
    result.per_scale.push_back(std::move(A));
  }
  size_t last = result.per_scale.size() - 1;
  const MatD &a_prev = result.per_scale[last - 1];
  const MatD &a_last = result.per_scale[last];
  result.cauchy_estimate = max_entry_diff(a_prev, a_last);
  double r = t_list[last - 1] / t_list[last];
  result.limit = a_last;
  for (size_t k = 0; k < result.limit.a.size(); ++k)
    result.limit.a[k] = (r * a_last.a[k] - a_prev.a[k]) / (r - 1.0);

  if (f.affine) {
    result.exact = graded_part_checked(pair, f.affine->second);
    return result;
  }
  if (result.cauchy_estimate > tol)
    throw NonConvergent("blow-up tail still moving by " +
                        std::to_string(result.cauchy_estimate));
  return result;
}

} // namespace nilgeo
