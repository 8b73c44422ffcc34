#include "nilgeo/metric.hpp"

#include <cmath>
#include <memory>

#include "nilgeo/errors.hpp"
#include "nilgeo/sampling.hpp"

namespace nilgeo {

VecD to_doubles(const VecQ &v) {
  VecD out(v.size());
  for (size_t i = 0; i < v.size(); ++i)
    out[i] = to_double(v[i]);
  return out;
}

DInnerProduct::DInnerProduct(const DiagonalHeintzePair &pair, MatQ gram)
    : gram_(std::move(gram)), n_(pair.algebra().dim()) {
  if (gram_.rows != n_ || gram_.cols != n_)
    throw InputError("inner product matrix shape mismatch");
  if (gram_ != gram_.transposed())
    throw InputError("inner product matrix must be symmetric");
  const auto &layers = pair.layering().layers;
  for (size_t a = 0; a < layers.size(); ++a)
    for (size_t b = a + 1; b < layers.size(); ++b)
      for (int i = 0; i < layers[a].dim(); ++i)
        for (int j = 0; j < layers[b].dim(); ++j) {
          VecQ gv = matvec(gram_, layers[b].basis().row(j));
          Rational acc(0);
          for (int k = 0; k < n_; ++k)
            acc += layers[a].basis()(i, k) * gv[k];
          if (acc != 0)
            throw InputError("layers " + std::to_string(a + 1) + " and " +
                             std::to_string(b + 1) +
                             " are not perpendicular for this inner product");
        }
  for (int k = 1; k <= n_; ++k) {
    MatQ minor(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        minor(i, j) = gram_(i, j);
    if (det(minor) <= 0)
      throw InputError("inner product matrix is not positive definite");
  }
  gram_d_.resize(static_cast<size_t>(n_) * n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      gram_d_[static_cast<size_t>(i) * n_ + j] = to_double(gram_(i, j));
}

DInnerProduct DInnerProduct::standard(const DiagonalHeintzePair &pair) {
  return DInnerProduct(pair, MatQ::identity(pair.algebra().dim()));
}

double DInnerProduct::length(const VecD &v) const {
  double acc = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      acc += v[i] * gram_d_[static_cast<size_t>(i) * n_ + j] * v[j];
  return std::sqrt(std::max(acc, 0.0));
}

namespace {

std::vector<std::vector<double>>
projectors_as_doubles(const DiagonalHeintzePair &pair) {
  int n = pair.algebra().dim();
  std::vector<std::vector<double>> out;
  for (int j = 0; j < pair.layer_count(); ++j) {
    const MatQ &p = pair.layer_projector(j);
    std::vector<double> pd(static_cast<size_t>(n) * n);
    for (size_t k = 0; k < p.a.size(); ++k)
      pd[k] = to_double(p.a[k]);
    out.push_back(std::move(pd));
  }
  return out;
}

VecD apply_flat(const std::vector<double> &m, const VecD &x) {
  int n = static_cast<int>(x.size());
  VecD y(x.size(), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      y[i] += m[static_cast<size_t>(i) * n + j] * x[j];
  return y;
}

} // namespace

double quasi_norm(const DiagonalHeintzePair &pair, const DInnerProduct &ip,
                  const VecD &v) {
  auto projs = projectors_as_doubles(pair);
  double acc = 0;
  for (int j = 0; j < pair.layer_count(); ++j) {
    double len = ip.length(apply_flat(projs[j], v));
    double lambda = to_double(pair.layering().eigenvalues[j]);
    if (len > 0)
      acc += std::pow(len, 1.0 / lambda);
  }
  return acc;
}

double quasi_norm(const DiagonalHeintzePair &pair, const DInnerProduct &ip,
                  const VecQ &v) {
  return quasi_norm(pair, ip, to_doubles(v));
}

double quasi_distance(const DiagonalHeintzePair &pair, const DInnerProduct &ip,
                      const VecQ &x, const VecQ &y) {
  return quasi_norm(pair, ip,
                    bch_multiply(pair.algebra(), group_inverse(x), y));
}

double quasi_distance(const DiagonalHeintzePair &pair, const DInnerProduct &ip,
                      const VecD &x, const VecD &y) {
  FloatGroup group(pair.algebra());
  VecD neg(x.size());
  for (size_t i = 0; i < x.size(); ++i)
    neg[i] = -x[i];
  return quasi_norm(pair, ip, group.multiply(neg, y));
}

VecD dilation(const DiagonalHeintzePair &pair, double t, const VecD &x) {
  auto projs = projectors_as_doubles(pair);
  VecD out(x.size(), 0.0);
  for (int j = 0; j < pair.layer_count(); ++j) {
    double factor = std::exp(t * to_double(pair.layering().eigenvalues[j]));
    VecD part = apply_flat(projs[j], x);
    for (size_t i = 0; i < out.size(); ++i)
      out[i] += factor * part[i];
  }
  return out;
}

MatQ carnot_dilation_matrix(const DiagonalHeintzePair &pair,
                            const Rational &t) {
  if (!pair.carnot())
    throw InputError("carnot dilation requires a Carnot-type pair");
  if (t <= 0)
    throw InputError("dilation parameter must be positive");
  int n = pair.algebra().dim();
  MatQ m(n, n);
  for (int j = 0; j < pair.layer_count(); ++j) {
    Rational f = pow_rational(t, j + 1);
    const MatQ &p = pair.layer_projector(j);
    for (size_t k = 0; k < p.a.size(); ++k)
      m.a[k] += f * p.a[k];
  }
  return m;
}

VecQ carnot_dilation(const DiagonalHeintzePair &pair, const Rational &t,
                     const VecQ &x) {
  return matvec(carnot_dilation_matrix(pair, t), x);
}

bool is_graded_automorphism(const DiagonalHeintzePair &pair, const MatQ &A) {
  const LieAlgebra &L = pair.algebra();
  int n = L.dim();
  if (A.rows != n || A.cols != n)
    throw InputError("linear map shape mismatch");
  if (rank(A) != n)
    throw Singular("linear map is not invertible");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      VecQ ei(n, Rational(0)), ej(n, Rational(0));
      ei[i] = 1;
      ej[j] = 1;
      if (matvec(A, L.bracket(ei, ej)) !=
          L.bracket(matvec(A, ei), matvec(A, ej)))
        return false;
    }
  for (const SubspaceQ &layer : pair.layering().layers) {
    MatQ image(layer.dim(), n);
    for (int i = 0; i < layer.dim(); ++i) {
      VecQ y = matvec(A, layer.basis().row(i));
      for (int j = 0; j < n; ++j)
        image(i, j) = y[j];
    }
    if (SubspaceQ::span(std::move(image)) != layer)
      return false;
  }
  return true;
}

GroupMap make_affine_map(const DiagonalHeintzePair &pair, VecQ translation,
                         MatQ linear) {
  auto group = std::make_shared<FloatGroup>(pair.algebra());
  VecD n_d = to_doubles(translation);
  int n = pair.algebra().dim();
  std::vector<double> lin_d(static_cast<size_t>(n) * n);
  for (size_t k = 0; k < linear.a.size(); ++k)
    lin_d[k] = to_double(linear.a[k]);
  GroupMap map;
  map.affine = std::make_pair(std::move(translation), std::move(linear));
  map.eval = [group, n_d, lin_d](const VecD &x) {
    return group->multiply(n_d, apply_flat(lin_d, x));
  };
  return map;
}

GroupMap make_opaque_map(std::function<VecD(const VecD &)> f) {
  GroupMap map;
  map.eval = std::move(f);
  return map;
}

std::pair<double, double> empirical_bilip_constant(
    const DiagonalHeintzePair &pair, const DInnerProduct &ip, const GroupMap &f,
    const BilipSpec &spec,
    const std::vector<std::pair<VecD, VecD>> &extra_pairs) {
  int n = pair.algebra().dim();
  double lower = 0, upper = 0;
  bool first = true;
  auto record = [&](const VecD &x, const VecD &y, bool user_pair) {
    double den = quasi_distance(pair, ip, x, y);
    if (den == 0) {
      if (user_pair)
        throw DegenerateSample("probe pair has zero separation");
      return;
    }
    double ratio = quasi_distance(pair, ip, f(x), f(y)) / den;
    if (first) {
      lower = upper = ratio;
      first = false;
    } else {
      lower = std::min(lower, ratio);
      upper = std::max(upper, ratio);
    }
  };

  VecD origin(n, 0.0);
  double log2 = std::log(2.0);
  for (int g = 0; g < spec.grid; ++g) {
    double e = spec.grid == 1
                   ? spec.log2_min
                   : spec.log2_min +
                         (spec.log2_max - spec.log2_min) * g / (spec.grid - 1);
    double t = e * log2; // e^{tD} scales rho by 2^e
    for (int b = 0; b < n; ++b) {
      VecD v(n, 0.0);
      v[b] = 1.0;
      record(origin, dilation(pair, t, v), false);
    }
  }
  Rng rng(spec.seed);
  for (int s = 0; s < spec.samples; ++s) {
    VecD x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = to_double(rng.dyadic(12));
      y[i] = to_double(rng.dyadic(12));
    }
    record(x, y, false);
  }
  for (const auto &[x, y] : extra_pairs)
    record(x, y, true);
  if (first)
    throw DegenerateSample("no usable probe pairs");
  return {lower, upper};
}

double quasi_triangle_constant(const DiagonalHeintzePair &pair,
                               const DInnerProduct &ip, std::uint64_t seed,
                               int samples) {
  int n = pair.algebra().dim();
  Rng rng(seed);
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    VecQ x(n), y(n), z(n);
    for (int i = 0; i < n; ++i) {
      x[i] = rng.dyadic(12);
      y[i] = rng.dyadic(12);
      z[i] = rng.dyadic(12);
    }
    double xz = quasi_distance(pair, ip, x, z);
    double xy = quasi_distance(pair, ip, x, y);
    double yz = quasi_distance(pair, ip, y, z);
    if (xy + yz > 0)
      worst = std::max(worst, xz / (xy + yz));
  }
  return worst;
}

} // namespace nilgeo
