#include "nilgeo/modulus.hpp"

#include <algorithm>
#include <map>

#include "nilgeo/bch.hpp"
#include "nilgeo/errors.hpp"
#include "nilgeo/metric.hpp"
#include "nilgeo/sampling.hpp"

namespace nilgeo {

namespace {

Rational pow_int(const Rational &base, long e) {
  if (e < 0) {
    if (base == 0)
      throw Singular("zero base with negative exponent");
    return pow_int(Rational(1) / base, -e);
  }
  Rational r(1);
  for (long i = 0; i < e; ++i)
    r *= base;
  return r;
}

// Integer layer weight of every ambient coordinate; requires the layers to
// be spanned by standard basis vectors.
std::vector<int> coordinate_weights(const DiagonalHeintzePair &pair) {
  const int n = pair.algebra().dim();
  std::vector<int> weights(n, 0);
  for (int j = 0; j < pair.layer_count(); ++j) {
    const Rational &lam = pair.layering().eigenvalues[j];
    if (lam.get_den() != 1 || lam <= 0)
      throw InputError("box rings need positive integer layer weights");
    const long w = lam.get_num().get_si();
    for (int i = 0; i < n; ++i) {
      VecQ e(n, Rational(0));
      e[i] = 1;
      if (pair.layering().layers[j].contains(e))
        weights[i] = static_cast<int>(w);
    }
  }
  for (int i = 0; i < n; ++i)
    if (weights[i] == 0)
      throw InputError("layers are not aligned with the coordinate axes");
  return weights;
}

DeltaPoly dp_zero() { return DeltaPoly{}; }

DeltaPoly dp_constant(const Rational &c) {
  DeltaPoly p;
  if (c != 0)
    p.coeff = {c};
  return p;
}

DeltaPoly dp_power(int k) {
  DeltaPoly p;
  p.coeff.assign(static_cast<size_t>(k) + 1, Rational(0));
  p.coeff[k] = 1;
  return p;
}

DeltaPoly dp_add(const DeltaPoly &a, const DeltaPoly &b) {
  DeltaPoly r;
  r.coeff.assign(std::max(a.coeff.size(), b.coeff.size()), Rational(0));
  for (size_t i = 0; i < a.coeff.size(); ++i)
    r.coeff[i] += a.coeff[i];
  for (size_t i = 0; i < b.coeff.size(); ++i)
    r.coeff[i] += b.coeff[i];
  return r;
}

DeltaPoly dp_mul(const DeltaPoly &a, const DeltaPoly &b) {
  if (a.coeff.empty() || b.coeff.empty())
    return dp_zero();
  DeltaPoly r;
  r.coeff.assign(a.coeff.size() + b.coeff.size() - 1, Rational(0));
  for (size_t i = 0; i < a.coeff.size(); ++i) {
    if (a.coeff[i] == 0)
      continue;
    for (size_t j = 0; j < b.coeff.size(); ++j)
      r.coeff[i + j] += a.coeff[i] * b.coeff[j];
  }
  return r;
}

DeltaPoly dp_scale(const DeltaPoly &a, const Rational &c) {
  DeltaPoly r = a;
  for (Rational &x : r.coeff)
    x *= c;
  return r;
}

// Coordinatewise bound of a bracket from bounds on the arguments, using
// absolute structure constants.
std::vector<DeltaPoly> bound_bracket(const LieAlgebra &L,
                                     const std::vector<DeltaPoly> &x,
                                     const std::vector<DeltaPoly> &y) {
  const int n = L.dim();
  std::vector<DeltaPoly> z(n);
  for (int i = 0; i < n; ++i) {
    if (x[i].is_zero())
      continue;
    for (int j = 0; j < n; ++j) {
      if (y[j].is_zero())
        continue;
      DeltaPoly prod = dp_mul(x[i], y[j]);
      for (int k = 0; k < n; ++k) {
        const Rational c = abs(L.c(i, j, k));
        if (c != 0)
          z[k] = dp_add(z[k], dp_scale(prod, c));
      }
    }
  }
  return z;
}

// Padding of the forced first-layer kind for every coordinate, plus the
// polynomial bounds on the higher layers.
std::vector<Rational> claim_padding_values(const BoxRing &ring) {
  const std::vector<DeltaPoly> table =
      padding_polynomials(ring.pair, ring.lambda);
  const int n = ring.pair.algebra().dim();
  std::vector<Rational> pads(n, Rational(0));
  for (int i = 0; i < n; ++i)
    if (i != ring.slab)
      pads[i] = table[i].eval(ring.delta);
  return pads;
}

void require_unit_box(const BoxRing &ring) {
  for (size_t i = 0; i < ring.half_widths.size(); ++i)
    if (static_cast<int>(i) != ring.slab && ring.half_widths[i] != 1)
      throw InputError("claim padding applies to the unit box only");
}

long weight_sum(const std::vector<int> &weights) {
  long q = 0;
  for (int w : weights)
    q += w;
  return q;
}

} // namespace

Rational DeltaPoly::eval(const Rational &delta) const {
  Rational r(0);
  for (size_t i = coeff.size(); i-- > 0;)
    r = r * delta + coeff[i];
  return r;
}

bool DeltaPoly::is_zero() const {
  return std::all_of(coeff.begin(), coeff.end(),
                     [](const Rational &c) { return c == 0; });
}

BoxRing make_box_ring(const DiagonalHeintzePair &pair,
                      const std::vector<Rational> &half_widths,
                      const std::vector<Rational> &lambda,
                      const Rational &delta) {
  const int n = pair.algebra().dim();
  if (static_cast<int>(half_widths.size()) != n ||
      static_cast<int>(lambda.size()) != n)
    throw InputError("widths and stretches must match the dimension");

  BoxRing ring{pair, half_widths, lambda, delta, 0, coordinate_weights(pair)};

  int slab = -1;
  for (int i = 0; i < n; ++i)
    if (ring.weights[i] == 1) {
      slab = i;
      break;
    }
  if (slab < 0)
    throw InputError("the ring needs a first-layer slab axis");
  ring.slab = slab;

  for (int i = 0; i < n; ++i) {
    if (lambda[i] <= 0)
      throw InputError("stretches must be positive");
    if (i == slab) {
      if (half_widths[i] != 0)
        throw InputError("the slab coordinate must have zero width");
    } else if (half_widths[i] <= 0) {
      throw InputError("half-widths must be positive off the slab");
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (ring.weights[i] == ring.weights[j] && lambda[i] < lambda[j])
        throw InputError("stretches must be sorted inside each layer");

  if (delta <= 0)
    throw InputError("delta must be positive");
  for (int i = 0; i < n; ++i)
    if (i != slab && delta >= half_widths[i])
      throw InputError("delta must be smaller than every half-width");
  return ring;
}

SegmentModulus segment_family_modulus(const BoxRing &ring) {
  if (ring.delta <= 0)
    throw InputError("delta must be positive");
  const long q = weight_sum(ring.weights);
  Rational slice(1);
  for (size_t i = 0; i < ring.half_widths.size(); ++i)
    if (static_cast<int>(i) != ring.slab)
      slice *= 2 * ring.half_widths[i];
  const Rational height = ring.delta / ring.lambda[ring.slab];
  SegmentModulus out;
  out.per_family = slice * pow_int(height, 1 - q);
  out.lower_bound = 2 * out.per_family;
  return out;
}

Rational upper_volume_bound(const BoxRing &ring, const Rational &j_det,
                            const std::vector<Rational> &padding) {
  if (ring.delta <= 0)
    throw InputError("delta must be positive");
  if (padding.size() != ring.half_widths.size())
    throw InputError("padding must cover every coordinate");
  const long q = weight_sum(ring.weights);
  Rational slice(1);
  for (size_t i = 0; i < ring.half_widths.size(); ++i)
    if (static_cast<int>(i) != ring.slab)
      slice *= 2 * (ring.half_widths[i] + padding[i]);
  const Rational height = ring.delta / ring.lambda[ring.slab];
  return j_det * slice * 2 * height / pow_int(ring.delta, q);
}

Rational upper_volume_bound(const BoxRing &ring, const Rational &j_det) {
  require_unit_box(ring);
  return upper_volume_bound(ring, j_det, claim_padding_values(ring));
}

std::vector<DeltaPoly> padding_polynomials(
    const DiagonalHeintzePair &pair, const std::vector<Rational> &lambda) {
  const LieAlgebra &L = pair.algebra();
  const int n = L.dim();
  if (static_cast<int>(lambda.size()) != n)
    throw InputError("stretches must match the dimension");
  for (const Rational &l : lambda)
    if (l <= 0)
      throw InputError("stretches must be positive");
  const std::vector<int> weights = coordinate_weights(pair);

  std::vector<DeltaPoly> yb(n), zb(n);
  for (int i = 0; i < n; ++i) {
    yb[i] = dp_constant(lambda[i]);
    zb[i] = dp_power(weights[i]);
  }

  // Accumulate the BCH words by bracket shape before taking absolute
  // values, so cancelling pairs such as [x,y] and [y,x] combine first.
  std::map<std::vector<bool>, Rational> words;
  if (L.nilpotency_class() >= 2)
    for (const DynkinWord &word : dynkin_words(L.nilpotency_class())) {
      std::vector<bool> letters = word.letters;
      Rational coef = word.coefficient;
      const size_t m = letters.size();
      if (letters[m - 2] && !letters[m - 1]) {
        std::swap(letters[m - 2], letters[m - 1]);
        coef = -coef;
      }
      words[letters] += coef;
    }

  std::vector<DeltaPoly> bound = zb;
  for (const auto &[letters, coef] : words) {
    if (coef == 0)
      continue;
    const size_t m = letters.size();
    std::vector<DeltaPoly> v = letters[m - 1] ? zb : yb;
    for (size_t i = m - 1; i-- > 0;)
      v = bound_bracket(L, letters[i] ? zb : yb, v);
    const Rational a = abs(coef);
    for (int k = 0; k < n; ++k)
      if (!v[k].is_zero())
        bound[k] = dp_add(bound[k], dp_scale(v[k], a));
  }

  std::vector<DeltaPoly> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = dp_scale(bound[i], Rational(1) / lambda[i]);
    if (!out[i].coeff.empty() && out[i].coeff[0] != 0)
      throw InputError("padding bound acquired a constant term");
  }
  return out;
}

InclusionReport inclusion_check(const BoxRing &ring, int samples,
                                std::uint64_t seed,
                                const std::vector<DeltaPoly> &higher_padding) {
  if (samples <= 0)
    throw InputError("sample count must be positive");
  if (higher_padding.size() != ring.half_widths.size())
    throw InputError("padding must cover every coordinate");
  require_unit_box(ring);
  const LieAlgebra &L = ring.pair.algebra();
  const int n = L.dim();

  // Image box targets: the slab and the rest of the first layer carry the
  // forced delta padding; higher layers carry the polynomial table.
  std::vector<Rational> target(n);
  for (int i = 0; i < n; ++i) {
    if (i == ring.slab)
      target[i] = ring.delta;
    else if (ring.weights[i] == 1)
      target[i] = ring.lambda[i] + ring.delta;
    else
      target[i] =
          ring.lambda[i] * (1 + higher_padding[i].eval(ring.delta));
  }

  std::vector<Rational> z_width(n);
  for (int i = 0; i < n; ++i)
    z_width[i] = pow_int(ring.delta, ring.weights[i]);

  InclusionReport report;
  auto probe = [&](const VecQ &y, const VecQ &z) {
    VecQ w = bch_multiply(L, y, z);
    for (int i = 0; i < n; ++i)
      if (abs(w[i]) > target[i]) {
        report.ok = false;
        report.coordinate = i;
        report.y = y;
        report.z = z;
        report.w = w;
        return false;
      }
    return true;
  };

  // Corner sweep: every coordinate of y and z at -1, 0, or +1 times its
  // amplitude. Violations of too-small boxes live at corners.
  long corner_count = 1;
  for (int i = 0; i < 2 * n; ++i) {
    corner_count *= 3;
    if (corner_count > samples)
      break;
  }
  int used = 0;
  if (corner_count <= samples) {
    std::vector<int> digits(2 * n, 0);
    while (true) {
      VecQ y(n, Rational(0)), z(n, Rational(0));
      for (int i = 0; i < n; ++i) {
        if (i != ring.slab)
          y[i] = Rational(digits[i] - 1) * ring.lambda[i];
        z[i] = Rational(digits[n + i] - 1) * z_width[i];
      }
      ++used;
      if (!probe(y, z))
        return report;
      int pos = 0;
      while (pos < 2 * n && digits[pos] == 2) {
        digits[pos] = 0;
        ++pos;
      }
      if (pos == 2 * n)
        break;
      ++digits[pos];
    }
  }

  Rng rng(seed);
  for (; used < samples; ++used) {
    VecQ y(n, Rational(0)), z(n, Rational(0));
    for (int i = 0; i < n; ++i) {
      if (i != ring.slab)
        y[i] = rng.dyadic(12) * ring.lambda[i];
      z[i] = rng.dyadic(12) * z_width[i];
    }
    if (!probe(y, z))
      return report;
  }
  return report;
}

InclusionReport inclusion_check(const BoxRing &ring, int samples,
                                std::uint64_t seed) {
  return inclusion_check(ring, samples, seed,
                         padding_polynomials(ring.pair, ring.lambda));
}

RigidityReport rigidity_check(const DiagonalHeintzePair &pair, const MatQ &a) {
  if (!is_carnot_type(pair))
    throw InputError("the determinant bound needs a bracket-generated grading");
  const int n = pair.algebra().dim();
  if (a.rows != n || a.cols != n)
    throw NotDiagonalForm("matrix size does not match the algebra");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i != j && a(i, j) != 0)
        throw NotDiagonalForm("matrix has off-diagonal entries");
      if (i == j && a(i, j) == 0)
        throw NotDiagonalForm("diagonal entry vanishes");
    }
  if (!is_graded_automorphism(pair, a))
    throw NotDiagonalForm("diagonal matrix is not a graded automorphism");
  const std::vector<int> weights = coordinate_weights(pair);

  RigidityReport report;
  report.j_det = 1;
  report.lambda11 = 0;
  for (int i = 0; i < n; ++i) {
    const Rational entry = abs(a(i, i));
    report.j_det *= entry;
    if (weights[i] == 1 && entry > report.lambda11)
      report.lambda11 = entry;
  }
  if (report.lambda11 == 0)
    throw InputError("the grading has no first layer");
  report.bound = pow_int(report.lambda11, weight_sum(weights));
  report.bound_holds = report.j_det <= report.bound;
  report.is_similarity = report.j_det == report.bound;
  return report;
}

} // namespace nilgeo
