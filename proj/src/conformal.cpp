#include "nilgeo/conformal.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include <Eigen/QR>

#include "nilgeo/bch.hpp"
#include "nilgeo/errors.hpp"

namespace nilgeo {

namespace {

Rational int_pow(const Rational &base, unsigned long e) {
  Rational out(1);
  for (unsigned long i = 0; i < e; ++i)
    out *= base;
  return out;
}

std::vector<Rational> element_key(const GradedAffine &a) {
  std::vector<Rational> key = a.translation;
  key.insert(key.end(), a.linear.a.begin(), a.linear.a.end());
  return key;
}

bool lex_less(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) < b(i, j))
        return true;
      if (a(i, j) > b(i, j))
        return false;
    }
  return false;
}

MatQ v1_gram(const DiagonalHeintzePair &pair, const DInnerProduct &ip) {
  const MatQ &basis = pair.layering().layers[0].basis();
  return basis * ip.gram() * basis.transposed();
}

} // namespace

MatQ dilation_matrix_exact(const DiagonalHeintzePair &pair,
                           const Rational &scale) {
  if (scale <= 0)
    throw InputError("dilation scale must be positive");
  const int n = pair.algebra().dim();
  if (scale == 1)
    return MatQ::identity(n);
  MatQ out(n, n);
  for (int j = 0; j < pair.layer_count(); ++j) {
    const Rational &lam = pair.layering().eigenvalues[j];
    if (lam.get_den() != 1)
      throw InputError(
          "exact dilation needs integer eigenvalues; got a fractional layer");
    Rational factor = int_pow(scale, lam.get_num().get_ui());
    const MatQ &proj = pair.layer_projector(j);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        out(r, c) += factor * proj(r, c);
  }
  return out;
}

GradedAffine graded_affine(const DiagonalHeintzePair &pair, VecQ translation,
                           MatQ linear) {
  if (static_cast<int>(translation.size()) != pair.algebra().dim())
    throw InputError("translation length does not match the algebra");
  if (!is_graded_automorphism(pair, linear))
    throw InputError("linear part is not a graded automorphism");
  return {std::move(translation), std::move(linear)};
}

GradedAffine affine_identity(const DiagonalHeintzePair &pair) {
  const int n = pair.algebra().dim();
  return {VecQ(n, Rational(0)), MatQ::identity(n)};
}

GradedAffine compose(const DiagonalHeintzePair &pair, const GradedAffine &a,
                     const GradedAffine &b) {
  return {bch_multiply(pair.algebra(), a.translation,
                       matvec(a.linear, b.translation)),
          a.linear * b.linear};
}

GradedAffine invert(const DiagonalHeintzePair &, const GradedAffine &a) {
  MatQ inv = inverse(a.linear);
  return {matvec(inv, group_inverse(a.translation)), inv};
}

GradedAffine conjugate(const DiagonalHeintzePair &pair, const GradedAffine &f,
                       const GradedAffine &g) {
  return compose(pair, f, compose(pair, g, invert(pair, f)));
}

VecQ apply(const DiagonalHeintzePair &pair, const GradedAffine &a,
           const VecQ &x) {
  return bch_multiply(pair.algebra(), a.translation, matvec(a.linear, x));
}

SimilarityElement::SimilarityElement(const DiagonalHeintzePair &pair,
                                     VecQ translation, Rational scale,
                                     MatQ graded)
    : pair_(&pair), translation_(std::move(translation)),
      scale_(std::move(scale)), graded_(std::move(graded)) {
  if (static_cast<int>(translation_.size()) != pair.algebra().dim())
    throw InputError("translation length does not match the algebra");
  if (scale_ <= 0)
    throw InputError("similarity scale must be positive");
  if (!is_graded_automorphism(pair, graded_))
    throw InputError("graded part is not a graded automorphism");
  dilation_matrix_exact(pair, scale_);
}

MatQ SimilarityElement::linear_part() const {
  return dilation_matrix_exact(*pair_, scale_) * graded_;
}

GradedAffine SimilarityElement::affine() const {
  return {translation_, linear_part()};
}

VecQ SimilarityElement::apply(const VecQ &x) const {
  return bch_multiply(pair_->algebra(), translation_, matvec(linear_part(), x));
}

SimilarityElement similarity_identity(const DiagonalHeintzePair &pair) {
  const int n = pair.algebra().dim();
  return SimilarityElement(pair, VecQ(n, Rational(0)), Rational(1),
                           MatQ::identity(n));
}

SimilarityElement compose(const SimilarityElement &a,
                          const SimilarityElement &b) {
  if (&a.pair() != &b.pair())
    throw PairMismatch("similarity elements live over different pairs");
  VecQ moved = matvec(a.linear_part(), b.translation());
  return SimilarityElement(
      a.pair(), bch_multiply(a.pair().algebra(), a.translation(), moved),
      a.scale() * b.scale(), a.graded() * b.graded());
}

SimilarityElement invert(const SimilarityElement &a) {
  MatQ lin_inv = inverse(a.linear_part());
  VecQ moved = matvec(lin_inv, group_inverse(a.translation()));
  return SimilarityElement(a.pair(), std::move(moved), 1 / a.scale(),
                           inverse(a.graded()));
}

MatQ v1_block(const DiagonalHeintzePair &pair, const MatQ &linear) {
  return restriction_matrix(pair.layering().layers[0], linear);
}

Mat<double> v1_block(const DiagonalHeintzePair &pair,
                     const Mat<double> &linear) {
  const MatQ &basis = pair.layering().layers[0].basis();
  const int m = basis.rows;
  const int n = basis.cols;
  Eigen::MatrixXd bt(n, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      bt(j, i) = basis(i, j).get_d();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(bt);
  Mat<double> out(m, m);
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd image(n);
    for (int r = 0; r < n; ++r) {
      double acc = 0;
      for (int c = 0; c < n; ++c)
        acc += linear(r, c) * basis(i, c).get_d();
      image[r] = acc;
    }
    Eigen::VectorXd coords = qr.solve(image);
    for (int j = 0; j < m; ++j)
      out(j, i) = coords[j];
  }
  return out;
}

SpdPoint pullback(const DiagonalHeintzePair &pair, const GradedAffine &f,
                  const SpdPoint &mu_at_image) {
  Eigen::MatrixXd block = to_eigen(v1_block(pair, f.linear));
  if (block.rows() != mu_at_image.size())
    throw InputError("structure size does not match dim V1");
  return act(block.transpose(), mu_at_image);
}

SpdPoint pullback(const DiagonalHeintzePair &pair,
                  const Mat<double> &differential,
                  const SpdPoint &mu_at_image) {
  Mat<double> blk = v1_block(pair, differential);
  Eigen::MatrixXd block(blk.rows, blk.cols);
  for (int i = 0; i < blk.rows; ++i)
    for (int j = 0; j < blk.cols; ++j)
      block(i, j) = blk(i, j);
  if (block.rows() != mu_at_image.size())
    throw InputError("structure size does not match dim V1");
  return act(block.transpose(), mu_at_image);
}

OrbitResult orbit_structure(const GeneratedGroup &group,
                            const StructureField &mu0, const VecQ &x,
                            int word_cap) {
  if (group.pair == nullptr)
    throw InputError("orbit needs a pair");
  if (word_cap < 1)
    throw InputError("word cap must be at least 1");
  const DiagonalHeintzePair &pair = *group.pair;

  std::vector<GradedAffine> steps;
  for (const GradedAffine &g : group.generators) {
    steps.push_back(g);
    steps.push_back(invert(pair, g));
  }

  std::map<std::vector<Rational>, GradedAffine> seen;
  GradedAffine id = affine_identity(pair);
  seen.emplace(element_key(id), id);
  std::vector<GradedAffine> frontier = {id};

  OrbitResult out;
  out.cap_used = 0;
  for (int level = 1; level <= word_cap && !frontier.empty(); ++level) {
    std::vector<GradedAffine> next;
    for (const GradedAffine &w : frontier)
      for (const GradedAffine &s : steps) {
        GradedAffine cand = compose(pair, w, s);
        auto key = element_key(cand);
        if (seen.emplace(key, cand).second)
          next.push_back(std::move(cand));
      }
    frontier = std::move(next);
    out.cap_used = level;
  }
  out.closed = frontier.empty();

  for (const auto &entry : seen) {
    const GradedAffine &g = entry.second;
    SpdPoint value = pullback(pair, g, mu0(apply(pair, g, x)));
    bool fresh = true;
    for (const SpdPoint &p : out.points)
      if (distance(p, value) < 1e-9) {
        fresh = false;
        break;
      }
    if (fresh)
      out.points.push_back(std::move(value));
  }
  std::sort(out.points.begin(), out.points.end(),
            [](const SpdPoint &a, const SpdPoint &b) {
              return lex_less(a.matrix(), b.matrix());
            });
  for (std::size_t i = 0; i < out.points.size(); ++i)
    for (std::size_t j = i + 1; j < out.points.size(); ++j)
      out.diameter =
          std::max(out.diameter, distance(out.points[i], out.points[j]));
  return out;
}

ConformalPoint invariant_structure(const GeneratedGroup &group,
                                   const StructureField &mu0, const VecQ &x,
                                   int word_cap, double tol) {
  OrbitResult at_cap = orbit_structure(group, mu0, x, word_cap);
  OrbitResult extended = orbit_structure(group, mu0, x, word_cap + 1);
  if (!extended.closed &&
      std::abs(extended.diameter - at_cap.diameter) >= tol)
    throw OrbitNotStable(
        "orbit diameter still changes between word caps; group not uniform");
  CircumcenterResult center = circumcenter(extended.points, tol);
  return {x, center.center};
}

BlowupReport blowup_demo(const DiagonalHeintzePair &pair,
                         const DInnerProduct &ip,
                         const std::vector<GradedAffine> &h,
                         const std::vector<Rational> &scales,
                         const GradedAffine &g,
                         const std::vector<VecQ> &samples) {
  if (h.size() != scales.size())
    throw InputError("blowup needs one scale per group element");
  if (h.empty())
    throw InputError("blowup needs a nonempty sequence");
  Eigen::MatrixXd gram = to_eigen(v1_gram(pair, ip));

  BlowupReport report;
  for (std::size_t j = 0; j < h.size(); ++j) {
    GradedAffine dil = {VecQ(pair.algebra().dim(), Rational(0)),
                        dilation_matrix_exact(pair, scales[j])};
    GradedAffine frame = compose(pair, dil, h[j]);
    GradedAffine moved = conjugate(pair, frame, g);
    // Affine maps have constant differentials, so every sample point sees
    // the same dilatation; samples only document where the demo was read.
    double k = dilatation(to_eigen(v1_block(pair, moved.linear)), gram);
    (void)samples;
    report.steps.push_back({scales[j], k});
  }
  report.limit_dilatation = report.steps.back().dilatation_value;
  return report;
}

} // namespace nilgeo
