#include "doctest.h"

#include <Eigen/SVD>

#include "nilgeo/conformal.hpp"
#include "nilgeo/sampling.hpp"

using namespace nilgeo;

namespace {

MatQ diag(const std::vector<Rational> &d) {
  MatQ m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i)
    m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

// Graded automorphisms of the Heisenberg algebra are a 2x2 block on the
// first layer and its determinant on the center.
MatQ heis_auto(const Rational &a, const Rational &b, const Rational &c,
               const Rational &d) {
  MatQ m(3, 3);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  m(2, 2) = a * d - b * c;
  return m;
}

MatQ rotation35() { return heis_auto(rat(3, 5), rat(-4, 5), rat(4, 5), rat(3, 5)); }

MatQ quarter_turn() { return heis_auto(0, -1, 1, 0); }

MatQ shear() { return heis_auto(1, 1, 0, 1); }

GradedAffine rand_affine(const DiagonalHeintzePair &pair, Rng &rng) {
  Rational a, b, c, d;
  do {
    a = rng.rational(3, 3);
    b = rng.rational(3, 3);
    c = rng.rational(3, 3);
    d = rng.rational(3, 3);
  } while (a * d - b * c == 0);
  VecQ n{rng.rational(4, 4), rng.rational(4, 4), rng.rational(4, 4)};
  return graded_affine(pair, n, heis_auto(a, b, c, d));
}

SpdPoint spd2(double a, double b, double c) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, b, c;
  return SpdPoint(m);
}

double svd_ratio(const Eigen::Matrix2d &m) {
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(m);
  return svd.singularValues()(0) / svd.singularValues()(1);
}

} // namespace

TEST_CASE("exact dilation matrices follow the eigenvalue ladder") {
  auto pair = layer_decomposition(make_heisenberg(), diag({1, 1, 2}));
  CHECK(dilation_matrix_exact(pair, 3) == diag({3, 3, 9}));
  CHECK(dilation_matrix_exact(pair, rat(1, 2)) ==
        diag({rat(1, 2), rat(1, 2), rat(1, 4)}));
  CHECK(dilation_matrix_exact(pair, 1) == MatQ::identity(3));
  CHECK_THROWS_AS(dilation_matrix_exact(pair, 0), InputError);
  CHECK_THROWS_AS(dilation_matrix_exact(pair, -2), InputError);

  auto frac = layer_decomposition(make_abelian(2), diag({1, rat(3, 2)}));
  CHECK(dilation_matrix_exact(frac, 1) == MatQ::identity(2));
  CHECK_THROWS_AS(dilation_matrix_exact(frac, 2), InputError);
}

TEST_CASE("graded affine maps compose exactly and invert to the identity") {
  auto pair = layer_decomposition(make_heisenberg(), diag({1, 1, 2}));
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    GradedAffine f = rand_affine(pair, rng);
    GradedAffine g = rand_affine(pair, rng);
    VecQ x{rng.rational(4, 4), rng.rational(4, 4), rng.rational(4, 4)};
    CHECK(apply(pair, compose(pair, f, g), x) ==
          apply(pair, f, apply(pair, g, x)));
    CHECK(compose(pair, f, invert(pair, f)) == affine_identity(pair));
    CHECK(compose(pair, invert(pair, f), f) == affine_identity(pair));
    CHECK(conjugate(pair, f, affine_identity(pair)) == affine_identity(pair));
  }
  MatQ bad = MatQ::identity(3);
  bad(2, 2) = 2;
  CHECK_THROWS_AS(graded_affine(pair, VecQ(3, Rational(0)), bad), InputError);
  CHECK_THROWS_AS(graded_affine(pair, VecQ(2, Rational(0)), quarter_turn()),
                  InputError);
}

TEST_CASE("similarity elements multiply scales and match their affine form") {
  auto pair = layer_decomposition(make_heisenberg(), diag({1, 1, 2}));
  VecQ zero(3, Rational(0));
  SimilarityElement ds(pair, zero, rat(2), MatQ::identity(3));
  SimilarityElement dt(pair, zero, rat(3, 2), MatQ::identity(3));
  SimilarityElement both = compose(ds, dt);
  CHECK(both.scale() == 3);
  CHECK(both.linear_part() == diag({3, 3, 9}));

  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    VecQ n{rng.rational(4, 4), rng.rational(4, 4), rng.rational(4, 4)};
    SimilarityElement s(pair, n, rat(2), rotation35());
    SimilarityElement t(pair, {rat(1), rat(0), rat(1, 2)}, rat(1, 2),
                        quarter_turn());
    VecQ x{rng.rational(4, 4), rng.rational(4, 4), rng.rational(4, 4)};
    CHECK(compose(s, t).apply(x) == s.apply(t.apply(x)));
    CHECK(apply(pair, s.affine(), x) == s.apply(x));
    SimilarityElement back = compose(s, invert(s));
    CHECK(back.scale() == 1);
    CHECK(back.graded() == MatQ::identity(3));
    CHECK(back.translation() == zero);
  }

  CHECK_THROWS_AS(SimilarityElement(pair, zero, rat(-1), MatQ::identity(3)),
                  InputError);
  auto other = layer_decomposition(make_heisenberg(), diag({1, 1, 2}));
  SimilarityElement a(pair, zero, rat(2), MatQ::identity(3));
  SimilarityElement b(other, zero, rat(2), MatQ::identity(3));
  CHECK_THROWS_AS(compose(a, b), PairMismatch);
}

TEST_CASE("the first layer block reads off the V1 action") {
  auto pair = layer_decomposition(make_heisenberg(), diag({1, 1, 2}));
  MatQ lin = heis_auto(rat(1), rat(2), rat(3), rat(5));
  MatQ blk = v1_block(pair, lin);
  REQUIRE(blk.rows == 2);
  CHECK(blk(0, 0) == 1);
  CHECK(blk(0, 1) == 2);
  CHECK(blk(1, 0) == 3);
  CHECK(blk(1, 1) == 5);

  Mat<double> lind(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      lind(i, j) = lin(i, j).get_d();
  Mat<double> blkd = v1_block(pair, lind);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(blkd(i, j) == doctest::Approx(blk(i, j).get_d()).epsilon(1e-12));
}

TEST_CASE("pullback ignores dilations and is contravariant") {
  auto pair = layer_decomposition(make_heisenberg(), diag({1, 1, 2}));
  SpdPoint mu = spd2(2.0, 0.3, 0.7);

  GradedAffine dil = {VecQ(3, Rational(0)), dilation_matrix_exact(pair, 5)};
  CHECK(distance(pullback(pair, dil, mu), mu) < 1e-12);

  GradedAffine rot = graded_affine(pair, VecQ(3, Rational(0)), rotation35());
  CHECK(distance(pullback(pair, rot, SpdPoint::identity(2)),
                 SpdPoint::identity(2)) < 1e-12);

  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    GradedAffine f = rand_affine(pair, rng);
    GradedAffine g = rand_affine(pair, rng);
    SpdPoint nu = spd2(1.0 + rng.real(0.0, 2.0), rng.real(-0.5, 0.5),
                       1.0 + rng.real(0.0, 2.0));
    SpdPoint lhs = pullback(pair, compose(pair, g, f), nu);
    SpdPoint rhs = pullback(pair, f, pullback(pair, g, nu));
    CHECK(distance(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("orbits of finite rotation groups close") {
  auto pair = layer_decomposition(make_heisenberg(), diag({1, 1, 2}));
  GeneratedGroup group{&pair,
                       {graded_affine(pair, VecQ(3, Rational(0)),
                                      quarter_turn())}};
  SpdPoint mu = spd2(2.0, 0.0, 0.5);
  StructureField field = [&](const VecQ &) { return mu; };
  OrbitResult orbit = orbit_structure(group, field, VecQ(3, Rational(0)), 6);
  CHECK(orbit.closed);
  CHECK(orbit.cap_used <= 4);
  REQUIRE(orbit.points.size() == 2);
  double expect = distance(spd2(2.0, 0.0, 0.5), spd2(0.5, 0.0, 2.0));
  CHECK(orbit.diameter == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("translation orbits of a constant field are singletons") {
  auto pair = layer_decomposition(make_heisenberg(), diag({1, 1, 2}));
  GeneratedGroup group{&pair,
                       {graded_affine(pair, {rat(1), rat(0), rat(0)},
                                      MatQ::identity(3))}};
  SpdPoint mu = spd2(1.5, 0.2, 0.8);
  StructureField field = [&](const VecQ &) { return mu; };
  OrbitResult orbit = orbit_structure(group, field, {rat(0), rat(1), rat(0)});
  CHECK_FALSE(orbit.closed);
  CHECK(orbit.cap_used == 6);
  REQUIRE(orbit.points.size() == 1);
  CHECK(orbit.diameter == 0.0);
  CHECK(distance(orbit.points[0], mu) < 1e-12);
}

TEST_CASE("an infinite rotation group still has a singleton identity orbit") {
  auto pair = layer_decomposition(make_heisenberg(), diag({1, 1, 2}));
  GeneratedGroup group{&pair,
                       {graded_affine(pair, VecQ(3, Rational(0)),
                                      rotation35())}};
  StructureField field = [](const VecQ &) { return SpdPoint::identity(2); };
  VecQ x{rat(1, 3), rat(0), rat(2)};
  OrbitResult orbit = orbit_structure(group, field, x, 5);
  CHECK_FALSE(orbit.closed);
  REQUIRE(orbit.points.size() == 1);

  ConformalPoint inv = invariant_structure(group, field, x, 5);
  CHECK(distance(inv.value, SpdPoint::identity(2)) < 1e-10);
}

TEST_CASE("invariant structures are fixed by every group element") {
  auto pair = layer_decomposition(make_heisenberg(), diag({1, 1, 2}));
  GradedAffine rot = graded_affine(pair, VecQ(3, Rational(0)), quarter_turn());
  GeneratedGroup group{&pair, {rot}};
  SpdPoint mu = spd2(2.0, 0.4, 0.6);
  StructureField field = [&](const VecQ &) { return mu; };
  VecQ x{rat(1), rat(-1), rat(2)};
  ConformalPoint inv = invariant_structure(group, field, x, 6, 1e-10);
  CHECK(distance(pullback(pair, rot, inv.value), inv.value) < 1e-9);

  GradedAffine rot2 = compose(pair, rot, rot);
  CHECK(distance(pullback(pair, rot2, inv.value), inv.value) < 1e-9);
}

TEST_CASE("invariant structures transform under conjugation of the group") {
  auto pair = layer_decomposition(make_heisenberg(), diag({1, 1, 2}));
  GradedAffine rot = graded_affine(pair, VecQ(3, Rational(0)), quarter_turn());
  GradedAffine f =
      graded_affine(pair, {rat(0), rat(0), rat(1, 3)}, shear());
  GradedAffine f_inv = invert(pair, f);

  GeneratedGroup base{&pair, {rot}};
  GeneratedGroup moved{&pair, {conjugate(pair, f, rot)}};

  SpdPoint mu = spd2(1.8, 0.3, 0.7);
  StructureField field = [&](const VecQ &) { return mu; };
  SpdPoint mu_moved = pullback(pair, f_inv, mu);
  StructureField field_moved = [&](const VecQ &) { return mu_moved; };

  VecQ x{rat(1), rat(1, 2), rat(0)};
  ConformalPoint inv_base = invariant_structure(base, field, x, 6, 1e-10);
  ConformalPoint inv_moved =
      invariant_structure(moved, field_moved, apply(pair, f, x), 6, 1e-10);
  CHECK(distance(pullback(pair, f_inv, inv_base.value), inv_moved.value) <
        1e-9);
}

TEST_CASE("orbit growth is reported as instability") {
  auto pair = layer_decomposition(make_heisenberg(), diag({1, 1, 2}));
  GeneratedGroup group{&pair,
                       {graded_affine(pair, VecQ(3, Rational(0)),
                                      heis_auto(2, 0, 0, rat(1, 2)))}};
  StructureField field = [](const VecQ &) { return SpdPoint::identity(2); };
  CHECK_THROWS_AS(
      invariant_structure(group, field, VecQ(3, Rational(0)), 4, 1e-10),
      OrbitNotStable);
}

TEST_CASE("blowup of an isometric element keeps dilatation one") {
  auto pair = layer_decomposition(make_heisenberg(), diag({1, 1, 2}));
  DInnerProduct ip(pair, MatQ::identity(3));
  GradedAffine g = graded_affine(pair, {rat(1), rat(0), rat(0)}, rotation35());
  std::vector<GradedAffine> h(4, affine_identity(pair));
  std::vector<Rational> scales{rat(1), rat(2), rat(4), rat(8)};
  BlowupReport report =
      blowup_demo(pair, ip, h, scales, g, {VecQ(3, Rational(0))});
  REQUIRE(report.steps.size() == 4);
  for (const BlowupStep &step : report.steps)
    CHECK(step.dilatation_value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report.limit_dilatation == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("blowup of a shear conjugate matches the closed form") {
  auto pair = layer_decomposition(make_heisenberg(), diag({1, 1, 2}));
  DInnerProduct ip(pair, MatQ::identity(3));
  GradedAffine f = graded_affine(pair, VecQ(3, Rational(0)), shear());
  GradedAffine g0 = graded_affine(pair, VecQ(3, Rational(0)), rotation35());
  GradedAffine g = conjugate(pair, f, g0);

  std::vector<GradedAffine> h;
  GradedAffine rot = graded_affine(pair, VecQ(3, Rational(0)), quarter_turn());
  GradedAffine word = affine_identity(pair);
  for (int j = 0; j < 3; ++j) {
    word = compose(pair, word, rot);
    h.push_back(conjugate(pair, f, word));
  }
  std::vector<Rational> scales{rat(1, 2), rat(3), rat(7)};
  BlowupReport report =
      blowup_demo(pair, ip, h, scales, g, {VecQ(3, Rational(0))});

  Eigen::Matrix2d hs, rg, rq;
  hs << 1, 1, 0, 1;
  rg << 0.6, -0.8, 0.8, 0.6;
  rq << 0, -1, 1, 0;
  Eigen::Matrix2d w = Eigen::Matrix2d::Identity();
  REQUIRE(report.steps.size() == 3);
  for (int j = 0; j < 3; ++j) {
    w = w * rq;
    Eigen::Matrix2d m =
        hs * w * rg * w.inverse() * hs.inverse();
    CHECK(report.steps[j].dilatation_value ==
          doctest::Approx(svd_ratio(m)).epsilon(1e-10));
    CHECK(report.steps[j].dilatation_value > 1.1);
  }

  std::vector<Rational> rescaled{rat(5), rat(30), rat(70)};
  BlowupReport again =
      blowup_demo(pair, ip, h, rescaled, g, {VecQ(3, Rational(0))});
  for (int j = 0; j < 3; ++j)
    CHECK(again.steps[j].dilatation_value ==
          doctest::Approx(report.steps[j].dilatation_value).epsilon(1e-11));

  CHECK_THROWS_AS(blowup_demo(pair, ip, h, {rat(1)}, g, {}), InputError);
}
