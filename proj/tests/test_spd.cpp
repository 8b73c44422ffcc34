#include "doctest.h"

#include <cmath>
#include <vector>

#include "nilgeo/errors.hpp"
#include "nilgeo/sampling.hpp"
#include "nilgeo/spd.hpp"
#include "spd_oracle.hpp"

using namespace nilgeo;

namespace {

Eigen::Matrix2d rotation(double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

SpdPoint chart_point(double a, double b) {
  return SpdPoint(traceless_exp(a, b));
}

std::vector<SpdPoint> seeded_set(Rng &rng, int count) {
  std::vector<SpdPoint> pts;
  for (int i = 0; i < count; ++i)
    pts.push_back(chart_point(rng.real(-1.2, 1.2), rng.real(-1.2, 1.2)));
  return pts;
}

double max_abs_diff(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
  return (a - b).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("spd point validation and determinant normalization") {
  Eigen::MatrixXd d(2, 2);
  d << 4, 0, 0, 1;
  SpdPoint p(d);
  CHECK(p.matrix()(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(p.matrix()(1, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p.matrix().determinant() == doctest::Approx(1.0).epsilon(1e-13));

  Eigen::MatrixXd skew(2, 2);
  skew << 1, 0.1, 0, 1;
  CHECK_THROWS_AS(SpdPoint{skew}, InputError);

  Eigen::MatrixXd indef(2, 2);
  indef << 1, 0, 0, -1;
  CHECK_THROWS_AS(SpdPoint{indef}, InputError);
}

TEST_CASE("gl action is a group action and fixes nothing it should not") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd m1(2, 2), m2(2, 2);
    m1 << 1 + rng.real(-0.4, 0.4), rng.real(-0.4, 0.4), rng.real(-0.4, 0.4),
        1 + rng.real(-0.4, 0.4);
    m2 << 1 + rng.real(-0.4, 0.4), rng.real(-0.4, 0.4), rng.real(-0.4, 0.4),
        1 + rng.real(-0.4, 0.4);
    SpdPoint s = chart_point(rng.real(-1, 1), rng.real(-1, 1));
    SpdPoint lhs = act(m1 * m2, s);
    SpdPoint rhs = act(m1, act(m2, s));
    CHECK(max_abs_diff(lhs.matrix(), rhs.matrix()) < 1e-12);
  }
  SpdPoint id = SpdPoint::identity(2);
  CHECK(max_abs_diff(act(rotation(0.7), id).matrix(), id.matrix()) < 1e-14);

  Eigen::MatrixXd sing(2, 2);
  sing << 1, 1, 1, 1;
  CHECK_THROWS_AS(act(sing, id), Singular);
}

TEST_CASE("distance values, symmetry, and invariance") {
  SpdPoint id = SpdPoint::identity(2);
  Eigen::MatrixXd d(2, 2);
  d << std::exp(1.0), 0, 0, std::exp(-1.0);
  SpdPoint p(d);
  CHECK(distance(id, p) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    SpdPoint x = chart_point(rng.real(-1, 1), rng.real(-1, 1));
    SpdPoint y = chart_point(rng.real(-1, 1), rng.real(-1, 1));
    SpdPoint z = chart_point(rng.real(-1, 1), rng.real(-1, 1));
    double dxy = distance(x, y);
    CHECK(distance(y, x) == doctest::Approx(dxy).epsilon(1e-11));
    CHECK(distance(x, z) <= dxy + distance(y, z) + 1e-11);

    Eigen::MatrixXd a(2, 2);
    a << 1 + rng.real(-0.5, 0.5), rng.real(-0.5, 0.5), rng.real(-0.5, 0.5),
        -1 + rng.real(-0.5, 0.5);
    if (std::abs(a.determinant()) < 0.2)
      continue;
    CHECK(distance(act(a, x), act(a, y)) == doctest::Approx(dxy).epsilon(1e-10));
  }
}

TEST_CASE("geodesics have proportional arclength") {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    SpdPoint a = chart_point(rng.real(-1, 1), rng.real(-1, 1));
    SpdPoint b = chart_point(rng.real(-1, 1), rng.real(-1, 1));
    double dab = distance(a, b);
    CHECK(max_abs_diff(geodesic(a, b, 0.0).matrix(), a.matrix()) < 1e-13);
    CHECK(max_abs_diff(geodesic(a, b, 1.0).matrix(), b.matrix()) < 1e-12);
    for (double t : {0.25, 0.5, 0.75}) {
      SpdPoint g = geodesic(a, b, t);
      CHECK(distance(a, g) == doctest::Approx(t * dab).epsilon(1e-10));
      CHECK(distance(g, b) == doctest::Approx((1 - t) * dab).epsilon(1e-10));
    }
  }
}

TEST_CASE("circumcenter handles empty, singleton, and pair inputs") {
  CHECK_THROWS_AS(circumcenter({}), EmptyInput);

  SpdPoint p = chart_point(0.3, -0.2);
  CircumcenterResult one = circumcenter({p});
  CHECK(max_abs_diff(one.center.matrix(), p.matrix()) == 0);
  CHECK(one.radius == 0);

  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    SpdPoint a = chart_point(rng.real(-1, 1), rng.real(-1, 1));
    SpdPoint b = chart_point(rng.real(-1, 1), rng.real(-1, 1));
    CircumcenterResult two = circumcenter({a, b});
    SpdPoint mid = geodesic(a, b, 0.5);
    CHECK(max_abs_diff(two.center.matrix(), mid.matrix()) < 1e-12);
    CHECK(two.radius == doctest::Approx(0.5 * distance(a, b)).epsilon(1e-12));
    CHECK(distance(two.center, a) ==
          doctest::Approx(distance(two.center, b)).epsilon(1e-10));
  }
}

TEST_CASE("circumcenter of a rotation-symmetric triple is the identity") {
  Eigen::MatrixXd d(2, 2);
  d << std::exp(1.0), 0, 0, std::exp(-1.0);
  SpdPoint p(d);
  std::vector<SpdPoint> pts;
  for (int k = 0; k < 3; ++k) {
    Eigen::Matrix2d r = rotation(k * M_PI / 3.0);
    pts.push_back(SpdPoint(r * p.matrix() * r.transpose()));
  }
  CircumcenterResult got = circumcenter(pts);
  CHECK(max_abs_diff(got.center.matrix(), Eigen::MatrixXd::Identity(2, 2)) <
        1e-8);
  CHECK(got.radius == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  for (const SpdPoint &q : pts)
    CHECK(distance(got.center, q) == doctest::Approx(got.radius).epsilon(1e-8));
}

TEST_CASE("circumcenter uses the farthest-pair midpoint when it covers") {
  std::vector<SpdPoint> pts = {chart_point(2, 0), chart_point(-2, 0),
                               chart_point(0.5, 0.5), chart_point(-0.3, 0.8)};
  CircumcenterResult got = circumcenter(pts);
  CHECK(got.iterations == 0);
  CHECK(max_abs_diff(got.center.matrix(), Eigen::MatrixXd::Identity(2, 2)) <
        1e-12);
  CHECK(got.radius ==
        doctest::Approx(0.5 * distance(pts[0], pts[1])).epsilon(1e-12));
}

TEST_CASE("circumcenter matches the dense grid oracle") {
  Rng rng(42);
  for (int count : {3, 4, 5, 6}) {
    std::vector<SpdPoint> pts = seeded_set(rng, count);
    CircumcenterResult got = circumcenter(pts);
    GridOracle want = grid_circumcenter_2x2(pts);
    CHECK(std::abs(got.radius - want.value) < 1e-6);
    CHECK(distance(got.center, want.center) < 1e-4);
  }
}

TEST_CASE("circumcenter is equivariant under the isometric action") {
  Rng rng(23);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<SpdPoint> pts = seeded_set(rng, 4 + trial % 3);
    Eigen::MatrixXd a(2, 2);
    a << 1 + rng.real(-0.5, 0.5), rng.real(-0.5, 0.5), rng.real(-0.5, 0.5),
        1 + rng.real(-0.5, 0.5);
    if (std::abs(a.determinant()) < 0.3)
      continue;
    std::vector<SpdPoint> moved;
    for (const SpdPoint &p : pts)
      moved.push_back(act(a, p));
    CircumcenterResult direct = circumcenter(moved);
    CircumcenterResult pushed = circumcenter(pts);
    CHECK(distance(direct.center, act(a, pushed.center)) < 1e-8);
    CHECK(std::abs(direct.radius - pushed.radius) < 1e-9);
  }
}

TEST_CASE("circumcenter works for three by three matrices") {
  Rng rng(29);
  std::vector<SpdPoint> pts;
  for (int i = 0; i < 3; ++i) {
    Eigen::MatrixXd x(3, 3);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c <= r; ++c) {
        double v = (r == c) ? 0.8 * rng.real(-1, 1) : 0.4 * rng.real(-1, 1);
        x(r, c) = v;
        x(c, r) = v;
      }
    x = x - (x.trace() / 3.0) * Eigen::MatrixXd::Identity(3, 3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
    pts.push_back(SpdPoint(es.eigenvectors() *
                           es.eigenvalues().array().exp().matrix().asDiagonal() *
                           es.eigenvectors().transpose()));
  }
  CircumcenterResult got = circumcenter(pts);
  double r0 = distance(got.center, pts[0]);
  CHECK(got.radius >= r0 - 1e-12);
  for (const SpdPoint &p : pts)
    CHECK(distance(got.center, p) <= got.radius + 1e-12);
  double best_pair = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      best_pair = std::max(best_pair, distance(pts[i], pts[j]));
  CHECK(got.radius >= 0.5 * best_pair - 1e-9);
  CHECK(got.radius <= best_pair + 1e-9);
}

TEST_CASE("adding a point inside the ball keeps the center") {
  Rng rng(37);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<SpdPoint> pts = seeded_set(rng, 4);
    CircumcenterResult before = circumcenter(pts);
    pts.push_back(geodesic(before.center, pts[0], 0.4));
    CircumcenterResult after = circumcenter(pts);
    CHECK(distance(before.center, after.center) < 1e-9);
    CHECK(std::abs(before.radius - after.radius) < 1e-9);
  }
}

TEST_CASE("triangle inequality holds on many seeded triples") {
  Rng rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    SpdPoint x = chart_point(rng.real(-1.5, 1.5), rng.real(-1.5, 1.5));
    SpdPoint y = chart_point(rng.real(-1.5, 1.5), rng.real(-1.5, 1.5));
    SpdPoint z = chart_point(rng.real(-1.5, 1.5), rng.real(-1.5, 1.5));
    REQUIRE(distance(x, z) <= distance(x, y) + distance(y, z) + 1e-10);
  }
}

TEST_CASE("dilatation ratios and the displacement bound") {
  Eigen::MatrixXd d(2, 2);
  d << 3, 0, 0, 0.5;
  CHECK(dilatation(d) == doctest::Approx(6.0).epsilon(1e-13));
  CHECK(dilatation(rotation(1.1)) == doctest::Approx(1.0).epsilon(1e-13));
  Eigen::MatrixXd half(2, 2);
  half << 2, 0, 0, 0.5;
  CHECK(dilatation(half) == doctest::Approx(4.0).epsilon(1e-13));

  Eigen::MatrixXd a(2, 2);
  a << 0, 2, 1, 0;
  Eigen::MatrixXd gram(2, 2);
  gram << 4, 0, 0, 1;
  CHECK(dilatation(a) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(dilatation(a, gram) == doctest::Approx(8.0).epsilon(1e-12));

  Rng rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::MatrixXd m(2, 2), w(2, 2);
    m << 1 + rng.real(-0.8, 0.8), rng.real(-0.8, 0.8), rng.real(-0.8, 0.8),
        1 + rng.real(-0.8, 0.8);
    w << 1 + rng.real(-0.8, 0.8), rng.real(-0.8, 0.8), rng.real(-0.8, 0.8),
        1 + rng.real(-0.8, 0.8);
    if (std::abs(m.determinant()) < 0.05 || std::abs(w.determinant()) < 0.05)
      continue;
    REQUIRE(bound_check(m));
    REQUIRE(dilatation(m * w) <= dilatation(m) * dilatation(w) * (1 + 1e-12));
  }
  CHECK(bound_check(d));
}
