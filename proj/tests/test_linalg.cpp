#include "doctest.h"

#include "nilgeo/linalg.hpp"
#include "nilgeo/quadfield.hpp"

using namespace nilgeo;

TEST_CASE("rref, rank, kernel over Q") {
  MatQ m = from_rows<Rational>({{rat(1), rat(2), rat(3)},
                                {rat(2), rat(4), rat(6)},
                                {rat(1), rat(0), rat(1)}});
  CHECK(rank(m) == 2);
  MatQ ker = kernel(m);
  CHECK(ker.rows == 1);
  // kernel vector satisfies m x = 0
  VecQ x = ker.row(0);
  for (int i = 0; i < m.rows; ++i) {
    Rational acc(0);
    for (int j = 0; j < m.cols; ++j)
      acc += m(i, j) * x[j];
    CHECK(acc == 0);
  }
}

TEST_CASE("inverse and determinant") {
  MatQ m = from_rows<Rational>({{rat(2), rat(1)}, {rat(7), rat(4)}});
  CHECK(det(m) == rat(1));
  MatQ inv = inverse(m);
  CHECK(m * inv == MatQ::identity(2));
  MatQ sing = from_rows<Rational>({{rat(1), rat(2)}, {rat(2), rat(4)}});
  CHECK(det(sing) == 0);
  CHECK_THROWS_AS(inverse(sing), Singular);
}

TEST_CASE("subspace canonical equality, sum, intersection") {
  auto u = SubspaceQ::span_rows({{rat(1), rat(1), rat(0)}, {rat(0), rat(0), rat(1)}});
  auto v = SubspaceQ::span_rows({{rat(2), rat(2), rat(2)}, {rat(0), rat(0), rat(-3)}});
  CHECK(u == v);
  auto w = SubspaceQ::span_rows({{rat(1), rat(0), rat(0)}});
  auto s = u + w;
  CHECK(s.dim() == 3);
  auto i = intersect(u, SubspaceQ::span_rows({{rat(0), rat(0), rat(2)}}));
  CHECK(i.dim() == 1);
  CHECK(i.contains(VecQ{rat(0), rat(0), rat(5)}));
  CHECK(u.contains(VecQ{rat(3), rat(3), rat(7)}));
  CHECK_FALSE(u.contains(VecQ{rat(1), rat(0), rat(0)}));
}

TEST_CASE("coordinates within a subspace") {
  auto u = SubspaceQ::span_rows({{rat(1), rat(2), rat(0)}, {rat(0), rat(0), rat(1)}});
  VecQ v{rat(3), rat(6), rat(-2)};
  VecQ c = u.coordinates(v);
  REQUIRE(c.size() == 2);
  CHECK(c[0] == rat(3));
  CHECK(c[1] == rat(-2));
  CHECK_THROWS(u.coordinates(VecQ{rat(1), rat(0), rat(0)}));
}

TEST_CASE("quadratic field arithmetic") {
  QuadExt s2(rat(0), rat(1), rat(0), rat(0));
  QuadExt s3(rat(0), rat(0), rat(1), rat(0));
  CHECK(s2 * s2 == QuadExt(rat(2)));
  CHECK(s3 * s3 == QuadExt(rat(3)));
  CHECK(s2 * s3 == QuadExt(rat(0), rat(0), rat(0), rat(1)));
  QuadExt x(rat(1), rat(1), rat(-2), rat(1, 3));
  CHECK(x * x.inverse() == QuadExt(rat(1)));
  CHECK(sign(s2 - QuadExt(rat(1))) == 1);
  CHECK(sign(s2 - QuadExt(rat(3, 2))) == -1);
  CHECK(sign(QuadExt(rat(0))) == 0);
  // sqrt2 + sqrt3 - sqrt6 + something tiny keeps an exact sign
  QuadExt tight = s2 + s3 - QuadExt(rat(0), rat(0), rat(0), rat(1)) -
                  QuadExt(rat(7, 10));
  CHECK(sign(tight) == sign(QuadExt(rat(0)) + tight)); // consistency
}

TEST_CASE("field square roots") {
  auto r = sqrt_in_field(QuadExt(rat(1, 3)));
  REQUIRE(r.has_value());
  CHECK(*r * *r == QuadExt(rat(1, 3)));
  CHECK(r->c == rat(1, 3)); // 1/sqrt3 = (1/3) sqrt3
  auto three = sqrt_in_field(QuadExt(rat(3)));
  REQUIRE(three.has_value());
  CHECK(three->c == rat(1));
  auto q = sqrt_in_field(QuadExt(rat(9, 4)));
  REQUIRE(q.has_value());
  CHECK(*q == QuadExt(rat(3, 2)));
  CHECK_FALSE(sqrt_in_field(QuadExt(rat(5))).has_value());
  CHECK_FALSE(sqrt_in_field(QuadExt(rat(-1))).has_value());
  // 5 + 2*sqrt6 = (sqrt2 + sqrt3)^2
  QuadExt y(rat(5), rat(0), rat(0), rat(2));
  auto ry = sqrt_in_field(y);
  REQUIRE(ry.has_value());
  CHECK(*ry * *ry == y);
}

TEST_CASE("rref over the quadratic field") {
  using MatF = Mat<QuadExt>;
  QuadExt s3(rat(0), rat(0), rat(1), rat(0));
  MatF m(2, 2);
  m(0, 0) = s3;
  m(0, 1) = QuadExt(rat(3));
  m(1, 0) = QuadExt(rat(1));
  m(1, 1) = s3;
  CHECK(rank(m) == 1); // second row is s3^{-1} times the first
  Mat<QuadExt> ker = kernel(m);
  CHECK(ker.rows == 1);
}
