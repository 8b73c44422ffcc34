#include "doctest.h"

#include "nilgeo/bch.hpp"
#include "nilgeo/errors.hpp"
#include "nilgeo/modulus.hpp"
#include "nilgeo/sampling.hpp"

using namespace nilgeo;

namespace {

MatQ diag(const std::vector<Rational> &d) {
  MatQ m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i)
    m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

DiagonalHeintzePair heis_pair() {
  return layer_decomposition(make_heisenberg(), diag({1, 1, 2}));
}

DiagonalHeintzePair plane_pair() {
  return layer_decomposition(make_abelian(2), diag({1, 1}));
}

DiagonalHeintzePair weighted_plane_pair() {
  return layer_decomposition(make_abelian(2), diag({1, 2}));
}

DiagonalHeintzePair two_wings() {
  return layer_decomposition(direct_sum(make_heisenberg(), make_heisenberg()),
                             diag({1, 1, 2, 1, 1, 2}));
}

std::vector<DeltaPoly> zero_table(int n) {
  return std::vector<DeltaPoly>(static_cast<size_t>(n));
}

} // namespace

TEST_CASE("segment family modulus matches the classical plate value") {
  SUBCASE("parallel segments in the Euclidean plane") {
    BoxRing ring =
        make_box_ring(plane_pair(), {0, 1}, {1, 1}, rat(1, 10));
    SegmentModulus m = segment_family_modulus(ring);
    CHECK(m.per_family == rat(20));
    CHECK(m.lower_bound == rat(40));

    BoxRing wider = make_box_ring(plane_pair(), {0, 3}, {1, 1}, rat(1, 7));
    CHECK(segment_family_modulus(wider).per_family == rat(42));
  }

  SUBCASE("vertical segments over the Heisenberg slice") {
    BoxRing ring =
        make_box_ring(heis_pair(), {0, 1, 1}, {1, 1, 1}, rat(1, 10));
    SegmentModulus m = segment_family_modulus(ring);
    CHECK(m.per_family == rat(4000));
    CHECK(m.lower_bound == rat(8000));
  }

  SUBCASE("the slab stretch enters with exponent Q-1") {
    BoxRing ring =
        make_box_ring(heis_pair(), {0, 1, 1}, {2, 1, 1}, rat(1, 10));
    CHECK(segment_family_modulus(ring).per_family == rat(32000));
  }

  SUBCASE("integer weights suffice even without a generating first layer") {
    BoxRing ring =
        make_box_ring(weighted_plane_pair(), {0, 1}, {1, 1}, rat(1, 10));
    SegmentModulus m = segment_family_modulus(ring);
    CHECK(m.per_family == rat(200));
    CHECK(upper_volume_bound(ring, rat(1), {0, 0}) == m.lower_bound);
  }
}

TEST_CASE("segment family modulus scales like the formula") {
  const Rational delta = rat(1, 10);

  SUBCASE("doubling delta divides the value by 2^(Q-1)") {
    BoxRing ring = make_box_ring(heis_pair(), {0, 1, 1}, {1, 1, 1}, delta);
    BoxRing doubled =
        make_box_ring(heis_pair(), {0, 1, 1}, {1, 1, 1}, 2 * delta);
    CHECK(segment_family_modulus(ring).per_family ==
          8 * segment_family_modulus(doubled).per_family);
  }

  SUBCASE("anisotropic rescaling of the whole ring is invisible") {
    BoxRing ring = make_box_ring(heis_pair(), {0, 1, 1}, {1, 1, 1}, delta);
    for (Rational t : {rat(2), rat(3), rat(1, 2)}) {
      BoxRing scaled = make_box_ring(heis_pair(), {0, t * 1, t * t * 1},
                                     {1, 1, 1}, t * delta);
      CHECK(segment_family_modulus(scaled).per_family ==
            segment_family_modulus(ring).per_family);
    }
  }

  SUBCASE("doubling the widths multiplies the bound by 2^(n-1)") {
    BoxRing ring = make_box_ring(heis_pair(), {0, 1, 1}, {1, 1, 1}, delta);
    BoxRing wide = make_box_ring(heis_pair(), {0, 2, 2}, {1, 1, 1}, delta);
    CHECK(segment_family_modulus(wide).lower_bound ==
          4 * segment_family_modulus(ring).lower_bound);
  }
}

TEST_CASE("box rings validate their data") {
  const Rational delta = rat(1, 10);

  CHECK_THROWS_AS(make_box_ring(heis_pair(), {0, 1}, {1, 1, 1}, delta),
                  InputError);
  CHECK_THROWS_AS(make_box_ring(heis_pair(), {0, 1, 1}, {1, 1}, delta),
                  InputError);
  CHECK_THROWS_AS(make_box_ring(heis_pair(), {0, 1, 1}, {1, -1, 1}, delta),
                  InputError);
  CHECK_THROWS_AS(
      make_box_ring(heis_pair(), {rat(1, 2), 1, 1}, {1, 1, 1}, delta),
      InputError);
  CHECK_THROWS_AS(make_box_ring(heis_pair(), {0, -1, 1}, {1, 1, 1}, delta),
                  InputError);
  CHECK_THROWS_AS(make_box_ring(heis_pair(), {0, 1, 1}, {1, 2, 1}, delta),
                  InputError);
  CHECK_THROWS_AS(make_box_ring(heis_pair(), {0, 1, 1}, {1, 1, 1}, rat(0)),
                  InputError);
  CHECK_THROWS_AS(make_box_ring(heis_pair(), {0, 1, 1}, {1, 1, 1}, rat(-1)),
                  InputError);
  CHECK_THROWS_AS(make_box_ring(heis_pair(), {0, 1, 1}, {1, 1, 1}, rat(1)),
                  InputError);

  SUBCASE("the weights must be positive integers aligned with the axes") {
    DiagonalHeintzePair half =
        layer_decomposition(make_abelian(2), diag({rat(1, 2), 1}));
    CHECK_THROWS_AS(make_box_ring(half, {0, 1}, {1, 1}, delta), InputError);
  }

  SUBCASE("a slab axis of weight one must exist") {
    DiagonalHeintzePair deep =
        layer_decomposition(make_abelian(2), diag({2, 3}));
    CHECK_THROWS_AS(make_box_ring(deep, {0, 1}, {1, 1}, delta), InputError);
  }

  SUBCASE("valid rings record the slab and the weights") {
    BoxRing ring =
        make_box_ring(weighted_plane_pair(), {0, 1}, {1, 1}, delta);
    CHECK(ring.slab == 0);
    CHECK(ring.weights == std::vector<int>{1, 2});
  }
}

TEST_CASE("volume bounds close the modulus sandwich exactly") {
  const Rational delta = rat(1, 10);

  SUBCASE("extremal determinant and zero padding reproduce the lower bound") {
    BoxRing ring = make_box_ring(heis_pair(), {0, 1, 1}, {2, 1, 1}, delta);
    const Rational j = rat(16);
    CHECK(upper_volume_bound(ring, j, {0, 0, 0}) ==
          segment_family_modulus(ring).lower_bound);

    BoxRing flat = make_box_ring(plane_pair(), {0, 1}, {3, 2}, delta);
    CHECK(upper_volume_bound(flat, rat(9), {0, 0}) ==
          segment_family_modulus(flat).lower_bound);
  }

  SUBCASE("a smaller determinant gives a strictly smaller upper bound") {
    BoxRing ring = make_box_ring(heis_pair(), {0, 1, 1}, {2, 1, 1}, delta);
    CHECK(upper_volume_bound(ring, rat(1), {0, 0, 0}) <
          segment_family_modulus(ring).lower_bound);
  }

  SUBCASE("doubling the widths multiplies the bound by 2^(n-1)") {
    BoxRing ring = make_box_ring(heis_pair(), {0, 1, 1}, {1, 1, 1}, delta);
    BoxRing wide = make_box_ring(heis_pair(), {0, 2, 2}, {1, 1, 1}, delta);
    CHECK(upper_volume_bound(wide, rat(1), {0, 0, 0}) ==
          4 * upper_volume_bound(ring, rat(1), {0, 0, 0}));
  }

  SUBCASE("the default overload applies the claim padding") {
    BoxRing ring = make_box_ring(heis_pair(), {0, 1, 1}, {1, 1, 1}, delta);
    std::vector<DeltaPoly> table =
        padding_polynomials(ring.pair, ring.lambda);
    std::vector<Rational> pads = {0, table[1].eval(delta),
                                  table[2].eval(delta)};
    CHECK(upper_volume_bound(ring, rat(1)) ==
          upper_volume_bound(ring, rat(1), pads));
    CHECK(upper_volume_bound(ring, rat(1)) >
          upper_volume_bound(ring, rat(1), {0, 0, 0}));
  }

  SUBCASE("the default overload requires a unit box") {
    BoxRing ring = make_box_ring(heis_pair(), {0, 2, 2}, {1, 1, 1}, delta);
    CHECK_THROWS_AS(upper_volume_bound(ring, rat(1)), InputError);
  }

  SUBCASE("padding must cover every coordinate") {
    BoxRing ring = make_box_ring(heis_pair(), {0, 1, 1}, {1, 1, 1}, delta);
    CHECK_THROWS_AS(upper_volume_bound(ring, rat(1), {0, 0}), InputError);
  }
}

TEST_CASE("padding polynomials collapse to the translation bound on abelian "
          "groups") {
  SUBCASE("flat plane") {
    std::vector<DeltaPoly> table =
        padding_polynomials(plane_pair(), {rat(2), rat(5)});
    REQUIRE(table.size() == 2);
    CHECK(table[0].coeff == std::vector<Rational>{0, rat(1, 2)});
    CHECK(table[1].coeff == std::vector<Rational>{0, rat(1, 5)});
  }

  SUBCASE("weighted plane") {
    std::vector<DeltaPoly> table =
        padding_polynomials(weighted_plane_pair(), {rat(2), rat(3)});
    CHECK(table[0].coeff == std::vector<Rational>{0, rat(1, 2)});
    CHECK(table[1].coeff == std::vector<Rational>{0, 0, rat(1, 3)});
  }

  SUBCASE("three flat directions") {
    DiagonalHeintzePair pair =
        layer_decomposition(make_abelian(3), diag({1, 1, 2}));
    std::vector<DeltaPoly> table =
        padding_polynomials(pair, {rat(2), rat(1), rat(3)});
    CHECK(table[0].coeff == std::vector<Rational>{0, rat(1, 2)});
    CHECK(table[1].coeff == std::vector<Rational>{0, rat(1)});
    CHECK(table[2].coeff == std::vector<Rational>{0, 0, rat(1, 3)});
  }
}

TEST_CASE("Heisenberg padding carries the bracket amplitude term") {
  SUBCASE("standard grading") {
    std::vector<DeltaPoly> table =
        padding_polynomials(heis_pair(), {rat(2), rat(1), rat(5)});
    REQUIRE(table.size() == 3);
    CHECK(table[0].coeff == std::vector<Rational>{0, rat(1, 2)});
    CHECK(table[1].coeff == std::vector<Rational>{0, rat(1)});
    CHECK(table[2].coeff ==
          std::vector<Rational>{0, rat(3, 10), rat(1, 5)});
  }

  SUBCASE("stretched grading with weights 1, 2, 3") {
    DiagonalHeintzePair pair =
        layer_decomposition(make_heisenberg(), diag({1, 2, 3}));
    std::vector<DeltaPoly> table =
        padding_polynomials(pair, {rat(1), rat(1), rat(1)});
    CHECK(table[2].coeff ==
          std::vector<Rational>{0, rat(1, 2), rat(1, 2), rat(1)});
  }

  SUBCASE("each wing of a product only hears its own stretches") {
    std::vector<DeltaPoly> table = padding_polynomials(
        two_wings(), {rat(3), rat(1), rat(4), rat(5), rat(2), rat(6)});
    CHECK(table[2].coeff == std::vector<Rational>{0, rat(1, 2), rat(1, 4)});
    CHECK(table[5].coeff ==
          std::vector<Rational>{0, rat(7, 12), rat(1, 6)});
  }

  SUBCASE("no entry has a constant term") {
    for (const DeltaPoly &p : padding_polynomials(
             two_wings(), {rat(3), rat(1), rat(4), rat(5), rat(2), rat(6)})) {
      REQUIRE(!p.coeff.empty());
      CHECK(p.coeff[0] == 0);
    }
  }

  SUBCASE("stretch list must match the dimension and stay positive") {
    CHECK_THROWS_AS(padding_polynomials(heis_pair(), {rat(1), rat(1)}),
                    InputError);
    CHECK_THROWS_AS(
        padding_polynomials(heis_pair(), {rat(1), rat(-1), rat(1)}),
        InputError);
  }
}

TEST_CASE("delta polynomials evaluate with Horner exactness") {
  DeltaPoly p;
  p.coeff = {0, rat(1, 2), rat(1, 3)};
  CHECK(p.eval(rat(1, 10)) == rat(1, 20) + rat(1, 300));
  CHECK(p.eval(rat(0)) == 0);
  CHECK(!p.is_zero());
  CHECK(DeltaPoly{}.is_zero());
  DeltaPoly q;
  q.coeff = {0, 0};
  CHECK(q.is_zero());
}

TEST_CASE("the padded box absorbs every sampled product") {
  SUBCASE("abelian products need exactly the translation padding") {
    BoxRing ring =
        make_box_ring(weighted_plane_pair(), {0, 1}, {1, 1}, rat(1, 10));
    InclusionReport r = inclusion_check(ring, 2000, 42);
    CHECK(r.ok);
    CHECK(r.coordinate == -1);
  }

  SUBCASE("Heisenberg products stay inside the claim padding") {
    BoxRing ring =
        make_box_ring(heis_pair(), {0, 1, 1}, {1, 1, 1}, rat(1, 10));
    CHECK(inclusion_check(ring, 10000, 42).ok);
  }

  SUBCASE("anisotropic stretches keep the inclusion") {
    BoxRing ring =
        make_box_ring(heis_pair(), {0, 1, 1}, {2, 1, 3}, rat(1, 10));
    CHECK(inclusion_check(ring, 10000, 7).ok);
  }

  SUBCASE("different seeds agree on a true inclusion") {
    BoxRing ring =
        make_box_ring(heis_pair(), {0, 1, 1}, {1, 1, 1}, rat(1, 10));
    CHECK(inclusion_check(ring, 3000, 1).ok);
    CHECK(inclusion_check(ring, 3000, 99).ok);
  }
}

TEST_CASE("zero padding lets a bracket term escape the box") {
  BoxRing ring =
      make_box_ring(heis_pair(), {0, 1, 1}, {1, 1, 1}, rat(1, 10));
  InclusionReport r = inclusion_check(ring, 10000, 42, zero_table(3));

  REQUIRE(!r.ok);
  CHECK(r.coordinate == 2);
  CHECK(abs(r.w[2]) > rat(1));

  SUBCASE("the witness reproduces under the group law") {
    CHECK(r.w == bch_multiply(ring.pair.algebra(), r.y, r.z));
    CHECK(r.y[0] == 0);
    CHECK(abs(r.y[1]) <= 1);
    CHECK(abs(r.z[0]) <= rat(1, 10));
    CHECK(abs(r.z[1]) <= rat(1, 10));
    CHECK(abs(r.z[2]) <= rat(1, 100));
  }

  SUBCASE("the full claim padding repairs the same sample stream") {
    CHECK(inclusion_check(ring, 10000, 42).ok);
  }

  SUBCASE("the padding table must cover every coordinate") {
    CHECK_THROWS_AS(inclusion_check(ring, 100, 42, zero_table(2)),
                    InputError);
  }
}

TEST_CASE("rigidity reports the determinant bound") {
  SUBCASE("anisotropic dilations are exactly extremal") {
    RigidityReport r = rigidity_check(heis_pair(), diag({3, 3, 9}));
    CHECK(r.j_det == rat(81));
    CHECK(r.lambda11 == rat(3));
    CHECK(r.bound == rat(81));
    CHECK(r.bound_holds);
    CHECK(r.is_similarity);
  }

  SUBCASE("a pinched diagonal automorphism loses volume") {
    RigidityReport r =
        rigidity_check(heis_pair(), diag({2, rat(1, 2), 1}));
    CHECK(r.j_det == rat(1));
    CHECK(r.bound == rat(16));
    CHECK(r.bound_holds);
    CHECK(!r.is_similarity);
  }

  SUBCASE("identity is a similarity") {
    RigidityReport r = rigidity_check(heis_pair(), diag({1, 1, 1}));
    CHECK(r.j_det == rat(1));
    CHECK(r.is_similarity);
  }

  SUBCASE("products dilate wing by wing") {
    RigidityReport r =
        rigidity_check(two_wings(), diag({2, 2, 4, 2, 2, 4}));
    CHECK(r.j_det == rat(256));
    CHECK(r.is_similarity);

    RigidityReport s =
        rigidity_check(two_wings(), diag({2, 1, 2, 1, 2, 2}));
    CHECK(s.j_det == rat(16));
    CHECK(s.bound == rat(256));
    CHECK(s.bound_holds);
    CHECK(!s.is_similarity);
  }

  SUBCASE("malformed maps are rejected") {
    MatQ shear = diag({1, 1, 1});
    shear(0, 1) = 1;
    CHECK_THROWS_AS(rigidity_check(heis_pair(), shear), NotDiagonalForm);
    CHECK_THROWS_AS(rigidity_check(heis_pair(), diag({1, 0, 1})),
                    NotDiagonalForm);
    CHECK_THROWS_AS(rigidity_check(heis_pair(), diag({2, 1, 1})),
                    NotDiagonalForm);
    CHECK_THROWS_AS(rigidity_check(heis_pair(), diag({1, 1})),
                    NotDiagonalForm);
  }

  SUBCASE("the bound needs a bracket-generated first layer") {
    CHECK_THROWS_AS(rigidity_check(weighted_plane_pair(), diag({2, 8})),
                    InputError);
  }
}

TEST_CASE("sampled diagonal automorphisms never beat the similarity bound") {
  Rng rng(2026);
  for (int trial = 0; trial < 50; ++trial) {
    Rational a = Rational(rng.integer(1, 12), rng.integer(1, 12));
    Rational b = Rational(rng.integer(1, 12), rng.integer(1, 12));
    RigidityReport r = rigidity_check(heis_pair(), diag({a, b, a * b}));
    CHECK(r.bound_holds);
    CHECK(r.is_similarity == (a == b));
  }
  for (int trial = 0; trial < 50; ++trial) {
    Rational a = Rational(rng.integer(1, 9), rng.integer(1, 9));
    Rational b = Rational(rng.integer(1, 9), rng.integer(1, 9));
    Rational c = Rational(rng.integer(1, 9), rng.integer(1, 9));
    Rational d = Rational(rng.integer(1, 9), rng.integer(1, 9));
    RigidityReport r = rigidity_check(
        two_wings(), diag({a, b, a * b, c, d, c * d}));
    CHECK(r.bound_holds);
  }
}
