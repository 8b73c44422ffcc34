#include "doctest.h"

#include "nilgeo/heintze.hpp"

using namespace nilgeo;

namespace {

MatQ diag(const std::vector<Rational> &d) {
  MatQ m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i)
    m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

std::vector<int> chain_dims(const PreservedFlag &flag) {
  std::vector<int> dims;
  for (const SubspaceQ &s : flag.chain)
    dims.push_back(s.dim());
  return dims;
}

} // namespace

TEST_CASE("layer decomposition of the standard Heisenberg grading") {
  auto pair = layer_decomposition(make_heisenberg(), diag({1, 1, 2}));
  REQUIRE(pair.layer_count() == 2);
  CHECK(pair.layering().eigenvalues == std::vector<Rational>{1, 2});
  CHECK(pair.layering().layers[0] ==
        SubspaceQ::span_rows({{1, 0, 0}, {0, 1, 0}}));
  CHECK(pair.layering().layers[1] == SubspaceQ::span_rows({{0, 0, 1}}));
  CHECK(is_carnot_type(pair));
  CHECK(homogeneous_dimension(pair) == 4);
}

TEST_CASE("layer projectors reconstruct the identity") {
  LieAlgebra L = make_abelian(2);
  MatQ D(2, 2);
  D(0, 0) = 2;
  D(0, 1) = 1;
  D(1, 0) = 1;
  D(1, 1) = 2;
  auto pair = layer_decomposition(L, D);
  REQUIRE(pair.layer_count() == 2);
  CHECK(pair.layering().eigenvalues == std::vector<Rational>{1, 3});
  MatQ sum = pair.layer_projector(0) + pair.layer_projector(1);
  CHECK(sum == MatQ::identity(2));
  CHECK(pair.layer_projector(0) * pair.layer_projector(1) == MatQ(2, 2));
  // eigenvector (1,-1) for eigenvalue 1
  VecQ v{rat(1), rat(-1)};
  CHECK(matvec(pair.layer_projector(0), v) == v);
}

TEST_CASE("derivation identity is enforced") {
  CHECK_THROWS_AS(layer_decomposition(make_heisenberg(), diag({1, 1, 1})),
                  NotDerivation);
  CHECK_NOTHROW(layer_decomposition(make_heisenberg(), diag({1, 2, 3})));
}

TEST_CASE("defective and irrational derivations are rejected") {
  LieAlgebra L = make_abelian(2);
  MatQ jordan(2, 2);
  jordan(0, 0) = 1;
  jordan(0, 1) = 1;
  jordan(1, 1) = 1;
  CHECK_THROWS_AS(layer_decomposition(L, jordan), NotDiagonalizable);

  MatQ irr(2, 2);
  irr(0, 0) = 2;
  irr(0, 1) = 1;
  irr(1, 0) = 1;
  irr(1, 1) = 1; // eigenvalues (3 +- sqrt5)/2
  CHECK_THROWS_AS(layer_decomposition(L, irr), NotDiagonalizable);
}

TEST_CASE("nonpositive eigenvalues are rejected") {
  LieAlgebra L = make_abelian(2);
  CHECK_THROWS_AS(layer_decomposition(L, diag({1, -1})),
                  NonPositiveEigenvalue);
  CHECK_THROWS_AS(layer_decomposition(L, diag({1, 0})), NonPositiveEigenvalue);
}

TEST_CASE("carnot type detection") {
  CHECK(is_carnot_type(layer_decomposition(make_heisenberg(), diag({1, 1, 2}))));
  CHECK(is_carnot_type(layer_decomposition(make_heisenberg(), diag({2, 2, 4}))));
  CHECK_FALSE(
      is_carnot_type(layer_decomposition(make_heisenberg(), diag({1, 2, 3}))));
  CHECK_FALSE(
      is_carnot_type(layer_decomposition(make_abelian(3), diag({1, 1, 2}))));
  CHECK(is_carnot_type(layer_decomposition(make_abelian(2), diag({1, 1}))));
  CHECK_THROWS_AS(
      homogeneous_dimension(layer_decomposition(make_abelian(3), diag({1, 1, 2}))),
      InputError);
}

TEST_CASE("carnot pairs have the trivial flag") {
  auto pair = layer_decomposition(make_heisenberg(), diag({1, 1, 2}));
  PreservedFlag flag = preserved_sequence(pair);
  CHECK(chain_dims(flag) == std::vector<int>{0, 3});
  REQUIRE(flag.length() == 1);
  CHECK(flag.steps[0].lambda_min == 1);
  CHECK(flag.steps[0].carnot_layer_count == 2);
}

TEST_CASE("flag of the graded abelian pair") {
  auto pair = layer_decomposition(make_abelian(3), diag({1, 1, 2}));
  PreservedFlag flag = preserved_sequence(pair);
  CHECK(chain_dims(flag) == std::vector<int>{0, 2, 3});
  CHECK(flag.chain[1] == SubspaceQ::span_rows({{1, 0, 0}, {0, 1, 0}}));
  REQUIRE(flag.length() == 2);
  CHECK(flag.steps[0].quotient_eigenvalues == std::vector<Rational>{1});
  CHECK(flag.steps[1].quotient_eigenvalues == std::vector<Rational>{2});
  auto q2 = induced_pair(pair, flag, 2);
  CHECK(q2.algebra().dim() == 1);
  CHECK(q2.derivation()(0, 0) == 2);
  CHECK_THROWS_AS(induced_pair(pair, flag, 3), IndexOutOfRange);
  CHECK_THROWS_AS(induced_pair(pair, flag, 0), IndexOutOfRange);
}

TEST_CASE("flag of Heisenberg with spread eigenvalues") {
  auto pair = layer_decomposition(make_heisenberg(), diag({1, 2, 3}));
  PreservedFlag flag = preserved_sequence(pair);
  CHECK(chain_dims(flag) == std::vector<int>{0, 1, 2, 3});
  CHECK(flag.chain[1] == SubspaceQ::span_rows({{1, 0, 0}}));
  CHECK(flag.chain[2] == SubspaceQ::span_rows({{1, 0, 0}, {0, 0, 1}}));
  REQUIRE(flag.length() == 3);
  std::vector<Rational> lambdas;
  for (const FlagStep &s : flag.steps)
    lambdas.push_back(s.lambda_min);
  CHECK(lambdas == std::vector<Rational>{1, 3, 2});
}

TEST_CASE("refinement recurses through non-carnot quotients") {
  auto pair = layer_decomposition(make_abelian(4), diag({1, 2, 4, 8}));
  PreservedFlag flag = preserved_sequence(pair);
  CHECK(chain_dims(flag) == std::vector<int>{0, 1, 2, 3, 4});
  std::vector<Rational> lambdas;
  for (const FlagStep &s : flag.steps)
    lambdas.push_back(s.lambda_min);
  CHECK(lambdas == std::vector<Rational>{1, 2, 4, 8});
}

TEST_CASE("flag members are ideals in their successors and D-invariant") {
  auto pair = layer_decomposition(make_heisenberg(), diag({1, 2, 3}));
  PreservedFlag flag = preserved_sequence(pair);
  const LieAlgebra &L = pair.algebra();
  for (size_t i = 0; i + 1 < flag.chain.size(); ++i) {
    const SubspaceQ &lo = flag.chain[i], &hi = flag.chain[i + 1];
    CHECK(hi.contains(lo));
    CHECK(L.bracket_span(hi, lo).dim() <= lo.dim());
    for (int r = 0; r < hi.dim(); ++r)
      CHECK(hi.contains(matvec(pair.derivation(), hi.basis().row(r))));
  }
}

TEST_CASE("flag transforms with a change of basis") {
  LieAlgebra L = make_heisenberg();
  MatQ D = diag({1, 2, 3});
  MatQ T(3, 3);
  T(0, 0) = 1;
  T(0, 1) = 1;
  T(1, 1) = 1;
  T(2, 2) = 2;
  T(2, 1) = 3;
  LieAlgebra Lt = change_basis(L, T);
  MatQ Dt = inverse(T) * D * T;
  auto pair = layer_decomposition(L, D);
  auto pair_t = layer_decomposition(Lt, Dt);
  PreservedFlag flag = preserved_sequence(pair);
  PreservedFlag flag_t = preserved_sequence(pair_t);
  REQUIRE(flag.chain.size() == flag_t.chain.size());
  MatQ Tinv = inverse(T);
  for (size_t i = 0; i < flag.chain.size(); ++i) {
    MatQ rows = flag.chain[i].basis();
    MatQ moved(rows.rows, 3);
    for (int r = 0; r < rows.rows; ++r) {
      VecQ v = matvec(Tinv, rows.row(r));
      for (int j = 0; j < 3; ++j)
        moved(r, j) = v[j];
    }
    CHECK(flag_t.chain[i] == SubspaceQ::span(std::move(moved)));
  }
}
