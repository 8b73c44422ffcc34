#pragma once

#include <string>
#include <vector>

#include "nilgeo/linalg.hpp"
#include "nilgeo/rational.hpp"

namespace nilgeo {

struct BracketTerm {
  int k; // 0-based target index
  Rational c;
};

struct BracketSpec {
  int i, j; // 0-based, i < j
  std::vector<BracketTerm> result;
};

// Finite-dimensional nilpotent Lie algebra over Q given by exact structure
// constants. Construction verifies antisymmetry (by input shape), the Jacobi
// identity, and nilpotency; the nilpotency class is cached for use by the
// truncated group product.
class LieAlgebra {
public:
  LieAlgebra(int dim, std::vector<std::string> names,
             const std::vector<BracketSpec> &brackets);

  int dim() const { return n_; }
  const std::vector<std::string> &names() const { return names_; }
  int nilpotency_class() const { return class_; }
  const std::vector<SubspaceQ> &lower_central_series() const { return lcs_; }

  const Rational &c(int i, int j, int k) const {
    return table_[(static_cast<size_t>(i) * n_ + j) * n_ + k];
  }

  VecQ bracket(const VecQ &x, const VecQ &y) const;
  MatQ ad(const VecQ &x) const;

  // [span(S), span(T)] as a subspace.
  SubspaceQ bracket_span(const SubspaceQ &s, const SubspaceQ &t) const;

  bool is_subalgebra(const SubspaceQ &h) const;
  bool is_ideal(const SubspaceQ &h) const;

private:
  int n_;
  std::vector<std::string> names_;
  std::vector<Rational> table_; // [i][j][k] dense
  int class_ = 0;
  std::vector<SubspaceQ> lcs_;

  void check_jacobi() const;
  void compute_lcs();
};

struct ValidationReport {
  bool jacobi_ok = false;
  int nilpotency_class = 0;
  std::vector<int> lower_central_dims; // dims of g = g^1 > g^2 > ... > 0
};

ValidationReport validate(const LieAlgebra &L);

// Smallest subalgebra containing `seed` (closure under brackets).
SubspaceQ generated_subalgebra(const LieAlgebra &L, const SubspaceQ &seed);

// {x : [x, h] subset of h}; requires h to be a subalgebra.
SubspaceQ normalizer(const LieAlgebra &L, const SubspaceQ &h);

struct QuotientResult {
  LieAlgebra algebra; // on the complement coordinates of h
  MatQ projection;    // m x n, ambient coords -> quotient coords
  MatQ lift;          // n x m, quotient coords -> canonical representative
};

// Quotient by an ideal; the complement coordinates (non-pivot columns of the
// echelon basis of h) index the quotient basis.
QuotientResult quotient(const LieAlgebra &L, const SubspaceQ &h);

struct SubalgebraResult {
  LieAlgebra algebra; // structure constants in the echelon basis of h
  MatQ inclusion;     // n x d, h coords -> ambient coords
  SubspaceQ space;
};

SubalgebraResult restrict_to(const LieAlgebra &L, const SubspaceQ &h);

// New algebra whose basis vectors are the columns of T expressed in the old
// basis; returns structure constants in the new basis.
LieAlgebra change_basis(const LieAlgebra &L, const MatQ &T);

// Construction helpers used by bundled data and tests.
LieAlgebra make_heisenberg();
LieAlgebra make_abelian(int n);
LieAlgebra direct_sum(const LieAlgebra &A, const LieAlgebra &B);

} // namespace nilgeo
