#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nilgeo/linalg.hpp"

namespace nilgeo {

Eigen::MatrixXd to_eigen(const MatQ &m);

// A point of SL(m)/SO(m): symmetric positive definite with determinant 1.
// Construction symmetrizes within 1e-12, checks positivity, and renormalizes
// the determinant.
class SpdPoint {
public:
  explicit SpdPoint(Eigen::MatrixXd s);
  static SpdPoint identity(int m);

  int size() const { return static_cast<int>(s_.rows()); }
  const Eigen::MatrixXd &matrix() const { return s_; }

private:
  Eigen::MatrixXd s_;
};

// M[S] = (det M)^{-2/m} M S M^T.
SpdPoint act(const Eigen::MatrixXd &M, const SpdPoint &S);

// sqrt(sum log^2 mu_i) over the eigenvalues mu_i of S1^{-1} S2.
double distance(const SpdPoint &a, const SpdPoint &b);

// S1^{1/2} (S1^{-1/2} S2 S1^{-1/2})^t S1^{1/2}.
SpdPoint geodesic(const SpdPoint &a, const SpdPoint &b, double t);

struct CircumcenterResult {
  SpdPoint center;
  double radius = 0;
  int iterations = 0;
};

// Unique minimizer of S -> max_i d(S, p_i). Farthest-point steps provide a
// warm start; an annealed log-sum-exp smoothing of the squared distances is
// then minimized by Riemannian gradient descent with backtracking.
// Deterministic for a fixed input order.
CircumcenterResult circumcenter(const std::vector<SpdPoint> &points,
                                double tol = 1e-10);

// K(A): ratio of the extreme singular values, optionally with respect to the
// inner product given by an SPD Gram matrix.
double dilatation(const Eigen::MatrixXd &A);
double dilatation(const Eigen::MatrixXd &A, const Eigen::MatrixXd &gram);

// K(A) <= 1 + phi(d(I, A[I])) with phi(t) = e^t - 1.
bool bound_check(const Eigen::MatrixXd &A);

} // namespace nilgeo
