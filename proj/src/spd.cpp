#include "nilgeo/spd.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Eigenvalues>

#include "nilgeo/errors.hpp"

namespace nilgeo {

namespace {

// Eigenvalues are clamped at 1e-300 so roundoff on nearly singular inputs
// cannot feed nonpositive values to sqrt or log.
template <class F>
Eigen::MatrixXd sym_fun(const Eigen::MatrixXd &s, F f) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  Eigen::VectorXd lam = es.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    lam[i] = f(std::max(lam[i], 1e-300));
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd sym_sqrt(const Eigen::MatrixXd &s) {
  return sym_fun(s, [](double x) { return std::sqrt(x); });
}

Eigen::MatrixXd sym_inv_sqrt(const Eigen::MatrixXd &s) {
  return sym_fun(s, [](double x) { return 1.0 / std::sqrt(x); });
}

Eigen::MatrixXd sym_log(const Eigen::MatrixXd &s) {
  return sym_fun(s, [](double x) { return std::log(x); });
}

Eigen::MatrixXd sym_exp(const Eigen::MatrixXd &s) {
  return sym_fun(s, [](double x) { return std::exp(x); });
}

Eigen::MatrixXd sym_pow(const Eigen::MatrixXd &s, double t) {
  return sym_fun(s, [t](double x) { return std::pow(x, t); });
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd &s) {
  return 0.5 * (s + s.transpose());
}

// logm(S^{-1/2} P S^{-1/2}); its Frobenius norm equals distance(S, P).
Eigen::MatrixXd log_at(const Eigen::MatrixXd &s_inv_sqrt,
                       const Eigen::MatrixXd &p) {
  return sym_log(symmetrized(s_inv_sqrt * p * s_inv_sqrt));
}

struct Smoothed {
  double value = 0;
  double radius = 0;
};

// Orthonormal basis of the trace-free symmetric m x m matrices.
std::vector<Eigen::MatrixXd> traceless_basis(int m) {
  std::vector<Eigen::MatrixXd> basis;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(m, m);
      e(i, j) = inv_sqrt2;
      e(j, i) = inv_sqrt2;
      basis.push_back(e);
    }
  for (int k = 1; k < m; ++k) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(m, m);
    double norm = std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i)
      e(i, i) = 1.0 / norm;
    e(k, k) = -static_cast<double>(k) / norm;
    basis.push_back(e);
  }
  return basis;
}

Eigen::VectorXd coords_of(const Eigen::MatrixXd &v,
                          const std::vector<Eigen::MatrixXd> &basis) {
  Eigen::VectorXd c(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k)
    c[static_cast<Eigen::Index>(k)] = (v.array() * basis[k].array()).sum();
  return c;
}

Eigen::MatrixXd from_coords(const Eigen::VectorXd &c,
                            const std::vector<Eigen::MatrixXd> &basis) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(basis[0].rows(), basis[0].cols());
  for (std::size_t k = 0; k < basis.size(); ++k)
    v += c[static_cast<Eigen::Index>(k)] * basis[k];
  return v;
}

// (1/beta) log sum_i exp(beta d_i^2 / 2), shifted for overflow safety.
Smoothed smoothed_value(const SpdPoint &s, const std::vector<SpdPoint> &pts,
                        double beta) {
  std::vector<double> d2(pts.size());
  double top = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double d = distance(s, pts[i]);
    d2[i] = d * d;
    top = std::max(top, d2[i]);
  }
  double acc = 0;
  for (double v : d2)
    acc += std::exp(0.5 * beta * (v - top));
  Smoothed out;
  out.value = 0.5 * top + std::log(acc) / beta;
  out.radius = std::sqrt(top);
  return out;
}

} // namespace

Eigen::MatrixXd to_eigen(const MatQ &m) {
  Eigen::MatrixXd out(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      out(i, j) = m(i, j).get_d();
  return out;
}

SpdPoint::SpdPoint(Eigen::MatrixXd s) : s_(std::move(s)) {
  if (s_.rows() == 0 || s_.rows() != s_.cols())
    throw InputError("SpdPoint needs a nonempty square matrix");
  double scale = 1.0 + s_.cwiseAbs().maxCoeff();
  double asym = (s_ - s_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    throw InputError("SpdPoint matrix is not symmetric");
  s_ = symmetrized(s_);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s_);
  if (es.eigenvalues().minCoeff() <= 0)
    throw InputError("SpdPoint matrix is not positive definite");
  double logdet = es.eigenvalues().array().log().sum();
  s_ *= std::exp(-logdet / static_cast<double>(s_.rows()));
}

SpdPoint SpdPoint::identity(int m) {
  return SpdPoint(Eigen::MatrixXd::Identity(m, m));
}

SpdPoint act(const Eigen::MatrixXd &M, const SpdPoint &S) {
  if (M.rows() != M.cols() || M.rows() != S.size())
    throw InputError("act: matrix size does not match the point");
  if (std::abs(M.determinant()) < 1e-150)
    throw Singular("act: matrix is not invertible");
  return SpdPoint(symmetrized(M * S.matrix() * M.transpose()));
}

double distance(const SpdPoint &a, const SpdPoint &b) {
  if (a.size() != b.size())
    throw InputError("distance: points live in different spaces");
  Eigen::LLT<Eigen::MatrixXd> llt(a.matrix());
  Eigen::MatrixXd w = llt.matrixL().solve(b.matrix()).transpose();
  w = llt.matrixL().solve(w.eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(w));
  return std::sqrt(es.eigenvalues().array().log().square().sum());
}

SpdPoint geodesic(const SpdPoint &a, const SpdPoint &b, double t) {
  if (a.size() != b.size())
    throw InputError("geodesic: points live in different spaces");
  Eigen::MatrixXd ah = sym_sqrt(a.matrix());
  Eigen::MatrixXd ai = sym_inv_sqrt(a.matrix());
  Eigen::MatrixXd mid = sym_pow(symmetrized(ai * b.matrix() * ai), t);
  return SpdPoint(symmetrized(ah * mid * ah));
}

CircumcenterResult circumcenter(const std::vector<SpdPoint> &points,
                                double tol) {
  if (points.empty())
    throw EmptyInput("circumcenter of an empty set");
  const int n = static_cast<int>(points.size());
  const int m = points[0].size();
  for (const SpdPoint &p : points)
    if (p.size() != points[0].size())
      throw InputError("circumcenter: points live in different spaces");
  if (n == 1)
    return {points[0], 0.0, 0};

  int bi = 0, bj = 1;
  double dmax = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d = distance(points[i], points[j]);
      if (d > dmax) {
        dmax = d;
        bi = i;
        bj = j;
      }
    }
  if (dmax == 0)
    return {points[0], 0.0, 0};

  // If the midpoint of a farthest pair already covers the set it attains the
  // lower bound dmax/2, so it is the exact center.
  SpdPoint mid = geodesic(points[bi], points[bj], 0.5);
  double rmid = 0;
  for (const SpdPoint &p : points)
    rmid = std::max(rmid, distance(mid, p));
  if (n == 2 || rmid <= 0.5 * dmax * (1 + 1e-12) + 1e-15)
    return {mid, rmid, 0};

  constexpr int kMaxIterations = 100000;
  int iterations = 0;
  SpdPoint s = mid;

  // Farthest-point warm start.
  for (int k = 0; k < 150; ++k) {
    int far = 0;
    double dfar = 0;
    for (int i = 0; i < n; ++i) {
      double d = distance(s, points[i]);
      if (d > dfar) {
        dfar = d;
        far = i;
      }
    }
    s = geodesic(s, points[far], 1.0 / (k + 2));
    ++iterations;
  }

  // Annealed smoothing: descend the log-sum-exp surrogate at increasing
  // sharpness. Steps stay intrinsic, so the result is equivariant under the
  // isometric GL(m) action up to roundoff.
  auto anneal = [&](double beta_from, double beta_to, double grad_floor,
                    int level_cap) {
    double step = 1.0;
    for (double beta = beta_from; beta <= beta_to; beta *= 4.0) {
      for (int inner = 0; inner < level_cap; ++inner) {
        if (++iterations > kMaxIterations)
          throw NonConvergent("circumcenter: iteration budget exhausted");
        Eigen::MatrixXd sh = sym_sqrt(s.matrix());
        Eigen::MatrixXd si = sym_inv_sqrt(s.matrix());
        double top = 0;
        std::vector<Eigen::MatrixXd> logs(n);
        std::vector<double> d2(n);
        for (int i = 0; i < n; ++i) {
          logs[i] = log_at(si, points[i].matrix());
          d2[i] = logs[i].squaredNorm();
          top = std::max(top, d2[i]);
        }
        double wsum = 0;
        Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(s.size(), s.size());
        for (int i = 0; i < n; ++i) {
          double w = std::exp(0.5 * beta * (d2[i] - top));
          wsum += w;
          grad -= w * logs[i];
        }
        grad /= wsum;
        double gnorm = grad.norm();
        if (gnorm <= std::max(grad_floor, 0.01 / beta))
          break;
        double base_value = 0.5 * top + std::log(wsum) / beta;
        bool moved = false;
        for (double t = step; t > 1e-18; t *= 0.5) {
          SpdPoint cand(symmetrized(sh * sym_exp(-t * grad) * sh));
          if (smoothed_value(cand, points, beta).value <=
              base_value - 0.25 * t * gnorm * gnorm) {
            s = cand;
            step = 2.0 * t;
            moved = true;
            break;
          }
        }
        if (!moved)
          break;
      }
      step = std::min(step, 1.0) * 0.25;
    }
  };
  anneal(4.0, 1.1e8, 1e-9, 300);

  // The smoothed solution identifies the active points. A Newton iteration
  // on the equal-distance system, combined with descent along its null
  // space, then sharpens the center; positive barycentric weights on the
  // active points certify the global minimum.
  const std::vector<Eigen::MatrixXd> basis = traceless_basis(m);
  const int q = static_cast<int>(basis.size());

  auto polish = [&](std::vector<int> active, SpdPoint start)
      -> std::optional<SpdPoint> {
    const int k = static_cast<int>(active.size());
    if (k < 2)
      return std::nullopt;
    SpdPoint cur = start;
    double tau = 1.0;
    for (int outer = 0; outer < 80; ++outer) {
      if (++iterations > kMaxIterations)
        throw NonConvergent("circumcenter: iteration budget exhausted");
      Eigen::MatrixXd sh = sym_sqrt(cur.matrix());
      Eigen::MatrixXd si = sym_inv_sqrt(cur.matrix());
      std::vector<Eigen::MatrixXd> logs(k);
      std::vector<double> d2(k);
      for (int i = 0; i < k; ++i) {
        logs[i] = log_at(si, points[active[i]].matrix());
        d2[i] = logs[i].squaredNorm();
      }
      Eigen::VectorXd f(k - 1);
      Eigen::MatrixXd jac(k - 1, q);
      for (int i = 1; i < k; ++i) {
        f[i - 1] = d2[i] - d2[0];
        jac.row(i - 1) = -2.0 * coords_of(logs[i] - logs[0], basis);
      }
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac);
      Eigen::VectorXd restore = cod.solve(-f);
      Eigen::MatrixXd mean_grad = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < k; ++i)
        mean_grad -= logs[i] / k;
      Eigen::VectorXd g = coords_of(mean_grad, basis);
      Eigen::VectorXd gnull = g - cod.pseudoInverse() * (jac * g);

      double fmax = *std::max_element(d2.begin(), d2.end());
      if (f.cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + fmax) &&
          gnull.norm() <= 1e-12)
        break;

      Eigen::VectorXd u = restore;
      if (gnull.norm() > 1e-15) {
        double mean0 = 0;
        for (double v : d2)
          mean0 += 0.5 * v / k;
        double slope = gnull.squaredNorm();
        double used = 0;
        for (double t = tau; t > 1e-18; t *= 0.5) {
          Eigen::MatrixXd cand_v = from_coords(
              Eigen::VectorXd(restore - t * gnull), basis);
          SpdPoint cand(symmetrized(sh * sym_exp(cand_v) * sh));
          double mean1 = 0;
          for (int i = 0; i < k; ++i) {
            double d = distance(cand, points[active[i]]);
            mean1 += 0.5 * d * d / k;
          }
          if (mean1 <= mean0 - 0.25 * t * slope) {
            used = t;
            break;
          }
        }
        if (used > 0) {
          u = restore - used * gnull;
          tau = std::min(2.0 * used, 1.0);
        } else {
          tau *= 0.25;
        }
      }
      cur = SpdPoint(symmetrized(sh * sym_exp(from_coords(u, basis)) * sh));
    }

    Eigen::MatrixXd si = sym_inv_sqrt(cur.matrix());
    std::vector<Eigen::MatrixXd> logs(k);
    for (int i = 0; i < k; ++i)
      logs[i] = log_at(si, points[active[i]].matrix());
    Eigen::MatrixXd gram(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        gram(i, j) = (logs[i].array() * logs[j].array()).sum();
    gram.diagonal().array() += 1e-18;
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(k);
    Eigen::VectorXd w = gram.ldlt().solve(ones);
    double wsum = w.sum();
    if (std::abs(wsum) < 1e-300)
      return std::nullopt;
    w /= wsum;
    Eigen::MatrixXd resid = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < k; ++i)
      resid += w[i] * logs[i];
    double rad = distance(cur, points[active[0]]);
    if (w.minCoeff() < -1e-8 || resid.norm() > 1e-7 * (1.0 + rad))
      return std::nullopt;
    for (const SpdPoint &p : points)
      if (distance(cur, p) > rad + std::max(1e-11, 0.05 * tol) * (1.0 + rad))
        return std::nullopt;
    return cur;
  };

  std::vector<double> dists(n);
  double dtop = 0;
  for (int i = 0; i < n; ++i) {
    dists[i] = distance(s, points[i]);
    dtop = std::max(dtop, dists[i]);
  }
  std::optional<SpdPoint> polished;
  for (double gap : {1e-3 * (1.0 + dtop), 1.25e-4 * (1.0 + dtop),
                     8e-3 * (1.0 + dtop)}) {
    std::vector<int> active;
    for (int i = 0; i < n; ++i)
      if (dists[i] >= dtop - gap)
        active.push_back(i);
    polished = polish(active, s);
    if (polished) {
      if (static_cast<int>(active.size()) == 2) {
        SpdPoint pair_mid = geodesic(points[active[0]], points[active[1]], 0.5);
        double rpair = 0;
        for (const SpdPoint &p : points)
          rpair = std::max(rpair, distance(pair_mid, p));
        double dpair = distance(points[active[0]], points[active[1]]);
        if (rpair <= 0.5 * dpair * (1 + 1e-12) + 1e-14)
          polished = pair_mid;
      }
      break;
    }
  }

  if (polished) {
    s = *polished;
  } else {
    anneal(4.4e8, 1.1e13, std::max(1e-13, 0.01 * tol), 2000);
  }

  double r = 0;
  for (const SpdPoint &p : points)
    r = std::max(r, distance(s, p));
  return {s, r, iterations};
}

double dilatation(const Eigen::MatrixXd &A) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  double smin = svd.singularValues().minCoeff();
  if (smin <= 0)
    throw Singular("dilatation of a singular matrix");
  return svd.singularValues().maxCoeff() / smin;
}

double dilatation(const Eigen::MatrixXd &A, const Eigen::MatrixXd &gram) {
  if (gram.rows() != A.rows() || gram.cols() != A.cols())
    throw InputError("dilatation: Gram matrix size mismatch");
  Eigen::MatrixXd gh = sym_sqrt(symmetrized(gram));
  Eigen::MatrixXd gi = sym_inv_sqrt(symmetrized(gram));
  return dilatation(gh * A * gi);
}

bool bound_check(const Eigen::MatrixXd &A) {
  double k = dilatation(A);
  SpdPoint moved = act(A, SpdPoint::identity(static_cast<int>(A.rows())));
  double d = distance(SpdPoint::identity(static_cast<int>(A.rows())), moved);
  return k <= 1.0 + std::expm1(d) + 1e-9 * k;
}

} // namespace nilgeo
